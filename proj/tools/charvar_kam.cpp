#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "charvar/goldens.hpp"
#include "charvar/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNoVerdict = 3;

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("CHARVAR_KAM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end == cap || *end != '\0' || v < 1) throw charvar::ConfigError("CHARVAR_KAM_THREADS must be a positive integer");
    n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff normal form and KAM checks for the cat map on SU(2) and SU(3) character varieties"};
  std::string pipeline, s_spec, out = "-", format = "json", golden_path, dump_goldens_path;
  int degree = 3;
  bool require_verdict = false, dump_jets = false;
  app.add_option("--pipeline", pipeline, "su2-brown or su3-main")->check(CLI::IsMember({"su2-brown", "su3-main"}));
  app.add_option("--s", s_spec, "comma-separated s values and/or ranges a:b:step");
  app.add_option("--degree", degree, "jet truncation degree")->check(CLI::Range(3, 8));
  app.add_option("--out", out, "output path, - for stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--golden", golden_path, "golden file to compare the s = 0.249 chart jets against");
  app.add_flag("--require-verdict", require_verdict, "exit 3 unless some s satisfies the KAM criteria");
  app.add_flag("--dump-jets", dump_jets, "include chart jets in the JSON report");
  app.add_option("--dump-goldens", dump_goldens_path, "write the reference constants to PATH and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!dump_goldens_path.empty()) {
      charvar::write_goldens(dump_goldens_path);
      return 0;
    }
    if (pipeline.empty()) throw charvar::ConfigError("--pipeline is required");
    charvar::RunConfig cfg;
    cfg.pipeline = charvar::parse_pipeline(pipeline);
    cfg.s_values = charvar::parse_s_values(s_spec);
    cfg.trunc_degree = degree;
    cfg.dump_jets = dump_jets;
    if (!golden_path.empty()) cfg.golden = charvar::read_goldens(golden_path);
    const unsigned workers = worker_count();

    const auto rows = charvar::run_scan(cfg, workers);
    for (const auto& r : rows)
      if (!r.ok) std::cerr << "warning: " << r.error << '\n';
    emit(format == "csv" ? charvar::make_csv(rows) : charvar::make_report(cfg, rows).dump(2) + "\n", out);

    if (require_verdict && std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.verdict; })) {
      std::cerr << "no s value satisfied the KAM criteria\n";
      return kExitNoVerdict;
    }
    return 0;
  } catch (const charvar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
