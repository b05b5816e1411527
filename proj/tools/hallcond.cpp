#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hallcond/errors.hpp"
#include "hallcond/parallel.hpp"
#include "run.hpp"

namespace fs = std::filesystem;
using namespace hallcond;
using namespace hallcond::cli;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hall conductance experiments on finite lattices"};
  std::string experiment, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("experiment", experiment,
                 "conductance | equivalence | scan-eps | bloch | pump | verify-algebra | verify-all | weight | lga-invariance")
      ->required();
  app.add_option("--config", config_path, "YAML config file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--threads", threads, "worker threads (default: HALLCOND_THREADS, else 1)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!threads) {
      if (const char* env = std::getenv("HALLCOND_THREADS")) threads = std::stoi(env);
    }
    if (threads) {
      if (*threads < 1) throw ConfigError("--threads: must be positive");
      set_thread_count(*threads);
    }
    RunConfig c = load_config(config_path, parse_experiment(experiment));
    if (seed) c.seed = *seed;

    Outcome o = run_experiment(c);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / c.output.json, make_report(c, o).dump(2) + "\n");
    if (!c.output.csv.empty()) write_file(dir / c.output.csv, to_csv(o.table));
    if (!c.output.svg.empty()) write_file(dir / c.output.svg, to_svg(o.plot));
    Json run = {{"timestamp", utc_now()}, {"config_hash", config_hash(c)}, {"threads", thread_count()}};
    write_file(dir / "run.json", run.dump(2) + "\n");

    for (const auto& [name, ch] : o.checks.items())
      std::cout << (ch["pass"].get<bool>() ? "PASS " : "FAIL ") << name << "  value=" << ch["value"].dump()
                << " tol=" << ch["tol"].dump() << "\n";
    std::cout << experiment_name(c.experiment.kind) << ": " << (o.pass ? "PASS" : "FAIL") << "\n";
    return o.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
