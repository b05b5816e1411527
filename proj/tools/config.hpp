#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hallcond/models.hpp"
#include "json.hpp"

namespace hallcond::cli {

using Json = nlohmann::ordered_json;

enum class Experiment { Conductance, Equivalence, ScanEps, Bloch, Pump, VerifyAlgebra, Weight, LgaInvariance };

std::string experiment_name(Experiment e);
// accepts verify-all as another name for verify-algebra; ConfigError otherwise
Experiment parse_experiment(const std::string& name);

enum class Engine { Free, ManyBody };

struct LatticeConfig {
  int L1 = 32, L2 = 32;
  Boundary boundary = Boundary::Open;
  int orbitals = 0;  // 0: what the model needs
  std::optional<Site> origin;
};

struct WeightConfig {
  std::optional<double> g;  // default: the ground-state or bulk gap
  int order = 8;
  double T = 0, ds = 0;
  double scale = 1;  // multiplies W; anything but 1 breaks it on purpose
};

struct ExperimentConfig {
  Experiment kind = Experiment::Conductance;
  Engine engine = Engine::Free;
  int min_edge_distance = 8;
  int chern_grid = 64;
  int k = 6;  // position box or stripe half-width
  std::optional<Site> x;
  std::vector<double> eps;      // absolute values
  std::vector<double> eps_gap;  // multiples of the gap
  int radius = -1;
  double pump_eps = 0.02;
  int trials = 10;
  int instances = 200;
  int depth = 2;
};

struct Tolerances {
  double gap = 0;  // smallest gap accepted; required
  double quantization = 1e-3;
  double convergence = 1e-6;
  double equivalence = 1e-2;
  double linear = 5e-3;
  double exponent = 3;
  double floor = 1e-12;
  double current = 1e-8;
  double contrast = 0.1;
  double pump = 1e-6;
  double invariance = 1e-6;
  double gauge = 1e-10;
};

struct OutputConfig {
  std::string json = "report.json";
  std::string csv = "series.csv";
  std::string svg;  // empty: no plot
};

struct RunConfig {
  ModelSpec model;
  LatticeConfig lattice;
  WeightConfig weight;
  ExperimentConfig experiment;
  Tolerances tolerances;
  OutputConfig output;
  std::uint64_t seed = 1;
};

// Parses the YAML config. Unknown or misplaced keys, missing required keys and
// bad values throw ConfigError naming the key and its line.
RunConfig parse_config(const std::string& text, Experiment experiment);
RunConfig load_config(const std::string& path, Experiment experiment);

// Fully resolved config, defaults filled in; parse_config(to_yaml(c)) == c.
Json to_json(const RunConfig& c);
std::string to_yaml(const RunConfig& c);

// FNV-1a of the compact JSON dump, as 16 hex digits
std::string config_hash(const RunConfig& c);

}  // namespace hallcond::cli
