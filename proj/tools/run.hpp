#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace hallcond::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;  // numbers or strings
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<std::pair<double, double>> points;
  bool log_x = false;
  // optional straight line y = slope x
  std::optional<double> slope;
};

struct Outcome {
  Json results;   // experiment-specific scalars and series
  Json checks;    // name -> {value, tol, pass}
  bool pass = true;
  Table table;
  Plot plot;
};

// Runs one experiment. hallcond::Error propagates to the caller.
Outcome run_experiment(const RunConfig& c);

// Report document: resolved config, provenance, results and checks.
Json make_report(const RunConfig& c, const Outcome& o);

std::string to_csv(const Table& t);
std::string to_svg(const Plot& p);

}  // namespace hallcond::cli
