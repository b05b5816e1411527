#include "config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hallcond/errors.hpp"

namespace hallcond::cli {

namespace {

const std::map<Experiment, std::string> kNames = {
    {Experiment::Conductance, "conductance"},   {Experiment::Equivalence, "equivalence"},
    {Experiment::ScanEps, "scan-eps"},          {Experiment::Bloch, "bloch"},
    {Experiment::Pump, "pump"},                 {Experiment::VerifyAlgebra, "verify-algebra"},
    {Experiment::Weight, "weight"},             {Experiment::LgaInvariance, "lga-invariance"}};

std::string where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.is_null() ? std::string() : " (line " + std::to_string(m.line + 1) + ")";
}

[[noreturn]] void fail(const std::string& key, const YAML::Node& at, const std::string& msg) {
  throw ConfigError(key + where(at) + ": " + msg);
}

template <class T>
T as(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, n, "cannot read '" + YAML::Dump(n) + "'");
  }
}

// Walks a mapping, rejecting keys outside `allowed`; returns key -> node.
std::map<std::string, YAML::Node> entries(const YAML::Node& section, const std::string& name,
                                          const std::set<std::string>& allowed) {
  if (!section.IsMap()) fail(name, section, "expected a mapping");
  std::map<std::string, YAML::Node> out;
  for (const auto& kv : section) {
    const std::string key = as<std::string>(kv.first, name);
    const std::string full = name.empty() ? key : name + "." + key;
    if (!allowed.count(key)) fail(full, kv.first, "unknown key");
    if (out.count(key)) fail(full, kv.first, "duplicate key");
    out.emplace(key, kv.second);
  }
  return out;
}

template <class T>
void read(const std::map<std::string, YAML::Node>& e, const std::string& section,
          const std::string& key, T& out) {
  auto it = e.find(key);
  if (it != e.end()) out = as<T>(it->second, section + "." + key);
}

Site read_site(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence() || n.size() != 2) fail(key, n, "expected [i1, i2]");
  return {as<int>(n[0], key), as<int>(n[1], key)};
}

void positive(double v, const std::string& key, const YAML::Node& at) {
  if (!(v > 0)) fail(key, at, "must be positive");
}

ModelSpec read_model(const YAML::Node& node) {
  if (!node) throw ConfigError("model: section missing");
  if (!node.IsMap()) fail("model", node, "expected a mapping");
  const YAML::Node kind = node["kind"];
  if (!kind) fail("model.kind", node, "missing");
  const std::string k = as<std::string>(kind, "model.kind");
  std::set<std::string> allowed = {"kind", "disorder", "seed"};
  if (k == "qwz") allowed.insert("u");
  else if (k == "haldane") allowed.insert({"t1", "t2", "phi", "m"});
  else if (k == "hofstadter") allowed.insert({"p", "q"});
  else if (k == "cluster") allowed.insert({"t", "V", "mu"});
  else if (k != "atomic") fail("model.kind", kind, "unknown model '" + k + "'");
  auto e = entries(node, "model", allowed);
  ModelSpec spec;
  read(e, "model", "disorder", spec.disorder);
  read(e, "model", "seed", spec.seed);
  if (spec.disorder < 0) fail("model.disorder", e["disorder"], "must be >= 0");
  if (k == "atomic") spec.kind = Atomic{};
  if (k == "qwz") {
    QiWuZhang m;
    read(e, "model", "u", m.u);
    spec.kind = m;
  }
  if (k == "haldane") {
    Haldane m;
    read(e, "model", "t1", m.t1);
    read(e, "model", "t2", m.t2);
    read(e, "model", "phi", m.phi);
    read(e, "model", "m", m.m);
    spec.kind = m;
  }
  if (k == "hofstadter") {
    Hofstadter m;
    read(e, "model", "p", m.p);
    read(e, "model", "q", m.q);
    if (m.q <= 0) fail("model.q", e["q"], "must be positive");
    spec.kind = m;
  }
  if (k == "cluster") {
    InteractingCluster m;
    read(e, "model", "t", m.t);
    read(e, "model", "V", m.V);
    read(e, "model", "mu", m.mu);
    spec.kind = m;
  }
  return spec;
}

std::string model_kind(const ModelSpec& s) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Atomic>) return "atomic";
        else if constexpr (std::is_same_v<T, QiWuZhang>) return "qwz";
        else if constexpr (std::is_same_v<T, Haldane>) return "haldane";
        else if constexpr (std::is_same_v<T, Hofstadter>) return "hofstadter";
        else return "cluster";
      },
      s.kind);
}

}  // namespace

std::string experiment_name(Experiment e) { return kNames.at(e); }

Experiment parse_experiment(const std::string& name) {
  if (name == "verify-all") return Experiment::VerifyAlgebra;
  for (const auto& [e, n] : kNames)
    if (n == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

RunConfig parse_config(const std::string& text, Experiment experiment) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ConfigError("syntax error at line " + std::to_string(ex.mark.line + 1) + ": " + ex.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections");
  auto top = entries(root, "", {"model", "lattice", "weight", "experiment", "tolerances", "output", "seed"});

  RunConfig c;
  c.experiment.kind = experiment;
  c.model = read_model(root["model"]);
  if (top.count("seed")) c.seed = as<std::uint64_t>(top["seed"], "seed");

  if (top.count("lattice")) {
    auto e = entries(top["lattice"], "lattice", {"L1", "L2", "boundary", "orbitals", "origin"});
    read(e, "lattice", "L1", c.lattice.L1);
    read(e, "lattice", "L2", c.lattice.L2);
    read(e, "lattice", "orbitals", c.lattice.orbitals);
    if (e.count("boundary")) {
      const std::string b = as<std::string>(e["boundary"], "lattice.boundary");
      if (b == "open") c.lattice.boundary = Boundary::Open;
      else if (b == "torus") c.lattice.boundary = Boundary::Torus;
      else fail("lattice.boundary", e["boundary"], "expected open or torus");
    }
    if (e.count("origin")) c.lattice.origin = read_site(e["origin"], "lattice.origin");
    if (c.lattice.L1 < 1 || c.lattice.L2 < 1) fail("lattice", top["lattice"], "L1 and L2 must be >= 1");
  }

  if (top.count("weight")) {
    auto e = entries(top["weight"], "weight", {"g", "order", "T", "ds", "scale"});
    if (e.count("g") && as<std::string>(e["g"], "weight.g") != "auto") {
      c.weight.g = as<double>(e["g"], "weight.g");
      positive(*c.weight.g, "weight.g", e["g"]);
    }
    read(e, "weight", "order", c.weight.order);
    read(e, "weight", "T", c.weight.T);
    read(e, "weight", "ds", c.weight.ds);
    read(e, "weight", "scale", c.weight.scale);
  }

  if (top.count("experiment")) {
    auto e = entries(top["experiment"], "experiment",
                     {"name", "engine", "min_edge_distance", "chern_grid", "k", "x", "eps", "eps_gap",
                      "radius", "pump_eps", "trials", "instances", "depth"});
    if (e.count("name") && parse_experiment(as<std::string>(e["name"], "experiment.name")) != experiment)
      fail("experiment.name", e["name"], "does not match the experiment on the command line");
    if (e.count("engine")) {
      const std::string s = as<std::string>(e["engine"], "experiment.engine");
      if (s == "free") c.experiment.engine = Engine::Free;
      else if (s == "many-body") c.experiment.engine = Engine::ManyBody;
      else fail("experiment.engine", e["engine"], "expected free or many-body");
    }
    auto& x = c.experiment;
    read(e, "experiment", "min_edge_distance", x.min_edge_distance);
    read(e, "experiment", "chern_grid", x.chern_grid);
    read(e, "experiment", "k", x.k);
    if (e.count("x")) x.x = read_site(e["x"], "experiment.x");
    read(e, "experiment", "eps", x.eps);
    read(e, "experiment", "eps_gap", x.eps_gap);
    read(e, "experiment", "radius", x.radius);
    read(e, "experiment", "pump_eps", x.pump_eps);
    read(e, "experiment", "trials", x.trials);
    read(e, "experiment", "instances", x.instances);
    read(e, "experiment", "depth", x.depth);
  }

  const YAML::Node tol = root["tolerances"];
  if (!tol) throw ConfigError("tolerances.gap: missing (the tolerances section is required)");
  {
    auto e = entries(tol, "tolerances",
                     {"gap", "quantization", "convergence", "equivalence", "linear", "exponent", "floor",
                      "current", "contrast", "pump", "invariance", "gauge"});
    if (!e.count("gap")) fail("tolerances.gap", tol, "missing");
    auto& t = c.tolerances;
    read(e, "tolerances", "gap", t.gap);
    positive(t.gap, "tolerances.gap", e["gap"]);
    read(e, "tolerances", "quantization", t.quantization);
    read(e, "tolerances", "convergence", t.convergence);
    read(e, "tolerances", "equivalence", t.equivalence);
    read(e, "tolerances", "linear", t.linear);
    read(e, "tolerances", "exponent", t.exponent);
    read(e, "tolerances", "floor", t.floor);
    read(e, "tolerances", "current", t.current);
    read(e, "tolerances", "contrast", t.contrast);
    read(e, "tolerances", "pump", t.pump);
    read(e, "tolerances", "invariance", t.invariance);
    read(e, "tolerances", "gauge", t.gauge);
  }

  if (top.count("output")) {
    auto e = entries(top["output"], "output", {"json", "csv", "svg"});
    read(e, "output", "json", c.output.json);
    read(e, "output", "csv", c.output.csv);
    read(e, "output", "svg", c.output.svg);
  }
  return c;
}

RunConfig load_config(const std::string& path, Experiment experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), experiment);
}

Json to_json(const RunConfig& c) {
  Json model;
  model["kind"] = model_kind(c.model);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, QiWuZhang>) model["u"] = m.u;
        if constexpr (std::is_same_v<T, Haldane>) {
          model["t1"] = m.t1;
          model["t2"] = m.t2;
          model["phi"] = m.phi;
          model["m"] = m.m;
        }
        if constexpr (std::is_same_v<T, Hofstadter>) {
          model["p"] = m.p;
          model["q"] = m.q;
        }
        if constexpr (std::is_same_v<T, InteractingCluster>) {
          model["t"] = m.t;
          model["V"] = m.V;
          model["mu"] = m.mu;
        }
      },
      c.model.kind);
  model["disorder"] = c.model.disorder;
  model["seed"] = c.model.seed;

  Json lat;
  lat["L1"] = c.lattice.L1;
  lat["L2"] = c.lattice.L2;
  lat["boundary"] = c.lattice.boundary == Boundary::Open ? "open" : "torus";
  lat["orbitals"] = c.lattice.orbitals;
  if (c.lattice.origin) lat["origin"] = {c.lattice.origin->i1, c.lattice.origin->i2};

  Json w;
  w["g"] = c.weight.g ? Json(*c.weight.g) : Json("auto");
  w["order"] = c.weight.order;
  w["T"] = c.weight.T;
  w["ds"] = c.weight.ds;
  w["scale"] = c.weight.scale;

  const auto& x = c.experiment;
  Json ex;
  ex["name"] = experiment_name(x.kind);
  ex["engine"] = x.engine == Engine::Free ? "free" : "many-body";
  ex["min_edge_distance"] = x.min_edge_distance;
  ex["chern_grid"] = x.chern_grid;
  ex["k"] = x.k;
  if (x.x) ex["x"] = {x.x->i1, x.x->i2};
  ex["eps"] = x.eps;
  ex["eps_gap"] = x.eps_gap;
  ex["radius"] = x.radius;
  ex["pump_eps"] = x.pump_eps;
  ex["trials"] = x.trials;
  ex["instances"] = x.instances;
  ex["depth"] = x.depth;

  const auto& t = c.tolerances;
  Json tol;
  tol["gap"] = t.gap;
  tol["quantization"] = t.quantization;
  tol["convergence"] = t.convergence;
  tol["equivalence"] = t.equivalence;
  tol["linear"] = t.linear;
  tol["exponent"] = t.exponent;
  tol["floor"] = t.floor;
  tol["current"] = t.current;
  tol["contrast"] = t.contrast;
  tol["pump"] = t.pump;
  tol["invariance"] = t.invariance;
  tol["gauge"] = t.gauge;

  Json out;
  out["json"] = c.output.json;
  out["csv"] = c.output.csv;
  out["svg"] = c.output.svg;

  Json j;
  j["model"] = model;
  j["lattice"] = lat;
  j["weight"] = w;
  j["experiment"] = ex;
  j["tolerances"] = tol;
  j["output"] = out;
  j["seed"] = c.seed;
  return j;
}

namespace {

void emit(YAML::Emitter& e, const Json& j) {
  if (j.is_object()) {
    e << YAML::BeginMap;
    for (auto it = j.begin(); it != j.end(); ++it) {
      e << YAML::Key << it.key() << YAML::Value;
      emit(e, it.value());
    }
    e << YAML::EndMap;
  } else if (j.is_array()) {
    e << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : j) emit(e, v);
    e << YAML::EndSeq;
  } else if (j.is_string()) {
    e << YAML::DoubleQuoted << j.get<std::string>();
  } else if (j.is_number_unsigned()) {
    e << j.get<std::uint64_t>();
  } else if (j.is_number_integer()) {
    e << j.get<std::int64_t>();
  } else if (j.is_number_float()) {
    e << j.get<double>();
  } else if (j.is_boolean()) {
    e << j.get<bool>();
  }
}

}  // namespace

std::string to_yaml(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  emit(e, to_json(c));
  return std::string(e.c_str()) + "\n";
}

std::string config_hash(const RunConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hallcond::cli
