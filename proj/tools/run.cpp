#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "hallcond/errors.hpp"
#include "hallcond/neass.hpp"
#include "hallcond/verify.hpp"

#ifndef HALLCOND_VERSION
#define HALLCOND_VERSION "unknown"
#endif

namespace hallcond::cli {

namespace {

Json series_json(const std::vector<SeriesPoint>& s) {
  Json out = Json::array();
  for (const auto& p : s) out.push_back({{"radius", p.radius}, {"value", p.value}});
  return out;
}

Json site_json(const Site& s) { return Json::array({s.i1, s.i2}); }

void add_check(Outcome& o, const std::string& name, double value, double tol, bool pass) {
  o.checks[name] = {{"value", value}, {"tol", tol}, {"pass", pass}};
  o.pass = o.pass && pass;
}
void add_check(Outcome& o, const std::string& name, double value, double tol) {
  add_check(o, name, value, tol, value <= tol);
}

Lattice make_lattice(const RunConfig& c) {
  const int need = required_orbitals(c.model);
  const int no = c.lattice.orbitals > 0 ? c.lattice.orbitals : std::max(1, need);
  return Lattice(c.lattice.L1, c.lattice.L2, c.lattice.boundary, no, c.lattice.origin);
}

struct Free {
  Lattice lat;
  Mat h;
  FermiSea sea;
  double gap;
};

Free free_setup(const RunConfig& c) {
  Lattice lat = make_lattice(c);
  Mat h = build_one_body(c.model, lat);
  FermiSea sea = fermi_sea(h, 0.0);
  // edge states close the gap of an open sample; the bulk is what has to be gapped
  const int margin = std::min(c.experiment.min_edge_distance, (std::min(lat.L1(), lat.L2()) - 1) / 2);
  const double gap = lat.boundary() == Boundary::Open ? bulk_gap(sea, lat, margin) : sea.one_body_gap;
  if (gap < c.tolerances.gap) throw GaplessError("bulk gap " + std::to_string(gap) + " below tolerances.gap");
  return {std::move(lat), std::move(h), std::move(sea), gap};
}

struct ManyBody {
  FockSpace space;
  Interaction h;
  GroundState gs;
  WeightFunction w;
};

WeightFunction make_weight(const RunConfig& c, double gap) {
  WeightFunction w = build_weight(c.weight.g.value_or(gap), c.weight.order, c.weight.T, c.weight.ds);
  return c.weight.scale == 1.0 ? w : w.scaled(c.weight.scale);
}

ManyBody mb_setup(const RunConfig& c) {
  FockSpace space(make_lattice(c));
  Interaction h = build_interaction(c.model, space);
  GroundState gs = ground_state(space, h);
  if (gs.gap < c.tolerances.gap)
    throw GaplessError("ground-state gap " + std::to_string(gs.gap) + " below tolerances.gap");
  WeightFunction w = make_weight(c, gs.gap);
  return {std::move(space), std::move(h), std::move(gs), std::move(w)};
}

void series_table(Outcome& o, const std::vector<SeriesPoint>& s, const std::string& what,
                  const std::string& title) {
  o.table.header = {"radius", what};
  for (const auto& p : s) {
    o.table.rows.push_back({p.radius, p.value});
    o.plot.points.emplace_back(p.radius, p.value);
  }
  o.plot.title = title;
  o.plot.xlabel = "radius";
  o.plot.ylabel = what;
}

double two_pi() { return 2 * std::numbers::pi; }

void conductance(const RunConfig& c, Outcome& o) {
  if (c.experiment.engine == Engine::Free) {
    Free f = free_setup(c);
    FreeSwitchOptions opt;
    opt.min_edge_distance = c.experiment.min_edge_distance;
    opt.tol = c.tolerances.convergence;
    ConductanceReport r = hall_conductance_free(f.sea, f.lat, opt);
    o.results = {{"engine", "free"},         {"sigma", r.sigma},       {"two_pi_sigma", two_pi() * r.sigma},
                 {"increment", r.increment}, {"converged", r.converged}, {"origin", site_json(r.origin)},
                 {"full_trace", r.global},   {"bulk_gap", f.gap},
                 {"series", series_json(r.series)}};
    add_check(o, "convergence", r.increment, c.tolerances.convergence);
    ModelSpec clean = c.model;
    clean.disorder = 0;
    if (is_translation_invariant(clean)) {
      ChernResult ch = chern_fhs_report(clean, c.experiment.chern_grid);
      o.results["chern"] = ch.chern;
      o.results["chern_raw"] = ch.raw;
      add_check(o, "quantization", std::abs(two_pi() * r.sigma - ch.chern), c.tolerances.quantization);
    } else {
      o.results["chern"] = nullptr;
    }
    series_table(o, r.series, "sigma", "switch conductance, box sums");
    return;
  }
  ManyBody m = mb_setup(c);
  OdContext ctx = make_od_context(m.space, m.h, m.gs, m.w);
  ConductanceReport r = hall_conductance_mb(ctx);
  o.results = {{"engine", "many-body"}, {"sigma", r.sigma},   {"double_sum", r.double_sum},
               {"origin", site_json(r.origin)}, {"gap", m.gs.gap}, {"weight_g", m.w.g()},
               {"series", series_json(r.series)}};
  add_check(o, "resummation", std::abs(r.global - r.double_sum), 1e-9);
  if (is_quadratic(c.model)) {
    const Lattice& lat = m.space.lattice();
    Mat h = build_one_body(c.model, lat);
    std::vector<SeriesPoint> fw = free_switch_windows(fermi_sea(h, 0.0), m.w, lat, h);
    double worst = 0;
    for (std::size_t i = 0; i < std::min(fw.size(), r.series.size()); ++i)
      worst = std::max(worst, std::abs(fw[i].value - r.series[i].value));
    add_check(o, "free windows", worst, 1e-6);
  }
  series_table(o, r.series, "sigma", "switch conductance, windowed double sums");
}

void equivalence(const RunConfig& c, Outcome& o) {
  const int k = c.experiment.k;
  ConductanceReport sw, pos;
  PositionOptions po;
  po.min_edge_distance = c.experiment.min_edge_distance;
  if (c.experiment.engine == Engine::Free) {
    Free f = free_setup(c);
    FreeSwitchOptions opt;
    opt.min_edge_distance = c.experiment.min_edge_distance;
    opt.tol = c.tolerances.convergence;
    sw = hall_conductance_free(f.sea, f.lat, opt);
    pos = hall_conductivity_position(f.sea, f.lat, k, c.experiment.x.value_or(f.lat.origin()), po);
  } else {
    ManyBody m = mb_setup(c);
    OdContext ctx = make_od_context(m.space, m.h, m.gs, m.w);
    sw = hall_conductance_mb(ctx);
    pos = hall_conductivity_position(ctx, k, c.experiment.x.value_or(m.space.lattice().origin()), po);
  }
  Json inc = Json::array();
  for (std::size_t i = 1; i < pos.series.size(); ++i)
    inc.push_back(std::abs(pos.series[i].value - pos.series[i - 1].value));
  o.results = {{"sigma_switch", sw.sigma}, {"sigma_position", pos.sigma},
               {"k", k},                   {"position_series", series_json(pos.series)},
               {"position_increments", inc}, {"switch_series", series_json(sw.series)}};
  add_check(o, "equivalence", std::abs(sw.sigma - pos.sigma), c.tolerances.equivalence);
  series_table(o, pos.series, "sigma_position", "position conductivity, box averages");
}

void scan_eps(const RunConfig& c, Outcome& o) {
  std::vector<double> eps = c.experiment.eps;
  const bool free = c.experiment.engine == Engine::Free;
  std::optional<Free> f;
  std::optional<ManyBody> m;
  double gap;
  if (free) {
    f = free_setup(c);
    gap = f->gap;
  } else {
    m = mb_setup(c);
    gap = m->gs.gap;
  }
  for (double e : c.experiment.eps_gap) eps.push_back(e * gap);
  if (eps.empty()) throw ConfigError("experiment.eps or experiment.eps_gap: no values to scan");

  ResponseScan s;
  double sigma = 0;
  if (free) {
    s = linear_response_scan(f->h, f->lat, eps, c.experiment.radius, 0.0, c.tolerances.floor);
    FreeSwitchOptions opt;
    opt.min_edge_distance = c.experiment.min_edge_distance;
    sigma = hall_conductance_free(f->sea, f->lat, opt).sigma;
  } else {
    s = linear_response_scan(m->space, m->h, eps, c.experiment.radius, c.tolerances.floor);
  }
  o.results = {{"engine", free ? "free" : "many-body"}, {"gap", gap}, {"radius", s.radius},
               {"slope", s.slope},  {"residual_exponent", s.residual_exponent},
               {"exponent_points", s.exponent_points}, {"epsilons", s.epsilons},
               {"delta_j", s.delta_j}, {"residuals", s.residuals}};
  if (free) {
    o.results["sigma_switch"] = sigma;
    double worst = 0;
    for (std::size_t i = 0; i < eps.size(); ++i)
      if (eps[i] != 0) worst = std::max(worst, std::abs(s.delta_j[i] / eps[i] - sigma));
    add_check(o, "linear", worst, c.tolerances.linear);
  }
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (eps[i] == 0) add_check(o, "zero", std::abs(s.delta_j[i]), 0.0);
  if (s.exponent_points >= 2) {
    add_check(o, "exponent", s.residual_exponent, c.tolerances.exponent,
              s.residual_exponent >= c.tolerances.exponent);
    o.results["exponent_status"] = "fitted";
  } else {
    // nothing nonlinear above the floor: nothing to fit, nothing violated
    o.results["exponent_status"] = "residuals at the floor";
  }
  o.table.header = {"eps", "delta_j", "residual", "delta_j_over_eps"};
  for (std::size_t i = 0; i < eps.size(); ++i) {
    o.table.rows.push_back({eps[i], s.delta_j[i], s.residuals[i],
                            eps[i] == 0 ? Json(nullptr) : Json(s.delta_j[i] / eps[i])});
    o.plot.points.emplace_back(eps[i], s.delta_j[i]);
  }
  o.plot.title = "current response";
  o.plot.xlabel = "eps";
  o.plot.ylabel = "delta J";
  o.plot.slope = s.slope;
}

void bloch(const RunConfig& c, Outcome& o) {
  const int k = c.experiment.k;
  StripeCurrent st;
  if (c.experiment.engine == Engine::Free) {
    Free f = free_setup(c);
    st = stripe_current(f.sea.p, f.h, f.lat, k);
    o.results = {{"engine", "free"}, {"value", st.value}, {"total", st.total}, {"k", k}};
    if (!c.experiment.eps.empty()) {
      const double e = c.experiment.eps.front();
      FreeSwitchOptions opt;
      opt.min_edge_distance = c.experiment.min_edge_distance;
      const double sigma = hall_conductance_free(f.sea, f.lat, opt).sigma;
      const double moved = stripe_current(perturbed_state(f.h, f.lat, e).p, f.h, f.lat, k).total - st.total;
      o.results["contrast"] = {{"eps", e}, {"stripe_total", moved}, {"eps_sigma", e * sigma}};
      add_check(o, "contrast", std::abs(moved - e * sigma) / std::abs(e * sigma), c.tolerances.contrast);
    }
  } else {
    ManyBody m = mb_setup(c);
    st = stripe_current(m.space, m.gs.vector, m.h, k);
    o.results = {{"engine", "many-body"}, {"value", st.value}, {"total", st.total}, {"k", k}};
  }
  o.results["series"] = series_json(st.series);
  add_check(o, "current", std::abs(st.value), c.tolerances.current);
  series_table(o, st.series, "current", "stripe current");
  o.table.header[0] = "k";
  o.plot.xlabel = "k";
}

void pump(const RunConfig& c, Outcome& o) {
  if (c.experiment.engine != Engine::ManyBody)
    throw ConfigError("experiment.engine: pump needs many-body");
  ManyBody m = mb_setup(c);
  const double e = c.experiment.pump_eps;
  PumpResult p = charge_pump(m.space, m.h, m.gs.vector, e, c.experiment.radius);
  ResponseScan ne = linear_response_scan(m.space, m.h, {e / 2, e}, c.experiment.radius, c.tolerances.floor);
  o.results = {{"eps", e},
               {"delta_q", p.delta_q},
               {"ne_slope", ne.slope},
               {"steps", p.evolution.steps},
               {"rejected", p.evolution.rejected},
               {"max_step_error", p.evolution.max_error}};
  add_check(o, "agreement", std::abs(p.delta_q - ne.slope), 2 * c.tolerances.pump);
  o.table.header = {"quantity", "value"};
  o.table.rows = {{"delta_q", p.delta_q}, {"ne_slope", ne.slope}};
}

void verify(const RunConfig& c, Outcome& o) {
  if (c.lattice.L1 * c.lattice.L2 > 8) throw ConfigError("lattice: verify-algebra runs on at most 8 sites");
  ManyBody m = mb_setup(c);
  const std::uint64_t s = c.seed;
  std::vector<Check> all;
  auto add = [&](std::vector<Check> v) { all.insert(all.end(), v.begin(), v.end()); };
  add(verify_conditional_expectation(s));
  add(verify_commutator_bound(s + 1, c.experiment.instances));
  add(verify_resummation(s + 2));
  add(verify_disjoint_supports(s + 3));
  add(verify_offdiagonal(m.space, m.h, m.gs, m.w, s + 4, c.experiment.trials));
  add(verify_weight_checks(m.w));
  add(verify_local_unitaries(m.space, m.h, m.w, s + 5));

  Json matrix;
  o.table.header = {"group", "name", "value", "tol", "pass"};
  for (const auto& ch : all) {
    const bool before = matrix.contains(ch.group) ? matrix[ch.group] == "PASS" : true;
    matrix[ch.group] = before && ch.pass ? "PASS" : "FAIL";
    add_check(o, ch.group + ": " + ch.name, ch.value, ch.tol, ch.pass);
    o.table.rows.push_back({ch.group, ch.name, ch.value, ch.tol, ch.pass ? "PASS" : "FAIL"});
  }
  o.results = {{"gap", m.gs.gap}, {"weight_g", m.w.g()}, {"matrix", matrix}};
}

void weight(const RunConfig& c, Outcome& o) {
  double g;
  if (c.weight.g) {
    g = *c.weight.g;
  } else if (c.experiment.engine == Engine::Free) {
    g = free_setup(c).gap;
  } else {
    g = mb_setup(c).gs.gap;
  }
  WeightFunction w = make_weight(c, g);
  std::vector<Check> v = verify_weight_checks(w);
  for (const auto& ch : v) add_check(o, ch.name, ch.value, ch.tol, ch.pass);
  WeightReport r = verify_weight(w);
  o.results = {{"g", w.g()}, {"order", w.order()}, {"T", w.T()}, {"ds", w.ds()},
               {"tail", r.tail}, {"decay_constants", r.decay_constants}};
  o.table.header = {"s", "W"};
  const auto& vals = w.values();
  const Eigen::Index stride = std::max<Eigen::Index>(1, vals.size() / 2000);
  for (Eigen::Index j = 0; j < vals.size(); j += stride) {
    o.table.rows.push_back({double(j) * w.ds(), vals(j)});
    o.plot.points.emplace_back(double(j) * w.ds(), vals(j));
  }
  o.plot.title = "weight function";
  o.plot.xlabel = "s";
  o.plot.ylabel = "W(s)";
}

void lga(const RunConfig& c, Outcome& o) {
  std::mt19937_64 rng(c.seed);
  const int depth = c.experiment.depth;
  InvarianceReport r, g;
  if (c.experiment.engine == Engine::Free) {
    Free f = free_setup(c);
    FreeSwitchOptions opt;
    opt.min_edge_distance = c.experiment.min_edge_distance;
    r = free_invariance_test(f.h, f.lat, random_circuit(f.lat, depth, rng, true, 0.5), opt);
    g = free_invariance_test(f.h, f.lat, gauge_circuit(f.lat, rng), opt);
  } else {
    ManyBody m = mb_setup(c);
    const bool quad = is_quadratic(c.model);
    r = conductance_invariance_test(m.space, m.h, m.w, random_circuit(m.space.lattice(), depth, rng, quad));
    g = conductance_invariance_test(m.space, m.h, m.w, gauge_circuit(m.space.lattice(), rng));
    ParentReport pr = parent_independence_test(m.space, m.h, m.w);
    o.results["parent"] = {{"sigma", pr.sigma}, {"sigma_squared", pr.sigma_squared},
                           {"delta_scaled_windows", pr.delta_scaled}};
    add_check(o, "parent hamiltonian", std::max(pr.delta_global, pr.delta_scaled), 1e-8);
  }
  o.results["circuit"] = {{"depth", depth},           {"sigma0", r.sigma0},
                          {"sigma1", r.sigma1},       {"delta", r.delta},
                          {"window_delta", r.window_delta}, {"gap0", r.gap0}, {"gap1", r.gap1}};
  o.results["gauge"] = {{"delta", g.delta}, {"window_delta", g.window_delta}};
  add_check(o, "circuit", r.delta, c.tolerances.invariance);
  add_check(o, "gauge", std::max(g.delta, g.window_delta), c.tolerances.gauge);
  o.table.header = {"radius", "sigma_before", "sigma_after"};
  for (std::size_t i = 0; i < std::min(r.windows0.size(), r.windows1.size()); ++i) {
    o.table.rows.push_back({r.windows0[i].radius, r.windows0[i].value, r.windows1[i].value});
    o.plot.points.emplace_back(r.windows0[i].radius, r.windows1[i].value - r.windows0[i].value);
  }
  o.plot.title = "windowed change under the circuit";
  o.plot.xlabel = "radius";
  o.plot.ylabel = "delta sigma";
}

}  // namespace

Outcome run_experiment(const RunConfig& c) {
  Outcome o;
  o.results = Json::object();
  o.checks = Json::object();
  switch (c.experiment.kind) {
    case Experiment::Conductance: conductance(c, o); break;
    case Experiment::Equivalence: equivalence(c, o); break;
    case Experiment::ScanEps: scan_eps(c, o); break;
    case Experiment::Bloch: bloch(c, o); break;
    case Experiment::Pump: pump(c, o); break;
    case Experiment::VerifyAlgebra: verify(c, o); break;
    case Experiment::Weight: weight(c, o); break;
    case Experiment::LgaInvariance: lga(c, o); break;
  }
  return o;
}

Json make_report(const RunConfig& c, const Outcome& o) {
  Json r;
  r["experiment"] = experiment_name(c.experiment.kind);
  r["status"] = o.pass ? "PASS" : "FAIL";
  r["provenance"] = {{"config_hash", config_hash(c)}, {"code_version", HALLCOND_VERSION}};
  r["config"] = to_json(c);
  r["results"] = o.results;
  r["checks"] = o.checks;
  return r;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_number_float()) return fmt(j.get<double>());
  if (j.is_number()) return j.dump();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else out += ch;
  }
  return out;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + cell(t.header[i]);
  out += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\r\n";
  }
  return out;
}

std::string to_svg(const Plot& p) {
  const double W = 640, H = 420, L = 80, R = 20, T = 40, B = 60;
  std::vector<std::pair<double, double>> pts;
  for (auto [x, y] : p.points)
    if (std::isfinite(x) && std::isfinite(y) && (!p.log_x || x > 0)) pts.emplace_back(p.log_x ? std::log10(x) : x, y);
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (p.slope) {
    y0 = std::min({y0, *p.slope * x0, *p.slope * x1});
    y1 = std::max({y1, *p.slope * x0, *p.slope * x1});
  }
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= std::max(0.5, std::abs(y0) * 0.1), y1 += std::max(0.5, std::abs(y1) * 0.1);
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(p.title) << "</text>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    s << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << fmt(p.log_x ? std::pow(10, xv) : xv).substr(0, 10) << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
      << fmt(yv).substr(0, 10) << "</text>\n";
  }
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(p.xlabel) << "</text>\n";
  s << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << H / 2
    << ")\">" << escape_xml(p.ylabel) << "</text>\n";
  if (p.slope)
    s << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(*p.slope * x0) << "\" x2=\"" << sx(x1) << "\" y2=\""
      << sy(*p.slope * x1) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  if (!pts.empty()) {
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : pts) s << sx(x) << "," << sy(y) << " ";
    s << "\"/>\n";
    for (auto [x, y] : pts) s << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace hallcond::cli
