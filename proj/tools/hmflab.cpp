// hmflab: scenario runner for the harmonic map flow library.
#include "hmf/errors.hpp"
#include "hmf/io.hpp"
#include "hmf/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

using namespace hmf;
using nlohmann::json;

namespace {

constexpr double kFourPi = 4 * std::numbers::pi;

struct Globals {
  std::string config_path;
  std::string out_dir = ".";
  bool json = false;
  std::uint64_t seed = 1;
  std::vector<std::string> overrides;
};

KeyValueConfig load_config(const Globals& g) {
  KeyValueConfig c;
  if (!g.config_path.empty()) c = KeyValueConfig::load(g.config_path);
  for (const auto& kv : g.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw DomainError("--set expects key=value, got " + kv);
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

std::string out_path(const Globals& g, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(g.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + g.out_dir);
  return (std::filesystem::path(g.out_dir) / name).string();
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json) std::cout << j.dump(2) << '\n';
  else std::cout << text;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

RunConfig run_config(const KeyValueConfig& c, RunConfig r) {
  r.dt_factor = c.get_double("dt_factor", r.dt_factor);
  r.t_end = c.get_double("t_end", r.t_end);
  r.max_steps = c.get_int("max_steps", r.max_steps);
  r.diag_every = static_cast<int>(c.get_int("diag_every", r.diag_every));
  r.stop_cells = c.get_double("stop_cells", r.stop_cells);
  r.ball_factor = c.get_double("ball_factor", r.ball_factor);
  if (r.diag_every < 1) throw DomainError("diag_every must be at least 1");
  return r;
}

json summary_json(const BlowupSummary& s) {
  return {{"growth", s.growth},
          {"lambda_monotone", s.lambda_monotone},
          {"e_ball_over_4pi", {s.e_ball_min / kFourPi, s.e_ball_mean / kFourPi, s.e_ball_max / kFourPi}},
          {"fit", {{"T_hat", s.fit.T_hat}, {"C", s.fit.C}, {"gamma", s.fit.gamma}, {"rms", s.fit.rms},
                   {"points", s.fit_points}}}};
}

std::string summary_text(const BlowupSummary& s, const std::string& stop, long steps) {
  std::string t;
  t += "stop reason        " + stop + " after " + std::to_string(steps) + " steps\n";
  t += "gradient growth    " + fmt("%.4g", s.growth) + "\n";
  t += std::string("lambda monotone    ") + (s.lambda_monotone ? "yes" : "no") + " (post-transient)\n";
  t += "ball energy / 4pi  min " + fmt("%.4f", s.e_ball_min / kFourPi) + " mean " +
       fmt("%.4f", s.e_ball_mean / kFourPi) + " max " + fmt("%.4f", s.e_ball_max / kFourPi) + "\n";
  if (s.fit_points >= 3)
    t += "rate fit           lambda = C (T-t)^g / log^2(T-t): g " + fmt("%.4f", s.fit.gamma) + ", T " +
         fmt("%.6g", s.fit.T_hat) + ", C " + fmt("%.4g", s.fit.C) + ", rms " + fmt("%.3g", s.fit.rms) + " (" +
         std::to_string(s.fit_points) + " points)\n";
  else
    t += "rate fit           not enough resolved samples\n";
  return t;
}

int cmd_identities(const Globals& g, double perturb) {
  auto rows = identity_suite(g.seed, perturb);
  bool ok = true;
  json j = json::array();
  std::string text;
  for (const auto& r : rows) {
    ok = ok && r.pass;
    j.push_back({{"suite", r.suite}, {"name", r.name}, {"value", r.value}, {"tol", r.tol}, {"pass", r.pass}});
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-4s %-8s %-40s %.3e (tol %.1e)\n", r.pass ? "ok" : "FAIL", r.suite.c_str(),
                  r.name.c_str(), r.value, r.tol);
    text += buf;
  }
  emit(g, json{{"checks", j}, {"pass", ok}}, text);
  return ok ? 0 : 2;
}

int cmd_gamma(const Globals& g) {
  KeyValueConfig c = load_config(g);
  c.check_keys({"tau_min", "tau_max", "n"});
  c.check_required({"tau_min", "tau_max", "n"});
  GammaReport rep = gamma_report(c.require_double("tau_min"), c.require_double("tau_max"),
                                 static_cast<int>(c.get_int("n", 0)));
  write_csv(out_path(g, "gamma.csv"), rep.table);
  int flagged = 0;
  for (const auto& r : rep.table.rows) flagged += r[3] != 0;
  json j{{"rows", rep.table.rows.size()}, {"flagged", flagged},
         {"C_small", {rep.bounds[0].C_small, rep.bounds[1].C_small}},
         {"C_large", {rep.bounds[0].C_large, rep.bounds[1].C_large}}};
  std::string text = "rows " + std::to_string(rep.table.rows.size()) + ", flagged " + std::to_string(flagged) +
                     "\nC_small " + fmt("%.6g", rep.bounds[0].C_small) + " " + fmt("%.6g", rep.bounds[1].C_small) +
                     "\nC_large " + fmt("%.6g", rep.bounds[0].C_large) + " " + fmt("%.6g", rep.bounds[1].C_large) + "\n";
  emit(g, j, text);
  return 0;
}

int cmd_reduced(const Globals& g) {
  KeyValueConfig c = load_config(g);
  c.check_keys({"T", "r0", "z0", "beta", "alpha0", "a0_re", "a0_im", "n_out", "grid_ratio", "max_iter"});
  ReducedConfig rc;
  rc.T = c.get_double("T", rc.T);
  rc.r0 = c.get_double("r0", rc.r0);
  rc.z0 = c.get_double("z0", rc.z0);
  rc.beta = c.get_double("beta", rc.beta);
  if (c.has("a0_re") || c.has("a0_im")) rc.a0_star = cplx(c.get_double("a0_re", 0), c.get_double("a0_im", 0));
  else rc.z0_star = default_z0_star(rc.r0, rc.z0, c.get_double("alpha0", 0.05));
  InverseParams prm;
  prm.grid_ratio = c.get_double("grid_ratio", prm.grid_ratio);
  prm.max_iter = static_cast<int>(c.get_int("max_iter", prm.max_iter));
  PredictedTrajectory p = predicted_p(rc, static_cast<int>(c.get_int("n_out", 201)), prm);
  write_csv(out_path(g, "reduced.csv"), reduced_table(p));
  double rmin = INFINITY, rmax = 0;
  for (std::size_t k = 0; k < p.t.size(); ++k)
    if (p.t[k] >= 0 && p.t[k] <= 0.5 * rc.T) {
      rmin = std::min(rmin, p.ratio[k]);
      rmax = std::max(rmax, p.ratio[k]);
    }
  json j{{"a0", {p.a0.real(), p.a0.imag()}}, {"kappa", {p.kappa.real(), p.kappa.imag()}},
         {"kappa_alt", {p.kappa_alt.real(), p.kappa_alt.imag()}}, {"ratio_band", {rmin, rmax}},
         {"residual_trace", p.residual_trace}};
  std::string text = "a0*        " + fmt("%.6g", p.a0.real()) + " " + fmt("%+.6g i", p.a0.imag()) +
                     "\nkappa      " + fmt("%.6g", p.kappa.real()) + " " + fmt("%+.6g i", p.kappa.imag()) +
                     "\nkappa_alt  " + fmt("%.6g", p.kappa_alt.real()) + " " + fmt("%+.6g i", p.kappa_alt.imag()) +
                     "\n|p|/lambda_* on [0, T/2]: " + fmt("%.6g", rmin) + " .. " + fmt("%.6g", rmax) +
                     " (spread " + fmt("%.2f%%", 100 * (rmax - rmin) / rmax) + ")\n";
  emit(g, j, text);
  return 0;
}

int cmd_corotational(const Globals& g) {
  KeyValueConfig c = load_config(g);
  c.check_keys({"n", "lambda0", "delta", "q_r", "q_z", "model", "dt_factor", "t_end", "max_steps", "diag_every",
                "stop_cells", "ball_factor", "transient"});
  CorotScenario sc;
  sc.run.t_end = 0.5;
  sc.run.diag_every = 100;
  sc.n = static_cast<int>(c.get_int("n", sc.n));
  sc.lambda0 = c.get_double("lambda0", sc.lambda0);
  sc.delta = c.get_double("delta", sc.delta);
  sc.setup.q_r = c.get_double("q_r", sc.setup.q_r);
  sc.setup.q_z = c.get_double("q_z", sc.setup.q_z);
  std::string model = c.get_string("model", "planar");
  if (model == "axial") sc.setup.model = CorotModel::axial;
  else if (model != "planar") throw DomainError("model must be planar or axial");
  sc.transient = c.get_double("transient", sc.transient);
  sc.run = run_config(c, sc.run);
  CorotOutcome o = run_corot_scenario(sc);
  write_csv(out_path(g, "corotational.csv"), diagnostics_table(o.run.rows));
  write_snapshot(out_path(g, "corotational_final.csv"), o.run.last_scalar);
  json j = summary_json(o.summary);
  j["stop_reason"] = o.run.stop_reason;
  j["steps"] = o.run.steps;
  emit(g, j, summary_text(o.summary, o.run.stop_reason, o.run.steps));
  return 0;
}

int cmd_flow(const Globals& g) {
  KeyValueConfig c = load_config(g);
  c.check_keys({"n", "lambda0", "omega", "xi1", "xi2", "delta", "geometry", "stepper", "dt_factor", "t_end",
                "max_steps", "diag_every", "stop_cells", "ball_factor", "transient", "check_energy"});
  FlowScenario sc;
  sc.run.t_end = 0.5;
  sc.run.diag_every = 100;
  sc.n = static_cast<int>(c.get_int("n", sc.n));
  sc.bubble.lambda = c.get_double("lambda0", sc.bubble.lambda);
  sc.bubble.omega = c.get_double("omega", sc.bubble.omega);
  sc.bubble.xi[0] = c.get_double("xi1", sc.bubble.xi[0]);
  sc.bubble.xi[1] = c.get_double("xi2", sc.bubble.xi[1]);
  sc.delta = c.get_double("delta", sc.delta);
  std::string geo = c.get_string("geometry", "axisymmetric");
  if (geo == "planar") sc.geometry = Geometry::planar;
  else if (geo != "axisymmetric") throw DomainError("geometry must be axisymmetric or planar");
  std::string stepper = c.get_string("stepper", "euler");
  if (stepper == "rk2") sc.run.stepper = Stepper::rk2;
  else if (stepper != "euler") throw DomainError("stepper must be euler or rk2");
  sc.run.check_energy = c.get_int("check_energy", 0) != 0;
  sc.transient = c.get_double("transient", sc.transient);
  sc.run = run_config(c, sc.run);
  FlowOutcome o = run_flow_scenario(sc);
  write_csv(out_path(g, "flow.csv"), diagnostics_table(o.run.rows));
  write_snapshot(out_path(g, "flow_final.csv"), o.run.last_map);
  json j = summary_json(o.summary);
  j["stop_reason"] = o.run.stop_reason;
  j["steps"] = o.run.steps;
  j["degree0"] = o.degree0;
  j["max_energy_increase"] = o.run.max_energy_increase;
  std::string text = "initial degree     " + fmt("%.6f", o.degree0) + "\n" +
                     summary_text(o.summary, o.run.stop_reason, o.run.steps);
  if (sc.run.check_energy) text += "max energy step    " + fmt("%.3e", o.run.max_energy_increase) + "\n";
  emit(g, j, text);
  return 0;
}

int cmd_norms(const Globals& g) {
  KeyValueConfig c = load_config(g);
  c.check_keys({"T", "nu", "a", "delta", "beta", "theta", "field", "scale", "n_rho", "n_t"});
  NormParams prm;
  prm.T = c.get_double("T", prm.T);
  prm.nu = c.get_double("nu", prm.nu);
  prm.a = c.get_double("a", prm.a);
  prm.delta = c.get_double("delta", prm.delta);
  prm.beta = c.get_double("beta", prm.beta);
  prm.theta = c.get_double("theta", prm.theta);
  if (!(prm.a > 2 && prm.a < 3)) throw DomainError("a must lie in (2,3)");
  if (!(prm.beta > 0 && prm.beta < 0.5)) throw DomainError("beta must lie in (0,1/2)");
  std::string field = c.get_string("field", "weight");
  if (field != "weight" && field != "zero") throw DomainError("field must be weight or zero");
  double scale = field == "zero" ? 0.0 : c.get_double("scale", 1.0);
  long n_rho = c.get_int("n_rho", 200), n_t = c.get_int("n_t", 50);
  if (n_rho < 2 || n_t < 2) throw DomainError("n_rho and n_t must be at least 2");
  std::vector<NormSample> samples;
  for (long a = 0; a < n_t; ++a) {
    double t = prm.T * 0.99 * a / (n_t - 1);
    for (long b = 0; b < n_rho; ++b) {
      double rho = 100.0 * b / (n_rho - 1);
      NormSample s;
      s.t = t;
      s.rho = rho;
      s.value = scale * nu_a_weight(t, rho, prm);
      s.grad = scale * prm.a * nu_a_weight(t, rho, prm) / (1 + rho);
      samples.push_back(s);
    }
  }
  CsvTable tab{{"norm_index", "value"}, {}};
  json j;
  std::string text;
  const std::pair<NormId, const char*> ids[] = {
      {NormId::nu_a, "nu_a"}, {NormId::star, "star"}, {NormId::starstar, "starstar"}, {NormId::sharp, "sharp"}};
  for (std::size_t k = 0; k < 4; ++k) {
    double v = weighted_norm(ids[k].first, samples, prm);
    tab.rows.push_back({double(k), v});
    j[ids[k].second] = v;
    text += std::string(ids[k].second) + std::string(10 - std::string(ids[k].second).size(), ' ') + fmt("%.10g", v) + "\n";
  }
  write_csv(out_path(g, "norms.csv"), tab);
  emit(g, j, text);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hmflab: harmonic map flow blow-up laboratory"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "key = value config file");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_flag("--json", g.json, "machine-readable report on stdout");
  app.add_option("--seed", g.seed, "seed for randomized test fields");
  app.add_option("--set", g.overrides, "override a config key (key=value)")->take_all();
  for (auto* o : app.get_options()) o->configurable(false);

  app.fallthrough();

  double perturb = 0;
  auto* id = app.add_subcommand("identities", "moment, kernel and mode identity suites");
  id->add_option("--perturb", perturb, "add this offset to every measured error (negative control)");
  std::string tmin, tmax, nn;
  auto* gm = app.add_subcommand("gamma", "tabulate Gamma_1, Gamma_2 (keys tau_min, tau_max, n)");
  gm->add_option("--tau-min", tmin);
  gm->add_option("--tau-max", tmax);
  gm->add_option("--n", nn);
  auto* rd = app.add_subcommand("reduced", "reduced modulation system: xi(t) and p(t)");
  auto* cr = app.add_subcommand("corotational", "corotational blow-up run");
  auto* fl = app.add_subcommand("flow", "full axisymmetric map run");
  auto* nm = app.add_subcommand("norms", "weighted norms of a constructed field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*id) return cmd_identities(g, perturb);
    if (*gm) {
      if (!tmin.empty()) g.overrides.push_back("tau_min=" + tmin);
      if (!tmax.empty()) g.overrides.push_back("tau_max=" + tmax);
      if (!nn.empty()) g.overrides.push_back("n=" + nn);
      return cmd_gamma(g);
    }
    if (*rd) return cmd_reduced(g);
    if (*cr) return cmd_corotational(g);
    if (*fl) return cmd_flow(g);
    if (*nm) return cmd_norms(g);
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n' << e.trace() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
