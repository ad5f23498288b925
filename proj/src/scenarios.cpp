#include "hmf/scenarios.hpp"

#include "hmf/errors.hpp"
#include "hmf/linearized.hpp"
#include "hmf/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hmf {

namespace {

constexpr double kPi = std::numbers::pi;

CheckRow check(const std::string& suite, const std::string& name, double err, double tol, double perturb) {
  double v = err + perturb;
  return {suite, name, v, tol, v <= tol};
}

struct Bump {
  double r, z, sigma;
  cplx c;
  double c3;
};

} // namespace

double kernel_annihilation_error(int l, int j, double h) {
  TangentField Z{[l, j](const PlanePoint& y) { return eval_Z(l, j, y); }};
  double worst = 0;
  for (double rho : {0.5, 1.0, 2.0})
    for (int a = 0; a < 8; ++a) {
      double th = 2 * kPi * (a + 0.25) / 8;
      PlanePoint y(rho * std::cos(th), rho * std::sin(th));
      worst = std::max(worst, norm(apply_LW(Z, y, h)));
    }
  return worst;
}

PlaneVectorField random_smooth_field(std::uint64_t seed, const ModulationState& st) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Bump> bumps;
  for (int k = 0; k < 3; ++k) {
    Bump b;
    b.r = st.xi[0] + 1.5 * st.lambda * U(gen);
    b.z = st.xi[1] + 1.5 * st.lambda * U(gen);
    b.sigma = st.lambda * (1.25 + 0.75 * U(gen));
    b.c = cplx(U(gen), U(gen));
    b.c3 = U(gen);
    bumps.push_back(b);
  }
  return [bumps](double r, double z) {
    FieldJet J;
    for (const auto& b : bumps) {
      double dr = r - b.r, dz = z - b.z, s2 = b.sigma * b.sigma;
      double g = std::exp(-(dr * dr + dz * dz) / s2);
      double gr = -2 * dr / s2 * g, gz = -2 * dz / s2 * g;
      J.phi += b.c * g;
      J.phi_r += b.c * gr;
      J.phi_z += b.c * gz;
      J.phi3 += b.c3 * g;
      J.phi3_r += b.c3 * gr;
      J.phi3_z += b.c3 * gz;
    }
    return J;
  };
}

std::vector<CheckRow> identity_suite(std::uint64_t seed, double perturb) {
  std::vector<CheckRow> out;
  const std::pair<Moment, const char*> moments[] = {{Moment::rho_wrho2, "int rho w_rho^2 = 2"},
                                                    {Moment::rho3_wrho3, "int rho^3 w_rho^3 = -2"},
                                                    {Moment::rho_wrho2_cosw, "int rho w_rho^2 cos w = 0"},
                                                    {Moment::dirichlet_energy, "(1/2) int |grad W|^2 = 4 pi"}};
  for (const auto& [kind, name] : moments) {
    MomentValue m = moment_integral(kind);
    double tol = kind == Moment::dirichlet_energy ? 1e-6 : 1e-8;
    out.push_back(check("moments", name, std::abs(m.value - m.exact), tol, perturb));
  }

  for (int l : {-1, 0, 1})
    for (int j : {1, 2}) {
      std::string name = "Z_" + std::to_string(l) + std::to_string(j);
      out.push_back(check("kernels", name + " at h=1e-3", kernel_annihilation_error(l, j, 1e-3), 1e-4, perturb));
      double e1 = kernel_annihilation_error(l, j, 2e-2), e2 = kernel_annihilation_error(l, j, 1e-2);
      double order = std::log2(e1 / e2);
      double v = order - perturb;
      out.push_back({"kernels", name + " observed order", v, 1.8, v >= 1.8});
    }

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0;
  for (int f = 0; f < 10; ++f) {
    ModulationState st{0.2 + 0.3 * U(gen), 2 * kPi * U(gen), {1.0 + 0.2 * U(gen), 0.2 * U(gen) - 0.1}};
    PlaneVectorField Phi = random_smooth_field(gen(), st);
    for (int p = 0; p < 5; ++p) {
      double s = st.lambda * (0.1 + 2.9 * U(gen)), th = 2 * kPi * U(gen);
      double r = st.xi[0] + s * std::cos(th), z = st.xi[1] + s * std::sin(th);
      Vec3 direct = apply_Ltilde_definition(Phi, st, r, z);
      Vec3 sum = apply_Ltilde_mode(0, Phi, st, r, z) + apply_Ltilde_mode(1, Phi, st, r, z) +
                 apply_Ltilde_mode(2, Phi, st, r, z);
      worst = std::max(worst, norm(direct - sum) / std::max(1.0, norm(direct)));
    }
  }
  out.push_back(check("modes", "direct vs sum of modes, 10 fields", worst, 1e-10, perturb));

  // (phi(s) e^{i theta}, 0) with phi(s) = c s e^{-s^2 / l^2}
  double worst_r = 0;
  for (int f = 0; f < 10; ++f) {
    ModulationState st{0.2 + 0.3 * U(gen), 2 * kPi * U(gen), {1.0, 0.0}};
    cplx c(2 * U(gen) - 1, 2 * U(gen) - 1);
    double L2 = st.lambda * st.lambda;
    PlaneVectorField Phi = [=](double r, double z) {
      double X = r - st.xi[0], Z = z - st.xi[1];
      double g = std::exp(-(X * X + Z * Z) / L2);
      cplx q(X, Z);
      FieldJet J;
      J.phi = c * g * q;
      J.phi_r = c * g * (1.0 - 2.0 * X / L2 * q);
      J.phi_z = c * g * (cplx(0, 1) - 2.0 * Z / L2 * q);
      return J;
    };
    for (int p = 0; p < 5; ++p) {
      double s = st.lambda * (0.1 + 2.9 * U(gen)), th = 2 * kPi * U(gen);
      double r = st.xi[0] + s * std::cos(th), z = st.xi[1] + s * std::sin(th);
      double g = std::exp(-s * s / L2);
      cplx phi = c * s * g, phi_s = c * g * (1 - 2 * s * s / L2);
      Vec3 direct = apply_Ltilde_definition(Phi, st, r, z);
      Vec3 closed = apply_Ltilde_radial(phi, phi_s, st, r, z);
      worst_r = std::max(worst_r, norm(direct - closed) / std::max(1.0, norm(direct)));
    }
  }
  out.push_back(check("modes", "radial closed form vs direct", worst_r, 1e-10, perturb));
  return out;
}

GammaReport gamma_report(double tau_min, double tau_max, int n) {
  if (!(tau_min > 0)) throw DomainError("gamma: tau_min must be positive");
  if (!(tau_max >= tau_min)) throw DomainError("gamma: inverted tau range");
  if (n < 1) throw DomainError("gamma: n must be at least 1");
  if (n > 1 && tau_max == tau_min) throw DomainError("gamma: empty tau range for n > 1");
  GammaReport rep;
  rep.table.header = {"tau", "gamma1", "gamma2", "flag"};
  for (int k = 0; k < n; ++k) {
    double tau = n == 1 ? tau_min : tau_min * std::pow(tau_max / tau_min, double(k) / (n - 1));
    double g[2];
    double flag = 0;
    for (int l = 1; l <= 2; ++l) {
      try {
        g[l - 1] = gamma(l, tau);
      } catch (const NumericalError&) {
        g[l - 1] = KernelTable::shared()(l, tau);
        flag = 1;
      }
    }
    rep.table.rows.push_back({tau, g[0], g[1], flag});
  }
  for (int l = 1; l <= 2; ++l) rep.bounds[l - 1] = fit_gamma_bounds(l, KernelTable::shared());
  return rep;
}

BlowupSummary summarize(const std::vector<DiagnosticRow>& rows, double h, double transient,
                        double fit_min_cells) {
  BlowupSummary s;
  s.h = h;
  if (rows.size() < 2) return s;
  s.growth = rows.back().max_grad / rows.front().max_grad;
  double t_tr = rows.front().t + transient * (rows.back().t - rows.front().t);
  std::vector<const DiagnosticRow*> post;
  for (const auto& r : rows)
    if (r.t >= t_tr && r.lambda_est > 0) post.push_back(&r);
  if (post.empty()) return s;
  s.lambda_monotone = true;
  s.e_ball_min = s.e_ball_max = post.front()->e_ball;
  double sum = 0;
  for (std::size_t k = 0; k < post.size(); ++k) {
    if (k && post[k]->lambda_est > post[k - 1]->lambda_est) s.lambda_monotone = false;
    s.e_ball_min = std::min(s.e_ball_min, post[k]->e_ball);
    s.e_ball_max = std::max(s.e_ball_max, post[k]->e_ball);
    sum += post[k]->e_ball;
  }
  s.e_ball_mean = sum / post.size();
  std::vector<double> t, lam;
  for (const auto* r : post)
    if (r->lambda_est >= fit_min_cells * h) {
      t.push_back(r->t);
      lam.push_back(r->lambda_est);
    }
  s.fit_points = static_cast<int>(t.size());
  if (t.size() >= 3) s.fit = fit_rate(t, lam);
  return s;
}

namespace {

Grid2D square_grid(int n) {
  Grid2D g;
  g.nr = n;
  g.nz = n;
  g.validate();
  return g;
}

} // namespace

CorotOutcome run_corot_scenario(const CorotScenario& sc) {
  Grid2D g = square_grid(sc.n);
  ScalarField v0 = corotational_initial(sc.setup, sc.lambda0, sc.delta, g);
  CorotOutcome o;
  o.run = run_corotational(v0, sc.setup, sc.run);
  o.summary = summarize(o.run.rows, g.h(), sc.transient, sc.run.stop_cells);
  return o;
}

FlowOutcome run_flow_scenario(const FlowScenario& sc) {
  Grid2D g = square_grid(sc.n);
  MapField u0 = initial_data(sc.bubble, sc.delta, g);
  FlowOutcome o;
  o.degree0 = map_degree(u0);
  o.run = run_flow(u0, sc.run, sc.geometry);
  o.summary = summarize(o.run.rows, g.h(), sc.transient, sc.run.stop_cells);
  return o;
}

CrossModel cross_model(int n, double lambda0, double delta, double t_end, double min_cells, int diag_every,
                       Geometry geo) {
  Grid2D g = square_grid(n);
  CorotSetup setup;
  RunConfig cfg;
  cfg.t_end = t_end;
  cfg.diag_every = diag_every;
  cfg.stop_cells = min_cells;
  RunResult rs = run_corotational(corotational_initial(setup, lambda0, delta, g), setup, cfg);
  ModulationState st{lambda0, 0.0, {setup.q_r, setup.q_z}};
  RunResult rm = run_flow(initial_data(st, delta, g), cfg, geo);
  CrossModel cm;
  std::size_t n_rows = std::min(rs.rows.size(), rm.rows.size());
  double floor = min_cells * g.h();
  for (std::size_t k = 0; k < n_rows; ++k) {
    double a = rs.rows[k].lambda_est, b = rm.rows[k].lambda_est;
    cm.t.push_back(rs.rows[k].t);
    cm.lambda_corot.push_back(a);
    cm.lambda_map.push_back(b);
    cm.xi1_map.push_back(rm.rows[k].xi1_est);
    if (a >= floor && b >= floor) {
      cm.max_rel_diff = std::max(cm.max_rel_diff, std::abs(a - b) / a);
      ++cm.compared;
    }
  }
  return cm;
}

DissipationRun dissipation_run(std::uint64_t seed, int n, long steps) {
  Grid2D g = square_grid(n);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ModulationState st{0.15 + 0.05 * U(gen), kPi * U(gen), {1.0 + 0.1 * U(gen), 0.1 * U(gen)}};
  MapField u = initial_data(st, 0.3, g);
  Vec3 amp[3];
  double cen[3][2];
  for (int k = 0; k < 3; ++k) {
    amp[k] = Vec3(U(gen), U(gen), U(gen)) * 0.3;
    cen[k][0] = 1.0 + 0.4 * U(gen);
    cen[k][1] = 0.4 * U(gen);
  }
  for (int j = 1; j < g.nz; ++j)
    for (int i = 1; i < g.nr; ++i) {
      Vec3 d;
      for (int k = 0; k < 3; ++k) {
        double s2 = std::pow(g.r(i) - cen[k][0], 2) + std::pow(g.z(j) - cen[k][1], 2);
        d = d + std::exp(-s2 / 0.04) * amp[k];
      }
      Vec3& x = u.u[g.idx(i, j)];
      x = (x + d) / norm(x + d);
    }
  RunConfig cfg;
  cfg.check_energy = true;
  cfg.diag_every = 50;
  cfg.stop_cells = 4;
  cfg.t_end = steps * cfg.dt_factor * g.h() * g.h();
  cfg.max_steps = steps;
  RunResult r = run_flow(u, cfg, Geometry::axisymmetric);
  DissipationRun d;
  d.max_increase = r.max_energy_increase;
  d.steps = r.steps;
  d.e_first = energy(u).axisymmetric;
  d.e_last = energy(r.last_map).axisymmetric;
  return d;
}

CsvTable reduced_table(const PredictedTrajectory& p) {
  CsvTable t{{"t", "xi1", "xi2", "lambda_star", "p_re", "p_im", "p_abs", "ratio"}, {}};
  for (std::size_t k = 0; k < p.t.size(); ++k)
    t.rows.push_back({p.t[k], p.xi1[k], p.xi2[k], p.lambda_star[k], p.p[k].real(), p.p[k].imag(),
                      std::abs(p.p[k]), p.ratio[k]});
  return t;
}

} // namespace hmf
