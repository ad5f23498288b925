// Acceptance run: one PASS/FAIL line per criterion, measured values alongside.
#include "hmf/errors.hpp"
#include "hmf/modulation.hpp"
#include "hmf/nonlocal.hpp"
#include "hmf/profiles.hpp"
#include "hmf/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

using namespace hmf;

namespace {

constexpr double kFourPi = 4 * std::numbers::pi;

int failures = 0;

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string f(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

void criterion1() {
  Timer tm;
  double e[4];
  const Moment kinds[4] = {Moment::rho_wrho2, Moment::rho3_wrho3, Moment::rho_wrho2_cosw, Moment::dirichlet_energy};
  for (int k = 0; k < 4; ++k) {
    MomentValue m = moment_integral(kinds[k]);
    e[k] = std::abs(m.value - m.exact);
  }
  double secs = tm.seconds();
  bool ok = e[0] <= 1e-8 && e[1] <= 1e-8 && e[2] <= 1e-8 && e[3] <= 1e-6 && secs < 1;
  report(1, ok, "moment errors " + f("%.1e", e[0]) + " " + f("%.1e", e[1]) + " " + f("%.1e", e[2]) +
                    ", energy error " + f("%.1e", e[3]) + ", " + f("%.3f s", secs));
}

void criterion2() {
  Timer tm;
  double worst = 0, min_order = 1e9;
  for (int l : {-1, 0, 1})
    for (int j : {1, 2}) {
      double e1 = kernel_annihilation_error(l, j, 1e-3);
      double e2 = kernel_annihilation_error(l, j, 5e-4);
      worst = std::max(worst, e1);
      min_order = std::min(min_order, std::log2(e1 / e2));
    }
  double secs = tm.seconds();
  bool ok = worst <= 1e-4 && min_order >= 1.8 && secs < 5;
  report(2, ok, "max |L_W Z| at h=1e-3 " + f("%.2e", worst) + ", min observed order " + f("%.3f", min_order) +
                    ", " + f("%.3f s", secs));
}

void criterion3() {
  Timer tm;
  auto rows = identity_suite(2024);
  double modes = 0, radial = 0;
  for (const auto& r : rows) {
    if (r.name == "direct vs sum of modes, 10 fields") modes = r.value;
    if (r.name == "radial closed form vs direct") radial = r.value;
  }
  double secs = tm.seconds();
  bool ok = modes <= 1e-10 && radial <= 1e-10 && secs < 5;
  report(3, ok, "direct vs mode sum " + f("%.2e", modes) + ", radial special case " + f("%.2e", radial) + ", " +
                    f("%.3f s", secs));
}

void criterion4() {
  Timer tm;
  KernelTable tab;
  double lim = 0;
  for (int l : {1, 2}) {
    lim = std::max(lim, std::abs(gamma(l, 1e-12) - 1));
    lim = std::max(lim, std::abs(tab(l, 1e-12) - 1));
  }
  bool shape = true;
  double Cs[2], Cl[2];
  for (int l : {1, 2}) {
    GammaBounds b = fit_gamma_bounds(l, tab);
    Cs[l - 1] = b.C_small;
    Cl[l - 1] = b.C_large;
    shape = shape && std::isfinite(b.C_small) && std::isfinite(b.C_large) && b.C_small > 0 && b.C_large > 0;
    for (int k = 0; k < tab.size(); ++k) {
      double tau = tab.tau()[k], g = tab.values(l)[k];
      if (tau < 1 && tau >= 1e-6) shape = shape && std::abs(g - 1) <= b.C_small * tau * (1 + std::abs(std::log(tau))) * (1 + 1e-12);
      if (tau > 1) shape = shape && std::abs(g) * tau <= b.C_large * (1 + 1e-12);
    }
  }
  double secs = tm.seconds();
  bool ok = lim <= 1e-6 && shape && secs < 30;
  report(4, ok, "|Gamma(0+) - 1| " + f("%.1e", lim) + ", C_small " + f("%.4g", Cs[0]) + "/" + f("%.4g", Cs[1]) +
                    ", C_large " + f("%.4g", Cl[0]) + "/" + f("%.4g", Cl[1]) + ", shape " + (shape ? "ok" : "violated") +
                    ", " + f("%.2f s", secs));
}

void criterion5() {
  Timer tm;
  ReducedConfig cfg;
  cfg.T = 0.01;
  cfg.r0 = 1;
  cfg.a0_star = cplx(1.0);
  XiTrajectory x = solve_xi(cfg, 1000);
  double err = 0;
  for (std::size_t k = 0; k < x.t.size(); ++k)
    err = std::max(err, std::abs(x.xi1[k] - std::sqrt(cfg.r0 * cfg.r0 + 2 * (cfg.T - x.t[k]))));
  auto e = [&](int n) {
    XiTrajectory y = solve_xi(cfg, n);
    return std::abs(y.xi1.front() - xi1_exact(0, cfg.r0, cfg.T));
  };
  double order = std::log2(e(1) / e(2));
  double secs = tm.seconds();
  bool ok = err <= 1e-8 && order >= 3.8 && secs < 1;
  report(5, ok, "max error " + f("%.2e", err) + ", observed order " + f("%.3f", order) + ", " + f("%.3f s", secs));
}

void criterion6() {
  Timer tm;
  double T = 1e-3;
  double b0 = p0_bracket(1.0, 0.0, T).real(), drift = 0;
  for (int k = 0; k <= 200; ++k) {
    double t = -T + (2 * T) * (1 - std::pow(10.0, -6.0 * k / 200.0));
    drift = std::max(drift, std::abs(p0_bracket(1.0, t, T).real() - b0));
  }
  double kap = 1 / std::abs(std::log(T));  // pdot = -1/log^2(T - t)
  PHistory h = PHistory::sample(T, graded_history_grid(T), [&](double t) { return p0_kappa(kap, t, T); },
                                [&](double t) { return p0_kappa_dot(kap, t, T); });
  cplx B00 = B0(h, 0.0).value;
  double band = 0;
  for (int k = 1; k <= 50; ++k) {
    double t = 0.5 * T * k / 50;
    band = std::max(band, std::abs(B0(h, t).value - B00) / std::abs(B00));
  }
  double secs = tm.seconds();
  double limit = 1 / std::abs(std::log(T));
  bool ok = drift <= 1e-6 && band <= limit && secs < 60;
  report(6, ok, "bracket drift " + f("%.2e", drift) + ", B0 relative band on [0,T/2] " + f("%.4f", band) +
                    " (limit " + f("%.4f", limit) + "), " + f("%.2f s", secs));
}

void criterion7() {
  Timer tm;
  double T = 1e-3;
  InverseResult r = approx_inverse_P([](double) { return cplx(1.0); }, T);
  bool mono = r.residual_trace.size() >= 5;
  for (std::size_t k = 1; k < r.residual_trace.size(); ++k) mono = mono && r.residual_trace[k] < r.residual_trace[k - 1];
  cplx pred = kappa_prediction(1.0, T);
  double rel = std::abs(r.kappa - pred) / std::abs(pred);
  double secs = tm.seconds();
  bool ok = mono && rel <= 0.1 && secs < 120;
  report(7, ok, std::to_string(r.residual_trace.size()) + " iterations, residual " +
                    f("%.3g", r.residual_trace.front()) + " -> " + f("%.3g", r.residual_trace.back()) +
                    (mono ? " monotone" : " NOT monotone") + ", kappa " + f("%.4f", r.kappa.real()) + " vs " +
                    f("%.4f", pred.real()) + " (" + f("%.1f%%", 100 * rel) + "), " + f("%.2f s", secs));
}

void criterion8() {
  Timer tm;
  CorotScenario sc;
  sc.n = 256;
  sc.lambda0 = 0.05;
  sc.delta = 0.25;
  sc.run.t_end = 0.5;
  sc.run.diag_every = 50;
  CorotOutcome o = run_corot_scenario(sc);
  const BlowupSummary& s = o.summary;
  bool growth = s.growth >= 50;
  bool plateau = std::abs(s.e_ball_min / kFourPi - 1) <= 0.15 && std::abs(s.e_ball_max / kFourPi - 1) <= 0.15;
  bool rate = s.fit_points >= 3 && s.fit.gamma >= 0.8 && s.fit.gamma <= 1.2;
  bool ok = growth && s.lambda_monotone && plateau && rate;
  report(8, ok, "growth " + f("%.2f", s.growth) + "x (need 50x)" + (growth ? "" : " FAIL") + "; lambda monotone " +
                    (s.lambda_monotone ? "yes" : "no FAIL") + "; ball energy/4pi " + f("%.4f", s.e_ball_min / kFourPi) +
                    ".." + f("%.4f", s.e_ball_max / kFourPi) + (plateau ? "" : " FAIL") + "; exponent " +
                    f("%.3f", s.fit.gamma) + " (" + std::to_string(s.fit_points) + " pts, T_hat " + f("%.4f", s.fit.T_hat) + ", rms " + f("%.2e", s.fit.rms) + ")" + (rate ? "" : " FAIL") +
                    "; stop " + o.run.stop_reason + " at lambda " + f("%.4f", o.run.rows.back().lambda_est) + " = " +
                    f("%.2f", o.run.rows.back().lambda_est / s.h) + " cells; " + f("%.1f s", tm.seconds()));
}

void criterion9() {
  Timer tm;
  Grid2D g;
  g.nr = g.nz = 64;
  MapField e3{g, std::vector<Vec3>(g.size(), Vec3(0, 0, 1)), 0.0};
  MapField u = e3;
  double dt = 0.15 * g.h() * g.h();
  for (int k = 0; k < 100; ++k) u = step(u, dt, Geometry::axisymmetric, Stepper::euler);
  double dev = 0;
  for (std::size_t k = 0; k < u.u.size(); ++k) dev = std::max(dev, norm(u.u[k] - e3.u[k]));
  double worst = -1e300;
  std::string runs;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    DissipationRun d = dissipation_run(seed, 128, 3000);
    worst = std::max(worst, d.max_increase);
    runs += " [" + std::to_string(d.steps) + " steps, E " + f("%.4f", d.e_first) + "->" + f("%.4f", d.e_last) +
            ", max step increase " + f("%.1e", d.max_increase) + "]";
  }
  bool ok = dev <= 1e-15 && worst <= 1e-8;
  report(9, ok, "e3 deviation " + f("%.1e", dev) + ";" + runs + "; " + f("%.1f s", tm.seconds()));
}

void criterion10() {
  Timer tm;
  CrossModel cm = cross_model(256, 0.1, 0.4, 0.6, 8.0, 50);
  bool ok = cm.compared >= 10 && cm.max_rel_diff <= 0.05;
  report(10, ok, "planar map vs corotational lambda traces: max relative difference " + f("%.4f", cm.max_rel_diff) +
                     " over " + std::to_string(cm.compared) + " samples with lambda >= 8 cells; " +
                     f("%.1f s", tm.seconds()));
}

} // namespace

int main() {
  void (*checks[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                        criterion6, criterion7, criterion8, criterion9, criterion10};
  for (int k = 0; k < 10; ++k) {
    try {
      checks[k]();
    } catch (const std::exception& e) {
      report(k + 1, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
