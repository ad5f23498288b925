#include "hmf/modulation.hpp"

#include "hmf/errors.hpp"

#include <cmath>

namespace hmf {

double lambda_star(double t, double T) {
  if (!(T > 0 && T < 1)) throw DomainError("lambda_star: need 0 < T < 1");
  if (!(t < T)) throw DomainError("lambda_star: t must be below T");
  double u = T - t;
  if (u >= 1) throw DomainError("lambda_star: T - t must be below 1");
  double l = std::log(u);
  return std::abs(std::log(T)) * u / (l * l);
}

void ReducedConfig::validate() const {
  if (!(T > 0 && T < 0.5)) throw DomainError("T must lie in (0, 1/2)");
  if (!(r0 > 0)) throw DomainError("r0 must be positive");
  if (!(beta > 0 && beta < 0.5)) throw DomainError("beta must lie in (0, 1/2)");
  if (!(std::sqrt(r0 * r0 + 2 * T) - r0 < domain_radius))
    throw DomainError("center path leaves the domain");
  if (!a0_star && !z0_star) throw DomainError("either a0_star or z0_star is required");
}

double xi1_exact(double t, double r0, double T) { return std::sqrt(r0 * r0 + 2 * (T - t)); }

XiTrajectory solve_xi(const ReducedConfig& cfg, int n_steps) {
  if (!(cfg.r0 > 0 && cfg.T > 0)) throw DomainError("solve_xi: invalid configuration");
  if (n_steps < 1) throw DomainError("solve_xi: need at least one step");
  auto f = [](double x) {
    if (!(x > 0)) throw NumericalError("solve_xi: xi1 crossed zero");
    return -1.0 / x;
  };
  XiTrajectory tr;
  int n = n_steps;
  tr.t.resize(n + 1);
  tr.xi1.resize(n + 1);
  tr.xi2.assign(n + 1, cfg.z0);
  tr.xi1dot.resize(n + 1);
  double h = -cfg.T / n;
  double x = cfg.r0;
  tr.t[n] = cfg.T;
  tr.xi1[n] = x;
  for (int k = n; k > 0; --k) {
    double k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    tr.t[k - 1] = cfg.T * (k - 1) / n;
    tr.xi1[k - 1] = x;
  }
  for (int k = 0; k <= n; ++k) tr.xi1dot[k] = f(tr.xi1[k]);
  return tr;
}

cplx a0_from_field(const ComplexPlaneField& z0, double r0, double z0c, double h) {
  cplx dr = (z0(r0 + h, z0c) - z0(r0 - h, z0c)) / (2 * h);
  cplx dz = (z0(r0, z0c + h) - z0(r0, z0c - h)) / (2 * h);
  double div = dr.real() + dz.imag();
  double curl = dr.imag() - dz.real();
  cplx a(div, curl);
  if (std::abs(a) < 1e-8) throw DomainError("nondegeneracy violated: |div + i curl| < 1e-8");
  return a;
}

ComplexPlaneField default_z0_star(double r0, double z0, double alpha0, double radius) {
  return [=](double r, double z) {
    double d = std::hypot(r - r0, z - z0) / radius;
    // C^infinity step: 1 for d <= 1/2, 0 for d >= 1
    double chi = 1.0;
    if (d >= 1) {
      chi = 0;
    } else if (d > 0.5) {
      double x = 2 * (1 - d);  // in (0,1)
      double a = std::exp(-1 / x), b = std::exp(-1 / (1 - x));
      chi = a / (a + b);
    }
    return alpha0 * cplx(r - r0, 0.5 * (z - z0)) * chi;
  };
}

PredictedTrajectory predicted_p(const ReducedConfig& cfg, int n_out, const InverseParams& params) {
  cfg.validate();
  PredictedTrajectory out;
  out.a0 = cfg.a0_star ? *cfg.a0_star : a0_from_field(cfg.z0_star, cfg.r0, cfg.z0);
  if (std::abs(out.a0) < 1e-8) throw DomainError("nondegeneracy violated: a0 = 0");
  cplx a0 = out.a0;
  InverseResult inv = approx_inverse_P([a0](double) { return a0; }, cfg.T, params);
  out.kappa = inv.kappa;
  out.kappa_alt = -inv.kappa;
  out.residual_trace = inv.residual_trace;
  XiTrajectory xi = solve_xi(cfg, std::max(1, n_out - 1));
  for (std::size_t k = 0; k < xi.t.size(); ++k) {
    double t = xi.t[k];
    out.t.push_back(t);
    out.xi1.push_back(xi.xi1[k]);
    out.xi2.push_back(xi.xi2[k]);
    cplx p = inv.p.p(t);
    out.p.push_back(p);
    if (t < cfg.T) {
      double ls = lambda_star(t, cfg.T);
      out.lambda_star.push_back(ls);
      out.ratio.push_back(std::abs(p) / ls);
    } else {
      out.lambda_star.push_back(0.0);
      out.ratio.push_back(std::abs(out.kappa));
    }
  }
  return out;
}

} // namespace hmf
