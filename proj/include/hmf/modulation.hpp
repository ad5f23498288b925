#pragma once

#include "hmf/nonlocal.hpp"
#include "hmf/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hmf {

// lambda_*(t) = |log T| (T - t)/log^2(T - t).
double lambda_star(double t, double T);

// First component z0 = z01 + i z02 of the smooth field Z0*, as a function of (r,z).
using ComplexPlaneField = std::function<cplx(double r, double z)>;

struct ReducedConfig {
  double T = 1e-3;
  double r0 = 1.0, z0 = 0.0;
  double beta = 0.25;
  double domain_radius = 1.0;  // xi1(0) - r0 must stay below this
  std::optional<cplx> a0_star;
  ComplexPlaneField z0_star;  // used when a0_star is empty

  void validate() const;
};

struct XiTrajectory {
  std::vector<double> t, xi1, xi2, xi1dot;
};

double xi1_exact(double t, double r0, double T);

// Backward RK4 for xi1' = -1/xi1, xi2' = 0 from xi(T) = (r0, z0).
XiTrajectory solve_xi(const ReducedConfig& cfg, int n_steps);

// div z + i curl z at q by centered differences.
cplx a0_from_field(const ComplexPlaneField& z0, double r0, double z0c, double h = 1e-5);

// alpha0 [(r - r0) + 0.5 i (z - z0)] times a smooth cutoff equal to 1 near q.
ComplexPlaneField default_z0_star(double r0, double z0, double alpha0 = 0.05, double radius = 0.5);

struct PredictedTrajectory {
  cplx a0;
  cplx kappa;      // p ~ kappa |log T| int_t^T ds/log^2(T-s)
  cplx kappa_alt;  // opposite sign convention, pdot ~ +kappa_alt |log T|/log^2(T-t)
  std::vector<double> t, xi1, xi2, lambda_star;
  std::vector<cplx> p;
  std::vector<double> ratio;  // |p|/lambda_*
  std::vector<double> residual_trace;
};

PredictedTrajectory predicted_p(const ReducedConfig& cfg, int n_out = 201,
                                const InverseParams& params = {});

} // namespace hmf
