#pragma once

#include "hmf/types.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hmf {

// K(zeta) = 2(1 - e^{-zeta/4})/zeta with zeta K' and zeta^2 K''.
struct KernelJet {
  double K, zK1, z2K2;
};
KernelJet kernel_K(double zeta);

// k(z,t) = 2(1 - e^{-z^2/4t})/z^2 = K(z^2/t)/t.
double kernel_k(double z, double t);

// Complex p(t) sampled on a strictly increasing grid starting at -T.
// p is interpolated by cubic Hermite with the stored pdot as slopes; pdot(t)
// is the derivative of that interpolant.
class PHistory {
public:
  PHistory(double T, std::vector<double> t, std::vector<cplx> p, std::vector<cplx> pdot);

  static PHistory sample(double T, const std::vector<double>& grid,
                         const std::function<cplx(double)>& p,
                         const std::function<cplx(double)>& pdot);

  double T() const { return T_; }
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  const std::vector<double>& grid() const { return t_; }
  const std::vector<cplx>& p_samples() const { return p_; }
  const std::vector<cplx>& pdot_samples() const { return pd_; }

  cplx p(double t) const;
  cplx pdot(double t) const;

private:
  std::size_t segment(double t) const;

  double T_;
  std::vector<double> t_;
  std::vector<cplx> p_, pd_;
};

// Grid in u = T - s, geometric from 2T down to u_min, plus the point s = T.
std::vector<double> graded_history_grid(double T, double ratio = 1.05, double u_min_rel = 1e-8);

// phi^0(s,t) = -int_{-T}^t pdot(tau) s k(sqrt(s^2 + lambda^2), t - tau) dtau.
cplx phi0(double s, double t, const PHistory& hist, double lambda);

// Phi^0 = (phi^0 e^{i theta}, 0) at (r,z) = xi + s e^{i theta}.
Vec3 Phi0_field(double r, double z, const std::array<double, 2>& xi, double t,
                const PHistory& hist, double lambda);

// Gamma_l(tau) by direct quadrature.
double gamma(int l, double tau);

class KernelTable {
public:
  explicit KernelTable(int n = 2048, double tau_min = 1e-8, double tau_max = 1e4);
  ~KernelTable();
  KernelTable(KernelTable&&) noexcept;

  // Interpolated inside the table range, direct quadrature outside.
  double operator()(int l, double tau) const;

  int size() const { return static_cast<int>(tau_.size()); }
  const std::vector<double>& tau() const { return tau_; }
  const std::vector<double>& values(int l) const { return l == 1 ? g1_ : g2_; }
  // max over l of sup |Gamma_l(tau)| tau on [1, 1e4]
  double large_bound() const { return large_bound_; }

  // Shared default table, built on first use.
  static const KernelTable& shared();

private:
  struct Interp;
  std::vector<double> tau_, g1_, g2_;
  std::unique_ptr<Interp> interp_;
  double large_bound_ = 0;
  std::array<std::array<double, 2>, 2> small_{};
};

struct GammaBounds {
  double C_small;  // max |Gamma - 1| / (tau (1 + |log tau|)) on [1e-6, 1]
  double C_large;  // max |Gamma| tau on [1, 1e4]
};
GammaBounds fit_gamma_bounds(int l, const KernelTable& table);

struct B0Value {
  cplx value;
  double b01 = 0, b02 = 0;
  double tail_bound = 0;  // bound on the neglected u < u_lo panel
};

// Nonlocal operator at time t; the integral term carries weight 2 so that
// B0 ~ int pdot/(t - s) ds for slowly varying pdot.
B0Value B0(const PHistory& hist, double t, const KernelTable& table = KernelTable::shared());

// e^{i omega}(I_1 + i I_2): the part of B0 linear in pdot at fixed lambda, omega.
cplx B0_integral_part(const PHistory& hist, double t, double lambda, double omega,
                      const KernelTable& table = KernelTable::shared());

struct SplitValue {
  cplx S, R;
};

// S_alpha / R_alpha with lambda_* evaluated from (t, T).
SplitValue split_S_R(const std::function<cplx(double)>& g, double t, double alpha, double T);

// int_{-T}^{t - lambda_*^2} g(s)/(t-s) ds by direct quadrature.
cplx dominant_integral(const std::function<cplx(double)>& g, double t, double T);

// p_{0,kappa}(t) = kappa |log T| int_t^T ds / log^2(T - s) and its derivative.
cplx p0_kappa(cplx kappa, double t, double T);
cplx p0_kappa_dot(cplx kappa, double t, double T);

// int_{-T}^t pdot(s)/(T - s) ds - pdot(t) log(T - t) for p = p_{0,kappa}.
cplx p0_bracket(cplx kappa, double t, double T);

struct InverseParams {
  double alpha = 0.25;
  double damping = 0.5;
  int max_iter = 40;
  int weight_power = 1;       // residual weight |log(T - t)|^l
  double stagnation = 1e-3;   // stop when the relative residual drop is below this
  double grid_ratio = 1.05;
  double collocation_u_min = 1e-6;  // collocation on T - t >= this * T
};

struct InverseResult {
  cplx kappa;
  cplx kappa_initial;
  PHistory p;
  std::vector<double> residual_trace;  // weighted sup residual per iteration
  int iterations = 0;
  std::string trace() const;
};

// Approximate inverse of B0: p = p_{0,kappa} + p1 with B0[p] ~ a on [0,T).
InverseResult approx_inverse_P(const std::function<cplx(double)>& a, double T,
                               const InverseParams& params = {},
                               const KernelTable& table = KernelTable::shared());

// kappa predicted from kappa * int_{-T}^T pdot_hat/(T - s) ds = a, where
// pdot_hat = -|log T|/log^2(T - s) is the unit-kappa ansatz; integral by quadrature.
cplx kappa_prediction(cplx a, double T);

} // namespace hmf
