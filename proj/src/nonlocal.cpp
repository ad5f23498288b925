#include "hmf/nonlocal.hpp"

#include "hmf/errors.hpp"
#include "hmf/modulation.hpp"
#include "hmf/quadrature.hpp"

#include <cmath>
// Boost 1.74 pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>

namespace hmf {

KernelJet kernel_K(double zeta) {
  if (!(zeta >= 0)) throw DomainError("kernel_K: zeta must be nonnegative");
  double x = 0.25 * zeta;
  double g, xg1, x2g2;
  if (x < 0.5) {
    // g(x) = sum (-x)^n/(n+1)!
    g = xg1 = x2g2 = 0;
    double term = 1.0;  // (-x)^n/(n+1)!
    for (int n = 0; n < 30; ++n) {
      g += term;
      xg1 += n * term;
      x2g2 += n * (n - 1.0) * term;
      term *= -x / (n + 2.0);
    }
  } else {
    double e = std::exp(-x);
    double om = -std::expm1(-x);
    g = om / x;
    xg1 = e - om / x;
    x2g2 = -x * e - 2.0 * e + 2.0 * om / x;
  }
  return {0.5 * g, 0.5 * xg1, 0.5 * x2g2};
}

double kernel_k(double z, double t) {
  if (!(t > 0)) throw DomainError("kernel_k: t must be positive");
  return kernel_K(z * z / t).K / t;
}

// ---------------------------------------------------------------- PHistory

PHistory::PHistory(double T, std::vector<double> t, std::vector<cplx> p, std::vector<cplx> pdot)
    : T_(T), t_(std::move(t)), p_(std::move(p)), pd_(std::move(pdot)) {
  if (!(T > 0)) throw DomainError("PHistory: T must be positive");
  if (t_.size() < 2 || p_.size() != t_.size() || pd_.size() != t_.size())
    throw DomainError("PHistory: inconsistent sample sizes");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1])) throw DomainError("PHistory: grid must be strictly increasing");
  if (std::abs(t_.front() + T) > 1e-12 * T) throw DomainError("PHistory: grid must start at -T");
}

PHistory PHistory::sample(double T, const std::vector<double>& grid,
                          const std::function<cplx(double)>& p,
                          const std::function<cplx(double)>& pdot) {
  std::vector<cplx> ps, pds;
  for (double t : grid) {
    ps.push_back(p(t));
    pds.push_back(pdot(t));
  }
  return PHistory(T, grid, std::move(ps), std::move(pds));
}

std::size_t PHistory::segment(double t) const {
  if (t < t_.front() - 1e-14 * T_ || t > t_.back() + 1e-14 * T_)
    throw DomainError("PHistory: time outside the sampled range");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

cplx PHistory::p(double t) const {
  std::size_t i = segment(t);
  double h = t_[i + 1] - t_[i], s = (t - t_[i]) / h;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * p_[i] + h10 * h * pd_[i] + h01 * p_[i + 1] + h11 * h * pd_[i + 1];
}

cplx PHistory::pdot(double t) const {
  std::size_t i = segment(t);
  double h = t_[i + 1] - t_[i], s = (t - t_[i]) / h;
  double d00 = 6 * s * (s - 1) / h, d10 = (1 - s) * (1 - 3 * s);
  double d01 = -d00, d11 = s * (3 * s - 2);
  return d00 * p_[i] + d10 * pd_[i] + d01 * p_[i + 1] + d11 * pd_[i + 1];
}

std::vector<double> graded_history_grid(double T, double ratio, double u_min_rel) {
  if (!(T > 0 && ratio > 1 && u_min_rel > 0 && u_min_rel < 1))
    throw DomainError("graded_history_grid: invalid parameters");
  std::vector<double> s;
  for (double u = 2 * T; u > u_min_rel * T; u /= ratio) s.push_back(T - u);
  s.push_back(T);
  s.front() = -T;
  return s;
}

// ---------------------------------------------------------------- phi0

namespace {

// int_a^b f(u) du on geometric panels (ratio 2) in u, Gauss-Legendre 8 per panel.
template <class F> cplx graded_integral(F&& f, double a, double b) {
  cplx acc = 0;
  if (!(b > a)) return acc;
  auto br = quad::geometric_breaks(a, b, 2.0);
  const quad::Rule& ref = quad::gauss_legendre_ref(8);
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    double c = 0.5 * (br[k] + br[k + 1]), h = 0.5 * (br[k + 1] - br[k]);
    for (std::size_t q = 0; q < ref.x.size(); ++q) acc += h * ref.w[q] * f(c + h * ref.x[q]);
  }
  return acc;
}

// int_a^b f(u)/u du for 0 < a, b (oriented), via x = log u.
template <class F> cplx log_integral(F&& f, double a, double b) {
  if (a == b) return 0.0;
  double xa = std::log(a), xb = std::log(b);
  int n = std::max(1, static_cast<int>(std::ceil(std::abs(xb - xa) / 0.25)));
  const quad::Rule& ref = quad::gauss_legendre_ref(16);
  cplx acc = 0;
  double h = (xb - xa) / n;
  for (int k = 0; k < n; ++k) {
    double c = xa + (k + 0.5) * h;
    for (std::size_t q = 0; q < ref.x.size(); ++q) acc += 0.5 * h * ref.w[q] * f(std::exp(c + 0.5 * h * ref.x[q]));
  }
  return acc;
}

} // namespace

cplx phi0(double s, double t, const PHistory& hist, double lambda) {
  if (!(s >= 0)) throw DomainError("phi0: s must be nonnegative");
  if (t > hist.t_end() || t <= -hist.T()) throw DomainError("phi0: history does not cover [-T, t]");
  if (s == 0) return 0.0;
  double z2 = s * s + lambda * lambda;
  double T = hist.T();
  auto f = [&](double u) { return hist.pdot(t - u) * (kernel_K(z2 / u).K / u); };
  double U = t + T;
  double u_lo = std::min(U, 1e-6 * z2);
  cplx acc = graded_integral(f, u_lo, U);
  // [0, u_lo]: the kernel tends to 2/z^2 and is smooth.
  const quad::Rule& ref = quad::gauss_legendre_ref(8);
  for (std::size_t q = 0; q < ref.x.size(); ++q) {
    double u = 0.5 * u_lo * (1 + ref.x[q]);
    acc += 0.5 * u_lo * ref.w[q] * f(u);
  }
  return -s * acc;
}

Vec3 Phi0_field(double r, double z, const std::array<double, 2>& xi, double t,
                const PHistory& hist, double lambda) {
  double dr = r - xi[0], dz = z - xi[1];
  double s = std::hypot(dr, dz);
  double th = s > 0 ? std::atan2(dz, dr) : 0.0;
  cplx v = phi0(s, t, hist, lambda) * std::polar(1.0, th);
  return {v.real(), v.imag(), 0.0};
}

// ---------------------------------------------------------------- Gamma

namespace {

// Integrand in x with v = 1/(1+rho^2) = e^{-x}; zeta = tau/v.
double gamma_integrand(int l, double tau, double x) {
  double v = std::exp(-x);
  double om = -std::expm1(-x);
  KernelJet k = kernel_K(tau / v);
  double br = l == 1 ? k.K + 2 * om * k.zK1 - 4 * (1 - 2 * v) * k.z2K2 : k.K - k.z2K2;
  return 4 * om * v * br;
}

double gamma_upper(double tau) { return std::max(0.0, std::log(1.0 / tau)) + 30.0; }

void check_gamma_args(int l, double tau) {
  if (l != 1 && l != 2) throw DomainError("gamma: l must be 1 or 2");
  if (!(tau > 0)) throw DomainError("gamma: tau must be positive");
}

// Fixed rule used for tabulation: Gauss-Legendre 16 on half-unit panels in x.
double gamma_fixed(int l, double tau) {
  check_gamma_args(l, tau);
  double X = gamma_upper(tau);
  int n = static_cast<int>(std::ceil(X / 0.5));
  double h = X / n;
  const quad::Rule& ref = quad::gauss_legendre_ref(16);
  double acc = 0;
  for (int k = 0; k < n; ++k) {
    double c = (k + 0.5) * h;
    for (std::size_t q = 0; q < ref.x.size(); ++q)
      acc += 0.5 * h * ref.w[q] * gamma_integrand(l, tau, c + 0.5 * h * ref.x[q]);
  }
  return acc;
}

} // namespace

double gamma(int l, double tau) {
  check_gamma_args(l, tau);
  double X = gamma_upper(tau);
  std::vector<double> br;
  for (double x = 0; x < X; x += 2.0) br.push_back(x);
  br.push_back(X);
  return quad::adaptive_panels([l, tau](double x) { return gamma_integrand(l, tau, x); }, br, 1e-12)
      .value;
}

struct KernelTable::Interp {
  boost::math::interpolators::pchip<std::vector<double>> g1, g2;
};

KernelTable::KernelTable(int n, double tau_min, double tau_max) {
  if (n < 4 || !(tau_min > 0 && tau_max > tau_min)) throw DomainError("KernelTable: invalid range");
  tau_.resize(n);
  g1_.resize(n);
  g2_.resize(n);
  double a = std::log(tau_min), b = std::log(tau_max);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = a + (b - a) * i / (n - 1);
    tau_[i] = std::exp(x[i]);
    g1_[i] = gamma_fixed(1, tau_[i]);
    g2_[i] = gamma_fixed(2, tau_[i]);
  }
  auto x2 = x;
  auto y1 = g1_, y2 = g2_;
  interp_ = std::make_unique<Interp>(
      Interp{boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y1)),
             boost::math::interpolators::pchip<std::vector<double>>(std::move(x2), std::move(y2))});
  // small-tau expansion through node 0 and the node nearest 10 tau_min
  int j = std::min(n - 1, static_cast<int>(std::round((n - 1) * std::log(10.0) / (b - a))));
  if (j >= 1) {
    for (int l = 0; l < 2; ++l) {
      const auto& g = l == 0 ? g1_ : g2_;
      double y0 = (g[0] - 1) / tau_[0], y1 = (g[j] - 1) / tau_[j];
      double x0 = std::log(tau_[0]), x1 = std::log(tau_[j]);
      small_[l][0] = (y1 - y0) / (x1 - x0);
      small_[l][1] = y0 - small_[l][0] * x0;
    }
  }
  large_bound_ = std::max(fit_gamma_bounds(1, *this).C_large, fit_gamma_bounds(2, *this).C_large);
}

KernelTable::~KernelTable() = default;
KernelTable::KernelTable(KernelTable&&) noexcept = default;

double KernelTable::operator()(int l, double tau) const {
  if (!(tau > 0)) throw DomainError("KernelTable: tau must be positive");
  if (tau > tau_.back() && tau_.back() >= 400) {
    // K(zeta) = 2/zeta up to e^{-zeta/4} once zeta >= tau > 400.
    return l == 1 ? 0.0 : -4.0 / (3.0 * tau);
  }
  if (tau < tau_.front()) {
    // Gamma - 1 = tau (a log tau + b) + O(tau^2 log^2 tau)
    const auto& c = small_[l - 1];
    return 1.0 + tau * (c[0] * std::log(tau) + c[1]);
  }
  if (tau > tau_.back()) return gamma_fixed(l, tau);
  double x = std::log(tau);
  return l == 1 ? interp_->g1(x) : interp_->g2(x);
}

const KernelTable& KernelTable::shared() {
  static const KernelTable table;
  return table;
}

GammaBounds fit_gamma_bounds(int l, const KernelTable& table) {
  GammaBounds b{0, 0};
  const auto& g = table.values(l);
  for (int i = 0; i < table.size(); ++i) {
    double tau = table.tau()[i];
    if (tau >= 1e-6 && tau <= 1)
      b.C_small = std::max(b.C_small, std::abs(g[i] - 1) / (tau * (1 + std::abs(std::log(tau)))));
    if (tau >= 1 && tau <= 1e4) b.C_large = std::max(b.C_large, std::abs(g[i]) * tau);
  }
  return b;
}

// ---------------------------------------------------------------- B0

namespace {

// I_1 + i I_2 = int pdot(t-u) e^{-i om} Gamma_l(lam^2/u) du/u over [u_lo, t+T];
// returns u_lo.
double B0_integrals(const PHistory& hist, double t, double lam, double om,
                    const KernelTable& table, double& i1, double& i2) {
  cplx rot = std::polar(1.0, -om);
  double l2 = lam * lam;
  double U = t + hist.T();
  double u_lo = std::min(U, 1e-8 * l2);
  i1 = i2 = 0;
  auto br = quad::geometric_breaks(u_lo, U, 2.0);
  const quad::Rule& ref = quad::gauss_legendre_ref(8);
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    double c = 0.5 * (br[k] + br[k + 1]), h = 0.5 * (br[k + 1] - br[k]);
    for (std::size_t q = 0; q < ref.x.size(); ++q) {
      double u = c + h * ref.x[q];
      cplx g = hist.pdot(t - u) * rot;
      double wq = h * ref.w[q] / u;
      i1 += wq * g.real() * table(1, l2 / u);
      i2 += wq * g.imag() * table(2, l2 / u);
    }
  }
  return u_lo;
}

} // namespace

cplx B0_integral_part(const PHistory& hist, double t, double lambda, double omega,
                      const KernelTable& table) {
  if (!(lambda > 0)) throw DomainError("B0: degenerate scale lambda(t) = 0");
  double i1, i2;
  B0_integrals(hist, t, lambda, omega, table, i1, i2);
  return std::polar(1.0, omega) * cplx(i1, i2);
}

B0Value B0(const PHistory& hist, double t, const KernelTable& table) {
  double T = hist.T();
  if (!(t >= -T && t < T && t <= hist.t_end())) throw DomainError("B0: t outside [0, T)");
  cplx pt = hist.p(t);
  double lam = std::abs(pt);
  if (!(lam > 0)) throw DomainError("B0: degenerate scale lambda(t) = 0");
  double om = std::arg(pt);
  // lambda' by the centered five point stencil on |p|
  double hs = 0.01 * (T - t);
  hs = std::min({hs, (hist.t_end() - t) / 2.5, (t - hist.t_begin()) / 2.5});
  if (!(hs > 0)) throw DomainError("B0: no room for the lambda' stencil");
  double lamdot = (-std::abs(hist.p(t + 2 * hs)) + 8 * std::abs(hist.p(t + hs)) -
                   8 * std::abs(hist.p(t - hs)) + std::abs(hist.p(t - 2 * hs))) /
                  (12 * hs);
  double i1 = 0, i2 = 0;
  double u_lo = B0_integrals(hist, t, lam, om, table, i1, i2);
  B0Value out;
  out.b01 = 2 * i1 - 2 * lamdot;
  out.b02 = 2 * i2;
  out.value = 0.5 * std::polar(1.0, om) * cplx(out.b01, out.b02);
  // |Gamma(tau)| <= C/tau for tau > 1 bounds the dropped panel by 2 C |pdot| u_lo / lambda^2.
  double C = table.large_bound();
  double pd = std::max(std::abs(hist.pdot(t)), std::abs(hist.pdot(t - u_lo)));
  out.tail_bound = 2 * C * pd * u_lo / (lam * lam);
  return out;
}

// ---------------------------------------------------------------- S / R

SplitValue split_S_R(const std::function<cplx(double)>& g, double t, double alpha, double T) {
  if (!(alpha > 0 && alpha < 0.5)) throw DomainError("split_S_R: alpha must lie in (0, 1/2)");
  if (!(t >= 0 && t < T)) throw DomainError("split_S_R: t must lie in [0, T)");
  double ls = lambda_star(t, T);
  double A = std::pow(T - t, 1 + alpha), B = ls * ls;
  cplx gt = g(t);
  double L = -2 * std::log(ls) + (1 + alpha) * std::log(T - t);
  SplitValue out;
  out.S = gt * L + log_integral([&](double u) { return g(t - u); }, A, t + T);
  out.R = -log_integral([&](double u) { return gt - g(t - u); }, B, A);
  return out;
}

cplx dominant_integral(const std::function<cplx(double)>& g, double t, double T) {
  if (!(t >= 0 && t < T)) throw DomainError("dominant_integral: t must lie in [0, T)");
  double ls = lambda_star(t, T);
  return log_integral([&](double u) { return g(t - u); }, ls * ls, t + T);
}

// ---------------------------------------------------------------- p_{0,kappa}

cplx p0_kappa(cplx kappa, double t, double T) {
  if (!(T > 0 && T < 0.5)) throw DomainError("p0_kappa: need 0 < T < 1/2");
  if (!(t >= -T && t <= T)) throw DomainError("p0_kappa: t outside [-T, T]");
  double u = T - t;
  if (u == 0) return 0.0;
  double lu = std::log(u);
  return kappa * std::abs(std::log(T)) * (std::expint(lu) - u / lu);
}

cplx p0_kappa_dot(cplx kappa, double t, double T) {
  if (!(t >= -T && t <= T)) throw DomainError("p0_kappa_dot: t outside [-T, T]");
  double u = T - t;
  if (u == 0) return 0.0;
  double lu = std::log(u);
  return -kappa * std::abs(std::log(T)) / (lu * lu);
}

cplx p0_bracket(cplx kappa, double t, double T) {
  if (!(T > 0 && T < 0.5) || !(t >= -T && t < T)) throw DomainError("p0_bracket: need -T <= t < T < 1/2");
  // x = log(T - s)
  double x_lo = std::log(T - t), x_hi = std::log(2 * T);
  auto f = [&](double x) { return p0_kappa_dot(1.0, T - std::exp(x), T).real(); };
  double I = x_hi > x_lo ? quad::adaptive(f, x_lo, x_hi, 1e-14).value : 0.0;
  return kappa * (I - p0_kappa_dot(1.0, t, T).real() * x_lo);
}

cplx kappa_prediction(cplx a, double T) {
  // int_{-T}^T pdot_hat/(T-s) ds with x = log(T-s); tail below x = -X0 added exactly.
  double lT = std::abs(std::log(T));
  double x_hi = std::log(2 * T), X0 = 1e4;
  quad::Result r = quad::adaptive([&](double x) { return -lT / (x * x); }, -X0, x_hi, 1e-13);
  double J = r.value - lT / X0;
  return a / J;
}

} // namespace hmf
