#include "hmf/errors.hpp"
#include "hmf/modulation.hpp"
#include "hmf/nonlocal.hpp"

#include <cmath>
#include <sstream>

namespace hmf {

std::string InverseResult::trace() const {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < residual_trace.size(); ++i)
    os << (i ? " " : "") << residual_trace[i];
  return os.str();
}

namespace {

// p = p_{0,kappa} + p1 with p1' = q on the grid and p1(T) = 0.
PHistory assemble(double T, const std::vector<double>& grid, cplx kappa, const std::vector<cplx>& q) {
  std::size_t n = grid.size();
  std::vector<cplx> p1(n), p(n), pd(n);
  p1[n - 1] = 0;
  for (std::size_t k = n - 1; k-- > 0;) p1[k] = p1[k + 1] - 0.5 * (grid[k + 1] - grid[k]) * (q[k] + q[k + 1]);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = p0_kappa(kappa, grid[k], T) + p1[k];
    pd[k] = p0_kappa_dot(kappa, grid[k], T) + q[k];
  }
  return PHistory(T, grid, std::move(p), std::move(pd));
}

// Solve S_alpha[dq](t_k) = r_k on the collocation nodes, dq piecewise linear
// in s, constant before the first and after the last collocation node.
std::vector<cplx> invert_S(const std::vector<double>& grid, const std::vector<std::size_t>& col,
                           const std::vector<double>& L, const std::vector<double>& A,
                           const std::vector<cplx>& r) {
  std::size_t n = grid.size(), k0 = col.front(), k1 = col.back();
  std::vector<cplx> dq(n, 0.0);
  for (std::size_t k : col) {
    double t = grid[k], cut = t - A[k];
    // int_{-T}^{cut} dq(s)/(t-s) ds = sum_j w_j dq_j; nodes below k0 are tied to k0.
    cplx known = 0;
    double self = L[k];
    for (std::size_t j = 0; j + 1 <= k && grid[j] < cut; ++j) {
      double sa = grid[j], sb = std::min(grid[j + 1], cut);
      double h = grid[j + 1] - grid[j];
      double I0 = std::log((t - sa) / (t - sb));
      // hat functions of the full interval restricted to [sa, sb]
      double Ib = ((t - sa) * I0 - (sb - sa)) / h;
      double Ia = I0 - Ib;
      std::size_t ja = std::max(j, k0), jb = std::max(j + 1, k0);
      if (ja == k) self += Ia; else known += Ia * dq[ja];
      if (jb == k) self += Ib; else known += Ib * dq[jb];
    }
    dq[k] = (r[k] - known) / self;
  }
  for (std::size_t k = 0; k < k0; ++k) dq[k] = dq[k0];
  for (std::size_t k = k1 + 1; k < n; ++k) dq[k] = dq[k1];
  return dq;
}

} // namespace

InverseResult approx_inverse_P(const std::function<cplx(double)>& a, double T,
                               const InverseParams& prm, const KernelTable& table) {
  if (!(T > 0 && T < 0.5)) throw DomainError("approx_inverse_P: need 0 < T < 1/2");
  if (!(prm.damping > 0 && prm.damping <= 1)) throw DomainError("approx_inverse_P: damping in (0,1]");
  if (!(prm.alpha > 0 && prm.alpha < 0.5)) throw DomainError("approx_inverse_P: alpha in (0,1/2)");
  std::vector<double> grid = graded_history_grid(T, prm.grid_ratio);
  std::size_t n = grid.size();

  std::vector<std::size_t> col;
  for (std::size_t k = 0; k < n; ++k)
    if (grid[k] >= 0 && T - grid[k] >= prm.collocation_u_min * T) col.push_back(k);
  if (col.size() < 2) throw DomainError("approx_inverse_P: too few collocation points");

  std::vector<cplx> av(n);
  double amax = 0;
  for (std::size_t k : col) {
    av[k] = a(grid[k]);
    amax = std::max(amax, std::abs(av[k]));
  }
  std::vector<cplx> q(n, 0.0);
  if (amax == 0) {
    InverseResult z{0.0, 0.0, assemble(T, grid, 0.0, q), {0.0}, 0};
    return z;
  }
  cplx aT = a(T);
  if (std::abs(aT) < 1e-12) throw DomainError("approx_inverse_P: a(T) vanishes (nondegeneracy)");

  std::vector<double> Lloc(n, 0.0), A(n, 0.0);
  for (std::size_t k : col) {
    double u = T - grid[k];
    A[k] = std::pow(u, 1 + prm.alpha);
    Lloc[k] = -2 * std::log(lambda_star(grid[k], T)) + (1 + prm.alpha) * std::log(u);
  }

  cplx kappa = kappa_prediction(aT, T);
  InverseResult res{kappa, kappa, assemble(T, grid, kappa, q), {}, 0};
  int increases = 0;
  std::vector<cplx> r(n);
  for (int it = 0; it < prm.max_iter; ++it) {
    PHistory hist = assemble(T, grid, kappa, q);
    double wres = 0;
    for (std::size_t k : col) {
      r[k] = av[k] - B0(hist, grid[k], table).value;
      double w = std::pow(std::abs(std::log(T - grid[k])), prm.weight_power);
      wres = std::max(wres, std::abs(r[k]) * w);
    }
    if (!std::isfinite(wres)) throw ConvergenceError("approx_inverse_P: non-finite residual", res.trace());
    double prev = res.residual_trace.empty() ? INFINITY : res.residual_trace.back();
    res.residual_trace.push_back(wres);
    if (wres < prev) {
      increases = 0;
      res.kappa = kappa;
      res.p = hist;
      res.iterations = it;
      if (prev < INFINITY && (prev - wres) < prm.stagnation * prev) break;
    } else if (++increases >= 3) {
      throw ConvergenceError("approx_inverse_P: residual increased on 3 consecutive iterations",
                             res.trace());
    }
    // Dominant-part correction: the terminal residual fixes kappa, the rest
    // is absorbed locally through the log-quotient coefficient of S_alpha.
    // Correction dq = S_alpha^{-1}[r] by forward marching; S_alpha is causal
    // apart from the local log-quotient term.
    std::vector<cplx> dq = invert_S(grid, col, Lloc, A, r);
    for (std::size_t k = 0; k < n; ++k) q[k] += prm.damping * dq[k];
    // Relabel: move the terminal value of q into kappa (p is unchanged).
    std::size_t kl = col.back();
    cplx dk = q[kl] / p0_kappa_dot(1.0, grid[kl], T);
    kappa += dk;
    for (std::size_t k = 0; k < n; ++k) q[k] -= dk * p0_kappa_dot(1.0, grid[k], T);
  }
  return res;
}

} // namespace hmf
