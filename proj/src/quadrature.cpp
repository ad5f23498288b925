#include "hmf/quadrature.hpp"

#include "hmf/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace hmf::quad {

namespace bq = boost::math::quadrature;

Result adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                unsigned max_depth) {
  if (a == b) return {};
  double err = 0;
  double l1 = 0;
  double v = bq::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err, &l1);
  if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value", err);
  if (err > 100 * tol * std::max(1.0, l1))
    throw NumericalError("adaptive quadrature did not converge, error " + std::to_string(err), err);
  return {v, err};
}

Result adaptive_panels(const std::function<double(double)>& f, const std::vector<double>& breaks,
                       double tol) {
  Result r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Result p = adaptive(f, breaks[i], breaks[i + 1], tol);
    r.value += p.value;
    r.error += p.error;
  }
  return r;
}

namespace {

template <int N> Rule expand() {
  Rule r;
  const auto& xa = bq::gauss<double, N>::abscissa();
  const auto& wa = bq::gauss<double, N>::weights();
  for (std::size_t i = 0; i < xa.size(); ++i) {
    if (xa[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(wa[i]);
      continue;
    }
    r.x.push_back(-xa[i]);
    r.w.push_back(wa[i]);
    r.x.push_back(xa[i]);
    r.w.push_back(wa[i]);
  }
  return r;
}

} // namespace

const Rule& gauss_legendre_ref(int n) {
  static const Rule r4 = expand<4>(), r8 = expand<8>(), r16 = expand<16>(), r32 = expand<32>();
  switch (n) {
  case 4: return r4;
  case 8: return r8;
  case 16: return r16;
  case 32: return r32;
  default: throw DomainError("unsupported Gauss-Legendre order " + std::to_string(n));
  }
}

Rule gauss_legendre(int n, double a, double b) {
  const Rule& ref = gauss_legendre_ref(n);
  Rule r;
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  r.x.reserve(ref.x.size());
  r.w.reserve(ref.x.size());
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    r.x.push_back(c + h * ref.x[i]);
    r.w.push_back(h * ref.w[i]);
  }
  return r;
}

std::vector<double> geometric_breaks(double lo, double hi, double q) {
  if (!(lo > 0 && hi > lo && q > 1)) throw DomainError("geometric_breaks: need 0 < lo < hi, q > 1");
  int n = std::max(1, static_cast<int>(std::ceil(std::log(hi / lo) / std::log(q))));
  std::vector<double> b(n + 1);
  double r = std::pow(hi / lo, 1.0 / n);
  b[0] = lo;
  for (int i = 1; i < n; ++i) b[i] = b[i - 1] * r;
  b[n] = hi;
  return b;
}

} // namespace hmf::quad
