#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace hmf::quad {

struct Result {
  double value = 0;
  double error = 0;
};

// Adaptive Gauss-Kronrod (31 point) on a finite interval.  Throws
// NumericalError when the estimated error exceeds tol * max(1, |value|).
Result adaptive(const std::function<double(double)>& f, double a, double b,
                double tol = 1e-13, unsigned max_depth = 10);

// Same, but the interval is split at the given interior points first.
Result adaptive_panels(const std::function<double(double)>& f, const std::vector<double>& breaks,
                       double tol = 1e-13);

// Gauss-Legendre nodes and weights mapped to [a,b].  n in {4, 8, 16, 32}.
struct Rule {
  std::vector<double> x, w;
};
Rule gauss_legendre(int n, double a, double b);

// Reference nodes on [-1,1].
const Rule& gauss_legendre_ref(int n);

// Geometric breakpoints lo = b0 < b1 < ... < bk = hi with ratio <= q.
std::vector<double> geometric_breaks(double lo, double hi, double q);

} // namespace hmf::quad
