#include <doctest.h>

#include "hmf/errors.hpp"
#include "hmf/modulation.hpp"

#include <cmath>

using namespace hmf;
using doctest::Approx;

TEST_CASE("lambda_star formula and domain") {
  double T = 1e-3;
  for (double t : {0.0, 0.5e-3, 0.9e-3}) {
    double u = T - t, l = std::log(u);
    CHECK(lambda_star(t, T) == Approx(std::abs(std::log(T)) * u / (l * l)));
  }
  CHECK(lambda_star(0, T) == Approx(T / std::abs(std::log(T))));
  CHECK_THROWS_AS(lambda_star(T, T), DomainError);
  CHECK_THROWS_AS(lambda_star(0, 1.5), DomainError);
}

TEST_CASE("xi dynamics: RK4 accuracy and fourth order") {
  ReducedConfig cfg;
  cfg.T = 0.01;
  cfg.a0_star = cplx(1.0);
  XiTrajectory x = solve_xi(cfg, 1000);
  double err = 0;
  for (std::size_t k = 0; k < x.t.size(); ++k) {
    err = std::max(err, std::abs(x.xi1[k] - std::sqrt(1 + 2 * (cfg.T - x.t[k]))));
    CHECK(x.xi2[k] == cfg.z0);
  }
  CHECK(err < 1e-8);
  CHECK(x.t.front() == 0.0);
  CHECK(x.t.back() == Approx(cfg.T));
  // coarse steps so the error stays above rounding
  cfg.T = 0.4;
  auto e = [&](int n) {
    XiTrajectory y = solve_xi(cfg, n);
    return std::abs(y.xi1.front() - xi1_exact(0, cfg.r0, cfg.T));
  };
  double order = std::log2(e(4) / e(8));
  CHECK(order >= 3.8);
}

TEST_CASE("reduced config validation") {
  ReducedConfig c;
  CHECK_THROWS_AS(c.validate(), DomainError);  // no forcing given
  c.a0_star = cplx(1.0);
  CHECK_NOTHROW(c.validate());
  c.r0 = -1;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.r0 = 1;
  c.T = 0.7;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("a0 = div + i curl at the blow-up point") {
  // linear fields: derivatives are exact
  auto f = [](double r, double z) { return cplx(2 * (r - 1) + 3 * z, -(r - 1) + 0.5 * z); };
  // div = 2 + 0.5, curl = -1 - 3
  cplx a = a0_from_field(f, 1.0, 0.0);
  CHECK(a.real() == Approx(2.5));
  CHECK(a.imag() == Approx(-4.0));
  auto rot = [](double r, double z) { return cplx(-z, r - 1); };
  CHECK(std::abs(a0_from_field(rot, 1.0, 0.0) - cplx(0, 2)) < 1e-9);
  auto flat = [](double, double) { return cplx(1.0, 2.0); };
  CHECK_THROWS_AS(a0_from_field(flat, 1.0, 0.0), DomainError);
  cplx d = a0_from_field(default_z0_star(1.0, 0.0), 1.0, 0.0);
  CHECK(d.real() == Approx(0.075));
  CHECK(std::abs(d.imag()) < 1e-10);
  // the default field is cut off far away
  CHECK(default_z0_star(1.0, 0.0)(1.9, 0.0) == cplx(0));
}

TEST_CASE("predicted p: |p|/lambda_* stays in a narrow band") {
  ReducedConfig cfg;
  cfg.z0_star = default_z0_star(cfg.r0, cfg.z0);
  PredictedTrajectory p = predicted_p(cfg, 41);
  REQUIRE(p.t.size() == 41);
  double lo = 1e300, hi = 0;
  for (std::size_t k = 0; k < p.t.size(); ++k)
    if (p.t[k] <= 0.5 * cfg.T) {
      lo = std::min(lo, p.ratio[k]);
      hi = std::max(hi, p.ratio[k]);
    }
  CHECK((hi - lo) / hi < 0.15);
  CHECK(std::abs(p.p.back()) < 1e-12);
  CHECK(p.kappa_alt == -p.kappa);
  // B0 sees |p| only through logarithms, so kappa is close to linear in a0
  cfg.a0_star = 2.0 * p.a0;
  PredictedTrajectory q = predicted_p(cfg, 11);
  CHECK(std::abs(q.kappa - 2.0 * p.kappa) < 0.02 * std::abs(q.kappa));
}
