#include <doctest.h>

#include "hmf/errors.hpp"
#include "hmf/profiles.hpp"
#include "hmf/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace hmf;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("quad: Gauss-Legendre is exact for degree 2n-1") {
  for (int n : {4, 8, 16, 32}) {
    auto r = quad::gauss_legendre(n, -0.3, 1.7);
    int deg = 2 * n - 1;
    double s = 0;
    for (std::size_t k = 0; k < r.x.size(); ++k) s += r.w[k] * std::pow(r.x[k], deg);
    double exact = (std::pow(1.7, deg + 1) - std::pow(-0.3, deg + 1)) / (deg + 1);
    CHECK(s == Approx(exact).epsilon(1e-12));
  }
  CHECK_THROWS_AS(quad::gauss_legendre(5, 0, 1), DomainError);
}

TEST_CASE("quad: adaptive and panels") {
  auto r = quad::adaptive([](double x) { return std::exp(x); }, 0, 1);
  CHECK(r.value == Approx(std::exp(1.0) - 1).epsilon(1e-14));
  auto p = quad::adaptive_panels([](double x) { return std::abs(x - 0.3); }, {0, 0.3, 1});
  CHECK(p.value == Approx(0.045 + 0.245).epsilon(1e-14));
  auto b = quad::geometric_breaks(1e-6, 1, 2);
  CHECK(b.front() == 1e-6);
  CHECK(b.back() == 1);
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(b[k] / b[k - 1] <= 2.0 + 1e-12);
}

TEST_CASE("profile w and companions") {
  CHECK(eval_w(0) == Approx(kPi));
  CHECK(eval_w(1) == Approx(kPi / 2));
  for (double rho : {0.0, 0.3, 1.0, 4.0, 100.0}) {
    CHECK(sin_w(rho) == Approx(2 * rho / (1 + rho * rho)));
    CHECK(cos_w(rho) == Approx((rho * rho - 1) / (1 + rho * rho)));
    double h = 1e-5 * (1 + rho);
    if (rho > 0) CHECK(w_rho(rho) == Approx((eval_w(rho + h) - eval_w(rho - h)) / (2 * h)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(eval_w(-1), DomainError);
}

TEST_CASE("bubble W: unit, center value, gradient") {
  CHECK(eval_W(PlanePoint(0, 0))[2] == Approx(-1));
  CHECK(eval_W(PlanePoint(1e8, 0))[2] == Approx(1).epsilon(1e-12));
  for (double th = 0.1; th < 6.3; th += 0.7)
    for (double rho : {0.2, 1.0, 3.0}) {
      PlanePoint y = PlanePoint::polar(rho, th);
      Vec3 W = eval_W(y).vec();
      CHECK(norm(W) == Approx(1).epsilon(1e-14));
      double h = 1e-6;
      Vec3 d1 = (eval_W(PlanePoint(y.y1 + h, y.y2)).vec() - eval_W(PlanePoint(y.y1 - h, y.y2)).vec()) / (2 * h);
      Vec3 d2 = (eval_W(PlanePoint(y.y1, y.y2 + h)).vec() - eval_W(PlanePoint(y.y1, y.y2 - h)).vec()) / (2 * h);
      CHECK(norm(d1 - dW_dy1(y)) < 1e-8);
      CHECK(norm(d2 - dW_dy2(y)) < 1e-8);
      CHECK(grad_W_sq(rho) == Approx(norm2(d1) + norm2(d2)).epsilon(1e-8));
      // frame is orthonormal and tangent
      Vec3 e1 = eval_E(1, y), e2 = eval_E(2, y);
      CHECK(std::abs(dot(e1, W)) < 1e-14);
      CHECK(std::abs(dot(e2, W)) < 1e-14);
      CHECK(std::abs(dot(e1, e2)) < 1e-14);
      CHECK(norm(e1) == Approx(1));
    }
}

TEST_CASE("rotation fixes the third axis and is orthogonal") {
  Vec3 v(0.3, -0.4, 0.5);
  Vec3 r = rotate(0.9, v);
  CHECK(r.z == v.z);
  CHECK(norm(r) == Approx(norm(v)));
  CHECK(norm(rotate(-0.9, r) - v) < 1e-15);
  CHECK(norm(rotate(kPi / 2, Vec3(1, 0, 0)) - Vec3(0, 1, 0)) < 1e-15);
}

TEST_CASE("kernels Z_lj are tangent to W") {
  for (int l : {-1, 0, 1})
    for (int j : {1, 2}) {
      PlanePoint y = PlanePoint::polar(0.8, 2.1);
      CHECK(std::abs(dot(eval_Z(l, j, y), eval_W(y).vec())) < 1e-14);
    }
  CHECK_THROWS_AS(eval_Z(2, 1, PlanePoint(1, 0)), DomainError);
  CHECK_THROWS_AS(eval_Z(0, 3, PlanePoint(1, 0)), DomainError);
}

TEST_CASE("moment integrals against polynomial antiderivatives") {
  // With u = 1/(1+rho^2): rho w_rho^2 drho = 2 du ... rho w_rho^2 = 4 rho u^2, d(u) = -2 rho u^2 drho.
  // int 4 rho u^2 drho = 2 int_0^1 du = 2.
  // rho^3 w_rho^3 = -8 rho^3 u^3, rho^2 = 1/u - 1: int = -4 int_0^1 (1 - u) du = -2.
  // cos w = 1 - 2u: int 4 rho u^2 (1 - 2u) drho = 2 int_0^1 (1 - 2u) du = 0.
  CHECK(std::abs(moment_integral(Moment::rho_wrho2).value - 2.0) < 1e-12);
  CHECK(std::abs(moment_integral(Moment::rho3_wrho3).value + 2.0) < 1e-12);
  CHECK(std::abs(moment_integral(Moment::rho_wrho2_cosw).value) < 1e-12);
  // (1/2) int |grad W|^2 = pi int 8 rho u^2 drho = 4 pi.
  CHECK(std::abs(moment_integral(Moment::dirichlet_energy).value - 4 * kPi) < 1e-10);
}
