#include "hmf/profiles.hpp"

#include "hmf/errors.hpp"
#include "hmf/quadrature.hpp"

#include <numbers>

namespace hmf {

namespace {
void check_rho(double rho) {
  if (!(rho >= 0)) throw DomainError("rho must be nonnegative");
}
} // namespace

double eval_w(double rho) {
  check_rho(rho);
  return std::numbers::pi - 2.0 * std::atan(rho);
}

double w_rho(double rho) {
  check_rho(rho);
  return -2.0 / (1.0 + rho * rho);
}

double sin_w(double rho) {
  check_rho(rho);
  return 2.0 * rho / (1.0 + rho * rho);
}

double cos_w(double rho) {
  check_rho(rho);
  return (rho * rho - 1.0) / (1.0 + rho * rho);
}

UnitVector3 eval_W(const PlanePoint& y) {
  double r2 = y.y1 * y.y1 + y.y2 * y.y2;
  if (std::isinf(r2)) return UnitVector3(0, 0, 1);
  double d = 1.0 + r2;
  return UnitVector3(2.0 * y.y1 / d, 2.0 * y.y2 / d, (r2 - 1.0) / d);
}

Vec3 dW_dy1(const PlanePoint& y) {
  double d = 1.0 + y.y1 * y.y1 + y.y2 * y.y2;
  double d2 = d * d;
  return {2.0 * (d - 2.0 * y.y1 * y.y1) / d2, -4.0 * y.y1 * y.y2 / d2, 4.0 * y.y1 / d2};
}

Vec3 dW_dy2(const PlanePoint& y) {
  double d = 1.0 + y.y1 * y.y1 + y.y2 * y.y2;
  double d2 = d * d;
  return {-4.0 * y.y1 * y.y2 / d2, 2.0 * (d - 2.0 * y.y2 * y.y2) / d2, 4.0 * y.y2 / d2};
}

double grad_W_sq(double rho) {
  double d = 1.0 + rho * rho;
  return 8.0 / (d * d);
}

Vec3 eval_E(int frame_index, const PlanePoint& y) {
  double rho = y.rho(), th = y.theta();
  double c = std::cos(th), s = std::sin(th);
  if (frame_index == 1) {
    double cw = cos_w(rho), sw = sin_w(rho);
    return {c * cw, s * cw, -sw};
  }
  if (frame_index == 2) return {-s, c, 0.0};
  throw DomainError("frame index must be 1 or 2");
}

Vec3 rotate(double omega, const Vec3& v) {
  double c = std::cos(omega), s = std::sin(omega);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

UnitVector3 rotate(double omega, const UnitVector3& v) { return UnitVector3(rotate(omega, v.vec())); }

Vec3 eval_Z(int l, int j, const PlanePoint& y) {
  if (j != 1 && j != 2) throw DomainError("kernel index j must be 1 or 2");
  double rho = y.rho(), th = y.theta();
  double c = std::cos(th), s = std::sin(th);
  double wr = w_rho(rho);
  Vec3 e1 = eval_E(1, y), e2 = eval_E(2, y);
  switch (l) {
  case 0:
    return rho * wr * (j == 1 ? e1 : e2);
  case 1:
    return j == 1 ? wr * (c * e1 + s * e2) : wr * (s * e1 - c * e2);
  case -1:
    return j == 1 ? rho * rho * wr * (c * e1 - s * e2) : rho * rho * wr * (s * e1 + c * e2);
  default:
    throw DomainError("kernel index l must be -1, 0 or 1");
  }
}

MomentValue moment_integral(Moment kind) {
  // rho = tan(phi) maps [0, inf) onto [0, pi/2); all integrands vanish at phi = pi/2.
  auto integrand = [kind](double phi) {
    if (phi >= 0.5 * std::numbers::pi) return 0.0;
    double rho = std::tan(phi);
    double jac = 1.0 + rho * rho;
    double wr = -2.0 / jac;
    switch (kind) {
    case Moment::rho3_wrho3: return rho * rho * rho * wr * wr * wr * jac;
    case Moment::rho_wrho2: return rho * wr * wr * jac;
    case Moment::rho_wrho2_cosw: return rho * wr * wr * cos_w(rho) * jac;
    case Moment::dirichlet_energy: {
      double sw = sin_w(rho);
      double ang = rho > 0 ? sw * sw / (rho * rho) : 4.0;
      return std::numbers::pi * (wr * wr + ang) * rho * jac;
    }
    }
    return 0.0;
  };
  double exact = 0;
  switch (kind) {
  case Moment::rho3_wrho3: exact = -2.0; break;
  case Moment::rho_wrho2: exact = 2.0; break;
  case Moment::rho_wrho2_cosw: exact = 0.0; break;
  case Moment::dirichlet_energy: exact = 4.0 * std::numbers::pi; break;
  }
  quad::Result r = quad::adaptive_panels(
      integrand, {0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi}, 1e-14);
  return {r.value, exact, r.error};
}

} // namespace hmf
