#pragma once

#include "hmf/types.hpp"

namespace hmf {

// w(rho) = pi - 2 atan(rho) and its companions.
double eval_w(double rho);
double w_rho(double rho);
double sin_w(double rho);
double cos_w(double rho);

UnitVector3 eval_W(const PlanePoint& y);

// Partial derivatives of W in y1 and y2.
Vec3 dW_dy1(const PlanePoint& y);
Vec3 dW_dy2(const PlanePoint& y);

// |grad W|^2 = 8/(1+rho^2)^2.
double grad_W_sq(double rho);

// Tangent frame at W(y); frame_index in {1, 2}.
Vec3 eval_E(int frame_index, const PlanePoint& y);

// Rotation about the third axis.
Vec3 rotate(double omega, const Vec3& v);
UnitVector3 rotate(double omega, const UnitVector3& v);

// Kernel of the linearized operator, l in {-1, 0, 1}, j in {1, 2}.
Vec3 eval_Z(int l, int j, const PlanePoint& y);

enum class Moment { rho3_wrho3, rho_wrho2, rho_wrho2_cosw, dirichlet_energy };

struct MomentValue {
  double value;  // numerical quadrature
  double exact;  // closed form
  double error;  // quadrature error estimate
};

// dirichlet_energy is (1/2) int_{R^2} |grad W|^2.
MomentValue moment_integral(Moment kind);

} // namespace hmf
