#pragma once

#include "hmf/types.hpp"

#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace hmf {

// R^3-valued field of the inner variable y.  `extent` bounds the square
// |y1|, |y2| <= extent on which samples may be taken.
struct TangentField {
  std::function<Vec3(const PlanePoint&)> f;
  double extent = std::numeric_limits<double>::infinity();

  Vec3 operator()(const PlanePoint& y) const { return f(y); }
};

// L_W[phi] = Lap phi + |grad W|^2 phi + 2 (grad phi . grad W) W with
// second order centered differences of step h.
Vec3 apply_LW(const TangentField& phi, const PlanePoint& y, double h);

Vec3 project_perp(const Vec3& Phi, const Vec3& U);

// Phi(r,z) = (phi1 + i phi2, phi3) with first derivatives.
struct FieldJet {
  cplx phi{};
  double phi3 = 0;
  cplx phi_r{}, phi_z{};
  double phi3_r = 0, phi3_z = 0;
};
using PlaneVectorField = std::function<FieldJet(double r, double z)>;

// Derivatives by centered differences of step h.
PlaneVectorField jet_by_differences(std::function<std::pair<cplx, double>(double, double)> f,
                                    double h = 1e-5);

inline Vec3 as_vec(cplx c, double v3) { return {c.real(), c.imag(), v3}; }

// U_{lambda,xi,omega}(r,z) = Q_omega W((x - xi)/lambda) and its (r,z) gradient.
Vec3 eval_U(const ModulationState& st, double r, double z);

// |grad U|^2 Pi_{U perp} Phi - 2 grad(Phi.U) grad U, analytic grad U.
Vec3 apply_Ltilde_definition(const PlaneVectorField& Phi, const ModulationState& st, double r,
                             double z);
// Polar form; requires (r,z) != xi.
Vec3 apply_Ltilde_polar(const PlaneVectorField& Phi, const ModulationState& st, double r,
                        double z);
Vec3 apply_Ltilde_mode(int mode, const PlaneVectorField& Phi, const ModulationState& st, double r,
                       double z);

// Phi = (phi(s) e^{i theta}, 0) around xi.  Closed form including the rho
// factor that the polar formula produces.
Vec3 apply_Ltilde_radial(cplx phi, cplx phi_s, const ModulationState& st, double r, double z);

// Scale/center forcing field in the W frame rotated by omega.
Vec3 eval_K1(const PlanePoint& y, double lambda, double omega, double xidot1, double xidot2);

struct ProjectionValue {
  double value;
  double tail_bound;  // bound on the neglected rho > rho_max part, relative to the denominator
};

// int h.Z_lj dy / int w_rho^2 |Z_lj|^2 dy over |y| < rho_max.
ProjectionValue c_lj(const TangentField& h, int l, int j, double rho_max = 50.0,
                     double tail_tol = 1e-2);

struct ModeDecomposition {
  std::vector<double> rho;
  // coef[k][i]: E1 and E2 coefficients at rho[i]; component = Re(coef e^{ik theta}).
  std::vector<std::vector<cplx>> e1, e2;
  std::vector<double> energy;  // per k, int (|c1|^2 + |c2|^2) rho drho
  double reconstruction_error = 0;
  bool flagged = false;  // reconstruction_error > tol
};

ModeDecomposition mode_decompose(const TangentField& h, int k_max, double rho_max = 10.0,
                                 int n_rho = 64, int n_theta = 0, double tol = 1e-8);

} // namespace hmf
