#pragma once

#include "hmf/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hmf {

// Nodes (i, j), i = 0..nr along r, j = 0..nz along z; node index j*(nr+1)+i.
struct Grid2D {
  double r_min = 0, r_max = 2, z_min = -1, z_max = 1;
  int nr = 256, nz = 256;

  void validate() const;
  int nodes_r() const { return nr + 1; }
  int nodes_z() const { return nz + 1; }
  std::size_t size() const { return static_cast<std::size_t>(nodes_r()) * nodes_z(); }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nodes_r() + i; }
  double dr() const { return (r_max - r_min) / nr; }
  double dz() const { return (z_max - z_min) / nz; }
  double h() const { return std::min(dr(), dz()); }
  double r(int i) const { return r_min + i * dr(); }
  double z(int j) const { return z_min + j * dz(); }
  bool has_axis() const { return r_min == 0.0; }
  bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == nr || j == nz; }
  // Node nearest to (r, z).
  std::array<int, 2> nearest(double r, double z) const;
};

struct MapField {
  Grid2D grid;
  std::vector<Vec3> u;
  double t = 0;
};

struct ScalarField {
  Grid2D grid;
  std::vector<double> v;
  double t = 0;
};

// axisymmetric: u_rr + u_r/r + u_zz with the Neumann axis at r = 0.
// planar: u_rr + u_zz.
enum class Geometry { axisymmetric, planar };
enum class Stepper { euler, rk2 };

// Largest admissible dt / h^2.
inline constexpr double kMaxDtFactor = 0.25;

// Discrete Laplacian; zero on Dirichlet nodes.
std::vector<Vec3> laplacian(const MapField& u, Geometry geo = Geometry::axisymmetric);

// |grad u|^2 by centered differences (one-sided reflection on the axis).
std::vector<double> grad_sq(const MapField& u);

// S(u) = -(u - u_prev)/dt + Lap u + |grad u|^2 u, zero on Dirichlet nodes.
std::vector<Vec3> residual_S(const MapField& u, const MapField& u_prev, double dt,
                             Geometry geo = Geometry::axisymmetric);

// One step of u <- normalize(u + dt Pi_{u perp} Lap u) (or Heun with the same
// projection); Dirichlet nodes are held.  Throws NumericalError on NaN.
MapField step(const MapField& u, double dt, Geometry geo = Geometry::axisymmetric,
              Stepper stepper = Stepper::euler);

// Smooth cutoff: 1 on [0,1], 0 on [2, inf).
double cutoff_eta(double s);

// eta^delta U_{lambda,xi,omega} + (1 - eta^delta) e3, renormalized.
MapField initial_data(const ModulationState& st, double delta, const Grid2D& grid);

// Signed degree by summing spherical triangle areas over the grid cells.
double map_degree(const MapField& u);

struct ScaleEstimate {
  bool bubble = false;
  double lambda = 0;
  double xi1 = 0, xi2 = 0;
  double max_grad = 0;
};

// xi = argmin u3, lambda = 2 sqrt(2)/max |grad u| (|grad u| Frobenius; equals
// 2/lambda in operator norm for W_lambda).
ScaleEstimate detect_scale(const MapField& u);

struct Region {
  bool ball = false;
  double r = 0, z = 0, radius = 0;
  static Region all() { return {}; }
  static Region disk(double r, double z, double radius) { return {true, r, z, radius}; }
};

struct EnergyValue {
  double cross_section = 0;  // (1/2) int |grad u|^2 dr dz
  double axisymmetric = 0;   // (1/2) int |grad u|^2 2 pi r dr dz
};

// Edge based; an edge counts when its midpoint lies in the region.
EnergyValue energy(const MapField& u, const Region& region = Region::all());

// ------------------------------------------------------------ corotational

// axial: the scalar reduction with respect to the z axis, v(0,z) = 0.
// planar: v_t = v_rr + v_zz - sin v cos v/s^2 with s = |(r,z) - q|, v(q) = pi.
enum class CorotModel { axial, planar };

struct CorotSetup {
  CorotModel model = CorotModel::planar;
  double q_r = 1.0, q_z = 0.0;
};

ScalarField corotational_initial(const CorotSetup& setup, double lambda, double delta,
                                 const Grid2D& grid);

ScalarField corot_step(const ScalarField& v, double dt, const CorotSetup& setup);

// u = (e^{i theta} sin v, cos v), theta the polar angle about q.
MapField embed_planar(const ScalarField& v, const CorotSetup& setup);

// Radius where v crosses pi/2 along r through the maximum of v.
ScaleEstimate detect_scale(const ScalarField& v, const CorotSetup& setup);

EnergyValue energy(const ScalarField& v, const CorotSetup& setup, const Region& region = Region::all());

// ------------------------------------------------------------ runs

struct DiagnosticRow {
  double t, max_grad, lambda_est, xi1_est, xi2_est, e_total, e_ball;
};

struct RunConfig {
  double dt_factor = 0.15;  // dt = dt_factor h^2
  double t_end = 1.0;
  long max_steps = 2000000;
  int diag_every = 20;
  double stop_cells = 3.0;   // stop when lambda_est < stop_cells * h
  double ball_factor = 6.0;  // e_ball radius = ball_factor * lambda_est
  Stepper stepper = Stepper::euler;
  bool check_energy = false;  // record the largest per-step energy increase
};

struct RunResult {
  std::vector<DiagnosticRow> rows;
  std::string stop_reason;
  long steps = 0;
  double max_energy_increase = 0;  // per step, axisymmetric measure (map runs)
  MapField last_map;
  ScalarField last_scalar;
};

RunResult run_corotational(const ScalarField& v0, const CorotSetup& setup, const RunConfig& cfg);
RunResult run_flow(const MapField& u0, const RunConfig& cfg, Geometry geo = Geometry::axisymmetric);

struct RateFit {
  double T_hat = 0, C = 0, gamma = 0, rms = 0;
  int points = 0;
};

// lambda = C (T_hat - t)^gamma / log^2(T_hat - t) by least squares in (log C, gamma),
// scanning T_hat above the last sample.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& lambda);

// ------------------------------------------------------------ norms

enum class NormId { nu_a, star, starstar, sharp };

struct NormSample {
  double t = 0;
  double rho = 0;         // |y| (inner norms)
  double value = 0;       // |phi| or |psi|
  double grad = 0;        // |grad phi| or |grad psi|
  double value_diff = 0;  // sharp: |psi(x,t) - psi(x,T)|
  double grad_diff = 0;   // sharp: |grad psi(x,t) - grad psi(x,T)|
};

struct NormParams {
  double T = 1e-3;
  double nu = 1.0;
  double a = 2.5;
  double delta = 0.01;
  double beta = 0.25;   // R(t) = lambda_*(t)^{-beta}
  double theta = 0.1;   // Theta in the sharp norm
};

double weighted_norm(NormId id, const std::vector<NormSample>& samples, const NormParams& prm);

// Weight of the nu_a norm, lambda_*^nu (1+rho)^{-a}.
double nu_a_weight(double t, double rho, const NormParams& prm);

} // namespace hmf
