#pragma once

#include "hmf/flow_sim.hpp"
#include "hmf/io.hpp"
#include "hmf/linearized.hpp"
#include "hmf/modulation.hpp"
#include "hmf/nonlocal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hmf {

struct CheckRow {
  std::string suite, name;
  double value = 0;  // measured error (or ratio for order checks)
  double tol = 0;
  bool pass = false;
};

// moments, kernel annihilation, mode-decomposition exactness.
// `perturb` is added to every measured error (negative control).
std::vector<CheckRow> identity_suite(std::uint64_t seed = 1, double perturb = 0.0);

// |L_W[Z_lj]| maximised over |y| in {0.5, 1, 2} and eight angles.
double kernel_annihilation_error(int l, int j, double h);

// Random smooth (r,z) field: a sum of Gaussians with complex/real amplitudes, analytic jet.
PlaneVectorField random_smooth_field(std::uint64_t seed, const ModulationState& st);

struct GammaReport {
  CsvTable table;  // tau, gamma1, gamma2, flag
  GammaBounds bounds[2];
};
GammaReport gamma_report(double tau_min, double tau_max, int n);

// ------------------------------------------------------------ blow-up runs

struct CorotScenario {
  int n = 256;            // cells per direction on [0,2] x [-1,1]
  double lambda0 = 0.05;
  double delta = 0.25;
  CorotSetup setup;
  RunConfig run;
  double transient = 0.1;  // fraction of the run treated as transient
};

struct BlowupSummary {
  double growth = 0;           // max_grad(last) / max_grad(0)
  bool lambda_monotone = false;  // after the transient
  double e_ball_min = 0, e_ball_max = 0, e_ball_mean = 0;  // after the transient, cross-section
  RateFit fit;
  int fit_points = 0;
  double h = 0;
};

BlowupSummary summarize(const std::vector<DiagnosticRow>& rows, double h, double transient,
                        double fit_min_cells = 3.0);

struct CorotOutcome {
  RunResult run;
  BlowupSummary summary;
};
CorotOutcome run_corot_scenario(const CorotScenario& sc);

struct FlowScenario {
  int n = 256;
  ModulationState bubble{0.05, 0.0, {1.0, 0.0}};
  double delta = 0.25;
  Geometry geometry = Geometry::axisymmetric;
  RunConfig run;
  double transient = 0.1;
};

struct FlowOutcome {
  RunResult run;
  BlowupSummary summary;
  double degree0 = 0;
};
FlowOutcome run_flow_scenario(const FlowScenario& sc);

struct CrossModel {
  std::vector<double> t, lambda_corot, lambda_map, xi1_map;
  double max_rel_diff = 0;  // over samples with both lambda >= min_cells * h
  int compared = 0;
};
// Same bubble data as a planar corotational field and as a full map.  In the planar
// geometry the embedded corotational field is an exact solution of the map equation.
CrossModel cross_model(int n, double lambda0, double delta, double t_end, double min_cells = 8.0,
                       int diag_every = 50, Geometry geo = Geometry::planar);

struct DissipationRun {
  double max_increase = 0;  // largest per-step energy increase
  long steps = 0;
  double e_first = 0, e_last = 0;
};
// Bubble plus smooth random perturbation, stopped well before resolution loss.
DissipationRun dissipation_run(std::uint64_t seed, int n, long steps);

// ------------------------------------------------------------ reduced

CsvTable reduced_table(const PredictedTrajectory& p);

} // namespace hmf
