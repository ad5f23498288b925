#include "hmf/flow_sim.hpp"

#include "hmf/errors.hpp"
#include "hmf/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hmf {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance entering the sin^2 v / s^2 term.
double sing_dist(const Grid2D& g, const CorotSetup& s, int i, int j) {
  if (s.model == CorotModel::axial) return g.r(i);
  return std::hypot(g.r(i) - s.q_r, g.z(j) - s.q_z);
}

std::array<int, 2> center_node(const Grid2D& g, const CorotSetup& s) {
  auto n = g.nearest(s.q_r, s.q_z);
  double tol = 1e-9 * g.h();
  if (std::abs(g.r(n[0]) - s.q_r) > tol || std::abs(g.z(n[1]) - s.q_z) > tol)
    throw DomainError("corotational: q must be a grid node");
  if (g.is_boundary(n[0], n[1])) throw DomainError("corotational: q lies on the boundary");
  return n;
}

bool fixed(const Grid2D& g, const CorotSetup& s, const std::array<int, 2>& q, int i, int j) {
  if (g.is_boundary(i, j)) return true;
  return s.model == CorotModel::planar && i == q[0] && j == q[1];
}

// sin^2 v / s^2, replaced at s = 0 by the mean over the four neighbours.
double sing_term(const ScalarField& f, const CorotSetup& s, int i, int j) {
  const Grid2D& g = f.grid;
  double d = sing_dist(g, s, i, j);
  if (d > 1e-12 * g.h()) {
    double sv = std::sin(f.v[g.idx(i, j)]);
    return sv * sv / (d * d);
  }
  double acc = 0;
  int n = 0;
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    int a = i + di[k], b = j + dj[k];
    if (a < 0 || a > g.nr || b < 0 || b > g.nz) continue;
    double dd = sing_dist(g, s, a, b);
    if (!(dd > 1e-12 * g.h())) continue;
    double sv = std::sin(f.v[g.idx(a, b)]);
    acc += sv * sv / (dd * dd);
    ++n;
  }
  return n ? acc / n : 0.0;
}

double grad_v_sq(const ScalarField& f, int i, int j) {
  const Grid2D& g = f.grid;
  auto at = [&](int a, int b) { return f.v[g.idx(a, b)]; };
  double vr, vz;
  if (i == 0) vr = (at(1, j) - at(0, j)) / g.dr();
  else if (i == g.nr) vr = (at(i, j) - at(i - 1, j)) / g.dr();
  else vr = (at(i + 1, j) - at(i - 1, j)) / (2 * g.dr());
  if (j == 0) vz = (at(i, 1) - at(i, 0)) / g.dz();
  else if (j == g.nz) vz = (at(i, j) - at(i, j - 1)) / g.dz();
  else vz = (at(i, j + 1) - at(i, j - 1)) / (2 * g.dz());
  return vr * vr + vz * vz;
}

} // namespace

ScalarField corotational_initial(const CorotSetup& setup, double lambda, double delta,
                                 const Grid2D& grid) {
  grid.validate();
  if (!(lambda > 0 && delta > 0)) throw DomainError("corotational_initial: lambda and delta must be positive");
  double R = 2 * delta;
  if (setup.q_r - R < grid.r_min || setup.q_r + R > grid.r_max || setup.q_z - R < grid.z_min ||
      setup.q_z + R > grid.z_max)
    throw DomainError("corotational_initial: ball of radius 2 delta leaves the domain");
  if (setup.model == CorotModel::planar) center_node(grid, setup);
  if (setup.model == CorotModel::axial && setup.q_r - R <= 0)
    throw DomainError("corotational_initial: axial model needs the ball off the axis");
  ScalarField f{grid, std::vector<double>(grid.size(), 0.0), 0.0};
  for (int j = 0; j <= grid.nz; ++j)
    for (int i = 0; i <= grid.nr; ++i) {
      double s = std::hypot(grid.r(i) - setup.q_r, grid.z(j) - setup.q_z);
      double eta = cutoff_eta(s / delta);
      if (eta <= 0) continue;
      double w = eval_w(s / lambda);
      f.v[grid.idx(i, j)] = std::atan2(eta * std::sin(w), eta * std::cos(w) + 1 - eta);
    }
  if (setup.model == CorotModel::planar) {
    auto q = center_node(grid, setup);
    f.v[grid.idx(q[0], q[1])] = kPi;
  }
  return f;
}

ScalarField corot_step(const ScalarField& f, double dt, const CorotSetup& setup) {
  const Grid2D& g = f.grid;
  double h = g.h();
  if (!(dt > 0) || dt > kMaxDtFactor * h * h * (1 + 1e-12))
    throw DomainError("corot_step: dt violates dt <= 0.25 h^2");
  std::array<int, 2> q{-1, -1};
  if (setup.model == CorotModel::planar) q = center_node(g, setup);
  double dr2 = g.dr() * g.dr(), dz2 = g.dz() * g.dz();
  ScalarField out = f;
  auto at = [&](int a, int b) { return f.v[g.idx(a, b)]; };
  for (int j = 0; j <= g.nz; ++j)
    for (int i = 0; i <= g.nr; ++i) {
      if (fixed(g, setup, q, i, j)) continue;
      double c = at(i, j);
      double zz = (at(i, j + 1) - 2 * c + at(i, j - 1)) / dz2;
      double rr;
      double d;
      if (setup.model == CorotModel::planar) {
        rr = (at(i + 1, j) - 2 * c + at(i - 1, j)) / dr2;
        d = std::hypot(g.r(i) - setup.q_r, g.z(j) - setup.q_z);
      } else {
        double ri = g.r(i), rp = ri + 0.5 * g.dr(), rm = ri - 0.5 * g.dr();
        rr = (rp * (at(i + 1, j) - c) - rm * (c - at(i - 1, j))) / (ri * dr2);
        d = ri;
      }
      double val = c + dt * (rr + zz - std::sin(2 * c) / (2 * d * d));
      if (!std::isfinite(val)) throw NumericalError("corot_step: non-finite value");
      out.v[g.idx(i, j)] = val;
    }
  out.t = f.t + dt;
  return out;
}

MapField embed_planar(const ScalarField& f, const CorotSetup& setup) {
  const Grid2D& g = f.grid;
  MapField m{g, std::vector<Vec3>(g.size()), f.t};
  for (int j = 0; j <= g.nz; ++j)
    for (int i = 0; i <= g.nr; ++i) {
      double th = std::atan2(g.z(j) - setup.q_z, g.r(i) - setup.q_r);
      double v = f.v[g.idx(i, j)];
      m.u[g.idx(i, j)] = Vec3(std::cos(th) * std::sin(v), std::sin(th) * std::sin(v), std::cos(v));
    }
  return m;
}

ScaleEstimate detect_scale(const ScalarField& f, const CorotSetup& setup) {
  const Grid2D& g = f.grid;
  ScaleEstimate e;
  double m2 = 0;
  for (int j = 0; j <= g.nz; ++j)
    for (int i = 0; i <= g.nr; ++i) m2 = std::max(m2, grad_v_sq(f, i, j) + sing_term(f, setup, i, j));
  e.max_grad = std::sqrt(m2);
  std::size_t kmax = std::max_element(f.v.begin(), f.v.end()) - f.v.begin();
  if (!(f.v[kmax] > kPi / 2)) return e;
  int i0 = static_cast<int>(kmax % g.nodes_r()), j0 = static_cast<int>(kmax / g.nodes_r());
  for (int i = i0; i < g.nr; ++i) {
    double a = f.v[g.idx(i, j0)], b = f.v[g.idx(i + 1, j0)];
    if (a >= kPi / 2 && b < kPi / 2) {
      double x = g.r(i) + g.dr() * (a - kPi / 2) / (a - b);
      e.bubble = true;
      e.xi1 = g.r(i0);
      e.xi2 = g.z(j0);
      e.lambda = x - g.r(i0);
      return e;
    }
  }
  return e;
}

EnergyValue energy(const ScalarField& f, const CorotSetup& setup, const Region& region) {
  const Grid2D& g = f.grid;
  double dr = g.dr(), dz = g.dz();
  auto inside = [&](double r, double z) {
    return !region.ball || std::hypot(r - region.r, z - region.z) <= region.radius;
  };
  EnergyValue e;
  auto add = [&](double dens, double r, double area) {
    e.cross_section += 0.5 * dens * area;
    e.axisymmetric += 0.5 * dens * 2 * kPi * r * area;
  };
  for (int j = 0; j <= g.nz; ++j) {
    double wz = (j == 0 || j == g.nz) ? 0.5 * dz : dz;
    for (int i = 0; i <= g.nr; ++i) {
      double wr = (i == 0 || i == g.nr) ? 0.5 * dr : dr;
      double r = g.r(i), z = g.z(j);
      if (i < g.nr && inside(r + 0.5 * dr, z)) {
        double d = (f.v[g.idx(i + 1, j)] - f.v[g.idx(i, j)]) / dr;
        add(d * d, r + 0.5 * dr, dr * wz);
      }
      if (j < g.nz && inside(r, z + 0.5 * dz)) {
        double d = (f.v[g.idx(i, j + 1)] - f.v[g.idx(i, j)]) / dz;
        add(d * d, r, wr * dz);
      }
      if (inside(r, z)) add(sing_term(f, setup, i, j), r, wr * wz);
    }
  }
  return e;
}

RunResult run_corotational(const ScalarField& v0, const CorotSetup& setup, const RunConfig& cfg) {
  v0.grid.validate();
  if (!(cfg.dt_factor > 0 && cfg.dt_factor <= kMaxDtFactor))
    throw DomainError("run_corotational: dt_factor must lie in (0, 0.25]");
  double h = v0.grid.h();
  double dt = cfg.dt_factor * h * h;
  RunResult res;
  ScalarField f = v0;
  auto diag = [&]() {
    ScaleEstimate s = detect_scale(f, setup);
    double et = energy(f, setup).cross_section;
    double eb = 0;
    if (s.bubble) eb = energy(f, setup, Region::disk(s.xi1, s.xi2, cfg.ball_factor * s.lambda)).cross_section;
    res.rows.push_back({f.t, s.max_grad, s.bubble ? s.lambda : 0.0, s.xi1, s.xi2, et, eb});
    return s;
  };
  diag();
  res.stop_reason = "t_end";
  for (long n = 1; n <= cfg.max_steps; ++n) {
    if (f.t + 0.5 * dt > cfg.t_end) break;
    try {
      f = corot_step(f, dt, setup);
    } catch (const NumericalError&) {
      res.stop_reason = "diverged";
      break;
    }
    res.steps = n;
    if (n % cfg.diag_every == 0) {
      ScaleEstimate s = diag();
      if (!s.bubble && res.rows[res.rows.size() - 2].lambda_est > 0) {
        res.stop_reason = "bubble vanished";
        break;
      }
      if (s.bubble && s.lambda < cfg.stop_cells * h) {
        res.stop_reason = "resolution";
        break;
      }
    }
    if (n == cfg.max_steps) res.stop_reason = "max_steps";
  }
  res.last_scalar = f;
  return res;
}

} // namespace hmf
