#include "hmf/flow_sim.hpp"

#include "hmf/errors.hpp"
#include "hmf/profiles.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hmf {

void Grid2D::validate() const {
  if (!(r_min >= 0)) throw DomainError("grid: r_min must be nonnegative");
  if (!(r_max > r_min && z_max > z_min)) throw DomainError("grid: empty rectangle");
  if (nr < 2 || nz < 2) throw DomainError("grid: need at least 2 cells per direction");
}

std::array<int, 2> Grid2D::nearest(double r, double z) const {
  int i = static_cast<int>(std::lround((r - r_min) / dr()));
  int j = static_cast<int>(std::lround((z - z_min) / dz()));
  return {std::clamp(i, 0, nr), std::clamp(j, 0, nz)};
}

namespace {

bool fixed_node(const Grid2D& g, int i, int j, Geometry geo) {
  if (!g.is_boundary(i, j)) return false;
  bool axis_row = geo == Geometry::axisymmetric && g.has_axis() && i == 0 && j > 0 && j < g.nz;
  return !axis_row;
}

Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (!(n > 0) || !std::isfinite(n)) throw NumericalError("flow: non-finite or zero vector");
  return v / n;
}

// Node weight of the r-integral: int r dr over the dual cell (axis: dr^2/8).
double radial_mass(const Grid2D& g, int i) {
  double dr = g.dr();
  if (g.has_axis() && i == 0) return dr * dr / 8;
  double w = (i == 0 || i == g.nr) ? 0.5 * dr : dr;
  return g.r(i) * w;
}

} // namespace

std::vector<Vec3> laplacian(const MapField& u, Geometry geo) {
  const Grid2D& g = u.grid;
  std::vector<Vec3> out(g.size());
  double dr2 = g.dr() * g.dr(), dz2 = g.dz() * g.dz();
  for (int j = 0; j <= g.nz; ++j) {
    for (int i = 0; i <= g.nr; ++i) {
      if (fixed_node(g, i, j, geo)) continue;
      std::size_t k = g.idx(i, j);
      const Vec3& c = u.u[k];
      Vec3 zz = (u.u[g.idx(i, j + 1)] - 2.0 * c + u.u[g.idx(i, j - 1)]) / dz2;
      Vec3 rr;
      if (i == 0) {
        rr = 4.0 * (u.u[g.idx(1, j)] - c) / dr2;
      } else if (geo == Geometry::planar) {
        rr = (u.u[g.idx(i + 1, j)] - 2.0 * c + u.u[g.idx(i - 1, j)]) / dr2;
      } else {
        double ri = g.r(i), rp = ri + 0.5 * g.dr(), rm = ri - 0.5 * g.dr();
        rr = (rp * (u.u[g.idx(i + 1, j)] - c) - rm * (c - u.u[g.idx(i - 1, j)])) / (ri * dr2);
      }
      out[k] = rr + zz;
    }
  }
  return out;
}

std::vector<double> grad_sq(const MapField& u) {
  const Grid2D& g = u.grid;
  std::vector<double> out(g.size());
  for (int j = 0; j <= g.nz; ++j) {
    for (int i = 0; i <= g.nr; ++i) {
      Vec3 ur, uz;
      if (i == 0 && g.has_axis()) ur = Vec3();
      else if (i == 0) ur = (u.u[g.idx(1, j)] - u.u[g.idx(0, j)]) / g.dr();
      else if (i == g.nr) ur = (u.u[g.idx(i, j)] - u.u[g.idx(i - 1, j)]) / g.dr();
      else ur = (u.u[g.idx(i + 1, j)] - u.u[g.idx(i - 1, j)]) / (2 * g.dr());
      if (j == 0) uz = (u.u[g.idx(i, 1)] - u.u[g.idx(i, 0)]) / g.dz();
      else if (j == g.nz) uz = (u.u[g.idx(i, j)] - u.u[g.idx(i, j - 1)]) / g.dz();
      else uz = (u.u[g.idx(i, j + 1)] - u.u[g.idx(i, j - 1)]) / (2 * g.dz());
      out[g.idx(i, j)] = norm2(ur) + norm2(uz);
    }
  }
  return out;
}

std::vector<Vec3> residual_S(const MapField& u, const MapField& u_prev, double dt, Geometry geo) {
  if (!(dt > 0)) throw DomainError("residual_S: dt must be positive");
  if (u.u.size() != u_prev.u.size()) throw DomainError("residual_S: incompatible grids");
  const Grid2D& g = u.grid;
  std::vector<Vec3> lap = laplacian(u, geo);
  std::vector<double> g2 = grad_sq(u);
  std::vector<Vec3> out(g.size());
  for (int j = 0; j <= g.nz; ++j)
    for (int i = 0; i <= g.nr; ++i) {
      if (fixed_node(g, i, j, geo)) continue;
      std::size_t k = g.idx(i, j);
      out[k] = -(u.u[k] - u_prev.u[k]) / dt + lap[k] + g2[k] * u.u[k];
    }
  return out;
}

MapField step(const MapField& u, double dt, Geometry geo, Stepper stepper) {
  const Grid2D& g = u.grid;
  double h = g.h();
  if (!(dt > 0) || dt > kMaxDtFactor * h * h * (1 + 1e-12))
    throw DomainError("step: dt violates dt <= 0.25 h^2");
  auto tangent_rhs = [&](const MapField& f) {
    std::vector<Vec3> lap = laplacian(f, geo);
    for (std::size_t k = 0; k < lap.size(); ++k) lap[k] = lap[k] - dot(lap[k], f.u[k]) * f.u[k];
    return lap;
  };
  MapField out = u;
  std::vector<Vec3> k1 = tangent_rhs(u);
  if (stepper == Stepper::euler) {
    for (std::size_t k = 0; k < out.u.size(); ++k) out.u[k] = normalized(u.u[k] + dt * k1[k]);
  } else {
    MapField mid = u;
    for (std::size_t k = 0; k < mid.u.size(); ++k) mid.u[k] = normalized(u.u[k] + dt * k1[k]);
    std::vector<Vec3> k2 = tangent_rhs(mid);
    for (std::size_t k = 0; k < out.u.size(); ++k)
      out.u[k] = normalized(u.u[k] + 0.5 * dt * (k1[k] + k2[k]));
  }
  out.t = u.t + dt;
  return out;
}

double cutoff_eta(double s) {
  if (s <= 1) return 1.0;
  if (s >= 2) return 0.0;
  double x = 2 - s;  // (0,1)
  double a = std::exp(-1 / x), b = std::exp(-1 / (1 - x));
  return a / (a + b);
}

MapField initial_data(const ModulationState& st, double delta, const Grid2D& grid) {
  grid.validate();
  if (!(st.lambda > 0 && delta > 0)) throw DomainError("initial_data: lambda and delta must be positive");
  double R = 2 * delta;
  if (st.xi[0] - R < grid.r_min || st.xi[0] + R > grid.r_max || st.xi[1] - R < grid.z_min ||
      st.xi[1] + R > grid.z_max)
    throw DomainError("initial_data: ball of radius 2 delta leaves the domain");
  MapField f{grid, std::vector<Vec3>(grid.size()), 0.0};
  const Vec3 e3(0, 0, 1);
  for (int j = 0; j <= grid.nz; ++j)
    for (int i = 0; i <= grid.nr; ++i) {
      double r = grid.r(i), z = grid.z(j);
      double eta = cutoff_eta(std::hypot(r - st.xi[0], z - st.xi[1]) / delta);
      Vec3 v = e3;
      if (eta > 0) {
        PlanePoint y((r - st.xi[0]) / st.lambda, (z - st.xi[1]) / st.lambda);
        v = eta * rotate(st.omega, eval_W(y).vec()) + (1 - eta) * e3;
        v = normalized(v);
      }
      f.u[grid.idx(i, j)] = v;
    }
  return f;
}

double map_degree(const MapField& u) {
  const Grid2D& g = u.grid;
  auto omega = [](const Vec3& a, const Vec3& b, const Vec3& c) {
    return 2 * std::atan2(dot(a, cross(b, c)), 1 + dot(a, b) + dot(b, c) + dot(c, a));
  };
  double sum = 0;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i) {
      const Vec3& a = u.u[g.idx(i, j)];
      const Vec3& b = u.u[g.idx(i + 1, j)];
      const Vec3& c = u.u[g.idx(i + 1, j + 1)];
      const Vec3& d = u.u[g.idx(i, j + 1)];
      sum += omega(a, b, c) + omega(a, c, d);
    }
  return sum / (4 * std::numbers::pi);
}

namespace {

// Vertex of the parabola through (-1,fm), (0,f0), (1,fp), clamped to [-1,1].
double parabolic_offset(double fm, double f0, double fp) {
  double den = fm - 2 * f0 + fp;
  if (!(std::abs(den) > 0)) return 0;
  return std::clamp(0.5 * (fm - fp) / den, -1.0, 1.0);
}

} // namespace

ScaleEstimate detect_scale(const MapField& u) {
  const Grid2D& g = u.grid;
  ScaleEstimate e;
  std::size_t kmin = 0;
  for (std::size_t k = 0; k < u.u.size(); ++k)
    if (u.u[k].z < u.u[kmin].z) kmin = k;
  std::vector<double> g2 = grad_sq(u);
  e.max_grad = std::sqrt(*std::max_element(g2.begin(), g2.end()));
  if (!(u.u[kmin].z < 0)) return e;
  int i = static_cast<int>(kmin % g.nodes_r()), j = static_cast<int>(kmin / g.nodes_r());
  e.bubble = true;
  e.xi1 = g.r(i);
  e.xi2 = g.z(j);
  if (i > 0 && i < g.nr)
    e.xi1 += g.dr() * parabolic_offset(u.u[g.idx(i - 1, j)].z, u.u[kmin].z, u.u[g.idx(i + 1, j)].z);
  if (j > 0 && j < g.nz)
    e.xi2 += g.dz() * parabolic_offset(u.u[g.idx(i, j - 1)].z, u.u[kmin].z, u.u[g.idx(i, j + 1)].z);
  e.lambda = 2 * std::numbers::sqrt2 / e.max_grad;
  return e;
}

EnergyValue energy(const MapField& u, const Region& region) {
  const Grid2D& g = u.grid;
  double dr = g.dr(), dz = g.dz();
  auto inside = [&](double r, double z) {
    return !region.ball || std::hypot(r - region.r, z - region.z) <= region.radius;
  };
  EnergyValue e;
  // r-edges
  for (int j = 0; j <= g.nz; ++j) {
    double wz = (j == 0 || j == g.nz) ? 0.5 * dz : dz;
    for (int i = 0; i < g.nr; ++i) {
      double rm = g.r(i) + 0.5 * dr;
      if (!inside(rm, g.z(j))) continue;
      double d2 = norm2(u.u[g.idx(i + 1, j)] - u.u[g.idx(i, j)]) / (dr * dr);
      e.cross_section += 0.5 * d2 * dr * wz;
      e.axisymmetric += 0.5 * d2 * 2 * std::numbers::pi * rm * dr * wz;
    }
  }
  // z-edges
  for (int i = 0; i <= g.nr; ++i) {
    double wr = (i == 0 || i == g.nr) ? 0.5 * dr : dr;
    double m = radial_mass(g, i);
    for (int j = 0; j < g.nz; ++j) {
      double zm = g.z(j) + 0.5 * dz;
      if (!inside(g.r(i), zm)) continue;
      double d2 = norm2(u.u[g.idx(i, j + 1)] - u.u[g.idx(i, j)]) / (dz * dz);
      e.cross_section += 0.5 * d2 * wr * dz;
      e.axisymmetric += 0.5 * d2 * 2 * std::numbers::pi * m * dz;
    }
  }
  return e;
}

RunResult run_flow(const MapField& u0, const RunConfig& cfg, Geometry geo) {
  u0.grid.validate();
  if (!(cfg.dt_factor > 0 && cfg.dt_factor <= kMaxDtFactor))
    throw DomainError("run_flow: dt_factor must lie in (0, 0.25]");
  double h = u0.grid.h();
  double dt = cfg.dt_factor * h * h;
  RunResult res;
  MapField u = u0;
  auto diag = [&](const MapField& f) {
    ScaleEstimate s = detect_scale(f);
    EnergyValue et = energy(f);
    double eb = 0;
    if (s.bubble) eb = energy(f, Region::disk(s.xi1, s.xi2, cfg.ball_factor * s.lambda)).cross_section;
    res.rows.push_back({f.t, s.max_grad, s.bubble ? s.lambda : 0.0, s.xi1, s.xi2, et.cross_section, eb});
    return s;
  };
  diag(u);
  double e_prev = cfg.check_energy ? energy(u).axisymmetric : 0.0;
  res.stop_reason = "t_end";
  for (long n = 1; n <= cfg.max_steps; ++n) {
    if (u.t + 0.5 * dt > cfg.t_end) break;
    try {
      u = step(u, dt, geo, cfg.stepper);
    } catch (const NumericalError&) {
      res.stop_reason = "diverged";
      break;
    }
    res.steps = n;
    if (cfg.check_energy) {
      double e = energy(u).axisymmetric;
      res.max_energy_increase = std::max(res.max_energy_increase, e - e_prev);
      e_prev = e;
    }
    if (n % cfg.diag_every == 0) {
      ScaleEstimate s = diag(u);
      if (res.rows.size() > 1 && res.rows[res.rows.size() - 2].lambda_est > 0 && !s.bubble) {
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
  res.last_map = u;
  return res;
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& lambda) {
  std::size_t n = t.size();
  if (n < 3 || lambda.size() != n) throw DomainError("fit_rate: need at least 3 samples");
  double span = t.back() - t.front();
  if (!(span > 0)) throw DomainError("fit_rate: samples must span a positive interval");
  // least squares in (log C, gamma) for fixed T_hat = t_last + span 10^s
  auto solve = [&](double s) {
    RateFit f;
    f.T_hat = t.back() + span * std::pow(10.0, s);
    f.points = static_cast<int>(n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
      double lu = std::log(f.T_hat - t[k]);
      xs[k] = lu;
      ys[k] = std::log(lambda[k]) + 2 * std::log(std::abs(lu));
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    double den = n * sxx - sx * sx;
    f.gamma = (n * sxy - sx * sy) / den;
    double lc = (sy - f.gamma * sx) / n;
    f.C = std::exp(lc);
    double ss = 0;
    for (std::size_t k = 0; k < n; ++k) ss += std::pow(ys[k] - lc - f.gamma * xs[k], 2);
    f.rms = std::sqrt(ss / n);
    if (!std::isfinite(f.rms)) f.rms = INFINITY;
    return f;
  };
  // T_hat - t_first < 1 keeps log|log| finite
  double s_max = std::min(1.0, std::log10((1 - 1e-9 - span) / span));
  if (!(s_max > -6)) throw DomainError("fit_rate: samples span too long an interval");
  const int m = 400;
  int best = 0;
  double best_rms = INFINITY;
  for (int c = 0; c <= m; ++c) {
    double s = -6 + (s_max + 6) * c / m;
    double r = solve(s).rms;
    if (r < best_rms) {
      best_rms = r;
      best = c;
    }
  }
  double step = (s_max + 6) / m;
  double lo = std::max(-6.0, -6 + (best - 1) * step), hi = std::min(s_max, -6 + (best + 1) * step);
  auto res = boost::math::tools::brent_find_minima([&](double s) { return solve(s).rms; }, lo, hi, 40);
  return solve(res.first);
}

} // namespace hmf
