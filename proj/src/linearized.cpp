#include "hmf/linearized.hpp"

#include "hmf/errors.hpp"
#include "hmf/profiles.hpp"
#include "hmf/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace hmf {

Vec3 apply_LW(const TangentField& phi, const PlanePoint& y, double h) {
  if (!(h > 0)) throw DomainError("apply_LW: step must be positive");
  if (std::abs(y.y1) + h > phi.extent || std::abs(y.y2) + h > phi.extent)
    throw DomainError("apply_LW: stencil leaves the sampled region");
  Vec3 c = phi(y);
  Vec3 e = phi({y.y1 + h, y.y2}), w = phi({y.y1 - h, y.y2});
  Vec3 n = phi({y.y1, y.y2 + h}), s = phi({y.y1, y.y2 - h});
  Vec3 lap = (e + w + n + s - 4.0 * c) / (h * h);
  Vec3 d1 = (e - w) / (2 * h), d2 = (n - s) / (2 * h);
  double coupling = dot(d1, dW_dy1(y)) + dot(d2, dW_dy2(y));
  return lap + grad_W_sq(y.rho()) * c + 2.0 * coupling * eval_W(y).vec();
}

Vec3 project_perp(const Vec3& Phi, const Vec3& U) { return Phi - dot(Phi, U) * U; }

PlaneVectorField jet_by_differences(std::function<std::pair<cplx, double>(double, double)> f,
                                    double h) {
  return [f = std::move(f), h](double r, double z) {
    FieldJet j;
    auto c = f(r, z);
    auto e = f(r + h, z), w = f(r - h, z), n = f(r, z + h), s = f(r, z - h);
    j.phi = c.first;
    j.phi3 = c.second;
    j.phi_r = (e.first - w.first) / (2 * h);
    j.phi_z = (n.first - s.first) / (2 * h);
    j.phi3_r = (e.second - w.second) / (2 * h);
    j.phi3_z = (n.second - s.second) / (2 * h);
    return j;
  };
}

namespace {

PlanePoint inner(const ModulationState& st, double r, double z) {
  return {(r - st.xi[0]) / st.lambda, (z - st.xi[1]) / st.lambda};
}

double div_of(cplx dr, cplx dz) { return dr.real() + dz.imag(); }
double curl_of(cplx dr, cplx dz) { return dr.imag() - dz.real(); }

} // namespace

Vec3 eval_U(const ModulationState& st, double r, double z) {
  return rotate(st.omega, eval_W(inner(st, r, z)).vec());
}

Vec3 apply_Ltilde_definition(const PlaneVectorField& Phi, const ModulationState& st, double r,
                             double z) {
  PlanePoint y = inner(st, r, z);
  Vec3 U = eval_U(st, r, z);
  Vec3 Ur = rotate(st.omega, dW_dy1(y)) / st.lambda;
  Vec3 Uz = rotate(st.omega, dW_dy2(y)) / st.lambda;
  FieldJet j = Phi(r, z);
  Vec3 P = as_vec(j.phi, j.phi3), Pr = as_vec(j.phi_r, j.phi3_r), Pz = as_vec(j.phi_z, j.phi3_z);
  double g2 = norm2(Ur) + norm2(Uz);
  double dr = dot(Pr, U) + dot(P, Ur);
  double dz = dot(Pz, U) + dot(P, Uz);
  return g2 * project_perp(P, U) - 2.0 * (dr * Ur + dz * Uz);
}

Vec3 apply_Ltilde_polar(const PlaneVectorField& Phi, const ModulationState& st, double r,
                        double z) {
  PlanePoint y = inner(st, r, z);
  double s = std::hypot(r - st.xi[0], z - st.xi[1]);
  if (!(s > 0)) throw DomainError("polar form undefined at the center");
  double th = y.theta(), c = std::cos(th), sn = std::sin(th);
  FieldJet j = Phi(r, z);
  Vec3 Pr = as_vec(j.phi_r, j.phi3_r), Pz = as_vec(j.phi_z, j.phi3_z);
  Vec3 Ps = c * Pr + sn * Pz;
  Vec3 Pth = s * (-sn * Pr + c * Pz);
  Vec3 U = eval_U(st, r, z);
  Vec3 QE1 = rotate(st.omega, eval_E(1, y)), QE2 = rotate(st.omega, eval_E(2, y));
  double wr = w_rho(y.rho());
  return (-2.0 / st.lambda) * wr * (dot(Ps, U) * QE1 - (dot(Pth, U) / s) * QE2);
}

Vec3 apply_Ltilde_mode(int mode, const PlaneVectorField& Phi, const ModulationState& st, double r,
                       double z) {
  PlanePoint y = inner(st, r, z);
  double rho = y.rho(), th = y.theta();
  double wr = w_rho(rho);
  Vec3 QE1 = rotate(st.omega, eval_E(1, y)), QE2 = rotate(st.omega, eval_E(2, y));
  FieldJet j = Phi(r, z);
  switch (mode) {
  case 0: {
    cplx tw = std::polar(1.0, -st.omega);
    double d = div_of(tw * j.phi_r, tw * j.phi_z), cu = curl_of(tw * j.phi_r, tw * j.phi_z);
    return (rho * wr * wr / st.lambda) * (d * QE1 + cu * QE2);
  }
  case 1: {
    double c = std::cos(th), s = std::sin(th);
    double f = -2.0 * wr * cos_w(rho) / st.lambda;
    return f * ((j.phi3_r * c + j.phi3_z * s) * QE1 + (j.phi3_r * s - j.phi3_z * c) * QE2);
  }
  case 2: {
    cplx tw = std::polar(1.0, st.omega);
    cplx br = tw * std::conj(j.phi_r), bz = tw * std::conj(j.phi_z);
    double d = div_of(br, bz), cu = curl_of(br, bz);
    double c2 = std::cos(2 * th), s2 = std::sin(2 * th);
    return (rho * wr * wr / st.lambda) * ((d * c2 - cu * s2) * QE1 + (d * s2 + cu * c2) * QE2);
  }
  default:
    throw DomainError("Ltilde mode must be 0, 1 or 2");
  }
}

Vec3 apply_Ltilde_radial(cplx phi, cplx phi_s, const ModulationState& st, double r, double z) {
  PlanePoint y = inner(st, r, z);
  double s = std::hypot(r - st.xi[0], z - st.xi[1]);
  if (!(s > 0)) throw DomainError("radial form undefined at the center");
  double rho = y.rho(), wr = w_rho(rho);
  cplx tw = std::polar(1.0, -st.omega);
  Vec3 QE1 = rotate(st.omega, eval_E(1, y)), QE2 = rotate(st.omega, eval_E(2, y));
  return (2.0 / st.lambda) * rho * wr * wr * ((tw * phi_s).real() * QE1 + ((tw * phi).imag() / s) * QE2);
}

Vec3 eval_K1(const PlanePoint& y, double lambda, double omega, double xidot1, double xidot2) {
  cplx a = cplx(xidot1, -xidot2) * std::polar(1.0, y.theta());
  Vec3 QE1 = rotate(omega, eval_E(1, y)), QE2 = rotate(omega, eval_E(2, y));
  return (w_rho(y.rho()) / lambda) * (a.real() * QE1 + a.imag() * QE2);
}

namespace {

// rho panels: [0,1], then doubling up to rho_max.
std::vector<double> rho_breaks(double rho_max) {
  std::vector<double> b{0.0};
  double x = std::min(1.0, rho_max);
  while (x < rho_max) {
    b.push_back(x);
    x *= 2;
  }
  b.push_back(rho_max);
  return b;
}

constexpr int kThetaNodes = 64;

// int_0^{2 pi} f(rho, theta) dtheta by the trapezoid rule.
template <class F> double theta_integral(F&& f, double rho) {
  double acc = 0;
  for (int m = 0; m < kThetaNodes; ++m) acc += f(rho, 2 * std::numbers::pi * m / kThetaNodes);
  return acc * 2 * std::numbers::pi / kThetaNodes;
}

} // namespace

ProjectionValue c_lj(const TangentField& h, int l, int j, double rho_max, double tail_tol) {
  if (!(rho_max > 0)) throw DomainError("c_lj: rho_max must be positive");
  auto num_density = [&](double rho, double th) {
    PlanePoint y = PlanePoint::polar(rho, th);
    return dot(h(y), eval_Z(l, j, y)) * rho;
  };
  auto den_density = [&](double rho, double th) {
    PlanePoint y = PlanePoint::polar(rho, th);
    double wr = w_rho(rho);
    return wr * wr * norm2(eval_Z(l, j, y)) * rho;
  };
  double num = 0, den = 0;
  auto br = rho_breaks(rho_max);
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    quad::Rule rule = quad::gauss_legendre(16, br[p], br[p + 1]);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      num += rule.w[i] * theta_integral(num_density, rule.x[i]);
      den += rule.w[i] * theta_integral(den_density, rule.x[i]);
    }
  }
  // Tail: fit g(rho) ~ rho^{-k} between rho_max/2 and rho_max, g the angular integral of |h.Z| rho.
  auto abs_density = [&](double rho, double th) { return std::abs(num_density(rho, th)); };
  double g1 = theta_integral(abs_density, 0.5 * rho_max);
  double g2 = theta_integral(abs_density, rho_max);
  double tail = 0;
  if (g2 > 1e-300) {
    double k = std::log(std::max(g1, 1e-300) / g2) / std::log(2.0);
    if (k <= 1.05) throw ConvergenceError("c_lj: integrand does not decay fast enough");
    tail = g2 * rho_max / (k - 1.0);
  }
  double rel = tail / den;
  if (rel > tail_tol)
    throw ConvergenceError("c_lj: tail contribution " + std::to_string(rel) + " above tolerance");
  return {num / den, rel};
}

ModeDecomposition mode_decompose(const TangentField& h, int k_max, double rho_max, int n_rho,
                                 int n_theta, double tol) {
  if (k_max < 0) throw DomainError("mode_decompose: k_max must be nonnegative");
  if (n_theta <= 0) n_theta = std::max(32, 4 * (k_max + 1));
  if (n_theta <= 2 * k_max) throw DomainError("mode_decompose: theta sampling too coarse");
  ModeDecomposition out;
  out.energy.assign(k_max + 1, 0.0);
  quad::Rule rule;
  {
    // n_rho Gauss-Legendre nodes in blocks of 16
    int blocks = std::max(1, n_rho / 16);
    n_rho = 16 * blocks;
    out.e1.assign(k_max + 1, std::vector<cplx>(n_rho));
    out.e2.assign(k_max + 1, std::vector<cplx>(n_rho));
    for (int b = 0; b < blocks; ++b) {
      quad::Rule r = quad::gauss_legendre(16, rho_max * b / blocks, rho_max * (b + 1) / blocks);
      rule.x.insert(rule.x.end(), r.x.begin(), r.x.end());
      rule.w.insert(rule.w.end(), r.w.begin(), r.w.end());
    }
  }
  out.rho = rule.x;
  double err = 0;
  for (int i = 0; i < n_rho; ++i) {
    double rho = rule.x[i];
    std::vector<double> a1(n_theta), a2(n_theta);
    for (int m = 0; m < n_theta; ++m) {
      PlanePoint y = PlanePoint::polar(rho, 2 * std::numbers::pi * m / n_theta);
      Vec3 v = h(y);
      a1[m] = dot(v, eval_E(1, y));
      a2[m] = dot(v, eval_E(2, y));
    }
    for (int k = 0; k <= k_max; ++k) {
      cplx s1 = 0, s2 = 0;
      for (int m = 0; m < n_theta; ++m) {
        cplx e = std::polar(1.0, -2 * std::numbers::pi * k * m / n_theta);
        s1 += a1[m] * e;
        s2 += a2[m] * e;
      }
      double f = (k == 0 ? 1.0 : 2.0) / n_theta;
      out.e1[k][i] = f * s1;
      out.e2[k][i] = f * s2;
      out.energy[k] += rule.w[i] * rho * (std::norm(out.e1[k][i]) + std::norm(out.e2[k][i]));
    }
    // Reconstruction checked at the midpoints between samples.
    for (int m = 0; m < n_theta; ++m) {
      double th = 2 * std::numbers::pi * (m + 0.5) / n_theta;
      PlanePoint y = PlanePoint::polar(rho, th);
      Vec3 v = h(y);
      Vec3 rec;
      for (int k = 0; k <= k_max; ++k) {
        cplx e = std::polar(1.0, k * th);
        rec += (out.e1[k][i] * e).real() * eval_E(1, y) + (out.e2[k][i] * e).real() * eval_E(2, y);
      }
      err = std::max(err, norm(v - rec));
    }
  }
  out.reconstruction_error = err;
  out.flagged = err > tol;
  return out;
}

} // namespace hmf
