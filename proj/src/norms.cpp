#include "hmf/flow_sim.hpp"

#include "hmf/errors.hpp"
#include "hmf/modulation.hpp"

#include <algorithm>
#include <cmath>

namespace hmf {

double nu_a_weight(double t, double rho, const NormParams& prm) {
  if (rho < 0) throw DomainError("nu_a_weight: rho must be nonnegative");
  return std::pow(lambda_star(t, prm.T), prm.nu) * std::pow(1 + rho, -prm.a);
}

double weighted_norm(NormId id, const std::vector<NormSample>& samples, const NormParams& prm) {
  if (!(prm.T > 0 && prm.T < 1)) throw DomainError("weighted_norm: T must lie in (0,1)");
  double out = 0;
  switch (id) {
  case NormId::nu_a:
    for (const auto& s : samples) out = std::max(out, std::abs(s.value) / nu_a_weight(s.t, s.rho, prm));
    return out;
  case NormId::star:
  case NormId::starstar:
    for (const auto& s : samples) {
      if (s.rho < 0) throw DomainError("weighted_norm: rho must be nonnegative");
      double ls = lambda_star(s.t, prm.T);
      double R = std::pow(ls, -prm.beta);
      if (s.rho > 2 * R) continue;
      double w;
      if (id == NormId::star)
        w = std::max(std::pow(R, prm.delta * (5 - prm.a)) / std::pow(1 + s.rho, 3),
                     std::pow(1 + s.rho, -(prm.a - 2)));
      else
        w = R * R / (1 + s.rho);
      w *= std::pow(ls, prm.nu);
      out = std::max(out, (std::abs(s.value) + (1 + s.rho) * std::abs(s.grad)) / w);
    }
    return out;
  case NormId::sharp: {
    double l0 = lambda_star(0, prm.T);
    double R0 = std::pow(l0, -prm.beta);
    double logT = std::abs(std::log(prm.T));
    double mv = 0, mg = 0, dv = 0, dg = 0;
    for (const auto& s : samples) {
      double ls = lambda_star(s.t, prm.T);
      double R = std::pow(ls, -prm.beta);
      double lu = std::abs(std::log(prm.T - s.t));
      mv = std::max(mv, std::abs(s.value));
      mg = std::max(mg, std::abs(s.grad));
      dv = std::max(dv, std::pow(ls, -prm.theta - 1) / (R * lu) * std::abs(s.value_diff));
      dg = std::max(dg, std::pow(ls, -prm.theta) * std::abs(s.grad_diff));
    }
    double c0 = std::pow(l0, -prm.theta);
    return c0 / (logT * l0 * R0) * mv + c0 * mg + dv + dg;
  }
  }
  throw DomainError("weighted_norm: unknown norm");
}

} // namespace hmf
