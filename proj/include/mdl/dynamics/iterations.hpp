#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "mdl/error.hpp"

namespace mdl {

// Number of rounds after which no-regret dynamics with L-bounded, unbiased,
// independent gradient estimates return an eps-min-max equilibrium with
// probability 1 - delta:
//   T = ceil( scale * (4 L^2 / eps^2) * (32 R^2 log(2/delta) + 25 gamma_minus + 25 gamma_plus) )
// where gamma_{-,+} are the players' regret constants (regret <= sqrt(gamma T)).
// The constants are loose; `scale` shrinks the budget for desk-scale runs.
inline std::uint64_t required_iterations(double eps, double delta, double lipschitz, double radius,
                                         double gamma_minus, double gamma_plus, double scale = 1.0) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("required_iterations: eps must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("required_iterations: delta must lie in (0,1)");
  if (!(lipschitz > 0.0)) throw InvalidArgument("required_iterations: L must be positive");
  if (!(radius >= 0.0) || !(gamma_minus >= 0.0) || !(gamma_plus >= 0.0)) {
    throw InvalidArgument("required_iterations: R and the regret constants must be >= 0");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("required_iterations: scale must be positive");
  const double inner = 32.0 * radius * radius * std::log(2.0 / delta) + 25.0 * gamma_minus + 25.0 * gamma_plus;
  const double t = scale * (4.0 * lipschitz * lipschitz / (eps * eps)) * inner;
  if (t >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
    throw ResourceLimit("required_iterations: budget does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(std::ceil(t));
}

}  // namespace mdl
