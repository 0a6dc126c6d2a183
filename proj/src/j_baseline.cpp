#include "oppmdp/baselines/j_baseline.hpp"

#include <cmath>

namespace oppmdp::baselines {

void JBaselineState::validate() const {
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("J baseline: rho must lie in [0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("J baseline: eta must lie in (0, 1)");
  for (double x : j)
    if (!std::isfinite(x)) throw ConfigError("J baseline: J must be finite");
}

}  // namespace oppmdp::baselines
