#pragma once

#include <cstdint>
#include <vector>

namespace medc::trainer {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// Exponentially weighted sum of TD residuals,
//   A_t = sum_l (gamma*lambda)^l * delta_{t+l},
//   delta_t = r_t + gamma * V(s_{t+1}) - V(s_t),
// with accumulation cut at termination flags (terminal next-state value 0).
// `bootstrap_value` stands in for V(s_T) when the last flag is 0.
GaeResult compute_gae(const std::vector<double>& rewards,
                      const std::vector<double>& values,
                      const std::vector<uint8_t>& flags, double bootstrap_value,
                      double gamma, double lambda);

}  // namespace medc::trainer
