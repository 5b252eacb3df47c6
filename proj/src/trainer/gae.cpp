#include "medc/trainer/gae.hpp"

#include <stdexcept>

namespace medc::trainer {

GaeResult compute_gae(const std::vector<double>& rewards,
                      const std::vector<double>& values,
                      const std::vector<uint8_t>& flags, double bootstrap_value,
                      double gamma, double lambda) {
  const size_t n = rewards.size();
  if (values.size() != n || flags.size() != n)
    throw std::invalid_argument("compute_gae: sequence length mismatch");
  GaeResult out;
  out.advantages.resize(n);
  out.returns.resize(n);
  double acc = 0.0;
  for (size_t i = n; i-- > 0;) {
    const bool terminal = flags[i] != 0;
    const double next_v =
        terminal ? 0.0 : (i + 1 < n ? values[i + 1] : bootstrap_value);
    const double delta = rewards[i] + gamma * next_v - values[i];
    acc = delta + (terminal ? 0.0 : gamma * lambda * acc);
    out.advantages[i] = acc;
    out.returns[i] = acc + values[i];
  }
  return out;
}

}  // namespace medc::trainer
