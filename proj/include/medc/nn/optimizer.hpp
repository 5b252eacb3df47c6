#pragma once

#include <cstdint>

#include "medc/nn/network.hpp"

namespace medc::nn {

// Bias-corrected adaptive-moment (Adam) optimizer state.
struct OptimizerState {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int64_t step = 0;
  ParamSet m;  // first moments, ParamSet-shaped
  ParamSet v;  // second moments

  static OptimizerState init(const ParamSet& params, double learning_rate);
};

// In-place update of params; increments state.step.
void optimizer_step(ParamSet& params, const ParamSet& gradients,
                    OptimizerState& state);

}  // namespace medc::nn
