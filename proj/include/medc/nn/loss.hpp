#pragma once

#include <vector>

#include "medc/nn/network.hpp"

namespace medc::nn {

struct LossComponents {
  double total = 0.0;
  double policy = 0.0;    // -L_CLIP (or cross-entropy for cloning)
  double value = 0.0;     // mean squared value error
  double entropy = 0.0;   // mean policy entropy
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
};

// A loss value attached to the recorded forward pass that produced it.
struct LossNode {
  LossComponents components;
  ForwardTrace trace;
  Tensor dlogits;  // dLoss/dlogits [B, A]
  Tensor dvalues;  // dLoss/dvalue  [B]
};

// Clipped-surrogate policy loss with value and entropy terms:
//   total = -mean(min(r*A, clip(r, 1-eps, 1+eps)*A))
//           + value_coef * mean((V - R)^2) - entropy_coef * mean(H).
// Advantages are expected already normalized by the caller.
LossNode ppo_loss(const NetworkSpec& spec, const ParamSet& params,
                  const double* obs, int batch, const int* actions,
                  const double* old_logp, const double* advantages,
                  const double* returns, double clip_eps, double value_coef,
                  double entropy_coef);

// Plain mean squared error of the value head against targets.
LossNode value_mse_loss(const NetworkSpec& spec, const ParamSet& params,
                        const double* obs, int batch, const double* targets);

// Mean cross-entropy of the policy against hard action labels.
LossNode bc_loss(const NetworkSpec& spec, const ParamSet& params,
                 const double* obs, int batch, const int* labels);

// Reverse-mode gradients for every learnable parameter.
ParamSet backward(const LossNode& node, const ParamSet& params);

}  // namespace medc::nn
