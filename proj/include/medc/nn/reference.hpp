#pragma once

#include "medc/nn/network.hpp"

namespace medc::nn::reference {

// Straight-line serial forward pass: plain nested loops, no Eigen, no OpenMP.
// Kept as the independent check for the batched kernels and as the baseline
// side of the kernel benchmark.
void forward(const NetworkSpec& spec, const ParamSet& params, const double* obs,
             double* logits_out, double* value_out);

}  // namespace medc::nn::reference
