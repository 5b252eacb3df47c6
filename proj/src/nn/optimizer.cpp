#include "medc/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace medc::nn {

OptimizerState OptimizerState::init(const ParamSet& params, double learning_rate) {
  OptimizerState s;
  s.learning_rate = learning_rate;
  s.m = zeros_like(params);
  s.v = zeros_like(params);
  return s;
}

void optimizer_step(ParamSet& params, const ParamSet& gradients,
                    OptimizerState& state) {
  if (!params.same_shapes(gradients) || !params.same_shapes(state.m))
    throw std::invalid_argument("optimizer_step: shape mismatch");
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, double(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, double(state.step));
  for (size_t t = 0; t < params.tensors.size(); ++t) {
    double* p = params.tensors[t].ptr();
    const double* g = gradients.tensors[t].ptr();
    double* m = state.m.tensors[t].ptr();
    double* v = state.v.tensors[t].ptr();
    const int64_t n = params.tensors[t].size();
    for (int64_t i = 0; i < n; ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      p[i] -= state.learning_rate * mh / (std::sqrt(vh) + state.epsilon);
    }
  }
}

}  // namespace medc::nn
