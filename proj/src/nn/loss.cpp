#include "medc/nn/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace medc::nn {

namespace {

void require_finite(const double* v, int n, const char* what) {
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(v[i]))
      throw std::invalid_argument(std::string("ppo_loss: non-finite ") + what);
}

}  // namespace

LossNode ppo_loss(const NetworkSpec& spec, const ParamSet& params,
                  const double* obs, int batch, const int* actions,
                  const double* old_logp, const double* advantages,
                  const double* returns, double clip_eps, double value_coef,
                  double entropy_coef) {
  require_finite(old_logp, batch, "old log-probabilities");
  require_finite(advantages, batch, "advantages");
  require_finite(returns, batch, "returns");

  LossNode node;
  ForwardResult out = forward_batch(spec, params, obs, batch, &node.trace);
  const int A = spec.policy_actions;
  node.dlogits = Tensor({batch, A});
  node.dvalues = Tensor({batch});

  double policy_sum = 0.0, value_sum = 0.0, entropy_sum = 0.0;
  double ratio_sum = 0.0;
  int clipped = 0;
  const double inv_n = 1.0 / batch;

  for (int i = 0; i < batch; ++i) {
    const double* z = out.logits.ptr() + int64_t(i) * A;
    const int a = actions[i];
    if (a < 0 || a >= A)
      throw std::invalid_argument("ppo_loss: action index out of range");

    double mx = z[0];
    for (int j = 1; j < A; ++j) mx = std::max(mx, z[j]);
    double sum = 0.0;
    for (int j = 0; j < A; ++j) sum += std::exp(z[j] - mx);
    const double log_sum = std::log(sum);
    const double logp_a = z[a] - mx - log_sum;

    double h = 0.0;
    for (int j = 0; j < A; ++j) {
      const double lp = z[j] - mx - log_sum;
      h -= std::exp(lp) * lp;
    }
    entropy_sum += h;

    const double ratio = std::exp(logp_a - old_logp[i]);
    const double adv = advantages[i];
    const double lo = 1.0 - clip_eps, hi = 1.0 + clip_eps;
    const double clipped_ratio = std::min(std::max(ratio, lo), hi);
    const double unclipped = ratio * adv;
    const double clamped = clipped_ratio * adv;
    const double surr = std::min(unclipped, clamped);
    policy_sum += surr;
    ratio_sum += ratio;
    if (ratio < lo || ratio > hi) ++clipped;

    // policy gradient flows only through the active min branch
    const double cpol = (unclipped <= clamped) ? -inv_n * ratio * adv : 0.0;
    double* dz = node.dlogits.ptr() + int64_t(i) * A;
    for (int j = 0; j < A; ++j) {
      const double lp = z[j] - mx - log_sum;
      const double p = std::exp(lp);
      dz[j] = cpol * ((j == a ? 1.0 : 0.0) - p) +
              entropy_coef * inv_n * p * (lp + h);
    }

    const double verr = out.values.data[i] - returns[i];
    value_sum += verr * verr;
    node.dvalues.data[i] = 2.0 * value_coef * inv_n * verr;
  }

  LossComponents& c = node.components;
  c.policy = -policy_sum * inv_n;
  c.value = value_sum * inv_n;
  c.entropy = entropy_sum * inv_n;
  c.mean_ratio = ratio_sum * inv_n;
  c.clip_fraction = double(clipped) * inv_n;
  c.total = c.policy + value_coef * c.value - entropy_coef * c.entropy;
  if (!std::isfinite(c.total))
    throw std::runtime_error("ppo_loss: non-finite loss");
  return node;
}

LossNode value_mse_loss(const NetworkSpec& spec, const ParamSet& params,
                        const double* obs, int batch, const double* targets) {
  require_finite(targets, batch, "targets");
  LossNode node;
  ForwardResult out = forward_batch(spec, params, obs, batch, &node.trace);
  node.dlogits = Tensor({batch, spec.policy_actions});
  node.dvalues = Tensor({batch});
  const double inv_n = 1.0 / batch;
  double sum = 0.0;
  for (int i = 0; i < batch; ++i) {
    const double err = out.values.data[i] - targets[i];
    sum += err * err;
    node.dvalues.data[i] = 2.0 * inv_n * err;
  }
  node.components.value = sum * inv_n;
  node.components.total = node.components.value;
  return node;
}

LossNode bc_loss(const NetworkSpec& spec, const ParamSet& params,
                 const double* obs, int batch, const int* labels) {
  LossNode node;
  ForwardResult out = forward_batch(spec, params, obs, batch, &node.trace);
  const int A = spec.policy_actions;
  node.dlogits = Tensor({batch, A});
  node.dvalues = Tensor({batch});
  const double inv_n = 1.0 / batch;
  double ce_sum = 0.0;
  for (int i = 0; i < batch; ++i) {
    const int a = labels[i];
    if (a < 0 || a >= A)
      throw std::invalid_argument("bc_loss: label out of range");
    const double* z = out.logits.ptr() + int64_t(i) * A;
    double mx = z[0];
    for (int j = 1; j < A; ++j) mx = std::max(mx, z[j]);
    double sum = 0.0;
    for (int j = 0; j < A; ++j) sum += std::exp(z[j] - mx);
    const double log_sum = std::log(sum);
    ce_sum -= z[a] - mx - log_sum;
    double* dz = node.dlogits.ptr() + int64_t(i) * A;
    for (int j = 0; j < A; ++j)
      dz[j] = inv_n * (std::exp(z[j] - mx - log_sum) - (j == a ? 1.0 : 0.0));
  }
  node.components.policy = ce_sum * inv_n;
  node.components.total = node.components.policy;
  return node;
}

ParamSet backward(const LossNode& node, const ParamSet& params) {
  if (!node.trace.recorded)
    throw std::invalid_argument("backward: loss was not produced by a recorded forward pass");
  return backward_batch(params, node.trace, node.dlogits, node.dvalues);
}

}  // namespace medc::nn
