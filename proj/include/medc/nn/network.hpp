#pragma once

#include <cstdint>
#include <vector>

#include "medc/nn/spec.hpp"
#include "medc/nn/tensor.hpp"

namespace medc::nn {

// Flat, ordered collection of learnable tensors. Canonical order: for each
// layer weight then bias, then policy-head weight/bias, then value-head
// weight/bias. Conv weights are [filters, in_c, k, k]; dense weights are
// [units, in_dim] with the channel-major flatten of the last conv output.
struct ParamSet {
  uint16_t version = 1;
  std::vector<Tensor> tensors;

  int64_t count() const {
    int64_t n = 0;
    for (const Tensor& t : tensors) n += t.size();
    return n;
  }
  bool same_shapes(const ParamSet& o) const;
  bool operator==(const ParamSet&) const = default;
};

// Softmax over discrete action logits.
struct ActionDistribution {
  std::vector<double> probs;

  int argmax() const;
  double entropy() const;
};

// Activations recorded during a batched forward pass, consumed by backward().
struct ForwardTrace {
  bool recorded = false;
  int batch = 0;
  NetworkSpec spec;
  std::vector<Tensor> inputs;      // per trunk layer: input activations [B, ...]
  std::vector<Tensor> activations; // per trunk layer: post-ReLU output [B, ...]
  std::vector<Tensor> im2col;      // per conv layer: patch matrix [B*cells, in_c*k*k]
  Tensor trunk_out;                // [B, trunk_dim]
  Tensor logits;                   // [B, A]
  Tensor values;                   // [B]
};

struct ForwardResult {
  Tensor logits;  // [B, A]
  Tensor values;  // [B]
};

ParamSet build_network(const NetworkSpec& spec, uint64_t seed);

// Batched forward over B observations laid out contiguously [B, C*H*W].
// When trace is non-null the pass is recorded for backward().
ForwardResult forward_batch(const NetworkSpec& spec, const ParamSet& params,
                            const double* obs, int batch, ForwardTrace* trace);

// Gradients w.r.t. every parameter given head gradients dlogits [B, A] and
// dvalues [B]. Deterministic for any OpenMP thread count.
ParamSet backward_batch(const ParamSet& params, const ForwardTrace& trace,
                        const Tensor& dlogits, const Tensor& dvalues);

// Single-observation conveniences.
ActionDistribution policy_forward(const NetworkSpec& spec, const ParamSet& params,
                                  const Tensor& obs);
double value_forward(const NetworkSpec& spec, const ParamSet& params,
                     const Tensor& obs);
// One trunk pass returning both heads; used on the rollout path.
void policy_value_forward(const NetworkSpec& spec, const ParamSet& params,
                          const Tensor& obs, ActionDistribution* dist, double* value);

// Stable softmax of one logit row.
ActionDistribution softmax(const double* logits, int n);

// ParamSet payload bytes: versioned, little-endian, with a trailing SHA-256.
std::vector<uint8_t> save_params(const ParamSet& params);
ParamSet load_params(const std::vector<uint8_t>& bytes);

ParamSet zeros_like(const ParamSet& p);

}  // namespace medc::nn
