#include "medc/nn/network.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "medc/common.hpp"

namespace medc::nn {

bool ParamSet::same_shapes(const ParamSet& o) const {
  if (tensors.size() != o.tensors.size()) return false;
  for (size_t i = 0; i < tensors.size(); ++i)
    if (tensors[i].shape != o.tensors[i].shape) return false;
  return true;
}

int ActionDistribution::argmax() const {
  int best = 0;
  for (size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  return best;
}

double ActionDistribution::entropy() const {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

ActionDistribution softmax(const double* logits, int n) {
  ActionDistribution d;
  d.probs.resize(n);
  double mx = logits[0];
  for (int i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    d.probs[i] = std::exp(logits[i] - mx);
    sum += d.probs[i];
  }
  for (int i = 0; i < n; ++i) d.probs[i] /= sum;
  return d;
}

namespace {

// Scaled-uniform fan-in initialization, biases zero.
Tensor init_weight(std::vector<int> shape, int fan_in, Rng& rng) {
  Tensor t(std::move(shape));
  const double bound = std::sqrt(3.0 / fan_in);
  for (double& v : t.data) v = (2.0 * rng.uniform() - 1.0) * bound;
  return t;
}

void check_obs_shape(const NetworkSpec& spec, const Tensor& obs) {
  const int64_t want = int64_t(spec.in_channels) * spec.in_h * spec.in_w;
  if (obs.size() != want)
    throw std::invalid_argument(
        "observation shape mismatch: expected " + std::to_string(spec.in_channels) +
        "x" + std::to_string(spec.in_h) + "x" + std::to_string(spec.in_w) +
        " (" + std::to_string(want) + " values), got " + std::to_string(obs.size()));
}

}  // namespace

ParamSet build_network(const NetworkSpec& spec, uint64_t seed) {
  const SpecInfo info = resolve_spec(spec);
  Rng rng(Rng::mix(seed, 0x6e657477u));  // independent init stream
  ParamSet p;
  for (const LayerShape& ls : info.layers) {
    if (ls.def.kind == LayerDef::Kind::conv) {
      const int k = ls.def.kernel;
      p.tensors.push_back(init_weight({ls.out_c, ls.in_c, k, k}, ls.in_c * k * k, rng));
      p.tensors.push_back(Tensor({ls.out_c}));
    } else {
      p.tensors.push_back(init_weight({ls.out_dim, ls.in_dim}, ls.in_dim, rng));
      p.tensors.push_back(Tensor({ls.out_dim}));
    }
  }
  p.tensors.push_back(init_weight({spec.policy_actions, info.trunk_out}, info.trunk_out, rng));
  p.tensors.push_back(Tensor({spec.policy_actions}));
  p.tensors.push_back(init_weight({1, info.trunk_out}, info.trunk_out, rng));
  p.tensors.push_back(Tensor({1}));
  return p;
}

ParamSet zeros_like(const ParamSet& p) {
  ParamSet z;
  z.version = p.version;
  z.tensors.reserve(p.tensors.size());
  for (const Tensor& t : p.tensors) z.tensors.emplace_back(Tensor(t.shape));
  return z;
}

void policy_value_forward(const NetworkSpec& spec, const ParamSet& params,
                          const Tensor& obs, ActionDistribution* dist,
                          double* value) {
  check_obs_shape(spec, obs);
  ForwardResult r = forward_batch(spec, params, obs.ptr(), 1, nullptr);
  if (dist) *dist = softmax(r.logits.ptr(), spec.policy_actions);
  if (value) *value = r.values.data[0];
}

ActionDistribution policy_forward(const NetworkSpec& spec, const ParamSet& params,
                                  const Tensor& obs) {
  ActionDistribution d;
  policy_value_forward(spec, params, obs, &d, nullptr);
  return d;
}

double value_forward(const NetworkSpec& spec, const ParamSet& params,
                     const Tensor& obs) {
  double v = 0.0;
  policy_value_forward(spec, params, obs, nullptr, &v);
  return v;
}

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}
uint16_t get_u16(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 2 > in.size()) throw std::runtime_error("load_params: truncated payload");
  uint16_t v = uint16_t(in[pos]) | (uint16_t(in[pos + 1]) << 8);
  pos += 2;
  return v;
}
uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 4 > in.size()) throw std::runtime_error("load_params: truncated payload");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

}  // namespace

std::vector<uint8_t> save_params(const ParamSet& params) {
  std::vector<uint8_t> out;
  put_u16(out, params.version);
  put_u32(out, static_cast<uint32_t>(params.tensors.size()));
  for (const Tensor& t : params.tensors) {
    put_u32(out, static_cast<uint32_t>(t.shape.size()));
    for (int e : t.shape) put_u32(out, static_cast<uint32_t>(e));
    const size_t n = out.size();
    out.resize(n + t.data.size() * sizeof(double));
    std::memcpy(out.data() + n, t.data.data(), t.data.size() * sizeof(double));
  }
  uint8_t digest[SHA256_DIGEST_LENGTH];
  SHA256(out.data(), out.size(), digest);
  out.insert(out.end(), digest, digest + SHA256_DIGEST_LENGTH);
  return out;
}

ParamSet load_params(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < SHA256_DIGEST_LENGTH + 6)
    throw std::runtime_error("load_params: payload too short");
  const size_t body = bytes.size() - SHA256_DIGEST_LENGTH;
  uint8_t digest[SHA256_DIGEST_LENGTH];
  SHA256(bytes.data(), body, digest);
  if (std::memcmp(digest, bytes.data() + body, SHA256_DIGEST_LENGTH) != 0)
    throw std::runtime_error("load_params: checksum mismatch");

  size_t pos = 0;
  ParamSet p;
  p.version = get_u16(bytes, pos);
  if (p.version != 1)
    throw std::runtime_error("load_params: unsupported version " + std::to_string(p.version));
  const uint32_t ntensors = get_u32(bytes, pos);
  for (uint32_t i = 0; i < ntensors; ++i) {
    const uint32_t ndim = get_u32(bytes, pos);
    std::vector<int> shape(ndim);
    int64_t count = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      shape[d] = static_cast<int>(get_u32(bytes, pos));
      count *= shape[d];
    }
    if (pos + count * sizeof(double) > body)
      throw std::runtime_error("load_params: truncated tensor data");
    Tensor t(shape);
    std::memcpy(t.data.data(), bytes.data() + pos, count * sizeof(double));
    pos += count * sizeof(double);
    p.tensors.push_back(std::move(t));
  }
  if (pos != body) throw std::runtime_error("load_params: trailing bytes in payload");
  return p;
}

}  // namespace medc::nn
