#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medc/nn/tensor.hpp"

namespace medc::nn {

// Layer descriptor: a stack of valid-padding convolutions followed by dense
// layers, all ReLU-activated, feeding a discrete policy head and a scalar
// value head.
struct LayerDef {
  enum class Kind { conv, dense };
  Kind kind;
  int filters = 0;  // conv
  int kernel = 0;   // conv
  int stride = 0;   // conv
  int units = 0;    // dense

  static LayerDef conv(int filters, int kernel, int stride) {
    return {Kind::conv, filters, kernel, stride, 0};
  }
  static LayerDef dense(int units) {
    return {Kind::dense, 0, 0, 0, units};
  }
  bool operator==(const LayerDef&) const = default;
};

struct NetworkSpec {
  int in_channels = 0;
  int in_h = 0;
  int in_w = 0;
  std::vector<LayerDef> layers;
  int policy_actions = 0;  // |A|; the value head is always width 1

  bool operator==(const NetworkSpec&) const = default;
};

// Resolved per-layer geometry; throws on an inconsistent spec.
struct LayerShape {
  LayerDef def;
  int in_c = 0, in_h = 0, in_w = 0;   // conv input
  int out_c = 0, out_h = 0, out_w = 0;  // conv output
  int in_dim = 0, out_dim = 0;          // dense
};

struct SpecInfo {
  std::vector<LayerShape> layers;
  int trunk_out = 0;   // width feeding the two heads
  int64_t param_count = 0;
};

SpecInfo resolve_spec(const NetworkSpec& spec);

// The default architecture used for every environment in this project:
// conv(8,3x3,s1) -> conv(16,3x3,s2) -> dense(64) -> {policy |A|, value 1}.
NetworkSpec default_spec(int channels, int h, int w, int actions);

std::string spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const std::string& json_text);

}  // namespace medc::nn
