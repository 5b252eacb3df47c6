#include "medc/nn/spec.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace medc::nn {

using json = nlohmann::json;

SpecInfo resolve_spec(const NetworkSpec& spec) {
  if (spec.in_channels <= 0 || spec.in_h <= 0 || spec.in_w <= 0)
    throw std::invalid_argument("NetworkSpec: input extents must be positive");
  if (spec.policy_actions <= 0)
    throw std::invalid_argument("NetworkSpec: policy head needs at least one action");
  if (spec.layers.empty())
    throw std::invalid_argument("NetworkSpec: at least one layer required");

  SpecInfo info;
  int c = spec.in_channels, h = spec.in_h, w = spec.in_w;
  bool flattened = false;
  int dim = 0;
  for (const LayerDef& def : spec.layers) {
    LayerShape ls;
    ls.def = def;
    if (def.kind == LayerDef::Kind::conv) {
      if (flattened)
        throw std::invalid_argument("NetworkSpec: conv after dense is not supported");
      if (def.kernel <= 0 || def.stride <= 0 || def.filters <= 0)
        throw std::invalid_argument("NetworkSpec: conv parameters must be positive");
      if (def.kernel > h || def.kernel > w)
        throw std::invalid_argument(
            "NetworkSpec: kernel " + std::to_string(def.kernel) +
            " exceeds input " + std::to_string(h) + "x" + std::to_string(w));
      ls.in_c = c; ls.in_h = h; ls.in_w = w;
      ls.out_c = def.filters;
      ls.out_h = (h - def.kernel) / def.stride + 1;
      ls.out_w = (w - def.kernel) / def.stride + 1;
      info.param_count += int64_t(def.filters) * c * def.kernel * def.kernel + def.filters;
      c = ls.out_c; h = ls.out_h; w = ls.out_w;
      dim = c * h * w;
    } else {
      if (def.units <= 0)
        throw std::invalid_argument("NetworkSpec: dense units must be positive");
      if (!flattened) {
        dim = c * h * w;
        flattened = true;
      }
      ls.in_dim = dim;
      ls.out_dim = def.units;
      info.param_count += int64_t(def.units) * dim + def.units;
      dim = def.units;
    }
    info.layers.push_back(ls);
  }
  if (!flattened) dim = c * h * w;
  info.trunk_out = dim;
  info.param_count += int64_t(spec.policy_actions) * dim + spec.policy_actions;  // policy head
  info.param_count += int64_t(1) * dim + 1;                                      // value head
  return info;
}

NetworkSpec default_spec(int channels, int h, int w, int actions) {
  NetworkSpec s;
  s.in_channels = channels;
  s.in_h = h;
  s.in_w = w;
  s.layers = {LayerDef::conv(8, 3, 1), LayerDef::conv(16, 3, 2), LayerDef::dense(64)};
  s.policy_actions = actions;
  return s;
}

std::string spec_to_json(const NetworkSpec& spec) {
  json j;
  j["in_channels"] = spec.in_channels;
  j["in_h"] = spec.in_h;
  j["in_w"] = spec.in_w;
  j["policy_actions"] = spec.policy_actions;
  json layers = json::array();
  for (const LayerDef& d : spec.layers) {
    if (d.kind == LayerDef::Kind::conv)
      layers.push_back({{"type", "conv"}, {"filters", d.filters},
                        {"kernel", d.kernel}, {"stride", d.stride}});
    else
      layers.push_back({{"type", "dense"}, {"units", d.units}});
  }
  j["layers"] = layers;
  return j.dump();
}

NetworkSpec spec_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  NetworkSpec s;
  s.in_channels = j.at("in_channels").get<int>();
  s.in_h = j.at("in_h").get<int>();
  s.in_w = j.at("in_w").get<int>();
  s.policy_actions = j.at("policy_actions").get<int>();
  for (const auto& item : j.at("layers")) {
    std::string type = item.at("type").get<std::string>();
    if (type == "conv")
      s.layers.push_back(LayerDef::conv(item.at("filters").get<int>(),
                                        item.at("kernel").get<int>(),
                                        item.at("stride").get<int>()));
    else if (type == "dense")
      s.layers.push_back(LayerDef::dense(item.at("units").get<int>()));
    else
      throw std::invalid_argument("NetworkSpec: unknown layer type '" + type + "'");
  }
  resolve_spec(s);  // validate
  return s;
}

}  // namespace medc::nn
