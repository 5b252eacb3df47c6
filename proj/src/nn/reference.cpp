#include "medc/nn/reference.hpp"

#include <algorithm>
#include <vector>

namespace medc::nn::reference {

void forward(const NetworkSpec& spec, const ParamSet& params, const double* obs,
             double* logits_out, double* value_out) {
  const SpecInfo info = resolve_spec(spec);
  std::vector<double> cur(obs, obs + int64_t(spec.in_channels) * spec.in_h * spec.in_w);

  for (size_t l = 0; l < info.layers.size(); ++l) {
    const LayerShape& ls = info.layers[l];
    const Tensor& W = params.tensors[2 * l];
    const Tensor& B = params.tensors[2 * l + 1];
    if (ls.def.kind == LayerDef::Kind::conv) {
      const int k = ls.def.kernel, s = ls.def.stride;
      std::vector<double> next(size_t(ls.out_c) * ls.out_h * ls.out_w, 0.0);
      for (int f = 0; f < ls.out_c; ++f)
        for (int oy = 0; oy < ls.out_h; ++oy)
          for (int ox = 0; ox < ls.out_w; ++ox) {
            double acc = B.data[f];
            for (int c = 0; c < ls.in_c; ++c)
              for (int ky = 0; ky < k; ++ky)
                for (int kx = 0; kx < k; ++kx)
                  acc += W.data[((size_t(f) * ls.in_c + c) * k + ky) * k + kx] *
                         cur[(size_t(c) * ls.in_h + oy * s + ky) * ls.in_w + ox * s + kx];
            next[(size_t(f) * ls.out_h + oy) * ls.out_w + ox] = std::max(0.0, acc);
          }
      cur.swap(next);
    } else {
      std::vector<double> next(ls.out_dim, 0.0);
      for (int u = 0; u < ls.out_dim; ++u) {
        double acc = B.data[u];
        for (int i = 0; i < ls.in_dim; ++i)
          acc += W.data[size_t(u) * ls.in_dim + i] * cur[i];
        next[u] = std::max(0.0, acc);
      }
      cur.swap(next);
    }
  }

  const size_t nl = info.layers.size();
  const Tensor& Wp = params.tensors[2 * nl];
  const Tensor& bp = params.tensors[2 * nl + 1];
  const Tensor& Wv = params.tensors[2 * nl + 2];
  const Tensor& bv = params.tensors[2 * nl + 3];
  for (int a = 0; a < spec.policy_actions; ++a) {
    double acc = bp.data[a];
    for (int i = 0; i < info.trunk_out; ++i)
      acc += Wp.data[size_t(a) * info.trunk_out + i] * cur[i];
    logits_out[a] = acc;
  }
  double v = bv.data[0];
  for (int i = 0; i < info.trunk_out; ++i) v += Wv.data[i] * cur[i];
  *value_out = v;
}

}  // namespace medc::nn::reference
