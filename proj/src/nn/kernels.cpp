#include <Eigen/Dense>
#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "medc/nn/network.hpp"

// Batched forward/backward kernels. Work is split over fixed-size sample
// chunks; gradients are accumulated per chunk and reduced in chunk order, so
// results are bitwise identical for any OpenMP thread count.

namespace medc::nn {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using CMapVec = Eigen::Map<const Eigen::VectorXd>;

constexpr int kChunk = 64;

struct EigenInit {
  EigenInit() { Eigen::setNbThreads(1); }
};
const EigenInit eigen_init;

inline int num_chunks(int batch) { return (batch + kChunk - 1) / kChunk; }

// Patch matrix rows (oy,ox) x cols (c,ky,kx) for samples [b0, b1).
void im2col_range(const double* in, int b0, int b1, const LayerShape& ls,
                  double* out) {
  const int k = ls.def.kernel, stride = ls.def.stride;
  const int cells = ls.out_h * ls.out_w;
  const int cols = ls.in_c * k * k;
  const int in_sz = ls.in_c * ls.in_h * ls.in_w;
  for (int b = b0; b < b1; ++b) {
    const double* x = in + int64_t(b) * in_sz;
    double* row = out + int64_t(b - b0) * cells * cols;
    for (int oy = 0; oy < ls.out_h; ++oy) {
      for (int ox = 0; ox < ls.out_w; ++ox) {
        const int iy = oy * stride, ix = ox * stride;
        for (int c = 0; c < ls.in_c; ++c) {
          const double* src = x + (c * ls.in_h + iy) * ls.in_w + ix;
          for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) *row++ = src[ky * ls.in_w + kx];
          }
        }
      }
    }
  }
}

void conv_forward_chunk(const double* in, double* out, double* colbuf,
                        const Tensor& W, const Tensor& bias,
                        const LayerShape& ls, int b0, int b1) {
  const int k = ls.def.kernel;
  const int cells = ls.out_h * ls.out_w;
  const int cols = ls.in_c * k * k;
  const int bn = b1 - b0;
  im2col_range(in, b0, b1, ls, colbuf);
  CMapMat Wm(W.ptr(), ls.out_c, cols);
  MapMat M(colbuf, int64_t(bn) * cells, cols);
  RowMat Y = M * Wm.transpose();  // [bn*cells, F]
  // bias + ReLU + transpose to channel-major [F, cells] per sample
  const int out_sz = ls.out_c * cells;
  for (int b = 0; b < bn; ++b) {
    double* dst = out + int64_t(b0 + b) * out_sz;
    const double* src = Y.data() + int64_t(b) * cells * ls.out_c;
    for (int f = 0; f < ls.out_c; ++f) {
      const double bf = bias.data[f];
      for (int cell = 0; cell < cells; ++cell) {
        double v = src[cell * ls.out_c + f] + bf;
        dst[f * cells + cell] = v > 0.0 ? v : 0.0;
      }
    }
  }
}

void dense_forward_chunk(const double* in, double* out, const Tensor& W,
                         const Tensor& bias, int in_dim, int units, int b0,
                         int b1, bool relu) {
  const int bn = b1 - b0;
  CMapMat Wm(W.ptr(), units, in_dim);
  CMapMat X(in + int64_t(b0) * in_dim, bn, in_dim);
  MapMat Y(out + int64_t(b0) * units, bn, units);
  Y.noalias() = X * Wm.transpose();
  Y.rowwise() += CMapVec(bias.ptr(), units).transpose();
  if (relu) Y = Y.cwiseMax(0.0);
}

}  // namespace

ForwardResult forward_batch(const NetworkSpec& spec, const ParamSet& params,
                            const double* obs, int batch, ForwardTrace* trace) {
  const SpecInfo info = resolve_spec(spec);
  const size_t n_layers = info.layers.size();
  if (params.tensors.size() != 2 * n_layers + 4)
    throw std::invalid_argument("forward_batch: ParamSet does not match spec");

  // Activation storage per layer plus trunk output.
  std::vector<Tensor> acts(n_layers);
  std::vector<Tensor> cols;
  for (size_t l = 0; l < n_layers; ++l) {
    const LayerShape& ls = info.layers[l];
    if (ls.def.kind == LayerDef::Kind::conv) {
      acts[l] = Tensor({batch, ls.out_c * ls.out_h * ls.out_w});
      cols.emplace_back(Tensor({batch * ls.out_h * ls.out_w,
                                ls.in_c * ls.def.kernel * ls.def.kernel}));
    } else {
      acts[l] = Tensor({batch, ls.out_dim});
    }
  }
  ForwardResult res;
  res.logits = Tensor({batch, spec.policy_actions});
  res.values = Tensor({batch});

  const int nchunks = num_chunks(batch);
#pragma omp parallel for schedule(static) if (nchunks > 1)
  for (int ci = 0; ci < nchunks; ++ci) {
    const int b0 = ci * kChunk;
    const int b1 = std::min(batch, b0 + kChunk);
    const double* in = obs;
    int conv_idx = 0;
    for (size_t l = 0; l < n_layers; ++l) {
      const LayerShape& ls = info.layers[l];
      const Tensor& W = params.tensors[2 * l];
      const Tensor& B = params.tensors[2 * l + 1];
      if (ls.def.kind == LayerDef::Kind::conv) {
        const int cells = ls.out_h * ls.out_w;
        const int pcols = ls.in_c * ls.def.kernel * ls.def.kernel;
        double* colbuf = cols[conv_idx].ptr() + int64_t(b0) * cells * pcols;
        conv_forward_chunk(in, acts[l].ptr(), colbuf, W, B, ls, b0, b1);
        ++conv_idx;
      } else {
        dense_forward_chunk(in, acts[l].ptr(), W, B, ls.in_dim, ls.out_dim, b0,
                            b1, true);
      }
      in = acts[l].ptr();
    }
    // heads (no activation)
    const Tensor& Wp = params.tensors[2 * n_layers];
    const Tensor& bp = params.tensors[2 * n_layers + 1];
    const Tensor& Wv = params.tensors[2 * n_layers + 2];
    const Tensor& bv = params.tensors[2 * n_layers + 3];
    dense_forward_chunk(in, res.logits.ptr(), Wp, bp, info.trunk_out,
                        spec.policy_actions, b0, b1, false);
    const int bn = b1 - b0;
    CMapMat X(in + int64_t(b0) * info.trunk_out, bn, info.trunk_out);
    CMapVec wv(Wv.ptr(), info.trunk_out);
    MapVec v(res.values.ptr() + b0, bn);
    v.noalias() = X * wv;
    v.array() += bv.data[0];
  }

  for (double x : res.logits.data)
    if (!std::isfinite(x)) throw std::runtime_error("forward_batch: non-finite logits");

  if (trace) {
    trace->recorded = true;
    trace->batch = batch;
    trace->spec = spec;
    trace->inputs.clear();
    trace->inputs.emplace_back(Tensor({batch, spec.in_channels * spec.in_h * spec.in_w},
                                      std::vector<double>(obs, obs + int64_t(batch) * spec.in_channels * spec.in_h * spec.in_w)));
    trace->activations = acts;
    trace->im2col = std::move(cols);
    trace->trunk_out = acts.back();
    trace->logits = res.logits;
    trace->values = res.values;
  }
  return res;
}

ParamSet backward_batch(const ParamSet& params, const ForwardTrace& trace,
                        const Tensor& dlogits, const Tensor& dvalues) {
  if (!trace.recorded)
    throw std::invalid_argument("backward_batch: loss is not attached to a recorded forward pass");
  const NetworkSpec& spec = trace.spec;
  const SpecInfo info = resolve_spec(spec);
  const size_t n_layers = info.layers.size();
  const int batch = trace.batch;
  if (dlogits.shape != std::vector<int>{batch, spec.policy_actions} ||
      dlogits.size() != int64_t(batch) * spec.policy_actions)
    throw std::invalid_argument("backward_batch: dlogits shape mismatch");
  if (dvalues.size() != batch)
    throw std::invalid_argument("backward_batch: dvalues shape mismatch");

  const int nchunks = num_chunks(batch);
  std::vector<ParamSet> partial(nchunks);

#pragma omp parallel for schedule(static) if (nchunks > 1)
  for (int ci = 0; ci < nchunks; ++ci) {
    const int b0 = ci * kChunk;
    const int b1 = std::min(batch, b0 + kChunk);
    const int bn = b1 - b0;
    ParamSet& g = partial[ci];
    g = zeros_like(params);

    const int D = info.trunk_out;
    const Tensor& Wp = params.tensors[2 * n_layers];
    const Tensor& Wv = params.tensors[2 * n_layers + 2];

    // Heads.
    CMapMat X(trace.trunk_out.ptr() + int64_t(b0) * D, bn, D);
    CMapMat dL(dlogits.ptr() + int64_t(b0) * spec.policy_actions, bn,
               spec.policy_actions);
    CMapVec dV(dvalues.ptr() + b0, bn);
    MapMat gWp(g.tensors[2 * n_layers].ptr(), spec.policy_actions, D);
    MapVec gbp(g.tensors[2 * n_layers + 1].ptr(), spec.policy_actions);
    MapMat gWv(g.tensors[2 * n_layers + 2].ptr(), 1, D);
    MapVec gbv(g.tensors[2 * n_layers + 3].ptr(), 1);
    gWp.noalias() = dL.transpose() * X;
    gbp = dL.colwise().sum();
    gWv.noalias() = dV.transpose() * X;
    gbv[0] = dV.sum();

    RowMat dX(bn, D);
    dX.noalias() = dL * CMapMat(Wp.ptr(), spec.policy_actions, D);
    dX.noalias() += dV * CMapMat(Wv.ptr(), 1, D);

    // Trunk, reversed.
    for (int l = int(n_layers) - 1; l >= 0; --l) {
      const LayerShape& ls = info.layers[l];
      const Tensor& W = params.tensors[2 * l];
      const double* in_act = (l == 0) ? trace.inputs[0].ptr()
                                      : trace.activations[l - 1].ptr();
      if (ls.def.kind == LayerDef::Kind::dense) {
        // ReLU mask from the stored post-activation.
        const double* post = trace.activations[l].ptr() + int64_t(b0) * ls.out_dim;
        for (int b = 0; b < bn; ++b)
          for (int u = 0; u < ls.out_dim; ++u)
            if (post[int64_t(b) * ls.out_dim + u] <= 0.0) dX(b, u) = 0.0;
        CMapMat Xin(in_act + int64_t(b0) * ls.in_dim, bn, ls.in_dim);
        MapMat gW(g.tensors[2 * l].ptr(), ls.out_dim, ls.in_dim);
        MapVec gb(g.tensors[2 * l + 1].ptr(), ls.out_dim);
        gW.noalias() = dX.transpose() * Xin;
        gb = dX.colwise().sum();
        RowMat dprev(bn, ls.in_dim);
        dprev.noalias() = dX * CMapMat(W.ptr(), ls.out_dim, ls.in_dim);
        dX.swap(dprev);
      } else {
        const int cells = ls.out_h * ls.out_w;
        const int pcols = ls.in_c * ls.def.kernel * ls.def.kernel;
        int conv_idx = 0;
        for (int j = 0; j < l; ++j)
          if (info.layers[j].def.kind == LayerDef::Kind::conv) ++conv_idx;
        // dX currently [bn, F*cells] channel-major; rebuild cells-major dY
        // with the ReLU mask applied.
        RowMat dY(int64_t(bn) * cells, ls.out_c);
        const double* post = trace.activations[l].ptr();
        for (int b = 0; b < bn; ++b) {
          const double* p = post + int64_t(b0 + b) * ls.out_c * cells;
          for (int f = 0; f < ls.out_c; ++f)
            for (int cell = 0; cell < cells; ++cell) {
              double gv = dX(b, f * cells + cell);
              dY(int64_t(b) * cells + cell, f) =
                  (p[f * cells + cell] > 0.0) ? gv : 0.0;
            }
        }
        CMapMat M(trace.im2col[conv_idx].ptr() + int64_t(b0) * cells * pcols,
                  int64_t(bn) * cells, pcols);
        MapMat gW(g.tensors[2 * l].ptr(), ls.out_c, pcols);
        MapVec gb(g.tensors[2 * l + 1].ptr(), ls.out_c);
        gW.noalias() = dY.transpose() * M;
        gb = dY.colwise().sum();
        if (l > 0) {
          // fold dM back onto the input grid
          RowMat dM(int64_t(bn) * cells, pcols);
          dM.noalias() = dY * CMapMat(W.ptr(), ls.out_c, pcols);
          RowMat dprev = RowMat::Zero(bn, ls.in_c * ls.in_h * ls.in_w);
          const int k = ls.def.kernel, stride = ls.def.stride;
          for (int b = 0; b < bn; ++b) {
            for (int oy = 0; oy < ls.out_h; ++oy)
              for (int ox = 0; ox < ls.out_w; ++ox) {
                const double* row = dM.data() +
                    ((int64_t(b) * cells) + oy * ls.out_w + ox) * pcols;
                const int iy = oy * stride, ix = ox * stride;
                for (int c = 0; c < ls.in_c; ++c)
                  for (int ky = 0; ky < k; ++ky)
                    for (int kx = 0; kx < k; ++kx)
                      dprev(b, (c * ls.in_h + iy + ky) * ls.in_w + ix + kx) +=
                          *row++;
              }
          }
          dX.swap(dprev);
        }
      }
    }
  }

  // Ordered reduction keeps the result independent of the thread count.
  ParamSet grads = std::move(partial[0]);
  for (int ci = 1; ci < nchunks; ++ci)
    for (size_t t = 0; t < grads.tensors.size(); ++t) {
      double* a = grads.tensors[t].ptr();
      const double* b = partial[ci].tensors[t].ptr();
      for (int64_t i = 0; i < grads.tensors[t].size(); ++i) a[i] += b[i];
    }
  return grads;
}

}  // namespace medc::nn
