#pragma once

#include <memory>
#include <string>

#include "intentsim/nn/layers.hpp"

namespace intentsim::nn {

enum class Scale : uint8_t { Desk, Full };

inline const char* to_string(Scale s) { return s == Scale::Desk ? "desk" : "full"; }
inline Scale scale_from_string(const std::string& s) {
  if (s == "desk") return Scale::Desk;
  if (s == "full") return Scale::Full;
  throw std::invalid_argument("unknown scale: " + s + " (valid: desk, full)");
}

struct FcnSpec {
  int in_channels = 1;
  int out_channels = 1;
  Scale scale = Scale::Desk;

  bool operator==(const FcnSpec&) const = default;
};

template <class T>
struct ResidualBlock {
  Conv2d<T> conv1, conv2;
  BatchNorm2d<T> bn1, bn2;
  Relu<T> relu1;
  bool projected = false;
  Conv2d<T> proj;
  BatchNorm2d<T> proj_bn;

  Tensor<T> cached_sum;  // pre-activation sum for the final relu backward

  ResidualBlock() = default;
  ResidualBlock(int in, int out, int stride)
      : conv1(in, out, 3, stride, false),
        conv2(out, out, 3, 1, false),
        bn1(out),
        bn2(out),
        projected(stride != 1 || in != out) {
    if (projected) {
      proj = Conv2d<T>(in, out, 1, stride, false);
      proj_bn = BatchNorm2d<T>(out);
    }
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) {
    Tensor<T> main = relu1.forward(bn1.forward(conv1.forward(x), train));
    main = bn2.forward(conv2.forward(main), train);
    Tensor<T> skip = projected ? proj_bn.forward(proj.forward(x), train) : x;
    for (size_t i = 0; i < main.data.size(); ++i) main.data[i] += skip.data[i];
    cached_sum = main;
    for (T& v : main.data) v = v > T(0) ? v : T(0);
    return main;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> g = gy;
    for (size_t i = 0; i < g.data.size(); ++i)
      if (!(cached_sum.data[i] > T(0))) g.data[i] = T(0);
    Tensor<T> g_main = conv1.backward(bn1.backward(relu1.backward(conv2.backward(bn2.backward(g)))));
    Tensor<T> g_skip = projected ? proj.backward(proj_bn.backward(g)) : g;
    for (size_t i = 0; i < g_main.data.size(); ++i) g_main.data[i] += g_skip.data[i];
    return g_main;
  }

  void zero_grad() {
    conv1.zero_grad();
    conv2.zero_grad();
    bn1.zero_grad();
    bn2.zero_grad();
    if (projected) {
      proj.zero_grad();
      proj_bn.zero_grad();
    }
  }

  void collect_params(const std::string& prefix, std::vector<ParamView<T>>& out) {
    conv1.collect_params(prefix + ".conv1", out);
    bn1.collect_params(prefix + ".bn1", out);
    conv2.collect_params(prefix + ".conv2", out);
    bn2.collect_params(prefix + ".bn2", out);
    if (projected) {
      proj.collect_params(prefix + ".proj", out);
      proj_bn.collect_params(prefix + ".proj_bn", out);
    }
  }
};

/// Fully convolutional residual network: a stride-4 encoder followed by
/// three 1x1 convolutions interleaved with two 2x bilinear upsamplings
/// (conv, up, conv, up, conv), so the output map has the input's spatial
/// dimensions. Inputs of arbitrary size are zero-padded up to a multiple
/// of 4 and the output cropped back.
template <class T>
struct Fcn {
  FcnSpec spec;
  Conv2d<T> stem;
  BatchNorm2d<T> stem_bn;
  Relu<T> stem_relu;
  std::vector<ResidualBlock<T>> blocks;
  Conv2d<T> head1, head2, head3;
  BatchNorm2d<T> head1_bn, head2_bn;
  Relu<T> head1_relu, head2_relu;
  Upsample2x<T> up1, up2;

  int in_h = 0, in_w = 0;  // pre-padding size of the last forward

  Fcn() = default;

  explicit Fcn(const FcnSpec& s) : spec(s) {
    const bool desk = s.scale == Scale::Desk;
    const int base = desk ? 16 : 64;  // quarter width at desk scale
    stem = Conv2d<T>(s.in_channels, base, desk ? 3 : 7, 2, false);
    stem_bn = BatchNorm2d<T>(base);
    if (desk) {
      blocks.emplace_back(base, base, 1);
      blocks.emplace_back(base, base * 2, 2);
      blocks.emplace_back(base * 2, base * 4, 1);
      blocks.emplace_back(base * 4, base * 8, 1);
    } else {
      blocks.emplace_back(base, base, 1);
      blocks.emplace_back(base, base, 1);
      blocks.emplace_back(base, base * 2, 2);
      blocks.emplace_back(base * 2, base * 2, 1);
      blocks.emplace_back(base * 2, base * 4, 1);
      blocks.emplace_back(base * 4, base * 4, 1);
      blocks.emplace_back(base * 4, base * 8, 1);
      blocks.emplace_back(base * 8, base * 8, 1);
    }
    const int enc = base * 8;
    // Convolutions feeding BatchNorm carry no bias; only the output conv does.
    head1 = Conv2d<T>(enc, enc / 4, 1, 1, false);
    head1_bn = BatchNorm2d<T>(enc / 4);
    head2 = Conv2d<T>(enc / 4, enc / 8, 1, 1, false);
    head2_bn = BatchNorm2d<T>(enc / 8);
    head3 = Conv2d<T>(enc / 8, s.out_channels, 1, 1, true);
  }

  void init(uint32_t seed) {
    std::mt19937 rng(seed);
    stem.init(rng);
    for (auto& b : blocks) {
      b.conv1.init(rng);
      b.conv2.init(rng);
      if (b.projected) b.proj.init(rng);
    }
    head1.init(rng);
    head2.init(rng);
    head3.init(rng);
  }

  static int padded(int v) { return (v + 3) / 4 * 4; }

  Tensor<T> forward(const Tensor<T>& x, bool train) {
    if (x.c != spec.in_channels) throw std::invalid_argument("fcn: input channel mismatch");
    in_h = x.h;
    in_w = x.w;
    Tensor<T> p = x;
    if (padded(x.h) != x.h || padded(x.w) != x.w) {
      p = Tensor<T>(x.n, x.c, padded(x.h), padded(x.w));
      for (int ni = 0; ni < x.n; ++ni)
        for (int ci = 0; ci < x.c; ++ci)
          for (int y = 0; y < x.h; ++y)
            std::copy(x.row(ni, ci, y), x.row(ni, ci, y) + x.w, p.row(ni, ci, y));
    }
    Tensor<T> t = stem_relu.forward(stem_bn.forward(stem.forward(p), train));
    for (auto& b : blocks) t = b.forward(t, train);
    t = up1.forward(head1_relu.forward(head1_bn.forward(head1.forward(t), train)));
    t = up2.forward(head2_relu.forward(head2_bn.forward(head2.forward(t), train)));
    t = head3.forward(t);
    if (t.h == in_h && t.w == in_w) return t;
    Tensor<T> out(t.n, t.c, in_h, in_w);
    for (int ni = 0; ni < t.n; ++ni)
      for (int ci = 0; ci < t.c; ++ci)
        for (int y = 0; y < in_h; ++y)
          std::copy(t.row(ni, ci, y), t.row(ni, ci, y) + in_w, out.row(ni, ci, y));
    return out;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> g = gy;
    if (padded(in_h) != in_h || padded(in_w) != in_w) {
      g = Tensor<T>(gy.n, gy.c, padded(in_h), padded(in_w));
      for (int ni = 0; ni < gy.n; ++ni)
        for (int ci = 0; ci < gy.c; ++ci)
          for (int y = 0; y < in_h; ++y)
            std::copy(gy.row(ni, ci, y), gy.row(ni, ci, y) + in_w, g.row(ni, ci, y));
    }
    g = head3.backward(g);
    g = head2.backward(head2_bn.backward(head2_relu.backward(up2.backward(g))));
    g = head1.backward(head1_bn.backward(head1_relu.backward(up1.backward(g))));
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) g = it->backward(g);
    g = stem.backward(stem_bn.backward(stem_relu.backward(g)));
    if (padded(in_h) == in_h && padded(in_w) == in_w) return g;
    Tensor<T> gx(g.n, g.c, in_h, in_w);
    for (int ni = 0; ni < g.n; ++ni)
      for (int ci = 0; ci < g.c; ++ci)
        for (int y = 0; y < in_h; ++y)
          std::copy(g.row(ni, ci, y), g.row(ni, ci, y) + in_w, gx.row(ni, ci, y));
    return gx;
  }

  void zero_grad() {
    stem.zero_grad();
    stem_bn.zero_grad();
    for (auto& b : blocks) b.zero_grad();
    head1.zero_grad();
    head1_bn.zero_grad();
    head2.zero_grad();
    head2_bn.zero_grad();
    head3.zero_grad();
  }

  /// Parameters and state in the documented serialization order.
  std::vector<ParamView<T>> params() {
    std::vector<ParamView<T>> out;
    stem.collect_params("stem", out);
    stem_bn.collect_params("stem_bn", out);
    for (size_t i = 0; i < blocks.size(); ++i)
      blocks[i].collect_params("block" + std::to_string(i), out);
    head1.collect_params("head1", out);
    head1_bn.collect_params("head1_bn", out);
    head2.collect_params("head2", out);
    head2_bn.collect_params("head2_bn", out);
    head3.collect_params("head3", out);
    return out;
  }

  /// Hard copy of all parameters and running statistics from another
  /// network with the same spec.
  void copy_from(Fcn<T>& other) {
    auto a = params(), b = other.params();
    if (a.size() != b.size()) throw std::invalid_argument("fcn copy: spec mismatch");
    for (size_t i = 0; i < a.size(); ++i) *a[i].value = *b[i].value;
  }
};

}  // namespace intentsim::nn
