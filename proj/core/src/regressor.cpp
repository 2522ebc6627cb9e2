#include "sasfocus/regressor.hpp"

#include "sasfocus/rng.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace sasfocus {

Tensor::Tensor(std::string n, std::vector<std::size_t> d) : name(std::move(n)), dims(std::move(d)) {
  std::size_t total = 1;
  for (std::size_t x : dims) total *= x;
  v.assign(total, 0.0);
}

Tensor& RegressorParams::find(const std::string& name) {
  for (auto& t : tensors)
    if (t.name == name) return t;
  throw std::runtime_error("missing tensor: " + name);
}

const Tensor& RegressorParams::find(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t;
  throw std::runtime_error("missing tensor: " + name);
}

std::size_t RegressorParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.count();
  return n;
}

void RegressorParams::add_scaled(const RegressorParams& grad, double factor) {
  if (grad.tensors.size() != tensors.size())
    throw std::invalid_argument("add_scaled: tensor layout mismatch");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    auto& dst = tensors[i].v;
    const auto& src = grad.tensors[i].v;
    if (src.size() != dst.size())
      throw std::invalid_argument("add_scaled: tensor shape mismatch");
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += factor * src[k];
  }
}

namespace {

RegressorParams make_layout() {
  RegressorParams p;
  for (int l = 0; l < RegressorParams::kConvLayers; ++l) {
    const std::size_t cin = RegressorParams::kChannels[l];
    const std::size_t cout = RegressorParams::kChannels[l + 1];
    const std::string base = "conv" + std::to_string(l + 1);
    p.tensors.emplace_back(base + ".w", std::vector<std::size_t>{cout, cin, 3, 3});
    p.tensors.emplace_back(base + ".b", std::vector<std::size_t>{cout});
  }
  p.tensors.emplace_back("fc1.w", std::vector<std::size_t>{32, 64});
  p.tensors.emplace_back("fc1.b", std::vector<std::size_t>{32});
  p.tensors.emplace_back("fc2.w",
                         std::vector<std::size_t>{PhasePolynomial::kCoeffCount, 32});
  p.tensors.emplace_back("fc2.b", std::vector<std::size_t>{PhasePolynomial::kCoeffCount});
  return p;
}

void glorot_fill(Tensor& t, std::size_t fan_in, std::size_t fan_out, SplitMix64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& x : t.v) x = rng.next_uniform(-limit, limit);
}

double leaky(double x) { return x >= 0.0 ? x : RegressorParams::kLeakySlope * x; }
double leaky_slope(double x) { return x >= 0.0 ? 1.0 : RegressorParams::kLeakySlope; }

std::size_t conv_out_dim(std::size_t in) { return (in + 2 - 3) / 2 + 1; }

/// 3x3 conv, stride 2, pad 1. in: [cin, h, w], out: [cout, ho, wo].
void conv_forward(const Tensor& in, const Tensor& w, const Tensor& b, Tensor& out) {
  const std::size_t cin = in.dims[0], h = in.dims[1], wd = in.dims[2];
  const std::size_t cout = w.dims[0];
  const std::size_t ho = conv_out_dim(h), wo = conv_out_dim(wd);
  out = Tensor(out.name, {cout, ho, wo});
  for (std::size_t oc = 0; oc < cout; ++oc) {
    for (std::size_t oy = 0; oy < ho; ++oy) {
      for (std::size_t ox = 0; ox < wo; ++ox) {
        double acc = b.v[oc];
        for (std::size_t ic = 0; ic < cin; ++ic) {
          for (int ky = 0; ky < 3; ++ky) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(2 * oy) + ky - 1;
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(2 * ox) + kx - 1;
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(wd)) continue;
              acc += w.v[((oc * cin + ic) * 3 + ky) * 3 + kx] *
                     in.v[(ic * h + static_cast<std::size_t>(iy)) * wd +
                          static_cast<std::size_t>(ix)];
            }
          }
        }
        out.v[(oc * ho + oy) * wo + ox] = acc;
      }
    }
  }
}

/// Gradients of the conv above. d_in may be null for the first layer.
void conv_backward(const Tensor& in, const Tensor& w, const Tensor& d_out, Tensor& d_w,
                   Tensor& d_b, Tensor* d_in) {
  const std::size_t cin = in.dims[0], h = in.dims[1], wd = in.dims[2];
  const std::size_t cout = w.dims[0];
  const std::size_t ho = d_out.dims[1], wo = d_out.dims[2];
  if (d_in) *d_in = Tensor(d_in->name, {cin, h, wd});
  for (std::size_t oc = 0; oc < cout; ++oc) {
    for (std::size_t oy = 0; oy < ho; ++oy) {
      for (std::size_t ox = 0; ox < wo; ++ox) {
        const double go = d_out.v[(oc * ho + oy) * wo + ox];
        if (go == 0.0) continue;
        d_b.v[oc] += go;
        for (std::size_t ic = 0; ic < cin; ++ic) {
          for (int ky = 0; ky < 3; ++ky) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(2 * oy) + ky - 1;
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(2 * ox) + kx - 1;
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(wd)) continue;
              const std::size_t wi = ((oc * cin + ic) * 3 + ky) * 3 + kx;
              const std::size_t ii = (ic * h + static_cast<std::size_t>(iy)) * wd +
                                     static_cast<std::size_t>(ix);
              d_w.v[wi] += go * in.v[ii];
              if (d_in) d_in->v[ii] += go * w.v[wi];
            }
          }
        }
      }
    }
  }
}

}  // namespace

RegressorParams init_params(std::uint64_t seed) {
  RegressorParams p = make_layout();
  SplitMix64 rng(seed);
  for (int l = 0; l < RegressorParams::kConvLayers; ++l) {
    const std::size_t cin = RegressorParams::kChannels[l];
    const std::size_t cout = RegressorParams::kChannels[l + 1];
    glorot_fill(p.find("conv" + std::to_string(l + 1) + ".w"), cin * 9, cout * 9, rng);
  }
  glorot_fill(p.find("fc1.w"), 64, 32, rng);
  glorot_fill(p.find("fc2.w"), 32, PhasePolynomial::kCoeffCount, rng);
  return p;
}

RegressorParams zero_like(const RegressorParams& params) {
  RegressorParams z;
  for (const auto& t : params.tensors) z.tensors.emplace_back(t.name, t.dims);
  return z;
}

PhasePolynomial regressor_forward(const DrcImage& drc_img, const RealImage& phase,
                                  const RegressorParams& params, RegressorTrace* trace) {
  if (drc_img.rows != phase.rows || drc_img.cols != phase.cols)
    throw std::invalid_argument("regressor: DRC and phase shapes differ");
  if (drc_img.rows < 16 || drc_img.cols < 16)
    throw std::invalid_argument("regressor: input must be at least 16x16");

  Tensor act("input", {2, drc_img.rows, drc_img.cols});
  std::memcpy(act.v.data(), drc_img.data.data(), drc_img.size() * sizeof(double));
  std::memcpy(act.v.data() + drc_img.size(), phase.data.data(),
              phase.size() * sizeof(double));

  RegressorTrace local;
  RegressorTrace& tr = trace ? *trace : local;
  tr.conv_inputs.clear();
  tr.conv_pre.clear();

  for (int l = 0; l < RegressorParams::kConvLayers; ++l) {
    const std::string base = "conv" + std::to_string(l + 1);
    tr.conv_inputs.push_back(act);
    Tensor pre(base + ".pre", {1});
    conv_forward(act, params.find(base + ".w"), params.find(base + ".b"), pre);
    tr.conv_pre.push_back(pre);
    act = pre;
    for (double& x : act.v) x = leaky(x);
  }

  // global average pool
  const std::size_t ch = act.dims[0], spatial = act.dims[1] * act.dims[2];
  tr.pooled.assign(ch, 0.0);
  for (std::size_t c = 0; c < ch; ++c) {
    double acc = 0.0;
    for (std::size_t s = 0; s < spatial; ++s) acc += act.v[c * spatial + s];
    tr.pooled[c] = acc / static_cast<double>(spatial);
  }

  const Tensor& w1 = params.find("fc1.w");
  const Tensor& b1 = params.find("fc1.b");
  tr.fc1_pre.assign(32, 0.0);
  tr.fc1_post.assign(32, 0.0);
  for (std::size_t o = 0; o < 32; ++o) {
    double acc = b1.v[o];
    for (std::size_t i = 0; i < 64; ++i) acc += w1.v[o * 64 + i] * tr.pooled[i];
    tr.fc1_pre[o] = acc;
    tr.fc1_post[o] = leaky(acc);
  }

  const Tensor& w2 = params.find("fc2.w");
  const Tensor& b2 = params.find("fc2.b");
  PhasePolynomial out;
  for (int o = 0; o < PhasePolynomial::kCoeffCount; ++o) {
    double acc = b2.v[static_cast<std::size_t>(o)];
    for (std::size_t i = 0; i < 32; ++i)
      acc += w2.v[static_cast<std::size_t>(o) * 32 + i] * tr.fc1_post[i];
    if (!std::isfinite(acc)) throw std::runtime_error("regressor: non-finite output");
    out.coeffs[o] = acc;
  }
  return out;
}

void regressor_backward(const double d_coeffs[PhasePolynomial::kCoeffCount],
                        const DrcImage& drc_img, const RealImage& phase,
                        const RegressorParams& params, const RegressorTrace& trace,
                        RegressorParams& grad) {
  (void)drc_img;
  (void)phase;

  const Tensor& w2 = params.find("fc2.w");
  Tensor& d_w2 = grad.find("fc2.w");
  Tensor& d_b2 = grad.find("fc2.b");
  std::vector<double> d_fc1_post(32, 0.0);
  for (int o = 0; o < PhasePolynomial::kCoeffCount; ++o) {
    const double go = d_coeffs[o];
    d_b2.v[static_cast<std::size_t>(o)] += go;
    for (std::size_t i = 0; i < 32; ++i) {
      d_w2.v[static_cast<std::size_t>(o) * 32 + i] += go * trace.fc1_post[i];
      d_fc1_post[i] += go * w2.v[static_cast<std::size_t>(o) * 32 + i];
    }
  }

  const Tensor& w1 = params.find("fc1.w");
  Tensor& d_w1 = grad.find("fc1.w");
  Tensor& d_b1 = grad.find("fc1.b");
  std::vector<double> d_pooled(64, 0.0);
  for (std::size_t o = 0; o < 32; ++o) {
    const double gp = d_fc1_post[o] * leaky_slope(trace.fc1_pre[o]);
    d_b1.v[o] += gp;
    for (std::size_t i = 0; i < 64; ++i) {
      d_w1.v[o * 64 + i] += gp * trace.pooled[i];
      d_pooled[i] += gp * w1.v[o * 64 + i];
    }
  }

  // GAP adjoint into the last conv's post-activation
  const Tensor& last_pre = trace.conv_pre.back();
  const std::size_t ch = last_pre.dims[0];
  const std::size_t spatial = last_pre.dims[1] * last_pre.dims[2];
  Tensor d_act("d_act", last_pre.dims);
  for (std::size_t c = 0; c < ch; ++c) {
    const double gp = d_pooled[c] / static_cast<double>(spatial);
    for (std::size_t s = 0; s < spatial; ++s) d_act.v[c * spatial + s] = gp;
  }

  for (int l = RegressorParams::kConvLayers - 1; l >= 0; --l) {
    const std::string base = "conv" + std::to_string(l + 1);
    const Tensor& pre = trace.conv_pre[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < d_act.v.size(); ++i) d_act.v[i] *= leaky_slope(pre.v[i]);

    Tensor d_in("d_in", {1});
    conv_backward(trace.conv_inputs[static_cast<std::size_t>(l)], params.find(base + ".w"),
                  d_act, grad.find(base + ".w"), grad.find(base + ".b"),
                  l > 0 ? &d_in : nullptr);
    if (l > 0) d_act = d_in;
  }
}

void save_checkpoint(const RegressorParams& params, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot create " + path.string());
  os.write("DAF1", 4);
  const std::uint32_t version = 1;
  os.write(reinterpret_cast<const char*>(&version), 4);
  for (const auto& t : params.tensors) {
    const std::uint32_t nlen = static_cast<std::uint32_t>(t.name.size());
    os.write(reinterpret_cast<const char*>(&nlen), 4);
    os.write(t.name.data(), nlen);
    const std::uint32_t rank = static_cast<std::uint32_t>(t.dims.size());
    os.write(reinterpret_cast<const char*>(&rank), 4);
    for (std::size_t d : t.dims) {
      const std::uint32_t dd = static_cast<std::uint32_t>(d);
      os.write(reinterpret_cast<const char*>(&dd), 4);
    }
    os.write(reinterpret_cast<const char*>(t.v.data()),
             static_cast<std::streamsize>(t.v.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

RegressorParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "DAF1", 4) != 0)
    throw std::runtime_error("bad DAF1 magic in " + path.string());
  std::uint32_t version = 0;
  is.read(reinterpret_cast<char*>(&version), 4);
  if (version != 1) throw std::runtime_error("unsupported DAF1 version");

  RegressorParams p;
  while (true) {
    std::uint32_t nlen = 0;
    is.read(reinterpret_cast<char*>(&nlen), 4);
    if (!is) break;  // clean EOF between tensors
    std::string name(nlen, '\0');
    is.read(name.data(), nlen);
    std::uint32_t rank = 0;
    is.read(reinterpret_cast<char*>(&rank), 4);
    std::vector<std::size_t> dims(rank);
    for (std::uint32_t k = 0; k < rank; ++k) {
      std::uint32_t dd = 0;
      is.read(reinterpret_cast<char*>(&dd), 4);
      dims[k] = dd;
    }
    Tensor t(name, dims);
    is.read(reinterpret_cast<char*>(t.v.data()),
            static_cast<std::streamsize>(t.v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated DAF1 tensor in " + path.string());
    p.tensors.push_back(std::move(t));
  }

  // shape sanity against the fixed architecture
  const RegressorParams expected = make_layout();
  for (const auto& e : expected.tensors) {
    const Tensor& t = p.find(e.name);
    if (t.dims != e.dims)
      throw std::runtime_error("checkpoint tensor shape mismatch: " + e.name);
  }
  return p;
}

}  // namespace sasfocus
