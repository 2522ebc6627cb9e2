#ifndef SASFOCUS_REGRESSOR_HPP
#define SASFOCUS_REGRESSOR_HPP

#include "sasfocus/slc.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sasfocus {

/// Named dense tensor, row-major.
struct Tensor {
  std::string name;
  std::vector<std::size_t> dims;
  std::vector<double> v;

  Tensor() = default;
  Tensor(std::string n, std::vector<std::size_t> d);
  std::size_t count() const { return v.size(); }
};

/// Compact coefficient regressor:
///   conv 3x3 stride 2 pad 1, channels 2 -> 8 -> 16 -> 32 -> 64,
///   leaky ReLU (slope 0.1) after each conv,
///   global average pool to 64, MLP 64 -> 32 -> 9,
///   leaky ReLU between the dense layers, linear output.
struct RegressorParams {
  static constexpr int kConvLayers = 4;
  static constexpr std::size_t kChannels[kConvLayers + 1] = {2, 8, 16, 32, 64};
  static constexpr double kLeakySlope = 0.1;

  std::vector<Tensor> tensors;  // conv{1..4}.w/.b, fc1.w/.b, fc2.w/.b

  Tensor& find(const std::string& name);
  const Tensor& find(const std::string& name) const;

  std::size_t parameter_count() const;
  void add_scaled(const RegressorParams& grad, double factor);  // p += factor * grad
};

/// Glorot-uniform initialization, deterministic in the seed.
RegressorParams init_params(std::uint64_t seed);

/// Zero tensors with the same shapes (gradient accumulator).
RegressorParams zero_like(const RegressorParams& params);

/// Forward-pass intermediates needed by the backward pass.
struct RegressorTrace {
  std::vector<Tensor> conv_inputs;  // input of each conv layer (post-activation)
  std::vector<Tensor> conv_pre;     // pre-activation conv outputs
  std::vector<double> pooled;       // GAP output (64)
  std::vector<double> fc1_pre;      // pre-activation (32)
  std::vector<double> fc1_post;
};

/// Maps the stacked (DRC, phase) input to phase-polynomial coefficients.
PhasePolynomial regressor_forward(const DrcImage& drc_img, const RealImage& phase,
                                  const RegressorParams& params,
                                  RegressorTrace* trace = nullptr);

/// Backpropagates d(loss)/d(coefficients) to every parameter. The inputs are
/// data, not parameters: no gradient is produced for them.
void regressor_backward(const double d_coeffs[PhasePolynomial::kCoeffCount],
                        const DrcImage& drc_img, const RealImage& phase,
                        const RegressorParams& params, const RegressorTrace& trace,
                        RegressorParams& grad);

/// DAF1 checkpoint: magic "DAF1", u32 version, then per tensor
/// (u32 name length, name bytes, u32 rank, u32 dims..., float64 payload),
/// little-endian throughout.
void save_checkpoint(const RegressorParams& params, const std::filesystem::path& path);
RegressorParams load_checkpoint(const std::filesystem::path& path);

}  // namespace sasfocus

#endif
