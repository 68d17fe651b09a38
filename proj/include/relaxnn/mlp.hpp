#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxnn/autodiff.hpp"

namespace relaxnn {

struct MlpConfig {
  int input_dim = 0;
  std::vector<int> hidden;  // hidden layer widths; may be empty
  int output_dim = 0;

  int n_layers() const { return static_cast<int>(hidden.size()) + 1; }
  int layer_in(int layer) const {
    return layer == 0 ? input_dim : hidden[layer - 1];
  }
  int layer_out(int layer) const {
    return layer == n_layers() - 1 ? output_dim : hidden[layer];
  }
  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

// Flat weight/bias storage: per layer, the weight matrix row-major
// (out x in) followed by the bias vector.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(MlpConfig config);

  const MlpConfig& config() const { return config_; }
  std::size_t count() const { return data_.size(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  std::size_t weight_offset(int layer) const { return w_offset_[layer]; }
  std::size_t bias_offset(int layer) const { return b_offset_[layer]; }
  double weight(int layer, int row, int col) const {
    return data_[w_offset_[layer] + static_cast<std::size_t>(row) * config_.layer_in(layer) + col];
  }
  double bias(int layer, int row) const { return data_[b_offset_[layer] + row]; }
  const double* weight_row(int layer, int row) const {
    return data_.data() + w_offset_[layer] + static_cast<std::size_t>(row) * config_.layer_in(layer);
  }

  // Checkpoint byte layout (little-endian throughout):
  //   "RNNP"                     4 bytes magic
  //   u32 version (= 1)
  //   u32 input_dim, u32 output_dim, u32 n_hidden, u32 hidden[n_hidden]
  //   u64 parameter count
  //   u64 weight_offset[layer], u64 bias_offset[layer]  for each layer
  //   f64 parameters (flat, layer-major, weights row-major then bias)
  void save(const std::string& path) const;
  static ParamSet load(const std::string& path);

 private:
  MlpConfig config_;
  std::vector<double> data_;
  std::vector<std::size_t> w_offset_;
  std::vector<std::size_t> b_offset_;
};

// Weights ~ U[-sqrt(6/fan_in), +sqrt(6/fan_in)] per layer, biases zero.
ParamSet init_he_uniform(const MlpConfig& config, std::uint64_t seed);

// Which input directions the derivative channels track (dims 0 and 1).
struct DerivChannels {
  bool d_dt = false;
  bool d_dx = false;
};

struct OutputTriple {
  NodeId value;
  std::optional<NodeId> d_dt;
  std::optional<NodeId> d_dx;
};

// Tape leaves for every parameter, aligned with the ParamSet flat layout,
// so a backward() gradient maps 1:1 onto the parameter vector.
struct TapeParams {
  MlpConfig config;
  std::vector<NodeId> nodes;

  NodeId weight(int layer, int row, int col) const {
    return nodes[w_offset[layer] + static_cast<std::size_t>(row) * config.layer_in(layer) + col];
  }
  NodeId bias(int layer, int row) const { return nodes[b_offset[layer] + row]; }
  std::vector<std::size_t> w_offset;
  std::vector<std::size_t> b_offset;
};

TapeParams bind_params(Tape& tape, const ParamSet& params, bool trainable = true);

// Hidden layers apply tanh; the output layer is affine.
std::vector<NodeId> forward(Tape& tape, const TapeParams& params,
                            std::span<const double> x);
std::vector<NodeId> forward(Tape& tape, const ParamSet& params,
                            std::span<const double> x);

// Value plus directional derivatives of each output w.r.t. the requested
// input dims, all expressed in tape primitives so a later backward()
// differentiates through the derivative channels as well.
std::vector<OutputTriple> forward_with_input_derivatives(Tape& tape,
                                                         const TapeParams& params,
                                                         std::span<const double> x,
                                                         DerivChannels wrt);
std::vector<OutputTriple> forward_with_input_derivatives(Tape& tape,
                                                         const ParamSet& params,
                                                         std::span<const double> x,
                                                         DerivChannels wrt);

}  // namespace relaxnn
