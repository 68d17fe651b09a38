#pragma once

#include <array>
#include <span>
#include <vector>

#include "relaxnn/mlp.hpp"

// Straight-line forward/backward passes over the flat parameter vector.
// These are the hot inner loops of training; the tape implementation in
// autodiff.hpp/mlp.hpp computes the same quantities and serves as the
// serial reference the tests compare against.
namespace relaxnn::kernel {

// Per-net scratch holding one point's forward state. Level 0 is the input;
// level l > 0 holds layer l-1 outputs. `dz` keeps the pre-activation
// derivative rows the backward pass needs for the tanh second-derivative
// term.
class NetWorkspace {
 public:
  explicit NetWorkspace(const MlpConfig& config);

  const MlpConfig& config() const { return config_; }
  std::span<const double> values() const { return a_.back(); }
  std::span<const double> d_dt() const { return da_[0].back(); }
  std::span<const double> d_dx() const { return da_[1].back(); }

 private:
  friend void forward(const ParamSet&, std::span<const double>, NetWorkspace&);
  friend void aug_forward(const ParamSet&, std::span<const double>, DerivChannels,
                          NetWorkspace&);
  friend void aug_backward(const ParamSet&, DerivChannels, std::span<const double>,
                           std::span<const double>, std::span<const double>,
                           const NetWorkspace&, std::span<double>);

  MlpConfig config_;
  std::vector<std::vector<double>> a_;
  std::array<std::vector<std::vector<double>>, 2> dz_;
  std::array<std::vector<std::vector<double>>, 2> da_;

  // backward scratch
  mutable std::vector<std::vector<double>> abar_;
  mutable std::array<std::vector<std::vector<double>>, 2> dabar_;
  mutable std::vector<double> zbar_;
  mutable std::array<std::vector<double>, 2> dzbar_;
};

// Value-only pass; results in ws.values().
void forward(const ParamSet& net, std::span<const double> x, NetWorkspace& ws);

std::vector<double> forward_values(const ParamSet& net, std::span<const double> x);

// Value plus directional derivatives for the requested channels
// (dims 0 and 1); results in ws.values()/d_dt()/d_dx().
void aug_forward(const ParamSet& net, std::span<const double> x, DerivChannels chans,
                 NetWorkspace& ws);

// Accumulates d(objective)/d(params) into `grad` (ParamSet layout) given the
// adjoints of the last aug_forward's outputs. Channel adjoint spans may be
// empty when the corresponding channel was not requested.
void aug_backward(const ParamSet& net, DerivChannels chans,
                  std::span<const double> value_adjoint,
                  std::span<const double> dt_adjoint,
                  std::span<const double> dx_adjoint, const NetWorkspace& ws,
                  std::span<double> grad);

}  // namespace relaxnn::kernel
