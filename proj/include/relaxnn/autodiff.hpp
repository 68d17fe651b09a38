#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace relaxnn {

enum class OpKind : std::uint8_t {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kSquare,
  kTanh,
};

struct NodeId {
  std::uint32_t index = 0;
  friend bool operator==(NodeId a, NodeId b) { return a.index == b.index; }
};

// Append-only record of a scalar computation. Parents always precede their
// children, so one reverse sweep over the node array is a full backward pass.
// Adjoints accumulate in descending node-id order, which keeps gradients
// bit-reproducible across runs.
class Tape {
 public:
  Tape() = default;

  NodeId leaf(double value, bool trainable = false);
  NodeId apply(OpKind kind, std::span<const NodeId> operands);

  // Convenience builders for the fixed primitive set.
  NodeId add(NodeId a, NodeId b) { return apply2(OpKind::kAdd, a, b); }
  NodeId sub(NodeId a, NodeId b) { return apply2(OpKind::kSub, a, b); }
  NodeId mul(NodeId a, NodeId b) { return apply2(OpKind::kMul, a, b); }
  NodeId div(NodeId a, NodeId b) { return apply2(OpKind::kDiv, a, b); }
  NodeId neg(NodeId a) { return apply1(OpKind::kNeg, a); }
  NodeId square(NodeId a) { return apply1(OpKind::kSquare, a); }
  NodeId tanh(NodeId a) { return apply1(OpKind::kTanh, a); }

  double value(NodeId id) const { return values_[id.index]; }
  std::size_t size() const { return values_.size(); }
  const std::vector<NodeId>& parameter_leaves() const { return param_leaves_; }

  // d(root)/d(leaf) for every trainable leaf, by reverse accumulation.
  // Entries follow leaf registration order.
  std::vector<std::pair<NodeId, double>> backward(NodeId root) const;

  // Same sweep, but adjoints of the trainable leaves are written into `out`
  // (one slot per registered leaf, registration order). Scratch buffers stay
  // alive across calls, which matters when a tape is reused per point.
  void backward_into(NodeId root, std::span<double> out) const;

  // Drops every node but keeps capacity; used by workers that rebuild a
  // small expression per collocation point.
  void clear();

 private:
  NodeId apply1(OpKind kind, NodeId a);
  NodeId apply2(OpKind kind, NodeId a, NodeId b);
  NodeId push(OpKind kind, std::uint32_t p0, std::uint32_t p1, double value);

  std::vector<double> values_;
  std::vector<std::uint32_t> parent0_;
  std::vector<std::uint32_t> parent1_;
  std::vector<OpKind> ops_;
  std::vector<NodeId> param_leaves_;
  mutable std::vector<double> adjoint_;
};

// Max relative deviation between backward() and central differences for a
// tape-expressible scalar function of `point`. 0/0 counts as zero deviation.
using TapeFn = std::function<NodeId(Tape&, std::span<const NodeId>)>;
double grad_check(const TapeFn& f, std::span<const double> point, double step);

}  // namespace relaxnn
