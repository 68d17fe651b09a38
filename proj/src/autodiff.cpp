#include "relaxnn/autodiff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaxnn {

namespace {
constexpr std::uint32_t kNoParent = 0xffffffffu;

int arity(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf:
      return 0;
    case OpKind::kNeg:
    case OpKind::kSquare:
    case OpKind::kTanh:
      return 1;
    default:
      return 2;
  }
}
}  // namespace

NodeId Tape::leaf(double value, bool trainable) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("Tape::leaf: value must be finite");
  }
  NodeId id = push(OpKind::kLeaf, kNoParent, kNoParent, value);
  if (trainable) {
    param_leaves_.push_back(id);
  }
  return id;
}

NodeId Tape::apply(OpKind kind, std::span<const NodeId> operands) {
  if (kind == OpKind::kLeaf) {
    throw std::invalid_argument("Tape::apply: use leaf() for leaves");
  }
  if (static_cast<int>(operands.size()) != arity(kind)) {
    throw std::invalid_argument("Tape::apply: operand count does not match op");
  }
  if (arity(kind) == 1) {
    return apply1(kind, operands[0]);
  }
  return apply2(kind, operands[0], operands[1]);
}

NodeId Tape::apply1(OpKind kind, NodeId a) {
  const double av = values_.at(a.index);
  double v = 0.0;
  switch (kind) {
    case OpKind::kNeg:
      v = -av;
      break;
    case OpKind::kSquare:
      v = av * av;
      break;
    case OpKind::kTanh:
      v = std::tanh(av);
      break;
    default:
      throw std::invalid_argument("Tape::apply1: not a unary op");
  }
  return push(kind, a.index, kNoParent, v);
}

NodeId Tape::apply2(OpKind kind, NodeId a, NodeId b) {
  const double av = values_.at(a.index);
  const double bv = values_.at(b.index);
  double v = 0.0;
  switch (kind) {
    case OpKind::kAdd:
      v = av + bv;
      break;
    case OpKind::kSub:
      v = av - bv;
      break;
    case OpKind::kMul:
      v = av * bv;
      break;
    case OpKind::kDiv:
      if (bv == 0.0) {
        throw std::domain_error("Tape::apply2: division by zero");
      }
      v = av / bv;
      break;
    default:
      throw std::invalid_argument("Tape::apply2: not a binary op");
  }
  return push(kind, a.index, b.index, v);
}

NodeId Tape::push(OpKind kind, std::uint32_t p0, std::uint32_t p1, double value) {
  if (values_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("Tape: node limit exceeded");
  }
  values_.push_back(value);
  parent0_.push_back(p0);
  parent1_.push_back(p1);
  ops_.push_back(kind);
  return NodeId{static_cast<std::uint32_t>(values_.size() - 1)};
}

void Tape::clear() {
  values_.clear();
  parent0_.clear();
  parent1_.clear();
  ops_.clear();
  param_leaves_.clear();
}

std::vector<std::pair<NodeId, double>> Tape::backward(NodeId root) const {
  std::vector<double> grads(param_leaves_.size(), 0.0);
  backward_into(root, grads);
  std::vector<std::pair<NodeId, double>> out;
  out.reserve(param_leaves_.size());
  for (std::size_t i = 0; i < param_leaves_.size(); ++i) {
    out.emplace_back(param_leaves_[i], grads[i]);
  }
  return out;
}

void Tape::backward_into(NodeId root, std::span<double> out) const {
  if (root.index >= values_.size()) {
    throw std::out_of_range("Tape::backward: root is not on this tape");
  }
  if (out.size() != param_leaves_.size()) {
    throw std::invalid_argument("Tape::backward: gradient span size mismatch");
  }
  adjoint_.assign(values_.size(), 0.0);
  adjoint_[root.index] = 1.0;

  for (std::uint32_t i = root.index + 1; i-- > 0;) {
    const double a = adjoint_[i];
    if (a == 0.0) {
      continue;
    }
    const std::uint32_t p0 = parent0_[i];
    const std::uint32_t p1 = parent1_[i];
    switch (ops_[i]) {
      case OpKind::kLeaf:
        break;
      case OpKind::kAdd:
        adjoint_[p0] += a;
        adjoint_[p1] += a;
        break;
      case OpKind::kSub:
        adjoint_[p0] += a;
        adjoint_[p1] -= a;
        break;
      case OpKind::kMul:
        adjoint_[p0] += a * values_[p1];
        adjoint_[p1] += a * values_[p0];
        break;
      case OpKind::kDiv:
        adjoint_[p0] += a / values_[p1];
        adjoint_[p1] -= a * values_[i] / values_[p1];
        break;
      case OpKind::kNeg:
        adjoint_[p0] -= a;
        break;
      case OpKind::kSquare:
        adjoint_[p0] += a * 2.0 * values_[p0];
        break;
      case OpKind::kTanh:
        adjoint_[p0] += a * (1.0 - values_[i] * values_[i]);
        break;
    }
  }
  for (std::size_t i = 0; i < param_leaves_.size(); ++i) {
    out[i] = adjoint_[param_leaves_[i].index];
  }
}

double grad_check(const TapeFn& f, std::span<const double> point, double step) {
  if (step <= 0.0) {
    throw std::invalid_argument("grad_check: step must be positive");
  }
  const std::size_t n = point.size();

  Tape tape;
  std::vector<NodeId> leaves(n);
  for (std::size_t i = 0; i < n; ++i) {
    leaves[i] = tape.leaf(point[i], /*trainable=*/true);
  }
  NodeId root = f(tape, leaves);
  auto grads = tape.backward(root);

  auto eval_at = [&](std::span<const double> x) {
    Tape t;
    std::vector<NodeId> ls(n);
    for (std::size_t i = 0; i < n; ++i) {
      ls[i] = t.leaf(x[i]);
    }
    return t.value(f(t, ls));
  };

  double max_dev = 0.0;
  std::vector<double> x(point.begin(), point.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double keep = x[i];
    x[i] = keep + step;
    const double fp = eval_at(x);
    x[i] = keep - step;
    const double fm = eval_at(x);
    x[i] = keep;
    const double fd = (fp - fm) / (2.0 * step);
    const double ad = grads[i].second;
    const double scale = std::max(std::abs(fd), std::abs(ad));
    const double dev = scale == 0.0 ? 0.0 : std::abs(ad - fd) / scale;
    max_dev = std::max(max_dev, dev);
  }
  return max_dev;
}

}  // namespace relaxnn
