#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swapfw/errors.hpp"

namespace swapfw {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Weights at or below this value are treated as exact zeros after a step.
inline constexpr double kZeroClip = 1e-14;
// Allowed overshoot of a step size beyond its feasible bound.
inline constexpr double kStepSlack = 1e-12;
// |sum - 1| accepted by make_point.
inline constexpr double kNormalizationTolerance = 1e-9;

enum class StepKind { Toward, SwapAdd, SwapDrop, Away, AwayDrop };

constexpr const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Toward: return "fw";
    case StepKind::SwapAdd: return "swap_add";
    case StepKind::SwapDrop: return "swap_drop";
    case StepKind::Away: return "away";
    case StepKind::AwayDrop: return "away_drop";
  }
  return "?";
}

constexpr bool is_drop(StepKind kind) {
  return kind == StepKind::SwapDrop || kind == StepKind::AwayDrop;
}

// One elementary update of a simplex point.
//
// `delta` is the improvement the algorithm used to pick the step (for a
// SWAP-drop this is the gain of the unclipped line search); `gain` is the
// improvement actually realized by moving `lambda` along the direction.
template <typename Scalar = double>
struct Step {
  StepKind kind = StepKind::Toward;
  Index ascent = -1;
  Index descent = -1;
  Scalar lambda = 0;
  Scalar delta = 0;
  Scalar gain = 0;
};

template <typename Scalar = double>
class SimplexPoint;

template <typename Scalar>
SimplexPoint<Scalar> apply_step(SimplexPoint<Scalar> point, const Step<Scalar>& step);

/// A feasible point of the unit simplex together with its active set.
///
/// Weights are kept dense; `active()` lists the strictly positive
/// coordinates in increasing order.
template <typename Scalar>
class SimplexPoint {
 public:
  using VectorType = Vector<Scalar>;

  SimplexPoint() = default;

  static SimplexPoint vertex(Index dimension, Index i) {
    if (dimension < 1 || i < 0 || i >= dimension) throw InvalidProblem("vertex index outside the simplex");
    SimplexPoint p;
    p.weights_ = VectorType::Zero(dimension);
    p.weights_[i] = Scalar(1);
    p.active_ = {i};
    return p;
  }

  // Uniform weights over `face` (indices need not be sorted, must be distinct).
  static SimplexPoint uniform(Index dimension, std::span<const Index> face) {
    if (face.empty()) throw EmptyActiveSet();
    SimplexPoint p;
    p.weights_ = VectorType::Zero(dimension);
    const Scalar w = Scalar(1) / Scalar(face.size());
    for (Index i : face) {
      if (i < 0 || i >= dimension) throw InvalidProblem("face index outside the simplex");
      p.weights_[i] = w;
    }
    p.rebuild_active();
    p.renormalize();
    return p;
  }

  Index dimension() const { return weights_.size(); }
  Scalar operator[](Index i) const { return weights_[i]; }
  const VectorType& weights() const { return weights_; }
  const std::vector<Index>& active() const { return active_; }
  bool is_active(Index i) const { return weights_[i] > Scalar(0); }

  bool supported_on(std::span<const Index> face) const {
    return std::all_of(active_.begin(), active_.end(), [&](Index i) {
      return std::find(face.begin(), face.end(), i) != face.end();
    });
  }

  friend bool operator==(const SimplexPoint& a, const SimplexPoint& b) {
    return a.active_ == b.active_ && a.weights_ == b.weights_;
  }

 private:
  template <typename S, typename Derived>
  friend SimplexPoint<S> make_point_impl(const Eigen::MatrixBase<Derived>& w);
  friend SimplexPoint apply_step<>(SimplexPoint point, const Step<Scalar>& step);
  template <typename S>
  friend SimplexPoint<S> shifted_point(const SimplexPoint<S>&, const Eigen::SparseVector<S>&, S);

  void rebuild_active() {
    active_.clear();
    for (Index i = 0; i < weights_.size(); ++i)
      if (weights_[i] > Scalar(0)) active_.push_back(i);
  }

  void insert_active(Index i) {
    auto it = std::lower_bound(active_.begin(), active_.end(), i);
    if (it == active_.end() || *it != i) active_.insert(it, i);
  }

  // Clip tiny weights to zero, drop them from the active set, rescale to sum 1.
  void renormalize() {
    Scalar sum = 0;
    std::erase_if(active_, [&](Index i) {
      if (weights_[i] <= Scalar(kZeroClip)) {
        weights_[i] = Scalar(0);
        return true;
      }
      sum += weights_[i];
      return false;
    });
    if (active_.empty()) throw EmptyActiveSet();
    if (sum != Scalar(1))
      for (Index i : active_) weights_[i] /= sum;
  }

  VectorType weights_;
  std::vector<Index> active_;
};

template <typename Scalar, typename Derived>
SimplexPoint<Scalar> make_point_impl(const Eigen::MatrixBase<Derived>& w) {
  if (w.size() < 1) throw InvalidProblem("a simplex point needs at least one coordinate");
  Scalar sum = 0;
  for (Index i = 0; i < w.size(); ++i) {
    const Scalar v = Scalar(w(i));
    if (std::isnan(v) || v < Scalar(0)) throw NegativeWeight("weight " + std::to_string(i) + " is negative");
    sum += v;
  }
  using std::abs;
  if (!(abs(sum - Scalar(1)) <= Scalar(kNormalizationTolerance)))
    throw NotNormalized("weights sum to " + std::to_string(static_cast<double>(sum)));
  SimplexPoint<Scalar> p;
  p.weights_ = w.template cast<Scalar>();
  p.rebuild_active();
  p.renormalize();
  return p;
}

/// Validates `w` as a member of the unit simplex.
template <typename Derived>
SimplexPoint<typename Derived::Scalar> make_point(const Eigen::MatrixBase<Derived>& w) {
  return make_point_impl<typename Derived::Scalar>(w);
}

template <typename Scalar = double>
SimplexPoint<Scalar> make_point(std::initializer_list<Scalar> w) {
  Vector<Scalar> v(static_cast<Index>(w.size()));
  Index k = 0;
  for (Scalar x : w) v[k++] = x;
  return make_point_impl<Scalar>(v);
}

/// Smallest index attaining the largest gradient coordinate.
template <typename Derived>
Index ascent_index(const Eigen::MatrixBase<Derived>& grad) {
  Index best = 0;
  for (Index i = 1; i < grad.size(); ++i)
    if (grad(i) > grad(best)) best = i;
  return best;
}

/// Smallest index of `active` attaining the smallest gradient coordinate.
template <typename Derived>
Index descent_index(const Eigen::MatrixBase<Derived>& grad, std::span<const Index> active) {
  if (active.empty()) throw EmptyActiveSet();
  Index best = active.front();
  for (Index j : active)
    if (grad(j) < grad(best) || (grad(j) == grad(best) && j < best)) best = j;
  return best;
}

// Largest feasible step for a given kind from `point`.
template <typename Scalar>
Scalar step_bound(const SimplexPoint<Scalar>& point, StepKind kind, Index descent) {
  switch (kind) {
    case StepKind::Toward:
      return Scalar(1);
    case StepKind::SwapAdd:
    case StepKind::SwapDrop:
      return point[descent];
    case StepKind::Away:
    case StepKind::AwayDrop: {
      const Scalar a = point[descent];
      return a < Scalar(1) ? a / (Scalar(1) - a) : std::numeric_limits<Scalar>::infinity();
    }
  }
  return Scalar(0);
}

/// Applies a FW, SWAP or AWAY update and renormalizes the result.
///
///   Toward:  (1 - l) a + l e_i
///   Swap*:   a + l (e_i - e_j)
///   Away*:   (1 + l) a - l e_j
///
/// Drop kinds zero the descent coordinate exactly.
template <typename Scalar>
SimplexPoint<Scalar> apply_step(SimplexPoint<Scalar> p, const Step<Scalar>& step) {
  const Index m = p.dimension();
  const Scalar lambda = step.lambda;
  const bool needs_ascent = step.kind == StepKind::Toward || step.kind == StepKind::SwapAdd ||
                            step.kind == StepKind::SwapDrop;
  if (needs_ascent && (step.ascent < 0 || step.ascent >= m)) throw StepOutOfRange("ascent index outside the simplex");
  if (step.kind != StepKind::Toward && (step.descent < 0 || step.descent >= m))
    throw StepOutOfRange("descent index outside the simplex");
  if (step.kind != StepKind::Toward && !p.is_active(step.descent))
    throw StepOutOfRange("descent index is not active");

  const Scalar bound = step_bound(p, step.kind, step.descent);
  if (std::isnan(lambda) || lambda < -Scalar(kStepSlack) || lambda > bound + Scalar(kStepSlack))
    throw StepOutOfRange("step size " + std::to_string(static_cast<double>(lambda)) + " outside [0, " +
                         std::to_string(static_cast<double>(bound)) + "]");
  if (lambda <= Scalar(0)) return p;

  auto& w = p.weights_;
  switch (step.kind) {
    case StepKind::Toward:
      for (Index i : p.active_) w[i] *= (Scalar(1) - lambda);
      w[step.ascent] += lambda;
      p.insert_active(step.ascent);
      break;
    case StepKind::SwapAdd:
      w[step.ascent] += lambda;
      w[step.descent] -= lambda;
      p.insert_active(step.ascent);
      break;
    case StepKind::SwapDrop:
      w[step.ascent] += lambda;
      w[step.descent] = Scalar(0);
      p.insert_active(step.ascent);
      break;
    case StepKind::Away:
      for (Index i : p.active_) w[i] *= (Scalar(1) + lambda);
      w[step.descent] -= lambda;
      break;
    case StepKind::AwayDrop:
      for (Index i : p.active_) w[i] *= (Scalar(1) + lambda);
      w[step.descent] = Scalar(0);
      break;
  }
  p.renormalize();
  return p;
}

}  // namespace swapfw
