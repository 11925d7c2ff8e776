#pragma once

#include <Eigen/SparseCore>

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "swapfw/simplex.hpp"

namespace swapfw {

template <typename Scalar>
using SparseDirection = Eigen::SparseVector<Scalar>;

// The three search directions used by every solver, named by role.
enum class DirectionKind {
  Toward,  // e_i - a
  Swap,    // e_i - e_j
  Away,    // a - e_j
};

struct Direction {
  DirectionKind kind = DirectionKind::Toward;
  Index ascent = -1;
  Index descent = -1;

  static Direction toward(Index i) { return {DirectionKind::Toward, i, -1}; }
  static Direction swap(Index i, Index j) { return {DirectionKind::Swap, i, j}; }
  static Direction away(Index j) { return {DirectionKind::Away, -1, j}; }
};

template <typename Scalar = double>
struct LineSearchResult {
  Scalar lambda = 0;
  Scalar gain = 0;
  // False when the directional derivative at 0 is not positive.
  bool ascent = true;
};

template <typename Scalar>
SparseDirection<Scalar> materialize(const Direction& d, const SimplexPoint<Scalar>& p) {
  SparseDirection<Scalar> v(p.dimension());
  switch (d.kind) {
    case DirectionKind::Toward:
      for (Index i : p.active()) v.coeffRef(i) = -p[i];
      v.coeffRef(d.ascent) += Scalar(1);
      break;
    case DirectionKind::Swap:
      v.coeffRef(d.ascent) += Scalar(1);
      v.coeffRef(d.descent) -= Scalar(1);
      break;
    case DirectionKind::Away:
      for (Index i : p.active()) v.coeffRef(i) = p[i];
      v.coeffRef(d.descent) -= Scalar(1);
      break;
  }
  return v;
}

// a + lambda d without feasibility validation; rounding negatives are zeroed.
template <typename Scalar>
SimplexPoint<Scalar> shifted_point(const SimplexPoint<Scalar>& p, const SparseDirection<Scalar>& d, Scalar lambda) {
  SimplexPoint<Scalar> q = p;
  for (typename SparseDirection<Scalar>::InnerIterator it(d); it; ++it) {
    Scalar& w = q.weights_[it.index()];
    w += lambda * it.value();
    if (w < Scalar(0)) w = Scalar(0);
  }
  q.rebuild_active();
  return q;
}

/// Contract for a concave function maximized over the unit simplex.
///
/// Implementations provide pointwise evaluations. Solvers drive the iteration
/// hooks (`evaluate`, `search`, `gain_at`, `advance`), whose defaults fall back
/// on the pointwise contract; quadratics override them with closed forms and
/// incremental gradient maintenance.
template <typename Scalar = double>
class ConcaveObjective {
 public:
  using Point = SimplexPoint<Scalar>;
  using VectorType = Vector<Scalar>;

  virtual ~ConcaveObjective() = default;

  virtual Index dimension() const = 0;
  virtual Scalar value(const Point& p) const = 0;
  virtual Scalar grad_coord(const Point& p, Index i) const = 0;
  virtual Scalar hess_entry(const Point& p, Index i, Index j) const = 0;

  // Exact maximizer of g(a + l d) over [0, lambda_max], when available.
  virtual std::optional<LineSearchResult<Scalar>> exact_line_search(const Point&, const SparseDirection<Scalar>&,
                                                                    Scalar /*lambda_max*/) const {
    return std::nullopt;
  }

  // Full gradient and value at p.
  virtual void evaluate(const Point& p, VectorType& grad, Scalar& value) const;

  // Line search along d from p, given the gradient and value at p.
  virtual LineSearchResult<Scalar> search(const Point& p, const VectorType& grad, Scalar value, const Direction& d,
                                          Scalar lambda_max) const;

  // g(p + lambda d) - g(p).
  virtual Scalar gain_at(const Point& p, const VectorType& grad, Scalar value, const Direction& d,
                         Scalar lambda) const;

  // Brings (grad, value) from `before` to `after = apply_step(before, step)`.
  virtual void advance(const Point& before, const Step<Scalar>& step, const Point& after, VectorType& grad,
                       Scalar& value) const {
    (void)before;
    (void)step;
    evaluate(after, grad, value);
  }
};

/// Maximizes g along `direction` over [0, lambda_max].
///
/// Uses the objective's exact line search when it has one; otherwise bisects
/// on the directional derivative (100 halvings, derivative tolerance 1e-12).
/// A non-ascent direction returns lambda = 0, gain = 0, ascent = false.
template <typename Scalar>
LineSearchResult<Scalar> generic_line_search(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& point,
                                             const SparseDirection<Scalar>& direction, Scalar lambda_max) {
  if (auto exact = obj.exact_line_search(point, direction, lambda_max)) return *exact;

  auto derivative = [&](Scalar lambda) {
    const SimplexPoint<Scalar> q = lambda == Scalar(0) ? point : shifted_point(point, direction, lambda);
    Scalar s = 0;
    for (typename SparseDirection<Scalar>::InnerIterator it(direction); it; ++it)
      s += it.value() * obj.grad_coord(q, it.index());
    return s;
  };

  constexpr int kBisections = 100;
  constexpr double kDerivativeTolerance = 1e-12;

  if (!(derivative(Scalar(0)) > Scalar(0))) return {Scalar(0), Scalar(0), false};

  Scalar lambda = lambda_max;
  if (derivative(lambda_max) < Scalar(0)) {
    Scalar lo = 0;
    Scalar hi = lambda_max;
    for (int it = 0; it < kBisections; ++it) {
      const Scalar mid = (lo + hi) / Scalar(2);
      const Scalar dmid = derivative(mid);
      using std::abs;
      if (abs(dmid) <= Scalar(kDerivativeTolerance)) {
        lo = hi = mid;
        break;
      }
      (dmid > Scalar(0) ? lo : hi) = mid;
    }
    lambda = (lo + hi) / Scalar(2);
  }
  const Scalar gain = obj.value(shifted_point(point, direction, lambda)) - obj.value(point);
  return {lambda, gain, true};
}

template <typename Scalar>
void ConcaveObjective<Scalar>::evaluate(const Point& p, VectorType& grad, Scalar& value) const {
  grad.resize(dimension());
  for (Index i = 0; i < grad.size(); ++i) grad[i] = grad_coord(p, i);
  value = this->value(p);
}

template <typename Scalar>
LineSearchResult<Scalar> ConcaveObjective<Scalar>::search(const Point& p, const VectorType&, Scalar,
                                                          const Direction& d, Scalar lambda_max) const {
  return generic_line_search(*this, p, materialize(d, p), lambda_max);
}

template <typename Scalar>
Scalar ConcaveObjective<Scalar>::gain_at(const Point& p, const VectorType&, Scalar value, const Direction& d,
                                         Scalar lambda) const {
  return this->value(shifted_point(p, materialize(d, p), lambda)) - value;
}

/// Optimality measures at a feasible point.
template <typename Scalar = double>
struct GapReport {
  Scalar dual_gap = 0;
  Index ascent = -1;
  Index descent = -1;
  Scalar alpha_dot_grad = 0;
  // (i, grad_i - a^T grad) for every active i, increasing i.
  std::vector<std::pair<Index, Scalar>> active_gaps;

  Scalar min_active_gap() const {
    Scalar m = active_gaps.front().second;
    for (const auto& [i, g] : active_gaps) m = std::min(m, g);
    return m;
  }

  // Both conditions of a Delta-approximate solution.
  bool is_approximate(Scalar delta) const { return dual_gap <= delta && min_active_gap() >= -delta; }
};

template <typename Scalar, typename Derived>
GapReport<Scalar> gap_report(const SimplexPoint<Scalar>& point, const Eigen::MatrixBase<Derived>& grad) {
  GapReport<Scalar> r;
  for (Index i : point.active()) r.alpha_dot_grad += point[i] * grad(i);
  r.ascent = ascent_index(grad);
  r.descent = descent_index(grad, point.active());
  r.dual_gap = grad(r.ascent) - r.alpha_dot_grad;
  r.active_gaps.reserve(point.active().size());
  for (Index i : point.active()) r.active_gaps.emplace_back(i, grad(i) - r.alpha_dot_grad);
  return r;
}

template <typename Scalar>
GapReport<Scalar> gap_report(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& point) {
  Vector<Scalar> grad;
  Scalar value;
  obj.evaluate(point, grad, value);
  return gap_report(point, grad);
}

}  // namespace swapfw
