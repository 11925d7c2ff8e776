#pragma once

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <utility>

#include "swapfw/objective.hpp"

namespace swapfw {

/// Maximizes g + s*l - c*l^2 over [0, lambda_max].
///
/// `slope` is d^T grad and `curvature` is d^T Q d for g = -a^T Q a.
template <typename Scalar>
LineSearchResult<Scalar> quadratic_ray_search(Scalar slope, Scalar curvature, Scalar lambda_max) {
  if (!(slope > Scalar(0))) return {Scalar(0), Scalar(0), false};
  Scalar lambda = lambda_max;
  if (curvature > Scalar(0)) lambda = std::min(slope / (Scalar(2) * curvature), lambda_max);
  return {lambda, slope * lambda - curvature * lambda * lambda, true};
}

/// g(a) = -a^T Q a for a symmetric positive semi-definite Q given entrywise.
///
/// Subclasses supply entries and column updates; everything the solvers
/// need (closed-form line searches, incremental gradients) is derived here.
template <typename Scalar = double>
class QuadraticForm : public ConcaveObjective<Scalar> {
 public:
  using typename ConcaveObjective<Scalar>::Point;
  using typename ConcaveObjective<Scalar>::VectorType;

  virtual Scalar entry(Index i, Index j) const = 0;

  // y += a * Q(:, j)
  virtual void axpy_column(Index j, Scalar a, VectorType& y) const = 0;

  Scalar value(const Point& p) const override {
    Scalar s = 0;
    for (Index i : p.active()) {
      Scalar row = 0;
      for (Index j : p.active()) row += entry(i, j) * p[j];
      s += p[i] * row;
    }
    return -s;
  }

  Scalar grad_coord(const Point& p, Index i) const override {
    Scalar s = 0;
    for (Index j : p.active()) s += entry(i, j) * p[j];
    return Scalar(-2) * s;
  }

  Scalar hess_entry(const Point&, Index i, Index j) const override { return Scalar(-2) * entry(i, j); }

  std::optional<LineSearchResult<Scalar>> exact_line_search(const Point& p, const SparseDirection<Scalar>& d,
                                                            Scalar lambda_max) const override {
    Scalar slope = 0;
    Scalar curvature = 0;
    for (typename SparseDirection<Scalar>::InnerIterator a(d); a; ++a) {
      slope += a.value() * grad_coord(p, a.index());
      for (typename SparseDirection<Scalar>::InnerIterator b(d); b; ++b)
        curvature += a.value() * b.value() * entry(a.index(), b.index());
    }
    return quadratic_ray_search(slope, curvature, lambda_max);
  }

  // grad = -2 sum_{j active} a_j Q(:, j); value = a^T grad / 2.
  void evaluate(const Point& p, VectorType& grad, Scalar& value) const override {
    grad = VectorType::Zero(this->dimension());
    for (Index j : p.active()) axpy_column(j, Scalar(-2) * p[j], grad);
    value = Scalar(0.5) * alpha_dot(p, grad);
  }

  LineSearchResult<Scalar> search(const Point& p, const VectorType& grad, Scalar, const Direction& d,
                                  Scalar lambda_max) const override {
    const auto [slope, curvature] = ray(p, grad, d);
    return quadratic_ray_search(slope, curvature, lambda_max);
  }

  Scalar gain_at(const Point& p, const VectorType& grad, Scalar, const Direction& d, Scalar lambda) const override {
    const auto [slope, curvature] = ray(p, grad, d);
    return slope * lambda - curvature * lambda * lambda;
  }

  // Rank-one/two gradient updates from the columns touched by the step; the
  // value follows g <- g + realized gain.
  void advance(const Point&, const Step<Scalar>& step, const Point&, VectorType& grad,
               Scalar& value) const override {
    const Scalar l = step.lambda;
    if (l == Scalar(0)) return;
    switch (step.kind) {
      case StepKind::Toward:
        grad *= (Scalar(1) - l);
        axpy_column(step.ascent, Scalar(-2) * l, grad);
        break;
      case StepKind::SwapAdd:
      case StepKind::SwapDrop:
        axpy_column(step.ascent, Scalar(-2) * l, grad);
        axpy_column(step.descent, Scalar(2) * l, grad);
        break;
      case StepKind::Away:
      case StepKind::AwayDrop:
        grad *= (Scalar(1) + l);
        axpy_column(step.descent, Scalar(2) * l, grad);
        break;
    }
    value += step.gain;
  }

  static Scalar alpha_dot(const Point& p, const VectorType& grad) {
    Scalar s = 0;
    for (Index i : p.active()) s += p[i] * grad[i];
    return s;
  }

 protected:
  // (d^T grad, d^T Q d) for the canonical directions, using Q a = -grad / 2.
  std::pair<Scalar, Scalar> ray(const Point& p, const VectorType& grad, const Direction& d) const {
    const Scalar adg = alpha_dot(p, grad);
    switch (d.kind) {
      case DirectionKind::Toward:
        return {grad[d.ascent] - adg, entry(d.ascent, d.ascent) + grad[d.ascent] - Scalar(0.5) * adg};
      case DirectionKind::Swap:
        if (d.ascent == d.descent) return {Scalar(0), Scalar(0)};
        return {grad[d.ascent] - grad[d.descent],
                entry(d.ascent, d.ascent) - Scalar(2) * entry(d.ascent, d.descent) + entry(d.descent, d.descent)};
      case DirectionKind::Away:
        return {adg - grad[d.descent], entry(d.descent, d.descent) + grad[d.descent] - Scalar(0.5) * adg};
    }
    return {Scalar(0), Scalar(0)};
  }
};

/// Quadratic objective with an explicit dense matrix.
template <typename Scalar = double>
class DenseQuadratic final : public QuadraticForm<Scalar> {
 public:
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using typename QuadraticForm<Scalar>::VectorType;

  template <typename Derived>
  explicit DenseQuadratic(const Eigen::MatrixBase<Derived>& q) : q_(q) {
    if (q_.rows() != q_.cols() || q_.rows() < 1) throw InvalidProblem("quadratic form must be square and non-empty");
    if (!q_.allFinite()) throw InvalidProblem("quadratic form has non-finite entries");
  }

  Index dimension() const override { return q_.rows(); }
  Scalar entry(Index i, Index j) const override { return q_(i, j); }
  void axpy_column(Index j, Scalar a, VectorType& y) const override { y.noalias() += a * q_.col(j); }

  const MatrixType& matrix() const { return q_; }

 private:
  MatrixType q_;
};

template <typename Derived>
DenseQuadratic<typename Derived::Scalar> make_quadratic(const Eigen::MatrixBase<Derived>& q) {
  return DenseQuadratic<typename Derived::Scalar>(q);
}

}  // namespace swapfw
