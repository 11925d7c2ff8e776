#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "swapfw/quadratic.hpp"

namespace swapfw {

/// Points z_i stored as the columns of a d x m matrix.
template <typename Scalar = double>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// g(a) = -1/2 |Z a|^2, whose maximizer is the minimum-norm point of conv(Z).
template <typename Derived>
DenseQuadratic<typename Derived::Scalar> mnp_objective(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  if (points.cols() < 1) throw InvalidProblem("point set is empty");
  if (!points.allFinite()) throw InvalidProblem("point set has non-finite coordinates");
  return DenseQuadratic<Scalar>(Scalar(0.5) * (points.transpose() * points));
}

/// A point of conv(Z) tracked both in space and in simplex coordinates.
template <typename Scalar = double>
struct GeometricState {
  Vector<Scalar> z;
  SimplexPoint<Scalar> alpha;
  std::uint64_t iteration = 0;
  Index last_ascent = -1;
  Index last_descent = -1;
  Scalar last_lambda = 0;

  static GeometricState at(const PointSet<Scalar>& points, SimplexPoint<Scalar> alpha) {
    if (alpha.dimension() != points.cols()) throw InvalidProblem("weights do not match the point set");
    GeometricState s;
    s.z = points * alpha.weights();
    s.alpha = std::move(alpha);
    return s;
  }
};

// argmin_i z^T z_i, lowest index on ties.
template <typename Scalar>
Index closest_vertex(const Vector<Scalar>& z, const PointSet<Scalar>& points) {
  const Vector<Scalar> dots = points.transpose() * z;
  Index best = 0;
  for (Index i = 1; i < dots.size(); ++i)
    if (dots[i] < dots[best]) best = i;
  return best;
}

// argmax over the support of z^T z_j, lowest index on ties.
template <typename Scalar>
Index farthest_support_vertex(const Vector<Scalar>& z, const PointSet<Scalar>& points,
                              const SimplexPoint<Scalar>& alpha) {
  Index best = -1;
  Scalar best_dot = 0;
  for (Index j : alpha.active()) {
    const Scalar d = points.col(j).dot(z);
    if (best < 0 || d > best_dot) {
      best = j;
      best_dot = d;
    }
  }
  return best;
}

// Minimizer of |z + l d|^2 over l >= 0.
template <typename Scalar>
Scalar norm_line_search(const Vector<Scalar>& z, const Vector<Scalar>& d) {
  const Scalar dd = d.squaredNorm();
  if (!(dd > Scalar(0))) return Scalar(0);
  return std::max(-z.dot(d) / dd, Scalar(0));
}

/// One Gilbert iteration: move toward the vertex least aligned with z.
template <typename Scalar>
GeometricState<Scalar> gilbert_iterate(GeometricState<Scalar> s, const PointSet<Scalar>& points) {
  const Index i = closest_vertex(s.z, points);
  const Vector<Scalar> d = points.col(i) - s.z;
  const Scalar lambda = std::min(norm_line_search(s.z, d), Scalar(1));
  s.z += lambda * d;
  s.alpha = apply_step(std::move(s.alpha), Step<Scalar>{StepKind::Toward, i, -1, lambda, 0, 0});
  s.last_ascent = i;
  s.last_descent = -1;
  s.last_lambda = lambda;
  ++s.iteration;
  return s;
}

/// The (ascent, descent) vertex pair an MDM iteration would use.
template <typename Scalar>
std::pair<Index, Index> mdm_select(const GeometricState<Scalar>& s, const PointSet<Scalar>& points) {
  return {closest_vertex(s.z, points), farthest_support_vertex(s.z, points, s.alpha)};
}

/// One MDM iteration: shift weight from the farthest support vertex to the
/// closest vertex, clipped so that the support vertex weight stays >= 0.
template <typename Scalar>
GeometricState<Scalar> mdm_iterate(GeometricState<Scalar> s, const PointSet<Scalar>& points) {
  const auto [i, j] = mdm_select(s, points);
  Scalar lambda = 0;
  if (i != j) lambda = norm_line_search(s.z, Vector<Scalar>(points.col(i) - points.col(j)));
  const StepKind kind = lambda >= s.alpha[j] ? StepKind::SwapDrop : StepKind::SwapAdd;
  lambda = std::min(lambda, s.alpha[j]);
  s.z += lambda * (points.col(i) - points.col(j));
  s.alpha = apply_step(std::move(s.alpha), Step<Scalar>{kind, i, j, lambda, 0, 0});
  s.last_ascent = i;
  s.last_descent = j;
  s.last_lambda = lambda;
  ++s.iteration;
  return s;
}

/// Embeds a linear L2-SVM so that z_i^T z_j equals its dual matrix entry.
///
/// `features` holds one example per column; z_i = (y_i x_i, y_i, e_i / sqrt(C)).
template <typename Derived, typename LabelDerived>
PointSet<typename Derived::Scalar> embed_linear_svm(const Eigen::MatrixBase<Derived>& features,
                                                    const Eigen::MatrixBase<LabelDerived>& labels,
                                                    typename Derived::Scalar c) {
  using Scalar = typename Derived::Scalar;
  const Index n = features.rows();
  const Index m = features.cols();
  if (labels.size() != m) throw InvalidProblem("one label per example is required");
  if (!(c > Scalar(0))) throw InvalidProblem("C must be positive");
  PointSet<Scalar> z = PointSet<Scalar>::Zero(n + 1 + m, m);
  using std::sqrt;
  const Scalar slack = Scalar(1) / sqrt(c);
  for (Index i = 0; i < m; ++i) {
    const Scalar y = labels(i);
    if (y != Scalar(1) && y != Scalar(-1)) throw InvalidProblem("labels must be +1 or -1");
    z.col(i).head(n) = y * features.col(i);
    z(n, i) = y;
    z(n + 1 + i, i) = slack;
  }
  return z;
}

}  // namespace swapfw
