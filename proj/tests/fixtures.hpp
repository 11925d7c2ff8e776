#pragma once

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <string>

#include "swapfw/objective.hpp"

namespace fixtures {

using swapfw::Index;
using swapfw::SimplexPoint;

// -a^T Q a through the pointwise contract only (no closed forms).
class PlainQuadratic final : public swapfw::ConcaveObjective<double> {
 public:
  explicit PlainQuadratic(Eigen::MatrixXd q) : q_(std::move(q)) {}
  Index dimension() const override { return q_.rows(); }
  double value(const Point& p) const override { return -p.weights().dot(q_ * p.weights()); }
  double grad_coord(const Point& p, Index i) const override { return -2.0 * q_.row(i).dot(p.weights()); }
  double hess_entry(const Point&, Index i, Index j) const override { return -2.0 * q_(i, j); }

 private:
  Eigen::MatrixXd q_;
};

// -sum_i w_i exp(s_i a_i): concave, not quadratic.
class ExpObjective final : public swapfw::ConcaveObjective<double> {
 public:
  ExpObjective(Eigen::VectorXd w, Eigen::VectorXd s) : w_(std::move(w)), s_(std::move(s)) {}
  Index dimension() const override { return w_.size(); }
  double value(const Point& p) const override {
    double v = 0;
    for (Index i = 0; i < w_.size(); ++i) v -= w_[i] * std::exp(s_[i] * p[i]);
    return v;
  }
  double grad_coord(const Point& p, Index i) const override { return -w_[i] * s_[i] * std::exp(s_[i] * p[i]); }
  double hess_entry(const Point& p, Index i, Index j) const override {
    return i == j ? -w_[i] * s_[i] * s_[i] * std::exp(s_[i] * p[i]) : 0.0;
  }

 private:
  Eigen::VectorXd w_, s_;
};

// Hides an objective's closed forms so generic code paths are exercised.
class Pointwise final : public swapfw::ConcaveObjective<double> {
 public:
  explicit Pointwise(const swapfw::ConcaveObjective<double>& inner) : inner_(inner) {}
  Index dimension() const override { return inner_.dimension(); }
  double value(const Point& p) const override { return inner_.value(p); }
  double grad_coord(const Point& p, Index i) const override { return inner_.grad_coord(p, i); }
  double hess_entry(const Point& p, Index i, Index j) const override { return inner_.hess_entry(p, i, j); }

 private:
  const swapfw::ConcaveObjective<double>& inner_;
};

inline Eigen::MatrixXd k2() {
  Eigen::MatrixXd k(2, 2);
  k << 4, 2, 2, 1.5;
  return k;
}

inline std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(SWAPFW_TEST_TMP);
  return std::string(SWAPFW_TEST_TMP) + "/" + name;
}

}  // namespace fixtures
