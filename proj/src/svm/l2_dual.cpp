#include "swapfw/svm/l2_dual.hpp"

#include <algorithm>
#include <cmath>

#include "swapfw/errors.hpp"

namespace swapfw {

L2DualObjective::L2DualObjective(std::vector<SparseRow> rows, std::vector<double> signs, double c, KernelSpec kernel,
                                 std::optional<std::size_t> cache_rows)
    : rows_(std::move(rows)), signs_(std::move(signs)), c_(c), kernel_(kernel) {
  if (rows_.empty()) throw EmptyDataset();
  if (signs_.size() != rows_.size()) throw InvalidProblem("one label per example is required");
  for (double y : signs_)
    if (y != 1.0 && y != -1.0) throw InvalidProblem("labels must be +1 or -1");
  if (!(c_ > 0) || !std::isfinite(c_)) throw InvalidProblem("C must be positive and finite");
  kernel_.validate();
  capacity_ = cache_rows ? *cache_rows : std::min(rows_.size(), kDefaultCacheRows);

  diagonal_.resize(dimension());
  for (Index i = 0; i < dimension(); ++i) diagonal_[i] = compute(i, i);
}

double L2DualObjective::compute(Index i, Index j) const {
  ++stats_.kernel_evaluations;
  const double k = signs_[i] * signs_[j] * (kernel(i, j) + 1.0);
  return i == j ? k + 1.0 / c_ : k;
}

L2DualObjective::Row L2DualObjective::resident(Index i) const {
  const auto it = cache_.find(i);
  return it == cache_.end() ? nullptr : it->second.first;
}

double L2DualObjective::entry(Index i, Index j) const {
  if (i == j) return diagonal_[i];
  if (Row r = resident(i)) return (*r)[j];
  if (Row r = resident(j)) return (*r)[i];
  return compute(i, j);
}

L2DualObjective::Row L2DualObjective::fetch(Index j) const {
  if (const auto it = cache_.find(j); it != cache_.end()) {
    ++stats_.hits;
    lru_.splice(lru_.begin(), lru_, it->second.second);
    return it->second.first;
  }
  ++stats_.misses;
  auto row = std::make_shared<Eigen::VectorXd>(dimension());
  for (Index i = 0; i < dimension(); ++i) (*row)[i] = i == j ? diagonal_[j] : compute(j, i);
  if (capacity_ == 0) return row;
  if (cache_.size() >= capacity_) {
    cache_.erase(lru_.back());
    lru_.pop_back();
  }
  lru_.push_front(j);
  cache_.emplace(j, std::make_pair(Row(row), lru_.begin()));
  return row;
}

void L2DualObjective::axpy_column(Index j, double a, Eigen::VectorXd& y) const {
  if (capacity_ == 0) {
    for (Index i = 0; i < dimension(); ++i) y[i] += a * entry(i, j);
    return;
  }
  y.noalias() += a * *fetch(j);
}

}  // namespace swapfw
