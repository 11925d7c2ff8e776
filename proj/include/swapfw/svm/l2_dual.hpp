#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <list>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "swapfw/quadratic.hpp"
#include "swapfw/svm/kernel.hpp"

namespace swapfw {

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t kernel_evaluations = 0;
};

/// g(a) = -a^T K a with K_ij = y_i y_j (k(x_i, x_j) + 1) + [i == j] / C.
///
/// Full rows of K are kept in an LRU cache. Every entry comes out of the same
/// expression whether cached or not, so results do not depend on the cache
/// capacity. Not safe for concurrent use.
class L2DualObjective final : public QuadraticForm<double> {
 public:
  static constexpr std::size_t kDefaultCacheRows = 4096;

  // `signs` holds y_i in {+1, -1}. A missing capacity means min(m, 4096)
  // rows; 0 disables caching.
  L2DualObjective(std::vector<SparseRow> rows, std::vector<double> signs, double c, KernelSpec kernel,
                  std::optional<std::size_t> cache_rows = std::nullopt);

  Index dimension() const override { return static_cast<Index>(rows_.size()); }
  double entry(Index i, Index j) const override;
  void axpy_column(Index j, double a, Eigen::VectorXd& y) const override;

  double kernel(Index i, Index j) const { return kernel_eval(kernel_, rows_[i], rows_[j]); }

  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<double>& signs() const { return signs_; }
  double c() const { return c_; }
  const KernelSpec& kernel_spec() const { return kernel_; }

  std::size_t cache_capacity() const { return capacity_; }
  std::size_t cache_size() const { return lru_.size(); }
  const CacheStats& cache_stats() const { return stats_; }

 private:
  using Row = std::shared_ptr<const Eigen::VectorXd>;

  double compute(Index i, Index j) const;
  Row resident(Index i) const;
  Row fetch(Index j) const;

  std::vector<SparseRow> rows_;
  std::vector<double> signs_;
  double c_;
  KernelSpec kernel_;
  std::size_t capacity_;
  Eigen::VectorXd diagonal_;

  mutable std::list<Index> lru_;  // most recent first
  mutable std::unordered_map<Index, std::pair<Row, std::list<Index>::iterator>> cache_;
  mutable CacheStats stats_;
};

}  // namespace swapfw
