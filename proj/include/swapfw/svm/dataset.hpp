#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

#include "swapfw/simplex.hpp"

namespace swapfw {

using SparseRow = Eigen::SparseVector<double>;

/// Examples as sparse rows with 0-based feature indices.
struct Dataset {
  std::vector<SparseRow> rows;
  // One label per row, or empty for unlabeled data.
  std::vector<double> labels;
  // One past the largest feature index seen.
  Index features = 0;

  Index size() const { return static_cast<Index>(rows.size()); }
  bool labeled() const { return !rows.empty() && labels.size() == rows.size(); }

  Dataset subset(const std::vector<Index>& indices) const {
    Dataset out;
    out.features = features;
    out.rows.reserve(indices.size());
    for (Index i : indices) {
      out.rows.push_back(rows[i]);
      if (labeled()) out.labels.push_back(labels[i]);
    }
    return out;
  }
};

/// Dataset from dense examples stored one per row.
template <typename Derived>
Dataset make_dataset(const Eigen::MatrixBase<Derived>& examples, std::vector<double> labels = {}) {
  Dataset out;
  out.features = examples.cols();
  for (Index r = 0; r < examples.rows(); ++r) {
    SparseRow row(examples.cols());
    for (Index c = 0; c < examples.cols(); ++c)
      if (examples(r, c) != 0) row.insert(c) = static_cast<double>(examples(r, c));
    out.rows.push_back(std::move(row));
  }
  out.labels = std::move(labels);
  return out;
}

}  // namespace swapfw
