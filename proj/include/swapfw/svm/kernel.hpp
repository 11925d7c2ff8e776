#pragma once

#include <string>
#include <string_view>

#include "swapfw/svm/dataset.hpp"

namespace swapfw {

enum class KernelKind { RBF, POLY2, LINEAR };

const char* to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// RBF carries sigma^2, POLY2 carries gamma; LINEAR ignores the parameter.
struct KernelSpec {
  KernelKind kind = KernelKind::RBF;
  double parameter = 1.0;

  static KernelSpec rbf(double sigma2) { return {KernelKind::RBF, sigma2}; }
  static KernelSpec poly2(double gamma) { return {KernelKind::POLY2, gamma}; }
  static KernelSpec linear() { return {KernelKind::LINEAR, 1.0}; }

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

// Both merge the index lists in increasing order, so the results are
// symmetric in their arguments bit for bit and identical rows give exactly 0.
double sparse_dot(const SparseRow& a, const SparseRow& b);
double squared_distance(const SparseRow& a, const SparseRow& b);

double kernel_eval(const KernelSpec& spec, const SparseRow& a, const SparseRow& b);

}  // namespace swapfw
