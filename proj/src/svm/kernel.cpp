#include "swapfw/svm/kernel.hpp"

#include <cmath>
#include <string>

#include "swapfw/errors.hpp"

namespace swapfw {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::RBF:
      return "rbf";
    case KernelKind::POLY2:
      return "poly2";
    case KernelKind::LINEAR:
      return "linear";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "rbf") return KernelKind::RBF;
  if (name == "poly2") return KernelKind::POLY2;
  if (name == "linear") return KernelKind::LINEAR;
  throw InvalidProblem("unknown kernel '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::LINEAR) return;
  if (!(parameter > 0) || !std::isfinite(parameter))
    throw InvalidProblem(kind == KernelKind::RBF ? "sigma2 must be positive" : "gamma must be positive");
}

double sparse_dot(const SparseRow& a, const SparseRow& b) {
  SparseRow::InnerIterator ia(a), ib(b);
  double s = 0;
  while (ia && ib) {
    if (ia.index() < ib.index()) {
      ++ia;
    } else if (ib.index() < ia.index()) {
      ++ib;
    } else {
      s += ia.value() * ib.value();
      ++ia;
      ++ib;
    }
  }
  return s;
}

double squared_distance(const SparseRow& a, const SparseRow& b) {
  SparseRow::InnerIterator ia(a), ib(b);
  double s = 0;
  while (ia || ib) {
    double d;
    if (ia && (!ib || ia.index() < ib.index())) {
      d = ia.value();
      ++ia;
    } else if (ib && (!ia || ib.index() < ia.index())) {
      d = ib.value();
      ++ib;
    } else {
      d = ia.value() - ib.value();
      ++ia;
      ++ib;
    }
    s += d * d;
  }
  return s;
}

double kernel_eval(const KernelSpec& spec, const SparseRow& a, const SparseRow& b) {
  switch (spec.kind) {
    case KernelKind::RBF:
      return std::exp(-squared_distance(a, b) / (2 * spec.parameter));
    case KernelKind::POLY2: {
      const double t = spec.parameter * sparse_dot(a, b);
      return t * t;
    }
    case KernelKind::LINEAR:
      return sparse_dot(a, b);
  }
  return 0;
}

}  // namespace swapfw
