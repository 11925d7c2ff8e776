#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "swapfw/solvers.hpp"
#include "swapfw/svm/dataset.hpp"
#include "swapfw/svm/kernel.hpp"
#include "swapfw/svm/l2_dual.hpp"

namespace swapfw {

enum class SvmSearch { Toward, Swap, Swap2O };

struct SvmLineSearch {
  double lambda = 0;
  double delta = 0;
};

/// Closed-form step and gain written in terms of g, using a^T grad = 2g.
///
/// lambda is clipped to [0, 1]; a clipped step's gain is re-evaluated
/// directly along the direction. Throws InvalidProblem when the curvature is
/// not positive.
SvmLineSearch exact_line_search_and_gain(const QuadraticForm<double>& obj, const SimplexPoint<double>& point,
                                         const Eigen::VectorXd& grad, double value, SvmSearch kind, Index ascent,
                                         Index descent = -1);

/// Uniform weight on min(p, m) distinct random indices, then optimized on
/// that face to `tolerance`.
SimplexPoint<double> initialize(const ConcaveObjective<double>& obj, std::size_t p, std::mt19937_64& rng, double tolerance);

/// Best gradient coordinate among `sample_size` uniform draws with
/// replacement; the exact argmax when sample_size >= m.
Index sample_ascent_index(const ConcaveObjective<double>& obj, const SimplexPoint<double>& point, std::uint64_t sample_size,
                          std::mt19937_64& rng);

/// Mean squared distance over all pairs, or over 1e5 random pairs when there
/// are more. Throws DegenerateData when it is 0.
double default_sigma2(const Dataset& data, std::mt19937_64& rng);

struct TrainConfig {
  KernelSpec kernel;
  double c = 1.0;
  // Tolerance, variant, seed and sample size of every binary solve.
  SolverConfig solver;
  std::size_t init_points = 20;
  std::optional<std::size_t> cache_rows;
  // Train the one-vs-one pairs on separate threads.
  bool parallel = false;
};

/// Binary model: f(x) = sum_i a_i y_i (k(x_i, x) + 1), positive class when f >= 0.
struct SvmModel {
  KernelSpec kernel;
  double c = 1.0;
  double positive_class = 1.0;
  double negative_class = -1.0;
  std::vector<double> weights;
  std::vector<double> signs;
  std::vector<SparseRow> vectors;

  std::size_t support() const { return weights.size(); }
  double decision(const SparseRow& x) const;
  double predict(const SparseRow& x) const { return decision(x) >= 0 ? positive_class : negative_class; }
};

struct Prediction {
  double label = 0;
  // Decision value for a single binary model, otherwise the winner's vote count.
  double score = 0;
};

/// One binary model per unordered class pair; classes in first-seen order.
struct OvoEnsemble {
  std::vector<double> classes;
  std::vector<SvmModel> models;

  Prediction predict(const SparseRow& x) const;
  std::size_t support() const;
};

struct TrainResult {
  OvoEnsemble ensemble;
  // One per model, same order.
  std::vector<SolveResult<double>> solves;
};

/// Initializes on `obj` and runs the configured solver on it.
SolveResult<double> fit(const L2DualObjective& obj, const TrainConfig& config, std::mt19937_64& rng,
                        const Observer<double>& observer = {});

SvmModel extract_model(const L2DualObjective& obj, const SimplexPoint<double>& point, double positive_class,
                       double negative_class);

/// Trains one binary model per class pair. Within a pair the larger label is
/// the positive class.
TrainResult train(const Dataset& data, const TrainConfig& config);

double accuracy(const OvoEnsemble& ensemble, const Dataset& data);

}  // namespace swapfw
