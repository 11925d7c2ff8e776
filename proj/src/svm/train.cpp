#include "swapfw/svm/train.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "swapfw/errors.hpp"

namespace swapfw {

namespace {

// g at point + lambda * (e_ascent - e_descent) or point + lambda * (e_ascent - point),
// summed over the touched support.
double value_along(const QuadraticForm<double>& obj, const SimplexPoint<double>& point, SvmSearch kind, Index ascent,
                   Index descent, double lambda) {
  std::vector<Index> support = point.active();
  for (Index extra : {ascent, descent})
    if (extra >= 0 && !point.is_active(extra)) support.push_back(extra);
  std::vector<double> a(support.size());
  for (std::size_t r = 0; r < support.size(); ++r) {
    const Index i = support[r];
    double w = point[i];
    if (kind == SvmSearch::Toward) {
      w = (1 - lambda) * w + (i == ascent ? lambda : 0.0);
    } else {
      if (i == ascent) w += lambda;
      if (i == descent) w -= lambda;
    }
    a[r] = w;
  }
  double s = 0;
  for (std::size_t r = 0; r < support.size(); ++r)
    for (std::size_t c = 0; c < support.size(); ++c) s += a[r] * a[c] * obj.entry(support[r], support[c]);
  return -s;
}

std::vector<double> classes_of(const Dataset& data) {
  std::vector<double> classes;
  for (double y : data.labels)
    if (std::find(classes.begin(), classes.end(), y) == classes.end()) classes.push_back(y);
  return classes;
}

}  // namespace

SvmLineSearch exact_line_search_and_gain(const QuadraticForm<double>& obj, const SimplexPoint<double>& point,
                                         const Eigen::VectorXd& grad, double value, SvmSearch kind, Index ascent,
                                         Index descent) {
  double numerator;
  double denominator;
  if (kind == SvmSearch::Toward) {
    numerator = grad[ascent] - 2 * value;
    denominator = 2 * (obj.entry(ascent, ascent) + grad[ascent] - value);
  } else {
    if (descent < 0) throw InvalidProblem("swap search needs a descent index");
    if (ascent == descent) return {};
    numerator = grad[ascent] - grad[descent];
    denominator =
        2 * (obj.entry(ascent, ascent) - 2 * obj.entry(ascent, descent) + obj.entry(descent, descent));
  }
  if (!(denominator > 0)) throw InvalidProblem("kernel matrix is not positive definite along the search direction");
  const double lambda = numerator / denominator;
  if (lambda >= 0 && lambda <= 1) return {lambda, numerator * numerator / (2 * denominator)};
  const double clipped = std::clamp(lambda, 0.0, 1.0);
  if (clipped == 0) return {};
  return {clipped, value_along(obj, point, kind, ascent, descent, clipped) - obj.value(point)};
}

SimplexPoint<double> initialize(const ConcaveObjective<double>& obj, std::size_t p, std::mt19937_64& rng, double tolerance) {
  if (p < 1) throw InvalidProblem("initialization needs at least one point");
  const Index m = obj.dimension();
  const Index k = static_cast<Index>(std::min<std::size_t>(p, static_cast<std::size_t>(m)));
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index(0));
  for (Index t = 0; t < k; ++t) {
    std::uniform_int_distribution<Index> pick(t, m - 1);
    std::swap(order[t], order[pick(rng)]);
  }
  std::vector<Index> face(order.begin(), order.begin() + k);
  std::sort(face.begin(), face.end());
  return restricted_solve(obj, face, SimplexPoint<double>::uniform(m, face), tolerance);
}

Index sample_ascent_index(const ConcaveObjective<double>& obj, const SimplexPoint<double>& point, std::uint64_t sample_size,
                          std::mt19937_64& rng) {
  if (sample_size < 1) throw InvalidProblem("sample size must be at least 1");
  const Index m = obj.dimension();
  if (sample_size >= static_cast<std::uint64_t>(m)) {
    Eigen::VectorXd grad;
    double value;
    obj.evaluate(point, grad, value);
    return ascent_index(grad);
  }
  std::uniform_int_distribution<Index> draw(0, m - 1);
  Index best = -1;
  double best_grad = 0;
  for (std::uint64_t s = 0; s < sample_size; ++s) {
    const Index i = draw(rng);
    const double g = obj.grad_coord(point, i);
    if (best < 0 || g > best_grad || (g == best_grad && i < best)) {
      best = i;
      best_grad = g;
    }
  }
  return best;
}

double default_sigma2(const Dataset& data, std::mt19937_64& rng) {
  const std::uint64_t m = data.rows.size();
  if (m < 2) throw InvalidProblem("sigma2 estimate needs at least two examples");
  constexpr std::uint64_t kMaxPairs = 100'000;
  double sum = 0;
  std::uint64_t count = 0;
  if (m * (m - 1) / 2 <= kMaxPairs) {
    for (std::uint64_t i = 0; i < m; ++i)
      for (std::uint64_t j = i + 1; j < m; ++j, ++count) sum += squared_distance(data.rows[i], data.rows[j]);
  } else {
    std::uniform_int_distribution<std::uint64_t> first(0, m - 1), second(0, m - 2);
    for (; count < kMaxPairs; ++count) {
      const std::uint64_t i = first(rng);
      std::uint64_t j = second(rng);
      if (j >= i) ++j;
      sum += squared_distance(data.rows[i], data.rows[j]);
    }
  }
  const double mean = sum / static_cast<double>(count);
  if (!(mean > 0)) throw DegenerateData("all examples are identical; sigma2 would be 0");
  return mean;
}

double SvmModel::decision(const SparseRow& x) const {
  double f = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) f += weights[i] * signs[i] * (kernel_eval(kernel, vectors[i], x) + 1);
  return f;
}

Prediction OvoEnsemble::predict(const SparseRow& x) const {
  if (models.size() == 1) {
    const double f = models.front().decision(x);
    return {f >= 0 ? models.front().positive_class : models.front().negative_class, f};
  }
  std::vector<int> votes(classes.size(), 0);
  for (const SvmModel& model : models) {
    const double label = model.predict(x);
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it != classes.end()) ++votes[it - classes.begin()];
  }
  const auto winner = std::max_element(votes.begin(), votes.end()) - votes.begin();
  return {classes[winner], static_cast<double>(votes[winner])};
}

std::size_t OvoEnsemble::support() const {
  std::size_t total = 0;
  for (const SvmModel& model : models) total += model.support();
  return total;
}

SolveResult<double> fit(const L2DualObjective& obj, const TrainConfig& config, std::mt19937_64& rng,
                        const Observer<double>& observer) {
  const SimplexPoint<double> start = initialize(obj, config.init_points, rng, config.solver.tolerance);
  return solve(obj, start, config.solver, observer);
}

SvmModel extract_model(const L2DualObjective& obj, const SimplexPoint<double>& point, double positive_class,
                       double negative_class) {
  SvmModel model;
  model.kernel = obj.kernel_spec();
  model.c = obj.c();
  model.positive_class = positive_class;
  model.negative_class = negative_class;
  for (Index i : point.active()) {
    model.weights.push_back(point[i]);
    model.signs.push_back(obj.signs()[i]);
    model.vectors.push_back(obj.rows()[i]);
  }
  return model;
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  if (!data.labeled()) throw InvalidProblem("training data must be labeled");
  config.kernel.validate();
  config.solver.validate();
  const std::vector<double> classes = classes_of(data);
  if (classes.size() < 2) throw InvalidProblem("training data needs at least two classes");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = a + 1; b < classes.size(); ++b) pairs.emplace_back(a, b);

  TrainResult result;
  result.ensemble.classes = classes;
  result.ensemble.models.resize(pairs.size());
  result.solves.resize(pairs.size());

  auto run_pair = [&](std::size_t k) {
    const double positive = std::max(classes[pairs[k].first], classes[pairs[k].second]);
    const double negative = std::min(classes[pairs[k].first], classes[pairs[k].second]);
    std::vector<SparseRow> rows;
    std::vector<double> signs;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      if (data.labels[i] != positive && data.labels[i] != negative) continue;
      rows.push_back(data.rows[i]);
      signs.push_back(data.labels[i] == positive ? 1.0 : -1.0);
    }
    const L2DualObjective obj(std::move(rows), std::move(signs), config.c, config.kernel, config.cache_rows);
    TrainConfig pair_config = config;
    pair_config.solver.seed = config.solver.seed + k;
    std::seed_seq seq{config.solver.seed, static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(seq);
    result.solves[k] = fit(obj, pair_config, rng);
    result.ensemble.models[k] = extract_model(obj, result.solves[k].point, positive, negative);
  };

  if (!config.parallel || pairs.size() == 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) run_pair(k);
    return result;
  }

  std::vector<std::exception_ptr> errors(pairs.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(pairs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < pairs.size(); k = next++) {
        try {
          run_pair(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

double accuracy(const OvoEnsemble& ensemble, const Dataset& data) {
  if (!data.labeled()) throw InvalidProblem("accuracy needs labeled data");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i)
    if (ensemble.predict(data.rows[i]).label == data.labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(data.rows.size());
}

}  // namespace swapfw
