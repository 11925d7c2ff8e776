#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swapfw/objective.hpp"

namespace swapfw {

enum class Variant { FW, MFW, SWAP, SWAP2O, FCFW };

constexpr const char* to_string(Variant v) {
  switch (v) {
    case Variant::FW: return "fw";
    case Variant::MFW: return "mfw";
    case Variant::SWAP: return "swap";
    case Variant::SWAP2O: return "swap2o";
    case Variant::FCFW: return "fcfw";
  }
  return "?";
}

inline Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::FW, Variant::MFW, Variant::SWAP, Variant::SWAP2O, Variant::FCFW})
    if (name == to_string(v)) return v;
  throw InvalidProblem("unknown solver '" + std::string(name) + "'");
}

enum class SwapOrder { First, Second };

enum class Termination { Converged, MaxIterations };

constexpr const char* to_string(Termination t) {
  return t == Termination::Converged ? "converged" : "max_iterations";
}

struct SolverConfig {
  Variant variant = Variant::SWAP;
  double tolerance = 1e-6;
  std::uint64_t max_iterations = 10'000'000;
  // Face-solve tolerance for FCFW; 0 means `tolerance`.
  double inner_tolerance = 0;
  std::uint64_t seed = 0;
  // Ascent vertex from the best of this many uniform draws; 0 scans exactly.
  std::uint64_t sample_size = 0;
  // Records kept verbatim; beyond this only every 10th iteration is stored.
  std::size_t trace_limit = 1'000'000;
  // Maintained gradient and value are recomputed from scratch this often.
  std::uint64_t refresh_interval = 1000;

  double effective_inner_tolerance() const { return inner_tolerance > 0 ? inner_tolerance : tolerance; }

  void validate() const {
    if (!(tolerance > 0)) throw InvalidProblem("tolerance must be positive");
    if (inner_tolerance < 0) throw InvalidProblem("inner tolerance must be non-negative");
    if (max_iterations < 1) throw InvalidProblem("max_iterations must be at least 1");
    if (refresh_interval < 1) throw InvalidProblem("refresh_interval must be at least 1");
  }
};

template <typename Scalar = double>
struct IterationRecord {
  std::uint64_t iteration = 0;
  Step<Scalar> step;
  Scalar gap_before = 0;
  Scalar objective_after = 0;
  std::size_t active_size_after = 0;
};

/// What an observer sees at each iterate.
///
/// `step` is the update about to be applied, or null at the terminal iterate.
/// For FCFW it is the warm-start FW step, before the face re-optimization.
template <typename Scalar = double>
struct IterateView {
  std::uint64_t iteration;
  const SimplexPoint<Scalar>& point;
  const Vector<Scalar>& gradient;
  Scalar value;
  Scalar alpha_dot_grad;
  Scalar gap;
  Index ascent;
  const Step<Scalar>* step;
};

template <typename Scalar = double>
using Observer = std::function<void(const IterateView<Scalar>&)>;

struct StepCounters {
  std::uint64_t fw = 0;
  std::uint64_t swap_add = 0;
  std::uint64_t swap_drop = 0;
  std::uint64_t away = 0;
  std::uint64_t away_drop = 0;

  std::uint64_t total() const { return fw + swap_add + swap_drop + away + away_drop; }
  std::uint64_t drops() const { return swap_drop + away_drop; }

  void count(StepKind kind) {
    switch (kind) {
      case StepKind::Toward: ++fw; break;
      case StepKind::SwapAdd: ++swap_add; break;
      case StepKind::SwapDrop: ++swap_drop; break;
      case StepKind::Away: ++away; break;
      case StepKind::AwayDrop: ++away_drop; break;
    }
  }
};

template <typename Scalar = double>
struct SolveResult {
  SimplexPoint<Scalar> point;
  // Computed from a fresh gradient at the final point, over all coordinates.
  GapReport<Scalar> report;
  std::vector<IterationRecord<Scalar>> trace;
  Termination termination = Termination::MaxIterations;
  StepCounters counters;
  std::uint64_t iterations = 0;
  // Steps taken inside FCFW face solves.
  std::uint64_t inner_iterations = 0;
  Scalar objective = 0;
};

/// Thrown when a face solve runs out of iterations; carries its last iterate.
template <typename Scalar = double>
class InnerSolveIncomplete : public Error {
 public:
  explicit InnerSolveIncomplete(SimplexPoint<Scalar> best)
      : Error("restricted solve hit the iteration limit"), best_(std::move(best)) {}
  const SimplexPoint<Scalar>& best() const { return best_; }

 private:
  SimplexPoint<Scalar> best_;
};

namespace detail {

// Final FCFW face solve runs at this fraction of the inner tolerance.
inline constexpr double kPolishFactor = 1e-4;

template <typename Scalar>
class Engine {
 public:
  using Point = SimplexPoint<Scalar>;
  using VectorType = Vector<Scalar>;

  Engine(const ConcaveObjective<Scalar>& obj, Point start, const SolverConfig& config, Variant variant,
         double tolerance, std::vector<Index> face, const Observer<Scalar>* observer)
      : obj_(obj),
        config_(config),
        variant_(variant),
        tolerance_(static_cast<Scalar>(tolerance)),
        face_(std::move(face)),
        observer_(observer),
        rng_(config.seed),
        point_(std::move(start)) {
    config_.validate();
    if (point_.dimension() != obj_.dimension())
      throw InvalidProblem("start point dimension does not match the objective");
  }

  SolveResult<Scalar> run() {
    SolveResult<Scalar> result;
    refresh();
    for (;;) {
      const Scalar adg = alpha_dot();
      const Index best = exact_ascent();
      const Scalar gap = grad_[best] - adg;

      if (gap <= tolerance_ && maintained_) {
        refresh();
        continue;
      }
      // FCFW stops on a tightly solved face so that its active set is a
      // coreset, then re-checks the full gap.
      if (gap <= tolerance_ && variant_ == Variant::FCFW && !polished_) {
        polished_ = true;
        correct_on_face(point_.active(), result, config_.effective_inner_tolerance() * kPolishFactor);
        refresh();
        continue;
      }
      if (gap <= tolerance_ || result.iterations >= config_.max_iterations) {
        if (maintained_) refresh();
        notify(result.iterations, adg, gap, best, nullptr);
        result.termination = gap <= tolerance_ ? Termination::Converged : Termination::MaxIterations;
        break;
      }

      Step<Scalar> step = choose(pick_ascent(best), adg);
      notify(result.iterations, adg, gap, best, &step);

      const Scalar value_before = value_;
      const std::vector<Index> face_before = point_.active();
      Point next = apply_step(point_, step);
      obj_.advance(point_, step, next, grad_, value_);
      point_ = std::move(next);
      maintained_ = true;
      ++since_refresh_;

      if (variant_ == Variant::FCFW) {
        std::vector<Index> face = face_before;
        face.insert(std::lower_bound(face.begin(), face.end(), step.ascent), step.ascent);
        face.erase(std::unique(face.begin(), face.end()), face.end());
        correct_on_face(std::move(face), result, config_.effective_inner_tolerance());
        polished_ = false;
        step.gain = step.delta = value_ - value_before;
      }

      result.counters.count(step.kind);
      record(result, step, gap);
      ++result.iterations;
      if (since_refresh_ >= config_.refresh_interval) refresh();
    }

    result.objective = value_;
    result.report = gap_report(point_, grad_);
    result.point = std::move(point_);
    return result;
  }

  // Gradient and value at the final point of run(); valid until the next run.
  const VectorType& gradient() const { return grad_; }
  Scalar value() const { return value_; }

 private:
  void refresh() {
    obj_.evaluate(point_, grad_, value_);
    maintained_ = false;
    since_refresh_ = 0;
  }

  Scalar alpha_dot() const {
    Scalar s = 0;
    for (Index i : point_.active()) s += point_[i] * grad_[i];
    return s;
  }

  template <typename F>
  void for_candidates(F&& f) const {
    if (face_.empty()) {
      for (Index i = 0; i < grad_.size(); ++i) f(i);
    } else {
      for (Index i : face_) f(i);
    }
  }

  Index exact_ascent() const {
    Index best = -1;
    for_candidates([&](Index i) {
      if (best < 0 || grad_[i] > grad_[best]) best = i;
    });
    return best;
  }

  Index pick_ascent(Index exact) {
    const std::uint64_t n = face_.empty() ? static_cast<std::uint64_t>(grad_.size()) : face_.size();
    if (config_.sample_size == 0 || config_.sample_size >= n) return exact;
    std::uniform_int_distribution<std::uint64_t> draw(0, n - 1);
    Index best = -1;
    for (std::uint64_t s = 0; s < config_.sample_size; ++s) {
      const std::uint64_t k = draw(rng_);
      const Index i = face_.empty() ? static_cast<Index>(k) : face_[k];
      if (best < 0 || grad_[i] > grad_[best] || (grad_[i] == grad_[best] && i < best)) best = i;
    }
    return best;
  }

  Step<Scalar> choose(Index i, Scalar adg) {
    switch (variant_) {
      case Variant::FW:
      case Variant::FCFW:
        return toward(i);
      case Variant::MFW:
        return modified(i, adg);
      case Variant::SWAP:
        return swap(i, descent_index(grad_, point_.active()), false);
      case Variant::SWAP2O:
        return swap(i, second_order_descent(i), true);
    }
    return toward(i);
  }

  Step<Scalar> toward(Index i) const {
    const auto ls = obj_.search(point_, grad_, value_, Direction::toward(i), Scalar(1));
    return {StepKind::Toward, i, -1, ls.lambda, ls.gain, ls.gain};
  }

  // First-order FW-versus-away choice, ties to FW.
  Step<Scalar> modified(Index i, Scalar adg) const {
    const Index j = descent_index(grad_, point_.active());
    if (grad_[i] - adg >= adg - grad_[j]) return toward(i);
    const Scalar bound = step_bound(point_, StepKind::Away, j);
    const auto ls = obj_.search(point_, grad_, value_, Direction::away(j), bound);
    const StepKind kind = ls.ascent && ls.lambda >= bound ? StepKind::AwayDrop : StepKind::Away;
    return {kind, -1, j, kind == StepKind::AwayDrop ? bound : ls.lambda, ls.gain, ls.gain};
  }

  Step<Scalar> swap(Index i, Index j, bool second_order) const {
    Scalar lambda_swap = 0;
    Scalar delta_swap = 0;
    if (i != j) {
      if (second_order) {
        lambda_swap = newton_swap_step(i, j);
        delta_swap = lambda_swap > Scalar(0)
                         ? obj_.gain_at(point_, grad_, value_, Direction::swap(i, j), lambda_swap)
                         : Scalar(0);
      } else {
        const auto ls = obj_.search(point_, grad_, value_, Direction::swap(i, j), Scalar(1));
        lambda_swap = ls.lambda;
        delta_swap = ls.gain;
      }
    }
    const Step<Scalar> fw = toward(i);
    if (delta_swap < fw.delta) return fw;

    const Scalar available = point_[j];
    if (lambda_swap >= available) {
      const Scalar realized = obj_.gain_at(point_, grad_, value_, Direction::swap(i, j), available);
      return {StepKind::SwapDrop, i, j, available, delta_swap, realized};
    }
    return {StepKind::SwapAdd, i, j, lambda_swap, delta_swap, delta_swap};
  }

  // Curvature of g along e_i - e_j.
  Scalar swap_curvature(Index i, Index j) const {
    return obj_.hess_entry(point_, i, i) - Scalar(2) * obj_.hess_entry(point_, i, j) + obj_.hess_entry(point_, j, j);
  }

  // Active j maximizing the second-order predicted gain of a swap from j to i.
  Index second_order_descent(Index i) const {
    constexpr Scalar kFlat = Scalar(-1e-14);
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    Index best = -1;
    Scalar best_score = -inf;
    for (Index j : point_.active()) {
      const Scalar diff = grad_[i] - grad_[j];
      const Scalar curv = swap_curvature(i, j);
      Scalar score;
      if (curv >= kFlat)
        score = diff > Scalar(0) ? inf : -inf;
      else
        score = diff * diff / (Scalar(-2) * curv);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) return descent_index(grad_, point_.active());
    return best;
  }

  // Maximizer of the second-order model along e_i - e_j, clipped to [0, 1].
  Scalar newton_swap_step(Index i, Index j) const {
    const Scalar diff = grad_[i] - grad_[j];
    if (!(diff > Scalar(0))) return Scalar(0);
    const Scalar curv = swap_curvature(i, j);
    if (curv >= Scalar(-1e-14)) return Scalar(1);
    return std::min(diff / -curv, Scalar(1));
  }

  void correct_on_face(std::vector<Index> face, SolveResult<Scalar>& result, double tolerance) {
    if (face.size() < 2) return;
    SolverConfig inner = config_;
    inner.sample_size = 0;
    inner.trace_limit = 0;
    Engine sub(obj_, point_, inner, Variant::SWAP, tolerance, std::move(face), nullptr);
    SolveResult<Scalar> r = sub.run();
    result.inner_iterations += r.iterations;
    if (r.termination != Termination::Converged) throw InnerSolveIncomplete<Scalar>(std::move(r.point));
    point_ = std::move(r.point);
    grad_ = sub.grad_;
    value_ = sub.value_;
    maintained_ = true;
  }

  void notify(std::uint64_t k, Scalar adg, Scalar gap, Index best, const Step<Scalar>* step) const {
    if (observer_ && *observer_) (*observer_)(IterateView<Scalar>{k, point_, grad_, value_, adg, gap, best, step});
  }

  void record(SolveResult<Scalar>& result, const Step<Scalar>& step, Scalar gap) const {
    const std::uint64_t k = result.iterations;
    if (k >= config_.trace_limit && k % 10 != 0) return;
    result.trace.push_back({k, step, gap, value_, point_.active().size()});
  }

  const ConcaveObjective<Scalar>& obj_;
  SolverConfig config_;
  Variant variant_;
  Scalar tolerance_;
  std::vector<Index> face_;  // empty: every coordinate
  const Observer<Scalar>* observer_;
  std::mt19937_64 rng_;

  Point point_;
  VectorType grad_;
  Scalar value_ = 0;
  bool maintained_ = false;
  bool polished_ = false;
  std::uint64_t since_refresh_ = 0;
};

}  // namespace detail

template <typename Scalar>
SolveResult<Scalar> solve(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& start,
                          const SolverConfig& config, const Observer<Scalar>& observer = {}) {
  detail::Engine<Scalar> engine(obj, start, config, config.variant, config.tolerance, {}, &observer);
  return engine.run();
}

template <typename Scalar>
SolveResult<Scalar> solve_fw(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& start,
                             SolverConfig config, const Observer<Scalar>& observer = {}) {
  config.variant = Variant::FW;
  return solve(obj, start, config, observer);
}

template <typename Scalar>
SolveResult<Scalar> solve_mfw(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& start,
                              SolverConfig config, const Observer<Scalar>& observer = {}) {
  config.variant = Variant::MFW;
  return solve(obj, start, config, observer);
}

template <typename Scalar>
SolveResult<Scalar> solve_swap(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& start,
                               SolverConfig config, SwapOrder order = SwapOrder::First,
                               const Observer<Scalar>& observer = {}) {
  config.variant = order == SwapOrder::First ? Variant::SWAP : Variant::SWAP2O;
  return solve(obj, start, config, observer);
}

template <typename Scalar>
SolveResult<Scalar> solve_fully_corrective(const ConcaveObjective<Scalar>& obj, const SimplexPoint<Scalar>& start,
                                           SolverConfig config, const Observer<Scalar>& observer = {}) {
  config.variant = Variant::FCFW;
  return solve(obj, start, config, observer);
}

/// Maximizes g over the face spanned by `face`, starting from a point on it.
///
/// Runs the first-order SWAP loop with ascent candidates limited to the face.
/// Throws InnerSolveIncomplete if `config.max_iterations` is reached.
template <typename Scalar>
SimplexPoint<Scalar> restricted_solve(const ConcaveObjective<Scalar>& obj, std::vector<Index> face,
                                      const SimplexPoint<Scalar>& start, double inner_tolerance,
                                      SolverConfig config = {}) {
  std::sort(face.begin(), face.end());
  face.erase(std::unique(face.begin(), face.end()), face.end());
  if (face.empty()) throw EmptyActiveSet();
  for (Index i : face)
    if (i < 0 || i >= obj.dimension()) throw InvalidProblem("face index outside the simplex");
  if (!start.supported_on(face)) throw InvalidProblem("start point is not supported on the face");
  if (face.size() == 1) return start;
  config.sample_size = 0;
  config.trace_limit = 0;
  detail::Engine<Scalar> engine(obj, start, config, Variant::SWAP, inner_tolerance, std::move(face), nullptr);
  SolveResult<Scalar> r = engine.run();
  if (r.termination != Termination::Converged) throw InnerSolveIncomplete<Scalar>(std::move(r.point));
  return std::move(r.point);
}

}  // namespace swapfw
