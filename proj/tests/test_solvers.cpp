#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "swapfw/quadratic.hpp"
#include "swapfw/solvers.hpp"

using namespace swapfw;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

auto identity(int m) { return make_quadratic(MatrixXd(MatrixXd::Identity(m, m))); }

SolverConfig config_for(Variant v, double eps = 1e-6) {
  SolverConfig c;
  c.variant = v;
  c.tolerance = eps;
  return c;
}

constexpr Variant kAll[] = {Variant::FW, Variant::MFW, Variant::SWAP, Variant::SWAP2O, Variant::FCFW};

bool same_trace(const std::vector<IterationRecord<double>>& a, const std::vector<IterationRecord<double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto &x = a[k], &y = b[k];
    if (x.iteration != y.iteration || x.step.kind != y.step.kind || x.step.ascent != y.step.ascent ||
        x.step.descent != y.step.descent || x.step.lambda != y.step.lambda || x.step.delta != y.step.delta ||
        x.step.gain != y.step.gain || x.gap_before != y.gap_before || x.objective_after != y.objective_after ||
        x.active_size_after != y.active_size_after)
      return false;
  }
  return true;
}

void check_uniform(const SimplexPoint<double>& p, double tol) {
  for (Index i = 0; i < p.dimension(); ++i) CHECK(std::abs(p[i] - 1.0 / p.dimension()) <= tol);
}

}  // namespace

TEST_CASE("solve_fw examples") {
  const auto obj = identity(2);
  auto r = solve_fw(obj, make_point({1.0, 0.0}), config_for(Variant::FW));
  CHECK(r.termination == Termination::Converged);
  CHECK(r.iterations == 1);
  CHECK(r.trace.at(0).step.lambda == 0.5);
  CHECK(r.point[0] == 0.5);
  CHECK(r.point[1] == 0.5);
  CHECK(r.report.dual_gap == 0);

  r = solve_fw(obj, make_point({0.5, 0.5}), config_for(Variant::FW));
  CHECK(r.iterations == 0);
  CHECK(r.trace.empty());
  CHECK(r.termination == Termination::Converged);

  r = solve_fw(identity(3), SimplexPoint<double>::vertex(3, 0), config_for(Variant::FW));
  CHECK(r.termination == Termination::Converged);
  check_uniform(r.point, 1e-6);
}

TEST_CASE("solve_mfw examples") {
  const auto k = make_quadratic(fixtures::k2());
  auto r = solve_mfw(k, make_point({0.5, 0.5}), config_for(Variant::MFW));
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].step.kind == StepKind::Toward);
  CHECK(r.trace[0].step.ascent == 1);
  CHECK(r.trace[0].step.lambda == 1.0);
  CHECK(r.point.active() == std::vector<Index>{1});
  CHECK(r.termination == Termination::Converged);

  r = solve_mfw(identity(3), make_point({1.0 / 3, 1.0 / 3, 1.0 / 3}), config_for(Variant::MFW));
  CHECK(r.iterations == 0);

  r = solve_mfw(identity(3), make_point({0.45, 0.1, 0.45}), config_for(Variant::MFW));
  CHECK(r.termination == Termination::Converged);
  check_uniform(r.point, 1e-6);
  CHECK(r.counters.fw + r.counters.away + r.counters.away_drop == r.iterations);
}

TEST_CASE("solve_mfw takes away steps") {
  // Start with weight on a poor vertex: moving away from it is the better linearized step.
  MatrixXd q = MatrixXd::Identity(3, 3);
  q(2, 2) = 10;
  const auto obj = make_quadratic(q);
  const auto r = solve_mfw(obj, make_point({0.45, 0.1, 0.45}), config_for(Variant::MFW, 1e-9));
  CHECK(r.termination == Termination::Converged);
  CHECK(r.counters.away + r.counters.away_drop > 0);
  const VectorXd ref = oracle::enumerate_optimum(q);
  CHECK((r.point.weights() - ref).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("solve_swap examples") {
  auto r = solve_swap(identity(3), make_point({0.5, 0.5, 0.0}), config_for(Variant::SWAP));
  REQUIRE(r.trace.size() >= 1);
  CHECK(r.trace[0].step.kind == StepKind::Toward);
  CHECK(r.trace[0].step.ascent == 2);
  CHECK(r.trace[0].step.lambda == doctest::Approx(1.0 / 3));
  CHECK(r.trace[0].step.delta == doctest::Approx(1.0 / 6));
  check_uniform(r.point, 1e-12);
  CHECK(r.iterations == 1);

  const auto k = make_quadratic(fixtures::k2());
  for (SwapOrder order : {SwapOrder::First, SwapOrder::Second}) {
    r = solve_swap(k, make_point({0.5, 0.5}), config_for(Variant::SWAP), order);
    REQUIRE(r.trace.size() == 1);
    const auto& s = r.trace[0].step;
    CHECK(s.kind == StepKind::SwapDrop);
    CHECK(s.ascent == 1);
    CHECK(s.descent == 0);
    CHECK(s.lambda == 0.5);
    CHECK(s.delta == doctest::Approx(6.25 / 6).epsilon(1e-12));
    CHECK(s.gain == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(k.value(r.point) - k.value(make_point({0.5, 0.5})) == doctest::Approx(0.875));
    CHECK(r.point.active() == std::vector<Index>{1});
    CHECK(r.counters.swap_drop == 1);
  }

  r = solve_swap(identity(4), make_point({0.25, 0.25, 0.25, 0.25}), config_for(Variant::SWAP));
  CHECK(r.iterations == 0);
}

TEST_CASE("solve_fully_corrective examples") {
  auto r = solve_fully_corrective(identity(2), SimplexPoint<double>::vertex(2, 0), config_for(Variant::FCFW));
  CHECK(r.iterations == 1);
  CHECK(r.trace.at(0).step.ascent == 1);
  CHECK(r.point[0] == doctest::Approx(0.5));
  CHECK(r.report.dual_gap <= 1e-12);
  CHECK(r.termination == Termination::Converged);

  r = solve_fully_corrective(identity(3), make_point({1.0 / 3, 1.0 / 3, 1.0 / 3}), config_for(Variant::FCFW));
  CHECK(r.iterations == 0);

  r = solve_fully_corrective(identity(5), SimplexPoint<double>::vertex(5, 0), config_for(Variant::FCFW));
  CHECK(r.point.active() == std::vector<Index>{0, 1, 2, 3, 4});
  check_uniform(r.point, 1e-6);
}

TEST_CASE("restricted_solve examples") {
  const auto id2 = identity(2);
  const auto e0 = SimplexPoint<double>::vertex(2, 0);
  CHECK(restricted_solve(id2, {0}, e0, 1e-6) == e0);

  const auto half = restricted_solve(id2, {0, 1}, e0, 1e-9);
  CHECK(half[0] == doctest::Approx(0.5));
  CHECK(half[1] == doctest::Approx(0.5));

  const auto p = restricted_solve(identity(4), {1, 3}, SimplexPoint<double>::vertex(4, 1), 1e-9);
  CHECK(p[0] == 0);
  CHECK(p[2] == 0);
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[3] == doctest::Approx(0.5));

  CHECK_THROWS_AS(restricted_solve(id2, {1}, e0, 1e-6), InvalidProblem);
}

TEST_CASE("iteration limits") {
  std::mt19937_64 rng(3);
  const MatrixXd q = oracle::random_pd(30, rng);
  const auto obj = make_quadratic(q);
  SolverConfig c = config_for(Variant::FW, 1e-14);
  c.max_iterations = 5;
  const auto r = solve(obj, SimplexPoint<double>::vertex(30, 0), c);
  CHECK(r.termination == Termination::MaxIterations);
  CHECK(r.iterations == 5);
  CHECK(r.trace.size() == 5);

  // Six coordinates of the identity's optimum cannot be filled in one step.
  std::vector<Index> face{0, 1, 2, 3, 4, 5};
  SolverConfig one;
  one.max_iterations = 1;
  CHECK_THROWS_AS(restricted_solve(identity(6), face, SimplexPoint<double>::vertex(6, 0), 1e-9, one),
                  InnerSolveIncomplete<double>);

  c.variant = Variant::FCFW;
  c.max_iterations = 1;
  const auto spread = SimplexPoint<double>::uniform(30, std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK_THROWS_AS(solve(obj, spread, c), InnerSolveIncomplete<double>);

  SolverConfig bad;
  bad.tolerance = 0;
  CHECK_THROWS_AS(solve(obj, SimplexPoint<double>::vertex(30, 0), bad), InvalidProblem);
}

TEST_CASE("trace thinning beyond the retention limit") {
  std::mt19937_64 rng(5);
  const auto obj = make_quadratic(oracle::random_pd(40, rng));
  SolverConfig c = config_for(Variant::FW, 1e-300);
  c.max_iterations = 95;
  c.trace_limit = 20;
  const auto r = solve(obj, SimplexPoint<double>::vertex(40, 0), c);
  CHECK(r.counters.total() == r.iterations);
  REQUIRE(r.trace.size() == 20 + 8);
  CHECK(r.trace[19].iteration == 19);
  CHECK(r.trace[20].iteration == 20);
  CHECK(r.trace[21].iteration == 30);
}

TEST_CASE("property: every variant matches the enumeration oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 9;
    const MatrixXd q = oracle::random_pd_spectrum(m, rng);
    const auto obj = make_quadratic(q);
    const VectorXd ref = oracle::enumerate_optimum(q);
    const double g_star = oracle::value(q, ref);
    const auto vertex = SimplexPoint<double>::vertex(m, oracle::best_vertex(q));
    const auto random = make_point(oracle::random_point(m, rng));
    for (Variant v : kAll) {
      const double eps = 1e-7;
      for (const auto* start : {&vertex, &random}) {
        // Plain FW is sublinear once weight sits off the optimal face; keep it on the vertex start.
        if (v == Variant::FW && start == &random) continue;
        SolverConfig c = config_for(v, eps);
        c.max_iterations = 100'000'000;
        const auto r = solve(obj, *start, c);
        REQUIRE(r.termination == Termination::Converged);
        CHECK(r.report.dual_gap <= eps);
        const double primal = g_star - obj.value(r.point);
        CHECK(primal <= r.report.dual_gap + 1e-9);
        CHECK(r.counters.total() == r.iterations);
        CHECK(r.trace.size() == std::min<std::uint64_t>(r.iterations, c.trace_limit) +
                                    (r.iterations > c.trace_limit ? (r.iterations - c.trace_limit + 9) / 10 : 0));
      }
    }
  }
}

TEST_CASE("property: monotonicity, dominance and drop counts along runs") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + trial % 12;
    const MatrixXd q = oracle::random_pd(m, rng);
    const auto obj = make_quadratic(q);
    const auto start = make_point(oracle::random_point(m, rng));
    const std::size_t initial = start.active().size();
    for (Variant v : kAll) {
      double last = -std::numeric_limits<double>::infinity();
      std::uint64_t drops = 0;
      std::uint64_t steps = 0;
      Observer<double> watch = [&](const IterateView<double>& it) {
        const double direct = obj.value(it.point);
        CHECK(direct >= last - 1e-12);
        last = direct;
        CHECK(std::abs(it.value - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
        if (!it.step) return;
        if (v == Variant::SWAP && it.step->kind != StepKind::Toward) {
          const Index i = it.step->ascent, j = it.step->descent;
          CHECK(it.gradient[i] - it.gradient[j] >= it.gradient[i] - it.alpha_dot_grad);
        }
        if (is_drop(it.step->kind)) ++drops;
        ++steps;
        if (v == Variant::SWAP || v == Variant::SWAP2O) CHECK(2 * drops <= steps + initial);
      };
      SolverConfig c = config_for(v, 1e-7);
      c.max_iterations = 20'000;
      solve(obj, start, c, watch);
    }
  }
}

TEST_CASE("property: identical inputs give bitwise-identical traces") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5 + trial;
    const auto obj = make_quadratic(oracle::random_pd(m, rng));
    const auto start = make_point(oracle::random_point(m, rng));
    for (Variant v : kAll) {
      SolverConfig c = config_for(v, 1e-8);
      c.seed = 99;
      c.sample_size = 3;
      c.max_iterations = 5'000;
      const auto a = solve(obj, start, c);
      const auto b = solve(obj, start, c);
      CHECK(same_trace(a.trace, b.trace));
      CHECK(a.point == b.point);

      // Sampling at least m draws is the exact scan.
      c.sample_size = m;
      const auto s = solve(obj, start, c);
      c.sample_size = 0;
      const auto e = solve(obj, start, c);
      CHECK(same_trace(s.trace, e.trace));
    }
  }
}

TEST_CASE("sampled ascent still certifies the exact gap") {
  std::mt19937_64 rng(37);
  const MatrixXd q = oracle::random_pd(60, rng);
  const auto obj = make_quadratic(q);
  SolverConfig c = config_for(Variant::SWAP, 1e-7);
  c.sample_size = 5;
  c.seed = 4;
  const auto r = solve(obj, SimplexPoint<double>::vertex(60, 0), c);
  CHECK(r.termination == Termination::Converged);
  CHECK(oracle::dual_gap(q, r.point.weights()) <= 1e-7 + 1e-12);
}

TEST_CASE("non-quadratic objective through the generic hooks") {
  VectorXd w(4), s(4);
  w << 1, 2, 0.5, 3;
  s << 2, 1, 4, 0.5;
  const fixtures::ExpObjective obj(w, s);
  std::vector<SimplexPoint<double>> finals;
  for (Variant v : kAll) {
    const auto r = solve(obj, SimplexPoint<double>::vertex(4, 0), config_for(v, 1e-9));
    CHECK(r.termination == Termination::Converged);
    CHECK(r.report.dual_gap <= 1e-9);
    finals.push_back(r.point);
  }
  for (const auto& p : finals) CHECK((p.weights() - finals.front().weights()).lpNorm<Eigen::Infinity>() <= 1e-4);
}
