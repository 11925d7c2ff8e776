#include "swapfw/bench/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "swapfw/errors.hpp"
#include "swapfw/io/libsvm.hpp"

namespace swapfw {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

BenchmarkRow run_variant(const Dataset& train_data, const Dataset& test, const BenchmarkConfig& config,
                         Variant variant) {
  BenchmarkRow row;
  row.dataset = config.dataset;
  row.variant = variant;
  TrainConfig tc = config.train;
  tc.solver.variant = variant;
  std::vector<double> times;
  try {
    for (int r = 0; r < config.repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      TrainResult result = train(train_data, tc);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      if (r + 1 < config.repeats) continue;

      row.status = "converged";
      row.iterations = 0;
      row.gap = 0;
      row.objective = 0;
      row.trace.clear();
      for (const auto& s : result.solves) {
        if (s.termination != Termination::Converged) row.status = to_string(s.termination);
        row.iterations += s.iterations;
        row.gap = std::max(row.gap, s.report.dual_gap);
        row.objective += s.objective;
        row.trace.insert(row.trace.end(), s.trace.begin(), s.trace.end());
      }
      row.accuracy = accuracy(result.ensemble, test);
      row.support = result.ensemble.support();
    }
    row.time_s = median(times);
  } catch (const Error& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

std::string cell(double v, bool valid) { return valid ? format_real(v) : std::string(); }

}  // namespace

double speedup(double reference_time, double time) { return reference_time / time; }

double accuracy_delta(double reference_accuracy, double accuracy) {
  return (reference_accuracy - accuracy) / reference_accuracy;
}

bool BenchmarkReport::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const BenchmarkRow& r) { return r.status == "converged"; });
}

BenchmarkReport run_benchmark(const Dataset& train_data, const Dataset& test, const BenchmarkConfig& config) {
  if (config.variants.empty()) throw InvalidProblem("no solver variants to benchmark");
  if (config.repeats < 1) throw InvalidProblem("repeats must be at least 1");
  if (!test.labeled()) throw InvalidProblem("test data must be labeled");

  std::vector<Variant> order = config.variants;
  if (std::find(order.begin(), order.end(), config.reference) == order.end()) order.push_back(config.reference);

  BenchmarkReport report;
  for (Variant v : order) report.rows.push_back(run_variant(train_data, test, config, v));

  const auto ref = std::find_if(report.rows.begin(), report.rows.end(),
                                [&](const BenchmarkRow& r) { return r.variant == config.reference; });
  const bool ref_ok = ref->status != "error";
  const double t_ref = ref->time_s;
  const double a_ref = ref->accuracy;
  for (BenchmarkRow& row : report.rows) {
    const bool ok = ref_ok && row.status != "error";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.speedup = ok ? speedup(t_ref, row.time_s) : nan;
    row.acc_delta = ok && a_ref > 0 ? accuracy_delta(a_ref, row.accuracy) : nan;
  }
  return report;
}

void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const BenchmarkRow& r : report.rows) {
    const bool ok = r.status != "error";
    out << r.dataset << ',' << to_string(r.variant) << ',' << r.status << ',' << (ok ? std::to_string(r.iterations) : "")
        << ',' << cell(r.time_s, ok) << ',' << cell(r.accuracy, ok) << ',' << (ok ? std::to_string(r.support) : "")
        << ',' << cell(r.speedup, std::isfinite(r.speedup)) << ',' << cell(r.acc_delta, std::isfinite(r.acc_delta))
        << '\n';
  }
  if (!out) throw Error("write failure");
}

}  // namespace swapfw
