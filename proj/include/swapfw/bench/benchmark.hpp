#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "swapfw/svm/train.hpp"

namespace swapfw {

inline constexpr const char* kReportHeader = "dataset,variant,status,iterations,time_s,accuracy,support,speedup,acc_delta";

struct BenchmarkConfig {
  std::string dataset = "data";
  std::vector<Variant> variants;
  // Baseline for speedup and acc_delta; run even when not listed.
  Variant reference = Variant::FCFW;
  int repeats = 1;
  // Shared by every variant; its solver variant is overwritten per run.
  TrainConfig train;
};

struct BenchmarkRow {
  std::string dataset;
  Variant variant = Variant::SWAP;
  // converged, max_iterations, or error
  std::string status;
  std::uint64_t iterations = 0;
  // Median wall time of the training call over the repeats.
  double time_s = 0;
  double accuracy = 0;
  std::size_t support = 0;
  double speedup = 0;
  double acc_delta = 0;
  // Not part of the CSV: worst final dual gap and summed objective over pairs.
  double gap = 0;
  double objective = 0;
  std::string error;
  // Concatenated pair traces of the last repeat.
  std::vector<IterationRecord<double>> trace;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  bool all_converged() const;
};

// t_ref / t and (a_ref - a) / a_ref.
double speedup(double reference_time, double time);
double accuracy_delta(double reference_accuracy, double accuracy);

BenchmarkReport run_benchmark(const Dataset& train, const Dataset& test, const BenchmarkConfig& config);

void write_report_csv(const BenchmarkReport& report, std::ostream& out);

}  // namespace swapfw
