#include "swapfw/cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "swapfw/bench/benchmark.hpp"
#include "swapfw/errors.hpp"
#include "swapfw/io/libsvm.hpp"
#include "swapfw/io/model_io.hpp"
#include "swapfw/io/trace_csv.hpp"

namespace swapfw {

namespace {

// Flags shared by train and benchmark.
struct ProblemFlags {
  std::string data;
  std::string kernel = "rbf";
  std::string sigma2 = "auto";
  std::string gamma = "auto";
  double c = 1.0;
  double eps = 1e-6;
  std::size_t init_p = 20;
  std::string sample = "off";
  std::uint64_t seed = 0;
  std::uint64_t max_iter = 10'000'000;
  bool parallel = false;

  void attach(CLI::App& app) {
    app.add_option("--data", data, "training data in LIBSVM format")->required();
    app.add_option("--kernel", kernel, "rbf, poly2 or linear")->check(CLI::IsMember({"rbf", "poly2", "linear"}));
    app.add_option("--sigma2", sigma2, "RBF width, or auto for the mean squared pair distance");
    app.add_option("--gamma", gamma, "POLY2 scale, or auto for 1 / mean squared norm");
    app.add_option("-C", c, "regularization parameter")->required();
    app.add_option("--eps", eps, "dual gap tolerance");
    app.add_option("--init-p", init_p, "size of the random initial face");
    app.add_option("--sample", sample, "ascent search sample size, or off for the exact scan");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--max-iter", max_iter, "iteration limit per binary solve");
    app.add_flag("--parallel", parallel, "train one-vs-one pairs concurrently");
  }

  TrainConfig config(const Dataset& training) const {
    TrainConfig tc;
    tc.c = c;
    tc.init_points = init_p;
    tc.parallel = parallel;
    tc.solver.tolerance = eps;
    tc.solver.seed = seed;
    tc.solver.max_iterations = max_iter;
    if (sample == "off") {
      tc.solver.sample_size = 0;
    } else {
      std::uint64_t n = 0;
      std::istringstream in(sample);
      if (!(in >> n) || !in.eof() || n < 1) throw InvalidProblem("--sample takes a positive count or 'off'");
      tc.solver.sample_size = n;
    }
    tc.kernel.kind = parse_kernel_kind(kernel);
    std::mt19937_64 rng(seed);
    if (tc.kernel.kind == KernelKind::RBF)
      tc.kernel.parameter = sigma2 == "auto" ? default_sigma2(training, rng) : number(sigma2, "--sigma2");
    if (tc.kernel.kind == KernelKind::POLY2)
      tc.kernel.parameter = gamma == "auto" ? default_gamma(training) : number(gamma, "--gamma");
    tc.kernel.validate();
    return tc;
  }

  static double number(const std::string& text, const char* flag) {
    const auto v = parse_real(text);
    if (!v) throw InvalidProblem(std::string(flag) + " takes a number or 'auto'");
    return *v;
  }

  static double default_gamma(const Dataset& training) {
    double sum = 0;
    for (const SparseRow& row : training.rows) sum += row.squaredNorm();
    if (!(sum > 0)) throw DegenerateData("all examples are zero; gamma cannot be estimated");
    return static_cast<double>(training.rows.size()) / sum;
  }
};

std::vector<IterationRecord<double>> joined_traces(const TrainResult& result) {
  std::vector<IterationRecord<double>> trace;
  for (const auto& s : result.solves) trace.insert(trace.end(), s.trace.begin(), s.trace.end());
  return trace;
}

int cmd_train(const ProblemFlags& flags, const std::string& solver, const std::string& model_out,
              const std::string& trace_out, std::ostream& out, std::ostream& err) {
  const Dataset data = load_libsvm(flags.data);
  TrainConfig config = flags.config(data);
  config.solver.variant = parse_variant(solver);

  const auto start = std::chrono::steady_clock::now();
  const TrainResult result = train(data, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  save_model(result.ensemble, model_out);
  if (!trace_out.empty()) save_trace_csv(joined_traces(result), trace_out);

  std::uint64_t iterations = 0;
  double gap = 0;
  bool converged = true;
  for (const auto& s : result.solves) {
    iterations += s.iterations;
    gap = std::max(gap, s.report.dual_gap);
    converged = converged && s.termination == Termination::Converged;
  }
  out << "iterations=" << iterations << " time_s=" << format_real(seconds) << " support=" << result.ensemble.support()
      << " gap=" << format_real(gap) << '\n';
  if (!converged) {
    err << "error: solver stopped at the iteration limit before reaching the tolerance\n";
    return 1;
  }
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path, const std::string& out_path,
                std::ostream& out) {
  const OvoEnsemble model = load_model(model_path);
  const Dataset data = load_libsvm(data_path);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Error("cannot open '" + out_path + "' for writing");
  }
  std::ostream& labels = out_path.empty() ? out : file;
  std::size_t hits = 0;
  for (Index i = 0; i < data.size(); ++i) {
    const double label = model.predict(data.rows[i]).label;
    labels << format_real(label) << '\n';
    if (data.labeled() && label == data.labels[i]) ++hits;
  }
  if (!labels) throw Error("write failure");
  if (data.labeled())
    out << "accuracy=" << format_real(static_cast<double>(hits) / static_cast<double>(data.size())) << '\n';
  return 0;
}

int cmd_benchmark(const ProblemFlags& flags, const std::string& test_path, const std::string& variants,
                  const std::string& reference, int repeats, const std::string& report_path, std::string name,
                  std::ostream& out, std::ostream& err) {
  const Dataset data = load_libsvm(flags.data);
  const Dataset test = load_libsvm(test_path);
  BenchmarkConfig config;
  config.train = flags.config(data);
  config.reference = parse_variant(reference);
  config.repeats = repeats;
  if (name.empty()) name = std::filesystem::path(flags.data).stem().string();
  std::replace(name.begin(), name.end(), ',', '_');
  config.dataset = name;
  std::stringstream list(variants);
  for (std::string v; std::getline(list, v, ',');)
    if (!v.empty()) config.variants.push_back(parse_variant(v));

  const BenchmarkReport report = run_benchmark(data, test, config);
  {
    std::ofstream file(report_path);
    if (!file) throw Error("cannot open '" + report_path + "' for writing");
    write_report_csv(report, file);
  }
  for (const BenchmarkRow& row : report.rows)
    if (row.status != "error") save_trace_csv(row.trace, report_path + "." + to_string(row.variant) + ".trace.csv");
  write_report_csv(report, out);

  for (const BenchmarkRow& row : report.rows) {
    if (row.status == "error") err << "error: " << to_string(row.variant) << ": " << row.error << '\n';
    else if (row.status != "converged") err << "error: " << to_string(row.variant) << " did not converge\n";
  }
  return report.all_converged() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frank-Wolfe SVM training with SWAP steps", "swapfw"};
  app.require_subcommand(1);

  ProblemFlags train_flags;
  std::string solver = "swap";
  std::string model_out;
  std::string trace_out;
  auto* train_cmd = app.add_subcommand("train", "train a model");
  train_flags.attach(*train_cmd);
  train_cmd->add_option("--solver", solver, "fw, mfw, swap, swap2o or fcfw")
      ->check(CLI::IsMember({"fw", "mfw", "swap", "swap2o", "fcfw"}));
  train_cmd->add_option("--model-out", model_out, "model file to write")->required();
  train_cmd->add_option("--trace-out", trace_out, "iteration trace CSV to write");

  std::string model_path;
  std::string predict_data;
  std::string predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "predict labels with a trained model");
  predict_cmd->add_option("--model", model_path, "model file")->required();
  predict_cmd->add_option("--data", predict_data, "examples in LIBSVM format")->required();
  predict_cmd->add_option("--out", predict_out, "file for the predicted labels (default stdout)");

  ProblemFlags bench_flags;
  std::string test_path;
  std::string variants = "fw,mfw,swap,swap2o,fcfw";
  std::string reference = "fcfw";
  int repeats = 1;
  std::string report_path;
  std::string name;
  auto* bench_cmd = app.add_subcommand("benchmark", "compare solver variants on one problem");
  bench_flags.attach(*bench_cmd);
  bench_cmd->add_option("--test", test_path, "labeled test data")->required();
  bench_cmd->add_option("--variants", variants, "comma-separated solver variants");
  bench_cmd->add_option("--reference", reference, "variant used as the speedup baseline");
  bench_cmd->add_option("--repeats", repeats, "timed repetitions per variant")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--report", report_path, "report CSV to write")->required();
  bench_cmd->add_option("--name", name, "dataset name in the report (default: data file stem)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*train_cmd) return cmd_train(train_flags, solver, model_out, trace_out, out, err);
    if (*predict_cmd) return cmd_predict(model_path, predict_data, predict_out, out);
    return cmd_benchmark(bench_flags, test_path, variants, reference, repeats, report_path, name, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace swapfw
