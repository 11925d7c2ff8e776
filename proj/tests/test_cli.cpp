#include "doctest.h"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "synthetic.hpp"
#include "swapfw/bench/benchmark.hpp"
#include "swapfw/cli/cli.hpp"
#include "swapfw/io/libsvm.hpp"
#include "swapfw/io/model_io.hpp"
#include "swapfw/io/trace_csv.hpp"

using namespace swapfw;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "swapfw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_data(const std::string& name, const Dataset& d) {
  const std::string path = fixtures::tmp_path(name);
  std::ofstream f(path);
  write_libsvm(d, f);
  return path;
}

std::map<std::string, std::string> fields(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  for (std::string kv; in >> kv;) {
    const auto eq = kv.find('=');
    if (eq != std::string::npos) out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("train command") {
  const std::string data = write_data("toy.svm", synthetic::two_gaussians(60, 1));
  const std::string model = fixtures::tmp_path("toy.model");
  const std::string trace = fixtures::tmp_path("toy.trace.csv");
  const Run r = cli({"train", "--data", data, "--solver", "swap", "--kernel", "rbf", "--sigma2", "auto", "-C", "16",
                     "--eps", "1e-6", "--model-out", model, "--trace-out", trace});
  CHECK(r.code == 0);
  const auto f = fields(r.out);
  CHECK(f.count("iterations"));
  CHECK(f.count("time_s"));
  CHECK(f.count("support"));
  REQUIRE(f.count("gap"));
  CHECK(std::stod(f.at("gap")) <= 1e-6);
  CHECK(load_model(model).models.size() == 1);
  std::ifstream t(trace);
  CHECK(read_trace_csv(t).size() == std::stoull(f.at("iterations")));

  const Run missing = cli({"train", "--solver", "swap", "-C", "1", "--model-out", model});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("--data") != std::string::npos);

  CHECK(cli({"train", "--data", data, "--solver", "bogus", "-C", "1", "--model-out", model}).code == 1);
  CHECK(cli({"train", "--data", fixtures::tmp_path("absent.svm"), "-C", "1", "--model-out", model}).code == 1);
  CHECK(cli({"train", "--data", data, "-C", "-1", "--model-out", model}).code == 1);
  CHECK(cli({"train", "--data", data, "-C", "1", "--sample", "zero", "--model-out", model}).code == 1);
  CHECK(cli({"train", "--data", data, "-C", "1", "--max-iter", "1", "--init-p", "1", "--model-out", model}).code ==
        1);
  CHECK(cli({"train", "--data", data, "--kernel", "poly2", "-C", "1", "--model-out", model}).code == 0);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({}).code == 1);
}

TEST_CASE("train command: sampling covering every index matches the exact scan") {
  const std::string data = write_data("hundred.svm", synthetic::two_gaussians(100, 2, 1.0));
  const std::string model = fixtures::tmp_path("hundred.model");
  auto summary = [&](const std::string& sample) {
    const Run r = cli({"train", "--data", data, "--solver", "swap", "-C", "16", "--seed", "5", "--sample", sample,
                       "--model-out", model});
    CHECK(r.code == 0);
    auto f = fields(r.out);
    f.erase("time_s");
    return f;
  };
  const auto off = summary("off");
  CHECK(off == summary("999999"));
  CHECK(off.size() == 3);
}

TEST_CASE("predict command") {
  const Dataset train_set = synthetic::two_gaussians(80, 3);
  const std::string data = write_data("pred_train.svm", train_set);
  const std::string model = fixtures::tmp_path("pred.model");
  REQUIRE(cli({"train", "--data", data, "-C", "4", "--model-out", model}).code == 0);

  const std::string test = write_data("pred_test.svm", synthetic::two_gaussians(40, 4));
  const std::string labels = fixtures::tmp_path("pred.labels");
  const Run r = cli({"predict", "--model", model, "--data", test, "--out", labels});
  CHECK(r.code == 0);
  const auto f = fields(r.out);
  REQUIRE(f.count("accuracy"));
  const double acc = std::stod(f.at("accuracy"));
  CHECK(acc >= 0);
  CHECK(acc <= 1);
  std::istringstream predicted(read_file(labels));
  int lines = 0;
  for (std::string l; std::getline(predicted, l);) {
    CHECK((l == "1" || l == "-1"));
    ++lines;
  }
  CHECK(lines == 40);

  Dataset unlabeled = synthetic::two_gaussians(5, 6);
  unlabeled.labels.clear();
  const Run u = cli({"predict", "--model", model, "--data", write_data("pred_unlabeled.svm", unlabeled)});
  CHECK(u.code == 0);
  CHECK(u.out.find("accuracy") == std::string::npos);
  CHECK(csv(u.out).size() == 5);

  SvmModel one;
  one.kernel = KernelSpec::rbf(1);
  one.weights = {1};
  one.signs = {-1};
  one.positive_class = 7;
  one.negative_class = 3;
  SparseRow x(2);
  x.insert(0) = 0.25;
  x.insert(1) = -4;
  one.vectors = {x};
  const std::string single = fixtures::tmp_path("single.model");
  save_model(OvoEnsemble{{3, 7}, {one}}, single);
  Dataset at_support;
  at_support.rows = {x};
  at_support.features = 2;
  const Run s = cli({"predict", "--model", single, "--data", write_data("support.svm", at_support)});
  CHECK(s.code == 0);
  CHECK(s.out == "3\n");

  CHECK(cli({"predict", "--model", fixtures::tmp_path("absent.model"), "--data", test}).code == 1);
  CHECK(cli({"predict", "--model", data, "--data", test}).code == 1);
}

TEST_CASE("benchmark metrics") {
  CHECK(speedup(10, 2) == 5.0);
  CHECK(accuracy_delta(0.9, 0.9) == 0.0);
}

TEST_CASE("benchmark command") {
  const std::string data = write_data("bench_train.svm", synthetic::two_gaussians(200, 8));
  const std::string test = write_data("bench_test.svm", synthetic::two_gaussians(200, 9));
  const std::string report = fixtures::tmp_path("bench.csv");
  const std::vector<std::string> args = {"benchmark", "--data", data, "--test", test, "--variants", "fw,swap",
                                         "--reference", "fcfw", "--repeats", "1", "--seed", "2", "-C", "16",
                                         "--report", report};
  const Run r = cli(args);
  CHECK(r.code == 0);
  const auto rows = csv(read_file(report));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"dataset", "variant", "status", "iterations", "time_s", "accuracy",
                                            "support", "speedup", "acc_delta"});
  CHECK(rows[1][0] == "bench_train");
  CHECK(rows[1][1] == "fw");
  CHECK(rows[2][1] == "swap");
  CHECK(rows[3][1] == "fcfw");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k][2] == "converged");
    CHECK(std::stod(rows[k][7]) > 0);
    CHECK(std::stod(rows[k][5]) >= 0.95);
  }
  CHECK(std::abs(std::stod(rows[1][5]) - std::stod(rows[2][5])) <= 0.005);
  CHECK(std::stod(rows[3][8]) == 0.0);
  std::ifstream fw_trace(report + ".fw.trace.csv");
  CHECK(read_trace_csv(fw_trace).size() > 0);

  // Identical flags reproduce every column except the wall-time ones.
  const Run again = cli(args);
  CHECK(again.code == 0);
  auto strip = [](std::vector<std::vector<std::string>> t) {
    for (auto& row : t)
      if (row.size() == 9) row[4] = row[7] = "";
    return t;
  };
  CHECK(strip(csv(read_file(report))) == strip(rows));

  // A variant that cannot converge fails the run but still gets a row.
  std::vector<std::string> capped = args;
  capped.insert(capped.end(), {"--max-iter", "2", "--init-p", "1"});
  const Run fail = cli(capped);
  CHECK(fail.code == 1);
  const auto partial = csv(read_file(report));
  REQUIRE(partial.size() == 4);
  CHECK(partial[1][2] == "max_iterations");

  // Medians over repeats; the fw variant is left out to keep this quick.
  std::vector<std::string> repeated = args;
  repeated[6] = "mfw,swap,swap2o";
  repeated[10] = "3";
  CHECK(cli(repeated).code == 0);
  CHECK(csv(read_file(report)).size() == 5);

  std::vector<std::string> unknown = args;
  unknown[6] = "fw,best";
  CHECK(cli(unknown).code == 1);
}
