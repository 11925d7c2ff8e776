#include "swapfw/io/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "swapfw/errors.hpp"
#include "swapfw/io/libsvm.hpp"

namespace swapfw {

namespace {

constexpr const char* kHeader = "swapfw-model 1";

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line split on spaces; throws if the stream ends first.
  bool raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::vector<std::string> next(const char* expected) {
    std::string line;
    if (!raw(line)) throw ParseError(number_ + 1, std::string("truncated model, expected ") + expected);
    std::istringstream words(line);
    std::vector<std::string> out;
    for (std::string w; words >> w;) out.push_back(w);
    return out;
  }

  std::vector<std::string> keyed(const char* key, std::size_t min_fields) {
    auto fields = next(key);
    if (fields.empty() || fields.front() != key || fields.size() < min_fields)
      throw ParseError(number_, std::string("expected '") + key + "' line");
    return fields;
  }

  double real(const std::string& text) const {
    const auto v = parse_real(text);
    if (!v) throw ParseError(number_, "bad number '" + text + "'");
    return *v;
  }

  std::uint64_t count(const std::string& text) const {
    std::uint64_t v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) throw ParseError(number_, "bad count '" + text + "'");
    return v;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace

void write_model(const OvoEnsemble& model, std::ostream& out) {
  if (model.models.empty()) throw InvalidProblem("model has no binary classifiers");
  const SvmModel& first = model.models.front();
  out << kHeader << '\n';
  out << "kernel " << to_string(first.kernel.kind) << '\n';
  if (first.kernel.kind == KernelKind::RBF) out << "sigma2 " << format_real(first.kernel.parameter) << '\n';
  if (first.kernel.kind == KernelKind::POLY2) out << "gamma " << format_real(first.kernel.parameter) << '\n';
  out << "C " << format_real(first.c) << '\n';
  out << "classes " << model.classes.size();
  for (double c : model.classes) out << ' ' << format_real(c);
  out << '\n';
  for (const SvmModel& m : model.models) {
    out << "pair " << format_real(m.positive_class) << ' ' << format_real(m.negative_class) << ' ' << m.support()
        << '\n';
    for (std::size_t i = 0; i < m.support(); ++i) {
      out << format_real(m.weights[i]) << ' ' << format_real(m.signs[i]);
      for (SparseRow::InnerIterator it(m.vectors[i]); it; ++it)
        out << ' ' << it.index() + 1 << ':' << format_real(it.value());
      out << '\n';
    }
  }
  out << "end\n";
  if (!out) throw Error("write failure");
}

OvoEnsemble read_model(std::istream& in) {
  LineReader lines(in);
  std::string header;
  if (!lines.raw(header)) throw FormatVersionMismatch("empty model file");
  if (header != kHeader) throw FormatVersionMismatch("unknown model header '" + header.substr(0, 64) + "'");

  KernelSpec kernel;
  {
    const auto f = lines.keyed("kernel", 2);
    try {
      kernel.kind = parse_kernel_kind(f[1]);
    } catch (const InvalidProblem&) {
      throw ParseError(lines.number(), "unknown kernel '" + f[1] + "'");
    }
  }
  if (kernel.kind == KernelKind::RBF) kernel.parameter = lines.real(lines.keyed("sigma2", 2)[1]);
  if (kernel.kind == KernelKind::POLY2) kernel.parameter = lines.real(lines.keyed("gamma", 2)[1]);
  const double c = lines.real(lines.keyed("C", 2)[1]);
  if (!(c > 0)) throw ParseError(lines.number(), "C must be positive");
  try {
    kernel.validate();
  } catch (const InvalidProblem& e) {
    throw ParseError(lines.number(), e.what());
  }

  OvoEnsemble model;
  {
    const auto f = lines.keyed("classes", 2);
    const std::uint64_t k = lines.count(f[1]);
    if (k < 2 || f.size() != k + 2) throw ParseError(lines.number(), "class count does not match the labels");
    for (std::size_t i = 2; i < f.size(); ++i) model.classes.push_back(lines.real(f[i]));
    for (std::size_t i = 0; i < model.classes.size(); ++i)
      for (std::size_t j = i + 1; j < model.classes.size(); ++j)
        if (model.classes[i] == model.classes[j]) throw ParseError(lines.number(), "duplicate class label");
  }

  const std::size_t pairs = model.classes.size() * (model.classes.size() - 1) / 2;
  auto known = [&](double label) {
    return std::find(model.classes.begin(), model.classes.end(), label) != model.classes.end();
  };
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto f = lines.keyed("pair", 4);
    if (f.size() != 4) throw ParseError(lines.number(), "pair line needs two labels and a count");
    SvmModel m;
    m.kernel = kernel;
    m.c = c;
    m.positive_class = lines.real(f[1]);
    m.negative_class = lines.real(f[2]);
    if (!known(m.positive_class) || !known(m.negative_class) || m.positive_class == m.negative_class)
      throw ParseError(lines.number(), "pair labels are not two distinct classes");
    for (const SvmModel& other : model.models)
      if (std::minmax(other.positive_class, other.negative_class) == std::minmax(m.positive_class, m.negative_class))
        throw ParseError(lines.number(), "duplicate class pair");
    const std::uint64_t n = lines.count(f[3]);
    if (n < 1) throw ParseError(lines.number(), "a model needs at least one support vector");
    for (std::uint64_t s = 0; s < n; ++s) {
      const auto sv = lines.next("a support vector");
      if (sv.size() < 2) throw ParseError(lines.number(), "support vector needs a weight and a label");
      const double alpha = lines.real(sv[0]);
      const double y = lines.real(sv[1]);
      if (!(alpha > 0)) throw ParseError(lines.number(), "support weight must be positive");
      if (y != 1.0 && y != -1.0) throw ParseError(lines.number(), "support label must be +1 or -1");
      std::vector<std::pair<Index, double>> entries;
      for (std::size_t t = 2; t < sv.size(); ++t) {
        const auto colon = sv[t].find(':');
        if (colon == std::string::npos || colon == 0) throw ParseError(lines.number(), "expected index:value");
        const std::uint64_t index = lines.count(sv[t].substr(0, colon));
        if (index < 1 || index > (1u << 30)) throw ParseError(lines.number(), "feature index out of range");
        const Index zero_based = static_cast<Index>(index - 1);
        if (!entries.empty() && zero_based <= entries.back().first) throw NonIncreasingIndex(lines.number());
        entries.emplace_back(zero_based, lines.real(sv[t].substr(colon + 1)));
      }
      SparseRow row(entries.empty() ? 0 : entries.back().first + 1);
      for (const auto& [i, x] : entries) row.insertBack(i) = x;
      m.weights.push_back(alpha);
      m.signs.push_back(y);
      m.vectors.push_back(std::move(row));
    }
    model.models.push_back(std::move(m));
  }
  const auto tail = lines.next("'end'");
  if (tail.size() != 1 || tail.front() != "end") throw ParseError(lines.number(), "expected 'end'");
  return model;
}

void save_model(const OvoEnsemble& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_model(model, out);
}

OvoEnsemble load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_model(in);
}

}  // namespace swapfw
