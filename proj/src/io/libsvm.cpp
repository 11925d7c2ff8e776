#include "swapfw/io/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "swapfw/errors.hpp"

namespace swapfw {

namespace {

// Largest accepted 1-based feature index.
constexpr std::uint64_t kMaxFeatureIndex = 1u << 30;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::optional<double> parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty() || text.front() == '+') return {};
  double v;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(v)) return {};
  return v;
}

Dataset parse_libsvm(std::istream& in) {
  Dataset data;
  std::vector<std::vector<std::pair<Index, double>>> entries;
  std::optional<bool> labeled;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto fields = tokens(view);
    if (fields.empty()) continue;

    std::size_t first = 0;
    const bool has_label = fields.front().find(':') == std::string_view::npos;
    if (labeled && *labeled != has_label) throw ParseError(number, "labeled and unlabeled lines are mixed");
    labeled = has_label;
    if (has_label) {
      const auto label = parse_real(fields.front());
      if (!label) throw ParseError(number, "malformed label '" + std::string(fields.front()) + "'");
      data.labels.push_back(*label);
      first = 1;
    }

    auto& row = entries.emplace_back();
    for (std::size_t f = first; f < fields.size(); ++f) {
      const std::string_view tok = fields[f];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0)
        throw ParseError(number, "expected index:value, got '" + std::string(tok) + "'");
      std::uint64_t index = 0;
      const auto r = std::from_chars(tok.data(), tok.data() + colon, index);
      if (r.ec != std::errc() || r.ptr != tok.data() + colon || index < 1 || index > kMaxFeatureIndex)
        throw ParseError(number, "bad feature index in '" + std::string(tok) + "'");
      const auto value = parse_real(tok.substr(colon + 1));
      if (!value) throw ParseError(number, "bad feature value in '" + std::string(tok) + "'");
      const Index zero_based = static_cast<Index>(index - 1);
      if (!row.empty() && zero_based <= row.back().first) throw NonIncreasingIndex(number);
      row.emplace_back(zero_based, *value);
      data.features = std::max(data.features, zero_based + 1);
    }
  }
  if (in.bad()) throw Error("read failure");
  if (entries.empty()) throw EmptyDataset();

  data.rows.reserve(entries.size());
  for (const auto& row : entries) {
    SparseRow v(data.features);
    v.reserve(static_cast<Index>(row.size()));
    for (const auto& [i, x] : row) v.insertBack(i) = x;
    data.rows.push_back(std::move(v));
  }
  return data;
}

Dataset parse_libsvm(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in);
}

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_libsvm(in);
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    bool first = true;
    if (data.labeled()) {
      out << format_real(data.labels[r]);
      first = false;
    }
    for (SparseRow::InnerIterator it(data.rows[r]); it; ++it) {
      if (!first) out << ' ';
      out << it.index() + 1 << ':' << format_real(it.value());
      first = false;
    }
    out << '\n';
  }
  if (!out) throw Error("write failure");
}

}  // namespace swapfw
