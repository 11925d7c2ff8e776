#include "swapfw/io/trace_csv.hpp"

#include <fstream>
#include <sstream>

#include "swapfw/errors.hpp"
#include "swapfw/io/libsvm.hpp"

namespace swapfw {

namespace {

StepKind parse_step_kind(const std::string& name, std::size_t line) {
  for (StepKind k : {StepKind::Toward, StepKind::SwapAdd, StepKind::SwapDrop, StepKind::Away, StepKind::AwayDrop})
    if (name == to_string(k)) return k;
  throw ParseError(line, "unknown step kind '" + name + "'");
}

}  // namespace

void write_trace_csv(const std::vector<IterationRecord<double>>& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.iteration << ',' << to_string(r.step.kind) << ',' << format_real(r.step.lambda) << ','
        << format_real(r.step.delta) << ',' << format_real(r.gap_before) << ',' << format_real(r.objective_after)
        << ',' << r.active_size_after << '\n';
  }
  if (!out) throw Error("write failure");
}

void save_trace_csv(const std::vector<IterationRecord<double>>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_trace_csv(trace, out);
}

std::vector<IterationRecord<double>> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw ParseError(1, "missing trace header");
  std::vector<IterationRecord<double>> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw ParseError(number, "expected 7 columns");
    auto real = [&](const std::string& s) {
      const auto v = parse_real(s);
      if (!v) throw ParseError(number, "bad number '" + s + "'");
      return *v;
    };
    auto whole = [&](const std::string& s) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty() || s.front() == '-') throw ParseError(number, "bad count '" + s + "'");
      return v;
    };
    IterationRecord<double> r;
    r.iteration = whole(cells[0]);
    r.step.kind = parse_step_kind(cells[1], number);
    r.step.lambda = real(cells[2]);
    r.step.delta = real(cells[3]);
    r.gap_before = real(cells[4]);
    r.objective_after = real(cells[5]);
    r.active_size_after = whole(cells[6]);
    out.push_back(r);
  }
  return out;
}

}  // namespace swapfw
