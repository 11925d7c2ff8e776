#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "swapfw/solvers.hpp"

namespace swapfw {

inline constexpr const char* kTraceHeader = "k,step_kind,lambda,delta,gap,objective,active_size";

/// One row per record; reals in shortest round-trip form.
void write_trace_csv(const std::vector<IterationRecord<double>>& trace, std::ostream& out);
void save_trace_csv(const std::vector<IterationRecord<double>>& trace, const std::string& path);

/// Inverse of write_trace_csv. Vertex indices are not stored and read back as -1.
std::vector<IterationRecord<double>> read_trace_csv(std::istream& in);

}  // namespace swapfw
