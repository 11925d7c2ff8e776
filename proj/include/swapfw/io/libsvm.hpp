#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "swapfw/svm/dataset.hpp"

namespace swapfw {

/// Shortest decimal that reads back to the same double.
std::string format_real(double v);

/// Parses the whole of `text` as a finite real; a leading '+' is accepted.
std::optional<double> parse_real(std::string_view text);

/// Reads `<label> <idx>:<val> ...` lines with 1-based, strictly increasing
/// indices. Blank lines and '#' comments are skipped. Lines may omit the label
/// only if every line does.
///
/// Throws ParseError (with the line), NonIncreasingIndex or EmptyDataset.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm(std::string_view text);
Dataset load_libsvm(const std::string& path);

void write_libsvm(const Dataset& data, std::ostream& out);

}  // namespace swapfw
