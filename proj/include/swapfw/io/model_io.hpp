#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "swapfw/svm/train.hpp"

namespace swapfw {

/// Text model format:
///
///   swapfw-model 1
///   kernel rbf|poly2|linear
///   sigma2 <x>            (rbf) or gamma <x> (poly2); absent for linear
///   C <x>
///   classes <k> <label>...
///   pair <positive> <negative> <support count>      once per binary model
///   <alpha> <y> <idx>:<val> ...                     once per support vector
///   end
///
/// Feature indices are 1-based as in LIBSVM files. Reals use shortest
/// round-trip decimals, so a read model predicts bit for bit like the
/// written one.
void write_model(const OvoEnsemble& model, std::ostream& out);

/// Fails closed: FormatVersionMismatch on an unknown header, ParseError on
/// anything malformed or missing, including a missing `end` line.
OvoEnsemble read_model(std::istream& in);

void save_model(const OvoEnsemble& model, const std::string& path);
OvoEnsemble load_model(const std::string& path);

}  // namespace swapfw
