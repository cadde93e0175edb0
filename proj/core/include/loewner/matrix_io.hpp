#pragma once

#include <iosfwd>
#include <string>

#include "loewner/matrix.hpp"

namespace loewner {

/// Plain-text matrix format: first line the dimension d, then d lines of
/// d whitespace-separated complex tokens ("1.5", "-2j", "0.5-0.25j").
/// Hermitian symmetrization is applied on load with the standard gate.
HermitianMatrix read_matrix(std::istream& in);
HermitianMatrix read_matrix_file(const std::string& path);

std::string write_matrix(const HermitianMatrix& m);
void write_matrix_file(const std::string& path, const HermitianMatrix& m);

}  // namespace loewner
