#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace loewner {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Strict double parser: the whole token must be consumed.
double parse_double(std::string_view token);

/// Complex token of the form "1.5", "-2j", "1.5+2j", "3-0.25j".
std::string format_complex(std::complex<double> value);
std::complex<double> parse_complex(std::string_view token);

std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace loewner
