#include "loewner/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "loewner/errors.hpp"

namespace loewner {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
  if (token.empty()) throw ParseError("empty numeric token");
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError("bad numeric token: '" + std::string(token) + "'");
  return value;
}

std::string format_complex(std::complex<double> value) {
  if (value.imag() == 0.0) return format_double(value.real());
  if (value.real() == 0.0) return format_double(value.imag()) + "j";
  std::string out = format_double(value.real());
  if (!(value.imag() < 0.0)) out += '+';
  out += format_double(value.imag());
  out += 'j';
  return out;
}

std::complex<double> parse_complex(std::string_view token) {
  if (token.empty()) throw ParseError("empty complex token");
  if (token.back() != 'j') return {parse_double(token), 0.0};

  std::string_view body = token.substr(0, token.size() - 1);
  if (body.empty()) throw ParseError("bad complex token: '" + std::string(token) + "'");
  // Find the sign separating real and imaginary parts; skip a leading sign
  // and signs that belong to an exponent.
  size_t sep = std::string_view::npos;
  for (size_t i = 1; i < body.size(); ++i) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
      sep = i;  // keep the last candidate: it starts the imaginary part
  }
  if (sep == std::string_view::npos) return {0.0, parse_double(body)};
  const std::string_view re = body.substr(0, sep);
  std::string_view im = body.substr(sep);
  if (im == "+") return {parse_double(re), 1.0};
  if (im == "-") return {parse_double(re), -1.0};
  return {parse_double(re), parse_double(im)};
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace loewner
