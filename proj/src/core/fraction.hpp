#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace stodi {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// Smallest-denominator p/q with q <= max_den and |x - p/q| <= tol, if any.
// Continued-fraction convergents, so "2/3" is recovered from 0.6666666666666666.
std::optional<Fraction> rationalize(double x, std::int64_t max_den = 1000000, double tol = 1e-9);

// Renders a probability the way tables in the literature print them: a reduced
// fraction when one fits within tolerance ("2/3", "1", "0"), else a decimal
// with enough digits to round-trip. force_decimal bypasses the fraction form.
std::string format_probability(double x, bool force_decimal = false);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double x);

// Accepts "p/q" or a decimal literal; throws Error(Parse) on junk.
double parse_probability(const std::string& text);

}  // namespace stodi
