#include "core/fraction.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <system_error>

#include "core/error.hpp"

namespace stodi {

std::optional<Fraction> rationalize(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  bool neg = x < 0;
  double v = neg ? -x : x;

  // Walk the continued-fraction convergents p/q of v; the first convergent
  // within tol has the smallest denominator among all approximations that close.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    double a_floor = std::floor(frac);
    if (a_floor > static_cast<double>(max_den)) break;
    auto a = static_cast<std::int64_t>(a_floor);
    std::int64_t p2 = a * p1 + p0;
    std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    if (std::abs(v - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) {
      // Tighten: the last partial quotient can often be reduced while staying
      // within tol, giving a strictly smaller denominator.
      std::int64_t lo = (iter == 0) ? a : 1, hi = a;
      std::int64_t best_p = p2, best_q = q2;
      while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        std::int64_t pm = mid * p1 + p0;
        std::int64_t qm = mid * q1 + q0;
        if (qm > 0 && std::abs(v - static_cast<double>(pm) / static_cast<double>(qm)) <= tol) {
          best_p = pm;
          best_q = qm;
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      return Fraction{neg ? -best_p : best_p, best_q};
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - a_floor;
    if (rem <= 0) break;
    frac = 1.0 / rem;
    if (!std::isfinite(frac)) break;
  }
  return std::nullopt;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_probability(double x, bool force_decimal) {
  if (!force_decimal) {
    if (auto f = rationalize(x)) {
      if (f->den == 1) return std::to_string(f->num);
      return std::to_string(f->num) + "/" + std::to_string(f->den);
    }
  }
  return format_double(x);
}

double parse_probability(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    const char* nb = text.data();
    const char* ne = text.data() + slash;
    const char* db = text.data() + slash + 1;
    const char* de = text.data() + text.size();
    std::int64_t num = 0, den = 0;
    auto r1 = std::from_chars(nb, ne, num);
    auto r2 = std::from_chars(db, de, den);
    if (r1.ec != std::errc{} || r1.ptr != ne || r2.ec != std::errc{} || r2.ptr != de || den == 0)
      throw_parse("invalid fraction literal: '" + text + "'");
    return static_cast<double>(num) / static_cast<double>(den);
  }
  const char* b = text.data();
  const char* e = text.data() + text.size();
  double v = 0;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc{} || r.ptr != e)
    throw_parse("invalid number literal: '" + text + "'");
  return v;
}

}  // namespace stodi
