#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/fraction.hpp"
#include "core/rng.hpp"

using namespace stodi;

TEST_CASE("rationalize recovers simple fractions from their double form") {
  auto f = rationalize(2.0 / 3.0);
  REQUIRE(f.has_value());
  CHECK(f->num == 2);
  CHECK(f->den == 3);

  f = rationalize(0.5);
  REQUIRE(f.has_value());
  CHECK(f->num == 1);
  CHECK(f->den == 2);

  f = rationalize(1.0 / 3.0);
  REQUIRE(f.has_value());
  CHECK(f->num == 1);
  CHECK(f->den == 3);

  f = rationalize(1.0);
  REQUIRE(f.has_value());
  CHECK(f->num == 1);
  CHECK(f->den == 1);

  f = rationalize(0.0);
  REQUIRE(f.has_value());
  CHECK(f->num == 0);
  CHECK(f->den == 1);
}

TEST_CASE("rationalize returns the smallest denominator within tolerance") {
  // 0.333333 differs from 1/3 by 3.3e-7, far outside the 1e-9 tolerance, so
  // 1/3 is not admissible. Among the mediants m/(3m+1) the distance to
  // 333333/10^6 is |333333-m| / (10^6 (3m+1)), which first drops to 1e-9 at
  // m = 332336: 332336/997009 misses by 9.9999e-10 and every smaller
  // denominator misses by more.
  auto f = rationalize(0.333333);
  REQUIRE(f.has_value());
  CHECK(f->num == 332336);
  CHECK(f->den == 997009);
  CHECK(std::abs(static_cast<double>(f->num) / static_cast<double>(f->den) - 0.333333) <= 1e-9);

  // 5/7 sits well inside the tolerance and must not be replaced by anything
  // coarser.
  f = rationalize(5.0 / 7.0);
  REQUIRE(f.has_value());
  CHECK(f->num == 5);
  CHECK(f->den == 7);
}

TEST_CASE("rationalize respects the denominator cap") {
  // 2^-21 is below 1/10^6, so no positive fraction with denominator <= 10^6
  // comes within 1e-9 of it, and 0 itself misses by 4.8e-7.
  CHECK_FALSE(rationalize(1.0 / 2097152.0).has_value());
}

TEST_CASE("format_probability prints fractions, decimals on request") {
  CHECK(format_probability(2.0 / 3.0) == "2/3");
  CHECK(format_probability(1.0 / 3.0) == "1/3");
  CHECK(format_probability(0.5) == "1/2");
  CHECK(format_probability(1.0) == "1");
  CHECK(format_probability(0.0) == "0");
  CHECK(format_probability(0.5, /*force_decimal=*/true) == "0.5");
  CHECK(format_probability(2.0 / 3.0, true) == "0.6666666666666666");
}

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng = make_engine(7);
  for (int i = 0; i < 200; ++i) {
    double x = uniform01(rng);
    CHECK(parse_probability(format_double(x)) == x);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("parse_probability accepts fractions and decimals, rejects junk") {
  CHECK(parse_probability("2/3") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(parse_probability("0.25") == 0.25);
  CHECK(parse_probability("1") == 1.0);
  CHECK_THROWS_AS(parse_probability("abc"), Error);
  CHECK_THROWS_AS(parse_probability("1/0"), Error);
  CHECK_THROWS_AS(parse_probability(""), Error);
  CHECK_THROWS_AS(parse_probability("2/"), Error);
}

TEST_CASE("formatted fractions parse back within tolerance") {
  std::mt19937_64 rng = make_engine(11);
  for (int i = 0; i < 200; ++i) {
    double x = uniform01(rng);
    double back = parse_probability(format_probability(x));
    CHECK(std::abs(back - x) <= 1e-9);
  }
}
