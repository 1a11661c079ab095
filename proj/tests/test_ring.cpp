#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fairrank/ring.hpp"

using fairrank::FixedPointCodec;
using fairrank::RingElement;

TEST_CASE("encode maps reference points") {
  const FixedPointCodec codec(20);
  CHECK(codec.encode(0.0).v == 0);
  CHECK(codec.encode(1.0).v == 1048576);                      // 2^20
  CHECK(codec.encode(-1.0).v == 18446744073708503040ULL);     // 2^64 - 2^20
}

TEST_CASE("decode inverts encode on exact dyadics") {
  const FixedPointCodec codec(20);
  CHECK(codec.decode(RingElement{1048576}) == 1.0);
  CHECK(codec.decode(RingElement{18446744073708503040ULL}) == -1.0);
  CHECK(codec.decode(RingElement{524288}) == 0.5);
}

TEST_CASE("ring addition wraps") {
  CHECK((RingElement{0xffffffffffffffffULL} + RingElement{1}) == RingElement{0});
  const RingElement a{0x123456789abcdef0ULL};
  CHECK((a + -a) == RingElement{0});
}

TEST_CASE("addition is homomorphic on exact dyadics") {
  const FixedPointCodec codec(20);
  CHECK(codec.encode(0.25) + codec.encode(0.5) == codec.encode(0.75));
}

TEST_CASE("roundtrip error stays below half a unit in the last place") {
  const FixedPointCodec codec(20);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
  const double half_ulp = 0.5 * codec.resolution() * (1 + 1e-9);
  for (int i = 0; i < 20000; ++i) {
    const double x = dist(rng);
    CHECK(std::abs(codec.decode(codec.encode(x)) - x) <= half_ulp);
  }
}

TEST_CASE("encode negation symmetry") {
  const FixedPointCodec codec(20);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 5000.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = dist(rng);
    CHECK(codec.encode(-x) == -codec.encode(x));
  }
}

TEST_CASE("sum of encodings tracks the real sum") {
  const FixedPointCodec codec(20);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  const double tol = 2.0 * codec.resolution();
  for (int i = 0; i < 5000; ++i) {
    const double a = dist(rng), b = dist(rng);
    const double got = codec.decode(codec.encode(a) + codec.encode(b));
    CHECK(std::abs(got - (a + b)) <= tol);
  }
}

TEST_CASE("ring addition is associative and commutative bit-exactly") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const RingElement a{rng()}, b{rng()}, c{rng()};
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
  }
}

TEST_CASE("out-of-range values are rejected") {
  const FixedPointCodec codec(20);
  const double limit = codec.range_limit();
  CHECK_THROWS_AS(codec.encode(limit), std::out_of_range);
  CHECK_THROWS_AS(codec.encode(-limit * 1.5), std::out_of_range);
  CHECK_THROWS_AS(codec.encode(std::nan("")), std::out_of_range);
  CHECK_NOTHROW(codec.encode(-limit));
  CHECK_NOTHROW(codec.encode(limit * 0.999));
}

TEST_CASE("codec validates fractional bit count") {
  CHECK_THROWS_AS(FixedPointCodec(0), std::invalid_argument);
  CHECK_THROWS_AS(FixedPointCodec(63), std::invalid_argument);
  CHECK_NOTHROW(FixedPointCodec(1));
  CHECK_NOTHROW(FixedPointCodec(62));
}
