#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fairrank/diagnostics.hpp"

using namespace fairrank;
using Catch::Matchers::WithinAbs;

TEST_CASE("laplace cdf reference points") {
  CHECK_THAT(diag::laplace_cdf(0.0, 1.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(diag::laplace_cdf(1.0, 1.0), WithinAbs(1.0 - 0.5 * std::exp(-1.0), 1e-15));
  CHECK_THAT(diag::laplace_cdf(-1.0, 1.0), WithinAbs(0.5 * std::exp(-1.0), 1e-15));
  CHECK_THAT(diag::laplace_cdf(2.0, 2.0), WithinAbs(1.0 - 0.5 * std::exp(-1.0), 1e-15));
}

TEST_CASE("ks critical value at alpha 0.01") {
  // ~1.63 / sqrt(n) for large n.
  CHECK_THAT(diag::ks_critical_value(100000, 0.01) * std::sqrt(100000.0),
             WithinAbs(1.6276, 1e-3));
}

TEST_CASE("verify_solver accepts the solver on random instances") {
  const auto audit = diag::verify_solver(60, 6, 2);
  CHECK(audit.trials == 60);
  CHECK(audit.mismatches == 0);
  CHECK(audit.pass());
}

TEST_CASE("verify_solver with zero trials passes vacuously") {
  const auto audit = diag::verify_solver(0, 7, 1);
  CHECK(audit.trials == 0);
  CHECK(audit.pass());
}

TEST_CASE("verify_solver validates max_n") {
  CHECK_THROWS_AS(diag::verify_solver(1, 8, 1), std::invalid_argument);
  CHECK_THROWS_AS(diag::verify_solver(1, 1, 1), std::invalid_argument);
}

TEST_CASE("verify_solver instance stream is seed-deterministic") {
  mpc::Prng a(mpc::mix_seed(9, 42)), b(mpc::mix_seed(9, 42));
  const auto pa = diag::random_problem(5, 0.8, a);
  const auto pb = diag::random_problem(5, 0.8, b);
  CHECK(pa.cost == pb.cost);
  CHECK(pa.gap == pb.gap);
}

TEST_CASE("noise audit passes at unit scale") {
  const auto audit = diag::noise_audit(1.0, 20000, 3);
  CHECK(audit.pass());
  CHECK(std::abs(audit.mean) < 0.05);
  CHECK_THAT(audit.variance, WithinAbs(2.0, 0.1 * 2.0));
}

TEST_CASE("noise audit with a small sample keeps a loose mean bound") {
  const auto audit = diag::noise_audit(1.0, 1000, 4);
  CHECK(std::abs(audit.mean) < 0.2);
}

TEST_CASE("noise audit validates parameters") {
  CHECK_THROWS_AS(diag::noise_audit(0.0, 2000, 1), std::invalid_argument);
  CHECK_THROWS_AS(diag::noise_audit(1.0, 999, 1), std::invalid_argument);
}
