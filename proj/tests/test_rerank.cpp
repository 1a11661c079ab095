#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fairrank/diagnostics.hpp"
#include "fairrank/rerank.hpp"

using namespace fairrank;
using Catch::Matchers::WithinAbs;

namespace {

RerankProblem two_item_problem(double theta) {
  const std::vector<double> gap{0.0, 0.0};
  const std::vector<double> rel{0.8, 0.2};
  const std::vector<double> attn{2.0 / 3.0, 1.0 / 3.0};
  const std::vector<int> ranking{0, 1};
  return build_problem(gap, rel, attn, theta, 2, ranking);
}

bool is_bijection(const std::vector<int>& perm) {
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != int(i)) return false;
  return true;
}

}  // namespace

TEST_CASE("build_problem computes the reference cost matrix") {
  const auto p = two_item_problem(0.0);
  CHECK_THAT(p.cost[0 * 2 + 0], WithinAbs(0.13333, 1e-4));
  CHECK_THAT(p.cost[0 * 2 + 1], WithinAbs(0.46667, 1e-4));
  CHECK_THAT(p.cost[1 * 2 + 0], WithinAbs(0.46667, 1e-4));
  CHECK_THAT(p.cost[1 * 2 + 1], WithinAbs(0.13333, 1e-4));
  CHECK(p.dcg_floor == 0.0);
}

TEST_CASE("build_problem validates its inputs") {
  const std::vector<double> v2{0.0, 0.0};
  const std::vector<double> v3{0.0, 0.0, 0.0};
  const std::vector<int> rank2{0, 1};
  CHECK_THROWS_AS(build_problem(v2, v3, v2, 0.5, 2, rank2), std::invalid_argument);
  CHECK_THROWS_AS(build_problem(v2, v2, v2, 1.5, 2, rank2), std::invalid_argument);
  CHECK_THROWS_AS(build_problem(v2, v2, v2, -0.1, 2, rank2), std::invalid_argument);
  CHECK_THROWS_AS(build_problem(v2, v2, v2, 0.5, 0, rank2), std::invalid_argument);
  CHECK_THROWS_AS(build_problem(v2, v2, v2, 0.5, 3, rank2), std::invalid_argument);
}

TEST_CASE("two-item instance solves to the identity") {
  const auto p = two_item_problem(0.0);
  const auto rr = solve(p);
  CHECK(rr.position_to_item == std::vector<int>{0, 1});
  CHECK_THAT(rr.cost, WithinAbs(0.26667, 1e-4));
  const auto exact = brute_force(p);
  CHECK(exact.position_to_item == rr.position_to_item);
  CHECK(exact.cost == rr.cost);
}

TEST_CASE("uniform relevance with zero gap returns the lexicographic minimum") {
  for (const double theta : {0.0, 0.8, 1.0}) {
    const std::size_t n = 5;
    const std::vector<double> gap(n, 0.0);
    const std::vector<double> rel(n, 1.0 / double(n));
    std::vector<int> ranking(n);
    std::iota(ranking.begin(), ranking.end(), 0);
    const auto p = build_problem(gap, rel, attention_weights(n), theta, n, ranking);
    const auto rr = solve(p);
    CHECK(rr.position_to_item == ranking);
  }
}

TEST_CASE("solver matches the factorial oracle on random instances") {
  mpc::Prng rng(2024);
  for (const double theta : {0.0, 0.8, 1.0}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng() % 6;  // up to 7
      const auto p = diag::random_problem(n, theta, rng);
      const auto fast = solve(p);
      const auto exact = brute_force(p);
      REQUIRE_THAT(fast.cost, WithinAbs(exact.cost, 1e-9));
      REQUIRE(fast.position_to_item == exact.position_to_item);
    }
  }
}

TEST_CASE("theta one with distinct relevance forces a dcg-maximal order") {
  mpc::Prng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = diag::random_problem(3, 1.0, rng);
    const auto rr = solve(p);
    // The result must reach the floor, which theta=1 pins to the maximum.
    CHECK(dcg_at_k(p.relevance, rr.position_to_item, p.k) >=
          p.dcg_floor - kDcgFloorTolerance);
  }
}

TEST_CASE("solutions are feasible bijections") {
  mpc::Prng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 9;  // up to 10
    const auto p = diag::random_problem(n, 0.8, rng);
    const auto rr = solve(p);
    CHECK(is_bijection(rr.position_to_item));
    CHECK(dcg_at_k(p.relevance, rr.position_to_item, p.k) >=
          p.dcg_floor - kDcgFloorTolerance);
  }
}

TEST_CASE("scaling the whole cost matrix never changes the minimizer") {
  mpc::Prng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 5;  // up to 6
    auto p = diag::random_problem(n, 0.8, rng);
    const auto base = brute_force(p);
    auto scaled = p;
    for (auto& c : scaled.cost) c *= 3.0;
    CHECK(brute_force(scaled).position_to_item == base.position_to_item);
    CHECK(solve(scaled).position_to_item == base.position_to_item);
  }
}

TEST_CASE("apply_scaling modes") {
  const std::vector<double> gap{1.0, -2.0, 0.5};

  CHECK(apply_scaling(gap, ScalingMode::none, 0.0, 0.0) == gap);
  CHECK(apply_scaling(gap, ScalingMode::argmin_preserving, 0.0, 0.0) == gap);
  CHECK(apply_scaling(gap, ScalingMode::literal, 200.0, 200.0) == gap);

  const auto scaled = apply_scaling(gap, ScalingMode::literal, 10.0, 200.0);
  CHECK_THAT(scaled[0], WithinAbs(0.05, 1e-15));
  CHECK_THAT(scaled[1], WithinAbs(-0.1, 1e-15));

  CHECK_THROWS_AS(apply_scaling(gap, ScalingMode::literal, 0.0, 200.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_scaling(gap, ScalingMode::literal, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("zero gap and zero theta reduce to plain assignment") {
  mpc::Prng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    auto p = diag::random_problem(n, 0.0, rng);
    std::fill(p.gap.begin(), p.gap.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p.cost[i * n + j] = std::abs(p.attention[j] - p.relevance[i]);
    const auto rr = solve(p);
    const double assignment = min_cost_assignment(p.cost, n);
    CHECK_THAT(rr.cost, WithinAbs(assignment, 1e-9));
  }
}

TEST_CASE("brute force refuses large instances") {
  const std::size_t n = 9;
  const std::vector<double> zeros(n, 0.0);
  std::vector<int> ranking(n);
  std::iota(ranking.begin(), ranking.end(), 0);
  std::vector<double> rel(n, 1.0 / double(n));
  const auto p = build_problem(zeros, rel, attention_weights(n), 0.0, n, ranking);
  CHECK_THROWS_AS(brute_force(p), std::invalid_argument);
}

TEST_CASE("single item instance is the identity") {
  const std::vector<double> gap{0.3};
  const std::vector<double> rel{1.0};
  const std::vector<int> ranking{0};
  const auto p = build_problem(gap, rel, attention_weights(1), 1.0, 1, ranking);
  CHECK(solve(p).position_to_item == std::vector<int>{0});
  CHECK(brute_force(p).position_to_item == std::vector<int>{0});
}

TEST_CASE("hungarian assignment matches enumeration on random matrices") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<double> cost(n * n);
    for (auto& c : cost) c = dist(rng);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) total += cost[std::size_t(perm[j]) * n + j];
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<int> chosen;
    std::vector<double> u, v;
    const double got = min_cost_assignment(cost, n, &chosen, &u, &v);
    CHECK_THAT(got, WithinAbs(best, 1e-9));
    CHECK(is_bijection(chosen));

    // Dual feasibility: potentials never exceed any edge cost.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(cost[i * n + j] - u[i] - v[j] >= -1e-9);
  }
}
