#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fairrank/fairness.hpp"
#include "fairrank/laplace.hpp"
#include "fairrank/rerank.hpp"
#include "fairrank/sharing.hpp"

namespace fairrank::diag {

inline double laplace_cdf(double x, double scale) {
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

// One-sample Kolmogorov-Smirnov statistic against Laplace(0, scale).
inline double ks_statistic_laplace(std::vector<double> samples, double scale) {
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = laplace_cdf(samples[i], scale);
    d = std::max(d, f - double(i) / n);
    d = std::max(d, double(i + 1) / n - f);
  }
  return d;
}

inline double ks_critical_value(std::size_t samples, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * double(samples)));
}

struct NoiseAudit {
  double scale = 0.0;
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  double ks_statistic = 0.0;
  double ks_critical = 0.0;  // alpha = 0.01
  bool ks_pass = false;
  bool variance_pass = false;  // within 5% of 2 * scale^2

  bool pass() const { return ks_pass && variance_pass; }
};

// Reconstructs `samples` joint Laplace draws and compares their empirical
// distribution with the analytic one.
inline NoiseAudit noise_audit(double scale, std::size_t samples,
                              std::uint64_t seed,
                              const FixedPointCodec& codec = FixedPointCodec()) {
  if (scale <= 0.0)
    throw std::invalid_argument("noise_audit: scale must be positive");
  if (samples < 1000)
    throw std::invalid_argument("noise_audit: need at least 1000 samples");

  mpc::Prng rng0(mpc::mix_seed(seed, 1));
  mpc::Prng rng1(mpc::mix_seed(seed, 2));
  const auto shares = mpc::pi_lap(scale, samples, codec, rng0, rng1);
  const auto values = mpc::reveal_to_client(shares.party0, shares.party1, codec);

  NoiseAudit audit;
  audit.scale = scale;
  audit.samples = samples;
  double sum = 0.0;
  for (double v : values) sum += v;
  audit.mean = sum / double(samples);
  double ss = 0.0;
  for (double v : values) ss += (v - audit.mean) * (v - audit.mean);
  audit.variance = ss / double(samples);
  audit.ks_statistic = ks_statistic_laplace(values, scale);
  audit.ks_critical = ks_critical_value(samples, 0.01);
  audit.ks_pass = audit.ks_statistic < audit.ks_critical;
  const double target = 2.0 * scale * scale;
  audit.variance_pass = std::abs(audit.variance - target) <= 0.05 * target;
  return audit;
}

struct SolverAudit {
  std::size_t trials = 0;
  std::size_t mismatches = 0;

  bool pass() const { return mismatches == 0; }
};

// Random reranking instance: synthetic scores on a 1..5 scale plus a gap
// vector whose magnitude varies across instances by two orders of magnitude.
inline RerankProblem random_problem(std::size_t n, double theta,
                                    mpc::Prng& rng) {
  auto uniform = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
  const RatingScale scale{1.0, 5.0};
  std::vector<double> raw(n);
  for (auto& r : raw) r = scale.min + uniform() * (scale.max - scale.min);
  const auto profile = make_profile(std::move(raw), scale);

  const double magnitude = std::pow(10.0, uniform() * 2.0 - 1.0);
  std::vector<double> gap(n);
  for (auto& g : gap) g = (uniform() * 2.0 - 1.0) * magnitude;

  return build_problem(gap, profile.normalized, attention_weights(n), theta, n,
                       profile.ranking);
}

// Cross-checks the branch-and-bound solver against factorial enumeration:
// equal objective within 1e-9 and the identical permutation under the shared
// lexicographic tie-break.
inline SolverAudit verify_solver(std::size_t trials, std::size_t max_n,
                                 std::uint64_t seed) {
  if (max_n < 2 || max_n > 7)
    throw std::invalid_argument("verify_solver: max_n must be in [2, 7]");
  mpc::Prng rng(mpc::mix_seed(seed, 42));
  constexpr double thetas[] = {0.0, 0.8, 1.0};

  SolverAudit audit;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + rng() % (max_n - 1);
    const double theta = thetas[t % 3];
    const auto problem = random_problem(n, theta, rng);
    const auto fast = solve(problem);
    const auto exact = brute_force(problem);
    ++audit.trials;
    if (std::abs(fast.cost - exact.cost) > 1e-9 ||
        fast.position_to_item != exact.position_to_item)
      ++audit.mismatches;
  }
  return audit;
}

}  // namespace fairrank::diag
