#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairrank {

// Geometric position attention: position j (1-based) carries raw weight
// 0.5 * 0.5^(j-1); returned weights are normalized to sum 1 and strictly
// decreasing.
inline std::vector<double> attention_weights(std::size_t n) {
  if (n == 0) throw std::invalid_argument("attention_weights: n must be >= 1");
  std::vector<double> w(n);
  double raw = 0.5;
  double sum = 0.0;
  for (auto& x : w) {
    x = raw;
    sum += raw;
    raw *= 0.5;
  }
  for (auto& x : w) x /= sum;
  return w;
}

struct RatingScale {
  double min = 1.0;
  double max = 5.0;
};

inline void validate(const RatingScale& s) {
  if (!(s.max > s.min))
    throw std::invalid_argument("rating scale: max must exceed min");
}

// Min-max scaling by the global rating bounds followed by sum normalization.
// An all-minimum row has no preference signal and degenerates to uniform.
inline std::vector<double> normalize_relevance(std::span<const double> raw,
                                               const RatingScale& scale) {
  validate(scale);
  if (raw.empty())
    throw std::invalid_argument("normalize_relevance: empty score vector");
  std::vector<double> out(raw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] >= scale.min && raw[i] <= scale.max))
      throw std::invalid_argument("normalize_relevance: score " +
                                  std::to_string(raw[i]) +
                                  " outside rating scale at index " +
                                  std::to_string(i));
    out[i] = (raw[i] - scale.min) / (scale.max - scale.min);
    sum += out[i];
  }
  if (sum <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / double(raw.size()));
    return out;
  }
  for (auto& x : out) x /= sum;
  return out;
}

// Items sorted by descending score; equal scores keep ascending item order.
inline std::vector<int> relevance_ranking(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

// A user's view of the item set: raw scores, their normalized form, and the
// relevance-sorted ranking (position -> item).
struct RelevanceProfile {
  std::vector<double> raw;
  std::vector<double> normalized;
  std::vector<int> ranking;
};

inline RelevanceProfile make_profile(std::vector<double> raw,
                                     const RatingScale& scale) {
  RelevanceProfile p;
  p.normalized = normalize_relevance(raw, scale);
  p.ranking = relevance_ranking(raw);
  p.raw = std::move(raw);
  return p;
}

inline double position_gain(double relevance) { return std::exp2(relevance) - 1.0; }

// Discount of a 0-based position: 1 / log2(position + 2).
inline double position_discount(std::size_t position) {
  return 1.0 / std::log2(double(position) + 2.0);
}

// DCG of the first k positions of `perm` (position -> item) under the given
// per-item relevance.
inline double dcg_at_k(std::span<const double> relevance,
                       std::span<const int> perm, std::size_t k) {
  const std::size_t n = relevance.size();
  if (perm.size() != n)
    throw std::invalid_argument("dcg_at_k: permutation length mismatch");
  if (k < 1 || k > n)
    throw std::invalid_argument("dcg_at_k: k must be in [1, n]");
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const int item = perm[j];
    if (item < 0 || std::size_t(item) >= n)
      throw std::invalid_argument("dcg_at_k: permutation entry out of range");
    total += position_gain(relevance[item]) * position_discount(j);
  }
  return total;
}

inline double dcg(std::span<const double> relevance, std::span<const int> perm) {
  return dcg_at_k(relevance, perm, relevance.size());
}

// Full-list DCG ratio of the reranked list against the original one. A
// zero-gain original list makes every ordering equivalent, so the ratio is 1
// by convention.
inline double ndcg(std::span<const int> original, std::span<const int> reranked,
                   std::span<const double> relevance) {
  const double base = dcg(relevance, original);
  if (base <= 0.0) return 1.0;
  return dcg(relevance, reranked) / base;
}

// L1 distance between accumulated attention and accumulated relevance.
inline double unfairness(std::span<const double> attention,
                         std::span<const double> relevance) {
  if (attention.size() != relevance.size())
    throw std::invalid_argument("unfairness: vector length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < attention.size(); ++i)
    total += std::abs(attention[i] - relevance[i]);
  return total;
}

// Largest change a single user can make to any attention-relevance gap entry.
// Normalized relevance spans [0, 1], so this is max(w_first - 0, 1 - w_last)
// under the geometric attention model.
inline double sensitivity(std::size_t n) {
  const auto w = attention_weights(n);
  return std::max(std::abs(w.front() - 0.0), std::abs(1.0 - w.back()));
}

}  // namespace fairrank
