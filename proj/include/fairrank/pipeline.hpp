#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairrank/data_io.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/protocol.hpp"
#include "fairrank/rerank.hpp"

// Evaluation harness. Everything in this namespace handles plaintext for
// measurement only; nothing computed here flows back into protocol state.
namespace fairrank::eval {

struct SequenceConfig {
  std::size_t k = 0;  // 0 selects the full list
  double theta = 0.8;
  double epsilon = 100000.0;
  bool noise = true;
  ScalingMode scaling = ScalingMode::none;
  std::optional<double> sensitivity_override;
  int fractional_bits = 20;
  protocol::TransportMode transport = protocol::TransportMode::inproc;
  std::uint64_t seed = 1;
};

struct UserRecord {
  int user = 0;
  bool aborted = false;
  std::vector<int> permutation;  // position -> item
  double ndcg = 0.0;
  double elapsed_ms = 0.0;
};

struct SequenceResult {
  std::vector<UserRecord> users;
  std::vector<double> attention_total;  // plaintext ledger, measurement only
  std::vector<double> relevance_total;
  double unfairness = 0.0;
  std::size_t aborts = 0;
  double elapsed_ms = 0.0;
  std::size_t noise_draws = 0;

  double mean_ndcg() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& u : users)
      if (!u.aborted) {
        sum += u.ndcg;
        ++count;
      }
    return count == 0 ? 0.0 : sum / double(count);
  }

  double min_ndcg() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& u : users)
      if (!u.aborted) lo = std::min(lo, u.ndcg);
    return std::isfinite(lo) ? lo : 0.0;
  }

  double max_user_ms() const {
    double hi = 0.0;
    for (const auto& u : users) hi = std::max(hi, u.elapsed_ms);
    return hi;
  }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline void record_user(SequenceResult& res, const RelevanceProfile& profile,
                        UserRecord rec, std::span<const double> attention_per_item) {
  for (std::size_t i = 0; i < attention_per_item.size(); ++i) {
    res.attention_total[i] += attention_per_item[i];
    res.relevance_total[i] += profile.normalized[i];
  }
  rec.ndcg = ndcg(profile.ranking, rec.permutation, profile.normalized);
  res.users.push_back(std::move(rec));
}

}  // namespace detail

// Full private run: per user, release the noisy shared gap, let the client
// rerank locally, fold the uploaded shares back into the server aggregates.
// Users are strictly sequential; an aborted user leaves the aggregates
// untouched and the run continues.
inline SequenceResult run_private(const std::vector<RelevanceProfile>& profiles,
                                  const SequenceConfig& cfg) {
  if (profiles.empty())
    throw std::invalid_argument("run_private: no users");
  const std::size_t n = profiles.front().normalized.size();
  const std::size_t total_users = profiles.size();
  const std::size_t k = cfg.k == 0 ? n : cfg.k;
  const FixedPointCodec codec(cfg.fractional_bits);

  auto servers = protocol::initialize(
      n, total_users, cfg.epsilon, codec, cfg.noise, cfg.sensitivity_override,
      mpc::mix_seed(cfg.seed, 1), mpc::mix_seed(cfg.seed, 2), cfg.transport);

  SequenceResult res;
  res.attention_total.assign(n, 0.0);
  res.relevance_total.assign(n, 0.0);
  const auto attention = attention_weights(n);

  const auto run_start = detail::Clock::now();
  for (std::size_t l = 0; l < total_users; ++l) {
    const auto user_start = detail::Clock::now();
    UserRecord rec;
    rec.user = int(l);

    protocol::ClientSession client{int(l), profiles[l],
                                   mpc::Prng(mpc::mix_seed(cfg.seed, 100 + l))};
    try {
      auto [gap0, gap1] = protocol::get_unfairness_metric(servers);
      const auto uploads =
          protocol::client_rerank(client, gap0, gap1, k, cfg.theta, cfg.scaling,
                                  servers.s0.privacy, codec);
      protocol::update_aggregation(servers.s0, uploads.attention0,
                                   uploads.relevance0);
      protocol::update_aggregation(servers.s1, uploads.attention1,
                                   uploads.relevance1);
    } catch (const std::exception&) {
      rec.aborted = true;
      rec.elapsed_ms = detail::ms_since(user_start);
      res.users.push_back(std::move(rec));
      ++res.aborts;
      continue;
    }

    rec.permutation = client.rerank.position_to_item;
    rec.elapsed_ms = detail::ms_since(user_start);
    detail::record_user(res, profiles[l], std::move(rec),
                        attention_for_items(client.rerank.position_to_item,
                                            attention));
  }

  res.unfairness = unfairness(res.attention_total, res.relevance_total);
  res.elapsed_ms = detail::ms_since(run_start);
  res.noise_draws = servers.s0.noise_draws;
  return res;
}

// Clear-text reranking baseline: one trusted aggregator, no noise, no shares.
// Aggregates go through the same fixed-point codec as the private path, so a
// noise-free private run solves bit-identical instances and must produce
// identical rerankings.
inline SequenceResult run_centralized_fair(
    const std::vector<RelevanceProfile>& profiles, const SequenceConfig& cfg) {
  if (profiles.empty())
    throw std::invalid_argument("run_centralized_fair: no users");
  const std::size_t n = profiles.front().normalized.size();
  const std::size_t k = cfg.k == 0 ? n : cfg.k;
  const FixedPointCodec codec(cfg.fractional_bits);

  std::vector<RingElement> attention_sum(n), relevance_sum(n);
  SequenceResult res;
  res.attention_total.assign(n, 0.0);
  res.relevance_total.assign(n, 0.0);
  const auto attention = attention_weights(n);

  const auto run_start = detail::Clock::now();
  for (std::size_t l = 0; l < profiles.size(); ++l) {
    const auto user_start = detail::Clock::now();
    UserRecord rec;
    rec.user = int(l);

    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i)
      gap[i] = codec.decode(attention_sum[i] - relevance_sum[i]);

    try {
      const auto problem = build_problem(gap, profiles[l].normalized, attention,
                                         cfg.theta, k, profiles[l].ranking);
      const auto rerank = solve(problem);
      const auto attention_per_item =
          attention_for_items(rerank.position_to_item, attention);
      for (std::size_t i = 0; i < n; ++i) {
        attention_sum[i] += codec.encode(attention_per_item[i]);
        relevance_sum[i] += codec.encode(profiles[l].normalized[i]);
      }
      rec.permutation = rerank.position_to_item;
      rec.elapsed_ms = detail::ms_since(user_start);
      detail::record_user(res, profiles[l], std::move(rec), attention_per_item);
    } catch (const std::exception&) {
      rec.aborted = true;
      rec.elapsed_ms = detail::ms_since(user_start);
      res.users.push_back(std::move(rec));
      ++res.aborts;
    }
  }

  res.unfairness = unfairness(res.attention_total, res.relevance_total);
  res.elapsed_ms = detail::ms_since(run_start);
  return res;
}

// No bias mitigation: every user keeps the relevance-sorted order.
inline SequenceResult run_no_fairness(
    const std::vector<RelevanceProfile>& profiles) {
  if (profiles.empty())
    throw std::invalid_argument("run_no_fairness: no users");
  const std::size_t n = profiles.front().normalized.size();
  const auto attention = attention_weights(n);

  SequenceResult res;
  res.attention_total.assign(n, 0.0);
  res.relevance_total.assign(n, 0.0);
  const auto run_start = detail::Clock::now();
  for (std::size_t l = 0; l < profiles.size(); ++l) {
    UserRecord rec;
    rec.user = int(l);
    rec.permutation = profiles[l].ranking;
    detail::record_user(res, profiles[l], std::move(rec),
                        attention_for_items(profiles[l].ranking, attention));
  }
  res.unfairness = unfairness(res.attention_total, res.relevance_total);
  res.elapsed_ms = detail::ms_since(run_start);
  return res;
}

struct ExperimentConfig {
  std::size_t items = 20;
  std::size_t users = 200;
  std::size_t k = 0;  // 0 selects items
  double theta = 0.8;
  std::vector<double> epsilons = {0.5,    1.0,     10.0,    100.0,
                                  1000.0, 10000.0, 100000.0};
  std::vector<std::uint64_t> seeds = {1};
  int fractional_bits = 20;
  ScalingMode scaling = ScalingMode::none;
  bool noise = true;
  bool force_unit_sensitivity = false;
  protocol::TransportMode transport = protocol::TransportMode::inproc;
  std::string input_path;  // empty: synthesize scores per seed
  io::SynthDistribution distribution = io::SynthDistribution::uniform;
  RatingScale scale{1.0, 5.0};
  std::string output_path;  // empty: do not write a report
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.items == 0 || cfg.users == 0)
    throw std::invalid_argument("experiment: items and users must be >= 1");
  if (cfg.k > cfg.items)
    throw std::invalid_argument("experiment: k must not exceed the item count");
  if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0))
    throw std::invalid_argument("experiment: theta must be in [0, 1]");
  if (cfg.epsilons.empty() || cfg.seeds.empty())
    throw std::invalid_argument("experiment: need at least one epsilon and seed");
  for (double e : cfg.epsilons)
    if (e <= 0.0)
      throw std::invalid_argument("experiment: epsilon values must be positive");
  validate(cfg.scale);
}

// One (epsilon, seed) cell with the three pipeline outcomes behind its row.
struct CellResult {
  io::ReportRow row;
  SequenceResult no_fairness;
  SequenceResult centralized;
  SequenceResult privately_reranked;
};

inline std::vector<RelevanceProfile> profiles_for_seed(
    const ExperimentConfig& cfg, std::uint64_t seed) {
  io::RelevanceMatrix matrix =
      cfg.input_path.empty()
          ? io::synth_relevance(cfg.users, cfg.items,
                                mpc::mix_seed(seed, 0), cfg.scale,
                                cfg.distribution)
          : io::load_relevance_csv(cfg.input_path, cfg.scale);
  std::vector<RelevanceProfile> profiles;
  profiles.reserve(matrix.users());
  for (auto& row : matrix.rows) profiles.push_back(make_profile(std::move(row), cfg.scale));
  return profiles;
}

inline std::vector<CellResult> run_experiment_cells(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<CellResult> cells;
  for (const std::uint64_t seed : cfg.seeds) {
    const auto profiles = profiles_for_seed(cfg, seed);

    SequenceConfig base;
    base.k = cfg.k;
    base.theta = cfg.theta;
    base.scaling = cfg.scaling;
    base.fractional_bits = cfg.fractional_bits;
    base.transport = cfg.transport;
    base.seed = seed;
    if (cfg.force_unit_sensitivity) base.sensitivity_override = 1.0;

    // The clear-text baselines do not depend on epsilon; run them once per
    // seed and reuse across the sweep.
    const auto none = run_no_fairness(profiles);
    const auto central = run_centralized_fair(profiles, base);

    for (const double epsilon : cfg.epsilons) {
      SequenceConfig pcfg = base;
      pcfg.epsilon = epsilon;
      pcfg.noise = cfg.noise;
      auto priv = run_private(profiles, pcfg);

      CellResult cell;
      cell.row.epsilon = epsilon;
      cell.row.seed = seed;
      cell.row.unfairness_none = none.unfairness;
      cell.row.unfairness_central_fair = central.unfairness;
      cell.row.unfairness_private = priv.unfairness;
      cell.row.mean_ndcg = priv.mean_ndcg();
      cell.row.min_ndcg = priv.min_ndcg();
      cell.row.aborts = priv.aborts;
      cell.row.runtime_ms = priv.elapsed_ms;
      cell.no_fairness = none;
      cell.centralized = central;
      cell.privately_reranked = std::move(priv);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

inline std::vector<io::ReportRow> run_experiment(const ExperimentConfig& cfg) {
  const auto cells = run_experiment_cells(cfg);
  std::vector<io::ReportRow> rows;
  rows.reserve(cells.size());
  for (const auto& c : cells) rows.push_back(c.row);
  if (!cfg.output_path.empty()) io::write_report_csv(rows, cfg.output_path);
  return rows;
}

}  // namespace fairrank::eval
