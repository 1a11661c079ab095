#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairrank/fairness.hpp"
#include "fairrank/laplace.hpp"
#include "fairrank/rerank.hpp"
#include "fairrank/ring.hpp"
#include "fairrank/sharing.hpp"
#include "fairrank/transport.hpp"

namespace fairrank::protocol {

struct PrivacyParams {
  double epsilon = 1.0;
  std::size_t items = 0;      // queried entries per release
  std::size_t users = 0;      // releases over the whole run
  double sensitivity = 1.0;   // per-user bound on any gap entry
  double noise_scale = 0.0;   // sensitivity / (epsilon / (items * users))
  bool noise_enabled = true;
};

inline PrivacyParams make_privacy_params(double epsilon, std::size_t items,
                                         std::size_t users, double sensitivity,
                                         bool noise_enabled) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("privacy: epsilon must be positive");
  if (items == 0 || users == 0)
    throw std::invalid_argument("privacy: items and users must be >= 1");
  if (sensitivity <= 0.0)
    throw std::invalid_argument("privacy: sensitivity must be positive");
  PrivacyParams p;
  p.epsilon = epsilon;
  p.items = items;
  p.users = users;
  p.sensitivity = sensitivity;
  p.noise_scale = sensitivity * double(items) * double(users) / epsilon;
  p.noise_enabled = noise_enabled;
  return p;
}

// One server's protocol state. It only ever holds shares; nothing here can
// be decoded without the other party.
struct ServerState {
  int party = 0;
  FixedPointCodec codec;
  PrivacyParams privacy;
  mpc::SharedVector attention_sum;  // accumulated reranked attention shares
  mpc::SharedVector relevance_sum;  // accumulated relevance shares
  mpc::Prng rng;
  mpc::Endpoint* link = nullptr;  // channel to the other server, not owned
  std::size_t users_served = 0;
  std::size_t noise_draws = 0;
};

enum class TransportMode { inproc, tcp };

// Both servers plus the channel that connects them.
struct ServerPair {
  ServerState s0;
  ServerState s1;
  mpc::EndpointPair link;
};

inline ServerPair initialize(std::size_t items, std::size_t users, double epsilon,
                             const FixedPointCodec& codec, bool noise_enabled,
                             std::optional<double> sensitivity_override,
                             std::uint64_t seed0, std::uint64_t seed1,
                             TransportMode transport = TransportMode::inproc) {
  const double df = sensitivity_override.value_or(sensitivity(items));
  const PrivacyParams privacy =
      make_privacy_params(epsilon, items, users, df, noise_enabled);

  ServerPair pair;
  pair.link = mpc::make_endpoint_pair(transport == TransportMode::tcp);
  pair.s0 = ServerState{0,
                        codec,
                        privacy,
                        mpc::zero_shares(0, items),
                        mpc::zero_shares(0, items),
                        mpc::Prng(seed0),
                        pair.link.first.get()};
  pair.s1 = ServerState{1,
                        codec,
                        privacy,
                        mpc::zero_shares(1, items),
                        mpc::zero_shares(1, items),
                        mpc::Prng(seed1),
                        pair.link.second.get()};
  return pair;
}

// Produces the secret-shared, noise-perturbed gap vector for the next user.
// Each server works on its local shares; the only communication is the one
// masked exchange inside the Laplace sampling. Fresh noise on every call.
inline std::pair<mpc::SharedVector, mpc::SharedVector> get_unfairness_metric(
    ServerPair& servers) {
  auto gap0 = mpc::share_sub_local(servers.s0.attention_sum,
                                   servers.s0.relevance_sum);
  auto gap1 = mpc::share_sub_local(servers.s1.attention_sum,
                                   servers.s1.relevance_sum);
  if (servers.s0.privacy.noise_enabled) {
    const std::size_t n = servers.s0.privacy.items;
    const double b = servers.s0.privacy.noise_scale;
    mpc::LaplaceSession ses0(0, b, n, servers.s0.codec, servers.s0.rng);
    mpc::LaplaceSession ses1(1, b, n, servers.s1.codec, servers.s1.rng);
    servers.s0.link->send(ses0.outbound());
    servers.s1.link->send(ses1.outbound());
    const auto noise0 = ses0.finish(servers.s0.link->recv());
    const auto noise1 = ses1.finish(servers.s1.link->recv());
    gap0 = mpc::share_add_local(gap0, noise0);
    gap1 = mpc::share_add_local(gap1, noise1);
    servers.s0.noise_draws += n;
    servers.s1.noise_draws += n;
  }
  return {std::move(gap0), std::move(gap1)};
}

// What a client hands back: one share of its reranked attention and relevance
// per server. Raw scores never appear here.
struct ClientUploads {
  mpc::SharedVector attention0, attention1;
  mpc::SharedVector relevance0, relevance1;
};

struct ClientSession {
  int user = 0;
  RelevanceProfile profile;
  mpc::Prng rng;
  std::vector<double> revealed_gap;
  Reranking rerank;
};

inline ClientUploads client_rerank(ClientSession& client,
                                   const mpc::SharedVector& gap0,
                                   const mpc::SharedVector& gap1, std::size_t k,
                                   double theta, ScalingMode scaling,
                                   const PrivacyParams& privacy,
                                   const FixedPointCodec& codec) {
  client.revealed_gap =
      apply_scaling(mpc::reveal_to_client(gap0, gap1, codec), scaling,
                    privacy.epsilon, double(privacy.users));

  const auto attention = attention_weights(client.profile.normalized.size());
  const auto problem =
      build_problem(client.revealed_gap, client.profile.normalized, attention,
                    theta, k, client.profile.ranking);
  client.rerank = solve(problem);

  const auto attention_per_item =
      attention_for_items(client.rerank.position_to_item, attention);
  auto [w0, w1] =
      mpc::share_vector(encode_vector(attention_per_item, codec), client.rng);
  auto [r0, r1] =
      mpc::share_vector(encode_vector(client.profile.normalized, codec), client.rng);
  return ClientUploads{std::move(w0), std::move(w1), std::move(r0),
                       std::move(r1)};
}

// Folds a client's uploads into one server's aggregates. Pure local share
// addition; the servers never talk to each other here.
inline void update_aggregation(ServerState& server,
                               const mpc::SharedVector& attention_upload,
                               const mpc::SharedVector& relevance_upload) {
  if (attention_upload.party != server.party ||
      relevance_upload.party != server.party)
    throw mpc::ProtocolError("update_aggregation: upload for the wrong party");
  if (attention_upload.size() != server.privacy.items ||
      relevance_upload.size() != server.privacy.items)
    throw mpc::ProtocolError("update_aggregation: upload length mismatch");
  if (server.users_served >= server.privacy.users)
    throw mpc::ProtocolError("update_aggregation: all user sessions consumed");
  server.attention_sum =
      mpc::share_add_local(server.attention_sum, attention_upload);
  server.relevance_sum =
      mpc::share_add_local(server.relevance_sum, relevance_upload);
  ++server.users_served;
}

}  // namespace fairrank::protocol
