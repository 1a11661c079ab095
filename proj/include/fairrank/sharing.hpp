#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairrank/ring.hpp"

namespace fairrank::mpc {

using Prng = std::mt19937_64;

// Raised when a message or share violates the two-party protocol contract
// (wrong party id, mismatched lengths, malformed frame).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Derives independent per-component seeds from one experiment seed
// (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Share {
  int party = 0;
  RingElement value;
};

// One party's half of a secret-shared vector.
struct SharedVector {
  int party = 0;
  std::vector<RingElement> values;

  std::size_t size() const { return values.size(); }
};

// Additive 2-of-2 split: x = x0 + x1 mod 2^64, x0 uniform.
inline std::pair<Share, Share> share(RingElement x, Prng& rng) {
  const RingElement x0{rng()};
  return {Share{0, x0}, Share{1, x - x0}};
}

inline RingElement reconstruct(const Share& s0, const Share& s1) {
  if (s0.party != 0 || s1.party != 1)
    throw ProtocolError("reconstruct: need exactly one share from each party");
  return s0.value + s1.value;
}

inline std::pair<SharedVector, SharedVector> share_vector(
    std::span<const RingElement> values, Prng& rng) {
  SharedVector v0{0, {}};
  SharedVector v1{1, {}};
  v0.values.reserve(values.size());
  v1.values.reserve(values.size());
  for (RingElement x : values) {
    const RingElement x0{rng()};
    v0.values.push_back(x0);
    v1.values.push_back(x - x0);
  }
  return {std::move(v0), std::move(v1)};
}

inline SharedVector zero_shares(int party, std::size_t n) {
  return SharedVector{party, std::vector<RingElement>(n)};
}

namespace detail {
inline void check_reconstruct_pair(const SharedVector& v0, const SharedVector& v1,
                                   const char* what) {
  if (v0.party != 0 || v1.party != 1)
    throw ProtocolError(std::string(what) + ": need one share vector per party");
  if (v0.size() != v1.size())
    throw ProtocolError(std::string(what) + ": share vector lengths differ");
}
}  // namespace detail

inline std::vector<RingElement> reconstruct_vector(const SharedVector& v0,
                                                   const SharedVector& v1) {
  detail::check_reconstruct_pair(v0, v1, "reconstruct_vector");
  std::vector<RingElement> out(v0.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = v0.values[i] + v1.values[i];
  return out;
}

// Local share arithmetic; no communication happens here.
inline SharedVector share_add_local(const SharedVector& a, const SharedVector& b) {
  if (a.party != b.party)
    throw ProtocolError("share_add_local: party mismatch");
  if (a.size() != b.size())
    throw ProtocolError("share_add_local: length mismatch");
  SharedVector out{a.party, std::vector<RingElement>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i)
    out.values[i] = a.values[i] + b.values[i];
  return out;
}

inline SharedVector share_sub_local(const SharedVector& a, const SharedVector& b) {
  if (a.party != b.party)
    throw ProtocolError("share_sub_local: party mismatch");
  if (a.size() != b.size())
    throw ProtocolError("share_sub_local: length mismatch");
  SharedVector out{a.party, std::vector<RingElement>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i)
    out.values[i] = a.values[i] - b.values[i];
  return out;
}

// Client-side opening: combine both parties' shares, then decode. A single
// party's vector is useless on its own; this is the only decode path.
inline std::vector<double> reveal_to_client(const SharedVector& v0,
                                            const SharedVector& v1,
                                            const FixedPointCodec& codec) {
  detail::check_reconstruct_pair(v0, v1, "reveal_to_client");
  std::vector<double> out(v0.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = codec.decode(v0.values[i] + v1.values[i]);
  return out;
}

}  // namespace fairrank::mpc
