#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairrank/ring.hpp"
#include "fairrank/sharing.hpp"

namespace fairrank::mpc {

// Two-party Laplace sampling via infinite divisibility: each party draws
// G1 - G2 with G1, G2 ~ Gamma(1/2, scale); the sum of both parties' draws is
// exactly Laplace(0, scale). Each party masks its encoded draw with a uniform
// ring element before sending, so neither side ever sees the other's
// contribution, and no party's local values determine the final sample.
//
// One exchange per call: both parties send their masked contribution, then
// combine the peer's message with their retained mask.
class LaplaceSession {
 public:
  LaplaceSession(int party, double scale, std::size_t count,
                 const FixedPointCodec& codec, Prng& rng)
      : party_(party) {
    if (scale <= 0.0)
      throw std::invalid_argument("laplace: scale must be positive");
    if (count == 0)
      throw std::invalid_argument("laplace: count must be >= 1");
    std::gamma_distribution<double> gamma(0.5, scale);
    masks_.reserve(count);
    outbound_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double contribution = gamma(rng) - gamma(rng);
      const RingElement encoded = codec.encode(contribution);
      const RingElement mask{rng()};
      masks_.push_back(mask);
      outbound_.push_back(encoded - mask);
    }
  }

  // Masked contribution destined for the peer.
  const std::vector<RingElement>& outbound() const { return outbound_; }

  // Consumes the peer's masked contribution and returns this party's share of
  // the joint noise vector.
  SharedVector finish(const std::vector<RingElement>& from_peer) const {
    if (from_peer.size() != masks_.size())
      throw ProtocolError("laplace: peer message has wrong length");
    SharedVector out{party_, std::vector<RingElement>(masks_.size())};
    for (std::size_t i = 0; i < masks_.size(); ++i)
      out.values[i] = masks_[i] + from_peer[i];
    return out;
  }

 private:
  int party_;
  std::vector<RingElement> masks_;
  std::vector<RingElement> outbound_;
};

struct LaplaceShares {
  SharedVector party0;
  SharedVector party1;
};

// Joint two-party functionality run over a direct in-process exchange.
// Reconstructing party0 + party1 yields `count` i.i.d. Laplace(0, scale)
// samples in fixed point.
inline LaplaceShares pi_lap(double scale, std::size_t count,
                            const FixedPointCodec& codec, Prng& rng0,
                            Prng& rng1) {
  LaplaceSession s0(0, scale, count, codec, rng0);
  LaplaceSession s1(1, scale, count, codec, rng1);
  return {s0.finish(s1.outbound()), s1.finish(s0.outbound())};
}

}  // namespace fairrank::mpc
