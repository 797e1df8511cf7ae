// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_RANDOM_ORACLE_HPP
#define FRUITPOOL_RANDOM_ORACLE_HPP

#include <fruitpool/serialize.hpp>
#include <fruitpool/types.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fruitpool {

/** Leading byte of every hashed input, one per use. */
enum class DomainTag : std::uint8_t {
    mining = 0x01,
    fruit_set = 0x02,
    stream = 0x03,
};

/**
 * Random function realized as a keyed PRF (SipHash-128) over the query
 * bytes; equal queries get equal answers without a memo.
 */
class RandomOracle {
public:
    RandomOracle(std::uint64_t seed, unsigned kappa);

    /** H(query). Identical bytes always give the identical digest. */
    Digest evaluate(std::span<const std::uint8_t> query) const;

    /** H(h_prev || h_f || eta || dig || m). */
    Digest mining(const Digest& h_prev, const Digest& h_f, std::uint64_t eta, const Digest& dig,
                  const Record& m) const;
    Digest mining(const Instance& inst, std::uint64_t eta) const { return mining(inst.h_prev, inst.h_f, eta, inst.dig, inst.m); }

    /** d(F): collision resistant digest of an ordered fruit list, domain separated from mining. */
    Digest fruit_set_digest(const std::vector<Fruit>& fruits) const;

    /** Independent 64-bit seed for a (purpose, party, round) stream. */
    std::uint64_t stream_seed(std::uint8_t purpose, PartyId party, Round round) const;

    unsigned kappa() const { return kappa_; }

    /** Raw PRF output truncated to 2*kappa bits, no memo. */
    Digest prf(std::span<const std::uint8_t> bytes) const;

    static void encode_mining(ByteWriter& w, const Digest& h_prev, const Digest& h_f, std::uint64_t eta,
                              const Digest& dig, const Record& m);
    /** Byte offset of eta inside an encoded mining query. */
    static constexpr std::size_t kEtaOffset = 1 + 16 + 16;

private:
    std::array<unsigned char, 16> key_{};
    unsigned kappa_;
    std::uint64_t mask_;
    mutable ByteWriter scratch_;
};

/** floor semantics: lo < D_pf. */
inline bool fruit_success(const Digest& h, std::uint64_t d_pf) { return h.lo < d_pf; }
/** hi < D_pb. */
inline bool block_success(const Digest& h, std::uint64_t d_pb) { return h.hi < d_pb; }

/** Per-(seed, purpose, party, round) generator. */
std::mt19937_64 make_stream(const RandomOracle& ro, std::uint8_t purpose, PartyId party, Round round);

inline constexpr std::uint8_t kStreamNonce = 1;
inline constexpr std::uint8_t kStreamTx = 2;

} // namespace fruitpool

#endif // FRUITPOOL_RANDOM_ORACLE_HPP
