// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_TYPES_HPP
#define FRUITPOOL_TYPES_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fruitpool {

using PartyId = std::uint32_t;
using Round = std::uint32_t;

/** Coinbase of the empty record; no party is credited. */
inline constexpr PartyId kNoParty = std::numeric_limits<PartyId>::max();

/** Exact currency. */
using Amount = mpq_class;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProtocolViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Oracle output of 2*kappa bits. hi holds the first kappa bits (block
 * test), lo the last kappa bits (fruit test). Ordering is lexicographic
 * over the bit string.
 */
struct Digest {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    auto operator<=>(const Digest&) const = default;
    std::string hex() const;
};

struct DigestHash {
    std::size_t operator()(const Digest& d) const noexcept
    {
        return static_cast<std::size_t>(d.hi * 0x9E3779B97F4A7C15ULL ^ (d.lo + 0x632BE59BD9B4E019ULL));
    }
};

struct Payment {
    PartyId to = kNoParty;
    Amount amount;

    bool operator==(const Payment&) const = default;
};

struct Transaction {
    std::uint64_t id = 0;
    PartyId sender = kNoParty;
    std::vector<Payment> payments;

    bool operator==(const Transaction&) const = default;
};

/** Ids of pool payment transactions carry this bit; environment ids never do. */
inline constexpr std::uint64_t kPaymentTxBit = 1ULL << 63;

/** A coinbase plus a transaction list. The default value is the empty record. */
struct Record {
    PartyId coinbase = kNoParty;
    std::vector<Transaction> txs;

    bool operator==(const Record&) const = default;
};

/** <h_prev, h_f, eta, dig, m, h>. Equality is over the full tuple. */
struct Fruit {
    Digest h_prev;
    Digest h_f;
    std::uint64_t eta = 0;
    Digest dig;
    Record m;
    Digest h;

    bool operator==(const Fruit&) const = default;
};

struct FruitHash {
    std::size_t operator()(const Fruit& f) const noexcept { return DigestHash{}(f.h) ^ (f.eta * 0xBF58476D1CE4E5B9ULL); }
};

/** A block is a fruit-shaped header plus the embedded fruit set. */
struct Block {
    Fruit header;
    std::vector<Fruit> fruits;

    const Digest& ref() const { return header.h; }
    bool operator==(const Block&) const = default;
};

using BlockPtr = std::shared_ptr<const Block>;

/**
 * Index 0 is genesis. Length |chain| counts genesis, so the tip sits at
 * index size()-1 and the next block would land at index size().
 */
struct Chain {
    std::vector<BlockPtr> blocks;

    std::size_t length() const { return blocks.size(); }
    const Block& tip() const { return *blocks.back(); }
    const Block& at(std::size_t i) const { return *blocks.at(i); }
};

/** (h_prev, h_f, d(F_rec), m) as hashed together with a nonce. */
struct Instance {
    Digest h_prev;
    Digest h_f;
    Digest dig;
    Record m;

    bool operator==(const Instance&) const = default;
};

/** Whether the object was mined on exactly this instance. */
bool matches(const Fruit& object, const Instance& inst);

/** Rational probability p = num/den with 0 <= p < 1. */
struct Probability {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    /** Accepts "13/256", "0.05", "1e-3" style decimals or integers. */
    static Probability parse(const std::string& text);
    static Probability from_double(double value);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    /** floor(p * 2^kappa). */
    std::uint64_t threshold(unsigned kappa) const;
};

/** Parses an exact rational such as "3/4", "0.05" or "12". */
Amount parse_amount(const std::string& text);
std::string amount_str(const Amount& a);
double amount_double(const Amount& a);

struct CostSchedule {
    Amount lc;
    Amount fs;
    Amount tx;
    Amount ro;
    Amount ltx;
};

struct ProtocolParams {
    unsigned kappa_sim = 32;
    unsigned n = 5;
    unsigned q = 10;
    Round big_n = 100;
    Probability p_f{5, 100};
    Probability p_b{2, 1000};
    unsigned r = 4;
    Amount reward_f = 1;
    CostSchedule costs;
    double delta = 0.5;

    std::uint64_t d_pf() const { return p_f.threshold(kappa_sim); }
    std::uint64_t d_pb() const { return p_b.threshold(kappa_sim); }
    std::uint64_t kappa_mask() const { return kappa_sim >= 64 ? ~0ULL : ((1ULL << kappa_sim) - 1); }
    unsigned recency_window() const { return r * kappa_sim; }
    /** Throws ConfigError on out-of-range values. */
    void validate() const;
};

} // namespace fruitpool

#endif // FRUITPOOL_TYPES_HPP
