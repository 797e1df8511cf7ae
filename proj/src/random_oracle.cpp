// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/random_oracle.hpp>

#include <sodium.h>

namespace fruitpool {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t load64(const unsigned char* p)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

} // namespace

RandomOracle::RandomOracle(std::uint64_t seed, unsigned kappa) : kappa_(kappa)
{
    if (kappa < 1 || kappa > 64) throw ConfigError("kappa must be in [1, 64]");
    mask_ = kappa >= 64 ? ~0ULL : ((1ULL << kappa) - 1);
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    for (int i = 0; i < 8; ++i) {
        key_[i] = static_cast<unsigned char>(a >> (8 * i));
        key_[8 + i] = static_cast<unsigned char>(b >> (8 * i));
    }
}

Digest RandomOracle::prf(std::span<const std::uint8_t> bytes) const
{
    unsigned char out[crypto_shorthash_siphashx24_BYTES];
    crypto_shorthash_siphashx24(out, bytes.data(), bytes.size(), key_.data());
    return Digest{load64(out) & mask_, load64(out + 8) & mask_};
}

Digest RandomOracle::evaluate(std::span<const std::uint8_t> query) const
{
    return prf(query);
}

void RandomOracle::encode_mining(ByteWriter& w, const Digest& h_prev, const Digest& h_f, std::uint64_t eta,
                                 const Digest& dig, const Record& m)
{
    w.u8(static_cast<std::uint8_t>(DomainTag::mining));
    w.digest(h_prev);
    w.digest(h_f);
    w.u64(eta);
    w.digest(dig);
    w.record(m);
}

Digest RandomOracle::mining(const Digest& h_prev, const Digest& h_f, std::uint64_t eta, const Digest& dig,
                            const Record& m) const
{
    scratch_.clear();
    encode_mining(scratch_, h_prev, h_f, eta, dig, m);
    return evaluate(scratch_.bytes());
}

Digest RandomOracle::fruit_set_digest(const std::vector<Fruit>& fruits) const
{
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(DomainTag::fruit_set));
    w.u32(static_cast<std::uint32_t>(fruits.size()));
    for (const auto& f : fruits) w.fruit(f);
    return prf(w.bytes());
}

std::uint64_t RandomOracle::stream_seed(std::uint8_t purpose, PartyId party, Round round) const
{
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(DomainTag::stream));
    w.u8(purpose);
    w.u32(party);
    w.u32(round);
    unsigned char out[crypto_shorthash_siphashx24_BYTES];
    crypto_shorthash_siphashx24(out, w.bytes().data(), w.bytes().size(), key_.data());
    return load64(out) ^ load64(out + 8);
}

std::mt19937_64 make_stream(const RandomOracle& ro, std::uint8_t purpose, PartyId party, Round round)
{
    return std::mt19937_64(ro.stream_seed(purpose, party, round));
}

} // namespace fruitpool
