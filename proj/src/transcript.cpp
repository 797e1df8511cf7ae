// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/engine.hpp>

#include <sodium.h>

#include <cstring>
#include <unordered_map>

namespace fruitpool {

namespace {

constexpr char kMagic[4] = {'F', 'P', 'T', 'R'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHashBytes = 32;

std::array<std::uint8_t, kHashBytes> blake2b(std::span<const std::uint8_t> data)
{
    std::array<std::uint8_t, kHashBytes> out{};
    crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr, 0);
    return out;
}

void write_payment(ByteWriter& w, const PaymentComputation& pc)
{
    w.u32(pc.round);
    w.u32(pc.payer);
    w.u32(pc.pool);
    w.u32(pc.pool_size);
    w.amount(pc.rew);
    w.amount(pc.cost);
    w.amount(pc.w_leader);
    w.amount(pc.w_member);
    w.tx(pc.tx);
}

PaymentComputation read_payment(ByteReader& r)
{
    PaymentComputation pc;
    pc.round = r.u32();
    pc.payer = r.u32();
    pc.pool = r.u32();
    pc.pool_size = r.u32();
    pc.rew = r.amount();
    pc.cost = r.amount();
    pc.w_leader = r.amount();
    pc.w_member = r.amount();
    pc.tx = r.tx();
    return pc;
}

template <typename T>
T read_enum(ByteReader& r, unsigned max)
{
    unsigned v = r.u8();
    if (v > max) throw DecodeError("enum value out of range");
    return static_cast<T>(v);
}

} // namespace

std::vector<std::uint8_t> encode_transcript(const Transcript& t)
{
    ByteWriter w;
    w.str(config_to_json(t.config).dump());
    w.u64(t.rounds);

    w.u32(static_cast<std::uint32_t>(t.initial_roles.size()));
    for (Role r : t.initial_roles) w.u8(static_cast<std::uint8_t>(r));

    w.u64(t.queries.size());
    for (const auto& q : t.queries) {
        w.u32(q.round);
        w.u32(q.party);
        w.u8(static_cast<std::uint8_t>(q.tag));
        w.digest(q.outcome);
    }

    w.u64(t.diffusals.size());
    for (const auto& d : t.diffusals) {
        w.u32(d.round);
        w.u64(d.arrival);
        w.u32(d.sender);
        w.u8(static_cast<std::uint8_t>(d.kind));
        w.u32(static_cast<std::uint32_t>(d.objects.size()));
        for (const auto& o : d.objects) w.digest(o);
        w.u8(d.recipients ? 1 : 0);
        if (d.recipients) {
            w.u32(static_cast<std::uint32_t>(d.recipients->size()));
            for (PartyId p : *d.recipients) w.u32(p);
        }
    }

    w.u64(t.deliveries.size());
    for (const auto& d : t.deliveries) {
        w.u32(d.round);
        w.u32(d.party);
        w.u32(static_cast<std::uint32_t>(d.arrivals.size()));
        for (auto a : d.arrivals) w.u64(a);
    }

    w.u64(t.auths.size());
    for (const auto& a : t.auths) {
        w.u32(a.round);
        w.u32(a.from);
        w.u32(a.to);
        w.u8(a.delivered ? 1 : 0);
        w.digest(a.h_prev);
        w.digest(a.h_f);
        w.digest(a.dig);
        w.u32(a.coinbase);
        w.u32(a.tx_count);
        w.u8(a.payment_tx ? 1 : 0);
        if (a.payment_tx) w.u64(*a.payment_tx);
    }

    w.u64(t.payments.size());
    for (const auto& pc : t.payments) write_payment(w, pc);

    w.u64(t.exits.size());
    for (const auto& e : t.exits) {
        w.u32(e.round);
        w.u32(e.party);
        w.u8(static_cast<std::uint8_t>(e.reason));
    }

    w.u64(t.roles.size());
    for (const auto& e : t.roles) {
        w.u32(e.round);
        w.u32(e.party);
        w.u8(static_cast<std::uint8_t>(e.role));
        w.u32(e.pool);
    }

    // Block table shared by all final views.
    std::unordered_map<Digest, std::uint32_t, DigestHash> index;
    std::vector<const Block*> table;
    for (const auto& f : t.finals)
        for (const auto& b : f.view.blocks)
            if (index.emplace(b->ref(), static_cast<std::uint32_t>(table.size())).second) table.push_back(b.get());
    w.u32(static_cast<std::uint32_t>(table.size()));
    for (const Block* b : table) w.block(*b);

    w.u32(static_cast<std::uint32_t>(t.finals.size()));
    for (const auto& f : t.finals) {
        w.u32(f.id);
        w.u8(static_cast<std::uint8_t>(f.role));
        w.u8(f.corrupted ? 1 : 0);
        w.u32(f.pool);
        w.u32(static_cast<std::uint32_t>(f.view.blocks.size()));
        for (const auto& b : f.view.blocks) w.u32(index.at(b->ref()));
        for (auto c : f.counts) w.u64(c);
        w.amount(f.cost);
    }
    return std::move(w.bytes());
}

std::vector<std::uint8_t> serialize_transcript(const Transcript& t)
{
    std::vector<std::uint8_t> payload = encode_transcript(t);
    auto hash = blake2b(payload);
    std::vector<std::uint8_t> out;
    out.reserve(8 + payload.size() + kHashBytes);
    out.insert(out.end(), kMagic, kMagic + 4);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(kVersion >> (8 * i)));
    out.insert(out.end(), payload.begin(), payload.end());
    out.insert(out.end(), hash.begin(), hash.end());
    return out;
}

Transcript deserialize_transcript(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 8 + kHashBytes) throw DecodeError("transcript too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw DecodeError("bad transcript magic");
    std::uint32_t version = 0;
    for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(bytes[4 + i]) << (8 * i);
    if (version != kVersion) throw DecodeError("unsupported transcript version " + std::to_string(version));
    auto payload = bytes.subspan(8, bytes.size() - 8 - kHashBytes);
    auto trailer = bytes.subspan(bytes.size() - kHashBytes);
    auto hash = blake2b(payload);
    if (std::memcmp(hash.data(), trailer.data(), kHashBytes) != 0) throw DecodeError("transcript checksum mismatch");

    ByteReader r(payload);
    Transcript t;
    try {
        t.config = config_from_json(nlohmann::json::parse(r.str()));
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("embedded config: ") + e.what());
    } catch (const ConfigError& e) {
        throw DecodeError(std::string("embedded config: ") + e.what());
    }
    t.rounds = static_cast<Round>(r.u64());

    std::uint32_t nroles = r.u32();
    for (std::uint32_t i = 0; i < nroles; ++i) t.initial_roles.push_back(read_enum<Role>(r, 3));

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) {
        QueryRecord q;
        q.round = r.u32();
        q.party = r.u32();
        q.tag = read_enum<OracleTag>(r, kOracleCount - 1);
        q.outcome = r.digest();
        t.queries.push_back(q);
    }

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) {
        DiffusalRecord d;
        d.round = r.u32();
        d.arrival = r.u64();
        d.sender = r.u32();
        d.kind = read_enum<PayloadKind>(r, 2);
        for (std::uint32_t j = 0, m = r.u32(); j < m; ++j) d.objects.push_back(r.digest());
        if (r.u8()) {
            d.recipients.emplace();
            for (std::uint32_t j = 0, m = r.u32(); j < m; ++j) d.recipients->push_back(r.u32());
        }
        t.diffusals.push_back(std::move(d));
    }

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) {
        DeliveryRecord d;
        d.round = r.u32();
        d.party = r.u32();
        for (std::uint32_t j = 0, m = r.u32(); j < m; ++j) d.arrivals.push_back(r.u64());
        t.deliveries.push_back(std::move(d));
    }

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) {
        AuthRecord a;
        a.round = r.u32();
        a.from = r.u32();
        a.to = r.u32();
        a.delivered = r.u8() != 0;
        a.h_prev = r.digest();
        a.h_f = r.digest();
        a.dig = r.digest();
        a.coinbase = r.u32();
        a.tx_count = r.u32();
        if (r.u8()) a.payment_tx = r.u64();
        t.auths.push_back(a);
    }

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) t.payments.push_back(read_payment(r));

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) {
        ExitRecord e;
        e.round = r.u32();
        e.party = r.u32();
        e.reason = read_enum<ExitReason>(r, 7);
        t.exits.push_back(e);
    }

    for (std::uint64_t i = 0, k = r.u64(); i < k; ++i) {
        RoleRecord e;
        e.round = r.u32();
        e.party = r.u32();
        e.role = read_enum<Role>(r, 3);
        e.pool = r.u32();
        t.roles.push_back(e);
    }

    std::vector<BlockPtr> table;
    for (std::uint32_t i = 0, k = r.u32(); i < k; ++i) table.push_back(std::make_shared<const Block>(r.block()));

    for (std::uint32_t i = 0, k = r.u32(); i < k; ++i) {
        FinalParty f;
        f.id = r.u32();
        f.role = read_enum<Role>(r, 3);
        f.corrupted = r.u8() != 0;
        f.pool = r.u32();
        for (std::uint32_t j = 0, m = r.u32(); j < m; ++j) {
            std::uint32_t idx = r.u32();
            if (idx >= table.size()) throw DecodeError("block index out of range");
            f.view.blocks.push_back(table[idx]);
        }
        for (auto& c : f.counts) c = r.u64();
        f.cost = r.amount();
        t.finals.push_back(std::move(f));
    }
    if (!r.done()) throw DecodeError("trailing bytes in transcript");
    return t;
}

std::string transcript_hash(const Transcript& t)
{
    auto payload = encode_transcript(t);
    auto hash = blake2b(payload);
    static const char* hexd = "0123456789abcdef";
    std::string out;
    out.reserve(2 * kHashBytes);
    for (auto b : hash) {
        out.push_back(hexd[b >> 4]);
        out.push_back(hexd[b & 15]);
    }
    return out;
}

} // namespace fruitpool
