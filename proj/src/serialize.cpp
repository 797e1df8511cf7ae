// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/serialize.hpp>

namespace fruitpool {

void ByteWriter::u32(std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::str(const std::string& s)
{
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteWriter::digest(const Digest& d)
{
    u64(d.hi);
    u64(d.lo);
}

namespace {

void write_mpz(std::vector<std::uint8_t>& buf, const mpz_class& z)
{
    std::size_t count = (mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8;
    if (sgn(z) == 0) count = 0;
    std::uint32_t n = static_cast<std::uint32_t>(count);
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    const std::size_t at = buf.size();
    buf.resize(at + count);
    if (count) mpz_export(buf.data() + at, nullptr, 1, 1, 1, 0, z.get_mpz_t());
}

} // namespace

// Sign byte, then big-endian magnitudes of numerator and denominator.
void ByteWriter::amount(const Amount& a)
{
    u8(sgn(a) < 0 ? 1 : 0);
    write_mpz(buf_, abs(a.get_num()));
    write_mpz(buf_, a.get_den());
}

void ByteWriter::tx(const Transaction& t)
{
    u64(t.id);
    u32(t.sender);
    u32(static_cast<std::uint32_t>(t.payments.size()));
    for (const auto& p : t.payments) {
        u32(p.to);
        amount(p.amount);
    }
}

void ByteWriter::record(const Record& r)
{
    u32(r.coinbase);
    u32(static_cast<std::uint32_t>(r.txs.size()));
    for (const auto& t : r.txs) tx(t);
}

void ByteWriter::fruit(const Fruit& f)
{
    digest(f.h_prev);
    digest(f.h_f);
    u64(f.eta);
    digest(f.dig);
    record(f.m);
    digest(f.h);
}

void ByteWriter::block(const Block& b)
{
    fruit(b.header);
    u32(static_cast<std::uint32_t>(b.fruits.size()));
    for (const auto& f : b.fruits) fruit(f);
}

void ByteReader::need(std::size_t n) const
{
    if (data_.size() - pos_ < n) throw DecodeError("truncated input at byte " + std::to_string(pos_));
}

std::uint8_t ByteReader::u8()
{
    need(1);
    return data_[pos_++];
}

std::uint32_t ByteReader::u32()
{
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    return v;
}

std::uint64_t ByteReader::u64()
{
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    return v;
}

std::string ByteReader::str()
{
    std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
}

Digest ByteReader::digest()
{
    Digest d;
    d.hi = u64();
    d.lo = u64();
    return d;
}

Amount ByteReader::amount()
{
    std::uint8_t sign = u8();
    if (sign > 1) throw DecodeError("bad amount sign");
    auto magnitude = [&] {
        std::uint32_t n = u32();
        need(n);
        mpz_class z;
        if (n) mpz_import(z.get_mpz_t(), n, 1, 1, 1, 0, data_.data() + pos_);
        if (n && data_[pos_] == 0) throw DecodeError("non-minimal amount encoding");
        pos_ += n;
        return z;
    };
    mpz_class num = magnitude();
    mpz_class den = magnitude();
    if (den == 0) throw DecodeError("zero denominator");
    Amount a(num, den);
    a.canonicalize();
    if (a.get_num() != num || a.get_den() != den || (sign && num == 0)) throw DecodeError("non-canonical amount");
    if (sign) a = -a;
    return a;
}

Transaction ByteReader::tx()
{
    Transaction t;
    t.id = u64();
    t.sender = u32();
    std::uint32_t n = u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        Payment p;
        p.to = u32();
        p.amount = amount();
        t.payments.push_back(std::move(p));
    }
    return t;
}

Record ByteReader::record()
{
    Record r;
    r.coinbase = u32();
    std::uint32_t n = u32();
    for (std::uint32_t i = 0; i < n; ++i) r.txs.push_back(tx());
    return r;
}

Fruit ByteReader::fruit()
{
    Fruit f;
    f.h_prev = digest();
    f.h_f = digest();
    f.eta = u64();
    f.dig = digest();
    f.m = record();
    f.h = digest();
    return f;
}

Block ByteReader::block()
{
    Block b;
    b.header = fruit();
    std::uint32_t n = u32();
    for (std::uint32_t i = 0; i < n; ++i) b.fruits.push_back(fruit());
    return b;
}

} // namespace fruitpool
