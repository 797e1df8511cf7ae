// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_SERIALIZE_HPP
#define FRUITPOOL_SERIALIZE_HPP

#include <fruitpool/types.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fruitpool {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Canonical little-endian, length-prefixed encoding. */
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void str(const std::string& s);
    void digest(const Digest& d);
    void amount(const Amount& a);
    void tx(const Transaction& t);
    void record(const Record& r);
    void fruit(const Fruit& f);
    void block(const Block& b);

    const std::vector<std::uint8_t>& bytes() const { return buf_; }
    std::vector<std::uint8_t>& bytes() { return buf_; }
    void clear() { buf_.clear(); }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::string str();
    Digest digest();
    Amount amount();
    Transaction tx();
    Record record();
    Fruit fruit();
    Block block();

    bool done() const { return pos_ == data_.size(); }
    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) const;

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace fruitpool

#endif // FRUITPOOL_SERIALIZE_HPP
