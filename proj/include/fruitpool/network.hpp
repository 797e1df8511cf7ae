// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_NETWORK_HPP
#define FRUITPOOL_NETWORK_HPP

#include <fruitpool/types.hpp>

#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

namespace fruitpool {

using BlockArray = std::shared_ptr<const std::vector<BlockPtr>>;
using Payload = std::variant<Fruit, BlockPtr, BlockArray>;

enum class PayloadKind : std::uint8_t { fruit = 0, block = 1, block_array = 2 };
PayloadKind kind_of(const Payload& p);

struct Message {
    std::uint64_t arrival = 0;
    Round sent = 0;
    PartyId sender = 0;
    Payload payload;
    /** Empty means every party. */
    std::optional<std::vector<PartyId>> recipients;

    bool addressed_to(PartyId p) const;
};

/** What a party retrieves at the start of a round. */
struct Inbox {
    std::vector<Fruit> fruits;
    std::vector<BlockPtr> blocks;
    std::vector<std::uint64_t> arrivals;
};

enum class OrderingPolicy : std::uint8_t {
    /** Sender activation order, then send order. */
    canonical = 0,
    /** Corrupted senders' messages first, otherwise canonical. */
    adversary_first = 1,
};

/**
 * Synchronous broadcast: a message sent in round T reaches its recipients
 * at the start of T+1. Arrival indices are global and strictly increasing.
 */
class DiffuseNetwork {
public:
    DiffuseNetwork(unsigned parties, std::vector<bool> corrupted, OrderingPolicy policy);

    /** Returns the arrival index. Only corrupted senders may restrict recipients. */
    std::uint64_t diffuse(Round t, PartyId sender, Payload payload,
                          std::optional<std::vector<PartyId>> recipients = std::nullopt);

    /** Removes an undelivered message; only messages from corrupted senders can be dropped. */
    void drop(std::uint64_t arrival);

    /** Inbox of p at round t: messages sent in t-1, in policy order. */
    Inbox deliver(Round t, PartyId p) const;

    /** Messages sent in round t, in canonical order. */
    std::vector<const Message*> sent_in(Round t) const;

    /** Forget rounds before t. */
    void prune(Round t);

    bool corrupted(PartyId p) const { return corrupted_.at(p); }
    OrderingPolicy policy() const { return policy_; }

private:
    unsigned parties_;
    std::vector<bool> corrupted_;
    OrderingPolicy policy_;
    std::uint64_t next_arrival_ = 0;
    std::vector<Message> pending_;
};

/** Leader-member authenticated message of one round. */
struct AuthMessage {
    PartyId sender = 0;
    Round round = 0;
    Instance inst;
    std::shared_ptr<const std::vector<Fruit>> f_rec;
    std::optional<Transaction> payment;
};

/**
 * Authenticated channel restricted to the edge set E. A message is
 * delivered in the same round iff its edge is in E.
 */
class AuthChannel {
public:
    void connect(PartyId a, PartyId b);
    void disconnect(PartyId a, PartyId b);
    bool has_edge(PartyId a, PartyId b) const;

    /** False when the edge is absent and nothing was delivered. */
    bool send(PartyId from, PartyId to, AuthMessage msg);
    /** Message from `from` addressed to p in round t, if any. */
    std::optional<AuthMessage> receive(PartyId p, Round t, PartyId from) const;
    void clear_before(Round t);

private:
    std::set<std::pair<PartyId, PartyId>> edges_;
    std::vector<std::pair<PartyId, AuthMessage>> box_;
};

} // namespace fruitpool

#endif // FRUITPOOL_NETWORK_HPP
