// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/network.hpp>

#include <algorithm>

namespace fruitpool {

PayloadKind kind_of(const Payload& p)
{
    return static_cast<PayloadKind>(p.index());
}

bool Message::addressed_to(PartyId p) const
{
    if (!recipients) return true;
    return std::find(recipients->begin(), recipients->end(), p) != recipients->end();
}

DiffuseNetwork::DiffuseNetwork(unsigned parties, std::vector<bool> corrupted, OrderingPolicy policy)
    : parties_(parties), corrupted_(std::move(corrupted)), policy_(policy)
{
    corrupted_.resize(parties_, false);
}

std::uint64_t DiffuseNetwork::diffuse(Round t, PartyId sender, Payload payload,
                                      std::optional<std::vector<PartyId>> recipients)
{
    if (sender >= parties_) throw ProtocolViolation("diffuse from unknown party");
    if (recipients && !corrupted_[sender])
        throw ProtocolViolation("honest party " + std::to_string(sender) + " cannot send selectively");
    Message m;
    m.arrival = next_arrival_++;
    m.sent = t;
    m.sender = sender;
    m.payload = std::move(payload);
    m.recipients = std::move(recipients);
    pending_.push_back(std::move(m));
    return pending_.back().arrival;
}

void DiffuseNetwork::drop(std::uint64_t arrival)
{
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const Message& m) { return m.arrival == arrival; });
    if (it == pending_.end()) return;
    if (!corrupted_[it->sender])
        throw ProtocolViolation("message " + std::to_string(arrival) + " from honest party " +
                                std::to_string(it->sender) + " cannot be dropped");
    pending_.erase(it);
}

Inbox DiffuseNetwork::deliver(Round t, PartyId p) const
{
    std::vector<const Message*> picked;
    for (const auto& m : pending_)
        if (m.sent + 1 == t && m.addressed_to(p)) picked.push_back(&m);
    if (policy_ == OrderingPolicy::adversary_first)
        std::stable_partition(picked.begin(), picked.end(), [&](const Message* m) { return corrupted_[m->sender]; });
    Inbox in;
    for (const Message* m : picked) {
        in.arrivals.push_back(m->arrival);
        switch (kind_of(m->payload)) {
        case PayloadKind::fruit: in.fruits.push_back(std::get<Fruit>(m->payload)); break;
        case PayloadKind::block: in.blocks.push_back(std::get<BlockPtr>(m->payload)); break;
        case PayloadKind::block_array: {
            const auto& arr = std::get<BlockArray>(m->payload);
            in.blocks.insert(in.blocks.end(), arr->begin(), arr->end());
            break;
        }
        }
    }
    return in;
}

std::vector<const Message*> DiffuseNetwork::sent_in(Round t) const
{
    std::vector<const Message*> out;
    for (const auto& m : pending_)
        if (m.sent == t) out.push_back(&m);
    return out;
}

void DiffuseNetwork::prune(Round t)
{
    std::erase_if(pending_, [&](const Message& m) { return m.sent + 1 < t; });
}

void AuthChannel::connect(PartyId a, PartyId b)
{
    edges_.insert({std::min(a, b), std::max(a, b)});
}

void AuthChannel::disconnect(PartyId a, PartyId b)
{
    edges_.erase({std::min(a, b), std::max(a, b)});
}

bool AuthChannel::has_edge(PartyId a, PartyId b) const
{
    return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
}

bool AuthChannel::send(PartyId from, PartyId to, AuthMessage msg)
{
    if (!has_edge(from, to)) return false;
    msg.sender = from;
    box_.emplace_back(to, std::move(msg));
    return true;
}

std::optional<AuthMessage> AuthChannel::receive(PartyId p, Round t, PartyId from) const
{
    std::optional<AuthMessage> out;
    for (const auto& [to, msg] : box_)
        if (to == p && msg.round == t && msg.sender == from) out = msg;
    return out;
}

void AuthChannel::clear_before(Round t)
{
    std::erase_if(box_, [&](const auto& e) { return e.second.round < t; });
}

} // namespace fruitpool
