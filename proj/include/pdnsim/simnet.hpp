#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdnsim/messages.hpp"
#include "pdnsim/net.hpp"
#include "pdnsim/rng.hpp"

namespace pdnsim {

class World;

// A simulation actor. Nodes are owned by the scenario; the world holds
// non-owning pointers and routes messages to them.
class Node {
  public:
    virtual ~Node() = default;
    virtual void on_message(World& world, const std::string& from, const Message& msg) = 0;
};

// ============================================================================
// World: a deterministic discrete-event network
//
// Every state change happens inside an event. Events fire in (time, sequence)
// order, where the sequence number breaks ties by scheduling order, so a run
// is a pure function of the seed and the configuration. A running fold over
// the executed event stream (the trace hash) makes two runs comparable at a
// glance.
// ============================================================================

class World {
  public:
    explicit World(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t now_ms() const { return now_; }
    std::uint64_t seed() const { return seed_; }

    // --- topology -----------------------------------------------------------

    void register_node(const std::string& id, Node* node, NetAddr addr, LinkModel link,
                       NodeKind kind) {
        if (nodes_.count(id)) throw std::invalid_argument("duplicate node id: " + id);
        if (addr.routable() && addr_index_.count(addr.key()))
            throw std::invalid_argument("duplicate node address: " + format_addr(addr));
        nodes_[id] = NodeInfo{node, addr, link, kind};
        if (addr.routable()) addr_index_[addr.key()] = id;
    }

    bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }

    const NetAddr& addr_of(const std::string& id) const { return info(id).addr; }
    NodeKind kind_of(const std::string& id) const { return info(id).kind; }

    const std::string* node_by_addr(const NetAddr& addr) const {
        auto it = addr_index_.find(addr.key());
        return it == addr_index_.end() ? nullptr : &it->second;
    }

    // Overrides the computed link for both directions of one pair.
    void set_link_override(const std::string& a, const std::string& b, LinkModel link) {
        link_overrides_[ordered_pair(a, b)] = link;
    }

    // --- randomness ---------------------------------------------------------

    // Named substream of the world seed. Draw counts in one stream never
    // shift another, and no stream depends on event timing.
    Rng& rng(const std::string& label) {
        auto it = rngs_.find(label);
        if (it == rngs_.end())
            it = rngs_.emplace(label, Rng(substream_seed(seed_, label))).first;
        return it->second;
    }

    // --- scheduling ---------------------------------------------------------

    std::uint64_t schedule(std::uint64_t delay_ms, std::string label,
                           std::function<void(World&)> fn) {
        std::uint64_t seq = next_seq_++;
        queue_.push(Event{now_ + delay_ms, seq, std::move(label), std::move(fn)});
        return seq;
    }

    /**
     * Queues delivery of `msg` to a node id. The transfer is store-and-forward:
     * latency plus serialization at the bottleneck bandwidth, never delivered
     * before an earlier message on the same directed pair (FIFO order).
     * Returns the delivery time.
     */
    std::uint64_t send(const std::string& from, const std::string& to, Message msg) {
        std::uint64_t size = wire_size(msg);
        LinkModel link = effective_link(from, to);
        std::uint64_t tx = (size == 0) ? 0 : ceil_div(size * 1000, link.bandwidth_bps);
        std::uint64_t at = now_ + link.latency_ms + tx;
        std::uint64_t& last = fifo_floor_[ordered_pair_directed(from, to)];
        if (at < last) at = last;
        last = at;
        bytes_sent_ += size;
        ++messages_sent_;

        std::string label = std::string("m:") + kind_name(msg) + ":" + from + ">" + to;
        std::uint64_t seq = next_seq_++;
        queue_.push(Event{at, seq, std::move(label),
                          [to, m = std::move(msg), from](World& w) {
                              auto it = w.nodes_.find(to);
                              if (it == w.nodes_.end()) return;
                              if (w.delivery_probe_) w.delivery_probe_(to, m);
                              it->second.node->on_message(w, from, m);
                          }});
        return at;
    }

    // Address-directed send. Unroutable or unknown destinations are dropped
    // (counted, and folded into the trace at the send site).
    void send_to_addr(const std::string& from, const NetAddr& to_addr, Message msg) {
        const std::string* to = to_addr.routable() ? node_by_addr(to_addr) : nullptr;
        if (!to) {
            ++messages_dropped_;
            fold_trace(now_, next_seq_++,
                       std::string("drop:") + kind_name(msg) + ":" + from);
            return;
        }
        send(from, *to, std::move(msg));
    }

    // --- execution ----------------------------------------------------------

    // Runs every event with fire time <= t_ms, then advances the clock to t_ms.
    std::uint64_t run_until(std::uint64_t t_ms) {
        std::uint64_t executed = 0;
        while (!queue_.empty() && queue_.top().time <= t_ms) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            fold_trace(ev.time, ev.seq, ev.label);
            ++events_processed_;
            ++executed;
            if (events_processed_ > event_limit_)
                throw std::runtime_error("event limit exceeded; runaway schedule?");
            ev.fn(*this);
        }
        now_ = t_ms;
        return executed;
    }

    bool idle() const { return queue_.empty(); }

    // --- observability ------------------------------------------------------

    std::uint64_t trace_hash() const { return trace_; }
    std::uint64_t events_processed() const { return events_processed_; }
    std::uint64_t messages_sent() const { return messages_sent_; }
    std::uint64_t messages_dropped() const { return messages_dropped_; }
    std::uint64_t bytes_sent() const { return bytes_sent_; }

    // Test hook: observe every delivered message.
    void set_delivery_probe(std::function<void(const std::string& to, const Message&)> probe) {
        delivery_probe_ = std::move(probe);
    }

    void set_event_limit(std::uint64_t limit) { event_limit_ = limit; }

  private:
    struct Event {
        std::uint64_t time;
        std::uint64_t seq;
        std::string label;
        std::function<void(World&)> fn;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    struct NodeInfo {
        Node* node = nullptr;
        NetAddr addr;
        LinkModel link;
        NodeKind kind = NodeKind::peer;
    };

    static std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

    static std::pair<std::string, std::string> ordered_pair(const std::string& a,
                                                            const std::string& b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }
    static std::pair<std::string, std::string> ordered_pair_directed(const std::string& a,
                                                                     const std::string& b) {
        return {a, b};
    }

    const NodeInfo& info(const std::string& id) const {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw std::out_of_range("unknown node id: " + id);
        return it->second;
    }

    // Pair link: override if present, otherwise both access latencies in
    // series with the slower endpoint as the bottleneck.
    LinkModel effective_link(const std::string& from, const std::string& to) const {
        auto it = link_overrides_.find(ordered_pair(from, to));
        if (it != link_overrides_.end()) return it->second;
        const NodeInfo& a = info(from);
        const NodeInfo& b = info(to);
        return LinkModel{a.link.latency_ms + b.link.latency_ms,
                         std::min(a.link.bandwidth_bps, b.link.bandwidth_bps)};
    }

    void fold_trace(std::uint64_t time, std::uint64_t seq, const std::string& label) {
        trace_ = fnv64_u64(time, trace_);
        trace_ = fnv64_u64(seq, trace_);
        trace_ = fnv64(label, trace_);
    }

    std::uint64_t seed_;
    std::uint64_t now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t trace_ = kFnvOffset;
    std::uint64_t events_processed_ = 0;
    std::uint64_t messages_sent_ = 0;
    std::uint64_t messages_dropped_ = 0;
    std::uint64_t bytes_sent_ = 0;
    std::uint64_t event_limit_ = 100000000;

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::map<std::string, NodeInfo> nodes_;
    std::map<std::uint64_t, std::string> addr_index_;
    std::map<std::pair<std::string, std::string>, LinkModel> link_overrides_;
    std::map<std::pair<std::string, std::string>, std::uint64_t> fifo_floor_;
    std::map<std::string, Rng> rngs_;
    std::function<void(const std::string&, const Message&)> delivery_probe_;
};

// ============================================================================
// Address reflection service
// ============================================================================

// Answers "what address do you appear from" queries with the requester's
// registered public address. Nodes listed as broken get an unroutable answer,
// modeling a NAT without usable reflexive mapping.
class StunServer : public Node {
  public:
    void mark_broken(const std::string& node_id) { broken_.insert(node_id); }

    void on_message(World& world, const std::string& from, const Message& msg) override {
        if (!msg.get_if<StunRequest>()) return;
        StunResponse resp;
        if (!broken_.count(from)) resp.mapped = world.addr_of(from);
        world.send(self_id(world), from, resp);
    }

    // The stun node's id is fixed by convention.
    static constexpr const char* kId = "stun";

  private:
    static std::string self_id(World&) { return kId; }
    std::set<std::string> broken_;
};

}  // namespace pdnsim
