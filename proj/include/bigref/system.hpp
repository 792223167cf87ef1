#pragma once

#include <bigref/reaction.hpp>

#include <deque>
#include <span>

namespace bigref {

/// A bigraphical reactive system: signature, rules and named seed agents.
struct Brs {
    std::string name;
    Signature signature;
    std::vector<ReactionRule> rules;
    std::vector<std::pair<std::string, Bigraph>> seeds;

    const Bigraph* seed(std::string_view n) const {
        for (const auto& [k, b] : seeds)
            if (k == n) return &b;
        return nullptr;
    }

    const ReactionRule* rule(std::string_view n) const {
        for (const auto& r : rules)
            if (r.name() == n) return &r;
        return nullptr;
    }
};

/// Every rule and seed validates against the signature, and seeds are ground.
inline std::vector<Violation> validate(const Brs& brs) {
    std::vector<Violation> out;
    auto add = [&](const std::string& where, const std::vector<Violation>& vs) {
        for (const auto& v : vs) out.push_back({v.kind, where + ": " + v.detail});
    };
    for (const auto& r : brs.rules) {
        add("rule " + r.name() + " redex", validate(r.redex(), brs.signature));
        add("rule " + r.name() + " reactum", validate(r.reactum(), brs.signature));
    }
    for (const auto& [n, b] : brs.seeds) {
        add("agent " + n, validate(b, brs.signature));
        if (!b.is_ground()) out.push_back({"not ground", "agent " + n + " has holes or inner names"});
    }
    return out;
}

/// Stable text key: the canonical term when there is one.
inline std::string canonical_key(const Bigraph& b) {
    if (!term_obstruction(b, true)) {
        std::string out = print_term_dropping_idle(b);
        std::string idle;
        for (const auto& [y, d] : b.name_degrees())
            if (d == 0) idle += (idle.empty() ? "" : ",") + y;
        return idle.empty() ? out : out + " / {" + idle + "}";
    }
    static const char* hex = "0123456789abcdef";
    auto fp = fingerprint(b);
    std::string out = "#";
    for (int i = 15; i >= 0; --i) out += hex[(fp >> (4 * i)) & 0xf];
    return out;
}

/// Term if expressible (idle outer names omitted), otherwise a short structural description.
inline std::string render(const Bigraph& b) {
    if (!term_obstruction(b, true)) return print_term_dropping_idle(b);
    return "<bigraph " + to_string(b.inner()) + " -> " + to_string(b.outer()) + ", " + std::to_string(b.node_count()) +
           " nodes, " + std::to_string(b.edge_count()) + " edges, key " + canonical_key(b) + ">";
}

/// A successor together with the rules that produce it.
struct Reaction {
    std::vector<std::string> rules;
    Bigraph result;
};

namespace detail {

inline void sort_canonically(std::vector<Reaction>& rs) {
    std::vector<std::pair<std::string, std::size_t>> keys;
    for (std::size_t i = 0; i < rs.size(); ++i) keys.emplace_back(canonical_key(rs[i].result), i);
    std::stable_sort(keys.begin(), keys.end());
    std::vector<Reaction> sorted;
    for (const auto& [_, i] : keys) sorted.push_back(std::move(rs[i]));
    rs = std::move(sorted);
}

} // namespace detail

/// One-step reactions of a ground agent, deduplicated up to iso, in canonical order.
inline std::vector<Reaction> reactions(const Bigraph& agent, const Brs& brs) {
    IsoSet seen;
    std::vector<Reaction> out;
    for (const auto& rule : brs.rules) {
        for (const auto& m : find_matches(agent, rule)) {
            auto next = apply_match(agent, rule, m);
            auto [idx, fresh] = seen.insert(next);
            if (fresh)
                out.push_back(Reaction{{rule.name()}, std::move(next)});
            else if (std::find(out[idx].rules.begin(), out[idx].rules.end(), rule.name()) == out[idx].rules.end())
                out[idx].rules.push_back(rule.name());
        }
    }
    detail::sort_canonically(out);
    return out;
}

inline std::vector<Bigraph> successors(const Bigraph& agent, const Brs& brs) {
    std::vector<Bigraph> out;
    for (auto& r : reactions(agent, brs)) out.push_back(std::move(r.result));
    return out;
}

/// True when some rule of the system rewrites `from` to something iso to `to`.
inline bool reacts_to(const Bigraph& from, const Bigraph& to, const Brs& brs) {
    for (const auto& next : successors(from, brs))
        if (iso(next, to)) return true;
    return false;
}

namespace detail {
struct TraceKey {
    explicit TraceKey() = default;
};
} // namespace detail

/// A finite sequence of agents, each reacting to the next. The empty trace is allowed.
class Trace {
public:
    Trace() = default;

    Trace(detail::TraceKey, std::vector<Bigraph> agents) : agents_(std::move(agents)) {}

    /// Throws InvalidArgument unless each adjacent pair is a reaction of brs.
    static Trace verified(const Brs& brs, std::vector<Bigraph> agents) {
        for (std::size_t i = 0; i + 1 < agents.size(); ++i)
            if (!reacts_to(agents[i], agents[i + 1], brs))
                throw InvalidArgument("no reaction of " + brs.name + " takes agent " + std::to_string(i) + " (" +
                                      render(agents[i]) + ") to agent " + std::to_string(i + 1) + " (" +
                                      render(agents[i + 1]) + ")");
        return Trace(detail::TraceKey{}, std::move(agents));
    }

    const std::vector<Bigraph>& agents() const { return agents_; }
    std::size_t size() const { return agents_.size(); }
    bool empty() const { return agents_.empty(); }
    const Bigraph& back() const { return agents_.back(); }

private:
    std::vector<Bigraph> agents_;
};

/// Pointwise iso.
inline bool same_agents(std::span<const Bigraph> a, std::span<const Bigraph> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!iso(a[i], b[i])) return false;
    return true;
}

struct ExplorationLimits {
    std::size_t max_states = 100000;
};

/// Caches successors of agents up to iso.
class SuccessorCache {
public:
    explicit SuccessorCache(const Brs& brs) : brs_(brs) {}

    const std::vector<Reaction>& of(const Bigraph& agent) {
        auto [idx, fresh] = agents_.insert(agent);
        if (fresh) results_.push_back(reactions(agent, brs_));
        return results_[idx];
    }

    bool reacts_to(const Bigraph& from, const Bigraph& to) {
        for (const auto& r : of(from))
            if (iso(r.result, to)) return true;
        return false;
    }

    const Brs& brs() const { return brs_; }

private:
    const Brs& brs_;
    IsoSet agents_;
    std::vector<std::vector<Reaction>> results_;
};

/// All traces from the seed with at most depth+1 agents, seed first; prefix-closed.
/// Throws BoundExceeded when more than max_states traces would be produced.
inline std::vector<Trace> traces_bounded(const Brs& brs, const Bigraph& seed, std::size_t depth,
                                         ExplorationLimits limits = {}) {
    if (!seed.is_ground()) throw InvalidArgument("seed must be a ground agent");
    SuccessorCache cache(brs);
    std::vector<Trace> out;
    std::vector<std::vector<Bigraph>> stack{{seed}};
    while (!stack.empty()) {
        auto t = std::move(stack.back());
        stack.pop_back();
        if (t.size() <= depth) {
            const auto& next = cache.of(t.back());
            for (auto it = next.rbegin(); it != next.rend(); ++it) {
                auto ext = t;
                ext.push_back(it->result);
                stack.push_back(std::move(ext));
            }
        }
        out.emplace_back(detail::TraceKey{}, std::move(t));
        if (out.size() > limits.max_states) throw BoundExceeded(limits.max_states);
    }
    return out;
}

/// Reachable agents from a set of seeds up to a depth, with a BFS tree for witness paths.
struct StateGraph {
    std::vector<Bigraph> states;
    std::vector<std::size_t> depth;
    std::vector<std::size_t> parent;  // npos for roots
    std::vector<std::string> via;     // rule names that first reached the state
    std::vector<std::vector<std::size_t>> next;
    std::vector<std::size_t> roots;
    std::size_t bound = 0;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool expanded(std::size_t i) const { return depth[i] < bound; }

    /// Agents on the BFS path from a root to state i.
    std::vector<Bigraph> path_to(std::size_t i) const {
        std::vector<Bigraph> out;
        for (auto s = i; s != npos; s = parent[s]) out.push_back(states[s]);
        std::reverse(out.begin(), out.end());
        return out;
    }
};

inline StateGraph explore(SuccessorCache& cache, std::span<const Bigraph> seeds, std::size_t depth,
                          ExplorationLimits limits = {}) {
    StateGraph g;
    g.bound = depth;
    IsoSet index;
    std::deque<std::size_t> queue;
    auto intern = [&](const Bigraph& b, std::size_t d, std::size_t parent, std::string via) {
        auto [i, fresh] = index.insert(b);
        if (fresh) {
            if (index.size() > limits.max_states) throw BoundExceeded(limits.max_states);
            g.states.push_back(b);
            g.depth.push_back(d);
            g.parent.push_back(parent);
            g.via.push_back(std::move(via));
            g.next.emplace_back();
            queue.push_back(i);
        }
        return i;
    };
    for (const auto& s : seeds) {
        if (!s.is_ground()) throw InvalidArgument("seed must be a ground agent");
        g.roots.push_back(intern(s, 0, StateGraph::npos, {}));
    }
    while (!queue.empty()) {
        auto i = queue.front();
        queue.pop_front();
        if (!g.expanded(i)) continue;
        const auto agent = g.states[i];
        for (const auto& r : cache.of(agent)) {
            std::string via;
            for (const auto& n : r.rules) via += (via.empty() ? "" : ",") + n;
            auto j = intern(r.result, g.depth[i] + 1, i, via);
            g.next[i].push_back(j);
        }
    }
    return g;
}

} // namespace bigref
