#pragma once

#include <bigref/iso.hpp>
#include <bigref/operations.hpp>
#include <bigref/term.hpp>

namespace bigref {

/// (redex, reactum, eta). Both sides have one region and the same outer names;
/// eta[j] is the redex hole whose parameter fills reactum hole j.
class ReactionRule {
public:
    ReactionRule(std::string name, Bigraph redex, Bigraph reactum, std::vector<std::size_t> eta)
        : name_(std::move(name)), redex_(std::move(redex)), eta_(std::move(eta)) {
        if (redex_.outer().width != 1)
            throw InvalidArgument("rule " + name_ + ": only single-region redexes are supported");
        if (redex_.child_nodes(Place::region(0)).empty())
            throw InvalidArgument("rule " + name_ + ": redex region is idle");
        if (redex_.edge_count() > 0 || !redex_.inner().names.empty())
            throw InvalidArgument("rule " + name_ + ": redex may not have edges or inner names");
        if (!reactum.inner().names.empty())
            throw InvalidArgument("rule " + name_ + ": reactum may not have inner names");
        if (reactum.outer().width != 1) throw InvalidArgument("rule " + name_ + ": reactum must have one region");
        for (const auto& y : reactum.outer().names)
            if (!redex_.outer().names.contains(y))
                throw InvalidArgument("rule " + name_ + ": reactum name '" + y + "' does not occur in the redex");
        reactum_ = with_idle_names(reactum, redex_.outer().names);
        if (eta_.size() != reactum_.inner().width)
            throw InvalidArgument("rule " + name_ + ": instantiation map must cover every reactum hole");
        for (auto j : eta_)
            if (j >= redex_.inner().width)
                throw InvalidArgument("rule " + name_ + ": instantiation image $" + std::to_string(j) +
                                      " is not a redex hole");
    }

    const std::string& name() const { return name_; }
    const Bigraph& redex() const { return redex_; }
    const Bigraph& reactum() const { return reactum_; }
    const std::vector<std::size_t>& eta() const { return eta_; }

    bool identity_eta() const {
        if (eta_.size() != redex_.inner().width) return false;
        for (std::size_t j = 0; j < eta_.size(); ++j)
            if (eta_[j] != j) return false;
        return true;
    }

private:
    std::string name_;
    Bigraph redex_;
    Bigraph reactum_;
    std::vector<std::size_t> eta_;
};

inline ReactionRule elaborate_rule(const RuleSource& src, const Signature& sig) {
    try {
        return ReactionRule(src.name, elaborate(src.redex, sig), elaborate(src.reactum, sig), src.eta);
    } catch (const ElaborationError& e) {
        throw ElaborationError("rule " + src.name + ": " + e.what());
    }
}

inline ReactionRule elaborate_rule(std::string_view src, const Signature& sig) {
    return elaborate_rule(parse_rule(src), sig);
}

/// Decomposition of an agent as context . (redex (x) id_Z) . params.
struct Match {
    Bigraph context;
    /// One ground parameter per redex hole.
    std::vector<Bigraph> params;
    /// Names carrying the parameters' links through the redex.
    NameSet z_names;
    /// Agent link each redex outer name is bound to.
    std::map<std::string, Link> name_binding;
};

/// Occurrence of a single-region pattern inside an agent, before decomposition.
struct Embedding {
    Place locus;
    std::vector<NodeId> nodes;
    std::vector<std::vector<NodeId>> hole_roots;
    std::map<std::string, Link> names;
};

namespace detail {

inline bool active_path(const Bigraph& agent, Place p) {
    while (p.is_node()) {
        const auto& n = agent.node(p.index);
        if (!n.control.active()) return false;
        p = n.parent;
    }
    return true;
}

/// Enumerates every embedding of a pattern: pattern roots onto children of a
/// common locus, node children exact unless the pattern node has holes, leftover
/// siblings distributed over the holes (and, at the locus, the context).
class EmbeddingSearch {
public:
    EmbeddingSearch(const Bigraph& agent, const Bigraph& pattern, bool require_active)
        : agent_(agent), pattern_(pattern), require_active_(require_active) {}

    std::vector<Embedding> run(std::size_t limit = 0) {
        limit_ = limit;
        std::vector<Place> loci;
        for (std::size_t r = 0; r < agent_.outer().width; ++r) loci.push_back(Place::region(r));
        for (NodeId v = 0; v < agent_.node_count(); ++v) loci.push_back(Place::node(v));
        for (auto locus : loci) {
            if (require_active_ && !active_path(agent_, locus)) continue;
            State s;
            s.nodes.assign(pattern_.node_count(), kNone);
            s.used.assign(agent_.node_count(), false);
            s.hole_roots.assign(pattern_.inner().width, {});
            s.work.push_back({Place::region(0), locus});
            s.locus = locus;
            solve(std::move(s));
            if (done()) break;
        }
        return std::move(found_);
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    struct State {
        Place locus;
        std::vector<NodeId> nodes;
        std::vector<bool> used;
        std::vector<std::vector<NodeId>> hole_roots;
        std::map<std::string, Link> names;
        std::vector<std::pair<Place, Place>> work;
    };

    bool done() const { return limit_ != 0 && found_.size() >= limit_; }

    void solve(State s) {
        if (done()) return;
        if (s.work.empty()) {
            found_.push_back(Embedding{s.locus, std::move(s.nodes), std::move(s.hole_roots), std::move(s.names)});
            return;
        }
        auto [pp, ap] = s.work.back();
        s.work.pop_back();
        const auto& pnodes = pattern_.child_nodes(pp);
        if (pnodes.size() > agent_.child_nodes(ap).size()) return;
        assign(std::move(s), pp, ap, 0);
    }

    bool bind_ports(State& s, NodeId pv, NodeId av) const {
        const auto& pp = pattern_.node(pv).ports;
        const auto& ap = agent_.node(av).ports;
        for (std::size_t k = 0; k < pp.size(); ++k) {
            const auto& x = pp[k].name;
            const auto& target = ap.at(k);
            auto it = s.names.find(x);
            if (it != s.names.end()) {
                if (!(it->second == target)) return false;
                continue;
            }
            for (const auto& [_, bound] : s.names)
                if (bound == target) return false;
            s.names.emplace(x, target);
        }
        return true;
    }

    void assign(State s, Place pp, Place ap, std::size_t idx) {
        if (done()) return;
        const auto& pnodes = pattern_.child_nodes(pp);
        if (idx == pnodes.size()) {
            distribute(std::move(s), pp, ap);
            return;
        }
        const auto pv = pnodes[idx];
        for (auto av : agent_.child_nodes(ap)) {
            if (s.used[av] || !(agent_.node(av).control == pattern_.node(pv).control)) continue;
            State next = s;
            if (!bind_ports(next, pv, av)) continue;
            next.used[av] = true;
            next.nodes[pv] = av;
            next.work.push_back({Place::node(pv), Place::node(av)});
            assign(std::move(next), pp, ap, idx + 1);
        }
    }

    void distribute(State s, Place pp, Place ap) {
        std::vector<NodeId> leftovers;
        for (auto av : agent_.child_nodes(ap))
            if (!s.used[av]) leftovers.push_back(av);
        const auto& holes = pattern_.child_holes(pp);
        const bool to_context = pp.is_region();
        const std::size_t targets = holes.size() + (to_context ? 1 : 0);
        if (leftovers.empty()) {
            solve(std::move(s));
            return;
        }
        if (targets == 0) return;
        std::vector<std::size_t> choice(leftovers.size(), 0);
        while (true) {
            State next = s;
            for (std::size_t i = 0; i < leftovers.size(); ++i)
                if (choice[i] < holes.size()) next.hole_roots[holes[choice[i]]].push_back(leftovers[i]);
            solve(std::move(next));
            if (done()) return;
            std::size_t i = 0;
            while (i < choice.size() && ++choice[i] == targets) choice[i++] = 0;
            if (i == choice.size()) break;
        }
    }

    const Bigraph& agent_;
    const Bigraph& pattern_;
    bool require_active_;
    std::size_t limit_ = 0;
    std::vector<Embedding> found_;
};

inline std::string z_name(std::size_t i) { return "%" + std::to_string(i); }

inline void collect_subtree(const Bigraph& b, NodeId root, std::vector<NodeId>& out) {
    out.push_back(root);
    for (auto c : b.child_nodes(Place::node(root))) collect_subtree(b, c, out);
}

} // namespace detail

/// All embeddings of a single-region pattern. With require_active, the locus and
/// every node above it must carry active controls.
inline std::vector<Embedding> find_embeddings(const Bigraph& agent, const Bigraph& pattern, bool require_active,
                                              std::size_t limit = 0) {
    if (!agent.is_ground()) throw InvalidArgument("matching requires a ground agent");
    if (pattern.outer().width != 1) throw InvalidArgument("patterns must have exactly one region");
    return detail::EmbeddingSearch(agent, pattern, require_active).run(limit);
}

/// Context and parameters induced by an embedding.
inline Match decompose(const Bigraph& agent, const Bigraph& redex, const Embedding& emb) {
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> role(agent.node_count(), none);  // none = context
    const std::size_t image_role = redex.inner().width;
    for (auto v : emb.nodes) role[v] = image_role;

    std::vector<std::vector<NodeId>> param_nodes(emb.hole_roots.size());
    for (std::size_t j = 0; j < emb.hole_roots.size(); ++j)
        for (auto r : emb.hole_roots[j]) detail::collect_subtree(agent, r, param_nodes[j]);
    for (std::size_t j = 0; j < param_nodes.size(); ++j)
        for (auto v : param_nodes[j]) role[v] = j;

    // Z names, in parameter order.
    std::map<Link, std::string> z_of;
    NameSet z_names;
    for (const auto& nodes : param_nodes)
        for (auto v : nodes)
            for (const auto& l : agent.node(v).ports)
                if (!z_of.contains(l)) {
                    auto z = detail::z_name(z_of.size());
                    z_of.emplace(l, z);
                    z_names.insert(z);
                }

    Match m;
    m.z_names = z_names;
    m.name_binding = emb.names;

    NameSet context_inner = redex.outer().names;
    context_inner.insert(z_names.begin(), z_names.end());
    BigraphBuilder ctx(Interface{1, context_inner}, agent.outer());
    for (std::size_t e = 0; e < agent.edge_count(); ++e) ctx.add_edge();
    std::vector<NodeId> ctx_id(agent.node_count(), none);
    for (NodeId v = 0; v < agent.node_count(); ++v)
        if (role[v] == none) ctx_id[v] = ctx.add_node(agent.node(v).control, Place::region(0), agent.node(v).ports);
    auto translate = [&](Place p) {
        if (p.is_region()) return p;
        if (ctx_id[p.index] == none) throw StaleMatch("embedding places context below matched nodes");
        return Place::node(ctx_id[p.index]);
    };
    for (NodeId v = 0; v < agent.node_count(); ++v)
        if (role[v] == none) ctx.set_parent(ctx_id[v], translate(agent.node(v).parent));
    ctx.set_hole_parent(0, translate(emb.locus));
    for (const auto& [x, l] : emb.names) ctx.set_inner_link(x, l);
    for (const auto& [l, z] : z_of) ctx.set_inner_link(z, l);
    m.context = std::move(ctx).build();

    for (std::size_t j = 0; j < param_nodes.size(); ++j) {
        NameSet names;
        for (auto v : param_nodes[j])
            for (const auto& l : agent.node(v).ports) names.insert(z_of.at(l));
        BigraphBuilder d(Interface{}, Interface{1, names});
        std::map<NodeId, NodeId> local;
        for (auto v : param_nodes[j]) {
            std::vector<Link> ports;
            for (const auto& l : agent.node(v).ports) ports.push_back(Link::to_name(z_of.at(l)));
            local[v] = d.add_node(agent.node(v).control, Place::region(0), std::move(ports));
        }
        for (auto v : param_nodes[j]) {
            auto p = agent.node(v).parent;
            if (p.is_node() && local.contains(p.index)) d.set_parent(local[v], Place::node(local[p.index]));
        }
        m.params.push_back(std::move(d).build());
    }
    return m;
}

/// The parameters side by side as one bigraph <0,{}> -> <k, Z>, sharing names.
inline Bigraph params_as_one(const std::vector<Bigraph>& params, const NameSet& z_names) {
    Bigraph acc = BigraphBuilder(Interface{}, Interface{0, z_names}).build();
    for (const auto& p : params) acc = parallel_product(acc, p);
    return acc;
}

/// eta-instantiated parameters: reactum hole j receives a fresh copy of params[eta[j]].
inline Bigraph instantiate(const ReactionRule& rule, const Match& m) {
    std::vector<Bigraph> chosen;
    chosen.reserve(rule.eta().size());
    for (auto j : rule.eta()) chosen.push_back(m.params.at(j));
    return params_as_one(chosen, m.z_names);
}

/// context . (redex (x) id_Z) . params, which must be iso to the matched agent.
inline Bigraph recompose(const ReactionRule& rule, const Match& m) {
    const auto id_z = identity(Interface{0, m.z_names});
    return compose(m.context, compose(tensor(rule.redex(), id_z), params_as_one(m.params, m.z_names)));
}

namespace detail {

/// Context and parameters glued around a marker node in place of the redex;
/// two matches are the same decomposition iff their keys are iso.
inline Bigraph decomposition_key(const Bigraph& redex, const Match& m) {
    const auto& names = redex.outer().names;
    const auto width = redex.inner().width;
    BigraphBuilder marker(Interface{width, {}}, Interface{1, names});
    std::vector<Link> ports;
    for (const auto& x : names) ports.push_back(Link::to_name(x));
    const auto top = marker.add_node(Control{"#match", names.size(), Activity::active}, Place::region(0), ports);
    for (std::size_t j = 0; j < width; ++j) {
        const auto slot = marker.add_node(Control{"#param" + std::to_string(j), 0, Activity::active}, Place::node(top));
        marker.set_hole_parent(j, Place::node(slot));
    }
    const auto id_z = identity(Interface{0, m.z_names});
    return compose(m.context, compose(tensor(std::move(marker).build(), id_z), params_as_one(m.params, m.z_names)));
}

} // namespace detail

/// Keeps one representative per iso class, first-seen order.
class IsoSet {
public:
    /// Index of the class of b, inserting it if new; the bool reports insertion.
    std::pair<std::size_t, bool> insert(const Bigraph& b) {
        auto fp = fingerprint(b);
        auto& bucket = buckets_[fp];
        for (auto i : bucket)
            if (iso(items_[i], b)) return {i, false};
        bucket.push_back(items_.size());
        items_.push_back(b);
        return {items_.size() - 1, true};
    }

    std::optional<std::size_t> find(const Bigraph& b) const {
        auto it = buckets_.find(fingerprint(b));
        if (it == buckets_.end()) return std::nullopt;
        for (auto i : it->second)
            if (iso(items_[i], b)) return i;
        return std::nullopt;
    }

    const std::vector<Bigraph>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

private:
    std::map<std::uint64_t, std::vector<std::size_t>> buckets_;
    std::vector<Bigraph> items_;
};

/// Every match of the rule in a ground agent with an active context, one per
/// iso class of decomposition.
inline std::vector<Match> find_matches(const Bigraph& agent, const ReactionRule& rule) {
    std::vector<Match> out;
    IsoSet seen;
    for (const auto& emb : find_embeddings(agent, rule.redex(), true)) {
        auto m = decompose(agent, rule.redex(), emb);
        if (seen.insert(detail::decomposition_key(rule.redex(), m)).second) out.push_back(std::move(m));
    }
    return out;
}

/// context . (reactum (x) id_Z) . eta(params). Throws StaleMatch when the match
/// does not recompose to the agent.
inline Bigraph apply_match(const Bigraph& agent, const ReactionRule& rule, const Match& m) {
    if (!iso(recompose(rule, m), agent)) throw StaleMatch("match of rule " + rule.name() + " does not fit the agent");
    const auto id_z = identity(Interface{0, m.z_names});
    return compose(m.context, compose(tensor(rule.reactum(), id_z), instantiate(rule, m)));
}

} // namespace bigref
