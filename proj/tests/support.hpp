#pragma once

#include <bigref/bigref.hpp>

#include <random>

#ifndef BIGREF_CORPUS_DIR
#define BIGREF_CORPUS_DIR "corpus"
#endif

namespace bigref::test {

inline std::string corpus(const std::string& file) { return std::string(BIGREF_CORPUS_DIR) + "/" + file; }

inline const BrsFile& notify() {
    static const BrsFile f = load_brs(corpus("notify.brs"));
    return f;
}
inline const BrsFile& selective() {
    static const BrsFile f = load_brs(corpus("selective.brs"));
    return f;
}
inline const BrsFile& ccs() {
    static const BrsFile f = load_brs(corpus("ccs.brs"));
    return f;
}

inline Signature sig_s() { return selective().brs.signature; }

/// A signature with linked controls and a passive one, for coverage beyond the corpus.
inline Signature sig_linked() {
    Signature s;
    s.add(Control{"A", 0, Activity::active});
    s.add(Control{"B", 0, Activity::active});
    s.add(Control{"K", 1, Activity::active});
    s.add(Control{"L", 2, Activity::active});
    s.add(Control{"P", 0, Activity::passive});
    return s;
}

inline Bigraph term(std::string_view src, const Signature& sig) { return elaborate(src, sig); }

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline Interface random_interface(Rng& rng, const std::vector<std::string>& pool, std::size_t max_width = 2) {
    Interface i;
    i.width = pick(rng, max_width + 1);
    for (const auto& x : pool)
        if (pick(rng, 2)) i.names.insert(x);
    return i;
}

/// Random well-formed bigraph inner -> outer with at most max_nodes nodes. Parents are drawn
/// among regions and earlier nodes, so the place graph is acyclic by construction.
inline Bigraph random_bigraph(Rng& rng, const Signature& sig, const Interface& inner, const Interface& outer,
                              std::size_t max_nodes, bool allow_edges = true) {
    const auto controls = sig.controls();
    const std::size_t n = outer.width == 0 ? 0 : pick(rng, max_nodes + 1);
    BigraphBuilder b(inner, outer);
    const std::vector<std::string> outer_names(outer.names.begin(), outer.names.end());
    std::size_t edges = 0;
    auto random_link = [&]() -> Link {
        const std::size_t choices = outer_names.size() + edges + (allow_edges ? 1 : 0);
        if (choices == 0) {
            b.add_edge();
            return Link::to_edge(edges++);
        }
        auto c = pick(rng, choices);
        if (c < outer_names.size()) return Link::to_name(outer_names[c]);
        c -= outer_names.size();
        if (c < edges) return Link::to_edge(c);
        b.add_edge();
        return Link::to_edge(edges++);
    };
    auto random_place = [&](std::size_t nodes_so_far) {
        auto c = pick(rng, outer.width + nodes_so_far);
        return c < outer.width ? Place::region(c) : Place::node(c - outer.width);
    };
    for (std::size_t v = 0; v < n; ++v) {
        const auto& c = controls[pick(rng, controls.size())];
        std::vector<Link> ports;
        for (std::size_t p = 0; p < c.arity; ++p) ports.push_back(random_link());
        b.add_node(c, random_place(v), std::move(ports));
    }
    for (std::size_t h = 0; h < inner.width; ++h) {
        if (outer.width == 0 && n == 0) throw InvalidArgument("random_bigraph: holes with nowhere to go");
        b.set_hole_parent(h, random_place(n));
    }
    for (const auto& x : inner.names) b.set_inner_link(x, random_link());
    return std::move(b).build();
}

/// Random ground single-region term-shaped agent (no edges).
inline Bigraph random_agent(Rng& rng, const Signature& sig, std::size_t max_nodes, const std::vector<std::string>& names,
                            std::size_t width = 1) {
    Interface outer{width, NameSet(names.begin(), names.end())};
    return random_bigraph(rng, sig, Interface{}, outer, max_nodes, true);
}

/// Random one-region redex: at least one node, holes 0..max_holes, ports to fresh outer names
/// (possibly shared), no edges, no idle names.
inline Bigraph random_redex(Rng& rng, const Signature& sig, std::size_t max_nodes, std::size_t max_holes) {
    const auto controls = sig.controls();
    const std::size_t n = 1 + pick(rng, max_nodes);
    const std::size_t holes = pick(rng, max_holes + 1);
    std::vector<Control> cs;
    std::vector<std::vector<std::string>> ports;
    NameSet names;
    const std::vector<std::string> pool{"x", "y", "z"};
    for (std::size_t v = 0; v < n; ++v) {
        cs.push_back(controls[pick(rng, controls.size())]);
        ports.emplace_back();
        for (std::size_t p = 0; p < cs.back().arity; ++p) {
            ports.back().push_back(pool[pick(rng, pool.size())]);
            names.insert(ports.back().back());
        }
    }
    BigraphBuilder b(Interface{holes, {}}, Interface{1, names});
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<Link> ls;
        for (const auto& x : ports[v]) ls.push_back(Link::to_name(x));
        const auto c = pick(rng, 1 + v);
        b.add_node(cs[v], c == 0 ? Place::region(0) : Place::node(c - 1), std::move(ls));
    }
    for (std::size_t h = 0; h < holes; ++h) {
        const auto c = pick(rng, 1 + n);
        b.set_hole_parent(h, c == 0 ? Place::region(0) : Place::node(c - 1));
    }
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Brute-force matcher oracle.
//
// Enumerates every injection of redex nodes into agent nodes (same control) and
// every assignment of the remaining agent nodes to the context or to a parameter,
// cuts the agent into a context and parameters accordingly, and keeps the cut iff
// context . (redex (x) id_Z) . params is iso to the agent and the context is active
// at its hole. Matches are compared through a marked recomposition that tags every
// redex node and every parameter node.

/// Marked recomposition: iso keys identify the same decomposition.
inline Bigraph marked_key(const Bigraph& redex, const Bigraph& context, const std::vector<Bigraph>& params,
                          const NameSet& z_names) {
    auto mark = [](const Bigraph& b, const std::string& prefix, bool by_index) {
        BigraphBuilder out(b.inner(), b.outer());
        for (std::size_t e = 0; e < b.edge_count(); ++e) out.add_edge();
        for (NodeId v = 0; v < b.node_count(); ++v) out.add_node(b.node(v).control, b.node(v).parent, b.node(v).ports);
        for (NodeId v = 0; v < b.node_count(); ++v)
            out.add_node(Control{prefix + (by_index ? std::to_string(v) : ""), 0, Activity::active}, Place::node(v));
        for (std::size_t h = 0; h < b.inner().width; ++h) out.set_hole_parent(h, b.hole_parents()[h]);
        for (const auto& [x, l] : b.inner_links()) out.set_inner_link(x, l);
        return std::move(out).build();
    };
    std::vector<Bigraph> marked_params;
    for (std::size_t j = 0; j < params.size(); ++j) marked_params.push_back(mark(params[j], "#p" + std::to_string(j), false));
    const auto id_z = identity(Interface{0, z_names});
    return compose(context, compose(tensor(mark(redex, "#r", true), id_z), params_as_one(marked_params, z_names)));
}

struct OracleResult {
    IsoSet keys;
    std::size_t candidates = 0;
};

inline OracleResult brute_force_matches(const Bigraph& agent, const Bigraph& redex) {
    OracleResult out;
    const std::size_t rn = redex.node_count();
    const std::size_t an = agent.node_count();
    const std::size_t holes = redex.inner().width;
    const std::size_t none = static_cast<std::size_t>(-1);
    if (rn > an) return out;

    std::vector<std::size_t> iota(rn, none);
    std::vector<bool> used(an, false);
    const auto order = agent.preorder();

    auto try_cut = [&](const std::vector<std::size_t>& role) {
        // role[v]: none = context, holes = image, j < holes = parameter j.
        const std::size_t image = holes;
        ++out.candidates;
        // Locus: common parent of the images of redex roots.
        std::optional<Place> locus;
        for (auto r : redex.child_nodes(Place::region(0))) {
            auto p = agent.node(iota[r]).parent;
            if (locus && !(*locus == p)) return;
            locus = p;
        }
        if (locus->is_node() && role[locus->index] != none) return;
        for (Place p = *locus; p.is_node(); p = agent.node(p.index).parent)
            if (agent.node(p.index).control.activity != Activity::active) return;

        // Name binding, injective.
        std::map<std::string, Link> bind;
        for (NodeId r = 0; r < rn; ++r)
            for (std::size_t i = 0; i < redex.node(r).ports.size(); ++i) {
                const auto& x = redex.node(r).ports[i].name;
                const auto& l = agent.node(iota[r]).ports[i];
                auto [it, fresh] = bind.emplace(x, l);
                if (!fresh && !(it->second == l)) return;
            }
        std::set<Link> targets;
        for (const auto& [x, l] : bind)
            if (!targets.insert(l).second) return;

        std::map<Link, std::string> z_of;
        NameSet z_names;
        for (NodeId v = 0; v < an; ++v)
            if (role[v] != none && role[v] != image)
                for (const auto& l : agent.node(v).ports)
                    if (!z_of.contains(l)) {
                        z_of.emplace(l, "z" + std::to_string(z_of.size()));
                        z_names.insert(z_of.at(l));
                    }

        NameSet ctx_inner = redex.outer().names;
        ctx_inner.insert(z_names.begin(), z_names.end());
        BigraphBuilder c(Interface{1, ctx_inner}, agent.outer());
        for (std::size_t e = 0; e < agent.edge_count(); ++e) c.add_edge();
        std::vector<std::size_t> cid(an, none);
        for (NodeId v = 0; v < an; ++v)
            if (role[v] == none) cid[v] = c.add_node(agent.node(v).control, Place::region(0), agent.node(v).ports);
        for (NodeId v = 0; v < an; ++v) {
            if (role[v] != none) continue;
            auto p = agent.node(v).parent;
            if (p.is_node()) {
                if (cid[p.index] == none) return;
                p = Place::node(cid[p.index]);
            }
            c.set_parent(cid[v], p);
        }
        c.set_hole_parent(0, locus->is_node() ? Place::node(cid[locus->index]) : *locus);
        for (const auto& [x, l] : bind) c.set_inner_link(x, l);
        for (const auto& [l, z] : z_of) c.set_inner_link(z, l);
        const auto context = std::move(c).build();

        std::vector<Bigraph> params;
        for (std::size_t j = 0; j < holes; ++j) {
            NameSet names;
            std::map<NodeId, NodeId> local;
            for (NodeId v = 0; v < an; ++v)
                if (role[v] == j)
                    for (const auto& l : agent.node(v).ports) names.insert(z_of.at(l));
            BigraphBuilder d(Interface{}, Interface{1, names});
            for (NodeId v = 0; v < an; ++v) {
                if (role[v] != j) continue;
                std::vector<Link> ports;
                for (const auto& l : agent.node(v).ports) ports.push_back(Link::to_name(z_of.at(l)));
                local[v] = d.add_node(agent.node(v).control, Place::region(0), std::move(ports));
            }
            for (const auto& [v, lv] : local) {
                auto p = agent.node(v).parent;
                if (p.is_node() && local.contains(p.index)) d.set_parent(lv, Place::node(local.at(p.index)));
            }
            params.push_back(std::move(d).build());
        }

        const auto id_z = identity(Interface{0, z_names});
        if (!iso(compose(context, compose(tensor(redex, id_z), params_as_one(params, z_names))), agent)) return;
        out.keys.insert(marked_key(redex, context, params, z_names));
    };

    // Role assignment over non-image nodes in preorder; a node's options follow from its parent.
    std::function<void(std::size_t, std::vector<std::size_t>&)> assign = [&](std::size_t k,
                                                                          std::vector<std::size_t>& role) {
        if (k == order.size()) return try_cut(role);
        const auto v = order[k];
        if (role[v] == holes) return assign(k + 1, role);
        const auto parent = agent.node(v).parent;
        std::vector<std::size_t> options;
        if (parent.is_node() && role[parent.index] != none && role[parent.index] != holes) {
            options.push_back(role[parent.index]);
        } else if (parent.is_node() && role[parent.index] == holes) {
            for (std::size_t j = 0; j < holes; ++j) {
                auto hp = redex.hole_parents()[j];
                if (hp.is_node() && iota[hp.index] == parent.index) options.push_back(j);
            }
        } else {
            options.push_back(none);
            for (std::size_t j = 0; j < holes; ++j)
                if (redex.hole_parents()[j].is_region()) options.push_back(j);
        }
        for (auto o : options) {
            role[v] = o;
            assign(k + 1, role);
        }
        role[v] = none;
    };

    std::function<void(NodeId)> inject = [&](NodeId r) {
        if (r == rn) {
            std::vector<std::size_t> role(an, none);
            for (NodeId q = 0; q < rn; ++q) role[iota[q]] = holes;
            return assign(0, role);
        }
        for (NodeId v = 0; v < an; ++v) {
            if (used[v] || !(agent.node(v).control == redex.node(r).control)) continue;
            used[v] = true;
            iota[r] = v;
            inject(r + 1);
            used[v] = false;
        }
        iota[r] = none;
    };
    inject(0);
    return out;
}

/// find_matches against the oracle: same iso classes and no duplicates in find_matches.
struct OracleComparison {
    bool agree = false;
    std::size_t engine = 0;
    std::size_t oracle = 0;
};

inline OracleComparison compare_with_oracle(const Bigraph& agent, const ReactionRule& rule) {
    OracleComparison cmp;
    const auto ms = find_matches(agent, rule);
    const auto oracle = brute_force_matches(agent, rule.redex());
    IsoSet engine_keys;
    bool ok = true;
    for (const auto& m : ms) {
        if (!iso(recompose(rule, m), agent)) ok = false;
        auto key = marked_key(rule.redex(), m.context, m.params, m.z_names);
        if (!engine_keys.insert(key).second) ok = false;
        if (!oracle.keys.find(key)) ok = false;
    }
    cmp.engine = ms.size();
    cmp.oracle = oracle.keys.size();
    cmp.agree = ok && cmp.engine == cmp.oracle;
    return cmp;
}

/// Random (agent, rule) pair for the oracle comparison.
inline std::pair<Bigraph, ReactionRule> random_match_problem(Rng& rng, const Signature& sig) {
    auto redex = random_redex(rng, sig, 4, 2);
    std::vector<std::size_t> eta(redex.inner().width);
    for (std::size_t j = 0; j < eta.size(); ++j) eta[j] = j;
    ReactionRule rule("rand", redex, redex, eta);
    auto agent = random_agent(rng, sig, 6, {"a", "b"}, 1 + pick(rng, 2));
    return {std::move(agent), std::move(rule)};
}

/// Agents built from a redex so that at least one match is likely: the redex with
/// its holes filled by random ground material, placed in a random context.
inline Bigraph planted_agent(Rng& rng, const Signature& sig, const Bigraph& redex) {
    // Redex names go to agent names a, b, c, not necessarily injectively, so some plants fail.
    const std::vector<std::string> names{"a", "b", "c"};
    std::map<std::string, std::string> rename;
    for (const auto& x : redex.outer().names) rename[x] = names[pick(rng, names.size())];
    BigraphBuilder r(redex.inner(), Interface{1, NameSet(names.begin(), names.end())});
    for (NodeId v = 0; v < redex.node_count(); ++v) {
        std::vector<Link> ports;
        for (const auto& l : redex.node(v).ports) ports.push_back(Link::to_name(rename.at(l.name)));
        r.add_node(redex.node(v).control, redex.node(v).parent, std::move(ports));
    }
    for (std::size_t h = 0; h < redex.inner().width; ++h) r.set_hole_parent(h, redex.hole_parents()[h]);
    auto body = std::move(r).build();
    Bigraph params = BigraphBuilder(Interface{}, Interface{0, body.inner().names}).build();
    for (std::size_t h = 0; h < redex.inner().width; ++h)
        params = tensor(params, random_bigraph(rng, sig, Interface{}, Interface{1, {}}, 1, false));
    auto filled = compose(body, params);
    auto ctx = random_bigraph(rng, sig, Interface{1, filled.outer().names}, filled.outer(), 1, false);
    return compose(ctx, filled);
}

} // namespace bigref::test
