#pragma once

#include <bigref/system.hpp>

namespace bigref {

/// Abstraction functor BG(source) -> BG(source \ hidden) that deletes nodes with
/// hidden controls and reattaches what they contained to the nearest visible ancestor.
/// Hidden controls must have arity 0 so that no port is left dangling.
class HidingFunctor {
public:
    HidingFunctor(Signature source, NameSet hidden) : source_(std::move(source)), hidden_(std::move(hidden)) {
        for (const auto& h : hidden_) {
            const auto* c = source_.find(h);
            if (!c) throw InvalidArgument("hidden control '" + h + "' is not in the source signature");
            if (c->arity != 0)
                throw InvalidArgument("hidden control '" + h + "' has arity " + std::to_string(c->arity) +
                                      "; only arity-0 controls can be hidden");
        }
    }

    static HidingFunctor identity(Signature sig) { return HidingFunctor(std::move(sig), {}); }

    const Signature& source() const { return source_; }
    const NameSet& hidden() const { return hidden_; }
    Signature target() const { return source_.without(hidden_); }
    bool is_identity() const { return hidden_.empty(); }

    Bigraph operator()(const Bigraph& b) const {
        for (const auto& n : b.nodes())
            if (!source_.contains(n.control))
                throw InvalidArgument("control '" + n.control.name + "' is outside the functor's source signature");
        if (hidden_.empty()) return b;

        const auto none = static_cast<std::size_t>(-1);
        std::vector<NodeId> kept(b.node_count(), none);
        BigraphBuilder out(b.inner(), b.outer());
        for (std::size_t e = 0; e < b.edge_count(); ++e) out.add_edge();
        for (NodeId v = 0; v < b.node_count(); ++v)
            if (!hidden_.contains(b.node(v).control.name))
                kept[v] = out.add_node(b.node(v).control, Place::region(0), b.node(v).ports);
        auto visible = [&](Place p) {
            while (p.is_node() && kept[p.index] == none) p = b.node(p.index).parent;
            return p.is_region() ? p : Place::node(kept[p.index]);
        };
        for (NodeId v = 0; v < b.node_count(); ++v)
            if (kept[v] != none) out.set_parent(kept[v], visible(b.node(v).parent));
        for (std::size_t h = 0; h < b.inner().width; ++h) out.set_hole_parent(h, visible(b.hole_parents()[h]));
        for (const auto& [x, l] : b.inner_links()) out.set_inner_link(x, l);
        return std::move(out).build();
    }

private:
    Signature source_;
    NameSet hidden_;
};

inline Bigraph hide(const HidingFunctor& f, const Bigraph& b) { return f(b); }

/// outer after inner: hides inner's set, then outer's.
inline HidingFunctor then(const HidingFunctor& inner, const HidingFunctor& outer) {
    if (!(outer.source() == inner.target()))
        throw InvalidArgument("functors do not compose: signatures disagree");
    NameSet all = inner.hidden();
    all.insert(outer.hidden().begin(), outer.hidden().end());
    return HidingFunctor(inner.source(), std::move(all));
}

/// Pointwise image. Whether the result is a trace of the abstract system is for check_safe to decide.
inline std::vector<Bigraph> map_trace(const HidingFunctor& f, std::span<const Bigraph> agents) {
    std::vector<Bigraph> out;
    out.reserve(agents.size());
    for (const auto& a : agents) out.push_back(f(a));
    return out;
}

inline std::vector<Bigraph> map_trace(const HidingFunctor& f, const Trace& t) { return map_trace(f, t.agents()); }

} // namespace bigref
