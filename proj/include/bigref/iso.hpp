#pragma once

#include <bigref/bigraph.hpp>

#include <cstdint>
#include <optional>

namespace bigref {

namespace detail {

class Hasher {
public:
    Hasher& add(std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h_ ^= (x >> (8 * i)) & 0xffu;
            h_ *= 0x100000001b3ull;
        }
        return *this;
    }

    Hasher& add(std::string_view s) {
        add(s.size());
        for (unsigned char c : s) {
            h_ ^= c;
            h_ *= 0x100000001b3ull;
        }
        return *this;
    }

    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

inline void hash_link(Hasher& h, const Link& l, const std::vector<std::size_t>& edge_degree) {
    if (l.is_name())
        h.add(1).add(l.name);
    else
        h.add(2).add(l.edge < edge_degree.size() ? edge_degree[l.edge] : 0);
}

/// Subtree hash per node, invariant under renaming of nodes and edges.
inline std::vector<std::uint64_t> subtree_hashes(const Bigraph& b) {
    const auto deg = b.edge_degrees();
    std::vector<std::uint64_t> out(b.node_count(), 0);
    auto order = b.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto v = *it;
        const auto& node = b.node(v);
        Hasher h;
        h.add(node.control.name).add(node.control.arity).add(node.control.active() ? 1 : 0);
        for (const auto& l : node.ports) hash_link(h, l, deg);
        const auto& holes = b.child_holes(Place::node(v));
        h.add(holes.size());
        for (auto hole : holes) h.add(hole);
        std::vector<std::uint64_t> kids;
        for (auto c : b.child_nodes(Place::node(v))) kids.push_back(out[c]);
        std::sort(kids.begin(), kids.end());
        h.add(kids.size());
        for (auto k : kids) h.add(k);
        out[v] = h.value();
    }
    return out;
}

} // namespace detail

/// Hash of the iso class: iso bigraphs always agree.
inline std::uint64_t fingerprint(const Bigraph& b) {
    detail::Hasher h;
    h.add(b.inner().width).add(b.outer().width).add(b.node_count()).add(b.edge_count());
    for (const auto& x : b.inner().names) h.add(x);
    h.add(0xff);
    for (const auto& y : b.outer().names) h.add(y);
    const auto sub = detail::subtree_hashes(b);
    const auto deg = b.edge_degrees();
    for (std::size_t r = 0; r < b.outer().width; ++r) {
        std::vector<std::uint64_t> kids;
        for (auto c : b.child_nodes(Place::region(r))) kids.push_back(sub[c]);
        std::sort(kids.begin(), kids.end());
        h.add(kids.size());
        for (auto k : kids) h.add(k);
        for (auto hole : b.child_holes(Place::region(r))) h.add(hole);
    }
    for (const auto& [x, l] : b.inner_links()) {
        h.add(x);
        detail::hash_link(h, l, deg);
    }
    return h.value();
}

/// Node and edge bijections witnessing an isomorphism.
struct IsoMapping {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
};

namespace detail {

class IsoSearch {
public:
    IsoSearch(const Bigraph& a, const Bigraph& b)
        : a_(a), b_(b), ha_(subtree_hashes(a)), hb_(subtree_hashes(b)), order_(a.preorder()),
          node_map_(a.node_count(), kNone), used_(b.node_count(), false), edge_ab_(a.edge_count(), kNone),
          edge_ba_(b.edge_count(), kNone) {}

    std::optional<IsoMapping> run() {
        for (std::size_t r = 0; r < a_.outer().width; ++r)
            if (a_.child_holes(Place::region(r)) != b_.child_holes(Place::region(r))) return std::nullopt;
        if (!search(0)) return std::nullopt;
        IsoMapping m{node_map_, edge_ab_};
        // Idle edges pair up in index order.
        std::vector<EdgeId> free_b;
        for (EdgeId e = 0; e < b_.edge_count(); ++e)
            if (edge_ba_[e] == kNone) free_b.push_back(e);
        std::size_t next = 0;
        for (auto& e : m.edges)
            if (e == kNone) e = free_b.at(next++);
        return m;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    struct Undo {
        std::vector<EdgeId> bound;
    };

    bool bind(const Link& la, const Link& lb, Undo& undo) {
        if (la.kind != lb.kind) return false;
        if (la.is_name()) return la.name == lb.name;
        auto& fwd = edge_ab_[la.edge];
        auto& back = edge_ba_[lb.edge];
        if (fwd == kNone && back == kNone) {
            fwd = lb.edge;
            back = la.edge;
            undo.bound.push_back(la.edge);
            return true;
        }
        return fwd == lb.edge;
    }

    void rollback(const Undo& undo) {
        for (auto e : undo.bound) {
            edge_ba_[edge_ab_[e]] = kNone;
            edge_ab_[e] = kNone;
        }
    }

    bool compatible(NodeId v, NodeId w) const {
        if (used_[w] || ha_[v] != hb_[w]) return false;
        const auto& nv = a_.node(v);
        const auto& nw = b_.node(w);
        return nv.control == nw.control && nv.ports.size() == nw.ports.size() &&
               a_.child_nodes(Place::node(v)).size() == b_.child_nodes(Place::node(w)).size() &&
               a_.child_holes(Place::node(v)) == b_.child_holes(Place::node(w));
    }

    bool finish() {
        Undo undo;
        for (const auto& [x, la] : a_.inner_links()) {
            if (!bind(la, b_.inner_links().at(x), undo)) {
                rollback(undo);
                return false;
            }
        }
        return true;
    }

    bool search(std::size_t i) {
        if (i == order_.size()) return finish();
        const auto v = order_[i];
        const auto p = a_.node(v).parent;
        const Place target = p.is_region() ? p : Place::node(node_map_[p.index]);
        for (auto w : b_.child_nodes(target)) {
            if (!compatible(v, w)) continue;
            Undo undo;
            bool ok = true;
            const auto& pa = a_.node(v).ports;
            const auto& pb = b_.node(w).ports;
            for (std::size_t k = 0; ok && k < pa.size(); ++k) ok = bind(pa[k], pb[k], undo);
            if (ok) {
                node_map_[v] = w;
                used_[w] = true;
                if (search(i + 1)) return true;
                used_[w] = false;
                node_map_[v] = kNone;
            }
            rollback(undo);
        }
        return false;
    }

    const Bigraph& a_;
    const Bigraph& b_;
    std::vector<std::uint64_t> ha_;
    std::vector<std::uint64_t> hb_;
    std::vector<NodeId> order_;
    std::vector<NodeId> node_map_;
    std::vector<bool> used_;
    std::vector<EdgeId> edge_ab_;
    std::vector<EdgeId> edge_ba_;
};

} // namespace detail

/// Bijections on nodes and edges preserving ctrl, prnt, link, holes, regions and names, if any exist.
inline std::optional<IsoMapping> find_iso(const Bigraph& a, const Bigraph& b) {
    if (!(a.inner() == b.inner()) || !(a.outer() == b.outer())) return std::nullopt;
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return std::nullopt;
    if (fingerprint(a) != fingerprint(b)) return std::nullopt;
    return detail::IsoSearch(a, b).run();
}

inline bool iso(const Bigraph& a, const Bigraph& b) { return find_iso(a, b).has_value(); }

} // namespace bigref
