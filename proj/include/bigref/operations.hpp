#pragma once

#include <bigref/bigraph.hpp>

namespace bigref {

namespace detail {

inline Link shift_link(const Link& l, std::size_t edge_offset) {
    return l.is_edge() ? Link::to_edge(l.edge + edge_offset) : l;
}

inline Place shift_place(Place p, std::size_t region_offset, std::size_t node_offset) {
    return p.is_region() ? Place::region(p.index + region_offset) : Place::node(p.index + node_offset);
}

inline NameSet disjoint_union(const NameSet& a, const NameSet& b, const char* face, bool allow_shared) {
    NameSet out = a;
    for (const auto& n : b)
        if (!out.insert(n).second && !allow_shared)
            throw TensorError(std::string("name '") + n + "' occurs on both " + face + " faces");
    return out;
}

/// Side-by-side placement; shared outer names are merged only when allowed.
inline Bigraph juxtapose(const Bigraph& a, const Bigraph& b, bool share_outer_names) {
    Interface inner{a.inner().width + b.inner().width,
                    disjoint_union(a.inner().names, b.inner().names, "inner", false)};
    Interface outer{a.outer().width + b.outer().width,
                    disjoint_union(a.outer().names, b.outer().names, "outer", share_outer_names)};
    BigraphBuilder out(std::move(inner), std::move(outer));
    const auto na = a.node_count();
    const auto ea = a.edge_count();
    for (std::size_t e = 0; e < ea + b.edge_count(); ++e) out.add_edge();
    for (const auto& v : a.nodes()) out.add_node(v.control, v.parent, v.ports);
    for (const auto& v : b.nodes()) {
        std::vector<Link> ports;
        for (const auto& l : v.ports) ports.push_back(shift_link(l, ea));
        out.add_node(v.control, shift_place(v.parent, a.outer().width, na), std::move(ports));
    }
    for (std::size_t h = 0; h < a.inner().width; ++h) out.set_hole_parent(h, a.hole_parents()[h]);
    for (std::size_t h = 0; h < b.inner().width; ++h)
        out.set_hole_parent(a.inner().width + h, shift_place(b.hole_parents()[h], a.outer().width, na));
    for (const auto& [x, l] : a.inner_links()) out.set_inner_link(x, l);
    for (const auto& [x, l] : b.inner_links()) out.set_inner_link(x, shift_link(l, ea));
    return std::move(out).build();
}

} // namespace detail

/// a after b. Region i of b goes into hole i of a; b's outer names splice onto a's inner names.
inline Bigraph compose(const Bigraph& a, const Bigraph& b) {
    if (!(a.inner() == b.outer()))
        throw CompositionError("cannot compose: inner face " + to_string(a.inner()) + " differs from outer face " +
                               to_string(b.outer()));
    BigraphBuilder out(b.inner(), a.outer());
    const auto na = a.node_count();
    const auto ea = a.edge_count();
    for (std::size_t e = 0; e < ea + b.edge_count(); ++e) out.add_edge();

    auto splice = [&](const Link& l) { return l.is_edge() ? Link::to_edge(l.edge + ea) : a.inner_links().at(l.name); };
    auto graft = [&](Place p) { return p.is_region() ? a.hole_parents()[p.index] : Place::node(p.index + na); };

    for (const auto& v : a.nodes()) out.add_node(v.control, v.parent, v.ports);
    for (const auto& v : b.nodes()) {
        std::vector<Link> ports;
        ports.reserve(v.ports.size());
        for (const auto& l : v.ports) ports.push_back(splice(l));
        out.add_node(v.control, graft(v.parent), std::move(ports));
    }
    for (std::size_t h = 0; h < b.inner().width; ++h) out.set_hole_parent(h, graft(b.hole_parents()[h]));
    for (const auto& [x, l] : b.inner_links()) out.set_inner_link(x, splice(l));
    return std::move(out).build();
}

/// Juxtaposition with disjoint names on both faces; b's indices shift past a's.
inline Bigraph tensor(const Bigraph& a, const Bigraph& b) { return detail::juxtapose(a, b, false); }

/// Like tensor, but outer names shared by a and b are merged into one link.
inline Bigraph parallel_product(const Bigraph& a, const Bigraph& b) { return detail::juxtapose(a, b, true); }

inline Bigraph identity(const Interface& i) {
    BigraphBuilder out(i, i);
    for (std::size_t j = 0; j < i.width; ++j) out.set_hole_parent(j, Place::region(j));
    for (const auto& x : i.names) out.set_inner_link(x, Link::to_name(x));
    return std::move(out).build();
}

/// The same bigraph with extra idle outer names.
inline Bigraph with_idle_names(const Bigraph& b, const NameSet& names) {
    NameSet missing;
    for (const auto& n : names)
        if (!b.outer().names.contains(n)) missing.insert(n);
    if (missing.empty()) return b;
    return tensor(b, BigraphBuilder(Interface{}, Interface{0, std::move(missing)}).build());
}

} // namespace bigref
