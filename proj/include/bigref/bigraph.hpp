#pragma once

#include <bigref/errors.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bigref {

enum class Activity { active, passive };

inline std::string_view to_string(Activity a) { return a == Activity::active ? "active" : "passive"; }

/// Node label: a name, a fixed number of ports and an activity.
struct Control {
    std::string name;
    std::size_t arity = 0;
    Activity activity = Activity::active;

    bool active() const { return activity == Activity::active; }

    friend bool operator==(const Control&, const Control&) = default;
    friend auto operator<=>(const Control&, const Control&) = default;
};

using NameSet = std::set<std::string>;

/// A set of controls keyed by name.
class Signature {
public:
    Signature() = default;

    Signature(std::initializer_list<Control> controls) {
        for (const auto& c : controls) add(c);
    }

    void add(Control c) {
        if (controls_.contains(c.name)) throw InvalidArgument("duplicate control '" + c.name + "' in signature");
        auto name = c.name;
        controls_.emplace(std::move(name), std::move(c));
    }

    const Control* find(std::string_view name) const {
        auto it = controls_.find(name);
        return it == controls_.end() ? nullptr : &it->second;
    }

    bool contains(const Control& c) const {
        const auto* found = find(c.name);
        return found && *found == c;
    }

    std::vector<Control> controls() const {
        std::vector<Control> out;
        out.reserve(controls_.size());
        for (const auto& [_, c] : controls_) out.push_back(c);
        return out;
    }

    NameSet names() const {
        NameSet out;
        for (const auto& [n, _] : controls_) out.insert(n);
        return out;
    }

    std::size_t size() const { return controls_.size(); }

    /// Signature with the named controls removed.
    Signature without(const NameSet& hidden) const {
        Signature out;
        for (const auto& [n, c] : controls_)
            if (!hidden.contains(n)) out.controls_.emplace(n, c);
        return out;
    }

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::map<std::string, Control, std::less<>> controls_;
};

/// Width (regions or holes) plus a set of names.
struct Interface {
    std::size_t width = 0;
    NameSet names;

    friend bool operator==(const Interface&, const Interface&) = default;
};

inline std::string to_string(const Interface& i) {
    std::string out = "<" + std::to_string(i.width) + ",{";
    bool first = true;
    for (const auto& n : i.names) {
        if (!first) out += ",";
        out += n;
        first = false;
    }
    return out + "}>";
}

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// Parent of a node or hole: a region of the outer face or a node.
struct Place {
    enum class Kind { region, node };

    Kind kind = Kind::region;
    std::size_t index = 0;

    static Place region(std::size_t i) { return {Kind::region, i}; }
    static Place node(NodeId v) { return {Kind::node, v}; }

    bool is_region() const { return kind == Kind::region; }
    bool is_node() const { return kind == Kind::node; }

    friend bool operator==(const Place&, const Place&) = default;
    friend auto operator<=>(const Place&, const Place&) = default;
};

/// Target of a point (port or inner name): an edge or an outer name.
struct Link {
    enum class Kind { edge, name };

    Kind kind = Kind::name;
    EdgeId edge = 0;
    std::string name;

    static Link to_edge(EdgeId e) { return {Kind::edge, e, {}}; }
    static Link to_name(std::string n) { return {Kind::name, 0, std::move(n)}; }

    bool is_edge() const { return kind == Kind::edge; }
    bool is_name() const { return kind == Kind::name; }

    friend bool operator==(const Link&, const Link&) = default;
    friend auto operator<=>(const Link&, const Link&) = default;
};

struct Node {
    Control control;
    Place parent;
    /// One link per port. Fewer entries than the arity means dangling ports.
    std::vector<Link> ports;
};

class BigraphBuilder;

/// The 5-tuple (V, E, ctrl, prnt, link) between an inner and an outer interface.
/// Node and edge identifiers are dense indices with no meaning beyond one value.
class Bigraph {
public:
    /// The empty bigraph <0,{}> -> <0,{}>.
    Bigraph() = default;

    const Interface& inner() const { return inner_; }
    const Interface& outer() const { return outer_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(NodeId v) const { return nodes_.at(v); }

    /// Parent of every hole, indexed by hole.
    const std::vector<Place>& hole_parents() const { return hole_parents_; }
    const std::map<std::string, Link>& inner_links() const { return inner_links_; }

    bool is_ground() const { return inner_.width == 0 && inner_.names.empty(); }

    /// Child nodes of a place, ascending by id.
    const std::vector<NodeId>& child_nodes(Place p) const {
        return p.is_region() ? region_children_.at(p.index) : node_children_.at(p.index);
    }

    /// Holes directly under a place, ascending.
    const std::vector<std::size_t>& child_holes(Place p) const {
        return p.is_region() ? region_holes_.at(p.index) : node_holes_.at(p.index);
    }

    /// Nodes in pre-order, regions left to right.
    std::vector<NodeId> preorder() const {
        std::vector<NodeId> out;
        out.reserve(nodes_.size());
        std::vector<NodeId> stack;
        for (std::size_t r = outer_.width; r-- > 0;) push_children(stack, Place::region(r));
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            out.push_back(v);
            push_children(stack, Place::node(v));
        }
        return out;
    }

    /// Number of points (ports and inner names) on each edge.
    std::vector<std::size_t> edge_degrees() const {
        std::vector<std::size_t> deg(edge_count_, 0);
        auto count = [&](const Link& l) {
            if (l.is_edge() && l.edge < edge_count_) ++deg[l.edge];
        };
        for (const auto& n : nodes_)
            for (const auto& l : n.ports) count(l);
        for (const auto& [_, l] : inner_links_) count(l);
        return deg;
    }

    /// Nodes whose ports reach outer names, counted per name.
    std::map<std::string, std::size_t> name_degrees() const {
        std::map<std::string, std::size_t> deg;
        for (const auto& y : outer_.names) deg[y] = 0;
        auto count = [&](const Link& l) {
            if (l.is_name()) ++deg[l.name];
        };
        for (const auto& n : nodes_)
            for (const auto& l : n.ports) count(l);
        for (const auto& [_, l] : inner_links_) count(l);
        return deg;
    }

private:
    friend class BigraphBuilder;

    void push_children(std::vector<NodeId>& stack, Place p) const {
        const auto& kids = child_nodes(p);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }

    void index_children() {
        region_children_.assign(outer_.width, {});
        region_holes_.assign(outer_.width, {});
        node_children_.assign(nodes_.size(), {});
        node_holes_.assign(nodes_.size(), {});
        auto slot = [&](Place p, bool hole) -> std::vector<std::size_t>* {
            if (p.is_region()) {
                if (p.index >= outer_.width) return nullptr;
                return hole ? &region_holes_[p.index] : &region_children_[p.index];
            }
            if (p.index >= nodes_.size()) return nullptr;
            return hole ? &node_holes_[p.index] : &node_children_[p.index];
        };
        for (NodeId v = 0; v < nodes_.size(); ++v)
            if (auto* s = slot(nodes_[v].parent, false)) s->push_back(v);
        for (std::size_t h = 0; h < hole_parents_.size(); ++h)
            if (auto* s = slot(hole_parents_[h], true)) s->push_back(h);
    }

    Interface inner_;
    Interface outer_;
    std::vector<Node> nodes_;
    std::size_t edge_count_ = 0;
    std::vector<Place> hole_parents_;
    std::map<std::string, Link> inner_links_;

    std::vector<std::vector<NodeId>> region_children_;
    std::vector<std::vector<NodeId>> node_children_;
    std::vector<std::vector<std::size_t>> region_holes_;
    std::vector<std::vector<std::size_t>> node_holes_;
};

/// Mutable staging area for a Bigraph. build() does not check well-formedness
/// beyond requiring every hole and inner name to have been placed; use validate().
class BigraphBuilder {
public:
    BigraphBuilder(Interface inner, Interface outer) {
        g_.inner_ = std::move(inner);
        g_.outer_ = std::move(outer);
        holes_.resize(g_.inner_.width);
    }

    NodeId add_node(Control c, Place parent, std::vector<Link> ports = {}) {
        g_.nodes_.push_back(Node{std::move(c), parent, std::move(ports)});
        return g_.nodes_.size() - 1;
    }

    EdgeId add_edge() { return g_.edge_count_++; }

    void set_parent(NodeId v, Place p) { g_.nodes_.at(v).parent = p; }

    void set_port(NodeId v, std::size_t port, Link l) {
        auto& ports = g_.nodes_.at(v).ports;
        if (ports.size() <= port) ports.resize(port + 1);
        ports[port] = std::move(l);
    }

    void set_hole_parent(std::size_t hole, Place p) { holes_.at(hole) = p; }

    void set_inner_link(const std::string& name, Link l) { g_.inner_links_[name] = std::move(l); }

    std::size_t node_count() const { return g_.nodes_.size(); }

    Bigraph build() && {
        g_.hole_parents_.clear();
        for (std::size_t h = 0; h < holes_.size(); ++h) {
            if (!holes_[h]) throw InvalidArgument("hole " + std::to_string(h) + " has no parent");
            g_.hole_parents_.push_back(*holes_[h]);
        }
        for (const auto& x : g_.inner_.names)
            if (!g_.inner_links_.contains(x)) throw InvalidArgument("inner name '" + x + "' is not linked");
        for (const auto& [x, _] : g_.inner_links_)
            if (!g_.inner_.names.contains(x))
                throw InvalidArgument("link given for '" + x + "' which is not an inner name");
        g_.index_children();
        return std::move(g_);
    }

private:
    Bigraph g_;
    std::vector<std::optional<Place>> holes_;
};

/// One broken invariant, with the offending element named in the message.
struct Violation {
    std::string kind;
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string to_string(const Violation& v) { return v.kind + ": " + v.detail; }

namespace detail {

inline std::string describe(Place p) {
    return (p.is_region() ? "region " : "node ") + std::to_string(p.index);
}

} // namespace detail

/// Checks the structural invariants; with a signature, also that every control belongs to it.
inline std::vector<Violation> validate(const Bigraph& b, const Signature* sig = nullptr) {
    std::vector<Violation> out;
    const auto n = b.node_count();
    auto place_ok = [&](Place p) {
        return p.is_region() ? p.index < b.outer().width : p.index < n;
    };
    auto link_ok = [&](const Link& l) {
        return l.is_edge() ? l.edge < b.edge_count() : b.outer().names.contains(l.name);
    };
    auto link_text = [](const Link& l) {
        return l.is_edge() ? "edge " + std::to_string(l.edge) : "name '" + l.name + "'";
    };

    for (NodeId v = 0; v < n; ++v) {
        const auto& node = b.node(v);
        const auto id = "node " + std::to_string(v) + " (" + node.control.name + ")";
        if (sig) {
            const auto* known = sig->find(node.control.name);
            if (!known)
                out.push_back({"unknown control", id});
            else if (!(*known == node.control))
                out.push_back({"control mismatch", id + " disagrees with the signature on arity or activity"});
        }
        if (!place_ok(node.parent)) out.push_back({"bad parent", id + " has parent " + detail::describe(node.parent)});
        for (std::size_t i = 0; i < node.control.arity; ++i) {
            if (i >= node.ports.size())
                out.push_back({"dangling port", id + " port " + std::to_string(i)});
            else if (!link_ok(node.ports[i]))
                out.push_back({"bad link", id + " port " + std::to_string(i) + " -> " + link_text(node.ports[i])});
        }
        if (node.ports.size() > node.control.arity)
            out.push_back({"extra port", id + " has more links than its arity"});
    }

    // prnt must be acyclic on nodes.
    for (NodeId v = 0; v < n; ++v) {
        Place p = b.node(v).parent;
        std::size_t steps = 0;
        while (p.is_node() && p.index < n && steps <= n) {
            p = b.node(p.index).parent;
            ++steps;
        }
        if (steps > n) {
            out.push_back({"cycle", "node " + std::to_string(v) + " is on a parent cycle"});
            break;
        }
    }

    if (b.hole_parents().size() != b.inner().width)
        out.push_back({"hole count", "inner width differs from the number of holes"});
    for (std::size_t h = 0; h < b.hole_parents().size(); ++h)
        if (!place_ok(b.hole_parents()[h]))
            out.push_back({"bad parent", "hole " + std::to_string(h) + " has parent " + detail::describe(b.hole_parents()[h])});

    for (const auto& x : b.inner().names) {
        auto it = b.inner_links().find(x);
        if (it == b.inner_links().end())
            out.push_back({"dangling inner name", "'" + x + "'"});
        else if (!link_ok(it->second))
            out.push_back({"bad link", "inner name '" + x + "' -> " + link_text(it->second)});
    }
    return out;
}

inline std::vector<Violation> validate(const Bigraph& b, const Signature& sig) { return validate(b, &sig); }

} // namespace bigref
