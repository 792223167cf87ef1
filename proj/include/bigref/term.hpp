#pragma once

#include <bigref/bigraph.hpp>
#include <bigref/errors.hpp>

#include <cctype>
#include <memory>
#include <variant>

namespace bigref {

struct Term;

/// kappa(n1,...,nk).body
struct Prefix {
    std::string control;
    std::vector<std::string> ports;
    std::shared_ptr<const Term> body;
};

/// Juxtaposition, flattened: a | b | c is one Par with three parts.
struct Par {
    std::vector<Term> parts;
};

struct Hole {
    std::size_t index = 0;
};

struct Nil {};

struct Term {
    std::variant<Prefix, Par, Hole, Nil> node;
};

inline Term make_nil() { return Term{Nil{}}; }
inline Term make_hole(std::size_t i) { return Term{Hole{i}}; }
inline Term make_prefix(std::string control, std::vector<std::string> ports, Term body) {
    return Term{Prefix{std::move(control), std::move(ports), std::make_shared<const Term>(std::move(body))}};
}
inline Term make_par(std::vector<Term> parts) { return Term{Par{std::move(parts)}}; }

inline bool operator==(const Term& a, const Term& b);

inline bool operator==(const Prefix& a, const Prefix& b) {
    return a.control == b.control && a.ports == b.ports && *a.body == *b.body;
}
inline bool operator==(const Par& a, const Par& b) { return a.parts == b.parts; }
inline bool operator==(const Hole& a, const Hole& b) { return a.index == b.index; }
inline bool operator==(const Nil&, const Nil&) { return true; }
inline bool operator==(const Term& a, const Term& b) { return a.node == b.node; }

/// Reaction rule as written: redex, reactum and the instantiation map
/// (reactum hole -> redex hole).
struct RuleSource {
    std::string name;
    Term redex;
    Term reactum;
    std::vector<std::size_t> eta;
    SourcePos pos;
};

// ---------------------------------------------------------------------------
// Lexing

enum class Tok { ident, hole, lparen, rparen, lbrace, rbrace, lbracket, rbracket, dot, bar, comma, colon, semi, arrow, number, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourcePos pos;
};

inline std::string_view describe(Tok t) {
    switch (t) {
    case Tok::ident: return "identifier";
    case Tok::hole: return "hole";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::dot: return "'.'";
    case Tok::bar: return "'|'";
    case Tok::comma: return "','";
    case Tok::colon: return "':'";
    case Tok::semi: return "';'";
    case Tok::arrow: return "'->'";
    case Tok::number: return "number";
    case Tok::end: return "end of input";
    }
    return "?";
}

/// Tokenizer shared by terms, rules and BRS files. '#' and '//' start line comments.
inline std::vector<Token> tokenize(std::string_view src, SourcePos start = {}) {
    std::vector<Token> out;
    SourcePos pos = start;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };

    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        const SourcePos at = pos;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({Tok::ident, std::string(src.substr(i, j - i)), at});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::number, std::string(src.substr(i, j - i)), at});
            advance(j - i);
            continue;
        }
        if (c == '$') {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j == i + 1) throw ParseError(at, "expected digits after '$'");
            out.push_back({Tok::hole, std::string(src.substr(i + 1, j - i - 1)), at});
            advance(j - i);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::arrow, "->", at});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
        case '(': kind = Tok::lparen; break;
        case ')': kind = Tok::rparen; break;
        case '{': kind = Tok::lbrace; break;
        case '}': kind = Tok::rbrace; break;
        case '[': kind = Tok::lbracket; break;
        case ']': kind = Tok::rbracket; break;
        case '.': kind = Tok::dot; break;
        case '|': kind = Tok::bar; break;
        case ',': kind = Tok::comma; break;
        case ':': kind = Tok::colon; break;
        case ';': kind = Tok::semi; break;
        default: throw ParseError(at, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), at});
        advance(1);
    }
    out.push_back({Tok::end, "", pos});
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

/// Recursive-descent parser over a token stream.
///
///   term   := seq ('|' seq)*
///   seq    := 'nil' | '$'N | '(' term ')' | ident ['(' names ')'] ['.' seq]
///   rule   := ident ':' term '->' term ['[' 'eta' [N '->' N (',' N '->' N)*] ']']
class TermParser {
public:
    explicit TermParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Term term() {
        std::vector<Term> parts;
        parts.push_back(seq());
        while (accept(Tok::bar)) parts.push_back(seq());
        if (parts.size() == 1) return std::move(parts.front());
        std::vector<Term> flat;
        for (auto& p : parts) {
            if (auto* par = std::get_if<Par>(&p.node))
                for (auto& q : par->parts) flat.push_back(std::move(q));
            else
                flat.push_back(std::move(p));
        }
        return make_par(std::move(flat));
    }

    RuleSource rule() {
        RuleSource r;
        r.pos = peek().pos;
        r.name = expect(Tok::ident).text;
        expect(Tok::colon);
        r.redex = term();
        const auto arrow_pos = expect(Tok::arrow).pos;
        r.reactum = term();
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        const auto eta_pos = peek().pos;
        const bool explicit_eta = accept(Tok::lbracket);
        if (explicit_eta) {
            auto kw = expect(Tok::ident);
            if (kw.text != "eta") throw ParseError(kw.pos, "expected 'eta'");
            if (!accept(Tok::rbracket)) {
                do {
                    auto from = number();
                    expect(Tok::arrow);
                    auto to = number();
                    pairs.emplace_back(from, to);
                } while (accept(Tok::comma));
                expect(Tok::rbracket);
            }
        }
        r.eta = resolve_eta(r, explicit_eta, pairs, explicit_eta ? eta_pos : arrow_pos);
        return r;
    }

    const Token& peek() const { return toks_[at_]; }

    bool accept(Tok t) {
        if (peek().kind != t) return false;
        ++at_;
        return true;
    }

    Token expect(Tok t) {
        if (peek().kind != t)
            throw ParseError(peek().pos, "expected " + std::string(describe(t)) + ", found " +
                                             (peek().kind == Tok::end ? std::string(describe(Tok::end))
                                                                      : "'" + peek().text + "'"));
        return toks_[at_++];
    }

    void expect_end() { expect(Tok::end); }

private:
    std::size_t number() {
        auto t = expect(Tok::number);
        return std::stoul(t.text);
    }

    Term seq() {
        const auto& t = peek();
        switch (t.kind) {
        case Tok::hole: {
            auto tok = expect(Tok::hole);
            return make_hole(std::stoul(tok.text));
        }
        case Tok::lparen: {
            expect(Tok::lparen);
            auto inner = term();
            expect(Tok::rparen);
            return inner;
        }
        case Tok::ident: {
            auto name = expect(Tok::ident);
            if (name.text == "nil") return make_nil();
            std::vector<std::string> ports;
            if (accept(Tok::lparen)) {
                if (!accept(Tok::rparen)) {
                    do {
                        auto port = expect(Tok::ident);
                        if (port.text == "nil") throw ParseError(port.pos, "'nil' cannot be a name");
                        ports.push_back(port.text);
                    } while (accept(Tok::comma));
                    expect(Tok::rparen);
                }
            }
            Term body = accept(Tok::dot) ? seq() : make_nil();
            return make_prefix(name.text, std::move(ports), std::move(body));
        }
        default:
            throw ParseError(t.pos, "expected a term, found " +
                                        (t.kind == Tok::end ? std::string(describe(Tok::end)) : "'" + t.text + "'"));
        }
    }

    static std::vector<std::size_t> resolve_eta(const RuleSource& r, bool explicit_eta,
                                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                SourcePos pos);

    std::vector<Token> toks_;
    std::size_t at_ = 0;
};

/// Hole indices in order of appearance.
inline void collect_holes(const Term& t, std::vector<std::size_t>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Hole>)
                out.push_back(n.index);
            else if constexpr (std::is_same_v<T, Prefix>)
                collect_holes(*n.body, out);
            else if constexpr (std::is_same_v<T, Par>)
                for (const auto& p : n.parts) collect_holes(p, out);
        },
        t.node);
}

inline std::vector<std::size_t> TermParser::resolve_eta(const RuleSource& r, bool explicit_eta,
                                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                        SourcePos pos) {
    std::vector<std::size_t> redex_holes;
    std::vector<std::size_t> reactum_holes;
    collect_holes(r.redex, redex_holes);
    collect_holes(r.reactum, reactum_holes);
    std::set<std::size_t> redex_set(redex_holes.begin(), redex_holes.end());
    std::set<std::size_t> reactum_set(reactum_holes.begin(), reactum_holes.end());
    const std::size_t width = reactum_set.empty() ? 0 : *reactum_set.rbegin() + 1;

    std::vector<std::size_t> eta(width, 0);
    std::vector<bool> seen(width, false);
    if (!explicit_eta) {
        for (auto j : reactum_set) {
            if (!redex_set.contains(j))
                throw ParseError(pos, "rule " + r.name + ": reactum hole $" + std::to_string(j) +
                                          " has no image under the implicit identity instantiation");
            eta[j] = j;
            seen[j] = true;
        }
    } else {
        for (auto [from, to] : pairs) {
            if (!reactum_set.contains(from))
                throw ParseError(pos, "rule " + r.name + ": eta maps $" + std::to_string(from) +
                                          " which is not a reactum hole");
            if (seen[from]) throw ParseError(pos, "rule " + r.name + ": eta maps $" + std::to_string(from) + " twice");
            if (!redex_set.contains(to))
                throw ParseError(pos, "rule " + r.name + ": eta image $" + std::to_string(to) + " is not a redex hole");
            eta[from] = to;
            seen[from] = true;
        }
    }
    for (std::size_t j = 0; j < width; ++j)
        if (reactum_set.contains(j) && !seen[j])
            throw ParseError(pos, "rule " + r.name + ": reactum hole $" + std::to_string(j) + " has no eta image");
    return eta;
}

inline Term parse_term(std::string_view src) {
    TermParser p(tokenize(src));
    auto t = p.term();
    p.expect_end();
    return t;
}

/// `name: TERM -> TERM [eta i->j, ...]`, optionally ending in ';'.
inline RuleSource parse_rule(std::string_view src) {
    TermParser p(tokenize(src));
    auto r = p.rule();
    p.accept(Tok::semi);
    p.expect_end();
    return r;
}

// ---------------------------------------------------------------------------
// Elaboration

namespace detail {

class Elaborator {
public:
    Elaborator(const Signature& sig, BigraphBuilder& out) : sig_(sig), out_(out) {}

    void place(const Term& t, Place parent) {
        std::visit([&](const auto& n) { visit(n, parent); }, t.node);
    }

    const std::vector<std::optional<Place>>& holes() const { return holes_; }

private:
    void visit(const Nil&, Place) {}

    void visit(const Par& p, Place parent) {
        for (const auto& part : p.parts) place(part, parent);
    }

    void visit(const Hole& h, Place parent) {
        if (holes_.size() <= h.index) holes_.resize(h.index + 1);
        if (holes_[h.index]) throw ElaborationError("hole $" + std::to_string(h.index) + " appears more than once");
        holes_[h.index] = parent;
    }

    void visit(const Prefix& p, Place parent) {
        const auto* c = sig_.find(p.control);
        if (!c) throw ElaborationError("unknown control '" + p.control + "'");
        if (c->arity != p.ports.size())
            throw ElaborationError("control '" + p.control + "' has arity " + std::to_string(c->arity) + " but " +
                                   std::to_string(p.ports.size()) + " port name(s) were given");
        std::vector<Link> ports;
        for (const auto& n : p.ports) ports.push_back(Link::to_name(n));
        const auto v = out_.add_node(*c, parent, std::move(ports));
        place(*p.body, Place::node(v));
    }

    const Signature& sig_;
    BigraphBuilder& out_;
    std::vector<std::optional<Place>> holes_;
};

inline void collect_names(const Term& t, NameSet& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix>) {
                out.insert(n.ports.begin(), n.ports.end());
                collect_names(*n.body, out);
            } else if constexpr (std::is_same_v<T, Par>) {
                for (const auto& p : n.parts) collect_names(p, out);
            }
        },
        t.node);
}

} // namespace detail

/// Port names occurring in a term.
inline NameSet term_names(const Term& t) {
    NameSet out;
    detail::collect_names(t, out);
    return out;
}

/// One-region bigraph for a term. Holes must be numbered 0..k-1 without gaps;
/// every port name becomes an outer name shared by all ports that use it.
inline Bigraph elaborate(const Term& t, const Signature& sig) {
    std::vector<std::size_t> hole_list;
    collect_holes(t, hole_list);
    const std::size_t width = hole_list.empty() ? 0 : *std::max_element(hole_list.begin(), hole_list.end()) + 1;
    BigraphBuilder out(Interface{width, {}}, Interface{1, term_names(t)});
    detail::Elaborator e(sig, out);
    e.place(t, Place::region(0));
    for (std::size_t h = 0; h < width; ++h) {
        if (h >= e.holes().size() || !e.holes()[h])
            throw ElaborationError("hole indices must be contiguous from $0; $" + std::to_string(h) + " is missing");
        out.set_hole_parent(h, *e.holes()[h]);
    }
    return std::move(out).build();
}

inline Bigraph elaborate(std::string_view src, const Signature& sig) { return elaborate(parse_term(src), sig); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string print_place(const Bigraph& b, Place p) {
    std::vector<std::string> parts;
    for (auto v : b.child_nodes(p)) {
        const auto& node = b.node(v);
        std::string s = node.control.name;
        if (node.control.arity > 0) {
            s += "(";
            for (std::size_t i = 0; i < node.ports.size(); ++i) {
                if (i) s += ",";
                s += node.ports[i].name;
            }
            s += ")";
        }
        const bool empty = b.child_nodes(Place::node(v)).empty() && b.child_holes(Place::node(v)).empty();
        if (!empty) {
            const auto body = print_place(b, Place::node(v));
            const bool single = b.child_nodes(Place::node(v)).size() + b.child_holes(Place::node(v)).size() == 1;
            s += single ? "." + body : ".(" + body + ")";
        } else if (node.control.arity > 0) {
            s += ".nil";
        }
        parts.push_back(std::move(s));
    }
    for (auto h : b.child_holes(p)) parts.push_back("$" + std::to_string(h));
    if (parts.empty()) return "nil";
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " | ";
        out += parts[i];
    }
    return out;
}

} // namespace detail

/// Reason a bigraph has no term, or nullopt when it has one.
inline std::optional<std::string> term_obstruction(const Bigraph& b, bool allow_idle = false) {
    if (b.outer().width != 1) return "the term language has exactly one region, this bigraph has " +
                                     std::to_string(b.outer().width);
    if (!b.inner().names.empty()) return std::string("inner names cannot be written as a term");
    if (b.edge_count() > 0) return std::string("closed links (edges) cannot be written as a term");
    auto deg = b.name_degrees();
    for (const auto& [y, d] : deg)
        if (d == 0 && !allow_idle) return "outer name '" + y + "' is idle";
    for (const auto& node : b.nodes())
        if (node.ports.size() != node.control.arity) return "node " + node.control.name + " has dangling ports";
    return std::nullopt;
}

/// Canonical term: siblings sorted by their printed form, so iso inputs print identically.
inline std::string print_term(const Bigraph& b) {
    if (auto why = term_obstruction(b)) throw NotTermExpressible(*why);
    return detail::print_place(b, Place::region(0));
}

/// Like print_term, but idle outer names are accepted and left out of the text.
inline std::string print_term_dropping_idle(const Bigraph& b) {
    if (auto why = term_obstruction(b, true)) throw NotTermExpressible(*why);
    return detail::print_place(b, Place::region(0));
}

inline std::string print(const Term& t) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Nil>) {
                return "nil";
            } else if constexpr (std::is_same_v<T, Hole>) {
                return "$" + std::to_string(n.index);
            } else if constexpr (std::is_same_v<T, Par>) {
                std::string out;
                for (std::size_t i = 0; i < n.parts.size(); ++i) out += (i ? " | " : "") + print(n.parts[i]);
                return out;
            } else {
                std::string out = n.control;
                if (!n.ports.empty()) {
                    out += "(";
                    for (std::size_t i = 0; i < n.ports.size(); ++i) out += (i ? "," : "") + n.ports[i];
                    out += ")";
                }
                if (std::holds_alternative<Nil>(n.body->node)) return n.ports.empty() ? out : out + ".nil";
                if (std::holds_alternative<Par>(n.body->node)) return out + ".(" + print(*n.body) + ")";
                return out + "." + print(*n.body);
            }
        },
        t.node);
}

} // namespace bigref
