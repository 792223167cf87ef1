#pragma once

#include <bigref/refinement.hpp>

#include <filesystem>
#include <fstream>

namespace bigref {

/// Failure while reading a BRS definition; carries the file and position.
class LoadError : public Error {
public:
    enum class Kind { io, syntax, elaboration };

    LoadError(Kind kind, std::string file, SourcePos pos, const std::string& what)
        : Error(file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what),
          kind_(kind), file_(std::move(file)), pos_(pos) {}

    Kind kind() const { return kind_; }
    const std::string& file() const { return file_; }
    SourcePos pos() const { return pos_; }

private:
    Kind kind_;
    std::string file_;
    SourcePos pos_;
};

/// A loaded definition file: the system plus its optional functor and admissibility blocks.
struct BrsFile {
    Brs brs;
    std::optional<NameSet> hide;
    std::vector<AdmissibilityPattern> admissible;

    const AdmissibilityPattern* pattern(std::string_view n) const {
        for (const auto& p : admissible)
            if (p.name == n) return &p;
        return nullptr;
    }
};

namespace detail {

class BrsFileParser {
public:
    BrsFileParser(std::string_view text, std::string file) : file_(std::move(file)), p_(lex(text)) {}

    BrsFile parse(std::string name) {
        BrsFile out;
        out.brs.name = std::move(name);
        std::vector<std::pair<SourcePos, RuleSource>> rules;
        std::vector<std::tuple<SourcePos, std::string, Term>> agents;
        std::vector<std::tuple<SourcePos, std::string, Term>> patterns;
        bool have_signature = false;

        while (p_.peek().kind != Tok::end) {
            const auto kw = expect(Tok::ident);
            if (kw.text == "name") {
                out.brs.name = expect(Tok::ident).text;
                expect(Tok::semi);
                continue;
            }
            expect(Tok::lbrace);
            if (kw.text == "signature") {
                have_signature = true;
                while (!p_.accept(Tok::rbrace)) control(out.brs.signature);
            } else if (kw.text == "rules") {
                while (!p_.accept(Tok::rbrace)) {
                    auto pos = p_.peek().pos;
                    rules.emplace_back(pos, guard([&] { return p_.rule(); }));
                    expect(Tok::semi);
                }
            } else if (kw.text == "agents" || kw.text == "admissible") {
                auto& into = kw.text == "agents" ? agents : patterns;
                while (!p_.accept(Tok::rbrace)) {
                    auto id = expect(Tok::ident);
                    expect(Tok::colon);
                    into.emplace_back(id.pos, id.text, guard([&] { return p_.term(); }));
                    expect(Tok::semi);
                }
            } else if (kw.text == "functor") {
                NameSet hidden;
                while (!p_.accept(Tok::rbrace)) {
                    auto h = expect(Tok::ident);
                    if (h.text != "hide") fail(h.pos, "expected 'hide' in functor block");
                    do hidden.insert(expect(Tok::ident).text);
                    while (p_.accept(Tok::comma));
                    expect(Tok::semi);
                }
                out.hide = std::move(hidden);
            } else {
                fail(kw.pos, "unknown block '" + kw.text + "'");
            }
        }
        if (!have_signature) fail(SourcePos{}, "missing signature block");

        for (auto& [pos, src] : rules) {
            if (out.brs.rule(src.name)) elab_fail(pos, "duplicate rule '" + src.name + "'");
            try {
                out.brs.rules.push_back(elaborate_rule(src, out.brs.signature));
            } catch (const Error& e) {
                elab_fail(pos, e.what());
            }
        }
        for (auto& [pos, n, t] : agents) {
            if (out.brs.seed(n)) elab_fail(pos, "duplicate agent '" + n + "'");
            try {
                auto b = elaborate(t, out.brs.signature);
                if (!b.is_ground()) elab_fail(pos, "agent '" + n + "' contains holes");
                out.brs.seeds.emplace_back(n, std::move(b));
            } catch (const ElaborationError& e) {
                elab_fail(pos, "agent '" + n + "': " + e.what());
            }
        }
        for (auto& [pos, n, t] : patterns) {
            if (out.pattern(n)) elab_fail(pos, "duplicate admissibility pattern '" + n + "'");
            try {
                out.admissible.push_back(AdmissibilityPattern{n, elaborate(t, out.brs.signature)});
            } catch (const ElaborationError& e) {
                elab_fail(pos, "pattern '" + n + "': " + e.what());
            }
        }
        if (out.hide) {
            try {
                HidingFunctor check(out.brs.signature, *out.hide);
            } catch (const Error& e) {
                elab_fail(SourcePos{}, std::string("functor block: ") + e.what());
            }
        }
        return out;
    }

private:
    std::vector<Token> lex(std::string_view text) {
        try {
            return tokenize(text);
        } catch (const ParseError& e) {
            throw LoadError(LoadError::Kind::syntax, file_, e.pos(), strip(e));
        }
    }

    static std::string strip(const ParseError& e) {
        std::string w = e.what();
        auto at = w.find(": ");
        return at == std::string::npos ? w : w.substr(at + 2);
    }

    template <class F>
    auto guard(F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const ParseError& e) {
            throw LoadError(LoadError::Kind::syntax, file_, e.pos(), strip(e));
        }
    }

    Token expect(Tok t) {
        return guard([&] { return p_.expect(t); });
    }

    [[noreturn]] void fail(SourcePos pos, const std::string& what) {
        throw LoadError(LoadError::Kind::syntax, file_, pos, what);
    }

    [[noreturn]] void elab_fail(SourcePos pos, const std::string& what) {
        throw LoadError(LoadError::Kind::elaboration, file_, pos, what);
    }

    void control(Signature& sig) {
        auto kw = expect(Tok::ident);
        if (kw.text != "control") fail(kw.pos, "expected 'control'");
        auto name = expect(Tok::ident);
        auto arity_kw = expect(Tok::ident);
        if (arity_kw.text != "arity") fail(arity_kw.pos, "expected 'arity'");
        auto arity = expect(Tok::number);
        auto act = expect(Tok::ident);
        if (act.text != "active" && act.text != "passive") fail(act.pos, "expected 'active' or 'passive'");
        expect(Tok::semi);
        try {
            sig.add(Control{name.text, std::stoul(arity.text), act.text == "active" ? Activity::active : Activity::passive});
        } catch (const InvalidArgument& e) {
            elab_fail(name.pos, e.what());
        }
    }

    std::string file_;
    TermParser p_;
};

} // namespace detail

/// Parses a definition from text. `file` is used in error positions.
inline BrsFile parse_brs(std::string_view text, std::string file = "<input>", std::string name = "brs") {
    return detail::BrsFileParser(text, std::move(file)).parse(std::move(name));
}

/// Reads and elaborates a definition file. The system is named after the file stem
/// unless the file has a `name` declaration.
inline BrsFile load_brs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(LoadError::Kind::io, path.string(), SourcePos{0, 0}, "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_brs(buf.str(), path.string(), path.stem().string());
}

} // namespace bigref
