#pragma once

#include <bigref/refinement.hpp>

namespace bigref {

namespace detail {

inline std::string join(const std::vector<std::string>& xs, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

inline std::string join(const NameSet& xs, std::string_view sep) { return join(std::vector<std::string>(xs.begin(), xs.end()), sep); }

inline void document_fields(std::ostream& os, const RefinementReport& r, const std::string& prefix) {
    auto line = [&](const std::string& key, const std::string& value) { os << prefix << key << ": " << value << "\n"; };
    line("check", r.check);
    line("verdict", std::string(to_string(r.verdict)));
    line("abstract", r.abstract_name);
    line("concrete", r.concrete_name);
    line("functor.hide", r.hidden.empty() ? "-" : join(r.hidden, ","));
    if (r.admissible) line("admissible", *r.admissible);
    if (r.bounds) {
        const auto& b = *r.bounds;
        line("bound.seeds", b.seeds.empty() ? "-" : join(b.seeds, ","));
        line("bound.depth", std::to_string(b.depth));
        line("bound.ext-depth", b.ext_depth ? std::to_string(*b.ext_depth) : "-");
        line("bound.max-states", std::to_string(b.max_states));
        line("bound.allow-stutter", b.allow_stutter ? "true" : "false");
        line("bound.exceeded", b.exceeded ? "true" : "false");
    }
    if (r.check == "safe") {
        line("stats.states", std::to_string(r.states));
        line("stats.transitions", std::to_string(r.transitions));
    } else if (r.check == "live") {
        line("stats.states", std::to_string(r.states));
        line("stats.admissible-extensions", std::to_string(r.extensions));
    }
    for (const auto& img : r.rule_images)
        line("rule-image." + img.concrete, (img.abstract ? *img.abstract : "-") + " ; " + img.image);
    for (std::size_t i = 0; i < r.failures.size(); ++i) line("failure[" + std::to_string(i) + "]", r.failures[i]);
    if (r.witness) {
        const auto& w = *r.witness;
        line("witness.reason", w.reason);
        for (std::size_t i = 0; i < w.concrete.size(); ++i)
            line("witness.concrete[" + std::to_string(i) + "]", render(w.concrete[i]));
        for (std::size_t i = 0; i < w.image.size(); ++i)
            line("witness.image[" + std::to_string(i) + "]", render(w.image[i]));
        if (r.check == "live") {
            for (std::size_t i = 0; i < w.extension.size(); ++i)
                line("witness.extension[" + std::to_string(i) + "]", render(w.extension[i]));
            line("witness.concrete-candidates", std::to_string(w.concrete_candidates));
            line("witness.concrete-matches", "0");
        }
    }
    for (const auto& p : r.parts) document_fields(os, p, prefix + p.check + ".");
}

} // namespace detail

/// Machine-readable report: one `key: value` per line between a header and `end`.
/// Identical reports render to identical bytes.
inline std::string render_document(const RefinementReport& r) {
    std::ostringstream os;
    os << "bigref-report 1\n";
    detail::document_fields(os, r, "");
    os << "end\n";
    return os.str();
}

inline std::string render_text(const RefinementReport& r) {
    std::ostringstream os;
    os << r.check << " refinement of " << r.abstract_name << " by " << r.concrete_name;
    os << (r.hidden.empty() ? std::string(" under the identity functor")
                            : " hiding {" + detail::join(r.hidden, ", ") + "}")
       << ": " << to_string(r.verdict) << "\n";
    if (r.bounds) {
        const auto& b = *r.bounds;
        os << "  seeds: " << (b.seeds.empty() ? "(none)" : detail::join(b.seeds, ", ")) << ", depth " << b.depth;
        if (b.ext_depth) os << ", extension depth " << *b.ext_depth;
        os << (b.exceeded ? " (state cap exceeded)" : "") << "\n";
    }
    if (!r.rule_images.empty()) {
        os << "  rule images:\n";
        for (const auto& img : r.rule_images)
            os << "    " << img.concrete << " |-> " << (img.abstract ? *img.abstract : "(none)") << "   [" << img.image
               << "]\n";
    }
    for (const auto& f : r.failures) os << "  failure: " << f << "\n";
    if (r.witness) {
        const auto& w = *r.witness;
        os << "  witness: " << w.reason << "\n";
        os << "    concrete trace:\n";
        for (const auto& a : w.concrete) os << "      " << render(a) << "\n";
        if (!w.extension.empty()) {
            os << "    abstract extension with no concrete counterpart (" << w.concrete_candidates
               << " concrete candidates examined):\n";
            for (const auto& a : w.extension) os << "      " << render(a) << "\n";
        }
    }
    for (const auto& p : r.parts) {
        std::istringstream in(render_text(p));
        for (std::string l; std::getline(in, l);) os << "  " << l << "\n";
    }
    return os.str();
}

} // namespace bigref
