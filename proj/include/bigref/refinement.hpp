#pragma once

#include <bigref/hiding.hpp>

namespace bigref {

enum class Verdict { holds, refuted, bound_exceeded };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds-up-to-bound";
    case Verdict::refuted: return "refuted";
    case Verdict::bound_exceeded: return "bound-exceeded";
    }
    return "?";
}

/// Successful traces: finite, with the pattern somewhere in the final agent.
struct AdmissibilityPattern {
    std::string name;
    Bigraph pattern;
};

inline AdmissibilityPattern make_pattern(std::string name, std::string_view term, const Signature& sig) {
    return AdmissibilityPattern{std::move(name), elaborate(term, sig)};
}

/// Containment test on the final agent; the surrounding context need not be active.
inline bool is_admissible(const AdmissibilityPattern& p, std::span<const Bigraph> agents) {
    if (agents.empty()) return false;
    return !find_embeddings(agents.back(), p.pattern, false, 1).empty();
}

inline bool is_admissible(const AdmissibilityPattern& p, const Trace& t) { return is_admissible(p, t.agents()); }

/// Concrete admissibility pulled back along the functor: t is admissible iff F(t) is.
inline bool is_admissible_pullback(const HidingFunctor& f, const AdmissibilityPattern& p,
                                   std::span<const Bigraph> agents) {
    return is_admissible(p, map_trace(f, agents));
}

using NamedAgents = std::vector<std::pair<std::string, Bigraph>>;

struct CheckOptions {
    std::size_t depth = 4;
    std::size_t ext_depth = 1;
    ExplorationLimits limits{};
    bool allow_stutter = false;
};

struct RuleImage {
    std::string concrete;
    std::optional<std::string> abstract;
    std::string image;  // hide(redex) -> hide(reactum)
};

struct Witness {
    std::string reason;
    std::vector<Bigraph> concrete;   // s
    std::vector<Bigraph> image;      // F(s)
    std::vector<Bigraph> extension;  // t', live checks only
    /// Concrete extensions examined while searching for a match of t'.
    std::size_t concrete_candidates = 0;
};

struct Bounds {
    std::vector<std::string> seeds;
    std::size_t depth = 0;
    std::optional<std::size_t> ext_depth;
    std::size_t max_states = 0;
    bool allow_stutter = false;
    bool exceeded = false;
};

struct RefinementReport {
    std::string check;
    Verdict verdict = Verdict::holds;
    std::string abstract_name;
    std::string concrete_name;
    NameSet hidden;
    std::optional<std::string> admissible;
    std::optional<Bounds> bounds;
    std::vector<RuleImage> rule_images;
    std::vector<std::string> failures;
    std::optional<Witness> witness;
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t extensions = 0;
    std::vector<RefinementReport> parts;

    bool holds() const { return verdict == Verdict::holds; }
};

namespace detail {

inline RefinementReport start_report(std::string check, const HidingFunctor& f, const Brs& concrete,
                                     const Brs& abstract) {
    RefinementReport r;
    r.check = std::move(check);
    r.abstract_name = abstract.name;
    r.concrete_name = concrete.name;
    r.hidden = f.hidden();
    return r;
}

inline Bounds make_bounds(const NamedAgents& seeds, const CheckOptions& opt, bool live) {
    Bounds b;
    for (const auto& [n, _] : seeds) b.seeds.push_back(n);
    b.depth = opt.depth;
    if (live) b.ext_depth = opt.ext_depth;
    b.max_states = opt.limits.max_states;
    b.allow_stutter = opt.allow_stutter;
    return b;
}

inline void require_signatures(const HidingFunctor& f, const Brs& concrete, const Brs& abstract) {
    if (!(f.source() == concrete.signature))
        throw InvalidArgument("functor source signature differs from the signature of " + concrete.name);
    if (!(f.target() == abstract.signature))
        throw InvalidArgument("functor target signature differs from the signature of " + abstract.name);
}

inline std::vector<Bigraph> seeds_of(const NamedAgents& seeds) {
    std::vector<Bigraph> out;
    for (const auto& [_, b] : seeds) out.push_back(b);
    return out;
}

} // namespace detail

/// Sufficient condition for safety: every concrete rule's image under the functor
/// is an abstract rule with the same instantiation map, and hiding leaves activity
/// paths alone. Tensor preservation holds for every hiding functor.
inline RefinementReport check_rule_preservation(const HidingFunctor& f, const Brs& concrete, const Brs& abstract) {
    auto report = detail::start_report("functor", f, concrete, abstract);
    if (!(f.source() == concrete.signature))
        report.failures.push_back("signature: functor source differs from the signature of " + concrete.name);
    if (!(f.target() == abstract.signature))
        report.failures.push_back("signature: functor target differs from the signature of " + abstract.name);
    for (const auto& h : f.hidden()) {
        const auto* c = f.source().find(h);
        if (c && !c->active())
            report.failures.push_back("active contexts: hidden control " + h +
                                      " is passive, so hiding it can change an activity path");
    }
    for (const auto& rule : concrete.rules) {
        RuleImage img;
        img.concrete = rule.name();
        try {
            const auto redex = f(rule.redex());
            const auto reactum = f(rule.reactum());
            img.image = render(redex) + " -> " + render(reactum);
            for (const auto& candidate : abstract.rules) {
                if (candidate.eta() == rule.eta() && iso(candidate.redex(), redex) &&
                    iso(candidate.reactum(), reactum)) {
                    img.abstract = candidate.name();
                    break;
                }
            }
        } catch (const InvalidArgument& e) {
            img.image = e.what();
        }
        if (!img.abstract)
            report.failures.push_back("rules: image of " + rule.name() + " (" + img.image + ") is not a rule of " +
                                      abstract.name);
        report.rule_images.push_back(std::move(img));
    }
    report.verdict = report.failures.empty() ? Verdict::holds : Verdict::refuted;
    return report;
}

/// F(Tr(C)) within Tr(A) for traces from the seeds of length at most depth+1:
/// every image agent is an abstract agent and every concrete step maps to an
/// abstract reaction (or to a stutter, when allowed).
inline RefinementReport check_safe(const HidingFunctor& f, const Brs& concrete, const Brs& abstract,
                                   const NamedAgents& seeds, const CheckOptions& opt = {}) {
    detail::require_signatures(f, concrete, abstract);
    auto report = detail::start_report("safe", f, concrete, abstract);
    report.bounds = detail::make_bounds(seeds, opt, false);
    SuccessorCache concrete_steps(concrete);
    SuccessorCache abstract_steps(abstract);
    const auto roots = detail::seeds_of(seeds);

    StateGraph g;
    try {
        g = explore(concrete_steps, roots, opt.depth, opt.limits);
    } catch (const BoundExceeded&) {
        report.bounds->exceeded = true;
        report.verdict = Verdict::bound_exceeded;
        return report;
    }
    report.states = g.states.size();

    auto refute = [&](std::vector<Bigraph> trace, std::string reason) {
        report.verdict = Verdict::refuted;
        Witness w;
        w.reason = std::move(reason);
        w.image = map_trace(f, trace);
        w.concrete = std::move(trace);
        report.witness = std::move(w);
        return report;
    };

    std::vector<Bigraph> images;
    images.reserve(g.states.size());
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        images.push_back(f(g.states[i]));
        auto vs = validate(images.back(), abstract.signature);
        if (!vs.empty()) return refute(g.path_to(i), "image is not an agent of " + abstract.name + ": " + to_string(vs[0]));
    }
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        for (auto j : g.next[i]) {
            ++report.transitions;
            if (abstract_steps.reacts_to(images[i], images[j])) continue;
            const bool stutter = iso(images[i], images[j]);
            if (stutter && opt.allow_stutter) continue;
            auto trace = g.path_to(i);
            trace.push_back(g.states[j]);
            return refute(std::move(trace), stutter ? "image step is a stutter with no abstract reaction"
                                                    : "no abstract reaction realizes the image step");
        }
    }
    report.verdict = Verdict::holds;
    return report;
}

namespace detail {

/// Concrete extensions of `from` whose images follow `target` pointwise; returns
/// whether one exists and counts the candidates examined.
inline bool find_concrete_extension(const HidingFunctor& f, SuccessorCache& concrete, const Bigraph& from,
                                    std::span<const Bigraph> target, std::size_t& examined) {
    std::vector<Bigraph> frontier{from};
    for (const auto& want : target) {
        IsoSet next;
        for (const auto& c : frontier) {
            for (const auto& r : concrete.of(c)) {
                ++examined;
                if (iso(f(r.result), want)) next.insert(r.result);
            }
        }
        if (next.size() == 0) return false;
        frontier = next.items();
    }
    return true;
}

} // namespace detail

/// Live refinement within bounds: for each concrete trace s from the seeds (at most
/// depth steps) and each abstract extension t' of F(s) with at most ext_depth agents
/// ending admissibly, some concrete extension s' of s has F(s') = F(t') pointwise.
/// Concrete admissibility is the pullback of the abstract pattern.
inline RefinementReport check_live(const HidingFunctor& f, const Brs& concrete, const Brs& abstract,
                                   const AdmissibilityPattern& admissible, const NamedAgents& seeds,
                                   const CheckOptions& opt = {}) {
    detail::require_signatures(f, concrete, abstract);
    auto report = detail::start_report("live", f, concrete, abstract);
    report.admissible = admissible.name;
    report.bounds = detail::make_bounds(seeds, opt, true);
    SuccessorCache concrete_steps(concrete);
    SuccessorCache abstract_steps(abstract);

    StateGraph g;
    try {
        g = explore(concrete_steps, detail::seeds_of(seeds), opt.depth, opt.limits);
    } catch (const BoundExceeded&) {
        report.bounds->exceeded = true;
        report.verdict = Verdict::bound_exceeded;
        return report;
    }
    report.states = g.states.size();

    std::size_t explored = 0;
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        const auto image = f(g.states[i]);
        // Depth-first over abstract extensions of the image.
        std::vector<std::vector<Bigraph>> stack{{}};
        while (!stack.empty()) {
            auto ext = std::move(stack.back());
            stack.pop_back();
            if (!ext.empty() && is_admissible(admissible, ext)) {
                ++report.extensions;
                std::size_t examined = 0;
                if (!detail::find_concrete_extension(f, concrete_steps, g.states[i], ext, examined)) {
                    report.verdict = Verdict::refuted;
                    Witness w;
                    w.reason = "abstract extension reaches admissibility but no concrete extension has the same image";
                    w.concrete = g.path_to(i);
                    w.image = map_trace(f, w.concrete);
                    w.extension = std::move(ext);
                    w.concrete_candidates = examined;
                    report.witness = std::move(w);
                    return report;
                }
            }
            if (ext.size() >= opt.ext_depth) continue;
            const auto& last = ext.empty() ? image : ext.back();
            const auto& next = abstract_steps.of(last);
            for (auto it = next.rbegin(); it != next.rend(); ++it) {
                if (++explored > opt.limits.max_states) {
                    report.bounds->exceeded = true;
                    report.verdict = Verdict::bound_exceeded;
                    return report;
                }
                auto longer = ext;
                longer.push_back(it->result);
                stack.push_back(std::move(longer));
            }
        }
    }
    report.verdict = Verdict::holds;
    return report;
}

/// Conjunction of check_safe and check_live.
inline RefinementReport check_safe_and_live(const HidingFunctor& f, const Brs& concrete, const Brs& abstract,
                                            const AdmissibilityPattern& admissible, const NamedAgents& seeds,
                                            const CheckOptions& opt = {}) {
    auto report = detail::start_report("safe+live", f, concrete, abstract);
    report.admissible = admissible.name;
    report.bounds = detail::make_bounds(seeds, opt, true);
    report.parts.push_back(check_safe(f, concrete, abstract, seeds, opt));
    report.parts.push_back(check_live(f, concrete, abstract, admissible, seeds, opt));
    report.verdict = Verdict::holds;
    for (const auto& p : report.parts) {
        if (p.verdict == Verdict::refuted) report.verdict = Verdict::refuted;
        if (p.bounds && p.bounds->exceeded) report.bounds->exceeded = true;
    }
    if (report.verdict != Verdict::refuted && report.bounds->exceeded) report.verdict = Verdict::bound_exceeded;
    return report;
}

} // namespace bigref
