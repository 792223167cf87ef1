// bigref: command-line front end for bigraphical reactive systems and
// bounded vertical refinement checks.
//
// Exit codes: 0 holds (or success), 1 refuted, 2 usage or load error,
// 3 state cap exceeded.

#include <bigref/bigref.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kHolds = 0;
constexpr int kRefuted = 1;
constexpr int kUsage = 2;
constexpr int kBound = 3;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckArgs {
    std::string abstract_path;
    std::string concrete_path;
    std::vector<std::string> hide;
    bool hide_given = false;
    std::vector<std::string> seeds;
    std::size_t depth = 4;
    std::size_t ext_depth = 1;
    std::size_t max_states = 100000;
    bool allow_stutter = false;
    std::string admissible;
    std::string report_path;
};

bigref::NameSet split_hide(const std::vector<std::string>& items) {
    bigref::NameSet out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        for (std::string part; std::getline(ss, part, ',');)
            if (!part.empty()) out.insert(part);
    }
    return out;
}

/// CLI --hide wins over a functor block only when they agree.
bigref::HidingFunctor resolve_functor(const CheckArgs& a, const bigref::BrsFile& concrete) {
    std::optional<bigref::NameSet> cli;
    if (a.hide_given) cli = split_hide(a.hide);
    if (cli && concrete.hide && *cli != *concrete.hide)
        throw Usage("--hide {" + bigref::detail::join(*cli, ",") + "} conflicts with the functor block {" +
                    bigref::detail::join(*concrete.hide, ",") + "} of " + a.concrete_path);
    auto hidden = cli ? *cli : concrete.hide.value_or(bigref::NameSet{});
    return bigref::HidingFunctor(concrete.brs.signature, hidden);
}

bigref::NamedAgents resolve_seeds(const CheckArgs& a, const bigref::BrsFile& concrete) {
    bigref::NamedAgents out;
    if (a.seeds.empty()) return concrete.brs.seeds;
    for (const auto& n : a.seeds) {
        const auto* s = concrete.brs.seed(n);
        if (!s) throw Usage("unknown agent '" + n + "' in " + a.concrete_path);
        out.emplace_back(n, *s);
    }
    return out;
}

bigref::CheckOptions options(const CheckArgs& a) {
    bigref::CheckOptions o;
    o.depth = a.depth;
    o.ext_depth = a.ext_depth;
    o.limits.max_states = a.max_states;
    o.allow_stutter = a.allow_stutter;
    return o;
}

int finish(const bigref::RefinementReport& r, const CheckArgs& a) {
    std::cout << bigref::render_text(r);
    if (!a.report_path.empty()) {
        std::ofstream out(a.report_path, std::ios::binary);
        if (!out) throw Usage("cannot write report to " + a.report_path);
        out << bigref::render_document(r);
    }
    switch (r.verdict) {
    case bigref::Verdict::holds: return kHolds;
    case bigref::Verdict::refuted: return kRefuted;
    case bigref::Verdict::bound_exceeded: return kBound;
    }
    return kUsage;
}

const bigref::Bigraph& agent_or_throw(const bigref::BrsFile& f, const std::string& name, const std::string& path) {
    const auto* a = f.brs.seed(name);
    if (!a) throw Usage("unknown agent '" + name + "' in " + path);
    return *a;
}

int cmd_parse(const std::string& path) {
    const auto f = bigref::load_brs(path);
    std::cout << "name " << f.brs.name << ";\n\nsignature {\n";
    for (const auto& c : f.brs.signature.controls())
        std::cout << "  control " << c.name << " arity " << c.arity << " " << bigref::to_string(c.activity) << ";\n";
    std::cout << "}\n\nrules {\n";
    for (const auto& r : f.brs.rules) {
        std::cout << "  " << r.name() << ": " << bigref::print_term(r.redex()) << " -> "
                  << bigref::render(r.reactum());
        if (!r.identity_eta()) {
            std::cout << " [eta ";
            for (std::size_t j = 0; j < r.eta().size(); ++j) std::cout << (j ? ", " : "") << j << "->" << r.eta()[j];
            std::cout << "]";
        }
        std::cout << ";\n";
    }
    std::cout << "}\n\nagents {\n";
    for (const auto& [n, b] : f.brs.seeds) std::cout << "  " << n << ": " << bigref::print_term(b) << ";\n";
    std::cout << "}\n";
    if (f.hide) std::cout << "\nfunctor {\n  hide " << bigref::detail::join(*f.hide, ", ") << ";\n}\n";
    if (!f.admissible.empty()) {
        std::cout << "\nadmissible {\n";
        for (const auto& p : f.admissible) std::cout << "  " << p.name << ": " << bigref::print_term(p.pattern) << ";\n";
        std::cout << "}\n";
    }
    return kHolds;
}

int cmd_show(const std::string& path, const std::string& name) {
    const auto f = bigref::load_brs(path);
    const auto& b = agent_or_throw(f, name, path);
    std::cout << "term:  " << bigref::render(b) << "\n";
    std::cout << "inner: " << bigref::to_string(b.inner()) << "\n";
    std::cout << "outer: " << bigref::to_string(b.outer()) << "\n";
    for (auto v : b.preorder()) {
        const auto& n = b.node(v);
        std::cout << "  v" << v << " " << n.control.name << " parent "
                  << (n.parent.is_region() ? "r" : "v") << n.parent.index;
        for (std::size_t i = 0; i < n.ports.size(); ++i)
            std::cout << (i ? "," : " ports ") << (n.ports[i].is_name() ? n.ports[i].name : "e" + std::to_string(n.ports[i].edge));
        std::cout << "\n";
    }
    return kHolds;
}

int cmd_react(const std::string& path, const std::string& name, std::size_t steps, std::size_t max_states) {
    const auto f = bigref::load_brs(path);
    const auto& seed = agent_or_throw(f, name, path);
    bigref::SuccessorCache cache(f.brs);
    std::vector<bigref::Bigraph> level{seed};
    std::size_t total = 1;
    std::cout << "step 0:\n  " << bigref::render(seed) << "\n";
    for (std::size_t k = 1; k <= steps; ++k) {
        bigref::IsoSet next;
        std::vector<std::vector<std::string>> via;
        for (const auto& a : level) {
            for (const auto& r : cache.of(a)) {
                auto [i, fresh] = next.insert(r.result);
                if (fresh) via.emplace_back();
                for (const auto& n : r.rules)
                    if (std::find(via[i].begin(), via[i].end(), n) == via[i].end()) via[i].push_back(n);
            }
        }
        total += next.size();
        if (total > max_states) throw bigref::BoundExceeded(max_states);
        std::vector<std::pair<std::string, std::size_t>> order;
        for (std::size_t i = 0; i < next.size(); ++i) order.emplace_back(bigref::canonical_key(next.items()[i]), i);
        std::sort(order.begin(), order.end());
        std::cout << "step " << k << ":\n";
        if (order.empty()) std::cout << "  (no reactions)\n";
        level.clear();
        for (const auto& [_, i] : order) {
            auto rules = via[i];
            std::sort(rules.begin(), rules.end());
            std::cout << "  " << bigref::render(next.items()[i]) << "    [" << bigref::detail::join(rules, ",") << "]\n";
            level.push_back(next.items()[i]);
        }
        if (level.empty()) break;
    }
    return kHolds;
}

int cmd_traces(const std::string& path, const std::string& name, std::size_t depth, std::size_t max_states) {
    const auto f = bigref::load_brs(path);
    const auto& seed = agent_or_throw(f, name, path);
    const auto traces = bigref::traces_bounded(f.brs, seed, depth, bigref::ExplorationLimits{max_states});
    for (const auto& t : traces) {
        std::string line;
        for (const auto& a : t.agents()) line += (line.empty() ? "" : "  ->  ") + bigref::render(a);
        std::cout << line << "\n";
    }
    std::cout << "(" << traces.size() << " traces)\n";
    return kHolds;
}

void add_check_options(CLI::App* cmd, CheckArgs& a, bool seeds, bool live) {
    cmd->add_option("abstract", a.abstract_path, "abstract system (.brs)")->required();
    cmd->add_option("concrete", a.concrete_path, "concrete system (.brs)")->required();
    auto* hide = cmd->add_option("--hide", a.hide, "controls to hide (comma separated or repeated); empty for identity")
                     ->expected(0, -1);
    auto* ident = cmd->add_flag("--identity", "use the identity functor")->excludes(hide);
    cmd->callback([&a, hide, ident] { a.hide_given = hide->count() > 0 || ident->count() > 0; });
    cmd->add_option("--report", a.report_path, "write the structured report here");
    if (!seeds) return;
    cmd->add_option("--seed", a.seeds, "seed agent of the concrete system (repeatable; default all)");
    cmd->add_option("--depth", a.depth, "trace depth (reaction steps)");
    cmd->add_option("--max-states", a.max_states, "state cap");
    cmd->add_flag("--allow-stutter", a.allow_stutter, "accept image steps that do not change the abstract agent");
    if (live) {
        cmd->add_option("--admissible", a.admissible, "admissibility pattern of the abstract system")->required();
        cmd->add_option("--ext-depth", a.ext_depth, "abstract extension depth");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bigref: bigraphical reactive systems and bounded vertical refinement"};
    app.require_subcommand(1);

    std::string file, agent;
    std::size_t steps = 1;
    std::size_t depth = 2;
    std::size_t max_states = 100000;

    auto* parse = app.add_subcommand("parse", "load a definition file and print it back in canonical form");
    parse->add_option("file", file)->required();

    auto* show = app.add_subcommand("show", "print one agent and its structure");
    show->add_option("file", file)->required();
    show->add_option("agent", agent)->required();

    auto* react = app.add_subcommand("react", "list agents reachable in each step");
    react->add_option("file", file)->required();
    react->add_option("agent", agent)->required();
    react->add_option("--steps", steps, "number of steps");
    react->add_option("--max-states", max_states, "state cap");

    auto* traces = app.add_subcommand("traces", "enumerate bounded traces from an agent");
    traces->add_option("file", file)->required();
    traces->add_option("agent", agent)->required();
    traces->add_option("--depth", depth, "trace depth (reaction steps)");
    traces->add_option("--max-states", max_states, "cap on the number of traces");

    CheckArgs safe_args, functor_args, live_args, both_args;
    auto* check_safe = app.add_subcommand("check-safe", "bounded safe refinement check");
    add_check_options(check_safe, safe_args, true, false);
    auto* check_functor = app.add_subcommand("check-functor", "check that the hiding functor preserves rules");
    add_check_options(check_functor, functor_args, false, false);
    auto* check_live = app.add_subcommand("check-live", "bounded live refinement check");
    add_check_options(check_live, live_args, true, true);
    auto* check_both = app.add_subcommand("check", "bounded safe and live refinement check");
    add_check_options(check_both, both_args, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    auto load_pair = [](const CheckArgs& a) {
        return std::make_pair(bigref::load_brs(a.abstract_path), bigref::load_brs(a.concrete_path));
    };

    try {
        if (*parse) return cmd_parse(file);
        if (*show) return cmd_show(file, agent);
        if (*react) return cmd_react(file, agent, steps, max_states);
        if (*traces) return cmd_traces(file, agent, depth, max_states);
        if (*check_functor) {
            auto [abs, con] = load_pair(functor_args);
            auto f = resolve_functor(functor_args, con);
            return finish(bigref::check_rule_preservation(f, con.brs, abs.brs), functor_args);
        }
        if (*check_safe) {
            auto [abs, con] = load_pair(safe_args);
            auto f = resolve_functor(safe_args, con);
            return finish(bigref::check_safe(f, con.brs, abs.brs, resolve_seeds(safe_args, con), options(safe_args)),
                          safe_args);
        }
        for (auto [cmd, args] : {std::pair{check_live, &live_args}, std::pair{check_both, &both_args}}) {
            if (!*cmd) continue;
            auto [abs, con] = load_pair(*args);
            auto f = resolve_functor(*args, con);
            const auto* pattern = abs.pattern(args->admissible);
            if (!pattern) throw Usage("unknown admissibility pattern '" + args->admissible + "' in " + args->abstract_path);
            auto seeds = resolve_seeds(*args, con);
            auto report = cmd == check_live
                              ? bigref::check_live(f, con.brs, abs.brs, *pattern, seeds, options(*args))
                              : bigref::check_safe_and_live(f, con.brs, abs.brs, *pattern, seeds, options(*args));
            return finish(report, *args);
        }
    } catch (const bigref::BoundExceeded& e) {
        std::cerr << "bound exceeded: " << e.what() << "\n";
        return kBound;
    } catch (const bigref::LoadError& e) {
        const char* kind = e.kind() == bigref::LoadError::Kind::io       ? "i/o error"
                           : e.kind() == bigref::LoadError::Kind::syntax ? "syntax error"
                                                                         : "elaboration error";
        std::cerr << kind << ": " << e.what() << "\n";
        return kUsage;
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const bigref::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
