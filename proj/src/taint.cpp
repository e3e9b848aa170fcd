#include "privlens/taint.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "privlens/identifier.hpp"

namespace privlens {

std::string_view to_string(SourceOrigin origin) {
    switch (origin) {
        case SourceOrigin::name_match: return "name-match";
        case SourceOrigin::propagated: return "propagated";
        case SourceOrigin::rerooted: return "rerooted";
    }
    return "name-match";
}

std::string_view to_string(SinkVia via) { return via == SinkVia::api ? "api" : "verb"; }

namespace {

constexpr std::size_t kMaxLoopRounds = 64;

void add_unique(std::vector<SourceRef>& into, const SourceRef& ref) {
    auto it = std::lower_bound(into.begin(), into.end(), ref);
    if (it == into.end() || *it != ref) into.insert(it, ref);
}

void add_all(std::vector<SourceRef>& into, const std::vector<SourceRef>& refs) {
    for (const auto& r : refs) add_unique(into, r);
}

void join_into(TaintState& into, const TaintState& other) {
    for (const auto& [key, refs] : other) add_all(into[key], refs);
}

/// Source method test: first token a non-logging verb, a later token run a keyword.
std::optional<std::pair<std::string, std::string>> source_method(const std::string& name,
                                                                 const CompiledRuleSet& rules) {
    auto tokens = tokenize_identifier(name);
    if (tokens.size() < 2) return std::nullopt;
    auto verb = rules.sink_category_of_verb(tokens.front());
    if (!verb || *verb == "L") return std::nullopt;
    auto cat = rules.source_category_of_tokens(std::span<const std::string>(tokens).subspan(1));
    if (!cat) return std::nullopt;
    return std::make_pair(*cat, *verb);
}

class Analyzer {
public:
    Analyzer(const NormalizedUnit& unit, const CompiledRuleSet& rules)
        : unit_(unit), rules_(rules), libraries_(libraries_in_scope(unit, rules)) {}

    void run_block(const Block& block, TaintState& st) {
        for (const auto& node : block.nodes) {
            if (const auto* stmt = std::get_if<Stmt>(&node.value)) {
                run_stmt(*stmt, st);
                continue;
            }
            const auto& br = std::get<Branch>(node.value);
            if (br.loop) {
                for (std::size_t round = 0; round < kMaxLoopRounds; ++round) {
                    TaintState next = st;
                    for (const auto& arm : br.arms) {
                        TaintState s = st;
                        run_block(arm, s);
                        join_into(next, s);
                    }
                    if (next == st) break;
                    st = std::move(next);
                }
            } else {
                TaintState joined;
                for (const auto& arm : br.arms) {
                    TaintState s = st;
                    run_block(arm, s);
                    join_into(joined, s);
                }
                st = std::move(joined);
            }
        }
    }

    void set_scope(std::string name) { scope_ = std::move(name); }
    void set_recording(bool on) { recording_ = on; }

    std::vector<FlowFinding> take_findings() {
        std::vector<FlowFinding> out;
        out.reserve(findings_.size());
        for (auto& [ptr, f] : findings_) out.push_back(std::move(f));
        findings_.clear();
        return out;
    }

    /// Provenance of a value path: its own name plus any tainted prefix.
    std::vector<SourceRef> refs_of(const Chain& chain, const TaintState& st, LineSpan site) const {
        std::vector<SourceRef> out;
        if (auto own = source_of_chain(chain, rules_, site)) add_unique(out, *own);
        std::string key;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (i) key += '.';
            key += chain[i];
            auto it = st.find(key);
            if (it == st.end()) continue;
            for (const auto& root : it->second) {
                SourceRef r{chain, root.category, root.site, SourceOrigin::propagated};
                add_unique(out, r);
            }
        }
        return out;
    }

    std::vector<SourceRef> refs_of(const ExprSummary& e, const TaintState& st, LineSpan site) const {
        std::vector<SourceRef> out;
        for (const auto& m : e.mentions) add_all(out, refs_of(m, st, site));
        for (const auto& c : e.calls) {
            if (c.empty()) continue;
            if (auto sm = source_method(c.back(), rules_))
                add_unique(out, SourceRef{{c.back()}, sm->first, site, SourceOrigin::rerooted});
        }
        return out;
    }

private:
    void run_stmt(const Stmt& stmt, TaintState& st) {
        for (const auto& inner : stmt.inner) check_call(inner, st, true);
        check_call(stmt, st, false);
        // Receiver updates are applied after every call of the statement was checked.
        std::vector<std::pair<std::string, std::vector<SourceRef>>> held;
        for (const auto& inner : stmt.inner) receiver_update(inner, st, held);
        receiver_update(stmt, st, held);
        for (auto& [key, roots] : held) add_all(st[key], roots);
        if (stmt.kind != StmtKind::assignment) return;

        std::vector<SourceRef> roots = roots_of(stmt.value, st, stmt.span);

        for (const auto& target : stmt.targets) {
            if (target.empty()) continue;
            std::string key = join_chain(target);
            if (!stmt.compound) {
                st.erase(key);
                std::string prefix = key + ".";
                for (auto it = st.lower_bound(prefix); it != st.end() && it->first.starts_with(prefix);)
                    it = st.erase(it);
            }
            if (roots.empty()) continue;
            add_all(st[key], roots);
            // o.f = tainted also taints o, except for the bare `this` object.
            if (target.size() > 1) {
                Chain parent(target.begin(), target.end() - 1);
                if (!(parent.size() == 1 && parent.front() == "this")) add_all(st[join_chain(parent)], roots);
            }
        }
    }

    /// Roots of a value: what a later reader of it inherits.
    std::vector<SourceRef> roots_of(const ExprSummary& e, const TaintState& st, LineSpan site) const {
        std::vector<SourceRef> roots;
        for (const auto& r : refs_of(e, st, site)) {
            if (r.origin == SourceOrigin::propagated) {
                // Keep the original root rather than the intermediate path.
                for (std::size_t n = 1; n <= r.chain.size(); ++n) {
                    auto it = st.find(join_chain(Chain(r.chain.begin(), r.chain.begin() + static_cast<long>(n))));
                    if (it != st.end()) add_all(roots, it->second);
                }
            } else {
                add_unique(roots, r);
            }
        }
        return roots;
    }

    // `list.push(email)`, `ps.setString(1, name)` and `profile.updatePhone(p)` leave
    // the data in the receiver; for a chain like sb.append(a).append(b) that is sb. Sinks that consume their arguments (send, log, save
    // and so on) do not, and neither do capitalized static receivers like JSON.
    void receiver_update(const Stmt& call, const TaintState& st,
                         std::vector<std::pair<std::string, std::vector<SourceRef>>>& held) const {
        if (!call.has_callee() || call.constructor_call) return;
        Chain recv = call.base_object();
        if (recv.empty() || recv.front().empty()) return;
        if (!std::islower(static_cast<unsigned char>(recv.front().front()))) return;
        if (recv.size() == 1 && recv.front() == "this") return;
        std::vector<SourceRef> roots;
        auto reroot = reroot_source_specific_sink(call, rules_);
        if (reroot) {
            if (reroot->second.category != "M") return;
            add_unique(roots, reroot->first);
        } else if (auto sink = sink_of_call(call, rules_, libraries_); sink && sink->category != "M") {
            return;
        }
        for (const auto& arg : call.args) add_all(roots, roots_of(arg, st, call.span));
        if (roots.empty()) return;
        held.emplace_back(join_chain(recv), std::move(roots));
    }

    void check_call(const Stmt& call, const TaintState& st, bool bare) {
        if (!recording_ || !call.has_callee() || call.constructor_call) return;
        auto reroot = reroot_source_specific_sink(call, rules_);
        std::optional<SinkRef> sink = reroot ? std::optional<SinkRef>(reroot->second)
                                             : sink_of_call(call, rules_, libraries_);
        if (!sink) return;

        FlowFeatures feat;
        feat.source_specific = reroot.has_value();
        feat.assignment = !bare && call.kind == StmtKind::assignment;
        std::vector<SourceRef> sources;
        if (reroot) add_unique(sources, reroot->first);

        if (feat.assignment) {
            for (const auto& t : call.targets) {
                if (auto own = source_of_chain(t, rules_, call.span)) {
                    feat.lhs_source = true;
                    add_unique(sources, *own);
                }
            }
        }

        std::vector<SourceRef> recv = refs_of(call.receiver(), st, call.span);
        for (const auto& m : call.receiver_mentions) add_all(recv, refs_of(m, st, call.span));
        if (!recv.empty()) {
            feat.receiver_source = true;
            // A re-rooted receiver is the sink, not a source.
            if (!reroot) add_all(sources, recv);
        }

        for (const auto& arg : call.args) {
            auto refs = refs_of(arg, st, call.span);
            if (refs.empty()) continue;
            feat.source_args = true;
            add_all(sources, refs);
        }

        if (sources.empty()) return;

        auto it = findings_.find(&call);
        if (it == findings_.end()) {
            FlowFinding f;
            f.file = unit_.file;
            f.scope = scope_;
            f.sources = std::move(sources);
            f.sink = *sink;
            f.source_specific = feat.source_specific;
            f.features = feat;
            f.snippet = call.text;
            f.span = call.span;
            findings_.emplace(&call, std::move(f));
            return;
        }
        // Revisited inside a loop: the state only grows, so merge.
        FlowFinding& f = it->second;
        add_all(f.sources, sources);
        f.features.assignment |= feat.assignment;
        f.features.lhs_source |= feat.lhs_source;
        f.features.receiver_source |= feat.receiver_source;
        f.features.source_args |= feat.source_args;
    }

    const NormalizedUnit& unit_;
    const CompiledRuleSet& rules_;
    std::vector<std::string> libraries_;
    std::string scope_ = "<top>";
    bool recording_ = true;
    std::map<const Stmt*, FlowFinding> findings_;
};

void collect_stmt_sources(const Stmt& st, const CompiledRuleSet& rules, std::vector<SourceRef>& out) {
    auto add = [&](const Chain& c) {
        if (auto r = source_of_chain(c, rules, st.span)) add_unique(out, *r);
    };
    for (const auto& t : st.targets) add(t);
    for (const auto& m : st.value.mentions) add(m);
    for (const auto& a : st.args)
        for (const auto& m : a.mentions) add(m);
}

void for_each_scope(const NormalizedUnit& unit, auto&& fn) {
    fn(unit.top_level);
    for (const auto& f : unit.functions) fn(f);
}

}  // namespace

std::optional<SourceRef> source_of_chain(const Chain& chain, const CompiledRuleSet& rules, LineSpan site) {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (auto cat = rules.source_category_of(*it))
            return SourceRef{chain, *cat, site, SourceOrigin::name_match};
    }
    return std::nullopt;
}

std::vector<SourceRef> find_sources(const NormalizedUnit& unit, const CompiledRuleSet& rules) {
    std::vector<SourceRef> out;
    for_each_scope(unit, [&](const FunctionScope& scope) {
        for (const auto& p : scope.params)
            if (auto r = source_of_chain({p.name}, rules, {p.line, p.line})) add_unique(out, *r);
        for (const Stmt* st : flatten(scope.body)) {
            collect_stmt_sources(*st, rules, out);
        }
    });
    return out;
}

std::vector<std::string> libraries_in_scope(const NormalizedUnit& unit, const CompiledRuleSet& rules) {
    std::vector<std::string> libs;
    for (const auto& api : rules.apis()) {
        bool imported = std::any_of(unit.imports.begin(), unit.imports.end(), [&](const std::string& spec) {
            return spec.find(api.library) != std::string::npos;
        });
        if (imported) libs.push_back(api.library);
    }
    return libs;
}

std::optional<SinkRef> sink_of_call(const Stmt& call, const CompiledRuleSet& rules,
                                    const std::vector<std::string>& libraries) {
    if (!call.has_callee() || call.constructor_call) return std::nullopt;
    auto tokens = tokenize_identifier(call.callee_name());
    if (tokens.empty()) return std::nullopt;
    if (auto verb = rules.sink_category_of_verb(tokens.front()))
        return SinkRef{call.callee, *verb, SinkVia::verb, "", call.span};

    std::vector<std::string> libs = libraries;
    for (const auto& api : rules.apis())
        if (call.callee.front() == api.library) libs.push_back(api.library);
    if (auto hit = rules.api_match(tokens, libs))
        return SinkRef{call.callee, hit->sink_category, SinkVia::api, hit->library, call.span};
    return std::nullopt;
}

std::vector<SinkRef> find_sinks(const NormalizedUnit& unit, const CompiledRuleSet& rules) {
    std::vector<SinkRef> out;
    auto libs = libraries_in_scope(unit, rules);
    for_each_scope(unit, [&](const FunctionScope& scope) {
        for (const Stmt* st : flatten(scope.body))
            if (auto s = sink_of_call(*st, rules, libs)) out.push_back(std::move(*s));
    });
    std::stable_sort(out.begin(), out.end(), [](const SinkRef& a, const SinkRef& b) { return a.site < b.site; });
    return out;
}

std::optional<std::pair<SourceRef, SinkRef>> reroot_source_specific_sink(const Stmt& call,
                                                                         const CompiledRuleSet& rules) {
    if (!call.has_callee() || call.constructor_call) return std::nullopt;
    auto sm = source_method(call.callee_name(), rules);
    if (!sm) return std::nullopt;
    Chain receiver = call.receiver();
    if (receiver.empty()) receiver = {"this"};
    SourceRef src{{call.callee_name()}, sm->first, call.span, SourceOrigin::rerooted};
    SinkRef sink{std::move(receiver), sm->second, SinkVia::verb, "", call.span};
    return std::make_pair(std::move(src), std::move(sink));
}

TaintState propagate(const FunctionScope& scope, const CompiledRuleSet& rules, const TaintState& initial) {
    NormalizedUnit empty;
    Analyzer an(empty, rules);
    an.set_recording(false);
    TaintState st = initial;
    an.run_block(scope.body, st);
    return st;
}

bool is_tainted(const TaintState& state, const Chain& chain) {
    std::string key;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) key += '.';
        key += chain[i];
        if (state.contains(key)) return true;
    }
    return false;
}

std::vector<FlowFinding> detect_flows(const NormalizedUnit& unit, const CompiledRuleSet& rules) {
    if (unit.parse_quality != ParseQuality::full) return {};
    Analyzer an(unit, rules);
    TaintState top;
    an.set_scope(unit.top_level.name);
    an.run_block(unit.top_level.body, top);
    std::vector<FlowFinding> out = an.take_findings();
    for (const auto& fn : unit.functions) {
        an.set_scope(fn.name);
        TaintState st = top;
        an.run_block(fn.body, st);
        for (auto& f : an.take_findings()) out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const FlowFinding& a, const FlowFinding& b) {
        if (a.span != b.span) return a.span < b.span;
        if (a.sink.chain != b.sink.chain) return a.sink.chain < b.sink.chain;
        if (a.snippet != b.snippet) return a.snippet < b.snippet;
        return a.scope < b.scope;
    });
    return out;
}

}  // namespace privlens
