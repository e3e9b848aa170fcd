#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privlens/ruleset.hpp"
#include "privlens/unit.hpp"

namespace privlens {

enum class SourceOrigin { name_match, propagated, rerooted };
enum class SinkVia { verb, api };

std::string_view to_string(SourceOrigin origin);
std::string_view to_string(SinkVia via);

struct SourceRef {
    Chain chain;
    std::string category;
    LineSpan site;
    SourceOrigin origin = SourceOrigin::name_match;

    bool operator==(const SourceRef&) const = default;
    auto operator<=>(const SourceRef&) const = default;
};

struct SinkRef {
    Chain chain;  // callee chain; for a re-rooted call, the receiver
    std::string category;
    SinkVia via = SinkVia::verb;
    std::string library;  // set when via == api
    LineSpan site;

    bool operator==(const SinkRef&) const = default;
};

/// The statement facts the shape classifier works from.
struct FlowFeatures {
    bool assignment = false;       // the sink call's value is assigned
    bool lhs_source = false;       // some assignment target is source-named
    bool receiver_source = false;  // the receiver chain carries personal data
    bool source_args = false;      // some argument carries personal data
    bool source_specific = false;  // re-rooted call

    bool operator==(const FlowFeatures&) const = default;
};

struct FlowFinding {
    std::string file;
    std::string scope;  // enclosing function name, "<top>" for file level
    std::vector<SourceRef> sources;  // non-empty, sorted, unique
    SinkRef sink;
    bool source_specific = false;
    FlowFeatures features;
    std::string snippet;  // statement text, unmasked
    LineSpan span;

    bool operator==(const FlowFinding&) const = default;
};

/// Path key -> where its personal data came from.
using TaintState = std::map<std::string, std::vector<SourceRef>>;

/// The source category of a chain: the last element that is source-named.
std::optional<SourceRef> source_of_chain(const Chain& chain, const CompiledRuleSet& rules, LineSpan site);

/// Every source-named parameter, assignment target and read path in the unit.
std::vector<SourceRef> find_sources(const NormalizedUnit& unit, const CompiledRuleSet& rules);

/// Libraries of the rule set that the unit imports.
std::vector<std::string> libraries_in_scope(const NormalizedUnit& unit, const CompiledRuleSet& rules);

/// Sink classification of one call; verb matches win over API matches.
std::optional<SinkRef> sink_of_call(const Stmt& call, const CompiledRuleSet& rules,
                                    const std::vector<std::string>& libraries);

std::vector<SinkRef> find_sinks(const NormalizedUnit& unit, const CompiledRuleSet& rules);

/// A call whose final name is `<verb><keyword...>` such as setLatitude: the method
/// becomes a source and its receiver ("this" for a bare call) the sink.
/// Logging verbs are not re-rooted.
std::optional<std::pair<SourceRef, SinkRef>> reroot_source_specific_sink(const Stmt& call,
                                                                         const CompiledRuleSet& rules);

/// Runs the scope's statements forward from `initial` and returns the final state.
TaintState propagate(const FunctionScope& scope, const CompiledRuleSet& rules, const TaintState& initial = {});

/// True when `chain` (or a prefix of it) is tainted in `state`.
bool is_tainted(const TaintState& state, const Chain& chain);

/// All flows of the unit, ordered by (start line, end line, sink chain).
std::vector<FlowFinding> detect_flows(const NormalizedUnit& unit, const CompiledRuleSet& rules);

}  // namespace privlens
