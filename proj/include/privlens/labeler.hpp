#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "privlens/cleartext.hpp"
#include "privlens/ruleset.hpp"
#include "privlens/taint.hpp"

namespace privlens {

/// 1..10 for the statement shapes below, 0 when none applies.
///
///   1  O = _.I(_)        2  O2 = _.I(O1,_)    3  O2 = _.O1.I(_)
///   4  _ = _.O.I(_)      5  _ = _.I(Ō,_)      6  _.O.I(_)
///   7  _.O.I(_,Ō)        8  _.I^O(_)          9  _.I^O(_,Ō)
///   10 _.I(Ō,_)
///
/// O is a source, I a sink, I^O a source-specific sink, Ō one or more sources.
struct FlowShape {
    int id = 0;
    bool operator==(const FlowShape&) const = default;
};

enum class Sensitivity { up, down, equal };
enum class FindingKind { occurrence, flow };

std::string_view to_string(Sensitivity s);
std::string_view to_string(FindingKind k);

FlowShape classify_features(const FlowFeatures& f);
FlowShape classify_shape(const FlowFinding& f);

/// up for 1, 4, 5; down for 10; equal otherwise, including 0.
Sensitivity sensitivity_of(FlowShape shape);

struct LabelSet {
    std::vector<std::string> sources;  // category names, ascending, unique
    std::optional<std::string> sink;   // sink alphabet name, e.g. "C/D"
    std::optional<std::string> ssink;  // set iff the finding was re-rooted
    std::optional<Sensitivity> sensitivity;
    FindingKind kind = FindingKind::occurrence;

    /// Serialized names, e.g. source.contact, sink.CD, sens.up, kind.flow.
    std::vector<std::string> names() const;
    bool has(std::string_view label) const;

    bool operator==(const LabelSet&) const = default;
};

LabelSet label(const OccurrenceFinding& f);
LabelSet label(const FlowFinding& f);

/// "C/D" serializes as "CD".
std::string sink_label_token(std::string_view sink);

class LabelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Every label a run with these rules can emit.
std::vector<std::string> label_inventory(const CompiledRuleSet& rules);

/// Splits "a,b,c", drops blanks, and rejects names outside the inventory.
std::vector<std::string> parse_label_list(std::string_view text, const CompiledRuleSet& rules);

}  // namespace privlens
