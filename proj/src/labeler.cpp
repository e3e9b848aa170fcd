#include "privlens/labeler.hpp"

#include <algorithm>

namespace privlens {

std::string_view to_string(Sensitivity s) {
    switch (s) {
        case Sensitivity::up: return "up";
        case Sensitivity::down: return "down";
        case Sensitivity::equal: return "equal";
    }
    return "equal";
}

std::string_view to_string(FindingKind k) { return k == FindingKind::flow ? "flow" : "occurrence"; }

FlowShape classify_features(const FlowFeatures& f) {
    if (f.source_specific) return {f.source_args ? 9 : 8};
    if (f.assignment) {
        if (f.lhs_source) {
            if (f.receiver_source) return {3};
            if (f.source_args) return {2};
            return {1};
        }
        if (f.receiver_source) return {4};
        if (f.source_args) return {5};
        return {0};
    }
    if (f.receiver_source) return {f.source_args ? 7 : 6};
    if (f.source_args) return {10};
    return {0};
}

FlowShape classify_shape(const FlowFinding& f) {
    FlowFeatures feat = f.features;
    feat.source_specific = f.source_specific;
    return classify_features(feat);
}

Sensitivity sensitivity_of(FlowShape shape) {
    switch (shape.id) {
        case 1:
        case 4:
        case 5:
            return Sensitivity::up;
        case 10:
            return Sensitivity::down;
        default:
            return Sensitivity::equal;
    }
}

std::string sink_label_token(std::string_view sink) {
    std::string out;
    for (char c : sink)
        if (c != '/') out += c;
    return out;
}

std::vector<std::string> LabelSet::names() const {
    std::vector<std::string> out;
    for (const auto& s : sources) out.push_back("source." + s);
    if (sink) out.push_back("sink." + sink_label_token(*sink));
    if (ssink) out.push_back("ssink." + sink_label_token(*ssink));
    if (sensitivity) out.push_back("sens." + std::string(to_string(*sensitivity)));
    out.push_back("kind." + std::string(to_string(kind)));
    return out;
}

bool LabelSet::has(std::string_view label) const {
    auto all = names();
    return std::find(all.begin(), all.end(), label) != all.end();
}

LabelSet label(const OccurrenceFinding& f) {
    LabelSet l;
    l.sources = {f.category};
    l.kind = FindingKind::occurrence;
    return l;
}

LabelSet label(const FlowFinding& f) {
    LabelSet l;
    for (const auto& s : f.sources) l.sources.push_back(s.category);
    std::sort(l.sources.begin(), l.sources.end());
    l.sources.erase(std::unique(l.sources.begin(), l.sources.end()), l.sources.end());
    l.sink = f.sink.category;
    if (f.source_specific) l.ssink = f.sink.category;
    l.sensitivity = sensitivity_of(classify_shape(f));
    l.kind = FindingKind::flow;
    return l;
}

std::vector<std::string> label_inventory(const CompiledRuleSet& rules) {
    std::vector<std::string> out;
    for (const auto& c : rules.source_categories()) out.push_back("source." + c);
    for (auto s : kSinkAlphabet) out.push_back("sink." + sink_label_token(s));
    for (auto s : kSinkAlphabet)
        if (s != "L") out.push_back("ssink." + sink_label_token(s));
    for (auto s : {Sensitivity::up, Sensitivity::down, Sensitivity::equal})
        out.push_back("sens." + std::string(to_string(s)));
    out.push_back("kind.occurrence");
    out.push_back("kind.flow");
    return out;
}

std::vector<std::string> parse_label_list(std::string_view text, const CompiledRuleSet& rules) {
    auto inventory = label_inventory(rules);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        auto b = piece.find_first_not_of(" \t");
        if (b != std::string_view::npos) {
            auto e = piece.find_last_not_of(" \t");
            std::string name(piece.substr(b, e - b + 1));
            if (std::find(inventory.begin(), inventory.end(), name) == inventory.end())
                throw LabelError("unknown label '" + name + "'");
            if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace privlens
