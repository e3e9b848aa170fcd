#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "privlens/labeler.hpp"
#include "privlens/unit.hpp"

namespace privlens {

enum class Criterion { neighboring, name_similarity, api, label_filter };

std::string_view to_string(Criterion c);

/// What grouping needs to know about one finding.
struct GroupItem {
    std::string id;
    std::string file;
    LineSpan span;
    std::vector<std::string> names;  // identifiers compared by name similarity
    std::optional<std::string> api_library;
    LabelSet labels;
};

struct Group {
    std::string id;
    Criterion criterion = Criterion::neighboring;
    std::string key;                          // file, "api:<library>", or the first member's name
    std::vector<std::string> members;         // finding ids in (file, span, id) order
    std::vector<std::string> label_summary;   // union of member labels, ascending

    bool operator==(const Group&) const = default;
};

inline constexpr int kDefaultLineThreshold = 10;
inline constexpr double kDefaultNameThreshold = 0.5;

/// Line distance between two spans; 0 when they overlap.
int line_gap(LineSpan a, LineSpan b);

/// Same-file findings at most `line_threshold` lines apart share a group, transitively.
std::vector<Group> merge_neighbors(std::vector<GroupItem> items, int line_threshold = kDefaultLineThreshold);

/// Findings with a pair of names whose token Jaccard is at least `threshold` share
/// a group, transitively. Items without names are left out.
std::vector<Group> group_by_name(std::vector<GroupItem> items, double threshold = kDefaultNameThreshold);

/// One group per library among API-matched findings.
std::vector<Group> group_by_api(std::vector<GroupItem> items);

/// Items whose labels contain every wanted label. Throws LabelError for names
/// outside `inventory`.
std::vector<GroupItem> filter_by_labels(const std::vector<GroupItem>& items, const std::vector<std::string>& wanted,
                                        const std::vector<std::string>& inventory);

}  // namespace privlens
