#include "privlens/grouper.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "privlens/identifier.hpp"

namespace privlens {

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::neighboring: return "neighboring";
        case Criterion::name_similarity: return "name-similarity";
        case Criterion::api: return "api";
        case Criterion::label_filter: return "label-filter";
    }
    return "neighboring";
}

namespace {

void sort_items(std::vector<GroupItem>& items) {
    std::sort(items.begin(), items.end(), [](const GroupItem& a, const GroupItem& b) {
        return std::tie(a.file, a.span, a.id) < std::tie(b.file, b.span, b.id);
    });
}

Group make_group(Criterion c, std::string key, const std::vector<const GroupItem*>& members) {
    Group g;
    g.criterion = c;
    g.key = std::move(key);
    std::set<std::string> labels;
    for (const auto* m : members) {
        g.members.push_back(m->id);
        for (auto& l : m->labels.names()) labels.insert(std::move(l));
    }
    g.label_summary.assign(labels.begin(), labels.end());
    return g;
}

void number(std::vector<Group>& groups, std::string_view prefix) {
    for (std::size_t i = 0; i < groups.size(); ++i) groups[i].id = std::string(prefix) + "-" + std::to_string(i + 1);
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

int line_gap(LineSpan a, LineSpan b) {
    return std::max(0, std::max(a.start, b.start) - std::min(a.end, b.end));
}

std::vector<Group> merge_neighbors(std::vector<GroupItem> items, int line_threshold) {
    sort_items(items);
    std::vector<Group> groups;
    std::vector<const GroupItem*> current;
    int reach = 0;  // furthest end line of the current group
    for (const auto& it : items) {
        bool joins = !current.empty() && current.front()->file == it.file && it.span.start - reach <= line_threshold;
        if (!joins && !current.empty()) {
            groups.push_back(make_group(Criterion::neighboring, current.front()->file, current));
            current.clear();
        }
        if (current.empty()) reach = it.span.end;
        current.push_back(&it);
        reach = std::max(reach, it.span.end);
    }
    if (!current.empty()) groups.push_back(make_group(Criterion::neighboring, current.front()->file, current));
    number(groups, "near");
    return groups;
}

std::vector<Group> group_by_name(std::vector<GroupItem> items, double threshold) {
    sort_items(items);
    std::erase_if(items, [](const GroupItem& i) { return i.names.empty(); });
    // Token sets once per item.
    std::vector<std::vector<std::set<std::string>>> tokens(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        for (const auto& n : items[i].names) {
            auto t = tokenize_identifier(n);
            tokens[i].emplace_back(t.begin(), t.end());
        }
    auto similar = [&](std::size_t a, std::size_t b) {
        for (std::size_t x = 0; x < tokens[a].size(); ++x)
            for (std::size_t y = 0; y < tokens[b].size(); ++y) {
                if (items[a].names[x] == items[b].names[y]) return true;
                const auto& ta = tokens[a][x];
                const auto& tb = tokens[b][y];
                if (ta.empty() || tb.empty()) continue;
                std::size_t common = 0;
                for (const auto& t : ta) common += tb.count(t);
                double j = static_cast<double>(common) / static_cast<double>(ta.size() + tb.size() - common);
                if (j >= threshold) return true;
            }
        return false;
    };
    DisjointSets ds(items.size());
    for (std::size_t a = 0; a < items.size(); ++a)
        for (std::size_t b = a + 1; b < items.size(); ++b)
            if (ds.find(a) != ds.find(b) && similar(a, b)) ds.unite(a, b);

    std::map<std::size_t, std::vector<const GroupItem*>> by_root;  // root = smallest index
    for (std::size_t i = 0; i < items.size(); ++i) by_root[ds.find(i)].push_back(&items[i]);
    std::vector<Group> groups;
    for (auto& [root, members] : by_root)
        groups.push_back(make_group(Criterion::name_similarity, members.front()->names.front(), members));
    number(groups, "name");
    return groups;
}

std::vector<Group> group_by_api(std::vector<GroupItem> items) {
    sort_items(items);
    std::map<std::string, std::vector<const GroupItem*>> by_lib;
    for (const auto& it : items)
        if (it.api_library) by_lib[*it.api_library].push_back(&it);
    std::vector<Group> groups;
    for (auto& [lib, members] : by_lib) groups.push_back(make_group(Criterion::api, "api:" + lib, members));
    number(groups, "api");
    return groups;
}

std::vector<GroupItem> filter_by_labels(const std::vector<GroupItem>& items, const std::vector<std::string>& wanted,
                                        const std::vector<std::string>& inventory) {
    for (const auto& w : wanted)
        if (std::find(inventory.begin(), inventory.end(), w) == inventory.end())
            throw LabelError("unknown label '" + w + "'");
    std::vector<GroupItem> out;
    for (const auto& it : items) {
        auto names = it.labels.names();
        bool all = std::all_of(wanted.begin(), wanted.end(), [&](const std::string& w) {
            return std::find(names.begin(), names.end(), w) != names.end();
        });
        if (all) out.push_back(it);
    }
    return out;
}

}  // namespace privlens
