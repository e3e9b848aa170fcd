#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "privlens/grouper.hpp"
#include "test_util.hpp"

using namespace privlens;

namespace {

GroupItem item(std::string id, std::string file, int start, int end = 0) {
    GroupItem it;
    it.id = std::move(id);
    it.file = std::move(file);
    it.span = {start, end ? end : start};
    return it;
}

GroupItem named(std::string id, std::vector<std::string> names, int line = 1) {
    GroupItem it = item(std::move(id), "a.js", line);
    it.names = std::move(names);
    return it;
}

std::set<std::set<std::string>> partition(const std::vector<Group>& groups) {
    std::set<std::set<std::string>> out;
    for (const auto& g : groups) out.emplace(g.members.begin(), g.members.end());
    return out;
}

std::vector<GroupItem> random_items(std::mt19937_64& rng) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, 40)(rng);
    std::vector<GroupItem> items;
    for (std::size_t i = 0; i < n; ++i) {
        int start = std::uniform_int_distribution<int>(1, 200)(rng);
        int len = std::uniform_int_distribution<int>(0, 6)(rng);
        std::string file = std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 2)(rng))) + ".js";
        items.push_back(item("f-" + std::to_string(i), file, start, start + len));
    }
    return items;
}

}  // namespace

TEST_CASE("line_gap") {
    CHECK(line_gap({10, 10}, {15, 15}) == 5);
    CHECK(line_gap({15, 20}, {10, 12}) == 3);
    CHECK(line_gap({10, 20}, {12, 14}) == 0);
}

TEST_CASE("merge_neighbors examples") {
    CHECK(merge_neighbors({item("a", "f", 10), item("b", "f", 15)}, 10).size() == 1);
    CHECK(merge_neighbors({item("a", "f", 10), item("b", "f", 40)}, 10).size() == 2);
    auto chained = merge_neighbors({item("a", "f", 10), item("b", "f", 19), item("c", "f", 27)}, 10);
    REQUIRE(chained.size() == 1);
    CHECK(chained[0].members == std::vector<std::string>{"a", "b", "c"});
    CHECK(chained[0].id == "near-1");
    CHECK(chained[0].key == "f");
    // Different files never merge.
    CHECK(merge_neighbors({item("a", "f", 10), item("b", "g", 10)}, 10).size() == 2);
}

TEST_CASE("merge_neighbors agrees with pairwise union-find") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 100; ++round) {
        auto items = random_items(rng);
        int threshold = std::uniform_int_distribution<int>(0, 15)(rng);
        std::vector<oracle::Span> spans;
        for (const auto& it : items) spans.push_back({it.id, it.file, it.span.start, it.span.end});
        CHECK(partition(merge_neighbors(items, threshold)) == oracle::neighbor_partition(spans, threshold));
    }
}

TEST_CASE("merge_neighbors is permutation invariant and idempotent") {
    std::mt19937_64 rng(6);
    for (int round = 0; round < 100; ++round) {
        auto items = random_items(rng);
        auto groups = merge_neighbors(items);
        auto shuffled = items;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(merge_neighbors(shuffled) == groups);

        std::map<std::string, GroupItem> by_id;
        for (const auto& it : items) by_id[it.id] = it;
        std::set<std::string> seen;
        for (const auto& g : groups) {
            std::vector<GroupItem> members;
            for (const auto& id : g.members) {
                members.push_back(by_id.at(id));
                CHECK(seen.insert(id).second);
            }
            auto again = merge_neighbors(members);
            REQUIRE(again.size() == 1);
            CHECK(again[0].members == g.members);
        }
        CHECK(seen.size() == items.size());
    }
}

TEST_CASE("group_by_name examples") {
    auto same = group_by_name({named("a", {"organizationUserId"}), named("b", {"organizationUserId"}, 50)});
    CHECK(same.size() == 1);
    CHECK(group_by_name({named("a", {"userEmail"}), named("b", {"userEmailAddress"})}, 0.5).size() == 1);
    CHECK(group_by_name({named("a", {"userEmail"}), named("b", {"gpsTracker"})}, 0.5).size() == 2);
    // Items without names are left out.
    CHECK(group_by_name({named("a", {}), named("b", {"ssn"})}).size() == 1);
}

TEST_CASE("group_by_name agrees with a brute-force Jaccard closure") {
    const std::vector<std::string> pool = {"userEmail", "userEmailAddress", "email", "gpsTracker", "gpsLat",
                                           "lat",       "ssn",              "ssnList", "cardNumber", "userName",
                                           "accountId", "organizationUserId"};
    auto jaccard = [](const std::string& a, const std::string& b) {
        auto ta = oracle::tokens(a);
        auto tb = oracle::tokens(b);
        std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end()), both;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(both, both.end()));
        return static_cast<double>(both.size()) / static_cast<double>(sa.size() + sb.size() - both.size());
    };
    std::mt19937_64 rng(9);
    for (int round = 0; round < 50; ++round) {
        std::vector<GroupItem> items;
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> names;
            std::size_t k = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
            for (std::size_t j = 0; j < k; ++j)
                names.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
            items.push_back(named("n-" + std::to_string(i), names, static_cast<int>(i)));
        }
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (const auto& x : items[a].names)
                    for (const auto& y : items[b].names)
                        if (jaccard(x, y) >= 0.5) parent[find(a)] = find(b);
        std::map<std::size_t, std::set<std::string>> parts;
        for (std::size_t i = 0; i < n; ++i) parts[find(i)].insert(items[i].id);
        std::set<std::set<std::string>> want;
        for (auto& [r, ids] : parts) want.insert(ids);
        CHECK(partition(group_by_name(items, 0.5)) == want);
    }
}

TEST_CASE("group_by_api") {
    auto api = [](std::string id, int line, std::optional<std::string> lib) {
        GroupItem it = item(std::move(id), "a.js", line);
        it.api_library = std::move(lib);
        return it;
    };
    auto one = group_by_api({api("a", 1, "mongodb"), api("b", 30, "mongodb"), api("c", 90, "mongodb")});
    REQUIRE(one.size() == 1);
    CHECK(one[0].key == "api:mongodb");
    CHECK(one[0].members.size() == 3);
    CHECK(group_by_api({api("a", 1, std::nullopt)}).empty());
    auto two = group_by_api({api("a", 1, "redis"), api("b", 2, "mongodb")});
    REQUIRE(two.size() == 2);
    CHECK(two[0].key == "api:mongodb");
    CHECK(two[1].key == "api:redis");
}

TEST_CASE("filter_by_labels is a conjunction") {
    auto inv = label_inventory(testutil::rules());
    auto flow = [](std::string id, std::string source, std::string sink) {
        GroupItem it = item(std::move(id), "a.js", 1);
        it.labels.sources = {std::move(source)};
        it.labels.sink = std::move(sink);
        it.labels.sensitivity = Sensitivity::down;
        it.labels.kind = FindingKind::flow;
        return it;
    };
    std::vector<GroupItem> items = {flow("a", "contact", "T"), flow("b", "contact", "DB"), flow("c", "location", "T")};
    auto kept = filter_by_labels(items, {"sink.T", "source.contact"}, inv);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].id == "a");
    CHECK(filter_by_labels(items, {}, inv).size() == 3);
    CHECK_THROWS_WITH_AS(filter_by_labels(items, {"sink.Q"}, inv), doctest::Contains("unknown label"), LabelError);
}

TEST_CASE("groups carry the union of member labels") {
    GroupItem a = item("a", "f", 1);
    a.labels.sources = {"contact"};
    GroupItem b = item("b", "f", 2);
    b.labels.sources = {"location"};
    auto g = merge_neighbors({a, b});
    REQUIRE(g.size() == 1);
    CHECK(g[0].label_summary == std::vector<std::string>{"kind.occurrence", "source.contact", "source.location"});
}
