#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "privlens/labeler.hpp"
#include "test_util.hpp"

using namespace privlens;

namespace {

FlowFinding only_flow(const std::string& code) {
    auto flows = detect_flows(testutil::parse(code), testutil::rules());
    REQUIRE(flows.size() == 1);
    return flows[0];
}

}  // namespace

TEST_CASE("all 32 feature combinations get the table's shape") {
    std::set<int> reached;
    for (int bits = 0; bits < 32; ++bits) {
        FlowFeatures f;
        f.assignment = bits & 1;
        f.lhs_source = bits & 2;
        f.receiver_source = bits & 4;
        f.source_args = bits & 8;
        f.source_specific = bits & 16;
        int rows = 0;
        int want = oracle::shape_from_table(f.assignment, f.lhs_source, f.receiver_source, f.source_args,
                                            f.source_specific, &rows);
        CAPTURE(bits);
        CHECK(rows <= 1);
        int got = classify_features(f).id;
        CHECK(got == want);
        CHECK(got >= 0);
        CHECK(got <= 10);
        reached.insert(got);
    }
    for (int s = 1; s <= 10; ++s) CHECK(reached.contains(s));
}

TEST_CASE("sensitivity buckets") {
    for (int s : {1, 4, 5}) CHECK(sensitivity_of({s}) == Sensitivity::up);
    for (int s : {2, 3, 6, 7, 8, 9}) CHECK(sensitivity_of({s}) == Sensitivity::equal);
    CHECK(sensitivity_of({10}) == Sensitivity::down);
    CHECK(sensitivity_of({0}) == Sensitivity::equal);
}

TEST_CASE("shapes of example statements") {
    CHECK(classify_shape(only_flow("email = resp.fetch(url);\n")).id == 1);
    CHECK(classify_shape(only_flow("gpsTracker.setLatitude(100,100);\n")).id == 8);
    CHECK(classify_shape(only_flow("logger.log(userEmail, name);\n")).id == 10);
    CHECK(classify_shape(only_flow("hash = user.ssn.digest(salt);\n")).id == 4);
    CHECK(classify_shape(only_flow("phone = fmt.format(userEmail);\n")).id == 2);
    CHECK(classify_shape(only_flow("coords = this.lat.convert(x);\n")).id == 3);
    CHECK(classify_shape(only_flow("token = crypto.encrypt(password);\n")).id == 5);
    CHECK(classify_shape(only_flow("user.ssn.save();\n")).id == 6);
    CHECK(classify_shape(only_flow("user.ssn.send(userEmail);\n")).id == 7);
    CHECK(classify_shape(only_flow("profile.updateEmail(x, userEmail);\n")).id == 9);
}

TEST_CASE("the digest example agrees with the table oracle") {
    auto f = only_flow("hash = user.ssn.digest(salt);\n");
    CHECK(f.features.assignment);
    CHECK_FALSE(f.features.lhs_source);
    CHECK(f.features.receiver_source);
    CHECK_FALSE(f.features.source_args);
    CHECK(oracle::shape_from_table(true, false, true, false, false) == 4);
}

TEST_CASE("labels of a flow") {
    auto f = only_flow("client.send(userEmail);\n");
    auto l = label(f);
    CHECK(l.sources == std::vector<std::string>{"contact"});
    CHECK(l.sink == "T");
    CHECK_FALSE(l.ssink);
    CHECK(l.sensitivity == Sensitivity::down);
    CHECK(l.kind == FindingKind::flow);
    CHECK(l.names() == std::vector<std::string>{"source.contact", "sink.T", "sens.down", "kind.flow"});
}

TEST_CASE("labels of an occurrence") {
    OccurrenceFinding o;
    o.category = "financial";
    auto l = label(o);
    CHECK(l.sources == std::vector<std::string>{"financial"});
    CHECK_FALSE(l.sink);
    CHECK_FALSE(l.sensitivity);
    CHECK(l.names() == std::vector<std::string>{"source.financial", "kind.occurrence"});
}

TEST_CASE("re-rooted flows carry a source-specific sink label") {
    auto l = label(only_flow("gpsTracker.setLatitude(100,100);\n"));
    CHECK(l.ssink == "M");
    CHECK(l.has("ssink.M"));
    CHECK(l.has("sens.equal"));
    CHECK(l.has("source.location"));
    CHECK_FALSE(label(only_flow("client.send(userEmail);\n")).ssink);
}

TEST_CASE("C/D serializes as CD") {
    auto l = label(only_flow("repo.delete(userEmail);\n"));
    CHECK(l.sink == "C/D");
    CHECK(l.has("sink.CD"));
    CHECK(sink_label_token("C/D") == "CD");
}

TEST_CASE("label inventory and label lists") {
    auto inv = label_inventory(testutil::rules());
    CHECK(inv.size() == 9 + 6 + 5 + 3 + 2);
    std::set<std::string> unique(inv.begin(), inv.end());
    CHECK(unique.size() == inv.size());
    for (std::string l : {"source.account", "source.credentials", "sink.CD", "sink.L", "ssink.E", "sens.up",
                          "kind.occurrence"})
        CHECK(unique.contains(l));
    CHECK_FALSE(unique.contains("ssink.L"));

    auto& r = testutil::rules();
    CHECK(parse_label_list(" sink.T , source.contact,,sink.T", r) == std::vector<std::string>{"sink.T", "source.contact"});
    CHECK(parse_label_list("", r).empty());
    CHECK_THROWS_WITH_AS(parse_label_list("sink.Q", r), doctest::Contains("unknown label"), LabelError);
}

TEST_CASE("every emitted label is in the inventory") {
    auto inv = label_inventory(testutil::rules());
    std::set<std::string> known(inv.begin(), inv.end());
    auto flows = detect_flows(testutil::parse("client.send(userEmail);\ngpsTracker.setLatitude(1);\nlogger.warn(ip);\n"
                                              "x = hasher.hash(password);\nrepo.save(bloodType);\n"),
                              testutil::rules());
    REQUIRE(flows.size() == 5);
    for (const auto& f : flows)
        for (const auto& l : label(f).names()) CHECK(known.contains(l));
}
