#include "doctest.h"
#include "oracles.hpp"
#include "privlens/identifier.hpp"

using privlens::token_jaccard;
using privlens::tokenize_identifier;
using V = std::vector<std::string>;

TEST_CASE("tokenize_identifier splits camelCase, underscores and acronyms") {
    CHECK(tokenize_identifier("userEmailAddress") == V{"user", "email", "address"});
    CHECK(tokenize_identifier("national_id_no") == V{"national", "id", "no"});
    CHECK(tokenize_identifier("XMLHttpRequest") == V{"xml", "http", "request"});
    CHECK(tokenize_identifier("ssnList") == V{"ssn", "list"});
    CHECK(tokenize_identifier("").empty());
    CHECK(tokenize_identifier("__proto__") == V{"proto"});
}

TEST_CASE("tokenize_identifier agrees with the regex oracle on 30 identifiers") {
    const V ids = {"userEmail",     "userEmailAddress", "XMLHttpRequest",  "national_id_no", "ssnList",
                   "getUserID",     "IOStream",         "parseHTML5Doc",   "dateOfBirth",    "SSN",
                   "MAX_RETRY",     "ipv4Address",      "setLatitude",     "gpsTracker",     "organizationUserId",
                   "HTTPServer",    "a1b2c3",           "x",               "toJSON",         "creditCardNumber",
                   "user_name",     "base64Encode",     "ABCdef",          "camelCaseID",    "sha256Hash",
                   "mobileNumber2", "zip_code",         "IBANValidator",   "firstName",      "getHTTPResponseCode"};
    REQUIRE(ids.size() == 30);
    for (const auto& id : ids) {
        CAPTURE(id);
        CHECK(tokenize_identifier(id) == oracle::tokens(id));
    }
}

TEST_CASE("tokenize_identifier is idempotent on lowercase single tokens") {
    for (std::string w : {"email", "ssn", "latitude", "send"}) {
        CHECK(tokenize_identifier(w) == V{w});
        CHECK(tokenize_identifier(tokenize_identifier(w).front()) == V{w});
    }
}

TEST_CASE("token_jaccard") {
    CHECK(token_jaccard("userEmail", "userEmailAddress") == doctest::Approx(2.0 / 3.0));
    CHECK(token_jaccard("userEmail", "gpsTracker") == 0.0);
    CHECK(token_jaccard("organizationUserId", "organizationUserId") == 1.0);
    CHECK(token_jaccard("__", "__") == 1.0);
    CHECK(token_jaccard("__", "$$") == 0.0);
}
