#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fats/bandit.hpp"
#include "fats/casebase.hpp"
#include "support/properties.hpp"

using namespace fats;

namespace {

const OntologySet& onts() {
    static const OntologySet set = OntologySet::load(
        std::string(FATS_DATA_DIR) + "/ontology_location.json",
        std::string(FATS_DATA_DIR) + "/ontology_time.json",
        std::string(FATS_DATA_DIR) + "/ontology_social.json");
    return set;
}

Situation sit(const char* l, const char* t, const char* s) {
    return make_situation(onts(), l, t, s);
}

}  // namespace

TEST_CASE("retrieval on an empty base signals no case") {
    CaseBase cb;
    CHECK(!retrieve_case(cb, onts(), sit("Home", "Saturday", "Family")).has_value());
    CHECK(cb.weights.history_count() == 0);  // nothing recorded
}

TEST_CASE("retrieval finds the identical situation with similarity 1") {
    CaseBase cb;
    bootstrap_case(cb, sit("Home", "Saturday", "Family"));
    bootstrap_case(cb, sit("Office", "Morning", "Colleagues"));
    const auto r = retrieve_case(cb, onts(), sit("Office", "Morning", "Colleagues"));
    REQUIRE(r.has_value());
    CHECK(r->index == 1);
    CHECK(r->similarity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cb.weights.history_count() == 1);  // winner's sims recorded
    CHECK(cb.weights.sums() == std::array<double, 3>{1.0, 1.0, 1.0});
}

TEST_CASE("retrieval picks the argmax of the weighted similarity") {
    CaseBase cb;
    bootstrap_case(cb, sit("Home", "Saturday", "Family"));       // far from the query
    bootstrap_case(cb, sit("Office", "Morning", "Colleagues"));  // near the query
    const Situation query = sit("Office", "Morning", "Alone");
    const auto weights = cb.weights.normalized();
    const double sim0 = situation_similarity(onts(), query, cb.cases[0].situation, weights);
    const double sim1 = situation_similarity(onts(), query, cb.cases[1].situation, weights);
    REQUIRE(sim1 > sim0);
    const auto r = retrieve_case(cb, onts(), query);
    REQUIRE(r.has_value());
    CHECK(r->index == 1);
    CHECK(r->similarity == sim1);
}

TEST_CASE("autoimprove merges on an exact concept-triple match") {
    CaseBase cb;
    const Situation s = sit("Home", "Saturday", "Family");
    const std::size_t idx = bootstrap_case(cb, s);
    cb.advance_trial();
    std::vector<DocId> slate{7};
    std::vector<FeedbackItem> click{{7, true, 2.0}};
    autoimprove(cb, s, idx, slate, click, 100);
    cb.advance_trial();
    autoimprove(cb, s, idx, slate, click, 100);
    cb.advance_trial();
    autoimprove(cb, s, idx, slate, click, 100);

    // Three clicks recorded; a fourth session's click updates in place.
    cb.advance_trial();
    std::vector<FeedbackItem> fourth{{7, true, 0.5}};
    const std::size_t target = autoimprove(cb, s, idx, slate, fourth, 100);
    CHECK(target == idx);
    CHECK(cb.cases.size() == 1);
    const DocumentStats& st = cb.cases[idx].stats.at(7);
    CHECK(st.clicks == 4);
    CHECK(st.recom == 4);
    CHECK(st.last_click == cb.trial_clock);
}

TEST_CASE("autoimprove appends a new case when the triple differs") {
    CaseBase cb;
    const std::size_t idx = bootstrap_case(cb, sit("Home", "Saturday", "Family"));
    cb.advance_trial();
    const Situation other = sit("Home", "Saturday", "Friends");  // similar, not equal
    std::vector<DocId> slate{3};
    std::vector<FeedbackItem> fb{{3, false, 0.0}};
    const std::size_t target = autoimprove(cb, other, idx, slate, fb, 100);
    CHECK(target == 1);
    CHECK(cb.cases.size() == 2);
    CHECK(cb.cases[0].stats.empty());  // original untouched
    CHECK(cb.cases[1].situation == other);
    CHECK(cb.cases[1].stats.at(3).fails == 1);
}

TEST_CASE("autoimprove with empty feedback leaves counts unchanged") {
    CaseBase cb;
    const Situation s = sit("Office", "Morning", "Alone");
    const std::size_t idx = bootstrap_case(cb, s);
    cb.advance_trial();
    autoimprove(cb, s, idx, {}, {}, 100);
    CHECK(cb.cases.size() == 1);
    CHECK(cb.cases[idx].stats.empty());
}

TEST_CASE("autoimprove rejects documents outside the candidate universe") {
    CaseBase cb;
    const Situation s = sit("Office", "Morning", "Alone");
    const std::size_t idx = bootstrap_case(cb, s);
    cb.advance_trial();
    std::vector<DocId> slate{42};
    std::vector<FeedbackItem> fb{{42, true, 1.0}};
    CHECK_THROWS_WITH_AS(autoimprove(cb, s, idx, slate, fb, 10),
                         doctest::Contains("unknown document 42"), std::invalid_argument);
}

TEST_CASE("persistence round-trips") {
    SUBCASE("empty base") {
        const CaseBase cb;
        const auto doc = casebase_to_json(cb, onts());
        CHECK(doc["cases"].empty());
        CHECK(casebase_from_json(doc, onts()) == cb);
    }
    SUBCASE("three cases with stats") {
        CaseBase cb;
        for (const Situation& s :
             {sit("Home", "Saturday", "Family"), sit("Office", "Morning", "Colleagues"),
              sit("Meeting_Room", "Morning", "Client")}) {
            cb.advance_trial();
            std::optional<std::size_t> matched;
            if (const auto r = retrieve_case(cb, onts(), s)) matched = r->index;
            std::vector<DocId> slate{1, 2};
            std::vector<FeedbackItem> fb{{1, true, 1.25}, {2, false, 0.0}};
            autoimprove(cb, s, matched, slate, fb, 100);
        }
        REQUIRE(cb.cases.size() == 3);
        const CaseBase back = casebase_from_json(casebase_to_json(cb, onts()), onts());
        CHECK(back == cb);
    }
}

TEST_CASE("load rejects tampered documents") {
    CaseBase cb;
    const Situation s = sit("Home", "Saturday", "Family");
    bootstrap_case(cb, s);
    cb.advance_trial();
    std::vector<DocId> slate{1};
    std::vector<FeedbackItem> fb{{1, true, 1.0}};
    autoimprove(cb, s, 0, slate, fb, 100);
    auto doc = casebase_to_json(cb, onts());

    SUBCASE("recom below clicks + fails") {
        doc["cases"][0]["stats"][0]["recom"] = 0;
        CHECK_THROWS_WITH_AS(casebase_from_json(doc, onts()), doctest::Contains("recom"),
                             std::runtime_error);
    }
    SUBCASE("last_click without clicks") {
        doc["cases"][0]["stats"][0]["clicks"] = 0;
        doc["cases"][0]["stats"][0]["fails"] = 1;
        CHECK_THROWS_WITH_AS(casebase_from_json(doc, onts()), doctest::Contains("last_click"),
                             std::runtime_error);
    }
    SUBCASE("duplicate concept triples") {
        doc["cases"].push_back(doc["cases"][0]);
        doc["cases"][1]["id"] = 1;
        CHECK_THROWS_WITH_AS(casebase_from_json(doc, onts()),
                             doctest::Contains("share one concept triple"), std::runtime_error);
    }
    SUBCASE("unsupported version") {
        doc["version"] = 2;
        CHECK_THROWS_AS(casebase_from_json(doc, onts()), std::runtime_error);
    }
}

TEST_CASE("property suite") {
    for (const auto& r : props::casebase_properties(300, 31)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
