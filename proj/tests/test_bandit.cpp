#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "fats/bandit.hpp"
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

DocumentStats stats(std::uint32_t clicks, std::uint32_t fails,
                    std::optional<Trial> last = std::nullopt) {
    DocumentStats st;
    st.clicks = clicks;
    st.fails = fails;
    st.recom = clicks + fails;
    st.last_click = last;
    return st;
}

}  // namespace

TEST_CASE("thompson sample: prior and posterior draws") {
    RandomSource rng(42);
    SUBCASE("fresh document draws from Beta(1,1)") {
        for (int i = 0; i < 100; ++i) {
            const double draw = thompson_sample(DocumentStats{}, rng);
            CHECK(draw >= 0.0);
            CHECK(draw <= 1.0);
        }
    }
    SUBCASE("posterior mean: clicks=3, fails=1 draws near 4/6") {
        double total = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) total += thompson_sample(stats(3, 1, 1), rng);
        CHECK(total / n == doctest::Approx(4.0 / 6.0).epsilon(0.015));
    }
    SUBCASE("fixed seed replays the identical draw") {
        RandomSource a(7), b(7);
        CHECK(thompson_sample(stats(3, 1, 1), a) == thompson_sample(stats(3, 1, 1), b));
    }
}

TEST_CASE("memory retention follows the forgetting curve") {
    CHECK(memory_retention(stats(1, 0, 5), 5) == 1.0);  // clicked this trial
    CHECK(memory_retention(stats(10, 0, 10), 20) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(memory_retention(DocumentStats{}, 100) == 0.0);  // never clicked: fresh
    CHECK_THROWS_AS(memory_retention(stats(1, 0, 9), 5), std::invalid_argument);
}

TEST_CASE("composite index mixes sample and retention") {
    RandomSource rng(3);
    SUBCASE("exploitation only") {
        const auto sd = score_document(1, stats(50, 1, 9), 10, 0.0, rng);
        CHECK(sd.index == sd.sample);
    }
    SUBCASE("freshness only") {
        const auto sd = score_document(1, stats(10, 0, 0), 10, 1.0, rng);
        CHECK(sd.index == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
        CHECK(sd.index == -sd.retention);
    }
    SUBCASE("hand-evaluated midpoint") {
        CHECK(composite_index(0.8, 0.4, 0.5) == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("epsilon outside [0,1] is rejected") {
        CHECK_THROWS_AS(score_document(1, stats(0, 0), 1, 1.5, rng), std::invalid_argument);
    }
}

TEST_CASE("selection orders by index and honors the slate size") {
    Case c{0, make_situation(onts(), "Home", "Saturday", "Family"), {}};
    RandomSource rng(11);
    const Variant pure{Policy::FATS1, ExplorationBounds{}};

    SUBCASE("argmax of two with extreme posteriors") {
        c.stats[0] = stats(400, 1, 9);  // samples concentrate near 1
        c.stats[1] = stats(1, 400, 9);  // ... and near 0
        const std::vector<DocId> candidates{0, 1};
        const auto sel = select_documents(c, c.situation, candidates, 1, pure, nullptr, 10, rng);
        CHECK(sel.slate.size() == 1);
        CHECK(sel.slate[0].doc == 0);
        CHECK(sel.epsilon == 0.0);
    }
    SUBCASE("n equal to the candidate count returns everything sorted") {
        std::vector<DocId> candidates(6);
        std::iota(candidates.begin(), candidates.end(), 0);
        const auto sel = select_documents(c, c.situation, candidates, 6, pure, nullptr, 10, rng);
        CHECK(sel.slate.size() == 6);
        for (std::size_t i = 1; i < sel.slate.size(); ++i)
            CHECK(sel.slate[i - 1].index >= sel.slate[i].index);
    }
    SUBCASE("freshness-only ranking puts the never-clicked document first") {
        c.stats[0] = stats(5, 0, 10);  // clicked recently: high retention
        const std::vector<DocId> candidates{0, 1};
        const Variant fresh{Policy::FATS0, ExplorationBounds{}};
        const auto sel =
            select_documents(c, c.situation, candidates, 2, fresh, nullptr, 11, rng);
        CHECK(sel.slate[0].doc == 1);
        CHECK(sel.epsilon == 1.0);
    }
    SUBCASE("fewer candidates than the slate is an error") {
        const std::vector<DocId> candidates{0};
        CHECK_THROWS_AS(
            select_documents(c, c.situation, candidates, 2, pure, nullptr, 10, rng),
            std::invalid_argument);
    }
    SUBCASE("adaptive variant requires a risk context") {
        const std::vector<DocId> candidates{0, 1};
        const Variant adaptive{Policy::FATS, ExplorationBounds{}};
        CHECK_THROWS_AS(
            select_documents(c, c.situation, candidates, 1, adaptive, nullptr, 10, rng),
            std::invalid_argument);
    }
}

TEST_CASE("adaptive variant derives epsilon from the situation risk") {
    RandomSource rng(5);
    const Situation meeting = make_situation(onts(), "Meeting_Room", "Morning", "Client");
    const Situation home = make_situation(onts(), "Home", "Saturday", "Family");
    Case meeting_case{0, meeting, {}};
    Case home_case{1, home, {}};
    const std::vector<Situation> critical{meeting};
    const RiskContext ctx{&onts(), critical, {1.0 / 3, 1.0 / 3, 1.0 / 3}, RiskWeights{}};
    const Variant adaptive{Policy::FATS, ExplorationBounds{0.05, 0.5}};
    const std::vector<DocId> candidates{0, 1, 2};

    const auto in_meeting =
        select_documents(meeting_case, meeting, candidates, 1, adaptive, &ctx, 1, rng);
    const auto at_home =
        select_documents(home_case, home, candidates, 1, adaptive, &ctx, 1, rng);
    CHECK(in_meeting.risk > at_home.risk);
    CHECK(in_meeting.epsilon < at_home.epsilon);
    CHECK(in_meeting.epsilon == exploration_rate(in_meeting.risk, adaptive.bounds));
    // Membership in the critical set pins the semantic component to 1.
    CHECK(in_meeting.risk >= 1.0 / 3 - 1e-12);
}

TEST_CASE("fixed variants carry their definitional epsilon") {
    RandomSource rng(9);
    Case c{0, make_situation(onts(), "Home", "Saturday", "Family"), {}};
    const std::vector<DocId> candidates{0, 1};
    const auto eps_of = [&](Policy p) {
        return select_documents(c, c.situation, candidates, 1,
                                Variant{p, ExplorationBounds{}}, nullptr, 1, rng)
            .epsilon;
    };
    CHECK(eps_of(Policy::TS) == 0.0);
    CHECK(eps_of(Policy::FATS1) == 0.0);
    CHECK(eps_of(Policy::FATS05) == 0.5);
    CHECK(eps_of(Policy::FATS0) == 1.0);
}

TEST_CASE("record_feedback applies one session of outcomes") {
    Case c{0, make_situation(onts(), "Home", "Saturday", "Family"), {}};
    SUBCASE("single click") {
        const std::vector<DocId> slate{4};
        const std::vector<FeedbackItem> fb{{4, true, 2.5}};
        record_feedback(c, slate, fb, 7);
        DocumentStats expected = stats(1, 0, 7);
        expected.time_spent = 2.5;
        CHECK(c.stats.at(4) == expected);
    }
    SUBCASE("recommended and not clicked counts as a fail") {
        const std::vector<DocId> slate{4};
        const std::vector<FeedbackItem> fb{{4, false, 0.0}};
        record_feedback(c, slate, fb, 7);
        CHECK(c.stats.at(4) == stats(0, 1));
    }
    SUBCASE("two sessions: click then no click") {
        const std::vector<DocId> slate{4};
        record_feedback(c, slate, std::vector<FeedbackItem>{{4, true, 1.0}}, 7);
        record_feedback(c, slate, std::vector<FeedbackItem>{{4, false, 0.0}}, 8);
        const DocumentStats& st = c.stats.at(4);
        CHECK(st.clicks == 1);
        CHECK(st.fails == 1);
        CHECK(st.recom == 2);
        CHECK(st.last_click == Trial{7});
    }
    SUBCASE("outcomes must cover exactly the slate") {
        const std::vector<DocId> slate{4, 5};
        CHECK_THROWS_AS(
            record_feedback(c, slate, std::vector<FeedbackItem>{{4, true, 1.0}}, 7),
            std::invalid_argument);
        CHECK_THROWS_AS(record_feedback(
                            c, slate,
                            std::vector<FeedbackItem>{{4, true, 1.0}, {9, false, 0.0}}, 7),
                        std::invalid_argument);
    }
}

TEST_CASE("variant tokens round-trip") {
    for (Policy p : {Policy::TS, Policy::FATS0, Policy::FATS05, Policy::FATS1, Policy::FATS})
        CHECK(policy_from_string(to_string(p)) == p);
    CHECK(!policy_from_string("linucb").has_value());
}

TEST_CASE("property suite") {
    for (const auto& r : props::bandit_properties(60, 47)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
