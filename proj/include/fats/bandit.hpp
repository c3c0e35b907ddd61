#pragma once
// Per-(case, document) Beta-Bernoulli Thompson sampling with a
// forgetting-curve freshness penalty. Each candidate document is scored by
//
//     index = (1 - eps) * theta - eps * Mr
//
// where theta is a fresh draw from Beta(clicks + 1, fails + 1) and the
// memory retention Mr = exp(-t / rsm) uses rsm = click count and t =
// trials since the last click (a never-clicked document is maximally
// fresh, Mr = 0). The exploration weight eps is fixed per variant or, for
// the adaptive variant, derived from the situation risk. Slates are the n
// largest indices, ties broken by document id.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fats/casebase.hpp"
#include "fats/ontology.hpp"
#include "fats/rng.hpp"
#include "fats/situation.hpp"

namespace fats {

enum class Policy : std::uint8_t {
    TS,      // situation-blind Thompson sampling on one global pseudo-case
    FATS0,   // risk fixed to 0: eps = 1, freshness only
    FATS05,  // risk fixed to 0.5: eps = 0.5
    FATS1,   // risk fixed to 1: eps = 0, per-situation Thompson sampling
    FATS,    // adaptive eps from the computed situation risk
};

const char* to_string(Policy p);
std::optional<Policy> policy_from_string(std::string_view token);

struct Variant {
    Policy policy = Policy::FATS;
    ExplorationBounds bounds{};  // used by the adaptive variant only
};

struct ScoredDocument {
    DocId doc = 0;
    double sample = 0.0;     // Thompson draw
    double retention = 0.0;  // Mr
    double index = 0.0;      // (1-eps)*sample - eps*retention
};

// Inputs for the adaptive variant's risk computation.
struct RiskContext {
    const OntologySet* onts = nullptr;
    std::span<const Situation> critical;
    std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    RiskWeights lambda{};
};

struct Selection {
    std::vector<ScoredDocument> slate;  // n entries, descending index
    double epsilon = 0.0;
    double risk = 0.0;  // the variant's fixed risk label, or the computed one
};

double thompson_sample(const DocumentStats& stats, RandomSource& rng);

// Forgetting curve; requires now >= last_click when the document has been
// clicked.
double memory_retention(const DocumentStats& stats, Trial now);

double composite_index(double sample, double retention, double epsilon);

ScoredDocument score_document(DocId doc, const DocumentStats& stats, Trial now, double epsilon,
                              RandomSource& rng);

// Stable ordering: descending index, ties by ascending document id.
void order_by_index(std::vector<ScoredDocument>& docs);

// Scores every candidate against the case posteriors and returns the top
// n. For Policy::FATS a RiskContext must be supplied; the other variants
// use their fixed eps. Throws when candidates are fewer than n.
Selection select_documents(const Case& c, const Situation& s, std::span<const DocId> candidates,
                           std::size_t n, const Variant& variant, const RiskContext* risk_ctx,
                           Trial now, RandomSource& rng);

// Applies one session's outcomes to the case: recom + 1 per document;
// clicked -> clicks + 1, time accumulated, last_click = now; otherwise
// fails + 1. Outcomes must cover exactly the slate.
void record_feedback(Case& c, std::span<const DocId> slate,
                     std::span<const FeedbackItem> outcomes, Trial now);

}  // namespace fats
