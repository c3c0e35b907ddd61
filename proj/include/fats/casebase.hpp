#pragma once
// The user model: a case base of (situation, per-document preference
// statistics) pairs. Retrieval returns the case maximizing the weighted
// situation similarity (ties to the lowest case id) and feeds the observed
// per-dimension similarities back into the adaptive dimension weights.
// Autoimprovement merges feedback into an exactly-matching case or appends
// a new one, so no two cases ever share a concept triple.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fats/ontology.hpp"
#include "fats/situation.hpp"
#include "json.hpp"

namespace fats {

using DocId = std::uint32_t;
using Trial = std::uint64_t;

struct DocumentStats {
    std::uint32_t clicks = 0;          // successes
    std::uint32_t fails = 0;           // recommended and not clicked
    std::uint32_t recom = 0;           // always clicks + fails
    double time_spent = 0.0;
    std::optional<Trial> last_click;   // present iff clicks > 0

    bool operator==(const DocumentStats&) const = default;
};

struct FeedbackItem {
    DocId doc = 0;
    bool clicked = false;
    double time_spent = 0.0;
};

struct Case {
    std::uint64_t id = 0;
    Situation situation;
    std::map<DocId, DocumentStats> stats;

    bool operator==(const Case&) const = default;
};

struct CaseBase {
    std::vector<Case> cases;
    DimensionWeights weights;
    Trial trial_clock = 0;  // one tick per recommendation session

    Trial advance_trial() { return ++trial_clock; }
    bool operator==(const CaseBase&) const = default;
};

struct RetrievalResult {
    std::size_t index = 0;            // position in cases (== case id)
    double similarity = 0.0;
    std::array<double, 3> per_dimension{};
};

// Most-similar case under the current normalized weights; nullopt on an
// empty base so the caller can bootstrap. On success the winner's
// per-dimension similarities are recorded into the weights.
std::optional<RetrievalResult> retrieve_case(CaseBase& cb, const OntologySet& onts,
                                             const Situation& s);

// Appends an empty-stats case for s (first-trial bootstrap). Returns the
// index of the new case, or of an existing case with the same triple.
std::size_t bootstrap_case(CaseBase& cb, const Situation& s);

// Merges the session feedback into the matched case when its concept
// triple equals s exactly; otherwise appends a new case built from the
// feedback alone. Feedback doc ids must lie inside the candidate universe
// [0, num_documents). Returns the index of the case that absorbed the
// feedback.
std::size_t autoimprove(CaseBase& cb, const Situation& s,
                        std::optional<std::size_t> matched,
                        std::span<const DocId> slate,
                        std::span<const FeedbackItem> outcomes, DocId num_documents);

// Total (clicks, fails) pooled over every document of the case.
std::pair<std::uint64_t, std::uint64_t> pooled_rewards(const Case& c);

// Lossless persistence (schema version 1). Loading re-validates every
// invariant: recom = clicks + fails, last_click presence, concept-triple
// uniqueness, weight history consistency.
nlohmann::json casebase_to_json(const CaseBase& cb, const OntologySet& onts);
CaseBase casebase_from_json(const nlohmann::json& doc, const OntologySet& onts);
void save_casebase_file(const CaseBase& cb, const OntologySet& onts, const std::string& path);
CaseBase load_casebase_file(const std::string& path, const OntologySet& onts);

}  // namespace fats
