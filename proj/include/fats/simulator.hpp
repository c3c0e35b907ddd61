#pragma once
// Synthetic evaluation environment: boredom-sensitive users, a situation
// stream with declared critical situations, multi-day session loops over
// independent algorithm arms, and per-day AP / ATSD metrics.
//
// A user clicks a recommended document with probability
//
//     p = base_affinity * (gamma + (1 - gamma) * (1 - Mr_user))
//
// where Mr_user is the forgetting-curve retention computed from the
// user's own click history, so repetition breeds boredom and absence
// restores appeal. In a critical situation only documents whose base
// affinity clears the strictness threshold can be clicked at all.
// Everything is driven by named RNG streams derived from the plan seed:
// identical plans replay byte-identically and arms never share a stream.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fats/bandit.hpp"
#include "fats/casebase.hpp"
#include "fats/ontology.hpp"
#include "fats/rng.hpp"
#include "fats/situation.hpp"

namespace fats {

// Affinity generation: a document is "hot" for a situation with
// probability hot_fraction, drawing its base affinity from the hot range,
// otherwise from the cold range. Non-critical situations share one master
// hot set (the user's general taste): each doc keeps its shared hot flag
// with probability affinity_correlation, otherwise re-rolls. Critical
// situations always draw independent hot sets, so the documents that work
// in a meeting are not the ones that work at home.
struct ModelParams {
    double hot_fraction = 0.08;
    double hot_min = 0.7, hot_max = 0.95;
    double cold_min = 0.15, cold_max = 0.45;
    double affinity_correlation = 0.9;
    double boredom_floor = 0.0;         // gamma
    double critical_strictness = 0.6;   // minimum affinity that clicks in critical situations
    double time_spent_mean = 1.37;
};

struct GroundTruthModel {
    std::vector<std::vector<double>> base_affinity;  // [situation pool index][doc]
    std::vector<char> critical;                      // per pool index
    double boredom_floor = 0.25;
    double critical_strictness = 0.55;
    double time_spent_mean = 1.37;
};

GroundTruthModel make_ground_truth(std::size_t pool_size, DocId num_documents,
                                   const std::vector<char>& critical_flags,
                                   const ModelParams& params, RandomSource& rng);

struct UserDocHistory {
    std::uint32_t clicks = 0;
    Trial last_click = 0;
};

struct SyntheticUser {
    std::uint32_t id = 0;
    std::unordered_map<DocId, UserDocHistory> history;
};

// Forgetting curve over the user's own history; 0 for a never-clicked doc.
double true_retention(const SyntheticUser& user, DocId doc, Trial now);

double click_probability(const GroundTruthModel& model, std::size_t situation_index, DocId doc,
                         double retention);

struct ArmSpec {
    Variant variant;
    std::string label;                  // CSV arm column
    std::optional<std::uint64_t> seed;  // overrides the derived per-arm seed
};

struct ExperimentPlan {
    std::vector<ArmSpec> arms;
    std::uint32_t users_per_arm = 50;
    std::uint32_t sessions_per_day = 2;
    std::uint32_t days = 28;
    std::size_t slate_size = 10;
    DocId num_documents = 100;
    std::uint64_t seed = 1;
};

// Algorithm-side context shared by all arms.
struct SimulationSetup {
    std::vector<Situation> pool;      // session situations, drawn uniformly
    std::vector<Situation> critical;  // declared critical situations
    ExplorationBounds bounds{};
    RiskWeights lambda{};
    ModelParams model{};
};

struct SessionRecord {
    std::string arm;
    std::uint32_t day = 0;
    std::uint32_t user = 0;
    Trial trial = 0;
    std::size_t situation_index = 0;
    double epsilon = 0.0;
    double risk = 0.0;
    std::vector<DocId> slate;
    std::vector<char> clicked;
    std::vector<double> time_spent;

    std::size_t click_count() const;
};

struct MetricsRow {
    std::string arm;
    std::uint32_t day = 0;
    double avg_precision = 0.0;
    double avg_time_spent = 0.0;
};

struct ArmState {
    Variant variant;
    CaseBase casebase;
};

// One Algorithm-1 iteration against the synthetic user: retrieve-or-
// bootstrap, select a slate, sample clicks and dwell times, update both
// the user's memory and the arm's case base.
SessionRecord simulate_session(ArmState& arm, SyntheticUser& user, std::size_t situation_index,
                               const SimulationSetup& setup, const GroundTruthModel& model,
                               const OntologySet& onts, std::span<const DocId> candidates,
                               std::size_t slate_size, RandomSource& policy_rng,
                               RandomSource& env_rng);

struct ExperimentResult {
    std::vector<MetricsRow> metrics;            // arms x days rows, plan order
    std::vector<SessionRecord> log;             // empty when keep_log is false
    std::vector<CaseBase> first_user_casebases; // one per arm
};

ExperimentResult run_experiment(const ExperimentPlan& plan, const SimulationSetup& setup,
                                const OntologySet& onts, bool keep_log = true);

// Mean over sessions of (clicks in slate) / slate size. Errors on empty.
double average_precision(std::span<const SessionRecord> sessions);

// Total time on clicked documents / number of clicked documents; 0 when
// nothing was clicked.
double average_time_spent(std::span<const SessionRecord> sessions);

// Header arm,day,avg_precision,avg_time_spent; fixed 6-decimal values.
std::string metrics_to_csv(std::span<const MetricsRow> rows);

std::string session_log_to_jsonl(std::span<const SessionRecord> log, const OntologySet& onts,
                                 const SimulationSetup& setup);

}  // namespace fats
