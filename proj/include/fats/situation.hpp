#pragma once
// Situation vectors and the risk machinery around them.
//
// A situation is one concept per dimension. Inter-situation similarity is
// the weighted sum of per-dimension concept similarities,
//
//     sim(s1, s2) = sum_d alpha_d * sim_d(c1_d, c2_d)
//
// with adaptive weights alpha_d: the arithmetic mean of the per-dimension
// similarity values observed at past retrievals, rescaled to sum to 1.
// The situation risk R in [0,1] aggregates three signals,
//
//     R = lambda_c * R_c + lambda_m * R_m + lambda_v * R_v
//
// (concept annotations, proximity to declared critical situations, reward
// variance of the matched case), and maps to an exploration rate
//
//     epsilon = eps_max - R * (eps_max - eps_min).

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "fats/ontology.hpp"

namespace fats {

struct Situation {
    std::array<ConceptId, 3> concepts{};  // indexed by Dimension order

    ConceptId of(Dimension d) const { return concepts[static_cast<std::size_t>(d)]; }
    bool operator==(const Situation&) const = default;
};

// Validates each concept name against the matching ontology.
Situation make_situation(const OntologySet& onts, const std::string& location,
                         const std::string& time, const std::string& social);

std::array<std::string, 3> situation_names(const OntologySet& onts, const Situation& s);

// Adaptive per-dimension weights: running sums of the per-dimension
// similarity values recorded at each retrieval. Raw weights are the
// arithmetic means; exposed weights are the means rescaled to sum to 1.
// With no history both are uniform.
class DimensionWeights {
public:
    DimensionWeights() = default;
    static DimensionWeights restore(std::uint64_t history_count,
                                    const std::array<double, 3>& sums);

    // Record the latest retrieval's per-dimension similarities. Values are
    // clamped to [0,1]; a clamp is reported on stderr.
    void record(std::array<double, 3> y);

    std::uint64_t history_count() const { return count_; }
    const std::array<double, 3>& sums() const { return sums_; }
    std::array<double, 3> raw_means() const;
    std::array<double, 3> normalized() const;

    bool operator==(const DimensionWeights&) const = default;

private:
    std::uint64_t count_ = 0;
    std::array<double, 3> sums_{0.0, 0.0, 0.0};
};

struct RiskWeights {
    double concepts = 1.0 / 3.0;   // lambda_c
    double semantic = 1.0 / 3.0;   // lambda_m
    double variance = 1.0 / 3.0;   // lambda_v

    // Validates each weight in [0,1] and the sum close to 1, then rescales
    // so the sum is exactly 1.
    static RiskWeights make(double c, double m, double v);
};

struct ExplorationBounds {
    double epsilon_min = 0.05;
    double epsilon_max = 0.5;

    static ExplorationBounds make(double lo, double hi);  // checks 0 <= lo <= hi <= 1
};

std::array<double, 3> per_dimension_similarity(const OntologySet& onts, const Situation& a,
                                               const Situation& b);

double situation_similarity(const OntologySet& onts, const Situation& a, const Situation& b,
                            const std::array<double, 3>& weights);

// Mean effective cv of the three concepts.
double risk_concepts(const OntologySet& onts, const Situation& s);

// Max similarity to any declared critical situation; 0 for an empty set.
double risk_semantic(const OntologySet& onts, const Situation& s,
                     std::span<const Situation> critical,
                     const std::array<double, 3>& weights);

// 1 - min(1, 4 * sample variance) of the pooled Bernoulli rewards
// (clicks = 1, fails = 0); 0.5 when fewer than two rewards are recorded.
double risk_variance(std::uint64_t clicks, std::uint64_t fails);

double situation_risk(double r_concepts, double r_semantic, double r_variance,
                      const RiskWeights& lambda);

// Affine decreasing map: risk 0 -> eps_max, risk 1 -> eps_min.
// Rejects risk outside [0,1]; never clamps silently.
double exploration_rate(double risk, const ExplorationBounds& bounds);

}  // namespace fats
