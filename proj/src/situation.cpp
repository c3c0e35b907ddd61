#include "fats/situation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace fats {

Situation make_situation(const OntologySet& onts, const std::string& location,
                         const std::string& time, const std::string& social) {
    return Situation{{onts.location.require(location), onts.time.require(time),
                      onts.social.require(social)}};
}

std::array<std::string, 3> situation_names(const OntologySet& onts, const Situation& s) {
    std::array<std::string, 3> names;
    for (std::size_t i = 0; i < 3; ++i)
        names[i] = onts.of(kDimensions[i]).concept_at(s.concepts[i]).name;
    return names;
}

DimensionWeights DimensionWeights::restore(std::uint64_t history_count,
                                           const std::array<double, 3>& sums) {
    for (double v : sums) {
        if (!std::isfinite(v) || v < 0.0 || v > static_cast<double>(history_count) + 1e-9)
            throw std::runtime_error("dimension weights: sum " + std::to_string(v) +
                                     " inconsistent with history count " +
                                     std::to_string(history_count));
    }
    DimensionWeights w;
    w.count_ = history_count;
    w.sums_ = sums;
    return w;
}

void DimensionWeights::record(std::array<double, 3> y) {
    for (std::size_t i = 0; i < 3; ++i) {
        const double clamped = std::clamp(y[i], 0.0, 1.0);
        if (clamped != y[i] || std::isnan(y[i])) {
            std::cerr << "fats: dimension weight sample " << y[i] << " for "
                      << to_string(kDimensions[i]) << " clamped to [0,1]\n";
            y[i] = std::isnan(y[i]) ? 0.0 : clamped;
        }
        sums_[i] += y[i];
    }
    ++count_;
}

std::array<double, 3> DimensionWeights::raw_means() const {
    if (count_ == 0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return {sums_[0] / count_, sums_[1] / count_, sums_[2] / count_};
}

std::array<double, 3> DimensionWeights::normalized() const {
    const auto raw = raw_means();
    const double total = raw[0] + raw[1] + raw[2];
    if (total <= 0.0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return {raw[0] / total, raw[1] / total, raw[2] / total};
}

RiskWeights RiskWeights::make(double c, double m, double v) {
    for (double x : {c, m, v}) {
        if (!std::isfinite(x) || x < 0.0 || x > 1.0)
            throw std::runtime_error("risk weights: value " + std::to_string(x) +
                                     " outside [0,1]");
    }
    const double sum = c + m + v;
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::runtime_error("risk weights: sum " + std::to_string(sum) + " != 1");
    return RiskWeights{c / sum, m / sum, v / sum};
}

ExplorationBounds ExplorationBounds::make(double lo, double hi) {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
        throw std::runtime_error("exploration bounds: need 0 <= " + std::to_string(lo) +
                                 " <= " + std::to_string(hi) + " <= 1");
    return ExplorationBounds{lo, hi};
}

std::array<double, 3> per_dimension_similarity(const OntologySet& onts, const Situation& a,
                                               const Situation& b) {
    std::array<double, 3> sims;
    for (std::size_t i = 0; i < 3; ++i) {
        const Ontology& o = onts.of(kDimensions[i]);
        sims[i] = o.similarity(a.concepts[i], b.concepts[i]);
    }
    return sims;
}

double situation_similarity(const OntologySet& onts, const Situation& a, const Situation& b,
                            const std::array<double, 3>& weights) {
    const auto sims = per_dimension_similarity(onts, a, b);
    return weights[0] * sims[0] + weights[1] * sims[1] + weights[2] * sims[2];
}

double risk_concepts(const OntologySet& onts, const Situation& s) {
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        total += onts.of(kDimensions[i]).effective_cv(s.concepts[i]);
    return total / 3.0;
}

double risk_semantic(const OntologySet& onts, const Situation& s,
                     std::span<const Situation> critical,
                     const std::array<double, 3>& weights) {
    double best = 0.0;
    for (const Situation& cs : critical)
        best = std::max(best, situation_similarity(onts, s, cs, weights));
    return best;
}

double risk_variance(std::uint64_t clicks, std::uint64_t fails) {
    const std::uint64_t n = clicks + fails;
    if (n < 2) return 0.5;
    const double p = static_cast<double>(clicks) / static_cast<double>(n);
    // Sample variance of a pooled 0/1 multiset: n*p*(1-p)/(n-1).
    const double variance = static_cast<double>(n) * p * (1.0 - p) / static_cast<double>(n - 1);
    return 1.0 - std::min(1.0, 4.0 * variance);
}

double situation_risk(double r_concepts, double r_semantic, double r_variance,
                      const RiskWeights& lambda) {
    return lambda.concepts * r_concepts + lambda.semantic * r_semantic +
           lambda.variance * r_variance;
}

double exploration_rate(double risk, const ExplorationBounds& bounds) {
    if (!(risk >= 0.0 && risk <= 1.0))
        throw std::invalid_argument("exploration_rate: risk " + std::to_string(risk) +
                                    " outside [0,1]");
    // eps_max - risk * (eps_max - eps_min), written in the convex form so
    // the endpoints come out exact and rounding cannot leave the range.
    return bounds.epsilon_max * (1.0 - risk) + bounds.epsilon_min * risk;
}

}  // namespace fats
