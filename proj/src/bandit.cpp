#include "fats/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace fats {

const char* to_string(Policy p) {
    switch (p) {
        case Policy::TS: return "ts";
        case Policy::FATS0: return "fats0";
        case Policy::FATS05: return "fats05";
        case Policy::FATS1: return "fats1";
        default: return "fats";
    }
}

std::optional<Policy> policy_from_string(std::string_view token) {
    for (Policy p : {Policy::TS, Policy::FATS0, Policy::FATS05, Policy::FATS1, Policy::FATS})
        if (token == to_string(p)) return p;
    return std::nullopt;
}

double thompson_sample(const DocumentStats& stats, RandomSource& rng) {
    return sample_beta(stats.clicks + 1.0, stats.fails + 1.0, rng);
}

double memory_retention(const DocumentStats& stats, Trial now) {
    if (stats.clicks == 0) return 0.0;  // never clicked: maximally fresh
    const Trial last = stats.last_click.value();
    if (now < last)
        throw std::invalid_argument("memory_retention: now " + std::to_string(now) +
                                    " precedes last click " + std::to_string(last));
    const double t = static_cast<double>(now - last);
    return std::exp(-t / static_cast<double>(stats.clicks));
}

double composite_index(double sample, double retention, double epsilon) {
    return (1.0 - epsilon) * sample - epsilon * retention;
}

ScoredDocument score_document(DocId doc, const DocumentStats& stats, Trial now, double epsilon,
                              RandomSource& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("score_document: epsilon " + std::to_string(epsilon) +
                                    " outside [0,1]");
    const double sample = thompson_sample(stats, rng);
    const double retention = memory_retention(stats, now);
    return ScoredDocument{doc, sample, retention, composite_index(sample, retention, epsilon)};
}

void order_by_index(std::vector<ScoredDocument>& docs) {
    std::sort(docs.begin(), docs.end(), [](const ScoredDocument& a, const ScoredDocument& b) {
        if (a.index != b.index) return a.index > b.index;
        return a.doc < b.doc;
    });
}

namespace {

// The fixed-risk variants carry the eps (and nominal risk) the arm
// definition assigns them; only the adaptive variant computes anything.
struct VariantEps {
    double epsilon;
    double risk;
};

VariantEps variant_epsilon(const Variant& variant, const Case& c, const Situation& s,
                           const RiskContext* ctx) {
    switch (variant.policy) {
        case Policy::TS: return {0.0, 1.0};
        case Policy::FATS1: return {0.0, 1.0};
        case Policy::FATS05: return {0.5, 0.5};
        case Policy::FATS0: return {1.0, 0.0};
        default: break;
    }
    if (!ctx || !ctx->onts)
        throw std::invalid_argument("select_documents: adaptive variant needs a risk context");
    const auto [clicks, fails] = pooled_rewards(c);
    const double rc = risk_concepts(*ctx->onts, s);
    const double rm = risk_semantic(*ctx->onts, s, ctx->critical, ctx->weights);
    const double rv = risk_variance(clicks, fails);
    const double risk = situation_risk(rc, rm, rv, ctx->lambda);
    return {exploration_rate(risk, variant.bounds), risk};
}

}  // namespace

Selection select_documents(const Case& c, const Situation& s, std::span<const DocId> candidates,
                           std::size_t n, const Variant& variant, const RiskContext* risk_ctx,
                           Trial now, RandomSource& rng) {
    if (n < 1)
        throw std::invalid_argument("select_documents: slate size must be positive");
    if (candidates.size() < n)
        throw std::invalid_argument("select_documents: " + std::to_string(candidates.size()) +
                                    " candidates for a slate of " + std::to_string(n));
    const VariantEps eps = variant_epsilon(variant, c, s, risk_ctx);

    static const DocumentStats kUnseen{};
    std::vector<ScoredDocument> scored;
    scored.reserve(candidates.size());
    for (DocId d : candidates) {
        const auto it = c.stats.find(d);
        const DocumentStats& stats = it == c.stats.end() ? kUnseen : it->second;
        scored.push_back(score_document(d, stats, now, eps.epsilon, rng));
    }
    order_by_index(scored);
    scored.resize(n);
    return Selection{std::move(scored), eps.epsilon, eps.risk};
}

void record_feedback(Case& c, std::span<const DocId> slate,
                     std::span<const FeedbackItem> outcomes, Trial now) {
    if (outcomes.size() != slate.size())
        throw std::invalid_argument("record_feedback: " + std::to_string(outcomes.size()) +
                                    " outcomes for a slate of " + std::to_string(slate.size()));
    std::unordered_set<DocId> pending(slate.begin(), slate.end());
    for (const FeedbackItem& item : outcomes) {
        if (!pending.erase(item.doc))
            throw std::invalid_argument("record_feedback: outcome for document " +
                                        std::to_string(item.doc) + " not in the slate");
    }
    for (const FeedbackItem& item : outcomes) {
        DocumentStats& st = c.stats[item.doc];
        st.recom += 1;
        if (item.clicked) {
            st.clicks += 1;
            st.time_spent += item.time_spent;
            st.last_click = now;
        } else {
            st.fails += 1;
        }
    }
}

}  // namespace fats
