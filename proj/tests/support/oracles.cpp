#include "support/oracles.hpp"

#include <algorithm>
#include <string>

namespace fats::oracle {

std::vector<ConceptId> ancestor_set(const Ontology& o, ConceptId c) {
    std::vector<ConceptId> chain{c};
    while (o.concept_at(chain.back()).parent)
        chain.push_back(*o.concept_at(chain.back()).parent);
    return chain;
}

int depth(const Ontology& o, ConceptId c) {
    return static_cast<int>(ancestor_set(o, c).size());
}

ConceptId lcs(const Ontology& o, ConceptId a, ConceptId b) {
    const auto aa = ancestor_set(o, a);
    const auto bb = ancestor_set(o, b);
    ConceptId best = aa.back();  // the root, always shared
    int best_depth = 0;
    for (ConceptId x : aa) {
        if (std::find(bb.begin(), bb.end(), x) == bb.end()) continue;
        const int d = depth(o, x);
        if (d > best_depth) {
            best_depth = d;
            best = x;
        }
    }
    return best;
}

double concept_similarity(const Ontology& o, ConceptId a, ConceptId b) {
    return 2.0 * depth(o, lcs(o, a, b)) / (depth(o, a) + depth(o, b));
}

Ontology random_tree(Dimension dim, std::size_t node_count, RandomSource& rng) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < node_count; ++i) {
        nlohmann::json node{{"name", "n" + std::to_string(i)}};
        if (i > 0) node["parent"] = "n" + std::to_string(rng.uniform_index(i));
        if (rng.bernoulli(0.5)) node["cv"] = rng.uniform01();
        nodes.push_back(std::move(node));
    }
    return Ontology::from_json({{"dimension", to_string(dim)}, {"nodes", std::move(nodes)}});
}

double sample_variance(const std::vector<int>& rewards) {
    const std::size_t n = rewards.size();
    double mean = 0.0;
    for (int r : rewards) mean += r;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (int r : rewards) ss += (r - mean) * (r - mean);
    return ss / static_cast<double>(n - 1);
}

std::map<DocId, Recount> recount(const std::vector<FeedbackEvent>& events) {
    std::map<DocId, Recount> counts;
    for (const FeedbackEvent& e : events) {
        if (e.clicked)
            counts[e.doc].clicks += 1;
        else
            counts[e.doc].fails += 1;
    }
    return counts;
}

}  // namespace fats::oracle
