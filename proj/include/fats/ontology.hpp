#pragma once
// Rooted concept trees for the three context dimensions (Location, Time,
// Social). Each tree supports node-counted depth (root = 1), least common
// subsumer, and the depth-ratio concept similarity
//
//     sim(a, b) = 2 * depth(lcs(a, b)) / (depth(a) + depth(b))
//
// which is symmetric, lies in (0, 1], and equals 1 exactly for a == b.
// Concepts carry an optional risk annotation cv in [0, 1]; a concept
// without one inherits the nearest annotated ancestor's value (root
// defaults to 0). Ontologies are immutable after load.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace fats {

using ConceptId = std::uint32_t;

enum class Dimension : std::uint8_t { Location = 0, Time = 1, Social = 2 };

inline constexpr std::array<Dimension, 3> kDimensions = {
    Dimension::Location, Dimension::Time, Dimension::Social};

const char* to_string(Dimension d);
std::optional<Dimension> dimension_from_string(std::string_view name);

struct Concept {
    std::string name;
    std::optional<ConceptId> parent;  // absent for the root
    std::optional<double> cv;         // risk annotation in [0,1]
};

class Ontology {
public:
    Ontology() = default;  // empty placeholder; every concept access throws

    // Builds and validates a tree from the documented JSON shape:
    //   {"dimension": "Location|Time|Social",
    //    "nodes": [{"name": ..., "parent": ..., "cv": ...}, ...]}
    // Rejects duplicate names, unknown parents, multiple/missing roots,
    // cycles and out-of-range cv, naming the offending node.
    static Ontology from_json(const nlohmann::json& doc);
    static Ontology load_file(const std::string& path);

    Dimension dimension() const { return dimension_; }
    ConceptId root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }

    const Concept& concept_at(ConceptId id) const;
    std::optional<ConceptId> find(std::string_view name) const;
    ConceptId require(std::string_view name) const;  // throws on unknown name

    // Number of nodes on the path to the root; root has depth 1.
    int depth(ConceptId id) const;

    // Deepest ancestor-or-self shared by a and b. Always exists.
    ConceptId lcs(ConceptId a, ConceptId b) const;

    // 2*depth(lcs)/(depth(a)+depth(b)), in (0,1].
    double similarity(ConceptId a, ConceptId b) const;

    // cv with ancestor inheritance; unannotated root counts as 0.
    double effective_cv(ConceptId id) const;

private:
    void check(ConceptId id) const;

    Dimension dimension_ = Dimension::Location;
    ConceptId root_ = 0;
    std::vector<Concept> nodes_;
    std::vector<int> depth_;
    std::vector<double> effective_cv_;
    std::unordered_map<std::string, ConceptId> by_name_;
};

// The three trees a recommender instance works with.
struct OntologySet {
    Ontology location;
    Ontology time;
    Ontology social;

    const Ontology& of(Dimension d) const {
        switch (d) {
            case Dimension::Location: return location;
            case Dimension::Time: return time;
            default: return social;
        }
    }

    static OntologySet load(const std::string& location_path,
                            const std::string& time_path,
                            const std::string& social_path);
};

}  // namespace fats
