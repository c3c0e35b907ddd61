#include "fats/ontology.hpp"

#include <fstream>
#include <stdexcept>

namespace fats {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("ontology: " + what);
}

}  // namespace

const char* to_string(Dimension d) {
    switch (d) {
        case Dimension::Location: return "Location";
        case Dimension::Time: return "Time";
        default: return "Social";
    }
}

std::optional<Dimension> dimension_from_string(std::string_view name) {
    for (Dimension d : kDimensions) {
        if (name == to_string(d)) return d;
    }
    return std::nullopt;
}

Ontology Ontology::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) fail("document is not an object");
    if (!doc.contains("dimension") || !doc["dimension"].is_string())
        fail("missing or non-string \"dimension\"");
    const auto dim = dimension_from_string(doc["dimension"].get<std::string>());
    if (!dim) fail("unknown dimension \"" + doc["dimension"].get<std::string>() + "\"");
    if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty())
        fail("missing or empty \"nodes\" array");

    Ontology o;
    o.dimension_ = *dim;

    // First pass: names and ids.
    for (const auto& node : doc["nodes"]) {
        if (!node.is_object() || !node.contains("name") || !node["name"].is_string())
            fail("node without a string \"name\"");
        const std::string name = node["name"].get<std::string>();
        if (name.empty()) fail("node with empty name");
        if (o.by_name_.count(name)) fail("duplicate name \"" + name + "\"");
        const ConceptId id = static_cast<ConceptId>(o.nodes_.size());
        o.by_name_.emplace(name, id);
        o.nodes_.push_back(Concept{name, std::nullopt, std::nullopt});
    }

    // Second pass: parent links and cv annotations.
    std::optional<ConceptId> root;
    std::size_t index = 0;
    for (const auto& node : doc["nodes"]) {
        Concept& c = o.nodes_[index];
        if (node.contains("parent")) {
            if (!node["parent"].is_string())
                fail("node \"" + c.name + "\": non-string parent");
            const std::string parent = node["parent"].get<std::string>();
            const auto it = o.by_name_.find(parent);
            if (it == o.by_name_.end())
                fail("node \"" + c.name + "\": unknown parent \"" + parent + "\"");
            if (it->second == index)
                fail("node \"" + c.name + "\": is its own parent");
            c.parent = it->second;
        } else {
            if (root) fail("multiple roots: \"" + o.nodes_[*root].name + "\" and \"" + c.name + "\"");
            root = static_cast<ConceptId>(index);
        }
        if (node.contains("cv")) {
            if (!node["cv"].is_number())
                fail("node \"" + c.name + "\": non-numeric cv");
            const double cv = node["cv"].get<double>();
            if (!(cv >= 0.0 && cv <= 1.0))
                fail("node \"" + c.name + "\": cv " + std::to_string(cv) + " outside [0,1]");
            c.cv = cv;
        }
        ++index;
    }
    if (!root) fail("no root node (every node has a parent)");
    o.root_ = *root;

    // Depth by walking to the root; a walk longer than the node count means a cycle.
    const std::size_t n = o.nodes_.size();
    o.depth_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int steps = 1;
        ConceptId cur = static_cast<ConceptId>(i);
        while (o.nodes_[cur].parent) {
            cur = *o.nodes_[cur].parent;
            if (++steps > static_cast<int>(n))
                fail("cycle through node \"" + o.nodes_[i].name + "\"");
        }
        if (cur != o.root_) fail("node \"" + o.nodes_[i].name + "\" not connected to the root");
        o.depth_[i] = steps;
    }

    // Effective cv: nearest annotated ancestor, root defaults to 0.
    o.effective_cv_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        ConceptId cur = static_cast<ConceptId>(i);
        while (!o.nodes_[cur].cv && o.nodes_[cur].parent) cur = *o.nodes_[cur].parent;
        o.effective_cv_[i] = o.nodes_[cur].cv.value_or(0.0);
    }
    return o;
}

Ontology Ontology::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open \"" + path + "\"");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail("parse failure in \"" + path + "\": " + e.what());
    }
    try {
        return from_json(doc);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (file " + path + ")");
    }
}

void Ontology::check(ConceptId id) const {
    if (id >= nodes_.size())
        fail("unknown concept id " + std::to_string(id) + " in " + to_string(dimension_) +
             " ontology of " + std::to_string(nodes_.size()) + " concepts");
}

const Concept& Ontology::concept_at(ConceptId id) const {
    check(id);
    return nodes_[id];
}

std::optional<ConceptId> Ontology::find(std::string_view name) const {
    const auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

ConceptId Ontology::require(std::string_view name) const {
    const auto id = find(name);
    if (!id)
        fail("unknown concept \"" + std::string(name) + "\" in " + to_string(dimension_) +
             " ontology");
    return *id;
}

int Ontology::depth(ConceptId id) const {
    check(id);
    return depth_[id];
}

ConceptId Ontology::lcs(ConceptId a, ConceptId b) const {
    check(a);
    check(b);
    // Lift the deeper node, then climb in lockstep.
    while (depth_[a] > depth_[b]) a = *nodes_[a].parent;
    while (depth_[b] > depth_[a]) b = *nodes_[b].parent;
    while (a != b) {
        a = *nodes_[a].parent;
        b = *nodes_[b].parent;
    }
    return a;
}

double Ontology::similarity(ConceptId a, ConceptId b) const {
    const int shared = depth(lcs(a, b));
    return 2.0 * shared / (depth_[a] + depth_[b]);
}

double Ontology::effective_cv(ConceptId id) const {
    check(id);
    return effective_cv_[id];
}

OntologySet OntologySet::load(const std::string& location_path,
                              const std::string& time_path,
                              const std::string& social_path) {
    OntologySet set{Ontology::load_file(location_path), Ontology::load_file(time_path),
                    Ontology::load_file(social_path)};
    const std::array<const Ontology*, 3> loaded = {&set.location, &set.time, &set.social};
    const std::array<std::string, 3> paths = {location_path, time_path, social_path};
    for (std::size_t i = 0; i < 3; ++i) {
        if (loaded[i]->dimension() != kDimensions[i])
            fail("\"" + paths[i] + "\" declares dimension " +
                 to_string(loaded[i]->dimension()) + ", expected " + to_string(kDimensions[i]));
    }
    return set;
}

}  // namespace fats
