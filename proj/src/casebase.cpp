#include "fats/casebase.hpp"

#include <fstream>
#include <stdexcept>

#include "fats/bandit.hpp"

namespace fats {

std::optional<RetrievalResult> retrieve_case(CaseBase& cb, const OntologySet& onts,
                                             const Situation& s) {
    if (cb.cases.empty()) return std::nullopt;
    const auto weights = cb.weights.normalized();
    RetrievalResult best;
    best.similarity = -1.0;
    for (std::size_t i = 0; i < cb.cases.size(); ++i) {
        const auto sims = per_dimension_similarity(onts, s, cb.cases[i].situation);
        const double sim = weights[0] * sims[0] + weights[1] * sims[1] + weights[2] * sims[2];
        if (sim > best.similarity) {  // strict: ties keep the lowest id
            best = RetrievalResult{i, sim, sims};
        }
    }
    cb.weights.record(best.per_dimension);
    return best;
}

std::size_t bootstrap_case(CaseBase& cb, const Situation& s) {
    for (std::size_t i = 0; i < cb.cases.size(); ++i)
        if (cb.cases[i].situation == s) return i;
    cb.cases.push_back(Case{cb.cases.size(), s, {}});
    return cb.cases.size() - 1;
}

std::size_t autoimprove(CaseBase& cb, const Situation& s,
                        std::optional<std::size_t> matched,
                        std::span<const DocId> slate,
                        std::span<const FeedbackItem> outcomes, DocId num_documents) {
    for (const FeedbackItem& item : outcomes) {
        if (item.doc >= num_documents)
            throw std::invalid_argument("autoimprove: feedback references unknown document " +
                                        std::to_string(item.doc) + " (universe size " +
                                        std::to_string(num_documents) + ")");
    }
    std::size_t target;
    if (matched && *matched < cb.cases.size() && cb.cases[*matched].situation == s) {
        target = *matched;
    } else {
        cb.cases.push_back(Case{cb.cases.size(), s, {}});
        target = cb.cases.size() - 1;
    }
    record_feedback(cb.cases[target], slate, outcomes, cb.trial_clock);
    return target;
}

std::pair<std::uint64_t, std::uint64_t> pooled_rewards(const Case& c) {
    std::uint64_t clicks = 0, fails = 0;
    for (const auto& [doc, stats] : c.stats) {
        clicks += stats.clicks;
        fails += stats.fails;
    }
    return {clicks, fails};
}

nlohmann::json casebase_to_json(const CaseBase& cb, const OntologySet& onts) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["trial_clock"] = cb.trial_clock;
    doc["weights"] = {
        {"history_count", cb.weights.history_count()},
        {"sum_y",
         {{"location", cb.weights.sums()[0]},
          {"time", cb.weights.sums()[1]},
          {"social", cb.weights.sums()[2]}}},
    };
    nlohmann::json cases = nlohmann::json::array();
    for (const Case& c : cb.cases) {
        const auto names = situation_names(onts, c.situation);
        nlohmann::json stats = nlohmann::json::array();
        for (const auto& [id, st] : c.stats) {
            nlohmann::json entry = {
                {"doc", id},           {"clicks", st.clicks},
                {"fails", st.fails},   {"recom", st.recom},
                {"time_spent", st.time_spent},
            };
            if (st.last_click) entry["last_click"] = *st.last_click;
            stats.push_back(std::move(entry));
        }
        cases.push_back({
            {"id", c.id},
            {"situation",
             {{"location", names[0]}, {"time", names[1]}, {"social", names[2]}}},
            {"stats", std::move(stats)},
        });
    }
    doc["cases"] = std::move(cases);
    return doc;
}

namespace {

[[noreturn]] void load_fail(const std::string& what) {
    throw std::runtime_error("casebase: " + what);
}

}  // namespace

CaseBase casebase_from_json(const nlohmann::json& doc, const OntologySet& onts) {
    if (!doc.is_object()) load_fail("document is not an object");
    if (!doc.contains("version") || doc["version"] != 1) load_fail("unsupported version");
    CaseBase cb;
    try {
        cb.trial_clock = doc.at("trial_clock").get<Trial>();
        const auto& w = doc.at("weights");
        cb.weights = DimensionWeights::restore(
            w.at("history_count").get<std::uint64_t>(),
            {w.at("sum_y").at("location").get<double>(), w.at("sum_y").at("time").get<double>(),
             w.at("sum_y").at("social").get<double>()});
        for (const auto& cj : doc.at("cases")) {
            Case c;
            c.id = cj.at("id").get<std::uint64_t>();
            const auto& sj = cj.at("situation");
            c.situation = make_situation(onts, sj.at("location").get<std::string>(),
                                         sj.at("time").get<std::string>(),
                                         sj.at("social").get<std::string>());
            for (const auto& stj : cj.at("stats")) {
                DocumentStats st;
                const DocId id = stj.at("doc").get<DocId>();
                st.clicks = stj.at("clicks").get<std::uint32_t>();
                st.fails = stj.at("fails").get<std::uint32_t>();
                st.recom = stj.at("recom").get<std::uint32_t>();
                st.time_spent = stj.at("time_spent").get<double>();
                if (stj.contains("last_click")) st.last_click = stj["last_click"].get<Trial>();
                if (st.recom != st.clicks + st.fails)
                    load_fail("case " + std::to_string(c.id) + " doc " + std::to_string(id) +
                              ": recom " + std::to_string(st.recom) + " != clicks " +
                              std::to_string(st.clicks) + " + fails " + std::to_string(st.fails));
                if (st.last_click.has_value() != (st.clicks > 0))
                    load_fail("case " + std::to_string(c.id) + " doc " + std::to_string(id) +
                              ": last_click must be present exactly when clicks > 0");
                if (st.last_click && *st.last_click > cb.trial_clock)
                    load_fail("case " + std::to_string(c.id) + " doc " + std::to_string(id) +
                              ": last_click beyond trial clock");
                if (!c.stats.emplace(id, st).second)
                    load_fail("case " + std::to_string(c.id) + ": duplicate stats for doc " +
                              std::to_string(id));
            }
            for (const Case& existing : cb.cases)
                if (existing.situation == c.situation)
                    load_fail("cases " + std::to_string(existing.id) + " and " +
                              std::to_string(c.id) + " share one concept triple");
            cb.cases.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        load_fail(std::string("schema violation: ") + e.what());
    }
    return cb;
}

void save_casebase_file(const CaseBase& cb, const OntologySet& onts, const std::string& path) {
    std::ofstream out(path);
    if (!out) load_fail("cannot write \"" + path + "\"");
    out << casebase_to_json(cb, onts).dump(2) << '\n';
}

CaseBase load_casebase_file(const std::string& path, const OntologySet& onts) {
    std::ifstream in(path);
    if (!in) load_fail("cannot open \"" + path + "\"");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        load_fail("parse failure in \"" + path + "\": " + e.what());
    }
    return casebase_from_json(doc, onts);
}

}  // namespace fats
