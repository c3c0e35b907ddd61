#include "fats/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace fats {

namespace {

namespace fs = std::filesystem;

double require_number(const nlohmann::json& obj, const std::string& key,
                      const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError("config: missing or non-numeric \"" + where + "." + key + "\"");
    return obj[key].get<double>();
}

std::vector<std::array<std::string, 3>> read_triples(const nlohmann::json& arr,
                                                     const std::string& key) {
    if (!arr.is_array())
        throw ConfigError("config: \"" + key + "\" must be an array of [location, time, social] triples");
    std::vector<std::array<std::string, 3>> out;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 3)
            throw ConfigError("config: every \"" + key + "\" entry must be a 3-element array");
        out.push_back({item[0].get<std::string>(), item[1].get<std::string>(),
                       item[2].get<std::string>()});
    }
    return out;
}

}  // namespace

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: parse failure in \"" + path + "\": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: document is not an object");

    Config cfg;
    try {
        const fs::path base = fs::path(path).parent_path();
        const auto resolve_path = [&](const std::string& p) {
            return fs::path(p).is_absolute() ? p : (base / p).string();
        };

        const auto& onts = doc.at("ontologies");
        cfg.location_path = resolve_path(onts.at("location").get<std::string>());
        cfg.time_path = resolve_path(onts.at("time").get<std::string>());
        cfg.social_path = resolve_path(onts.at("social").get<std::string>());
        for (const std::string& p : {cfg.location_path, cfg.time_path, cfg.social_path})
            if (!fs::exists(p))
                throw ConfigError("config: ontology file \"" + p + "\" does not exist");

        const auto& expl = doc.at("exploration");
        cfg.bounds = ExplorationBounds::make(require_number(expl, "epsilon_min", "exploration"),
                                             require_number(expl, "epsilon_max", "exploration"));

        const auto& lam = doc.at("risk_weights");
        cfg.lambda = RiskWeights::make(require_number(lam, "c", "risk_weights"),
                                       require_number(lam, "m", "risk_weights"),
                                       require_number(lam, "v", "risk_weights"));

        cfg.critical_names = read_triples(doc.at("critical_situations"), "critical_situations");
        cfg.pool_names = read_triples(doc.at("situation_pool"), "situation_pool");
        if (cfg.pool_names.empty()) throw ConfigError("config: empty situation_pool");

        const auto& plan = doc.at("plan");
        for (const auto& arm : plan.at("arms")) {
            const std::string token = arm.get<std::string>();
            if (!policy_from_string(token))
                throw ConfigError("config: unknown arm variant \"" + token + "\"");
            cfg.arm_tokens.push_back(token);
        }
        if (cfg.arm_tokens.empty()) throw ConfigError("config: plan.arms is empty");
        cfg.plan.users_per_arm = plan.at("users_per_arm").get<std::uint32_t>();
        cfg.plan.sessions_per_day = plan.at("sessions_per_day").get<std::uint32_t>();
        cfg.plan.days = plan.at("days").get<std::uint32_t>();
        cfg.plan.slate_size = plan.at("slate_size").get<std::size_t>();
        cfg.plan.num_documents = plan.at("num_documents").get<DocId>();
        cfg.plan.seed = plan.at("seed").get<std::uint64_t>();
        if (cfg.plan.users_per_arm < 1 || cfg.plan.sessions_per_day < 1 || cfg.plan.days < 1)
            throw ConfigError("config: plan counts must be at least 1");
        if (cfg.plan.slate_size < 1)
            throw ConfigError("config: plan.slate_size must be at least 1");
        if (cfg.plan.num_documents < cfg.plan.slate_size)
            throw ConfigError("config: plan.num_documents smaller than plan.slate_size");

        const auto& model = doc.at("model");
        cfg.model.hot_fraction = require_number(model, "hot_fraction", "model");
        const auto& hot = model.at("hot_affinity");
        const auto& cold = model.at("cold_affinity");
        cfg.model.hot_min = hot.at(0).get<double>();
        cfg.model.hot_max = hot.at(1).get<double>();
        cfg.model.cold_min = cold.at(0).get<double>();
        cfg.model.cold_max = cold.at(1).get<double>();
        cfg.model.affinity_correlation = require_number(model, "affinity_correlation", "model");
        cfg.model.boredom_floor = require_number(model, "boredom_floor", "model");
        cfg.model.critical_strictness = require_number(model, "critical_strictness", "model");
        cfg.model.time_spent_mean = require_number(model, "time_spent_mean", "model");
        if (!(cfg.model.hot_fraction >= 0.0 && cfg.model.hot_fraction <= 1.0))
            throw ConfigError("config: model.hot_fraction outside [0,1]");
        for (const auto& [lo, hi, name] :
             {std::tuple{cfg.model.hot_min, cfg.model.hot_max, "hot_affinity"},
              std::tuple{cfg.model.cold_min, cfg.model.cold_max, "cold_affinity"}}) {
            if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
                throw ConfigError(std::string("config: model.") + name +
                                  " must satisfy 0 <= lo <= hi <= 1");
        }
        if (!(cfg.model.affinity_correlation >= 0.0 && cfg.model.affinity_correlation <= 1.0))
            throw ConfigError("config: model.affinity_correlation outside [0,1]");
        if (!(cfg.model.boredom_floor >= 0.0 && cfg.model.boredom_floor <= 1.0))
            throw ConfigError("config: model.boredom_floor outside [0,1]");
        if (!(cfg.model.critical_strictness >= 0.0 && cfg.model.critical_strictness <= 1.0))
            throw ConfigError("config: model.critical_strictness outside [0,1]");
        if (!(cfg.model.time_spent_mean > 0.0))
            throw ConfigError("config: model.time_spent_mean must be positive");

        if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return cfg;
}

RuntimeContext resolve(const Config& cfg) {
    RuntimeContext ctx;
    try {
        ctx.onts = OntologySet::load(cfg.location_path, cfg.time_path, cfg.social_path);
    } catch (const std::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }

    const auto lookup = [&](const std::array<std::string, 3>& names, const char* where) {
        try {
            return make_situation(ctx.onts, names[0], names[1], names[2]);
        } catch (const std::exception& e) {
            throw ConfigError("config: " + std::string(where) + " [" + names[0] + ", " +
                              names[1] + ", " + names[2] + "]: " + e.what());
        }
    };
    for (const auto& t : cfg.critical_names)
        ctx.setup.critical.push_back(lookup(t, "critical_situations"));
    for (const auto& t : cfg.pool_names) ctx.setup.pool.push_back(lookup(t, "situation_pool"));

    const bool pool_has_critical =
        std::any_of(ctx.setup.pool.begin(), ctx.setup.pool.end(), [&](const Situation& s) {
            return std::find(ctx.setup.critical.begin(), ctx.setup.critical.end(), s) !=
                   ctx.setup.critical.end();
        });
    if (!pool_has_critical)
        throw ConfigError("config: situation_pool must contain at least one critical situation");

    ctx.setup.bounds = cfg.bounds;
    ctx.setup.lambda = cfg.lambda;
    ctx.setup.model = cfg.model;

    ctx.plan = cfg.plan;
    for (const std::string& token : cfg.arm_tokens) {
        const Policy policy = *policy_from_string(token);
        ctx.plan.arms.push_back(ArmSpec{Variant{policy, cfg.bounds}, token, std::nullopt});
    }
    return ctx;
}

}  // namespace fats
