#include "fats/simulator.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fats {

namespace {

// Stream tags under the plan seed.
constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kArmStream = 2;
// Per-(arm seed, user) tags.
constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kEnvStream = 2;

}  // namespace

GroundTruthModel make_ground_truth(std::size_t pool_size, DocId num_documents,
                                   const std::vector<char>& critical_flags,
                                   const ModelParams& params, RandomSource& rng) {
    if (critical_flags.size() != pool_size)
        throw std::invalid_argument("make_ground_truth: flag count != pool size");
    GroundTruthModel model;
    model.critical = critical_flags;
    model.boredom_floor = params.boredom_floor;
    model.critical_strictness = params.critical_strictness;
    model.time_spent_mean = params.time_spent_mean;
    std::vector<char> shared_hot(num_documents);
    for (DocId d = 0; d < num_documents; ++d)
        shared_hot[d] = rng.bernoulli(params.hot_fraction) ? 1 : 0;

    model.base_affinity.resize(pool_size);
    for (std::size_t s = 0; s < pool_size; ++s) {
        auto& row = model.base_affinity[s];
        row.resize(num_documents);
        for (DocId d = 0; d < num_documents; ++d) {
            bool hot;
            if (!critical_flags[s] && rng.bernoulli(params.affinity_correlation)) {
                hot = shared_hot[d] != 0;
            } else {
                hot = rng.bernoulli(params.hot_fraction);
            }
            row[d] = hot ? rng.uniform(params.hot_min, params.hot_max)
                         : rng.uniform(params.cold_min, params.cold_max);
        }
    }
    return model;
}

double true_retention(const SyntheticUser& user, DocId doc, Trial now) {
    const auto it = user.history.find(doc);
    if (it == user.history.end() || it->second.clicks == 0) return 0.0;
    const double t = static_cast<double>(now - it->second.last_click);
    return std::exp(-t / static_cast<double>(it->second.clicks));
}

double click_probability(const GroundTruthModel& model, std::size_t situation_index, DocId doc,
                         double retention) {
    const double base = model.base_affinity.at(situation_index).at(doc);
    if (model.critical.at(situation_index) && base < model.critical_strictness) return 0.0;
    const double gamma = model.boredom_floor;
    return base * (gamma + (1.0 - gamma) * (1.0 - retention));
}

std::size_t SessionRecord::click_count() const {
    std::size_t n = 0;
    for (char c : clicked) n += (c != 0);
    return n;
}

SessionRecord simulate_session(ArmState& arm, SyntheticUser& user, std::size_t situation_index,
                               const SimulationSetup& setup, const GroundTruthModel& model,
                               const OntologySet& onts, std::span<const DocId> candidates,
                               std::size_t slate_size, RandomSource& policy_rng,
                               RandomSource& env_rng) {
    const Situation& s = setup.pool.at(situation_index);
    const Trial now = arm.casebase.advance_trial();

    // Retrieve the case to sample from. The situation-blind arm keeps one
    // global pseudo-case keyed to the ontology roots; the others retrieve
    // by similarity or bootstrap an empty case on the first trial.
    std::size_t target;
    std::optional<std::size_t> matched;
    if (arm.variant.policy == Policy::TS) {
        if (arm.casebase.cases.empty()) {
            const Situation global{
                {onts.location.root(), onts.time.root(), onts.social.root()}};
            bootstrap_case(arm.casebase, global);
        }
        target = 0;
    } else {
        if (const auto retrieved = retrieve_case(arm.casebase, onts, s)) {
            target = retrieved->index;
        } else {
            target = bootstrap_case(arm.casebase, s);
        }
        matched = target;
    }

    const RiskContext ctx{&onts, setup.critical, arm.casebase.weights.normalized(),
                          setup.lambda};
    const Selection sel =
        select_documents(arm.casebase.cases[target], s, candidates, slate_size, arm.variant,
                         &ctx, now, policy_rng);

    SessionRecord rec;
    rec.trial = now;
    rec.situation_index = situation_index;
    rec.epsilon = sel.epsilon;
    rec.risk = sel.risk;
    rec.slate.reserve(sel.slate.size());
    rec.clicked.reserve(sel.slate.size());
    rec.time_spent.reserve(sel.slate.size());

    std::vector<FeedbackItem> outcomes;
    outcomes.reserve(sel.slate.size());
    for (const ScoredDocument& sd : sel.slate) {
        const double retention = true_retention(user, sd.doc, now);
        const double p = click_probability(model, situation_index, sd.doc, retention);
        const bool clicked = env_rng.bernoulli(p);
        const double dwell = clicked ? env_rng.exponential(model.time_spent_mean) : 0.0;
        outcomes.push_back(FeedbackItem{sd.doc, clicked, dwell});
        rec.slate.push_back(sd.doc);
        rec.clicked.push_back(clicked ? 1 : 0);
        rec.time_spent.push_back(dwell);
        if (clicked) {
            auto& h = user.history[sd.doc];
            h.clicks += 1;
            h.last_click = now;
        }
    }

    if (arm.variant.policy == Policy::TS) {
        record_feedback(arm.casebase.cases[target], rec.slate, outcomes, now);
    } else {
        autoimprove(arm.casebase, s, matched, rec.slate, outcomes,
                    static_cast<DocId>(candidates.size()));
    }
    return rec;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, const SimulationSetup& setup,
                                const OntologySet& onts, bool keep_log) {
    if (plan.arms.empty()) throw std::invalid_argument("run_experiment: no arms");
    if (plan.days < 1 || plan.sessions_per_day < 1 || plan.users_per_arm < 1)
        throw std::invalid_argument("run_experiment: plan counts must be positive");
    if (setup.pool.empty()) throw std::invalid_argument("run_experiment: empty situation pool");
    if (plan.num_documents < plan.slate_size)
        throw std::invalid_argument("run_experiment: fewer documents than the slate size");

    std::vector<char> critical_flags(setup.pool.size(), 0);
    for (std::size_t i = 0; i < setup.pool.size(); ++i)
        for (const Situation& cs : setup.critical)
            if (setup.pool[i] == cs) critical_flags[i] = 1;

    RandomSource root(plan.seed);
    RandomSource model_rng = root.derive(kModelStream);
    const GroundTruthModel model = make_ground_truth(setup.pool.size(), plan.num_documents,
                                                     critical_flags, setup.model, model_rng);

    std::vector<DocId> candidates(plan.num_documents);
    std::iota(candidates.begin(), candidates.end(), 0);

    ExperimentResult result;
    struct DayAccumulator {
        std::uint64_t sessions = 0;
        std::uint64_t clicks = 0;
        double time_total = 0.0;
    };

    for (std::size_t ai = 0; ai < plan.arms.size(); ++ai) {
        const ArmSpec& spec = plan.arms[ai];
        const std::uint64_t arm_seed =
            spec.seed ? *spec.seed : mix_seed(plan.seed, kArmStream, ai);
        std::vector<DayAccumulator> days(plan.days);
        CaseBase first_user_cb;

        for (std::uint32_t u = 0; u < plan.users_per_arm; ++u) {
            RandomSource policy_rng = RandomSource(arm_seed).derive(kPolicyStream, u);
            RandomSource env_rng = RandomSource(arm_seed).derive(kEnvStream, u);
            ArmState arm{spec.variant, {}};
            SyntheticUser user{u, {}};
            for (std::uint32_t day = 1; day <= plan.days; ++day) {
                for (std::uint32_t k = 0; k < plan.sessions_per_day; ++k) {
                    const std::size_t sit = env_rng.uniform_index(setup.pool.size());
                    SessionRecord rec =
                        simulate_session(arm, user, sit, setup, model, onts, candidates,
                                         plan.slate_size, policy_rng, env_rng);
                    rec.arm = spec.label;
                    rec.day = day;
                    rec.user = u;
                    DayAccumulator& acc = days[day - 1];
                    acc.sessions += 1;
                    acc.clicks += rec.click_count();
                    for (std::size_t i = 0; i < rec.clicked.size(); ++i)
                        if (rec.clicked[i]) acc.time_total += rec.time_spent[i];
                    if (keep_log) result.log.push_back(std::move(rec));
                }
            }
            if (u == 0) first_user_cb = std::move(arm.casebase);
        }

        for (std::uint32_t day = 1; day <= plan.days; ++day) {
            const DayAccumulator& acc = days[day - 1];
            MetricsRow row;
            row.arm = spec.label;
            row.day = day;
            row.avg_precision = static_cast<double>(acc.clicks) /
                                (static_cast<double>(acc.sessions) *
                                 static_cast<double>(plan.slate_size));
            row.avg_time_spent = acc.clicks > 0 ? acc.time_total / acc.clicks : 0.0;
            result.metrics.push_back(std::move(row));
        }
        result.first_user_casebases.push_back(std::move(first_user_cb));
    }
    return result;
}

double average_precision(std::span<const SessionRecord> sessions) {
    if (sessions.empty())
        throw std::invalid_argument("average_precision: empty session set");
    double total = 0.0;
    for (const SessionRecord& rec : sessions)
        total += static_cast<double>(rec.click_count()) / rec.slate.size();
    return total / sessions.size();
}

double average_time_spent(std::span<const SessionRecord> sessions) {
    double time_total = 0.0;
    std::uint64_t clicks = 0;
    for (const SessionRecord& rec : sessions) {
        for (std::size_t i = 0; i < rec.clicked.size(); ++i) {
            if (rec.clicked[i]) {
                time_total += rec.time_spent[i];
                clicks += 1;
            }
        }
    }
    return clicks > 0 ? time_total / clicks : 0.0;
}

std::string metrics_to_csv(std::span<const MetricsRow> rows) {
    std::ostringstream out;
    out << "arm,day,avg_precision,avg_time_spent\n";
    out << std::fixed << std::setprecision(6);
    for (const MetricsRow& row : rows)
        out << row.arm << ',' << row.day << ',' << row.avg_precision << ','
            << row.avg_time_spent << '\n';
    return out.str();
}

std::string session_log_to_jsonl(std::span<const SessionRecord> log, const OntologySet& onts,
                                 const SimulationSetup& setup) {
    std::ostringstream out;
    for (const SessionRecord& rec : log) {
        const auto names = situation_names(onts, setup.pool.at(rec.situation_index));
        nlohmann::json line = {
            {"arm", rec.arm},
            {"day", rec.day},
            {"user", rec.user},
            {"trial", rec.trial},
            {"situation",
             {{"location", names[0]}, {"time", names[1]}, {"social", names[2]}}},
            {"epsilon", rec.epsilon},
            {"risk", rec.risk},
            {"slate", rec.slate},
            {"clicked", nlohmann::json::array()},
            {"time_spent", rec.time_spent},
        };
        for (char c : rec.clicked) line["clicked"].push_back(c != 0);
        out << line.dump() << '\n';
    }
    return out.str();
}

}  // namespace fats
