#include "fats/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "fats/config.hpp"

namespace fats {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << content;
    if (!out) throw std::runtime_error("write failed for \"" + path + "\"");
}

struct ArmSummary {
    std::string arm;
    double ap = 0.0;
    double atsd = 0.0;
};

// Per-arm mean of the daily values, in first-appearance order.
std::vector<ArmSummary> summarize(const std::vector<MetricsRow>& rows) {
    std::vector<ArmSummary> summaries;
    std::vector<std::size_t> counts;
    for (const MetricsRow& row : rows) {
        auto it = std::find_if(summaries.begin(), summaries.end(),
                               [&](const ArmSummary& s) { return s.arm == row.arm; });
        if (it == summaries.end()) {
            summaries.push_back(ArmSummary{row.arm, 0.0, 0.0});
            counts.push_back(0);
            it = summaries.end() - 1;
        }
        const std::size_t i = static_cast<std::size_t>(it - summaries.begin());
        it->ap += row.avg_precision;
        it->atsd += row.avg_time_spent;
        counts[i] += 1;
    }
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        summaries[i].ap /= counts[i];
        summaries[i].atsd /= counts[i];
    }
    return summaries;
}

void print_summary(std::ostream& out, const std::vector<ArmSummary>& summaries) {
    out << std::left << std::setw(12) << "algorithm" << std::right << std::setw(10) << "AP"
        << std::setw(10) << "ATSD" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const ArmSummary& s : summaries)
        out << std::left << std::setw(12) << s.arm << std::right << std::setw(10) << s.ap
            << std::setw(10) << s.atsd << '\n';
    out.unsetf(std::ios::floatfield);
}

int run_plan(const std::string& config_path, const std::optional<std::string>& variant_token,
             const CommandOverrides& overrides, std::ostream& out, std::ostream& err) {
    RuntimeContext ctx;
    std::string out_dir;
    try {
        Config cfg = load_config(config_path);
        if (overrides.seed) cfg.plan.seed = *overrides.seed;
        if (variant_token) cfg.arm_tokens = {*variant_token};
        ctx = resolve(cfg);
        out_dir = overrides.out_dir.value_or(cfg.output_dir);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kConfigError;
    }

    try {
        const ExperimentResult result = run_experiment(ctx.plan, ctx.setup, ctx.onts, true);
        fs::create_directories(out_dir);
        write_file((fs::path(out_dir) / "metrics.csv").string(),
                   metrics_to_csv(result.metrics));
        write_file((fs::path(out_dir) / "sessions.jsonl").string(),
                   session_log_to_jsonl(result.log, ctx.onts, ctx.setup));
        if (variant_token) {
            save_casebase_file(result.first_user_casebases.at(0), ctx.onts,
                               (fs::path(out_dir) / "casebase.json").string());
        }
        print_summary(out, summarize(result.metrics));
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& variant_token,
            const CommandOverrides& overrides, std::ostream& out, std::ostream& err) {
    if (!policy_from_string(variant_token)) {
        err << "unknown variant \"" << variant_token
            << "\" (expected ts|fats0|fats05|fats1|fats)\n";
        return kConfigError;
    }
    return run_plan(config_path, variant_token, overrides, out, err);
}

int cmd_compare(const std::string& config_path, const CommandOverrides& overrides,
                std::ostream& out, std::ostream& err) {
    return run_plan(config_path, std::nullopt, overrides, out, err);
}

int cmd_report(const std::string& metrics_path, const std::optional<std::string>& out_dir,
               std::ostream& out, std::ostream& err) {
    std::vector<MetricsRow> rows;
    try {
        std::ifstream in(metrics_path);
        if (!in) {
            err << "report: cannot open \"" << metrics_path << "\"\n";
            return kConfigError;
        }
        std::string line;
        if (!std::getline(in, line) || line != "arm,day,avg_precision,avg_time_spent") {
            err << "report: \"" << metrics_path << "\" is not a metrics CSV (bad header)\n";
            return kConfigError;
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::istringstream fields(line);
            MetricsRow row;
            std::string day, ap, atsd;
            if (!std::getline(fields, row.arm, ',') || !std::getline(fields, day, ',') ||
                !std::getline(fields, ap, ',') || !std::getline(fields, atsd)) {
                err << "report: malformed row at line " << line_no << '\n';
                return kConfigError;
            }
            try {
                row.day = static_cast<std::uint32_t>(std::stoul(day));
                row.avg_precision = std::stod(ap);
                row.avg_time_spent = std::stod(atsd);
            } catch (const std::exception&) {
                err << "report: malformed row at line " << line_no << '\n';
                return kConfigError;
            }
            rows.push_back(std::move(row));
        }
        if (rows.empty()) {
            err << "report: no data rows in \"" << metrics_path << "\"\n";
            return kConfigError;
        }
    } catch (const std::exception& e) {
        err << "report: " << e.what() << '\n';
        return kRuntimeError;
    }

    try {
        // Arms in first-appearance order; one AP series per arm.
        std::vector<std::string> arms;
        std::vector<std::uint32_t> day_list;
        std::map<std::pair<std::string, std::uint32_t>, double> ap;
        for (const MetricsRow& row : rows) {
            if (std::find(arms.begin(), arms.end(), row.arm) == arms.end())
                arms.push_back(row.arm);
            if (std::find(day_list.begin(), day_list.end(), row.day) == day_list.end())
                day_list.push_back(row.day);
            ap[{row.arm, row.day}] = row.avg_precision;
        }
        std::sort(day_list.begin(), day_list.end());

        std::ostringstream series;
        series << "day";
        for (const std::string& arm : arms) series << ',' << arm;
        series << '\n';
        series << std::fixed << std::setprecision(6);
        for (std::uint32_t day : day_list) {
            series << day;
            for (const std::string& arm : arms) {
                series << ',';
                const auto it = ap.find({arm, day});
                if (it != ap.end()) series << it->second;
            }
            series << '\n';
        }

        const fs::path dir =
            out_dir ? fs::path(*out_dir) : fs::path(metrics_path).parent_path();
        if (!dir.empty()) fs::create_directories(dir);
        const fs::path series_path = dir / "series.csv";
        write_file(series_path.string(), series.str());

        print_summary(out, summarize(rows));
        out << "series written to " << series_path.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        err << "report: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace fats
