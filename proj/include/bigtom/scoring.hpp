#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bigtom/compose.hpp"
#include "bigtom/harness.hpp"

namespace bigtom {

// Pairing key that unites a TB item and an FB item from one template.
struct ConditionKey {
    Family family = Family::forward_belief;
    std::optional<InitialBelief> initial_belief;
    std::optional<EventType> event;

    friend bool operator==(const ConditionKey&, const ConditionKey&) = default;
    friend auto operator<=>(const ConditionKey&, const ConditionKey&) = default;
};

struct ResultRow {
    ConditionKey key;
    // "true_belief", "false_belief", "tb_and_fb", or "probe".
    std::string contingency;
    double accuracy = 0.0;
    int n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double unparsed_rate = 0.0;
};

struct ResultsTable {
    std::vector<ResultRow> rows;
    int excluded_pairs = 0;  // pairs missing one contingency, never silently dropped
};

// Percentile bootstrap of the mean. Resample indices come from rng() % n so
// the stream is identical across standard libraries.
inline std::pair<double, double> bootstrap_ci(const std::vector<int>& values, int n_boot,
                                              double level, uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
    if (level <= 0.0 || level >= 1.0) throw std::invalid_argument("bootstrap_ci: bad level");
    const size_t n = values.size();
    std::mt19937_64 rng(seed);
    std::vector<double> means(static_cast<size_t>(n_boot));
    for (int b = 0; b < n_boot; ++b) {
        long long sum = 0;
        for (size_t i = 0; i < n; ++i) sum += values[rng() % n];
        means[static_cast<size_t>(b)] = static_cast<double>(sum) / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    auto quantile = [&](double p) {
        const auto idx = static_cast<size_t>(std::llround(p * (n_boot - 1)));
        return means[std::min(idx, means.size() - 1)];
    };
    return {quantile(alpha), quantile(1.0 - alpha)};
}

struct ScoreConfig {
    int n_boot = 10000;
    double level = 0.95;
    uint64_t seed = 0;
};

namespace detail {

struct CellSample {
    // (sort key, correct, unparsed); sorted before aggregation so permuting
    // record order changes no reported number.
    std::vector<std::tuple<std::string, int, int>> entries;
};

inline std::unordered_map<std::string, const TestItem*> item_index(
    const std::vector<TestItem>& items) {
    std::unordered_map<std::string, const TestItem*> index;
    for (const TestItem& item : items) index.emplace(item.item_id, &item);
    return index;
}

inline const TestItem& resolve_item(const std::unordered_map<std::string, const TestItem*>& index,
                                    const std::string& item_id) {
    auto it = index.find(item_id);
    if (it == index.end()) {
        throw std::runtime_error("eval record references unknown item_id " + item_id);
    }
    return *it->second;
}

inline ResultRow make_row(const ConditionKey& key, std::string contingency, CellSample& cell,
                          const ScoreConfig& config) {
    std::sort(cell.entries.begin(), cell.entries.end());
    std::vector<int> values;
    int unparsed = 0;
    for (const auto& [id, correct, unp] : cell.entries) {
        values.push_back(correct);
        unparsed += unp;
    }
    ResultRow row;
    row.key = key;
    row.contingency = std::move(contingency);
    row.n = static_cast<int>(values.size());
    row.accuracy =
        static_cast<double>(std::accumulate(values.begin(), values.end(), 0)) / row.n;
    row.unparsed_rate = static_cast<double>(unparsed) / row.n;
    const std::string tag = std::string(family_name(key.family)) + "|" +
                            (key.initial_belief ? std::string(initial_belief_name(*key.initial_belief)) : "-") +
                            "|" + (key.event ? std::string(event_name(*key.event)) : "-") + "|" +
                            row.contingency;
    auto [lo, hi] = bootstrap_ci(values, config.n_boot, config.level, derive_seed(config.seed, tag));
    row.ci_low = lo;
    row.ci_high = hi;
    return row;
}

}  // namespace detail

// Per-cell accuracies for the TB and FB contingencies plus the probe
// condition. Unparsed responses count as incorrect and are tallied separately.
inline std::vector<ResultRow> accuracy_by_condition(const std::vector<EvalRecord>& records,
                                                    const std::vector<TestItem>& items,
                                                    const ScoreConfig& config = {}) {
    const auto index = detail::item_index(items);
    std::map<std::pair<ConditionKey, std::string>, detail::CellSample> cells;
    for (const EvalRecord& record : records) {
        const TestItem& item = detail::resolve_item(index, record.item_id);
        const ConditionSpec& spec = item.condition;
        ConditionKey key{spec.family, spec.initial_belief, spec.event};
        const std::string contingency =
            spec.family == Family::initial_belief_probe
                ? "probe"
                : std::string(contingency_name(*spec.contingency));
        cells[{key, contingency}].entries.emplace_back(record.item_id, record.correct ? 1 : 0,
                                                       record.extracted == Extracted::unparsed ? 1 : 0);
    }
    std::vector<ResultRow> rows;
    for (auto& [cell_key, sample] : cells) {
        rows.push_back(detail::make_row(cell_key.first, cell_key.second, sample, config));
    }
    return rows;
}

// Joint contingency metric: an FB item counts only if the TB item from the
// same template and pairing key was also answered correctly.
inline std::vector<ResultRow> joint_tb_fb(const std::vector<EvalRecord>& records,
                                          const std::vector<TestItem>& items,
                                          const ScoreConfig& config = {},
                                          int* excluded_pairs = nullptr) {
    const auto index = detail::item_index(items);

    struct PairState {
        std::optional<bool> tb;
        std::optional<bool> fb;
    };
    std::map<std::pair<ConditionKey, std::string>, PairState> pairs;
    for (const EvalRecord& record : records) {
        const TestItem& item = detail::resolve_item(index, record.item_id);
        const ConditionSpec& spec = item.condition;
        if (spec.family == Family::initial_belief_probe) continue;
        ConditionKey key{spec.family, spec.initial_belief, spec.event};
        PairState& state = pairs[{key, item.template_id}];
        if (*spec.contingency == Contingency::true_belief) {
            state.tb = record.correct;
        } else {
            state.fb = record.correct;
        }
    }

    int excluded = 0;
    std::map<ConditionKey, detail::CellSample> cells;
    for (const auto& [pair_key, state] : pairs) {
        if (!state.tb || !state.fb) {
            ++excluded;
            continue;
        }
        const int joint = (*state.tb && *state.fb) ? 1 : 0;
        cells[pair_key.first].entries.emplace_back(pair_key.second, joint, 0);
    }
    if (excluded_pairs) *excluded_pairs = excluded;

    std::vector<ResultRow> rows;
    for (auto& [key, sample] : cells) {
        rows.push_back(detail::make_row(key, "tb_and_fb", sample, config));
    }
    return rows;
}

// Full table in fixed row order: family-major, then initial-belief flag, then
// event, with TB / FB / TB^FB rows per cell and the probe row last.
inline ResultsTable score_records(const std::vector<EvalRecord>& records,
                                  const std::vector<TestItem>& items,
                                  const ScoreConfig& config = {}) {
    ResultsTable table;
    const std::vector<ResultRow> marginal = accuracy_by_condition(records, items, config);
    const std::vector<ResultRow> joint = joint_tb_fb(records, items, config, &table.excluded_pairs);

    auto find_row = [](const std::vector<ResultRow>& rows, const ConditionKey& key,
                       const std::string& contingency) -> const ResultRow* {
        for (const ResultRow& row : rows) {
            if (row.key == key && row.contingency == contingency) return &row;
        }
        return nullptr;
    };

    for (Family family : {Family::forward_belief, Family::forward_action, Family::backward_belief}) {
        for (InitialBelief ib : {InitialBelief::with, InitialBelief::without}) {
            for (EventType event : {EventType::causal, EventType::random_control}) {
                const ConditionKey key{family, ib, event};
                for (const char* contingency : {"true_belief", "false_belief", "tb_and_fb"}) {
                    const auto& source = std::string_view(contingency) == "tb_and_fb" ? joint : marginal;
                    if (const ResultRow* row = find_row(source, key, contingency)) {
                        table.rows.push_back(*row);
                    }
                }
            }
        }
    }
    const ConditionKey probe_key{Family::initial_belief_probe, std::nullopt, std::nullopt};
    if (const ResultRow* row = find_row(marginal, probe_key, "probe")) table.rows.push_back(*row);
    return table;
}

enum class ReportFormat { markdown, csv };

namespace detail {

// Two decimals with the leading zero stripped: ".97", "1.00".
inline std::string table_number(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s.size() > 1 && s[0] == '0') s.erase(0, 1);
    return s;
}

inline std::string csv_number(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace detail

inline std::string render_report(const ResultsTable& table, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::csv) {
        out << "family,initial_belief,event,contingency,accuracy,n,ci_low,ci_high,unparsed_rate\n";
        for (const ResultRow& row : table.rows) {
            out << family_name(row.key.family) << ','
                << (row.key.initial_belief ? initial_belief_name(*row.key.initial_belief) : "") << ','
                << (row.key.event ? event_name(*row.key.event) : "") << ',' << row.contingency << ','
                << detail::csv_number(row.accuracy) << ',' << row.n << ','
                << detail::csv_number(row.ci_low) << ',' << detail::csv_number(row.ci_high) << ','
                << detail::csv_number(row.unparsed_rate) << "\n";
        }
        return out.str();
    }

    out << "| Condition | Initial Belief | Event | Contingency | Accuracy | 95% CI | n | Unparsed |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const ResultRow& row : table.rows) {
        out << "| " << family_name(row.key.family) << " | "
            << (row.key.initial_belief ? initial_belief_name(*row.key.initial_belief) : "-") << " | "
            << (row.key.event ? event_name(*row.key.event) : "-") << " | " << row.contingency
            << " | " << detail::table_number(row.accuracy) << " | ["
            << detail::table_number(row.ci_low) << ", " << detail::table_number(row.ci_high)
            << "] | " << row.n << " | " << detail::table_number(row.unparsed_rate) << " |\n";
    }
    if (table.excluded_pairs > 0) {
        out << "\nExcluded pairs missing one contingency: " << table.excluded_pairs << "\n";
    }
    return out.str();
}

}  // namespace bigtom
