// Acceptance suite: one pass/fail line per criterion, exit code 0 only if all
// criteria hold.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bigtom/compose.hpp"
#include "bigtom/extract.hpp"
#include "bigtom/generator.hpp"
#include "bigtom/harness.hpp"
#include "bigtom/http_backend.hpp"
#include "bigtom/scoring.hpp"
#include "bigtom/synthetic.hpp"

using namespace bigtom;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
    if (!condition) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CausalTemplate load_template_file(const std::string& path) {
    ParseResult parsed = parse_template(read_file(path));
    if (!parsed.ok()) throw Failure(path + " failed to parse: " + parsed.error->detail);
    return *parsed.tpl;
}

std::string data_path(const std::string& rel) { return std::string(DATA_DIR) + "/" + rel; }
std::string fixture_path(const std::string& rel) { return std::string(FIXTURE_DIR) + "/" + rel; }

// ---- criterion 1: parser fidelity and the delete-one-line mutation suite

void criterion_parser() {
    const auto start = std::chrono::steady_clock::now();
    const std::string text = read_file(data_path("exemplars/mei.txt"));

    ParseResult parsed = parse_template(text);
    require(parsed.ok(), "mei exemplar must parse");
    require(parsed.tpl->slots.size() == kSlotCount, "must fill all 21 slots");
    require(parsed.tpl->slot(SlotName::context) ==
                "Mei is a pearl diver in a small coastal village in Japan.",
            "context slot text");
    require(parsed.tpl->slot(SlotName::random_percept_unaware) ==
                "Mei does not notice the school of brightly colored fish",
            "final slot text");
    for (const auto& [slot, value] : parsed.tpl->slots) {
        require(text.find(std::string(slot_label(slot)) + ": " + value + "\n") !=
                    std::string::npos,
                "slot " + std::string(slot_key(slot)) + " must be verbatim from the source");
    }

    const std::vector<std::string> lines = split_lines(text);
    int detected = 0;
    for (SlotName slot : all_slots()) {
        const std::string prefix = to_lower(std::string(slot_label(slot))) + ":";
        std::string mutated;
        bool deleted = false;
        for (const std::string& line : lines) {
            if (!deleted && to_lower(trim(line)).rfind(prefix, 0) == 0) {
                deleted = true;
                continue;
            }
            mutated += line;
            mutated += '\n';
        }
        require(deleted, "mutation must remove a line");
        ParseResult result = parse_template(mutated);
        require(!result.ok(), "mutated completion must be rejected");
        require(result.error->kind == StructureError::Kind::missing_slot &&
                    result.error->slot == slot,
                "mutation must name the deleted slot " + std::string(slot_key(slot)));
        ++detected;
    }
    require(detected == 21, "all 21 mutations must be covered");
    require(seconds_since(start) < 1.0, "criterion must finish in under 1 s");
}

// ---- criterion 2: composition cardinality and golden items

void check_golden(const CausalTemplate& tpl, int condition_id, const std::string& story,
                  const std::string& question, const std::string& correct) {
    const TestItem item = compose_item(tpl, condition_by_id(condition_id),
                                       item_option_seed(7, tpl.template_id, condition_id));
    require(story_paragraph(item) == story, "golden story must byte-match: " + story.substr(0, 40));
    require(item.question == question, "golden question must byte-match");
    require(item.options[static_cast<size_t>(item.correct_index)] == correct,
            "golden correct answer must byte-match");
}

void criterion_golden_items() {
    const auto start = std::chrono::steady_clock::now();
    require(compose_all(load_template_file(data_path("exemplars/mei.txt")), 3).size() == 25,
            "compose_all must yield 25 items");

    check_golden(
        load_template_file(data_path("exemplars/noor.txt")), 1,
        "Noor is working as a barista at a busy coffee shop. Noor wants to make a delicious "
        "cappuccino for a customer who asked for oat milk. Noor grabs a milk pitcher and fills it "
        "with oat milk. Noor believes that the milk pitcher contains oatmilk. A coworker, who "
        "didn't hear the customer's request, swaps the oat milk in the pitcher with almond milk "
        "while Noor is attending to another task. Noor sees her coworker swapping the milk.",
        "Does Noor believe the milk pitcher contains oat milk or almond milk?",
        "Noor believes the milk pitcher contains almond milk.");

    check_golden(
        load_template_file(data_path("exemplars/mei.txt")), 18,
        "Mei is a pearl diver in a small coastal village in Japan. Mei wants to find a perfect "
        "pearl to give to her grandmother for her birthday. Mei spots an oyster at the bottom of "
        "the sea that looks to be the right size and age to contain a pearl. Mei believes that "
        "the oyster she spotted contains a pearl. A curious octopus opens the oyster, revealing "
        "that there is no pearl inside, and then swims away. Mei dives down to collect the "
        "oyster.",
        "Does Mei believe the oyster she spotted contains a pearl or that it is empty?",
        "Mei believes the oyster she spotted contains a pearl.");

    check_golden(
        load_template_file(data_path("exemplars/naveen.txt")), 20,
        "Naveen is a professional baker who runs a small bakery in a bustling city. Today, he "
        "plans to bake a large batch of chocolate chip cookies for an upcoming event. Naveen "
        "notices that the oven is preheated to the correct temperature. He believes that the "
        "oven is ready for baking. Naveen listens to the street musician's performance. Naveen "
        "starts baking the chocolate chip cookies.",
        "Does Naveen believe the oven is preheated to the correct temperature or affected by the "
        "power outage and cooled down?",
        "Naveen believes the oven is preheated to the correct temperature.");

    check_golden(
        load_template_file(fixture_path("aarav_completion.txt")), 6,
        "Aarav is a landscape architect working on a new public park. He wants to plant a row of "
        "trees that will provide shade and beauty to the park's visitors. Aarav sees that the "
        "saplings he has ordered appear to be strong and healthy. However, an unexpected "
        "heatwave hits the area, causing the saplings to wilt and weaken. Aarav does not notice "
        "the heatwave's effects on the saplings.",
        "Does Aarav believe the saplings are strong and healthy or wilted and weakened?",
        "Aarav believes the saplings are strong and healthy.");

    require(seconds_since(start) < 1.0, "criterion must finish in under 1 s");
}

// ---- criterion 3: corpus scale

void criterion_corpus_scale() {
    const auto start = std::chrono::steady_clock::now();
    std::set<std::string> item_ids;
    size_t total = 0;
    for (int i = 0; i < 200; ++i) {
        const std::vector<TestItem> items = compose_all(make_synthetic_template(i), 2023);
        total += items.size();
        for (const TestItem& item : items) item_ids.insert(item.item_id);
    }
    require(total == 5000, "200 templates must compose to exactly 5,000 items");
    require(item_ids.size() == 5000, "all 5,000 item ids must be unique");
    require(seconds_since(start) < 10.0, "criterion must finish in under 10 s");
}

// ---- criterion 4: contingency scoring oracle

void criterion_scoring_oracle() {
    std::vector<TestItem> items;
    std::vector<EvalRecord> records;
    for (int t = 0; t < 2; ++t) {
        for (TestItem& item : compose_all(make_synthetic_template(t), 123)) {
            const ConditionSpec& spec = item.condition;
            if (spec.family != Family::initial_belief_probe) {
                const int c = (spec.condition_id - 1) / 2;
                const int p = 4 * t + c;
                EvalRecord record;
                record.item_id = item.item_id;
                record.correct = *spec.contingency == Contingency::true_belief ? p % 2 == 0
                                                                               : p % 3 != 0;
                records.push_back(std::move(record));
            }
            items.push_back(std::move(item));
        }
    }
    ScoreConfig config;
    config.n_boot = 50;
    config.seed = 7;
    const ResultsTable table = score_records(records, items, config);
    require(table.rows.size() == 36, "expected 12 cells x 3 contingency rows");
    require(table.excluded_pairs == 0, "no pairs may be excluded");

    const double tb[12] = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
    const double fb[12] = {0.5, 1, 0.5, 0.5, 1, 0.5, 0.5, 1, 0.5, 0.5, 1, 0.5};
    const double joint[12] = {0.5, 0, 0.5, 0, 1, 0, 0.5, 0, 0.5, 0, 1, 0};
    for (int c = 0; c < 12; ++c) {
        require(table.rows[static_cast<size_t>(3 * c)].accuracy == tb[c], "TB hand tally");
        require(table.rows[static_cast<size_t>(3 * c + 1)].accuracy == fb[c], "FB hand tally");
        require(table.rows[static_cast<size_t>(3 * c + 2)].accuracy == joint[c],
                "TB^FB hand tally");
    }

    // Property: joint accuracy never exceeds either marginal.
    std::vector<TestItem> prop_items;
    for (int t = 0; t < 4; ++t) {
        for (TestItem& item : compose_all(make_synthetic_template(t), 9)) {
            prop_items.push_back(std::move(item));
        }
    }
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<EvalRecord> trial_records;
        for (const TestItem& item : prop_items) {
            EvalRecord record;
            record.item_id = item.item_id;
            record.correct = (rng() & 1) != 0;
            trial_records.push_back(std::move(record));
        }
        const std::vector<ResultRow> marginal =
            accuracy_by_condition(trial_records, prop_items, config);
        for (const ResultRow& j : joint_tb_fb(trial_records, prop_items, config)) {
            for (const ResultRow& m : marginal) {
                if (m.key == j.key && m.contingency != "probe") {
                    require(j.accuracy <= m.accuracy + 1e-12,
                            "joint must not exceed a marginal accuracy");
                }
            }
        }
    }
}

// ---- criterion 5: bootstrap correctness

void criterion_bootstrap() {
    const auto start = std::chrono::steady_clock::now();

    const std::vector<int> values = {1, 0};
    const int n_boot = 3;
    const uint64_t seed = 42;
    std::mt19937_64 rng(seed);
    std::vector<double> means;
    for (int b = 0; b < n_boot; ++b) {
        long long sum = 0;
        for (size_t i = 0; i < values.size(); ++i) sum += values[rng() % values.size()];
        means.push_back(static_cast<double>(sum) / static_cast<double>(values.size()));
    }
    std::sort(means.begin(), means.end());
    const auto [low, high] = bootstrap_ci(values, n_boot, 0.95, seed);
    require(low == means[static_cast<size_t>(std::llround(0.025 * (n_boot - 1)))],
            "lower bound must match the reference resampler exactly");
    require(high == means[static_cast<size_t>(std::llround(0.975 * (n_boot - 1)))],
            "upper bound must match the reference resampler exactly");

    int covered = 0;
    for (uint64_t rep = 0; rep < 100; ++rep) {
        std::mt19937_64 draw_rng(derive_seed(1234, "coverage", rep));
        std::vector<int> draws(200);
        for (int& d : draws) d = (draw_rng() % 5) != 0 ? 1 : 0;
        const auto [lo, hi] = bootstrap_ci(draws, 1000, 0.95, derive_seed(1234, "ci", rep));
        if (lo <= 0.8 && 0.8 <= hi) ++covered;
    }
    require(covered >= 90, "95% intervals must cover p=0.8 at least 90/100 times, got " +
                               std::to_string(covered));
    require(seconds_since(start) < 30.0, "criterion must finish in under 30 s");
}

// ---- criterion 6: end-to-end determinism under mock backends

struct PipelineOutput {
    std::vector<TestItem> items;
    std::vector<EvalRecord> records;
    std::string report;
};

PipelineOutput run_mock_pipeline() {
    int counter = 0;
    ScriptedBackend generator_backend(
        "mock-generator", ModelKind::chat, [&counter](const BackendRequest& request) {
            std::vector<std::string> out;
            for (int i = 0; i < request.n; ++i) {
                out.push_back(render_template(make_synthetic_template(counter++)));
            }
            return out;
        });
    GenerationConfig gen;
    gen.model = "mock-generator";
    gen.few_shot_pool = {load_template_file(data_path("exemplars/mei.txt")),
                         load_template_file(data_path("exemplars/noor.txt")),
                         load_template_file(data_path("exemplars/naveen.txt"))};
    gen.few_shot_count = 3;
    gen.target_count = 20;
    gen.completions_per_call = 2;
    gen.seed = 31337;
    gen.parallelism = 1;
    const GenerationReport generated = populate_templates(gen, generator_backend);
    require(generated.accepted.size() == 20, "mock generation must reach its target");
    require(!generated.shortfall, "mock generation must not fall short");

    PipelineOutput output;
    for (const CausalTemplate& tpl : generated.accepted) {
        for (TestItem& item : compose_all(tpl, 31337)) output.items.push_back(std::move(item));
    }
    require(output.items.size() == 500, "20 templates must compose to 500 items");

    std::map<std::string, std::string> gold;
    for (const TestItem& item : output.items) {
        const char letter = item.correct_index == 0 ? 'a' : 'b';
        gold[item.item_id] = std::string("Answer: ") + letter + ")" +
                             item.options[static_cast<size_t>(item.correct_index)];
    }
    ScriptedBackend eval_backend("mock-gold", ModelKind::chat,
                                 [gold](const BackendRequest& request) {
                                     return std::vector<std::string>{gold.at(request.item_id)};
                                 });
    RunConfig run;
    run.concurrency = 8;
    const RunResult evaluated = run_eval(output.items, eval_backend, PromptStyle::zero_shot, run);
    output.records = evaluated.records;

    ScoreConfig score;
    score.n_boot = 500;
    score.seed = 31337;
    output.report = render_report(score_records(output.records, output.items, score),
                                  ReportFormat::markdown);
    return output;
}

void criterion_end_to_end() {
    const PipelineOutput first = run_mock_pipeline();
    const PipelineOutput second = run_mock_pipeline();
    require(first.report == second.report, "two seeded runs must render byte-identical reports");
    require(first.items == second.items, "two seeded runs must compose identical items");

    ScoreConfig score;
    score.n_boot = 500;
    score.seed = 31337;
    const ResultsTable table = score_records(first.records, first.items, score);
    require(!table.rows.empty(), "the report must have rows");
    for (const ResultRow& row : table.rows) {
        require(row.accuracy == 1.0, "gold-backend accuracy must be 1.0 in every cell");
        require(row.unparsed_rate == 0.0, "gold-backend runs must parse every answer");
    }

    // Flip the mock to always answer "a)".
    ScriptedBackend always_a("mock-always-a", ModelKind::chat, [](const BackendRequest&) {
        return std::vector<std::string>{"Answer: a)"};
    });
    const RunResult flipped = run_eval(first.items, always_a, PromptStyle::zero_shot, {});
    int correct = 0, first_option_correct = 0;
    for (size_t i = 0; i < first.items.size(); ++i) {
        if (flipped.records[i].correct) ++correct;
        if (first.items[i].correct_index == 0) ++first_option_correct;
    }
    require(correct == first_option_correct,
            "always-a accuracy must equal the count of items whose correct option is a)");
    require(first_option_correct > 0 && first_option_correct < static_cast<int>(first.items.size()),
            "the option shuffle must produce both orders");
}

// ---- criterion 7: answer extraction fixture

void criterion_extraction() {
    std::ifstream in(fixture_path("extraction_cases.jsonl"));
    require(static_cast<bool>(in), "extraction fixture must exist");
    std::string line;
    int passed = 0, total = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        ++total;
        const std::array<std::string, 2> options = {j.at("option_a").get<std::string>(),
                                                    j.at("option_b").get<std::string>()};
        const Extracted got = extract_answer(j.at("raw").get<std::string>(), options);
        if (extracted_name(got) == j.at("expected").get<std::string>()) ++passed;
    }
    require(total == 30, "fixture must hold 30 cases");
    require(passed == 30, "extraction must pass 30/30, got " + std::to_string(passed));
}

// ---- criterion 8: optional live check

void criterion_live() {
    const char* endpoint = std::getenv("BIGTOM_LIVE_ENDPOINT");
    const char* model = std::getenv("BIGTOM_LIVE_MODEL");
    if (!endpoint || !model) {
        std::cout << "criterion 8: SKIP (offline; property suites above stand in; set "
                     "BIGTOM_LIVE_ENDPOINT, BIGTOM_LIVE_MODEL and BIGTOM_LIVE_KEY_ENV to run "
                     "live)\n";
        return;
    }
    HttpBackendConfig config;
    config.identity = "live";
    config.kind = ModelKind::chat;
    config.endpoint = endpoint;
    config.model = model;
    if (const char* key_env = std::getenv("BIGTOM_LIVE_KEY_ENV")) config.credential_env = key_env;
    HttpBackend backend(config);

    std::vector<TestItem> items;
    for (int i = 0; i < 5 && items.size() < 100; ++i) {
        for (TestItem& item : compose_all(make_synthetic_template(i), 77)) {
            items.push_back(std::move(item));
        }
    }
    RunConfig run;
    run.concurrency = 4;
    const RunResult result = run_eval(items, backend, PromptStyle::zero_shot, run);
    int unparsed = 0;
    for (const EvalRecord& record : result.records) {
        if (record.extracted == Extracted::unparsed) ++unparsed;
    }
    require(unparsed * 20 < static_cast<int>(items.size()),
            "live unparsed rate must stay below 5%");
    ScoreConfig score;
    score.n_boot = 1000;
    const std::string report =
        render_report(score_records(result.records, items, score), ReportFormat::markdown);
    require(report.find("| Condition |") != std::string::npos, "live report must be well-formed");
    std::cout << "criterion 8: PASS (live run on " << items.size() << " items)\n";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"criterion 1: parser fidelity and mutation suite", criterion_parser},
        {"criterion 2: composition cardinality and golden items", criterion_golden_items},
        {"criterion 3: corpus scale (200 templates, 5,000 unique items)", criterion_corpus_scale},
        {"criterion 4: contingency scoring oracle", criterion_scoring_oracle},
        {"criterion 5: bootstrap reference equivalence and coverage", criterion_bootstrap},
        {"criterion 6: end-to-end mock determinism", criterion_end_to_end},
        {"criterion 7: answer-extraction fixture 30/30", criterion_extraction},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        try {
            check();
            std::cout << name << ": PASS\n";
        } catch (const std::exception& e) {
            std::cout << name << ": FAIL (" << e.what() << ")\n";
            ++failures;
        }
    }
    try {
        criterion_live();
    } catch (const std::exception& e) {
        std::cout << "criterion 8: FAIL (" << e.what() << ")\n";
        ++failures;
    }
    return failures == 0 ? 0 : 1;
}
