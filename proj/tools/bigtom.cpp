// bigtom: generate causal templates, compose test items, evaluate backends,
// and score results. All stores are line-delimited JSON files.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bigtom/compose.hpp"
#include "bigtom/config.hpp"
#include "bigtom/generator.hpp"
#include "bigtom/harness.hpp"
#include "bigtom/http_backend.hpp"
#include "bigtom/scoring.hpp"
#include "bigtom/synthetic.hpp"

namespace fs = std::filesystem;
using namespace bigtom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitBackendExhausted = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<CausalTemplate> load_template_pool(const std::string& path) {
    std::vector<CausalTemplate> pool;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.path().extension() == ".txt") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            ParseResult parsed = parse_template(read_file(file.string()));
            if (!parsed.ok()) {
                throw std::runtime_error(file.string() + ": " + parsed.error->detail);
            }
            pool.push_back(std::move(*parsed.tpl));
        }
        return pool;
    }
    return read_templates(path);
}

std::unique_ptr<ModelBackend> make_generation_backend(const BackendDecl& decl) {
    if (decl.transport == "mock") {
        if (decl.mode != "synthetic") {
            throw ConfigError("generation mock backend '" + decl.identity +
                              "' must use mode=synthetic");
        }
        auto counter = std::make_shared<int>(0);
        return std::make_unique<ScriptedBackend>(
            decl.identity, decl.kind, [counter](const BackendRequest& request) {
                std::vector<std::string> completions;
                for (int i = 0; i < request.n; ++i) {
                    completions.push_back(render_template(make_synthetic_template((*counter)++)));
                }
                return completions;
            });
    }
    if (!decl.credential_env.empty() && !std::getenv(decl.credential_env.c_str())) {
        throw ConfigError("credential env var " + decl.credential_env + " is not set for backend " +
                          decl.identity);
    }
    HttpBackendConfig http;
    http.identity = decl.identity;
    http.kind = decl.kind;
    http.endpoint = decl.endpoint;
    http.model = decl.model;
    http.credential_env = decl.credential_env;
    http.headers = decl.headers;
    return std::make_unique<HttpBackend>(std::move(http));
}

std::unique_ptr<ModelBackend> make_eval_backend(const BackendDecl& decl,
                                                const std::vector<TestItem>& items) {
    if (decl.transport == "mock") {
        if (decl.mode == "gold") {
            auto gold = std::make_shared<std::map<std::string, std::string>>();
            for (const TestItem& item : items) {
                const char letter = item.correct_index == 0 ? 'a' : 'b';
                (*gold)[item.item_id] = std::string("Answer: ") + letter + ")" +
                                        item.options[static_cast<size_t>(item.correct_index)];
            }
            return std::make_unique<ScriptedBackend>(
                decl.identity, decl.kind, [gold](const BackendRequest& request) {
                    auto it = gold->find(request.item_id);
                    if (it == gold->end()) {
                        throw std::runtime_error("gold mock has no item " + request.item_id);
                    }
                    return std::vector<std::string>{it->second};
                });
        }
        if (decl.mode == "always_a") {
            return std::make_unique<ScriptedBackend>(
                decl.identity, decl.kind,
                [](const BackendRequest&) { return std::vector<std::string>{"Answer: a)"}; });
        }
        throw ConfigError("eval mock backend '" + decl.identity +
                          "' must use mode=gold or mode=always_a");
    }
    if (!decl.credential_env.empty() && !std::getenv(decl.credential_env.c_str())) {
        throw ConfigError("credential env var " + decl.credential_env + " is not set for backend " +
                          decl.identity);
    }
    HttpBackendConfig http;
    http.identity = decl.identity;
    http.kind = decl.kind;
    http.endpoint = decl.endpoint;
    http.model = decl.model;
    http.credential_env = decl.credential_env;
    http.headers = decl.headers;
    return std::make_unique<HttpBackend>(std::move(http));
}

void write_rejects(const std::string& path, const std::vector<RejectedCompletion>& rejects) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const RejectedCompletion& r : rejects) {
        out << nlohmann::json{{"raw_text", r.raw_text},
                              {"kind", structure_error_kind_name(r.error.kind)},
                              {"slot", r.error.slot ? std::string(slot_key(*r.error.slot)) : ""},
                              {"detail", r.error.detail}}
                   .dump()
            << "\n";
    }
}

int cmd_generate(const PipelineConfig& config, const std::string& backend_name, int count,
                 uint64_t seed, const std::string& out_path, const std::string& few_shot_path,
                 int budget, const std::string& cache_dir) {
    const BackendDecl& decl = find_backend_decl(config, backend_name);
    auto backend = make_generation_backend(decl);

    GenerationConfig gen;
    gen.model = decl.identity;
    gen.temperature = config.generation_temperature;
    gen.completions_per_call = config.completions_per_call;
    gen.few_shot_pool = load_template_pool(few_shot_path);
    gen.few_shot_count = config.few_shot_count;
    gen.target_count = count;
    gen.seed = seed;
    gen.call_budget = budget;
    gen.cache_dir = cache_dir;
    // Scripted backends hand out completions from a counter; serialize calls
    // so runs are bit-reproducible.
    if (decl.transport == "mock") gen.parallelism = 1;

    GenerationReport report = populate_templates(gen, *backend);
    write_templates(out_path, report.accepted);
    write_rejects(out_path + ".rejects.jsonl", report.rejected);

    std::cout << "accepted " << report.accepted.size() << ", rejected " << report.rejected.size()
              << ", duplicates " << report.duplicates << ", calls " << report.calls_made
              << ", cache hits " << report.cache_hits << "\n";
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
    if (report.shortfall) {
        std::cerr << "shortfall: call budget exhausted before reaching " << count << " templates\n";
        return kExitBackendExhausted;
    }
    return kExitOk;
}

int cmd_compose(const std::string& templates_path, const std::string& out_path, uint64_t seed) {
    const std::vector<CausalTemplate> templates = read_templates(templates_path);
    std::vector<TestItem> items;
    std::set<std::string> ids;
    for (const CausalTemplate& t : templates) {
        for (TestItem& item : compose_all(t, seed)) {
            if (!ids.insert(item.item_id).second) {
                throw std::runtime_error("duplicate item_id " + item.item_id +
                                         " (duplicate template in store?)");
            }
            items.push_back(std::move(item));
        }
    }
    write_items(out_path, items);
    std::cout << "composed " << items.size() << " items from " << templates.size()
              << " templates\n";
    return kExitOk;
}

int cmd_eval(const PipelineConfig& config, const std::string& items_path,
             const std::string& backend_name, const std::string& style_name,
             const std::string& out_path, int concurrency, const std::string& cache_dir,
             int max_items) {
    auto style = prompt_style_from_name(style_name);
    if (!style) throw ConfigError("unknown prompt style '" + style_name + "'");

    std::vector<TestItem> items = read_items(items_path);
    if (max_items >= 0 && static_cast<int>(items.size()) > max_items) {
        items.resize(static_cast<size_t>(max_items));
    }

    const BackendDecl& decl = find_backend_decl(config, backend_name);
    auto backend = make_eval_backend(decl, items);

    RunConfig run;
    run.concurrency = concurrency > 0 ? concurrency : config.concurrency;
    run.cache_dir = cache_dir;

    RunResult result = run_eval(items, *backend, *style, run);
    write_records(out_path, result.records);

    int errors = 0, unparsed = 0, correct = 0;
    for (const EvalRecord& r : result.records) {
        if (!r.error.empty()) ++errors;
        if (r.extracted == Extracted::unparsed) ++unparsed;
        if (r.correct) ++correct;
    }
    std::cout << "evaluated " << result.records.size() << " items: correct " << correct
              << ", unparsed " << unparsed << ", errors " << errors << ", calls "
              << result.calls_made << ", cache hits " << result.cache_hits << "\n";
    return errors > 0 ? kExitBackendExhausted : kExitOk;
}

int cmd_score(const std::string& records_path, const std::string& items_path,
              const std::string& format_name, const std::string& out_path, int n_boot,
              double level, uint64_t seed) {
    if (format_name != "markdown" && format_name != "csv") {
        throw ConfigError("format must be markdown or csv");
    }
    const std::vector<EvalRecord> records = read_records(records_path);
    const std::vector<TestItem> items = read_items(items_path);

    ScoreConfig score;
    score.n_boot = n_boot;
    score.level = level;
    score.seed = seed;
    const ResultsTable table = score_records(records, items, score);
    const std::string report = render_report(
        table, format_name == "csv" ? ReportFormat::csv : ReportFormat::markdown);
    if (out_path.empty()) {
        std::cout << report;
    } else {
        write_file(out_path, report);
    }
    return kExitOk;
}

int cmd_review(const std::string& store_path, const std::string& decisions_path,
               const std::string& accepted_path, const std::string& rejected_path,
               const std::string& audit_path) {
    const std::vector<CausalTemplate> pending = read_templates(store_path);

    std::vector<ReviewDecision> decisions;
    std::ifstream in(decisions_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + decisions_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(decisions_path + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
        ReviewDecision d;
        d.template_id = j.at("template_id").get<std::string>();
        const std::string action = j.at("action").get<std::string>();
        if (action == "accept") {
            d.action = ReviewDecision::Action::accept;
        } else if (action == "reject") {
            d.action = ReviewDecision::Action::reject;
        } else if (action == "edit") {
            d.action = ReviewDecision::Action::edit;
            d.replacement = j.at("replacement").get<std::string>();
        } else {
            throw std::runtime_error(decisions_path + ":" + std::to_string(line_no) +
                                     ": unknown action '" + action + "'");
        }
        decisions.push_back(std::move(d));
    }

    ReviewOutcome outcome = review_templates(pending, decisions);

    write_templates(accepted_path, outcome.accepted);
    write_templates(rejected_path, outcome.rejected);
    write_templates(store_path, outcome.pending);  // refused/undecided stay pending

    std::ofstream audit(audit_path, std::ios::binary | std::ios::app);
    if (!audit) throw std::runtime_error("cannot write " + audit_path);
    for (const AuditEntry& e : outcome.audit) {
        audit << nlohmann::json{{"template_id", e.template_id},
                                {"action", e.action},
                                {"applied", e.applied},
                                {"detail", e.detail}}
                     .dump()
              << "\n";
    }
    std::cout << "accepted " << outcome.accepted.size() << ", rejected " << outcome.rejected.size()
              << ", still pending " << outcome.pending.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal-template benchmark pipeline"};
    app.require_subcommand(1);

    std::string config_path = "bigtom.json";
    app.add_option("--config", config_path, "pipeline config file");

    // generate
    auto* generate = app.add_subcommand("generate", "populate templates with a model backend");
    std::string gen_backend, gen_out, gen_few_shot = "data/exemplars", gen_cache;
    int gen_count = 1, gen_budget = 0;
    uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    generate->add_option("--backend", gen_backend, "backend identity from config")->required();
    generate->add_option("--count", gen_count, "target template count");
    generate->add_option("--seed", gen_seed, "few-shot sampling seed")
        ->each([&](const std::string&) { gen_seed_set = true; });
    generate->add_option("--out", gen_out, "template store path (default from config)");
    generate->add_option("--few-shot", gen_few_shot, "exemplar directory or template store");
    generate->add_option("--budget", gen_budget, "max backend calls (0 = default)");
    generate->add_option("--cache-dir", gen_cache, "completion cache directory");

    // compose
    auto* compose = app.add_subcommand("compose", "compose 25 test items per template");
    std::string compose_templates, compose_out;
    uint64_t compose_seed = 0;
    bool compose_seed_set = false;
    compose->add_option("--templates", compose_templates, "template store path");
    compose->add_option("--out", compose_out, "item store path");
    compose->add_option("--seed", compose_seed, "option-shuffle seed")
        ->each([&](const std::string&) { compose_seed_set = true; });

    // eval
    auto* eval = app.add_subcommand("eval", "run a backend over composed items");
    std::string eval_items, eval_backend, eval_style = "0-shot", eval_out, eval_cache;
    int eval_concurrency = 0, eval_max_items = -1;
    eval->add_option("--items", eval_items, "item store path");
    eval->add_option("--backend", eval_backend, "backend identity from config")->required();
    eval->add_option("--style", eval_style, "0-shot | 0-shot-cot | 1-shot | 1-shot-cot");
    eval->add_option("--out", eval_out, "record store path");
    eval->add_option("--concurrency", eval_concurrency, "in-flight request limit");
    eval->add_option("--cache-dir", eval_cache, "response cache directory");
    eval->add_option("--max-items", eval_max_items, "evaluate only the first N items");

    // score
    auto* score = app.add_subcommand("score", "aggregate records into a results table");
    std::string score_records, score_items, score_format = "markdown", score_out;
    int score_n_boot = 10000;
    double score_level = 0.95;
    uint64_t score_seed = 0;
    bool score_seed_set = false;
    score->add_option("--records", score_records, "record store path");
    score->add_option("--items", score_items, "item store path");
    score->add_option("--format", score_format, "markdown | csv");
    score->add_option("--out", score_out, "report path (stdout if omitted)");
    score->add_option("--n-boot", score_n_boot, "bootstrap resample count");
    score->add_option("--level", score_level, "confidence level");
    score->add_option("--seed", score_seed, "bootstrap seed")
        ->each([&](const std::string&) { score_seed_set = true; });

    // review
    auto* review = app.add_subcommand("review", "apply accept/edit/reject decisions");
    std::string review_store, review_decisions, review_accepted, review_rejected,
        review_audit = "review_audit.jsonl";
    review->add_option("--store", review_store, "pending template store")->required();
    review->add_option("--decisions", review_decisions, "decision records (jsonl)")->required();
    review->add_option("--accepted", review_accepted, "accepted output store")->required();
    review->add_option("--rejected", review_rejected, "rejected archive store")->required();
    review->add_option("--audit", review_audit, "audit log (appended)");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig config;
        if (fs::exists(config_path)) {
            config = load_config(config_path);
        } else if (app.count("--config") > 0) {
            throw ConfigError("config file not found: " + config_path);
        }

        // All stage randomness derives from the config's global seed unless
        // overridden per subcommand.
        if (generate->parsed()) {
            if (!gen_seed_set) gen_seed = derive_seed(config.seed, "generate");
            if (gen_out.empty()) gen_out = config.templates_path;
            if (gen_cache.empty() && !config.cache_dir.empty()) {
                gen_cache = config.cache_dir + "/generate";
            }
            return cmd_generate(config, gen_backend, gen_count, gen_seed, gen_out, gen_few_shot,
                                gen_budget, gen_cache);
        }
        if (compose->parsed()) {
            if (!compose_seed_set) compose_seed = derive_seed(config.seed, "compose");
            if (compose_templates.empty()) compose_templates = config.templates_path;
            if (compose_out.empty()) compose_out = config.items_path;
            return cmd_compose(compose_templates, compose_out, compose_seed);
        }
        if (eval->parsed()) {
            if (eval_items.empty()) eval_items = config.items_path;
            if (eval_out.empty()) eval_out = config.records_path;
            if (eval_cache.empty() && !config.cache_dir.empty()) {
                eval_cache = config.cache_dir + "/eval";
            }
            return cmd_eval(config, eval_items, eval_backend, eval_style, eval_out,
                            eval_concurrency, eval_cache, eval_max_items);
        }
        if (score->parsed()) {
            if (score_records.empty()) score_records = config.records_path;
            if (score_items.empty()) score_items = config.items_path;
            if (!score_seed_set) score_seed = derive_seed(config.seed, "score");
            return cmd_score(score_records, score_items, score_format, score_out, score_n_boot,
                             score_level, score_seed);
        }
        if (review->parsed()) {
            return cmd_review(review_store, review_decisions, review_accepted, review_rejected,
                              review_audit);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return e.retryable ? kExitBackendExhausted : kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}
