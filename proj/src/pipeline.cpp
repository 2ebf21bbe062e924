#include "dnstun/pipeline.hpp"

#include <algorithm>

#include "dnstun/error.hpp"

namespace dnstun::pipeline {

namespace {

const std::vector<std::string> kSelectorNames{
    "detect", "tool", "scenario", "scenario-pure", "general-scenario",
};

const std::vector<TaskSelector> kSelectors{
    {TaskKind::Detection, false},          {TaskKind::ToolIdentification, false},
    {TaskKind::ScenarioIdentification, false},
    {TaskKind::ScenarioIdentification, true}, {TaskKind::GeneralScenario, true},
};

}  // namespace

std::optional<TaskSelector> selector_parse(const std::string& name) {
    for (std::size_t i = 0; i < kSelectorNames.size(); ++i)
        if (kSelectorNames[i] == name) return kSelectors[i];
    return std::nullopt;
}

const std::string& selector_name(const TaskSelector& sel) {
    for (std::size_t i = 0; i < kSelectors.size(); ++i)
        if (kSelectors[i].kind == sel.kind &&
            kSelectors[i].malicious_only == sel.malicious_only)
            return kSelectorNames[i];
    throw Error("unknown task selector");
}

const std::vector<std::string>& all_selectors() { return kSelectorNames; }

PipelineResult run(const PipelineConfig& cfg) {
    PipelineResult result;

    const auto corpus = synth::gen_corpus(cfg.plan);
    result.corpus_records = corpus.size();

    WindowStats wstats;
    const auto windows = build_windows(corpus, cfg.window, &wstats);
    result.corpus_windows = windows.size();
    for (const Window& w : windows)
        if (w.label) ++result.windows_per_tool[tool_class_name(w.label->tool)];

    result.dataset = extract_all(windows, "synthetic corpus", cfg.threads);
    auto [train_ds, test_ds] =
        split_train_test(result.dataset, cfg.train_fraction, cfg.train.seed);
    result.train_rows = train_ds.rows.size();
    result.test_rows = test_ds.rows.size();

    nlohmann::json tasks_json = nlohmann::json::object();
    for (const std::string& name : cfg.tasks) {
        const auto sel = selector_parse(name);
        if (!sel) throw Error("unknown task selector: " + name);
        TrainConfig tc = cfg.train;
        tc.threads = cfg.threads;
        TaskArtifacts art;
        art.selector = name;
        art.model = train(train_ds, sel->kind, tc, sel->malicious_only);
        art.model_bytes = save_bytes(art.model);
        art.evaluation = eval::evaluate_model(art.model, test_ds);
        tasks_json[name] = eval::evaluation_to_json(art.evaluation);
        result.tasks.push_back(std::move(art));
    }

    nlohmann::json report;
    report["seed"] = cfg.plan.seed;
    report["train_seed"] = cfg.train.seed;
    report["window"] = {{"n", cfg.window.n},
                        {"min_fill", cfg.window.min_fill},
                        {"stride", cfg.window.effective_stride()}};
    report["train"] = {{"n_trees", cfg.train.n_trees},
                       {"max_depth", cfg.train.max_depth},
                       {"min_samples_leaf", cfg.train.min_samples_leaf},
                       {"features_per_split", cfg.train.features_per_split},
                       {"bootstrap", cfg.train.bootstrap},
                       {"train_fraction", cfg.train_fraction}};
    report["corpus"] = {{"records", result.corpus_records},
                        {"windows", result.corpus_windows},
                        {"windows_per_tool", result.windows_per_tool},
                        {"domains_below_min_fill", wstats.domains_below_min_fill},
                        {"train_rows", result.train_rows},
                        {"test_rows", result.test_rows}};
    report["feature_set"] = kFeatureSetVersion;
    report["tasks"] = std::move(tasks_json);
    result.report = std::move(report);
    return result;
}

}  // namespace dnstun::pipeline
