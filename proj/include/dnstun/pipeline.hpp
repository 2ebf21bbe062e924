#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dnstun/eval.hpp"
#include "dnstun/features.hpp"
#include "dnstun/forest.hpp"
#include "dnstun/synth.hpp"
#include "dnstun/window.hpp"

namespace dnstun::pipeline {

/// CLI task selectors: detect, tool, scenario, scenario-pure,
/// general-scenario. The -pure variants train without legitimate rows.
struct TaskSelector {
    TaskKind kind = TaskKind::Detection;
    bool malicious_only = false;
};

std::optional<TaskSelector> selector_parse(const std::string& name);
const std::string& selector_name(const TaskSelector& sel);
const std::vector<std::string>& all_selectors();

struct PipelineConfig {
    synth::Plan plan;
    WindowConfig window;
    TrainConfig train;
    double train_fraction = 0.8;
    std::vector<std::string> tasks = all_selectors();
    unsigned threads = 0;  ///< 0 = hardware concurrency; results identical regardless
};

struct TaskArtifacts {
    std::string selector;
    ForestModel model;
    std::vector<std::uint8_t> model_bytes;
    eval::TaskEvaluation evaluation;
};

struct PipelineResult {
    std::size_t corpus_records = 0;
    std::size_t corpus_windows = 0;
    std::map<std::string, std::size_t> windows_per_tool;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    Dataset dataset;  ///< full featurized corpus
    std::vector<TaskArtifacts> tasks;
    nlohmann::json report;
};

/// synth -> windows -> features -> stratified split -> one model and one
/// held-out evaluation per requested task. Deterministic in the plan seed
/// and training seed; the thread count changes nothing but wall time.
PipelineResult run(const PipelineConfig& cfg);

}  // namespace dnstun::pipeline
