#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dnstun/features.hpp"

namespace dnstun {

enum class TaskKind : std::uint8_t {
    Detection = 0,            ///< Legitimate vs Malicious
    ToolIdentification,       ///< which tool produced the window
    ScenarioIdentification,   ///< tool-qualified action (optionally with Legitimate)
    GeneralScenario,          ///< action only, tools mixed, malicious windows only
};

const std::string& task_name(TaskKind t);
std::optional<TaskKind> task_parse(const std::string& name);

/// Maps a dataset row to its class name for a task. Rows the task excludes
/// (handshake windows for the scenario tasks, legitimate windows for
/// malicious-only variants) map to nullopt.
std::optional<std::string> task_label(const Label& label, TaskKind task,
                                      bool malicious_only);

/// Ordered class list for a task over the classes present in a dataset.
/// Order is canonical (Legitimate first, then tool enum order, then action
/// enum order) so identical datasets give identical class tables.
std::vector<std::string> task_classes(const Dataset& ds, TaskKind task,
                                      bool malicious_only);

struct TrainConfig {
    std::uint32_t n_trees = 100;
    std::uint32_t max_depth = 0;  ///< 0 = unlimited
    std::uint32_t min_samples_leaf = 1;
    std::uint32_t features_per_split = 3;  ///< ceil(sqrt(7))
    bool bootstrap = true;
    std::uint64_t seed = 0;
    unsigned threads = 0;  ///< 0 = hardware concurrency; never affects results
};

/// One tree node. Leaves hold per-class sample counts; split nodes hold a
/// feature/threshold test with children at indices into the tree's node
/// array ("go left" means value <= threshold).
struct TreeNode {
    std::int16_t feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::vector<std::uint32_t> class_counts;  ///< leaves only

    bool is_leaf() const { return feature < 0; }
};

struct ForestModel {
    TaskKind task = TaskKind::Detection;
    std::vector<std::string> classes;
    TrainConfig hyperparams;
    std::string feature_set_version = kFeatureSetVersion;
    std::vector<std::vector<TreeNode>> trees;  ///< each in preorder, root at 0
};

/// Grows hyperparams.n_trees CART trees on bootstrap samples, Gini split
/// criterion, candidate thresholds at midpoints of consecutive distinct
/// values, feature subsampling per node. Fully deterministic given the seed;
/// tree t draws from a generator seeded with seed + t, so any parallelism
/// degree yields the identical model.
ForestModel train(const Dataset& ds, TaskKind task, const TrainConfig& cfg,
                  bool malicious_only = false);

/// Average over trees of normalized leaf class counts; sums to 1.
std::vector<double> predict_proba(const ForestModel& model,
                                  const std::array<double, metrics::kMetricCount>& values);

/// Argmax of predict_proba; ties go to the lowest class index.
const std::string& predict(const ForestModel& model,
                           const std::array<double, metrics::kMetricCount>& values);

/// Model file format (.dmf): one plain-text header line
///   DMF <version> task=<t> feature_set=<v> classes=<a,b,..> <hyperparams>
/// followed by a little-endian binary body holding every tree in preorder.
void save(const ForestModel& model, std::ostream& out);
std::vector<std::uint8_t> save_bytes(const ForestModel& model);
ForestModel load(std::istream& in);
ForestModel load_bytes(const std::vector<std::uint8_t>& bytes);

}  // namespace dnstun
