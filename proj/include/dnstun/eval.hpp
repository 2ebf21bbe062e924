#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dnstun/forest.hpp"
#include "dnstun/record.hpp"
#include "dnstun/window.hpp"

namespace dnstun::eval {

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<std::uint64_t>> counts;  ///< rows actual, columns predicted

    std::uint64_t total() const;
};

ConfusionMatrix confusion(std::span<const std::string> actual,
                          std::span<const std::string> predicted,
                          const std::vector<std::string>& classes);

struct ClassScores {
    std::string name;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    bool flagged = false;  ///< a division by zero was resolved to 0
};

struct PrfReport {
    std::vector<ClassScores> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_f1 = 0.0;  ///< support-weighted
    double accuracy = 0.0;
    /// FP/(FP+TN) with Legitimate as the designated negative class;
    /// set only for two-class matrices containing it.
    std::optional<double> false_positive_rate;
};

PrfReport prf(const ConfusionMatrix& cm);

struct RocCurve {
    std::vector<std::pair<double, double>> points;  ///< (fpr, tpr), threshold descending
    double auc = 0.0;
};

/// Threshold sweep over the distinct scores (ties grouped), trapezoidal AUC.
RocCurve roc(const std::vector<bool>& actual_positive, std::span<const double> scores);

/// Prediction breakdown for one ground-truth (tool, action) cell.
struct ScenarioBreakdownRow {
    ToolClass tool = ToolClass::Legitimate;
    ActionClass action = ActionClass::None;
    std::uint64_t windows = 0;
    std::map<std::string, std::uint64_t> predicted;
};

/// Full evaluation of one model over labeled feature rows: confusion, PRF,
/// one-vs-rest ROC per class (binary detection gets the single malicious
/// curve), and the per-(tool, action) prediction breakdown.
struct TaskEvaluation {
    TaskKind task = TaskKind::Detection;
    bool malicious_only = false;
    ConfusionMatrix matrix;
    PrfReport scores;
    std::map<std::string, RocCurve> roc_curves;
    std::vector<ScenarioBreakdownRow> breakdown;
    std::size_t rows_evaluated = 0;
    std::size_t rows_excluded = 0;
};

TaskEvaluation evaluate_model(const ForestModel& model, const Dataset& ds);

nlohmann::json evaluation_to_json(const TaskEvaluation& ev);

/// Windows a uniform-label capture, scores it with one model, and returns
/// the fraction of windows predicted as the capture's own class for that
/// model's task. Throws EvalError(NoWindows) when the capture cannot fill a
/// single window.
struct CaptureScore {
    std::size_t windows = 0;
    std::size_t matching = 0;
    double score = 0.0;
    std::string expected_class;
};

CaptureScore per_capture_score(std::span<const DnsQueryRecord> records,
                               const ForestModel& model, const WindowConfig& wcfg);

}  // namespace dnstun::eval
