#include "dnstun/eval.hpp"

#include <algorithm>
#include <cmath>

#include "dnstun/error.hpp"
#include "dnstun/features.hpp"

namespace dnstun::eval {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (std::uint64_t c : row) t += c;
    return t;
}

ConfusionMatrix confusion(std::span<const std::string> actual,
                          std::span<const std::string> predicted,
                          const std::vector<std::string>& classes) {
    if (actual.size() != predicted.size())
        throw EvalError(EvalError::Kind::LengthMismatch,
                        "actual and predicted lengths differ");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;

    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(classes.size(), std::vector<std::uint64_t>(classes.size(), 0));
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const auto a = index.find(actual[i]);
        const auto p = index.find(predicted[i]);
        if (a == index.end())
            throw EvalError(EvalError::Kind::UnknownLabel, "unknown label " + actual[i]);
        if (p == index.end())
            throw EvalError(EvalError::Kind::UnknownLabel, "unknown label " + predicted[i]);
        ++cm.counts[a->second][p->second];
    }
    return cm;
}

PrfReport prf(const ConfusionMatrix& cm) {
    const std::size_t n = cm.classes.size();
    if (n == 0) throw EvalError(EvalError::Kind::LengthMismatch, "empty matrix");

    PrfReport rep;
    std::uint64_t correct = 0, total = 0, weighted_support = 0;
    double weighted_f1_sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        ClassScores s;
        s.name = cm.classes[c];
        std::uint64_t tp = cm.counts[c][c];
        std::uint64_t fp = 0, fn = 0;
        for (std::size_t o = 0; o < n; ++o) {
            if (o == c) continue;
            fp += cm.counts[o][c];
            fn += cm.counts[c][o];
        }
        s.support = tp + fn;
        if (tp + fp == 0) {
            s.precision = 0.0;
            s.flagged = true;
        } else {
            s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (s.support == 0) {
            s.recall = 0.0;
            s.flagged = true;
        } else {
            s.recall = static_cast<double>(tp) / static_cast<double>(s.support);
        }
        if (s.precision + s.recall == 0.0) {
            s.f1 = 0.0;
            s.flagged = true;
        } else {
            s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
        }
        rep.macro_precision += s.precision;
        rep.macro_recall += s.recall;
        rep.macro_f1 += s.f1;
        weighted_f1_sum += s.f1 * static_cast<double>(s.support);
        weighted_support += s.support;
        correct += tp;
        rep.per_class.push_back(std::move(s));
    }
    total = cm.total();
    rep.macro_precision /= static_cast<double>(n);
    rep.macro_recall /= static_cast<double>(n);
    rep.macro_f1 /= static_cast<double>(n);
    rep.weighted_f1 =
        weighted_support ? weighted_f1_sum / static_cast<double>(weighted_support) : 0.0;
    rep.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;

    if (n == 2) {
        const auto neg = std::find(cm.classes.begin(), cm.classes.end(), "Legitimate");
        if (neg != cm.classes.end()) {
            const std::size_t ni = static_cast<std::size_t>(neg - cm.classes.begin());
            const std::size_t pi = 1 - ni;
            const std::uint64_t fp = cm.counts[ni][pi];
            const std::uint64_t tn = cm.counts[ni][ni];
            rep.false_positive_rate =
                fp + tn ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
        }
    }
    return rep;
}

RocCurve roc(const std::vector<bool>& actual_positive, std::span<const double> scores) {
    if (actual_positive.size() != scores.size())
        throw EvalError(EvalError::Kind::LengthMismatch, "labels and scores differ");
    std::uint64_t pos = 0, neg = 0;
    for (bool a : actual_positive) (a ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw EvalError(EvalError::Kind::SingleClass, "need both classes for a ROC curve");

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            if (actual_positive[order[i]])
                ++tp;
            else
                ++fp;
            ++i;
        }
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                                  static_cast<double>(tp) / static_cast<double>(pos));
    }
    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& [x0, y0] = curve.points[k - 1];
        const auto& [x1, y1] = curve.points[k];
        auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

TaskEvaluation evaluate_model(const ForestModel& model, const Dataset& ds) {
    TaskEvaluation ev;
    ev.task = model.task;
    ev.malicious_only =
        std::find(model.classes.begin(), model.classes.end(), "Legitimate") ==
        model.classes.end() &&
        model.task != TaskKind::Detection;

    std::vector<std::string> actual, predicted;
    std::vector<std::vector<double>> probas;
    std::map<std::pair<ToolClass, ActionClass>, ScenarioBreakdownRow> breakdown;

    for (const FeatureVector& row : ds.rows) {
        if (!row.label)
            throw EvalError(EvalError::Kind::UnknownLabel, "unlabeled row in evaluation");
        const auto cls = task_label(*row.label, model.task, ev.malicious_only);
        if (!cls) {
            ++ev.rows_excluded;
            continue;
        }
        if (std::find(model.classes.begin(), model.classes.end(), *cls) ==
            model.classes.end())
            throw EvalError(EvalError::Kind::UnknownLabel,
                            "dataset class " + *cls + " unknown to the model");
        auto proba = predict_proba(model, row.values);
        std::size_t best = 0;
        for (std::size_t i = 1; i < proba.size(); ++i)
            if (proba[i] > proba[best]) best = i;
        actual.push_back(*cls);
        predicted.push_back(model.classes[best]);
        probas.push_back(std::move(proba));

        auto& cell = breakdown[{row.label->tool, row.label->action}];
        cell.tool = row.label->tool;
        cell.action = row.label->action;
        ++cell.windows;
        ++cell.predicted[model.classes[best]];
        ++ev.rows_evaluated;
    }
    if (actual.empty())
        throw EvalError(EvalError::Kind::UnknownLabel, "no evaluable rows for task");

    ev.matrix = confusion(actual, predicted, model.classes);
    ev.scores = prf(ev.matrix);

    // one-vs-rest ROC per class; for detection only the malicious curve
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        const std::string& cls = model.classes[c];
        if (model.task == TaskKind::Detection && cls != "Malicious") continue;
        std::vector<bool> is_pos(actual.size());
        std::vector<double> score(actual.size());
        bool any_pos = false, any_neg = false;
        for (std::size_t i = 0; i < actual.size(); ++i) {
            is_pos[i] = actual[i] == cls;
            (is_pos[i] ? any_pos : any_neg) = true;
            score[i] = probas[i][c];
        }
        if (any_pos && any_neg)
            ev.roc_curves[cls] = roc(is_pos, score);
    }

    for (auto& [key, row] : breakdown) ev.breakdown.push_back(std::move(row));
    return ev;
}

nlohmann::json evaluation_to_json(const TaskEvaluation& ev) {
    nlohmann::json j;
    j["task"] = task_name(ev.task);
    j["malicious_only"] = ev.malicious_only;
    j["rows_evaluated"] = ev.rows_evaluated;
    j["rows_excluded"] = ev.rows_excluded;
    j["classes"] = ev.matrix.classes;
    j["matrix"] = ev.matrix.counts;
    nlohmann::json pc = nlohmann::json::object();
    for (const ClassScores& s : ev.scores.per_class) {
        pc[s.name] = {{"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1},
                      {"support", s.support},
                      {"flagged", s.flagged}};
    }
    j["per_class"] = pc;
    j["macro"] = {{"precision", ev.scores.macro_precision},
                  {"recall", ev.scores.macro_recall},
                  {"f1", ev.scores.macro_f1}};
    j["weighted_f1"] = ev.scores.weighted_f1;
    j["accuracy"] = ev.scores.accuracy;
    if (ev.scores.false_positive_rate)
        j["false_positive_rate"] = *ev.scores.false_positive_rate;
    nlohmann::json rocs = nlohmann::json::object();
    for (const auto& [cls, curve] : ev.roc_curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& [fpr, tpr] : curve.points) pts.push_back({fpr, tpr});
        rocs[cls] = {{"auc", curve.auc}, {"points", pts}};
    }
    j["roc"] = rocs;
    nlohmann::json bd = nlohmann::json::array();
    for (const ScenarioBreakdownRow& row : ev.breakdown) {
        nlohmann::json rj;
        rj["tool"] = tool_class_name(row.tool);
        rj["action"] = action_class_name(row.action);
        rj["windows"] = row.windows;
        rj["predicted"] = row.predicted;
        bd.push_back(std::move(rj));
    }
    j["breakdown"] = bd;
    return j;
}

CaptureScore per_capture_score(std::span<const DnsQueryRecord> records,
                               const ForestModel& model, const WindowConfig& wcfg) {
    const auto windows = build_windows(records, wcfg);
    if (windows.empty())
        throw EvalError(EvalError::Kind::NoWindows,
                        "capture produced no windows (below the minimum fill)");

    CaptureScore cs;
    for (const Window& w : windows) {
        const Label label = label_of(w);
        // malicious-only models score the capture against their class view
        const bool malicious_only =
            std::find(model.classes.begin(), model.classes.end(), "Legitimate") ==
            model.classes.end() &&
            model.task != TaskKind::Detection;
        const auto expected = task_label(label, model.task, malicious_only);
        if (!expected) continue;
        cs.expected_class = *expected;
        const FeatureVector fv = extract(w);
        ++cs.windows;
        if (predict(model, fv.values) == *expected) ++cs.matching;
    }
    if (cs.windows == 0)
        throw EvalError(EvalError::Kind::NoWindows,
                        "no windows usable for the model's task");
    cs.score = static_cast<double>(cs.matching) / static_cast<double>(cs.windows);
    return cs;
}

}  // namespace dnstun::eval
