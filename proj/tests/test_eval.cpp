#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dnstun/error.hpp"
#include "dnstun/eval.hpp"
#include "dnstun/rng.hpp"
#include "dnstun/synth.hpp"

using namespace dnstun;
using namespace dnstun::eval;

TEST_CASE("confusion matrix counts actual rows against predicted columns") {
    const std::vector<std::string> classes{"A", "B"};
    {
        const std::vector<std::string> actual{"A", "A", "B", "B"};
        const std::vector<std::string> predicted{"A", "A", "B", "B"};
        const auto cm = confusion(actual, predicted, classes);
        CHECK(cm.counts[0][0] == 2);
        CHECK(cm.counts[1][1] == 2);
        CHECK(cm.counts[0][1] == 0);
        CHECK(cm.counts[1][0] == 0);
    }
    {
        const std::vector<std::string> actual{"A"};
        const std::vector<std::string> predicted{"B"};
        const auto cm = confusion(actual, predicted, classes);
        CHECK(cm.counts[0][1] == 1);
        CHECK(cm.total() == 1);
    }
    const std::vector<std::string> short_actual{"A"};
    const std::vector<std::string> longer_pred{"A", "B"};
    CHECK_THROWS_AS(confusion(short_actual, longer_pred, classes), EvalError);
    const std::vector<std::string> unknown{"C"};
    const std::vector<std::string> known{"A"};
    CHECK_THROWS_AS(confusion(unknown, known, classes), EvalError);
}

TEST_CASE("published detection matrix reproduces the published aggregates") {
    // actual Malicious: 5201 predicted malicious, 259 predicted legitimate
    // actual Legitimate: 38 predicted malicious, 3145 predicted legitimate
    ConfusionMatrix cm;
    cm.classes = {"Malicious", "Legitimate"};
    cm.counts = {{5201, 259}, {38, 3145}};
    const auto rep = prf(cm);

    // the two class F1 values, 0.955 and 0.972 (order not asserted)
    std::vector<double> f1s{rep.per_class[0].f1, rep.per_class[1].f1};
    std::sort(f1s.begin(), f1s.end());
    CHECK(f1s[0] == doctest::Approx(0.955).epsilon(5e-3));
    CHECK(f1s[1] == doctest::Approx(0.972).epsilon(5e-3));

    // overall 0.966, macro precision 0.958, macro recall 0.970, FPR 1.2%
    CHECK(rep.weighted_f1 == doctest::Approx(0.966).epsilon(5e-3));
    CHECK(rep.macro_precision == doctest::Approx(0.958).epsilon(5e-3));
    CHECK(rep.macro_recall == doctest::Approx(0.970).epsilon(5e-3));
    REQUIRE(rep.false_positive_rate.has_value());
    CHECK(*rep.false_positive_rate == doctest::Approx(38.0 / (38.0 + 3145.0)));
    CHECK(*rep.false_positive_rate == doctest::Approx(0.012).epsilon(1e-1));
}

TEST_CASE("perfect and degenerate predictions") {
    ConfusionMatrix perfect;
    perfect.classes = {"Legitimate", "Malicious"};
    perfect.counts = {{50, 0}, {0, 70}};
    const auto rep = prf(perfect);
    CHECK(rep.macro_f1 == 1.0);
    CHECK(rep.weighted_f1 == 1.0);
    CHECK(rep.accuracy == 1.0);
    CHECK(*rep.false_positive_rate == 0.0);

    // everything predicted as one class: flagged zeros, no crash
    ConfusionMatrix degenerate;
    degenerate.classes = {"Legitimate", "Malicious"};
    degenerate.counts = {{50, 0}, {70, 0}};
    const auto drep = prf(degenerate);
    CHECK(drep.per_class[1].f1 == 0.0);
    CHECK(drep.per_class[1].flagged);
}

TEST_CASE("prf equals brute-force recomputation from raw pairs") {
    Rng rng(17);
    const std::vector<std::string> classes{"a", "b", "c"};
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<std::string> actual, predicted;
        const std::size_t n = 5 + rng.uniform_index(60);
        for (std::size_t i = 0; i < n; ++i) {
            actual.push_back(classes[rng.uniform_index(3)]);
            predicted.push_back(classes[rng.uniform_index(3)]);
        }
        const auto rep = prf(confusion(actual, predicted, classes));
        for (std::size_t c = 0; c < classes.size(); ++c) {
            std::size_t tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (actual[i] == classes[c] && predicted[i] == classes[c]) ++tp;
                if (actual[i] != classes[c] && predicted[i] == classes[c]) ++fp;
                if (actual[i] == classes[c] && predicted[i] != classes[c]) ++fn;
            }
            const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
            const double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
            CHECK(rep.per_class[c].precision == doctest::Approx(p));
            CHECK(rep.per_class[c].recall == doctest::Approx(r));
        }
    }
}

TEST_CASE("roc endpoints, known case, and errors") {
    {
        // perfectly separated
        const std::vector<bool> actual{true, true, false, false};
        const std::vector<double> scores{0.9, 0.8, 0.2, 0.1};
        const auto curve = roc(actual, scores);
        CHECK(curve.auc == doctest::Approx(1.0));
        CHECK(curve.points.front() == std::pair{0.0, 0.0});
        CHECK(curve.points.back() == std::pair{1.0, 1.0});
    }
    {
        // scores carry no information
        const std::vector<bool> actual{true, false, true, false};
        const std::vector<double> scores{0.5, 0.5, 0.5, 0.5};
        CHECK(roc(actual, scores).auc == doctest::Approx(0.5));
    }
    {
        // 3 concordant of 4 pos/neg pairs -> AUC 0.75
        const std::vector<bool> actual{true, true, false, false};
        const std::vector<double> scores{0.9, 0.4, 0.6, 0.2};
        CHECK(roc(actual, scores).auc == doctest::Approx(0.75));
    }
    const std::vector<bool> single{true, true};
    const std::vector<double> s2{0.1, 0.9};
    CHECK_THROWS_AS(roc(single, s2), EvalError);
}

TEST_CASE("roc curve is monotone and auc equals the mann-whitney statistic") {
    Rng rng(23);
    for (int iter = 0; iter < 40; ++iter) {
        const std::size_t n = 10 + rng.uniform_index(190);
        std::vector<bool> actual;
        std::vector<double> scores;
        bool any_pos = false, any_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool pos = rng.uniform01() < 0.4;
            actual.push_back(pos);
            (pos ? any_pos : any_neg) = true;
            // coarse grid forces plenty of score ties
            scores.push_back(rng.uniform_index(8) / 8.0 + (pos ? 0.05 : 0.0));
        }
        if (!any_pos || !any_neg) continue;
        const auto curve = roc(actual, scores);
        for (std::size_t k = 1; k < curve.points.size(); ++k) {
            CHECK(curve.points[k].first >= curve.points[k - 1].first);
            CHECK(curve.points[k].second >= curve.points[k - 1].second);
        }
        // Mann-Whitney: concordant pairs + half ties
        double concordant = 0, pairs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!actual[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (actual[j]) continue;
                pairs += 1;
                if (scores[i] > scores[j])
                    concordant += 1;
                else if (scores[i] == scores[j])
                    concordant += 0.5;
            }
        }
        CHECK(curve.auc == doctest::Approx(concordant / pairs).epsilon(1e-9));
    }
}

TEST_CASE("confusion matrix row sums equal actual class counts") {
    Rng rng(29);
    const std::vector<std::string> classes{"x", "y", "z"};
    std::vector<std::string> actual, predicted;
    std::map<std::string, std::uint64_t> expected;
    for (int i = 0; i < 200; ++i) {
        actual.push_back(classes[rng.uniform_index(3)]);
        predicted.push_back(classes[rng.uniform_index(3)]);
        ++expected[actual.back()];
    }
    const auto cm = confusion(actual, predicted, classes);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::uint64_t row = 0;
        for (std::uint64_t v : cm.counts[c]) row += v;
        CHECK(row == expected[classes[c]]);
    }
}

TEST_CASE("per-capture scoring follows the fraction of matching windows") {
    // capture of one tool, scored by a detection model trained elsewhere
    synth::SynthProfile p;
    p.tool = ToolClass::Symbiote;
    p.scenario = synth::Scenario::Upload;
    p.seed = 77;
    p.payload_bytes = 1500;
    const auto records = synth::generate(p);

    // stub model: one tree, single pure Malicious leaf
    ForestModel model;
    model.task = TaskKind::Detection;
    model.classes = {"Legitimate", "Malicious"};
    TreeNode leaf;
    leaf.class_counts = {0, 5};
    model.trees.push_back({leaf});

    const auto cs = per_capture_score(records, model, {});
    CHECK(cs.windows > 0);
    CHECK(cs.score == 1.0);  // everything predicted malicious, capture is malicious
    CHECK(cs.expected_class == "Malicious");

    // a capture too small to window
    std::vector<DnsQueryRecord> tiny(records.begin(), records.begin() + 2);
    CHECK_THROWS_AS(per_capture_score(tiny, model, {}), EvalError);

    // half-matching stub: legitimate-leaning leaf makes the score 0
    ForestModel neg;
    neg.task = TaskKind::Detection;
    neg.classes = {"Legitimate", "Malicious"};
    TreeNode lleaf;
    lleaf.class_counts = {5, 0};
    neg.trees.push_back({lleaf});
    CHECK(per_capture_score(records, neg, {}).score == 0.0);
}
