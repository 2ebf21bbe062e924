#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dnstun/error.hpp"
#include "dnstun/forest.hpp"
#include "dnstun/rng.hpp"
#include "oracles.hpp"

using namespace dnstun;

namespace {

FeatureVector row(std::array<double, 7> values, ToolClass tool,
                  ActionClass action = ActionClass::Upload) {
    FeatureVector fv;
    fv.values = values;
    fv.member_count = 5;
    fv.label = Label{tool, action};
    return fv;
}

Dataset separable_dataset(double a_val, double b_val, int per_class, std::uint64_t seed) {
    Dataset ds;
    Rng rng(seed);
    for (int i = 0; i < per_class; ++i) {
        std::array<double, 7> va{}, vb{};
        for (int k = 0; k < 7; ++k) {
            va[k] = rng.uniform01();
            vb[k] = rng.uniform01();
        }
        va[0] = a_val + 0.02 * rng.uniform01();
        vb[0] = b_val + 0.02 * rng.uniform01();
        ds.rows.push_back(row(va, ToolClass::Legitimate, ActionClass::None));
        ds.rows.push_back(row(vb, ToolClass::Iodine));
    }
    return ds;
}

}  // namespace

TEST_CASE("task labels and exclusions") {
    const Label legit{ToolClass::Legitimate, ActionClass::None};
    const Label saitama_up{ToolClass::Saitama, ActionClass::Upload};
    const Label iodine_hs{ToolClass::Iodine, ActionClass::Handshake};

    CHECK(*task_label(legit, TaskKind::Detection, false) == "Legitimate");
    CHECK(*task_label(saitama_up, TaskKind::Detection, false) == "Malicious");
    CHECK(*task_label(saitama_up, TaskKind::ToolIdentification, false) == "Saitama");
    CHECK(*task_label(saitama_up, TaskKind::ScenarioIdentification, false) ==
          "Saitama/Upload");
    CHECK(!task_label(iodine_hs, TaskKind::ScenarioIdentification, false).has_value());
    CHECK(!task_label(legit, TaskKind::ScenarioIdentification, true).has_value());
    CHECK(*task_label(legit, TaskKind::ScenarioIdentification, false) == "Legitimate");
    CHECK(*task_label(saitama_up, TaskKind::GeneralScenario, true) == "Upload");
    CHECK(!task_label(legit, TaskKind::GeneralScenario, true).has_value());
}

TEST_CASE("linearly separable classes reach perfect training accuracy") {
    const auto ds = separable_dataset(0.1, 0.9, 20, 5);
    TrainConfig cfg;
    cfg.n_trees = 20;
    const auto model = train(ds, TaskKind::Detection, cfg);
    for (const auto& r : ds.rows) {
        const auto expected = *task_label(*r.label, TaskKind::Detection, false);
        CHECK(predict(model, r.values) == expected);
    }
}

TEST_CASE("same dataset and seed give a byte-identical model") {
    const auto ds = separable_dataset(0.2, 0.7, 15, 6);
    TrainConfig cfg;
    cfg.n_trees = 12;
    cfg.seed = 77;
    const auto m1 = train(ds, TaskKind::Detection, cfg);
    const auto m2 = train(ds, TaskKind::Detection, cfg);
    CHECK(save_bytes(m1) == save_bytes(m2));

    cfg.threads = 1;
    const auto serial = train(ds, TaskKind::Detection, cfg);
    cfg.threads = 4;
    const auto parallel = train(ds, TaskKind::Detection, cfg);
    CHECK(save_bytes(serial) == save_bytes(parallel));
    CHECK(save_bytes(serial) == save_bytes(m1));
}

TEST_CASE("minimal two-row dataset trains depth-1 trees") {
    Dataset ds;
    ds.rows.push_back(row({0.1, 0, 0, 0, 0, 0, 0}, ToolClass::Legitimate,
                          ActionClass::None));
    ds.rows.push_back(row({0.9, 0, 0, 0, 0, 0, 0}, ToolClass::Iodine));
    TrainConfig cfg;
    cfg.n_trees = 10;
    const auto model = train(ds, TaskKind::Detection, cfg);
    REQUIRE(model.trees.size() == 10);
    for (const auto& tree : model.trees) {
        // a bootstrap draw may see one class (single leaf) or both (one split)
        CHECK(tree.size() <= 3);
    }
}

TEST_CASE("training errors: empty, single class, unlabeled") {
    Dataset empty;
    CHECK_THROWS_AS(train(empty, TaskKind::Detection, {}), TrainError);

    Dataset single;
    for (int i = 0; i < 5; ++i)
        single.rows.push_back(row({0.5, 0, 0, 0, 0, 0, 0}, ToolClass::Iodine));
    CHECK_THROWS_AS(train(single, TaskKind::Detection, {}), TrainError);

    Dataset unlabeled = single;
    unlabeled.rows.emplace_back();
    CHECK_THROWS_AS(train(unlabeled, TaskKind::Detection, {}), TrainError);
}

TEST_CASE("predict_proba: stub trees average and sum to one") {
    ForestModel model;
    model.task = TaskKind::Detection;
    model.classes = {"Legitimate", "Malicious"};
    // one pure leaf per tree, voting different ways
    TreeNode leaf_a;
    leaf_a.class_counts = {4, 0};
    TreeNode leaf_b;
    leaf_b.class_counts = {0, 9};
    model.trees.push_back({leaf_a});
    model.trees.push_back({leaf_b});

    const std::array<double, 7> x{0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    const auto proba = predict_proba(model, x);
    CHECK(proba[0] == doctest::Approx(0.5));
    CHECK(proba[1] == doctest::Approx(0.5));
    // argmax tie resolves to the lowest class index
    CHECK(predict(model, x) == "Legitimate");

    model.trees.pop_back();
    const auto pure = predict_proba(model, x);
    CHECK(pure[0] == 1.0);

    Rng rng(31);
    model.trees.push_back({leaf_b});
    for (int iter = 0; iter < 100; ++iter) {
        std::array<double, 7> v{};
        for (auto& t : v) t = rng.uniform01();
        const auto p = predict_proba(model, v);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    }

    ForestModel hollow;
    hollow.classes = {"a", "b"};
    CHECK_THROWS_AS(predict_proba(hollow, x), Error);
}

TEST_CASE("monotone single-feature datasets are learned for every feature") {
    Rng rng(99);
    for (int feature = 0; feature < 7; ++feature) {
        for (double cut : {0.3, 0.5, 0.7}) {
            Dataset ds;
            for (int i = 0; i < 1000; ++i) {
                std::array<double, 7> v{};
                for (auto& t : v) t = rng.uniform01();
                const bool positive = v[feature] > cut;
                ds.rows.push_back(row(v, positive ? ToolClass::Iodine
                                                  : ToolClass::Legitimate,
                                      positive ? ActionClass::Upload
                                               : ActionClass::None));
            }
            auto [train_ds, test_ds] = split_train_test(ds, 0.8, 17);
            TrainConfig cfg;
            cfg.n_trees = 50;
            cfg.seed = 23;
            const auto model = train(train_ds, TaskKind::Detection, cfg);
            int correct = 0;
            for (const auto& r : test_ds.rows)
                if (predict(model, r.values) ==
                    *task_label(*r.label, TaskKind::Detection, false))
                    ++correct;
            const double acc =
                static_cast<double>(correct) / static_cast<double>(test_ds.rows.size());
            CAPTURE(feature);
            CAPTURE(cut);
            CHECK(acc >= 0.99);
        }
    }
}

TEST_CASE("gini impurity equals brute-force recount") {
    // the library optimizes sum(c^2)/n; convert and compare against the
    // direct 1 - sum p^2 on random label sets
    Rng rng(55);
    for (int iter = 0; iter < 200; ++iter) {
        const int n_classes = 2 + static_cast<int>(rng.uniform_index(4));
        const std::size_t n = 1 + rng.uniform_index(30);
        std::vector<int> labels;
        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = static_cast<int>(rng.uniform_index(n_classes));
            labels.push_back(c);
            ++counts[c];
        }
        double sum_sq = 0.0;
        for (std::size_t c : counts) sum_sq += static_cast<double>(c) * c;
        const double gini_from_score = 1.0 - sum_sq / (static_cast<double>(n) * n);
        CHECK(gini_from_score ==
              doctest::Approx(oracles::gini_brute(labels, n_classes)).epsilon(1e-12));
    }
}

TEST_CASE("chosen splits match exhaustive search on small nodes") {
    // single-tree forest over all 7 features with no bootstrap: the root
    // split must reach the impurity optimum found by exhaustive search
    Rng rng(77);
    for (int iter = 0; iter < 40; ++iter) {
        Dataset ds;
        const std::size_t n = 6 + rng.uniform_index(15);
        for (std::size_t i = 0; i < n; ++i) {
            std::array<double, 7> v{};
            for (auto& t : v) t = rng.uniform01();
            ds.rows.push_back(row(v, rng.uniform01() < 0.5 ? ToolClass::Legitimate
                                                           : ToolClass::Iodine,
                                  rng.uniform01() < 0.5 ? ActionClass::None
                                                        : ActionClass::Upload));
        }
        std::vector<int> cls;
        for (const auto& r : ds.rows)
            cls.push_back(r.label->tool == ToolClass::Legitimate ? 0 : 1);
        if (std::count(cls.begin(), cls.end(), 0) == 0 ||
            std::count(cls.begin(), cls.end(), 1) == 0)
            continue;

        TrainConfig cfg;
        cfg.n_trees = 1;
        cfg.max_depth = 1;
        cfg.features_per_split = 7;
        cfg.bootstrap = false;
        const auto model = train(ds, TaskKind::Detection, cfg);
        const auto& tree = model.trees[0];

        // exhaustive: weighted gini over every feature and midpoint
        double best = 2.0;
        for (int f = 0; f < 7; ++f) {
            std::vector<double> vals;
            for (const auto& r : ds.rows) vals.push_back(r.values[f]);
            auto sorted = vals;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                if (sorted[i] == sorted[i + 1]) continue;
                const double thr = (sorted[i] + sorted[i + 1]) / 2.0;
                std::vector<int> left, right;
                for (std::size_t r = 0; r < ds.rows.size(); ++r)
                    (ds.rows[r].values[f] <= thr ? left : right).push_back(cls[r]);
                const double w =
                    (oracles::gini_brute(left, 2) * left.size() +
                     oracles::gini_brute(right, 2) * right.size()) /
                    static_cast<double>(ds.rows.size());
                best = std::min(best, w);
            }
        }
        if (tree[0].is_leaf()) continue;  // no split could improve impurity
        std::vector<int> left, right;
        for (std::size_t r = 0; r < ds.rows.size(); ++r)
            (ds.rows[r].values[tree[0].feature] <= tree[0].threshold ? left : right)
                .push_back(cls[r]);
        const double achieved =
            (oracles::gini_brute(left, 2) * left.size() +
             oracles::gini_brute(right, 2) * right.size()) /
            static_cast<double>(ds.rows.size());
        CHECK(achieved == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("save/load round trip preserves predictions") {
    const auto ds = separable_dataset(0.15, 0.8, 25, 8);
    TrainConfig cfg;
    cfg.n_trees = 25;
    cfg.seed = 5;
    const auto model = train(ds, TaskKind::Detection, cfg);
    const auto bytes = save_bytes(model);
    const auto back = load_bytes(bytes);

    CHECK(back.task == model.task);
    CHECK(back.classes == model.classes);
    CHECK(back.feature_set_version == model.feature_set_version);
    CHECK(back.hyperparams.n_trees == cfg.n_trees);
    CHECK(back.hyperparams.seed == cfg.seed);

    Rng rng(66);
    for (int i = 0; i < 1000; ++i) {
        std::array<double, 7> v{};
        for (auto& t : v) t = rng.uniform01();
        CHECK(predict_proba(back, v) == predict_proba(model, v));
    }
    CHECK(save_bytes(back) == bytes);
}

TEST_CASE("load rejects corrupt input") {
    const auto ds = separable_dataset(0.1, 0.9, 10, 2);
    TrainConfig cfg;
    cfg.n_trees = 3;
    const auto bytes = save_bytes(train(ds, TaskKind::Detection, cfg));

    auto wrong_magic = bytes;
    wrong_magic[0] = 'X';
    CHECK_THROWS_AS(load_bytes(wrong_magic), ModelError);
    try {
        load_bytes(wrong_magic);
    } catch (const ModelError& e) {
        CHECK(e.kind() == ModelError::Kind::BadMagic);
    }

    auto truncated = bytes;
    truncated.resize(bytes.size() / 2);
    CHECK_THROWS_AS(load_bytes(truncated), ModelError);
    try {
        load_bytes(truncated);
    } catch (const ModelError& e) {
        CHECK(e.kind() == ModelError::Kind::Corrupt);
    }

    std::vector<std::uint8_t> bad_version(bytes.begin(), bytes.end());
    // header starts "DMF 1 ..." -> bump the version digit
    bad_version[4] = '9';
    CHECK_THROWS_AS(load_bytes(bad_version), ModelError);

    auto trailing = bytes;
    trailing.push_back(0);
    CHECK_THROWS_AS(load_bytes(trailing), ModelError);
}

TEST_CASE("class relabeling permutes probabilities consistently") {
    // same geometry, classes swapped by relabeling the tools: the predicted
    // distribution must follow the class identity, not the index
    Dataset ds_a, ds_b;
    Rng rng(91);
    for (int i = 0; i < 120; ++i) {
        std::array<double, 7> v{};
        for (auto& t : v) t = rng.uniform01();
        const bool hi = v[2] > 0.5;
        ds_a.rows.push_back(row(v, hi ? ToolClass::Iodine : ToolClass::Saitama));
        ds_b.rows.push_back(row(v, hi ? ToolClass::Saitama : ToolClass::Iodine));
    }
    TrainConfig cfg;
    cfg.n_trees = 15;
    const auto ma = train(ds_a, TaskKind::ToolIdentification, cfg);
    const auto mb = train(ds_b, TaskKind::ToolIdentification, cfg);
    REQUIRE(ma.classes == mb.classes);  // canonical enum order: Saitama, Iodine
    for (int i = 0; i < 50; ++i) {
        std::array<double, 7> v{};
        for (auto& t : v) t = rng.uniform01();
        const auto pa = predict_proba(ma, v);
        const auto pb = predict_proba(mb, v);
        CHECK(pa[0] == doctest::Approx(pb[1]).epsilon(1e-12));
        CHECK(pa[1] == doctest::Approx(pb[0]).epsilon(1e-12));
    }
}
