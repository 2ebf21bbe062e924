#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "dnstun/error.hpp"
#include "dnstun/features.hpp"
#include "dnstun/rng.hpp"

using namespace dnstun;

namespace {

Window make_window(std::vector<std::string> subs,
                   std::optional<Label> label = Label{ToolClass::Dnscat2,
                                                      ActionClass::Upload}) {
    Window w;
    w.registered_domain = "x.test";
    w.subdomains = std::move(subs);
    w.record_types.assign(w.subdomains.size(), RecordType::A);
    w.first_ts = 100;
    w.last_ts = 200;
    w.label = label;
    return w;
}

}  // namespace

TEST_CASE("identical members give all-ones features") {
    const auto fv = extract(make_window({"abc", "abc", "abc"}));
    for (double v : fv.values) CHECK(v == 1.0);
    CHECK(fv.member_count == 3);
}

TEST_CASE("disjoint members zero the levenshtein feature") {
    const auto fv = extract(make_window({"aaaa", "bbbb", "cccc"}));
    CHECK(fv.values[static_cast<int>(metrics::MetricKind::LevenshteinSim)] == 0.0);
}

TEST_CASE("pair means average over all unordered pairs") {
    // pairs: (ab,ab)=1, (ab,cd)=0, (ab,cd)=0 -> mean 1/3
    const auto fv = extract(make_window({"ab", "ab", "cd"}));
    CHECK(fv.values[static_cast<int>(metrics::MetricKind::LevenshteinSim)] ==
          doctest::Approx(1.0 / 3.0));
}

TEST_CASE("member order does not change the feature vector") {
    Rng rng(3);
    std::vector<std::string> subs{"alpha", "beta-7", "gamma", "delta.x", "ee", "ffff"};
    const auto base = extract(make_window(subs));
    for (int iter = 0; iter < 10; ++iter) {
        rng.shuffle(subs);
        const auto shuffled = extract(make_window(subs));
        for (std::size_t k = 0; k < base.values.size(); ++k)
            CHECK(shuffled.values[k] == doctest::Approx(base.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("extract_all preserves order and labels") {
    std::vector<Window> windows;
    windows.push_back(make_window({"a", "a", "a"}, Label{ToolClass::Iodine,
                                                          ActionClass::Download}));
    windows.push_back(make_window({"b", "b", "b"}, std::nullopt));
    const auto ds = extract_all(windows, "unit");
    REQUIRE(ds.rows.size() == 2);
    CHECK(ds.rows[0].label.has_value());
    CHECK(!ds.rows[1].label.has_value());
    CHECK(ds.provenance == "unit");
    CHECK(extract_all(std::vector<Window>{}).rows.empty());
}

TEST_CASE("parallel extraction equals serial") {
    std::vector<Window> windows;
    Rng rng(9);
    for (int i = 0; i < 60; ++i) {
        std::vector<std::string> subs;
        for (int j = 0; j < 8; ++j)
            subs.push_back("s" + std::to_string(rng.uniform_index(40)));
        windows.push_back(make_window(std::move(subs)));
    }
    const auto serial = extract_all(windows, "", 1);
    const auto parallel = extract_all(windows, "", 4);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i)
        CHECK(serial.rows[i].values == parallel.rows[i].values);
}

TEST_CASE("csv round-trip reproduces rows to serialized precision") {
    std::vector<Window> windows;
    Rng rng(11);
    for (int i = 0; i < 25; ++i) {
        std::vector<std::string> subs;
        for (int j = 0; j < 5; ++j)
            subs.push_back("q" + std::to_string(rng.uniform_index(30)));
        windows.push_back(make_window(std::move(subs),
                                      i % 3 == 0 ? std::optional<Label>{}
                                                 : Label{ToolClass::Saitama,
                                                         ActionClass::Download}));
    }
    const auto ds = extract_all(windows);
    std::ostringstream first;
    write_csv(ds, first);
    std::istringstream in(first.str());
    const auto back = read_csv(in);
    REQUIRE(back.rows.size() == ds.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].registered_domain == ds.rows[i].registered_domain);
        CHECK(back.rows[i].member_count == ds.rows[i].member_count);
        CHECK(back.rows[i].label == ds.rows[i].label);
    }
    std::ostringstream second;
    write_csv(back, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("read_csv rejects malformed input") {
    std::istringstream bad_header("nope\n");
    CHECK_THROWS_AS(read_csv(bad_header), Error);
    std::istringstream bad_row(
        "domain,first_ts,last_ts,count,lev,jaro,jw,jaro_rev,jw_rev,lcsq,lcstr,tool,action\n"
        "x.test,1,2\n");
    CHECK_THROWS_AS(read_csv(bad_row), Error);
}

TEST_CASE("stratified split: proportions, disjointness, determinism") {
    Dataset ds;
    Rng rng(13);
    auto add_rows = [&](ToolClass tool, int n) {
        for (int i = 0; i < n; ++i) {
            FeatureVector fv;
            fv.registered_domain = tool_class_name(tool) + std::to_string(i);
            for (auto& v : fv.values) v = rng.uniform01();
            fv.member_count = 5;
            fv.label = Label{tool, ActionClass::Upload};
            ds.rows.push_back(std::move(fv));
        }
    };
    add_rows(ToolClass::Saitama, 50);
    add_rows(ToolClass::Iodine, 10);

    auto [train, test] = split_train_test(ds, 0.8, 1234);
    CHECK(train.rows.size() == 48);
    CHECK(test.rows.size() == 12);

    std::map<ToolClass, int> train_counts, test_counts;
    for (const auto& r : train.rows) ++train_counts[r.label->tool];
    for (const auto& r : test.rows) ++test_counts[r.label->tool];
    CHECK(train_counts[ToolClass::Saitama] == 40);
    CHECK(test_counts[ToolClass::Saitama] == 10);
    CHECK(train_counts[ToolClass::Iodine] == 8);
    CHECK(test_counts[ToolClass::Iodine] == 2);

    // disjoint and exhaustive by row identity
    std::vector<std::string> seen;
    for (const auto& r : train.rows) seen.push_back(r.registered_domain);
    for (const auto& r : test.rows) seen.push_back(r.registered_domain);
    std::sort(seen.begin(), seen.end());
    CHECK(std::unique(seen.begin(), seen.end()) == seen.end());
    CHECK(seen.size() == ds.rows.size());

    // determinism
    auto [train2, test2] = split_train_test(ds, 0.8, 1234);
    REQUIRE(train2.rows.size() == train.rows.size());
    for (std::size_t i = 0; i < train.rows.size(); ++i)
        CHECK(train2.rows[i].registered_domain == train.rows[i].registered_domain);

    // different seed gives a different shuffle (almost surely)
    auto [train3, test3] = split_train_test(ds, 0.8, 999);
    bool any_diff = false;
    for (std::size_t i = 0; i < test.rows.size(); ++i)
        if (test3.rows[i].registered_domain != test.rows[i].registered_domain)
            any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("split rejects tiny classes and unlabeled rows") {
    Dataset ds;
    FeatureVector fv;
    fv.label = Label{ToolClass::Saitama, ActionClass::Upload};
    ds.rows.push_back(fv);
    CHECK_THROWS_AS(split_train_test(ds, 0.8, 0), SplitError);

    ds.rows.push_back(fv);
    ds.rows.emplace_back();  // unlabeled
    CHECK_THROWS_AS(split_train_test(ds, 0.8, 0), SplitError);

    Dataset ok;
    ok.rows.assign(4, fv);
    CHECK_THROWS_AS(split_train_test(ok, 1.5, 0), SplitError);
    CHECK_NOTHROW(split_train_test(ok, 0.8, 0));
}

TEST_CASE("adding a duplicate member keeps means within bounds") {
    Rng rng(21);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<std::string> subs;
        const int n = 3 + static_cast<int>(rng.uniform_index(5));
        for (int j = 0; j < n; ++j)
            subs.push_back("m" + std::to_string(rng.uniform_index(20)));
        const auto base = extract(make_window(subs));
        auto dup = subs;
        dup.push_back(subs[rng.uniform_index(subs.size())]);
        const auto grown = extract(make_window(dup));
        for (std::size_t k = 0; k < grown.values.size(); ++k) {
            CHECK(grown.values[k] <= 1.0);
            CHECK(grown.values[k] >= 0.0);
        }
    }
}
