#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dnstun/error.hpp"
#include "dnstun/rng.hpp"
#include "dnstun/window.hpp"

using namespace dnstun;

namespace {

DnsQueryRecord rec(const std::string& domain, const std::string& sub, std::int64_t ts,
                   std::optional<Label> label = Label{ToolClass::Saitama,
                                                      ActionClass::Upload}) {
    DnsQueryRecord r;
    r.timestamp_us = ts;
    r.subdomain = sub;
    r.registered_domain = domain;
    r.qname = sub.empty() ? domain : sub + "." + domain;
    r.record_type = RecordType::A;
    r.source = "10.0.0.1";
    r.label = label;
    return r;
}

std::vector<DnsQueryRecord> n_records(const std::string& domain, std::size_t n) {
    std::vector<DnsQueryRecord> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(rec(domain, "s" + std::to_string(i), static_cast<std::int64_t>(i)));
    return v;
}

}  // namespace

TEST_CASE("tumbling windows: 25 records give sizes 10, 10, 5") {
    const auto records = n_records("a.test", 25);
    const auto windows = build_windows(records, {});
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].subdomains.size() == 10);
    CHECK(windows[1].subdomains.size() == 10);
    CHECK(windows[2].subdomains.size() == 5);
    CHECK(windows[0].subdomains.front() == "s0");
    CHECK(windows[2].subdomains.back() == "s24");
    CHECK(windows[2].first_ts == 20);
    CHECK(windows[2].last_ts == 24);
}

TEST_CASE("domains below the minimum fill produce no windows") {
    const auto records = n_records("tiny.test", 2);
    WindowStats stats;
    const auto windows = build_windows(records, {}, &stats);
    CHECK(windows.empty());
    CHECK(stats.domains_below_min_fill == 1);
}

TEST_CASE("stride 1 emits a window at every viable start offset") {
    const auto records = n_records("a.test", 12);
    WindowConfig cfg;
    cfg.stride = 1;
    const auto windows = build_windows(records, cfg);
    const std::vector<std::size_t> expected{10, 10, 10, 9, 8, 7, 6, 5, 4, 3};
    REQUIRE(windows.size() == expected.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        CHECK(windows[i].subdomains.size() == expected[i]);
}

TEST_CASE("order is preserved and domains do not mix") {
    std::vector<DnsQueryRecord> records;
    for (int i = 0; i < 5; ++i) {
        records.push_back(rec("a.test", "a" + std::to_string(i), i * 2));
        records.push_back(rec("b.test", "b" + std::to_string(i), i * 2 + 1));
    }
    const auto windows = build_windows(records, {});
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].registered_domain == "a.test");
    CHECK(windows[1].registered_domain == "b.test");
    CHECK(windows[0].subdomains ==
          std::vector<std::string>{"a0", "a1", "a2", "a3", "a4"});
    CHECK(windows[1].subdomains ==
          std::vector<std::string>{"b0", "b1", "b2", "b3", "b4"});
}

TEST_CASE("window label is the modal member label") {
    std::vector<DnsQueryRecord> records;
    for (int i = 0; i < 10; ++i)
        records.push_back(
            rec("a.test", "s", i, Label{ToolClass::Saitama, ActionClass::Upload}));
    auto windows = build_windows(records, {});
    REQUIRE(windows.size() == 1);
    CHECK(label_of(windows[0]) == Label{ToolClass::Saitama, ActionClass::Upload});

    // 6 idle vs 4 download: majority wins
    records.clear();
    for (int i = 0; i < 6; ++i)
        records.push_back(
            rec("a.test", "s", i, Label{ToolClass::Iodine, ActionClass::KeepAlive}));
    for (int i = 6; i < 10; ++i)
        records.push_back(
            rec("a.test", "s", i, Label{ToolClass::Iodine, ActionClass::Download}));
    windows = build_windows(records, {});
    CHECK(label_of(windows[0]) == Label{ToolClass::Iodine, ActionClass::KeepAlive});

    // 5/5 tie: the earliest record wins
    records.clear();
    for (int i = 0; i < 5; ++i)
        records.push_back(
            rec("a.test", "s", i, Label{ToolClass::Iodine, ActionClass::Download}));
    for (int i = 5; i < 10; ++i)
        records.push_back(
            rec("a.test", "s", i, Label{ToolClass::Iodine, ActionClass::KeepAlive}));
    windows = build_windows(records, {});
    CHECK(label_of(windows[0]) == Label{ToolClass::Iodine, ActionClass::Download});
}

TEST_CASE("label_of rejects windows with unlabeled members") {
    std::vector<DnsQueryRecord> records;
    for (int i = 0; i < 5; ++i) records.push_back(rec("a.test", "s", i, std::nullopt));
    const auto windows = build_windows(records, {});
    REQUIRE(windows.size() == 1);
    CHECK(!windows[0].label.has_value());
    CHECK_THROWS_AS(label_of(windows[0]), UnlabeledError);
}

TEST_CASE("windowing is deterministic and loses at most min_fill-1 records per domain") {
    Rng rng(7);
    std::vector<DnsQueryRecord> records;
    for (int i = 0; i < 500; ++i) {
        const std::string domain = "d" + std::to_string(rng.uniform_index(9)) + ".test";
        records.push_back(rec(domain, "s" + std::to_string(i), i));
    }
    WindowStats stats;
    const auto w1 = build_windows(records, {}, &stats);
    const auto w2 = build_windows(records, {});
    REQUIRE(w1.size() == w2.size());
    for (std::size_t i = 0; i < w1.size(); ++i) {
        CHECK(w1[i].registered_domain == w2[i].registered_domain);
        CHECK(w1[i].subdomains == w2[i].subdomains);
        CHECK(w1[i].subdomains.size() >= 3);
        CHECK(w1[i].subdomains.size() <= 10);
    }
    std::size_t windowed = 0;
    for (const auto& w : w1) windowed += w.subdomains.size();
    // with tumbling stride each domain drops fewer than min_fill trailing records
    CHECK(windowed >= records.size() - 9 * (3 - 1));
    CHECK(windowed <= records.size());
}
