#include "dnstun/features.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "dnstun/error.hpp"
#include "dnstun/rng.hpp"

namespace dnstun {

Dataset::Dataset() {
    for (int i = 0; i < kToolClassCount; ++i)
        tool_classes.push_back(tool_class_name(static_cast<ToolClass>(i)));
    for (int i = 0; i < kActionClassCount; ++i)
        action_classes.push_back(action_class_name(static_cast<ActionClass>(i)));
}

FeatureVector extract(const Window& w) {
    FeatureVector fv;
    fv.registered_domain = w.registered_domain;
    fv.first_ts = w.first_ts;
    fv.last_ts = w.last_ts;
    fv.member_count = w.subdomains.size();
    fv.label = w.label;

    std::vector<std::vector<char32_t>> scalars;
    scalars.reserve(w.subdomains.size());
    for (const std::string& s : w.subdomains)
        scalars.push_back(metrics::decode_scalars(s));

    std::array<double, metrics::kMetricCount> sums{};
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scalars.size(); ++i) {
        for (std::size_t j = i + 1; j < scalars.size(); ++j) {
            const auto vals = metrics::compute_all_scalars(scalars[i], scalars[j]);
            for (std::size_t k = 0; k < vals.size(); ++k) sums[k] += vals[k];
            ++pairs;
        }
    }
    for (std::size_t k = 0; k < sums.size(); ++k)
        fv.values[k] = pairs > 0 ? sums[k] / static_cast<double>(pairs) : 1.0;
    return fv;
}

Dataset extract_all(std::span<const Window> windows, const std::string& provenance,
                    unsigned threads) {
    Dataset ds;
    ds.provenance = provenance;
    ds.rows.resize(windows.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<std::size_t>(windows.size(), 1));

    if (threads <= 1 || windows.size() < 16) {
        for (std::size_t i = 0; i < windows.size(); ++i) ds.rows[i] = extract(windows[i]);
        return ds;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= windows.size()) return;
            ds.rows[i] = extract(windows[i]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return ds;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw SplitError("train fraction must be in (0, 1)");

    std::map<ToolClass, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        if (!ds.rows[i].label) throw SplitError("row " + std::to_string(i) + " unlabeled");
        by_class[ds.rows[i].label->tool].push_back(i);
    }
    for (const auto& [cls, rows] : by_class) {
        if (rows.size() < 2)
            throw SplitError("class " + tool_class_name(cls) + " has " +
                             std::to_string(rows.size()) + " rows, need at least 2");
    }

    Dataset train, test;
    train.provenance = ds.provenance + " [train]";
    test.provenance = ds.provenance + " [test]";
    std::vector<bool> to_test(ds.rows.size(), false);
    Rng rng(seed);
    for (auto& [cls, rows] : by_class) {
        rng.shuffle(rows);
        // remainder goes to train; the epsilon keeps exact fractions like
        // 0.2 * 50 from landing just below their integer
        const std::size_t test_n = static_cast<std::size_t>(std::floor(
            static_cast<double>(rows.size()) * (1.0 - train_fraction) + 1e-9));
        for (std::size_t i = 0; i < test_n; ++i) to_test[rows[i]] = true;
    }
    // Preserve original row order inside each side.
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        (to_test[i] ? test : train).rows.push_back(ds.rows[i]);
    return {std::move(train), std::move(test)};
}

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

constexpr const char* kCsvHeader =
    "domain,first_ts,last_ts,count,lev,jaro,jw,jaro_rev,jw_rev,lcsq,lcstr,tool,action";

}  // namespace

void write_csv(const Dataset& ds, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const FeatureVector& r : ds.rows) {
        out << r.registered_domain << ',' << r.first_ts << ',' << r.last_ts << ','
            << r.member_count;
        for (double v : r.values) out << ',' << format_value(v);
        out << ',' << (r.label ? tool_class_name(r.label->tool) : "") << ','
            << (r.label ? action_class_name(r.label->action) : "") << '\n';
    }
}

Dataset read_csv(std::istream& in) {
    Dataset ds;
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw Error("dataset csv: missing or unexpected header");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 13)
            throw Error("dataset csv line " + std::to_string(line_no) +
                        ": expected 13 fields, got " + std::to_string(f.size()));
        FeatureVector r;
        r.registered_domain = f[0];
        r.first_ts = std::stoll(f[1]);
        r.last_ts = std::stoll(f[2]);
        r.member_count = std::stoul(f[3]);
        for (std::size_t k = 0; k < metrics::kMetricCount; ++k)
            r.values[k] = std::stod(f[4 + k]);
        if (!f[11].empty() || !f[12].empty()) {
            const auto tool = tool_class_parse(f[11]);
            const auto action = action_class_parse(f[12]);
            if (!tool || !action)
                throw Error("dataset csv line " + std::to_string(line_no) +
                            ": unknown class name");
            r.label = Label{*tool, *action};
        }
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

}  // namespace dnstun
