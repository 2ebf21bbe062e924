#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnstun/metrics.hpp"
#include "dnstun/record.hpp"
#include "dnstun/window.hpp"

namespace dnstun {

/// Identifies the feature surface a dataset or model was built with.
inline const std::string kFeatureSetVersion = "strsim7-v1";

/// Mean pairwise similarity scores of one window, ordered by MetricKind.
struct FeatureVector {
    std::array<double, metrics::kMetricCount> values{};
    std::string registered_domain;
    std::int64_t first_ts = 0;
    std::int64_t last_ts = 0;
    std::size_t member_count = 0;
    std::optional<Label> label;
};

struct Dataset {
    std::vector<FeatureVector> rows;
    std::vector<std::string> tool_classes;    ///< stable ToolClass index table
    std::vector<std::string> action_classes;  ///< stable ActionClass index table
    std::string provenance;

    Dataset();
};

/// One feature vector from one window: every metric over all unordered
/// member pairs, averaged per metric.
FeatureVector extract(const Window& w);

Dataset extract_all(std::span<const Window> windows,
                    const std::string& provenance = {},
                    unsigned threads = 0);

/// Stratified 80/20-style split by ToolClass. Per class, rows are shuffled
/// with the seeded generator; floor(n * (1 - fraction)) rows go to test and
/// the remainder to train. Requires every row labeled and every class with
/// at least 2 rows.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds,
                                             double train_fraction,
                                             std::uint64_t seed);

/// CSV with header
/// domain,first_ts,last_ts,count,lev,jaro,jw,jaro_rev,jw_rev,lcsq,lcstr,tool,action
/// Floating-point values use 9 significant digits; reading back a written
/// file reproduces every value to that precision.
void write_csv(const Dataset& ds, std::ostream& out);
Dataset read_csv(std::istream& in);

}  // namespace dnstun
