#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dnstun::metrics {

/// The seven similarity features, in the canonical order that defines the
/// FeatureVector layout. Do not reorder: serialized datasets and models
/// depend on it.
enum class MetricKind : std::uint8_t {
    LevenshteinSim = 0,
    Jaro,
    JaroWinkler,
    JaroReversed,
    JaroWinklerReversed,
    LcsSubsequenceSim,
    LcsSubstringSim,
};

inline constexpr std::size_t kMetricCount = 7;

const std::string& metric_name(MetricKind k);

/// Unicode scalar values of a UTF-8 string. Bytes that do not form a valid
/// UTF-8 sequence are taken one byte at a time as their own code points, so
/// decoding is total and reversal stays an involution.
std::vector<char32_t> decode_scalars(std::string_view s);

/// Character-wise reversal over Unicode scalars, re-encoded as UTF-8.
std::string reversed(std::string_view s);

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - d(a,b) / max(|a|,|b|); 1 when both inputs are empty.
double levenshtein_sim(std::string_view a, std::string_view b);

/// Standard Jaro similarity. 1 when both inputs are empty, 0 when there are
/// no matching characters.
double jaro(std::string_view a, std::string_view b);

/// Jaro boosted by the common-prefix term: jaro + l * p * (1 - jaro) with
/// the prefix length l capped at 4 and p = 0.1.
double jaro_winkler(std::string_view a, std::string_view b);

double jaro_reversed(std::string_view a, std::string_view b);
double jaro_winkler_reversed(std::string_view a, std::string_view b);

std::size_t lcs_subsequence_len(std::string_view a, std::string_view b);
double lcs_subsequence_sim(std::string_view a, std::string_view b);

std::size_t lcs_substring_len(std::string_view a, std::string_view b);
double lcs_substring_sim(std::string_view a, std::string_view b);

/// All seven similarities for one pair, indexed by MetricKind. Decodes each
/// input once and shares the scalar buffers across metrics.
std::array<double, kMetricCount> compute_all(std::string_view a, std::string_view b);

/// Same as compute_all but on pre-decoded scalars (the window feature loop
/// decodes each member once and reuses the buffers across pairs).
std::array<double, kMetricCount> compute_all_scalars(const std::vector<char32_t>& a,
                                                     const std::vector<char32_t>& b);

}  // namespace dnstun::metrics
