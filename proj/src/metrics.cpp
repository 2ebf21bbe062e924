#include "dnstun/metrics.hpp"

#include <algorithm>

namespace dnstun::metrics {

namespace {

const std::array<std::string, kMetricCount> kMetricNames{
    "lev", "jaro", "jw", "jaro_rev", "jw_rev", "lcsq", "lcstr",
};

using Scalars = std::vector<char32_t>;

std::size_t levenshtein_scalars(const Scalars& a, const Scalars& b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0) return n;
    if (n == 0) return m;
    std::vector<std::size_t> prev(n + 1), cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

double jaro_scalars(const Scalars& a, const Scalars& b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0 && n == 0) return 1.0;
    if (m == 0 || n == 0) return 0.0;
    const std::size_t maxlen = std::max(m, n);
    const std::size_t window = maxlen / 2 > 0 ? maxlen / 2 - 1 : 0;

    std::vector<bool> a_matched(m, false), b_matched(n, false);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(n, i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!b_matched[j] && a[i] == b[j]) {
                a_matched[i] = true;
                b_matched[j] = true;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;

    std::size_t mismatched = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!a_matched[i]) continue;
        while (!b_matched[j]) ++j;
        if (a[i] != b[j]) ++mismatched;
        ++j;
    }
    const double t = mismatched / 2.0;
    const double dm = static_cast<double>(matches);
    return (dm / m + dm / n + (dm - t) / dm) / 3.0;
}

double jaro_winkler_scalars(const Scalars& a, const Scalars& b) {
    const double j = jaro_scalars(a, b);
    std::size_t prefix = 0;
    const std::size_t limit = std::min({a.size(), b.size(), std::size_t{4}});
    while (prefix < limit && a[prefix] == b[prefix]) ++prefix;
    return j + static_cast<double>(prefix) * 0.1 * (1.0 - j);
}

std::size_t lcs_subsequence_scalars(const Scalars& a, const Scalars& b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0 || n == 0) return 0;
    std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

std::size_t lcs_substring_scalars(const Scalars& a, const Scalars& b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0 || n == 0) return 0;
    std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (a[i - 1] == b[j - 1]) {
                cur[j] = prev[j - 1] + 1;
                best = std::max(best, cur[j]);
            } else {
                cur[j] = 0;
            }
        }
        std::swap(prev, cur);
    }
    return best;
}

double length_normalized(std::size_t value, std::size_t la, std::size_t lb) {
    const std::size_t maxlen = std::max(la, lb);
    if (maxlen == 0) return 1.0;
    return static_cast<double>(value) / static_cast<double>(maxlen);
}

Scalars reversed_scalars(Scalars s) {
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace

const std::string& metric_name(MetricKind k) {
    return kMetricNames[static_cast<std::size_t>(k)];
}

std::vector<char32_t> decode_scalars(std::string_view s) {
    Scalars out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c0 = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (c0 < 0x80) {
            len = 1;
            cp = c0;
        } else if ((c0 & 0xe0) == 0xc0) {
            len = 2;
            cp = c0 & 0x1f;
        } else if ((c0 & 0xf0) == 0xe0) {
            len = 3;
            cp = c0 & 0x0f;
        } else if ((c0 & 0xf8) == 0xf0) {
            len = 4;
            cp = c0 & 0x07;
        }
        bool ok = len > 0 && i + len <= s.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            const unsigned char ck = static_cast<unsigned char>(s[i + k]);
            if ((ck & 0xc0) != 0x80)
                ok = false;
            else
                cp = (cp << 6) | (ck & 0x3f);
        }
        if (ok && len > 1) {
            // Reject overlong forms and surrogate/out-of-range values.
            static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
            if (cp < kMin[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff))
                ok = false;
        }
        if (!ok) {
            out.push_back(c0);
            ++i;
        } else {
            out.push_back(cp);
            i += len;
        }
    }
    return out;
}

std::string reversed(std::string_view s) {
    const Scalars scalars = reversed_scalars(decode_scalars(s));
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : scalars) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    }
    return out;
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    return levenshtein_scalars(decode_scalars(a), decode_scalars(b));
}

double levenshtein_sim(std::string_view a, std::string_view b) {
    const Scalars sa = decode_scalars(a), sb = decode_scalars(b);
    if (sa.empty() && sb.empty()) return 1.0;
    return 1.0 - length_normalized(levenshtein_scalars(sa, sb), sa.size(), sb.size());
}

double jaro(std::string_view a, std::string_view b) {
    return jaro_scalars(decode_scalars(a), decode_scalars(b));
}

double jaro_winkler(std::string_view a, std::string_view b) {
    return jaro_winkler_scalars(decode_scalars(a), decode_scalars(b));
}

double jaro_reversed(std::string_view a, std::string_view b) {
    return jaro_scalars(reversed_scalars(decode_scalars(a)),
                        reversed_scalars(decode_scalars(b)));
}

double jaro_winkler_reversed(std::string_view a, std::string_view b) {
    return jaro_winkler_scalars(reversed_scalars(decode_scalars(a)),
                                reversed_scalars(decode_scalars(b)));
}

std::size_t lcs_subsequence_len(std::string_view a, std::string_view b) {
    return lcs_subsequence_scalars(decode_scalars(a), decode_scalars(b));
}

double lcs_subsequence_sim(std::string_view a, std::string_view b) {
    const Scalars sa = decode_scalars(a), sb = decode_scalars(b);
    return length_normalized(lcs_subsequence_scalars(sa, sb), sa.size(), sb.size());
}

std::size_t lcs_substring_len(std::string_view a, std::string_view b) {
    return lcs_substring_scalars(decode_scalars(a), decode_scalars(b));
}

double lcs_substring_sim(std::string_view a, std::string_view b) {
    const Scalars sa = decode_scalars(a), sb = decode_scalars(b);
    return length_normalized(lcs_substring_scalars(sa, sb), sa.size(), sb.size());
}

std::array<double, kMetricCount> compute_all(std::string_view a, std::string_view b) {
    return compute_all_scalars(decode_scalars(a), decode_scalars(b));
}

std::array<double, kMetricCount> compute_all_scalars(const Scalars& a, const Scalars& b) {
    std::array<double, kMetricCount> out{};
    if (a == b) {
        out.fill(1.0);
        return out;
    }
    const Scalars ra = reversed_scalars(a), rb = reversed_scalars(b);
    out[static_cast<std::size_t>(MetricKind::LevenshteinSim)] =
        1.0 - length_normalized(levenshtein_scalars(a, b), a.size(), b.size());
    out[static_cast<std::size_t>(MetricKind::Jaro)] = jaro_scalars(a, b);
    out[static_cast<std::size_t>(MetricKind::JaroWinkler)] = jaro_winkler_scalars(a, b);
    out[static_cast<std::size_t>(MetricKind::JaroReversed)] = jaro_scalars(ra, rb);
    out[static_cast<std::size_t>(MetricKind::JaroWinklerReversed)] =
        jaro_winkler_scalars(ra, rb);
    out[static_cast<std::size_t>(MetricKind::LcsSubsequenceSim)] =
        length_normalized(lcs_subsequence_scalars(a, b), a.size(), b.size());
    out[static_cast<std::size_t>(MetricKind::LcsSubstringSim)] =
        length_normalized(lcs_substring_scalars(a, b), a.size(), b.size());
    return out;
}

}  // namespace dnstun::metrics
