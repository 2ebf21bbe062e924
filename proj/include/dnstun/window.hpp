#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnstun/record.hpp"

namespace dnstun {

/// An ordered group of subdomain strings under one registered domain.
struct Window {
    std::string registered_domain;
    std::vector<std::string> subdomains;
    std::vector<RecordType> record_types;
    std::int64_t first_ts = 0;
    std::int64_t last_ts = 0;
    std::optional<Label> label;
};

struct WindowConfig {
    std::size_t n = 10;         ///< window size
    std::size_t min_fill = 3;   ///< minimum records for a window to be emitted
    std::size_t stride = 0;     ///< records advanced between windows; 0 = n (tumbling)

    std::size_t effective_stride() const { return stride == 0 ? n : stride; }
};

struct WindowStats {
    std::size_t windows_emitted = 0;
    std::size_t domains_seen = 0;
    std::size_t domains_below_min_fill = 0;
    std::size_t records_total = 0;
};

/// Modal (tool, action) label of a fully labeled member set. Tool and action
/// modes are taken independently; ties go to the label of the earliest
/// member carrying a tied value.
/// Throws UnlabeledError if any member lacks a label.
Label label_of(const Window& w);

/// Groups records by registered domain (arrival order preserved) and emits
/// windows of up to cfg.n members starting every cfg.stride records. A group
/// is emitted iff it has at least cfg.min_fill members. Windows are labeled
/// with the modal member label when every member is labeled.
///
/// Output order: domains by first-record arrival, then window start order
/// within each domain.
std::vector<Window> build_windows(std::span<const DnsQueryRecord> records,
                                  const WindowConfig& cfg,
                                  WindowStats* stats = nullptr);

}  // namespace dnstun
