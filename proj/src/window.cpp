#include "dnstun/window.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "dnstun/error.hpp"

namespace dnstun {

namespace {

// Mode over label values; ties resolved by earliest first occurrence.
template <typename T>
T modal_value(const std::vector<T>& values) {
    std::map<T, std::size_t> counts;
    for (const T& v : values) ++counts[v];
    std::size_t best = 0;
    for (const auto& [v, c] : counts) best = std::max(best, c);
    for (const T& v : values)
        if (counts[v] == best) return v;
    return values.front();  // unreachable for nonempty input
}

std::optional<Label> window_label(std::span<const DnsQueryRecord* const> members) {
    std::vector<ToolClass> tools;
    std::vector<ActionClass> actions;
    tools.reserve(members.size());
    actions.reserve(members.size());
    for (const DnsQueryRecord* r : members) {
        if (!r->label) return std::nullopt;
        tools.push_back(r->label->tool);
        actions.push_back(r->label->action);
    }
    return Label{modal_value(tools), modal_value(actions)};
}

}  // namespace

Label label_of(const Window& w) {
    if (!w.label)
        throw UnlabeledError("window under " + w.registered_domain +
                             " has unlabeled members");
    return *w.label;
}

std::vector<Window> build_windows(std::span<const DnsQueryRecord> records,
                                  const WindowConfig& cfg,
                                  WindowStats* stats) {
    WindowStats local;
    local.records_total = records.size();

    // Group by registered domain, preserving arrival order of both the
    // domains and the records within each domain.
    std::unordered_map<std::string, std::size_t> domain_index;
    std::vector<std::vector<const DnsQueryRecord*>> groups;
    std::vector<const std::string*> domain_order;
    for (const DnsQueryRecord& r : records) {
        auto [it, inserted] = domain_index.try_emplace(r.registered_domain, groups.size());
        if (inserted) {
            groups.emplace_back();
            domain_order.push_back(&it->first);
        }
        groups[it->second].push_back(&r);
    }
    local.domains_seen = groups.size();

    const std::size_t stride = cfg.effective_stride();
    std::vector<Window> out;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& members = groups[g];
        if (members.size() < cfg.min_fill) {
            ++local.domains_below_min_fill;
            continue;
        }
        for (std::size_t start = 0; start < members.size(); start += stride) {
            const std::size_t size = std::min(cfg.n, members.size() - start);
            if (size < cfg.min_fill) break;
            Window w;
            w.registered_domain = *domain_order[g];
            w.subdomains.reserve(size);
            w.record_types.reserve(size);
            for (std::size_t i = start; i < start + size; ++i) {
                w.subdomains.push_back(members[i]->subdomain);
                w.record_types.push_back(members[i]->record_type);
            }
            w.first_ts = members[start]->timestamp_us;
            w.last_ts = members[start + size - 1]->timestamp_us;
            w.label = window_label(
                std::span<const DnsQueryRecord* const>(members.data() + start, size));
            out.push_back(std::move(w));
        }
    }
    local.windows_emitted = out.size();
    if (stats) *stats = local;
    return out;
}

}  // namespace dnstun
