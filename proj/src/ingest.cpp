#include "dnstun/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>

#include <json.hpp>

#include "dnstun/error.hpp"

namespace dnstun {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_labels(const std::string& name) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : name) {
        if (c == '.') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

const std::vector<std::string>& default_multipart_suffixes() {
    static const std::vector<std::string> kSuffixes{
        "co.uk",  "org.uk", "ac.uk",  "gov.uk", "co.jp",  "co.nz",
        "com.au", "net.au", "com.br", "com.mx", "com.ar", "com.cn",
    };
    return kSuffixes;
}

DomainSplit split_registered_domain(const std::string& qname,
                                    const std::vector<std::string>& multipart_suffixes) {
    DomainSplit out;
    const auto labels = split_labels(qname);
    if (labels.size() <= 1) {
        out.registered_domain = qname;
        out.single_label = true;
        return out;
    }
    std::size_t suffix_labels = 2;
    if (labels.size() >= 2) {
        const std::string last_two =
            labels[labels.size() - 2] + "." + labels[labels.size() - 1];
        if (std::find(multipart_suffixes.begin(), multipart_suffixes.end(), last_two) !=
                multipart_suffixes.end() &&
            labels.size() >= 3)
            suffix_labels = 3;
    }
    suffix_labels = std::min(suffix_labels, labels.size());

    std::string reg;
    for (std::size_t i = labels.size() - suffix_labels; i < labels.size(); ++i) {
        if (!reg.empty()) reg.push_back('.');
        reg += labels[i];
    }
    std::string sub;
    for (std::size_t i = 0; i + suffix_labels < labels.size(); ++i) {
        if (!sub.empty()) sub.push_back('.');
        sub += labels[i];
    }
    out.subdomain = std::move(sub);
    out.registered_domain = std::move(reg);
    return out;
}

std::pair<std::string, RecordType> decode_dns_question(
    std::span<const std::uint8_t> msg) {
    if (msg.size() < 12)
        throw DnsDecodeError(DnsDecodeError::Kind::Truncated, "message shorter than header");

    std::string qname;
    std::size_t pos = 12;
    std::size_t wire_len = 0;  // accumulated label bytes, RFC limit 255
    std::size_t after_name = 0;  // position after the name in the question section
    int jumps = 0;
    bool jumped = false;

    for (;;) {
        if (pos >= msg.size())
            throw DnsDecodeError(DnsDecodeError::Kind::Truncated, "name runs past message");
        const std::uint8_t len = msg[pos];
        if (len == 0) {
            if (!jumped) after_name = pos + 1;
            break;
        }
        if ((len & 0xc0) == 0xc0) {
            if (pos + 1 >= msg.size())
                throw DnsDecodeError(DnsDecodeError::Kind::Truncated, "dangling pointer");
            if (++jumps > 64)
                throw DnsDecodeError(DnsDecodeError::Kind::PointerLoop,
                                     "compression pointer loop");
            const std::size_t target =
                (static_cast<std::size_t>(len & 0x3f) << 8) | msg[pos + 1];
            if (!jumped) after_name = pos + 2;
            if (target >= msg.size())
                throw DnsDecodeError(DnsDecodeError::Kind::Truncated,
                                     "pointer past message");
            pos = target;
            jumped = true;
            continue;
        }
        if (len > 63)
            throw DnsDecodeError(DnsDecodeError::Kind::BadLabelLength,
                                 "label length " + std::to_string(len));
        if (pos + 1 + len > msg.size())
            throw DnsDecodeError(DnsDecodeError::Kind::Truncated, "label runs past message");
        wire_len += len + 1;
        if (wire_len > 255)
            throw DnsDecodeError(DnsDecodeError::Kind::BadLabelLength, "name too long");
        if (!qname.empty()) qname.push_back('.');
        for (std::size_t i = 0; i < len; ++i) {
            unsigned char c = msg[pos + 1 + i];
            if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
            if (c == '.' || c == '\\') {
                qname.push_back('\\');
                qname.push_back(static_cast<char>(c));
            } else if (c < 0x21 || c > 0x7e) {
                char buf[5];
                std::snprintf(buf, sizeof buf, "\\%03u", c);
                qname += buf;
            } else {
                qname.push_back(static_cast<char>(c));
            }
        }
        pos += 1 + len;
    }

    if (after_name + 2 > msg.size())
        throw DnsDecodeError(DnsDecodeError::Kind::Truncated, "missing question type");
    const std::uint16_t qtype = static_cast<std::uint16_t>(
        (static_cast<std::uint16_t>(msg[after_name]) << 8) | msg[after_name + 1]);
    return {std::move(qname), RecordType{qtype}};
}

namespace {

std::uint16_t be16(std::span<const std::uint8_t> d, std::size_t off) {
    return static_cast<std::uint16_t>((d[off] << 8) | d[off + 1]);
}

std::string ipv4_string(std::span<const std::uint8_t> d, std::size_t off) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", d[off], d[off + 1], d[off + 2],
                  d[off + 3]);
    return buf;
}

std::string ipv6_string(std::span<const std::uint8_t> d, std::size_t off) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%x:%x:%x:%x:%x:%x:%x:%x", be16(d, off),
                  be16(d, off + 2), be16(d, off + 4), be16(d, off + 6), be16(d, off + 8),
                  be16(d, off + 10), be16(d, off + 12), be16(d, off + 14));
    return buf;
}

constexpr std::uint32_t kMagicUsec = 0xa1b2c3d4;
constexpr std::uint32_t kMagicNsec = 0xa1b23c4d;
constexpr std::uint32_t kMagicUsecSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNsecSwapped = 0x4d3cb2a1;
constexpr std::uint32_t kMaxPacketBytes = 1u << 20;

constexpr std::uint32_t kLinkEthernet = 1;
constexpr std::uint32_t kLinkRaw = 101;
constexpr std::uint32_t kLinkSll = 113;

}  // namespace

PcapReader::PcapReader(std::istream& in, std::vector<std::string> multipart_suffixes)
    : in_(in), suffixes_(std::move(multipart_suffixes)) {
    std::uint8_t header[24];
    if (!in_.read(reinterpret_cast<char*>(header), sizeof header))
        throw CorruptHeaderError("file shorter than the global header");
    auto u32_at = [&](std::size_t off, bool swap) -> std::uint32_t {
        std::uint32_t v = static_cast<std::uint32_t>(header[off]) |
                          (static_cast<std::uint32_t>(header[off + 1]) << 8) |
                          (static_cast<std::uint32_t>(header[off + 2]) << 16) |
                          (static_cast<std::uint32_t>(header[off + 3]) << 24);
        if (swap) v = __builtin_bswap32(v);
        return v;
    };
    const std::uint32_t magic = u32_at(0, false);
    switch (magic) {
        case kMagicUsec: swap_ = false; nanosecond_ = false; break;
        case kMagicNsec: swap_ = false; nanosecond_ = true; break;
        case kMagicUsecSwapped: swap_ = true; nanosecond_ = false; break;
        case kMagicNsecSwapped: swap_ = true; nanosecond_ = true; break;
        default:
            throw CorruptHeaderError("bad magic");
    }
    link_type_ = u32_at(20, swap_);
    if (link_type_ != kLinkEthernet && link_type_ != kLinkRaw && link_type_ != kLinkSll)
        throw CorruptHeaderError("unsupported link type " + std::to_string(link_type_));
}

bool PcapReader::read_packet_header(std::int64_t& ts_us, std::uint32_t& captured_len) {
    std::uint8_t header[16];
    in_.read(reinterpret_cast<char*>(header), sizeof header);
    const std::streamsize got = in_.gcount();
    if (got == 0) return false;
    if (got < static_cast<std::streamsize>(sizeof header)) {
        ++stats_.truncated;
        return false;
    }
    auto u32_at = [&](std::size_t off) -> std::uint32_t {
        std::uint32_t v = static_cast<std::uint32_t>(header[off]) |
                          (static_cast<std::uint32_t>(header[off + 1]) << 8) |
                          (static_cast<std::uint32_t>(header[off + 2]) << 16) |
                          (static_cast<std::uint32_t>(header[off + 3]) << 24);
        if (swap_) v = __builtin_bswap32(v);
        return v;
    };
    const std::int64_t sec = u32_at(0);
    const std::int64_t frac = u32_at(4);
    ts_us = sec * 1000000 + (nanosecond_ ? frac / 1000 : frac);
    captured_len = u32_at(8);
    return true;
}

bool PcapReader::decode_packet(std::span<const std::uint8_t> data, std::int64_t ts_us,
                               DnsQueryRecord& out) {
    std::size_t off = 0;

    // link layer
    if (link_type_ == kLinkEthernet) {
        if (data.size() < 14) { ++stats_.truncated; return false; }
        std::uint16_t ethertype = be16(data, 12);
        off = 14;
        while (ethertype == 0x8100 || ethertype == 0x88a8) {  // VLAN tags
            if (data.size() < off + 4) { ++stats_.truncated; return false; }
            ethertype = be16(data, off + 2);
            off += 4;
        }
        if (ethertype != 0x0800 && ethertype != 0x86dd) { ++stats_.non_dns; return false; }
    } else if (link_type_ == kLinkSll) {
        if (data.size() < 16) { ++stats_.truncated; return false; }
        const std::uint16_t proto = be16(data, 14);
        if (proto != 0x0800 && proto != 0x86dd) { ++stats_.non_dns; return false; }
        off = 16;
    }

    // network layer
    if (data.size() < off + 1) { ++stats_.truncated; return false; }
    const std::uint8_t version = data[off] >> 4;
    std::uint8_t proto = 0;
    std::string source;
    if (version == 4) {
        if (data.size() < off + 20) { ++stats_.truncated; return false; }
        const std::size_t ihl = (data[off] & 0x0f) * 4u;
        if (ihl < 20 || data.size() < off + ihl) { ++stats_.malformed; return false; }
        const std::uint16_t frag = be16(data, off + 6);
        if ((frag & 0x1fff) != 0) { ++stats_.fragments_skipped; return false; }
        proto = data[off + 9];
        source = ipv4_string(data, off + 12);
        off += ihl;
    } else if (version == 6) {
        if (data.size() < off + 40) { ++stats_.truncated; return false; }
        proto = data[off + 6];
        source = ipv6_string(data, off + 8);
        off += 40;
    } else {
        ++stats_.non_dns;
        return false;
    }

    // transport layer
    if (proto == 6) {
        if (data.size() >= off + 4 && (be16(data, off) == 53 || be16(data, off + 2) == 53))
            ++stats_.tcp53_ignored;
        else
            ++stats_.non_dns;
        return false;
    }
    if (proto != 17) { ++stats_.non_dns; return false; }
    if (data.size() < off + 8) { ++stats_.truncated; return false; }
    const std::uint16_t sport = be16(data, off);
    const std::uint16_t dport = be16(data, off + 2);
    if (dport != 53) {
        if (sport == 53)
            ++stats_.responses_skipped;
        else
            ++stats_.non_dns;
        return false;
    }
    off += 8;

    // DNS message
    const auto msg = data.subspan(off);
    if (msg.size() < 12) { ++stats_.malformed; return false; }
    const std::uint16_t flags = be16(msg, 2);
    if (flags & 0x8000) { ++stats_.responses_skipped; return false; }
    if (be16(msg, 4) < 1) { ++stats_.malformed; return false; }

    try {
        auto [qname, qtype] = decode_dns_question(msg);
        out = DnsQueryRecord{};
        out.timestamp_us = ts_us;
        out.qname = std::move(qname);
        out.record_type = qtype;
        out.source = std::move(source);
        auto split = split_registered_domain(out.qname, suffixes_);
        if (split.single_label) ++stats_.single_label;
        out.subdomain = std::move(split.subdomain);
        out.registered_domain = std::move(split.registered_domain);
        return true;
    } catch (const DnsDecodeError&) {
        ++stats_.malformed;
        return false;
    }
}

bool PcapReader::next(DnsQueryRecord& out) {
    for (;;) {
        std::int64_t ts_us = 0;
        std::uint32_t captured = 0;
        if (!read_packet_header(ts_us, captured)) return false;
        if (captured > kMaxPacketBytes) {
            ++stats_.truncated;
            return false;  // cannot resync after an absurd length
        }
        buf_.resize(captured);
        in_.read(reinterpret_cast<char*>(buf_.data()), captured);
        if (in_.gcount() < static_cast<std::streamsize>(captured)) {
            ++stats_.truncated;
            return false;
        }
        ++stats_.packets_total;
        if (decode_packet(buf_, ts_us, out)) {
            ++stats_.records;
            return true;
        }
    }
}

QueryLogReader::QueryLogReader(std::istream& in, std::vector<std::string> suffixes)
    : in_(in), suffixes_(std::move(suffixes)) {}

bool QueryLogReader::next(DnsQueryRecord& out) {
    std::string line;
    while (std::getline(in_, line)) {
        if (line.empty()) continue;
        ++stats_.packets_total;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("ts") ||
            !j.contains("qname") || !j.contains("qtype") || !j.contains("src") ||
            !j["ts"].is_number_integer() || !j["qname"].is_string() ||
            !j["src"].is_string()) {
            ++stats_.invalid_lines;
            continue;
        }
        std::string qname = lower(j["qname"].get<std::string>());
        if (!qname.empty() && qname.back() == '.') qname.pop_back();
        if (qname.empty() || qname.size() > 253) {
            ++stats_.invalid_lines;
            continue;
        }
        std::optional<RecordType> qtype;
        if (j["qtype"].is_string())
            qtype = RecordType::parse(j["qtype"].get<std::string>());
        else if (j["qtype"].is_number_integer()) {
            const auto code = j["qtype"].get<std::int64_t>();
            if (code >= 0 && code <= 0xffff)
                qtype = RecordType{static_cast<std::uint16_t>(code)};
        }
        if (!qtype) {
            ++stats_.invalid_lines;
            continue;
        }
        std::optional<Label> label;
        if (j.contains("tool") || j.contains("action")) {
            const auto tool = j.contains("tool") && j["tool"].is_string()
                                  ? tool_class_parse(j["tool"].get<std::string>())
                                  : std::nullopt;
            const auto action = j.contains("action") && j["action"].is_string()
                                    ? action_class_parse(j["action"].get<std::string>())
                                    : std::nullopt;
            if (!tool || !action) {
                ++stats_.invalid_lines;
                continue;
            }
            label = Label{*tool, *action};
        }
        out = DnsQueryRecord{};
        out.timestamp_us = j["ts"].get<std::int64_t>();
        out.qname = std::move(qname);
        out.record_type = *qtype;
        out.source = j["src"].get<std::string>();
        out.label = label;
        auto split = split_registered_domain(out.qname, suffixes_);
        if (split.single_label) ++stats_.single_label;
        out.subdomain = std::move(split.subdomain);
        out.registered_domain = std::move(split.registered_domain);
        ++stats_.records;
        return true;
    }
    return false;
}

std::vector<DnsQueryRecord> parse_pcap(std::istream& in, IngestStats* stats) {
    PcapReader reader(in);
    std::vector<DnsQueryRecord> out;
    DnsQueryRecord rec;
    while (reader.next(rec)) out.push_back(std::move(rec));
    if (stats) *stats = reader.stats();
    return out;
}

std::vector<DnsQueryRecord> parse_query_log(std::istream& in, IngestStats* stats) {
    QueryLogReader reader(in);
    std::vector<DnsQueryRecord> out;
    DnsQueryRecord rec;
    while (reader.next(rec)) out.push_back(std::move(rec));
    if (stats) *stats = reader.stats();
    return out;
}

std::vector<DnsQueryRecord> parse_any(std::istream& in, IngestStats* stats) {
    std::uint8_t first[4] = {0, 0, 0, 0};
    in.read(reinterpret_cast<char*>(first), 4);
    const std::streamsize got = in.gcount();
    in.clear();
    in.seekg(0);
    if (got == 4) {
        const std::uint32_t magic = static_cast<std::uint32_t>(first[0]) |
                                    (static_cast<std::uint32_t>(first[1]) << 8) |
                                    (static_cast<std::uint32_t>(first[2]) << 16) |
                                    (static_cast<std::uint32_t>(first[3]) << 24);
        if (magic == kMagicUsec || magic == kMagicNsec || magic == kMagicUsecSwapped ||
            magic == kMagicNsecSwapped)
            return parse_pcap(in, stats);
    }
    return parse_query_log(in, stats);
}

}  // namespace dnstun
