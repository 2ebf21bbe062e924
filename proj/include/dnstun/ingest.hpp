#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnstun/record.hpp"

namespace dnstun {

/// Registered-domain boundary: the last two labels, or three when the last
/// two appear in the multi-part suffix list (defaults to a small built-in
/// set, e.g. "co.uk"). Single-label names map to (subdomain="", name) with
/// the flag set.
struct DomainSplit {
    std::string subdomain;
    std::string registered_domain;
    bool single_label = false;
};

const std::vector<std::string>& default_multipart_suffixes();

DomainSplit split_registered_domain(
    const std::string& qname,
    const std::vector<std::string>& multipart_suffixes = default_multipart_suffixes());

/// Decodes the first question of a DNS message: header, label sequence with
/// compression pointers, QTYPE. The qname comes back lower-cased in
/// presentation form (dots between labels; '.', '\' and non-printable bytes
/// escaped). Throws DnsDecodeError.
std::pair<std::string, RecordType> decode_dns_question(std::span<const std::uint8_t> message);

/// Skip/packet counters accumulated by the streaming parsers.
struct IngestStats {
    std::size_t packets_total = 0;
    std::size_t records = 0;
    std::size_t responses_skipped = 0;
    std::size_t truncated = 0;
    std::size_t malformed = 0;
    std::size_t non_dns = 0;       ///< UDP traffic not addressed to port 53
    std::size_t tcp53_ignored = 0;
    std::size_t fragments_skipped = 0;
    std::size_t single_label = 0;
    std::size_t invalid_lines = 0;  ///< query-log mode

    std::size_t skipped_total() const {
        return responses_skipped + truncated + malformed + non_dns + tcp53_ignored +
               fragments_skipped + invalid_lines;
    }
};

/// Streaming classic-pcap reader for DNS queries (UDP destination port 53,
/// QR=0, QDCOUNT>=1). Handles both endiannesses, microsecond and nanosecond
/// timestamp variants, and link types Ethernet(1), RAW(101), Linux SLL(113).
/// Throws CorruptHeaderError if the global header is unusable; per-packet
/// problems are counted and skipped.
class PcapReader {
public:
    explicit PcapReader(std::istream& in,
                        std::vector<std::string> multipart_suffixes =
                            default_multipart_suffixes());

    /// Fetches the next query record. Returns false at end of input.
    bool next(DnsQueryRecord& out);

    const IngestStats& stats() const { return stats_; }

private:
    bool read_packet_header(std::int64_t& ts_us, std::uint32_t& captured_len);
    bool decode_packet(std::span<const std::uint8_t> data, std::int64_t ts_us,
                       DnsQueryRecord& out);

    std::istream& in_;
    std::vector<std::string> suffixes_;
    IngestStats stats_;
    bool swap_ = false;
    bool nanosecond_ = false;
    std::uint32_t link_type_ = 0;
    std::vector<std::uint8_t> buf_;
};

/// Streaming reader for the newline-delimited JSON query-log format
/// (fields: ts, qname, qtype, src, optional tool/action). Invalid lines are
/// counted and skipped.
class QueryLogReader {
public:
    explicit QueryLogReader(std::istream& in,
                            std::vector<std::string> multipart_suffixes =
                                default_multipart_suffixes());

    bool next(DnsQueryRecord& out);

    const IngestStats& stats() const { return stats_; }

private:
    std::istream& in_;
    std::vector<std::string> suffixes_;
    IngestStats stats_;
};

std::vector<DnsQueryRecord> parse_pcap(std::istream& in, IngestStats* stats = nullptr);
std::vector<DnsQueryRecord> parse_query_log(std::istream& in, IngestStats* stats = nullptr);

/// Reads records from a pcap or query-log stream, sniffing the format from
/// the first bytes.
std::vector<DnsQueryRecord> parse_any(std::istream& in, IngestStats* stats = nullptr);

}  // namespace dnstun
