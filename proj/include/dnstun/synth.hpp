#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnstun/record.hpp"

namespace dnstun::synth {

/// Generator modes. The three handshake variants differ in C2 reachability
/// (answered, fake-answered, unanswered); all map to the Handshake action.
enum class Scenario : std::uint8_t {
    Handshake = 0,
    HandshakeFakenet,
    HandshakeOffline,
    KeepAlive,
    Upload,
    Download,
};

ActionClass scenario_action(Scenario s);
const std::string& scenario_name(Scenario s);
std::optional<Scenario> scenario_parse(const std::string& name);

/// Perturbations mirroring the validation change categories: transfer
/// length, encoding character set, and resource record. Only meaningful
/// where the tool grammar has that degree of freedom.
struct Overrides {
    std::optional<std::string> encoding_alphabet;
    std::optional<std::size_t> chunk_length;
    std::optional<RecordType> record_type;
};

struct SynthProfile {
    ToolClass tool = ToolClass::Dnscat2;
    std::string domain;  ///< empty = tool default
    Scenario scenario = Scenario::Upload;
    std::uint64_t seed = 0;
    std::size_t count = 0;         ///< records for poll-style scenarios; 0 = default
    std::size_t payload_bytes = 0; ///< upload payload size; 0 = default
    std::string payload_file;      ///< optional payload source; overrides payload_bytes
    Overrides overrides;
};

/// Per-tool subdomain-grammar generators. Deterministic in profile.seed.
/// All throw SynthError(UnsupportedScenario) for scenarios the tool lacks.
std::vector<DnsQueryRecord> gen_roguerobin_ps(const SynthProfile& p);
std::vector<DnsQueryRecord> gen_roguerobin_net(const SynthProfile& p);
std::vector<DnsQueryRecord> gen_saitama(const SynthProfile& p);
std::vector<DnsQueryRecord> gen_symbiote(const SynthProfile& p);
std::vector<DnsQueryRecord> gen_dnscat2(const SynthProfile& p, bool symbiote_variant);
std::vector<DnsQueryRecord> gen_iodine(const SynthProfile& p);

/// Dispatch on profile.tool.
std::vector<DnsQueryRecord> generate(const SynthProfile& p);

/// Background traffic: popularity-weighted registered domains with
/// realistic subdomain habits; heavy-tailed per-domain counts so a sizable
/// share of domains stays below the windowing minimum.
std::vector<DnsQueryRecord> gen_legitimate(std::size_t count, std::uint64_t seed);

struct Plan {
    std::uint64_t seed = 0;
    double legit_ratio = 0.5;  ///< legitimate fraction of the final stream
    std::int64_t base_ts_us = 1754006400000000;  // 2025-08-01 00:00 UTC
    std::int64_t gap_us = 1000;
    std::vector<SynthProfile> profiles;
};

/// The bundled tool-by-scenario grid at desk scale, scenario order
/// HS Offline, HS Fakenet, HS, Download, KeepAlive, Upload x3.
Plan default_plan();

Plan plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const Plan& plan);

/// Concatenates the per-profile streams (tool order preserved) and
/// interleaves legitimate traffic to the requested ratio. Timestamps are
/// assigned across the merged stream, strictly increasing by gap_us.
std::vector<DnsQueryRecord> gen_corpus(const Plan& plan);

/// Query-log JSONL output (the dns ingest wire format), labels included.
void write_query_log(std::span<const DnsQueryRecord> records, std::ostream& out);

/// Minimal DNS query message: header with QR=0/RD/QDCOUNT=1 and one
/// question. Inverse of the ingest question decoder for names in the
/// generator alphabet.
std::vector<std::uint8_t> encode_dns_query(const std::string& qname, RecordType qtype,
                                           std::uint16_t id);

/// Classic pcap (little-endian, microsecond, Ethernet) with one UDP/53
/// query per record. Source IPs come from record.source when it parses as
/// a dotted quad.
void write_pcap(std::span<const DnsQueryRecord> records, std::ostream& out);

}  // namespace dnstun::synth
