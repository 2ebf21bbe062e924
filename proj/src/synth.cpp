#include "dnstun/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "dnstun/error.hpp"
#include "dnstun/ingest.hpp"
#include "dnstun/rng.hpp"

namespace dnstun::synth {

namespace {

constexpr const char* kBase32Alphabet = "abcdefghijklmnopqrstuvwxyz234567";
constexpr const char* kBase36Alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";

std::string encode_base32(std::span<const std::uint8_t> data, const std::string& alphabet) {
    std::string out;
    out.reserve((data.size() * 8 + 4) / 5);
    std::uint32_t acc = 0;
    int bits = 0;
    for (std::uint8_t b : data) {
        acc = (acc << 8) | b;
        bits += 8;
        while (bits >= 5) {
            bits -= 5;
            out.push_back(alphabet[(acc >> bits) & 0x1f]);
        }
    }
    if (bits > 0) out.push_back(alphabet[(acc << (5 - bits)) & 0x1f]);
    return out;
}

std::string encode_hex(std::span<const std::uint8_t> data) {
    static const char* kHex = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xf]);
    }
    return out;
}

/// Hexadecimal digits mapped through a 16-letter substitution alphabet.
std::string substitute_hex(std::span<const std::uint8_t> data, const std::string& alphabet) {
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(alphabet[b >> 4]);
        out.push_back(alphabet[b & 0xf]);
    }
    return out;
}

std::string hex_u16(std::uint16_t v) {
    char buf[5];
    std::snprintf(buf, sizeof buf, "%04x", v);
    return buf;
}

std::string hex_u8(std::uint8_t v) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", v);
    return buf;
}

/// Splits a flat payload string into dot-separated DNS labels.
std::string dot_split(const std::string& s, std::size_t label_len = 60) {
    std::string out;
    out.reserve(s.size() + s.size() / label_len + 1);
    for (std::size_t i = 0; i < s.size(); i += label_len) {
        if (i) out.push_back('.');
        out += s.substr(i, label_len);
    }
    return out;
}

std::vector<std::uint8_t> resolve_payload(const SynthProfile& p, std::size_t default_bytes) {
    if (!p.payload_file.empty()) {
        std::ifstream in(p.payload_file, std::ios::binary);
        if (!in)
            throw SynthError(SynthError::Kind::BadProfile,
                             "cannot read payload file " + p.payload_file);
        std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
        if (data.empty())
            throw SynthError(SynthError::Kind::BadProfile,
                             "empty payload file " + p.payload_file);
        return data;
    }
    const std::size_t n = p.payload_bytes ? p.payload_bytes : default_bytes;
    Rng rng(derive_seed(p.seed, 7));
    return rng.bytes(n);
}

std::size_t default_count(Scenario s) {
    switch (s) {
        case Scenario::Handshake: return 40;
        case Scenario::HandshakeFakenet: return 150;
        case Scenario::HandshakeOffline: return 150;
        case Scenario::KeepAlive: return 1000;
        case Scenario::Download: return 1200;
        case Scenario::Upload: return 0;  // derived from the payload
    }
    return 0;
}

/// Shared emission state: builds records with sequential placeholder
/// timestamps; the corpus assembler assigns the real clock.
class Emitter {
public:
    Emitter(const SynthProfile& p, ToolClass tool, const std::string& default_domain)
        : label_{tool, scenario_action(p.scenario)},
          domain_(p.domain.empty() ? default_domain : p.domain) {
        Rng rng(derive_seed(p.seed, 99));
        char buf[16];
        std::snprintf(buf, sizeof buf, "10.77.%u.%u",
                      static_cast<unsigned>(rng.uniform_index(200) + 2),
                      static_cast<unsigned>(rng.uniform_index(200) + 2));
        source_ = buf;
    }

    void emit(const std::string& sub, RecordType rtype) {
        DnsQueryRecord r;
        r.timestamp_us = static_cast<std::int64_t>(out_.size());
        r.qname = sub.empty() ? domain_ : sub + "." + domain_;
        r.record_type = rtype;
        r.source = source_;
        r.label = label_;
        auto split = split_registered_domain(r.qname);
        r.subdomain = std::move(split.subdomain);
        r.registered_domain = std::move(split.registered_domain);
        out_.push_back(std::move(r));
    }

    const std::string& domain() const { return domain_; }
    std::size_t emitted() const { return out_.size(); }
    std::vector<DnsQueryRecord> take() { return std::move(out_); }

private:
    Label label_;
    std::string domain_;
    std::string source_;
    std::vector<DnsQueryRecord> out_;
};

std::size_t profile_count(const SynthProfile& p) {
    return p.count ? p.count : default_count(p.scenario);
}

void require_scenarios(const SynthProfile& p, std::initializer_list<Scenario> allowed) {
    if (std::find(allowed.begin(), allowed.end(), p.scenario) == allowed.end())
        throw SynthError(SynthError::Kind::UnsupportedScenario,
                         tool_class_name(p.tool) + " does not support scenario " +
                             scenario_name(p.scenario));
}

constexpr std::initializer_list<Scenario> kAllScenarios = {
    Scenario::Handshake, Scenario::HandshakeFakenet, Scenario::HandshakeOffline,
    Scenario::KeepAlive, Scenario::Upload,           Scenario::Download,
};

std::string checked_alphabet(const Overrides& o, std::size_t size,
                             const std::string& fallback) {
    if (!o.encoding_alphabet) return fallback;
    const std::string& a = *o.encoding_alphabet;
    if (a.size() != size)
        throw SynthError(SynthError::Kind::BadProfile,
                         "encoding alphabet must have " + std::to_string(size) +
                             " characters");
    return a;
}

}  // namespace

ActionClass scenario_action(Scenario s) {
    switch (s) {
        case Scenario::Handshake:
        case Scenario::HandshakeFakenet:
        case Scenario::HandshakeOffline: return ActionClass::Handshake;
        case Scenario::KeepAlive: return ActionClass::KeepAlive;
        case Scenario::Upload: return ActionClass::Upload;
        case Scenario::Download: return ActionClass::Download;
    }
    return ActionClass::None;
}

namespace {
const std::array<std::string, 6> kScenarioNames{
    "handshake", "handshake-fakenet", "handshake-offline",
    "keepalive", "upload",            "download",
};
}

const std::string& scenario_name(Scenario s) {
    return kScenarioNames[static_cast<std::size_t>(s)];
}

std::optional<Scenario> scenario_parse(const std::string& name) {
    for (std::size_t i = 0; i < kScenarioNames.size(); ++i)
        if (kScenarioNames[i] == name) return static_cast<Scenario>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// RogueRobin PowerShell: fields joined by '-', payloads in a 32-character
// lowercase alphabet, record-type rotation during registration. Data query:
//   uid-job-<offset><more>-<payload>
// Idle polls repeat one identical string for the whole session.
// ---------------------------------------------------------------------------
std::vector<DnsQueryRecord> gen_roguerobin_ps(const SynthProfile& p) {
    require_scenarios(p, kAllScenarios);
    static const std::vector<RecordType> kRotation{
        RecordType::A,  RecordType::Aaaa, RecordType::Txt,
        RecordType::Mx, RecordType::Cname, RecordType::Srv,
    };
    const std::string alphabet = checked_alphabet(p.overrides, 32, kBase32Alphabet);
    const std::size_t chunk_chars = p.overrides.chunk_length.value_or(40);

    Emitter em(p, ToolClass::RogueRobinPS, "sync-telemetry.net");
    Rng rng(p.seed);
    const unsigned uid = 100 + static_cast<unsigned>(rng.uniform_index(900));
    const unsigned pid = 1000 + static_cast<unsigned>(rng.uniform_index(9000));
    auto rtype_of = [&](std::size_t i) {
        return p.overrides.record_type.value_or(kRotation[i % kRotation.size()]);
    };

    // registration string: process id, encoded
    const std::string pid_str = std::to_string(pid);
    const std::string reg_payload = encode_base32(
        std::span(reinterpret_cast<const std::uint8_t*>(pid_str.data()), pid_str.size()),
        alphabet);
    const std::string reg = "0-0-01-" + reg_payload;

    auto chunked_job = [&](unsigned job, std::span<const std::uint8_t> data,
                           std::size_t& rtype_idx) {
        const std::size_t bytes_per_chunk = std::max<std::size_t>(1, chunk_chars * 5 / 8);
        const std::size_t chunks = (data.size() + bytes_per_chunk - 1) / bytes_per_chunk;
        for (std::size_t c = 0; c < chunks; ++c) {
            const auto piece = data.subspan(c * bytes_per_chunk,
                                            std::min(bytes_per_chunk,
                                                     data.size() - c * bytes_per_chunk));
            const int more = c + 1 < chunks ? 1 : 0;
            em.emit(std::to_string(uid) + "-" + std::to_string(job) + "-" +
                        std::to_string(c) + std::to_string(more) + "-" +
                        encode_base32(piece, alphabet),
                    rtype_of(rtype_idx++));
        }
    };

    switch (p.scenario) {
        case Scenario::Handshake: {
            const std::size_t target = profile_count(p);
            std::size_t rt = 0;
            for (const RecordType& t : kRotation) {
                const std::size_t retries = 1 + rng.uniform_index(2);
                for (std::size_t i = 0; i < retries; ++i)
                    em.emit(reg, p.overrides.record_type.value_or(t));
            }
            // evaluation string, then host/user reconnaissance, as jobs
            const auto eval = rng.bytes(48);
            chunked_job(1, eval, rt);
            unsigned job = 2;
            while (em.emitted() < target) {
                const auto sysinfo = rng.bytes(64 + rng.uniform_index(64));
                chunked_job(job++, sysinfo, rt);
            }
            break;
        }
        case Scenario::HandshakeFakenet: {
            // C2 never validates: re-registration cycles the record list
            for (std::size_t i = 0; i < profile_count(p); ++i) em.emit(reg, rtype_of(i));
            break;
        }
        case Scenario::HandshakeOffline: {
            // no answers at all: the rotation never advances
            for (std::size_t i = 0; i < profile_count(p); ++i) em.emit(reg, rtype_of(0));
            break;
        }
        case Scenario::KeepAlive: {
            const std::string poll = std::to_string(uid) + "-0-a";
            for (std::size_t i = 0; i < profile_count(p); ++i) em.emit(poll, rtype_of(0));
            break;
        }
        case Scenario::Upload: {
            const auto payload = resolve_payload(p, 2048);
            std::size_t rt = 0;
            const unsigned job = 10 + static_cast<unsigned>(rng.uniform_index(80));
            chunked_job(job, payload, rt);
            break;
        }
        case Scenario::Download: {
            const unsigned job = 10 + static_cast<unsigned>(rng.uniform_index(80));
            for (std::size_t i = 0; i < profile_count(p); ++i) {
                // per-chunk acknowledgement with a cache-busting tail
                const auto nonce = rng.bytes(4);
                em.emit(std::to_string(uid) + "-" + std::to_string(job) + "-" +
                            std::to_string(i) + "1-" + encode_base32(nonce, alphabet),
                        rtype_of(i));
            }
            break;
        }
    }
    return em.take();
}

// ---------------------------------------------------------------------------
// RogueRobin .NET: concatenated fixed-width fields, hexadecimal data mapped
// through a 16-letter substitution alphabet, leading mode character, and a
// separator character from a fixed list before the data part:
//   <mode><uid4><job2><off3><more><sep><payload>
// Non-data queries end in a hard-coded 'q'.
// ---------------------------------------------------------------------------
std::vector<DnsQueryRecord> gen_roguerobin_net(const SynthProfile& p) {
    require_scenarios(p, kAllScenarios);
    static const std::vector<RecordType> kRotation{
        RecordType::Txt, RecordType::A,    RecordType::Srv,
        RecordType::Mx,  RecordType::Aaaa, RecordType::Cname,
    };
    static const char kSeps[] = {'x', 'y', 'z', 'w'};
    const std::string alphabet = checked_alphabet(p.overrides, 16, "ghijklmnopqrstuv");
    const std::size_t chunk_chars = p.overrides.chunk_length.value_or(36);

    Emitter em(p, ToolClass::RogueRobinNet, "cdn-metrics.org");
    Rng rng(p.seed);
    char uid[5];
    std::snprintf(uid, sizeof uid, "%04u", static_cast<unsigned>(rng.uniform_index(10000)));
    char job[3];
    std::snprintf(job, sizeof job, "%02u", static_cast<unsigned>(rng.uniform_index(100)));
    auto rtype_of = [&](std::size_t i) {
        return p.overrides.record_type.value_or(kRotation[i % kRotation.size()]);
    };
    auto off3 = [](std::size_t v) {
        char buf[4];
        std::snprintf(buf, sizeof buf, "%03zu", v % 1000);
        return std::string(buf);
    };

    const auto pid_bytes = rng.bytes(2);
    const std::string reg = std::string("r0000") + "00" +
                            substitute_hex(pid_bytes, alphabet) + "q";

    switch (p.scenario) {
        case Scenario::Handshake: {
            const std::size_t target = profile_count(p);
            for (const RecordType& t : kRotation) {
                const std::size_t retries = 1 + rng.uniform_index(2);
                for (std::size_t i = 0; i < retries; ++i)
                    em.emit(reg, p.overrides.record_type.value_or(t));
            }
            std::size_t rt = 0;
            while (em.emitted() < target) {
                const auto info = rng.bytes(chunk_chars / 2);
                em.emit(std::string("t") + uid + job + off3(rt) + "0" +
                            kSeps[rt % 4] + substitute_hex(info, alphabet),
                        rtype_of(rt));
                ++rt;
            }
            break;
        }
        case Scenario::HandshakeFakenet: {
            for (std::size_t i = 0; i < profile_count(p); ++i) em.emit(reg, rtype_of(i));
            break;
        }
        case Scenario::HandshakeOffline: {
            for (std::size_t i = 0; i < profile_count(p); ++i) em.emit(reg, rtype_of(0));
            break;
        }
        case Scenario::KeepAlive: {
            // poll with a short anti-caching nonce
            for (std::size_t i = 0; i < profile_count(p); ++i) {
                const auto nonce = rng.bytes(1);
                em.emit(std::string("s") + uid + job + substitute_hex(nonce, alphabet) + "q",
                        rtype_of(i));
            }
            break;
        }
        case Scenario::Upload: {
            const auto payload = resolve_payload(p, 2048);
            const std::size_t bytes_per_chunk = std::max<std::size_t>(1, chunk_chars / 2);
            const std::size_t chunks = (payload.size() + bytes_per_chunk - 1) / bytes_per_chunk;
            for (std::size_t c = 0; c < chunks; ++c) {
                const auto piece = std::span(payload).subspan(
                    c * bytes_per_chunk,
                    std::min(bytes_per_chunk, payload.size() - c * bytes_per_chunk));
                em.emit(std::string("t") + uid + job + off3(c) +
                            (c + 1 < chunks ? "1" : "0") + kSeps[c % 4] +
                            substitute_hex(piece, alphabet),
                        rtype_of(c));
            }
            break;
        }
        case Scenario::Download: {
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(std::string("d") + uid + job + off3(i) + "q", rtype_of(i));
            break;
        }
    }
    return em.take();
}

// ---------------------------------------------------------------------------
// Saitama: base36 with per-session shuffled symbol positions and a counter
// that starts at a random value and rotates the encoding of every data
// packet. Keep-alive polls do not advance the counter, so they repeat one
// string, matching the observed uniformity of its idle traffic.
// ---------------------------------------------------------------------------
std::vector<DnsQueryRecord> gen_saitama(const SynthProfile& p) {
    require_scenarios(p, kAllScenarios);
    static const std::vector<RecordType> kCycle{RecordType::A, RecordType::Aaaa,
                                                RecordType::Txt};
    const std::size_t chunk_bytes = p.overrides.chunk_length.value_or(12);

    Emitter em(p, ToolClass::Saitama, "softupdate.info");
    Rng rng(p.seed);
    std::string alphabet = checked_alphabet(p.overrides, 36, kBase36Alphabet);
    {
        std::vector<char> shuffled(alphabet.begin(), alphabet.end());
        Rng alpha_rng(derive_seed(p.seed, 2));
        alpha_rng.shuffle(shuffled);
        alphabet.assign(shuffled.begin(), shuffled.end());
    }
    std::uint64_t counter = rng.uniform_index(1296);

    auto encode = [&](std::span<const std::uint8_t> data, bool advance) {
        std::string out;
        out.reserve(data.size() * 2);
        for (std::uint8_t b : data) {
            out.push_back(alphabet[(b / 36 + counter) % 36]);
            out.push_back(alphabet[(b % 36 + counter) % 36]);
        }
        if (advance) ++counter;
        return out;
    };
    auto rtype_of = [&](std::size_t i) {
        return p.overrides.record_type.value_or(kCycle[i % kCycle.size()]);
    };

    const auto id = rng.bytes(2);
    auto message = [&](std::uint8_t marker, std::uint8_t arg,
                       std::span<const std::uint8_t> data, bool advance) {
        std::vector<std::uint8_t> bytes{marker, id[0], id[1], arg};
        bytes.insert(bytes.end(), data.begin(), data.end());
        return encode(bytes, advance);
    };

    switch (p.scenario) {
        case Scenario::Handshake: {
            const std::size_t target = profile_count(p);
            em.emit(message(0x01, 0, {}, true), rtype_of(0));
            for (std::size_t i = 1; em.emitted() < target; ++i)
                em.emit(message(0x02, 0, {}, false), rtype_of(i));
            break;
        }
        case Scenario::HandshakeFakenet:
        case Scenario::HandshakeOffline: {
            const std::string reg = message(0x01, 0, {}, false);
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(reg, rtype_of(p.scenario == Scenario::HandshakeFakenet ? i : 0));
            break;
        }
        case Scenario::KeepAlive: {
            const std::string poll = message(0x02, 0, {}, false);
            for (std::size_t i = 0; i < profile_count(p); ++i) em.emit(poll, rtype_of(i));
            break;
        }
        case Scenario::Upload: {
            const auto payload = resolve_payload(p, 1024);
            const std::size_t chunks =
                (payload.size() + chunk_bytes - 1) / std::max<std::size_t>(1, chunk_bytes);
            for (std::size_t c = 0; c < chunks; ++c) {
                const auto piece = std::span(payload).subspan(
                    c * chunk_bytes, std::min(chunk_bytes, payload.size() - c * chunk_bytes));
                em.emit(message(0x03, static_cast<std::uint8_t>(c & 0xff), piece, true),
                        rtype_of(c));
            }
            break;
        }
        case Scenario::Download: {
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(message(0x04, static_cast<std::uint8_t>(i & 0xff), {}, true),
                        rtype_of(i));
            break;
        }
    }
    return em.take();
}

// ---------------------------------------------------------------------------
// Symbiote: packetNumber.machineID.hexPayload for uploads over A records
// (packet number starting at 11111), packetNumber.machineID for downloads
// over TXT (starting at 0). No handshake or idle traffic.
// ---------------------------------------------------------------------------
std::vector<DnsQueryRecord> gen_symbiote(const SynthProfile& p) {
    require_scenarios(p, {Scenario::Upload, Scenario::Download});
    const std::size_t chunk_bytes = p.overrides.chunk_length.value_or(15);

    Emitter em(p, ToolClass::Symbiote, "assets-cache.net");
    Rng rng(p.seed);
    const std::string machine_id = encode_hex(rng.bytes(6));

    if (p.scenario == Scenario::Upload) {
        const auto payload = resolve_payload(p, 1024);
        const std::size_t chunks =
            (payload.size() + chunk_bytes - 1) / std::max<std::size_t>(1, chunk_bytes);
        std::uint64_t packet_number = 11111;
        for (std::size_t c = 0; c < chunks; ++c) {
            const auto piece = std::span(payload).subspan(
                c * chunk_bytes, std::min(chunk_bytes, payload.size() - c * chunk_bytes));
            em.emit(std::to_string(packet_number++) + "." + machine_id + "." +
                        encode_hex(piece),
                    p.overrides.record_type.value_or(RecordType::A));
        }
    } else {
        std::uint64_t packet_number = 0;  // first query asks for the script signature
        for (std::size_t i = 0; i < profile_count(p); ++i)
            em.emit(std::to_string(packet_number++) + "." + machine_id,
                    p.overrides.record_type.value_or(RecordType::Txt));
    }
    return em.take();
}

// ---------------------------------------------------------------------------
// DNSCat2: a TCP-like header (packet id, type, session, seq, ack) carried in
// the subdomain. The standard build encrypts, leaving random-looking bytes
// after the header on every packet; the Symbiote build runs --no-encryption
// with domain git.bancodobrasil.dev, TXT records, and base32-style payload
// instead of hex.
// ---------------------------------------------------------------------------
std::vector<DnsQueryRecord> gen_dnscat2(const SynthProfile& p, bool symbiote_variant) {
    require_scenarios(p, kAllScenarios);
    static const std::vector<RecordType> kCycle{RecordType::Txt, RecordType::Cname,
                                                RecordType::Mx};
    const std::size_t chunk_bytes = p.overrides.chunk_length.value_or(24);

    Emitter em(p, symbiote_variant ? ToolClass::SymbioteDnscat2 : ToolClass::Dnscat2,
               symbiote_variant ? "git.bancodobrasil.dev" : "tunnel-svc.net");
    Rng rng(p.seed);
    std::uint16_t packet_id = static_cast<std::uint16_t>(rng.next_u64());
    const std::uint16_t session = static_cast<std::uint16_t>(rng.next_u64());
    std::uint16_t seq = static_cast<std::uint16_t>(rng.next_u64());
    std::uint16_t ack = static_cast<std::uint16_t>(rng.next_u64());

    // The full-encoding-method override re-encodes entire packets in base32;
    // by default the header is hex, with the payload hex (standard, i.e.
    // encrypted residue) or base32 (Symbiote build, plain base64-style).
    const bool method_override = p.overrides.encoding_alphabet.has_value();
    const std::string b32 =
        method_override ? checked_alphabet(p.overrides, 32, kBase32Alphabet)
                        : kBase32Alphabet;

    auto rtype_of = [&](std::size_t i) -> RecordType {
        if (p.overrides.record_type) return *p.overrides.record_type;
        if (symbiote_variant) return RecordType::Txt;
        return kCycle[i % kCycle.size()];
    };

    auto packet = [&](std::uint8_t type, std::uint16_t s, std::uint16_t a,
                      std::span<const std::uint8_t> payload, bool fresh_id) {
        if (fresh_id) ++packet_id;
        if (method_override) {
            std::vector<std::uint8_t> raw{
                static_cast<std::uint8_t>(packet_id >> 8),
                static_cast<std::uint8_t>(packet_id & 0xff),
                type,
                static_cast<std::uint8_t>(session >> 8),
                static_cast<std::uint8_t>(session & 0xff),
                static_cast<std::uint8_t>(s >> 8),
                static_cast<std::uint8_t>(s & 0xff),
                static_cast<std::uint8_t>(a >> 8),
                static_cast<std::uint8_t>(a & 0xff),
            };
            if (!symbiote_variant) {
                const auto nonce = rng.bytes(6);
                raw.insert(raw.end(), nonce.begin(), nonce.end());
            }
            raw.insert(raw.end(), payload.begin(), payload.end());
            return dot_split(encode_base32(raw, b32));
        }
        std::string s_out = hex_u16(packet_id) + hex_u8(type) + hex_u16(session) +
                            hex_u16(s) + hex_u16(a);
        if (!symbiote_variant) s_out += encode_hex(rng.bytes(6));
        if (!payload.empty())
            s_out += symbiote_variant ? encode_base32(payload, b32) : encode_hex(payload);
        return dot_split(s_out);
    };

    switch (p.scenario) {
        case Scenario::Handshake: {
            const std::size_t target = profile_count(p);
            em.emit(packet(0x00, seq, 0, {}, true), rtype_of(0));
            for (std::size_t i = 1; em.emitted() < target; ++i)
                em.emit(packet(0x01, seq, ack, {}, true), rtype_of(i));
            break;
        }
        case Scenario::HandshakeFakenet: {
            // bad answers force a fresh SYN per attempt
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(packet(0x00, seq, 0, {}, true), rtype_of(i));
            break;
        }
        case Scenario::HandshakeOffline: {
            // unanswered SYN is retransmitted unchanged
            const std::string syn = packet(0x00, seq, 0, {}, true);
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(syn, rtype_of(i));
            break;
        }
        case Scenario::KeepAlive: {
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(packet(0x01, seq, ack, {}, true), rtype_of(i));
            break;
        }
        case Scenario::Upload: {
            const auto payload = resolve_payload(p, 2048);
            const std::size_t chunks =
                (payload.size() + chunk_bytes - 1) / std::max<std::size_t>(1, chunk_bytes);
            for (std::size_t c = 0; c < chunks; ++c) {
                const auto piece = std::span(payload).subspan(
                    c * chunk_bytes, std::min(chunk_bytes, payload.size() - c * chunk_bytes));
                em.emit(packet(0x01, seq, ack, piece, true), rtype_of(c));
                seq = static_cast<std::uint16_t>(seq + piece.size());
            }
            break;
        }
        case Scenario::Download: {
            for (std::size_t i = 0; i < profile_count(p); ++i) {
                em.emit(packet(0x01, seq, ack, {}, true), rtype_of(i));
                ack = static_cast<std::uint16_t>(ack + 180);
            }
            break;
        }
    }
    return em.take();
}

// ---------------------------------------------------------------------------
// Iodine: IPv4-over-DNS tunneling with dense upstream frames close to the
// maximum query length (chunk_length override sets that maximum), a leading
// user character, short varied pings when idle, and NULL records by default.
// ---------------------------------------------------------------------------
std::vector<DnsQueryRecord> gen_iodine(const SynthProfile& p) {
    require_scenarios(p, kAllScenarios);
    const std::string alphabet = checked_alphabet(p.overrides, 32, kBase32Alphabet);

    Emitter em(p, ToolClass::Iodine, "t1.vpn-egress.net");
    Rng rng(p.seed);
    const char user = "0123456789abcdef"[rng.uniform_index(16)];
    const RecordType rtype = p.overrides.record_type.value_or(RecordType::Null);

    const std::size_t max_qname = p.overrides.chunk_length.value_or(225);
    // content chars available once the domain, its joining dot, and the
    // label-splitting dots are paid for
    const std::size_t domain_len = em.domain().size();
    std::size_t budget = max_qname > domain_len + 2 ? max_qname - domain_len - 1 : 8;
    auto fits = [&](std::size_t c) { return c + (c > 0 ? (c - 1) / 60 : 0) <= budget; };
    std::size_t content_chars = budget;
    while (content_chars > 8 && !fits(content_chars)) --content_chars;

    auto frame = [&](std::uint8_t kind, std::size_t seq_no, std::size_t payload_chars) {
        // 4-char header: frame kind + sequence, base32-coded
        const std::uint8_t hdr[3] = {kind, static_cast<std::uint8_t>(seq_no >> 8),
                                     static_cast<std::uint8_t>(seq_no & 0xff)};
        std::string s(1, user);
        s += encode_base32(hdr, alphabet);
        if (payload_chars > 0) {
            const std::size_t bytes = std::max<std::size_t>(1, payload_chars * 5 / 8);
            s += encode_base32(rng.bytes(bytes), alphabet);
            if (s.size() > content_chars) s.resize(content_chars);
        }
        return dot_split(s);
    };

    switch (p.scenario) {
        case Scenario::Handshake: {
            const std::size_t target = profile_count(p);
            std::size_t probe_len = 4;
            for (std::size_t i = 0; em.emitted() < target; ++i) {
                switch (i % 5) {
                    case 0: em.emit(std::string("v") + encode_base32(rng.bytes(4), alphabet), rtype); break;
                    case 1: em.emit(std::string("l") + encode_base32(rng.bytes(6), alphabet), rtype); break;
                    case 2: em.emit(std::string("z") + encode_base32(rng.bytes(3), alphabet), rtype); break;
                    case 3:
                        em.emit(std::string("r") + encode_base32(rng.bytes(probe_len), alphabet), rtype);
                        probe_len = std::min<std::size_t>(probe_len * 2, 64);
                        break;
                    default: em.emit(std::string("s") + encode_base32(rng.bytes(2), alphabet), rtype); break;
                }
            }
            break;
        }
        case Scenario::HandshakeFakenet:
        case Scenario::HandshakeOffline: {
            // version probe carries a fresh cache-busting value per retry
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(std::string("v") + encode_base32(rng.bytes(4), alphabet), rtype);
            break;
        }
        case Scenario::KeepAlive: {
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(std::string("p") + user + encode_base32(rng.bytes(2), alphabet),
                        rtype);
            break;
        }
        case Scenario::Upload: {
            const std::size_t payload_chars = content_chars > 5 ? content_chars - 5 : 1;
            const std::size_t bytes_per_frame =
                std::max<std::size_t>(1, payload_chars * 5 / 8);
            const auto payload = resolve_payload(p, 8192);
            const std::size_t frames =
                (payload.size() + bytes_per_frame - 1) / bytes_per_frame;
            for (std::size_t f = 0; f < frames; ++f)
                em.emit(frame(0x10, f, payload_chars), rtype);
            break;
        }
        case Scenario::Download: {
            // downstream acknowledgements padded with lazy-mode filler
            const std::size_t payload_chars = content_chars / 2;
            for (std::size_t i = 0; i < profile_count(p); ++i)
                em.emit(frame(0x20, i, payload_chars), rtype);
            break;
        }
    }
    return em.take();
}

std::vector<DnsQueryRecord> generate(const SynthProfile& p) {
    switch (p.tool) {
        case ToolClass::RogueRobinPS: return gen_roguerobin_ps(p);
        case ToolClass::RogueRobinNet: return gen_roguerobin_net(p);
        case ToolClass::Saitama: return gen_saitama(p);
        case ToolClass::Symbiote: return gen_symbiote(p);
        case ToolClass::SymbioteDnscat2: return gen_dnscat2(p, true);
        case ToolClass::Dnscat2: return gen_dnscat2(p, false);
        case ToolClass::Iodine: return gen_iodine(p);
        case ToolClass::Legitimate:
            throw SynthError(SynthError::Kind::BadProfile,
                             "use gen_legitimate for background traffic");
    }
    throw SynthError(SynthError::Kind::BadProfile, "unknown tool");
}

// ---------------------------------------------------------------------------
// Legitimate background traffic
// ---------------------------------------------------------------------------
namespace {

const std::vector<std::string>& legit_words() {
    static const std::vector<std::string> kWords{
        "acorn",  "aurora", "basket", "beacon", "birch",  "bluebird", "breeze",
        "brook",  "canvas", "cedar",  "cliff",  "clover", "cobalt",   "comet",
        "coral",  "crane",  "cypress","dahlia", "delta",  "drift",    "ember",
        "falcon", "fern",   "flint",  "fox",    "garnet", "glacier",  "grove",
        "harbor", "hazel",  "heron",  "hollow", "iris",   "ivory",    "jasper",
        "juniper","kestrel","lagoon", "larch",  "laurel", "linden",   "lotus",
        "lumen",  "maple",  "marble", "meadow", "mesa",   "mistral",  "molten",
        "moss",   "nectar", "nimbus", "north",  "oak",    "ocean",    "onyx",
        "opal",   "orchid", "osprey", "otter",  "pebble", "pine",     "plume",
        "prairie","quartz", "quill",  "raven",  "reef",   "ridge",    "river",
        "robin",  "rowan",  "saffron","sage",   "sandbar","sequoia",  "shale",
        "sierra", "silver", "slate",  "sparrow","spruce", "starling", "stone",
        "summit", "sunder", "swift",  "tamarind","teal",  "thistle",  "tide",
        "timber", "topaz",  "trail",  "tulip",  "tundra", "umber",    "valley",
        "vapor",  "verdant","violet", "walnut", "waverly","willow",   "wren",
        "yarrow", "zephyr", "zinnia", "anchor", "atlas",  "bramble",  "cairn",
        "dune",   "ellipse","fjord",  "gale",   "harvest","inlet",    "knoll",
        "lichen", "mirth",  "nook",   "orbit",  "pond",
    };
    return kWords;
}

const std::vector<std::string>& legit_tlds() {
    static const std::vector<std::string> kTlds{"com", "net", "org", "io"};
    return kTlds;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<DnsQueryRecord> gen_legitimate(std::size_t count, std::uint64_t seed) {
    const auto& words = legit_words();
    const auto& tlds = legit_tlds();
    const std::size_t n_domains = words.size() * tlds.size();

    // popularity ~ 1 / rank^1.6: the head produces full windows, the tail
    // stays below the windowing minimum
    std::vector<double> cdf(n_domains);
    double acc = 0.0;
    for (std::size_t r = 0; r < n_domains; ++r) {
        acc += std::pow(static_cast<double>(r + 1), -1.6);
        cdf[r] = acc;
    }

    static const std::vector<std::string> kBeaconSubs{"", "www", "api", "telemetry",
                                                      "status", "ping"};
    static const std::vector<std::string> kPoolSubs{
        "www", "mail", "api",   "cdn-1", "cdn-2", "img",
        "static", "app", "login", "shop",  "blog",  "assets"};
    static const std::vector<std::string> kDiverseWords{
        "updates", "events", "metrics", "edge", "node", "data",
        "sync",    "push",   "feeds",   "geo",  "auth", "time"};

    std::vector<DnsQueryRecord> out;
    out.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform01() * acc;
        const std::size_t rank = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const std::string domain =
            words[rank % words.size()] + "." + tlds[rank / words.size()];

        const std::uint64_t h = mix64(seed ^ (rank * 0x1000193ull));
        std::string sub;
        const unsigned mode = h % 10;
        if (mode < 3) {
            sub = kBeaconSubs[(h >> 8) % kBeaconSubs.size()];
        } else if (mode < 6) {
            const std::size_t pool = 2 + ((h >> 8) % 4);
            const std::size_t first = (h >> 16) % kPoolSubs.size();
            sub = kPoolSubs[(first + rng.uniform_index(pool)) % kPoolSubs.size()];
        } else {
            switch (rng.uniform_index(5)) {
                case 0: sub = kDiverseWords[rng.uniform_index(kDiverseWords.size())]; break;
                case 1: sub = "cdn-" + std::to_string(rng.uniform_index(30)); break;
                case 2:
                    sub = kDiverseWords[rng.uniform_index(kDiverseWords.size())] +
                          std::to_string(rng.uniform_index(10));
                    break;
                case 3: {
                    static const char* kHexDigits = "0123456789abcdef";
                    for (int k = 0; k < 6; ++k) sub.push_back(kHexDigits[rng.uniform_index(16)]);
                    break;
                }
                default: sub = ""; break;
            }
        }

        DnsQueryRecord r;
        r.timestamp_us = static_cast<std::int64_t>(i);
        r.qname = sub.empty() ? domain : sub + "." + domain;
        const double t = rng.uniform01();
        r.record_type = t < 0.80   ? RecordType::A
                        : t < 0.95 ? RecordType::Aaaa
                        : t < 0.98 ? RecordType::Txt
                                   : RecordType::Mx;
        char src[16];
        std::snprintf(src, sizeof src, "10.9.%u.%u",
                      static_cast<unsigned>((h >> 24) % 4 + 1),
                      static_cast<unsigned>(rng.uniform_index(60) + 10));
        r.source = src;
        r.label = Label{ToolClass::Legitimate, ActionClass::None};
        auto split = split_registered_domain(r.qname);
        r.subdomain = std::move(split.subdomain);
        r.registered_domain = std::move(split.registered_domain);
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plans and corpus assembly
// ---------------------------------------------------------------------------
Plan default_plan() {
    Plan plan;
    plan.seed = 0;
    plan.legit_ratio = 0.53;

    struct UploadSpec {
        std::size_t rsa, ed25519, file;
    };
    struct ToolSpec {
        ToolClass tool;
        bool handshakes;
        std::size_t keepalive;  // 0 = unsupported
        std::size_t download;
        UploadSpec uploads;
    };
    // upload payload sizes tuned to land each tool near the same record count
    const std::vector<ToolSpec> specs{
        {ToolClass::RogueRobinPS, true, 1100, 1300, {3400, 420, 67600}},
        {ToolClass::RogueRobinNet, true, 1100, 1300, {3400, 420, 47600}},
        {ToolClass::Saitama, true, 240, 1300, {3400, 420, 40800}},
        {ToolClass::Symbiote, false, 0, 2600, {3400, 420, 41100}},
        {ToolClass::SymbioteDnscat2, true, 1100, 1300, {3400, 420, 64800}},
        {ToolClass::Dnscat2, true, 1100, 1300, {3400, 420, 64800}},
        {ToolClass::Iodine, true, 1100, 1300, {3400, 420, 350000}},
    };

    std::uint64_t next_seed = 1;
    auto add = [&](ToolClass tool, Scenario s, std::size_t count, std::size_t payload) {
        SynthProfile p;
        p.tool = tool;
        p.scenario = s;
        p.seed = next_seed++;
        p.count = count;
        p.payload_bytes = payload;
        plan.profiles.push_back(std::move(p));
    };

    for (const ToolSpec& t : specs) {
        if (t.handshakes) {
            add(t.tool, Scenario::HandshakeOffline, 150, 0);
            add(t.tool, Scenario::HandshakeFakenet, 150, 0);
            add(t.tool, Scenario::Handshake, 40, 0);
        }
        add(t.tool, Scenario::Download, t.download, 0);
        if (t.keepalive) add(t.tool, Scenario::KeepAlive, t.keepalive, 0);
        add(t.tool, Scenario::Upload, 0, t.uploads.rsa);
        add(t.tool, Scenario::Upload, 0, t.uploads.ed25519);
        add(t.tool, Scenario::Upload, 0, t.uploads.file);
    }
    return plan;
}

Plan plan_from_json(const nlohmann::json& j) {
    Plan plan;
    if (!j.is_object()) throw SynthError(SynthError::Kind::BadProfile, "plan must be an object");
    plan.seed = j.value("seed", std::uint64_t{0});
    plan.legit_ratio = j.value("legit_ratio", 0.5);
    plan.base_ts_us = j.value("base_ts_us", plan.base_ts_us);
    plan.gap_us = j.value("gap_us", plan.gap_us);
    if (!(plan.legit_ratio >= 0.0 && plan.legit_ratio < 1.0))
        throw SynthError(SynthError::Kind::BadProfile, "legit_ratio must be in [0, 1)");
    if (!j.contains("profiles") || !j["profiles"].is_array())
        throw SynthError(SynthError::Kind::BadProfile, "plan needs a profiles array");
    for (const auto& pj : j["profiles"]) {
        SynthProfile p;
        const auto tool = tool_class_parse(pj.value("tool", ""));
        if (!tool || *tool == ToolClass::Legitimate)
            throw SynthError(SynthError::Kind::BadProfile,
                             "bad tool in profile: " + pj.value("tool", ""));
        p.tool = *tool;
        const auto scenario = scenario_parse(pj.value("scenario", ""));
        if (!scenario)
            throw SynthError(SynthError::Kind::BadProfile,
                             "bad scenario in profile: " + pj.value("scenario", ""));
        p.scenario = *scenario;
        p.domain = pj.value("domain", "");
        p.seed = pj.value("seed", std::uint64_t{0});
        p.count = pj.value("count", std::size_t{0});
        p.payload_bytes = pj.value("payload_bytes", std::size_t{0});
        p.payload_file = pj.value("payload_file", "");
        if (pj.contains("overrides")) {
            const auto& o = pj["overrides"];
            if (o.contains("encoding_alphabet"))
                p.overrides.encoding_alphabet = o["encoding_alphabet"].get<std::string>();
            if (o.contains("chunk_length"))
                p.overrides.chunk_length = o["chunk_length"].get<std::size_t>();
            if (o.contains("record_type")) {
                const auto rt = RecordType::parse(o["record_type"].get<std::string>());
                if (!rt)
                    throw SynthError(SynthError::Kind::BadProfile,
                                     "bad record_type override");
                p.overrides.record_type = rt;
            }
        }
        plan.profiles.push_back(std::move(p));
    }
    return plan;
}

nlohmann::json plan_to_json(const Plan& plan) {
    nlohmann::json j;
    j["seed"] = plan.seed;
    j["legit_ratio"] = plan.legit_ratio;
    j["base_ts_us"] = plan.base_ts_us;
    j["gap_us"] = plan.gap_us;
    j["profiles"] = nlohmann::json::array();
    for (const SynthProfile& p : plan.profiles) {
        nlohmann::json pj;
        pj["tool"] = tool_class_name(p.tool);
        pj["scenario"] = scenario_name(p.scenario);
        if (!p.domain.empty()) pj["domain"] = p.domain;
        pj["seed"] = p.seed;
        if (p.count) pj["count"] = p.count;
        if (p.payload_bytes) pj["payload_bytes"] = p.payload_bytes;
        if (!p.payload_file.empty()) pj["payload_file"] = p.payload_file;
        nlohmann::json oj = nlohmann::json::object();
        if (p.overrides.encoding_alphabet) oj["encoding_alphabet"] = *p.overrides.encoding_alphabet;
        if (p.overrides.chunk_length) oj["chunk_length"] = *p.overrides.chunk_length;
        if (p.overrides.record_type) oj["record_type"] = p.overrides.record_type->name();
        if (!oj.empty()) pj["overrides"] = oj;
        j["profiles"].push_back(pj);
    }
    return j;
}

std::vector<DnsQueryRecord> gen_corpus(const Plan& plan) {
    if (plan.profiles.empty())
        throw SynthError(SynthError::Kind::EmptyPlan, "plan has no profiles");

    std::vector<DnsQueryRecord> malicious;
    for (const SynthProfile& p : plan.profiles) {
        auto part = generate(p);
        malicious.insert(malicious.end(), std::make_move_iterator(part.begin()),
                         std::make_move_iterator(part.end()));
    }

    std::vector<DnsQueryRecord> legit;
    if (plan.legit_ratio > 0.0) {
        const double m = static_cast<double>(malicious.size());
        const std::size_t l = static_cast<std::size_t>(
            std::llround(m * plan.legit_ratio / (1.0 - plan.legit_ratio)));
        legit = gen_legitimate(l, derive_seed(plan.seed, 9999991));
    }

    // proportional interleave, deterministic
    const std::size_t total = malicious.size() + legit.size();
    std::vector<DnsQueryRecord> out;
    out.reserve(total);
    std::size_t em = 0, el = 0;
    for (std::size_t slot = 0; slot < total; ++slot) {
        const bool want_legit =
            el < legit.size() &&
            (em >= malicious.size() ||
             el * malicious.size() <= em * legit.size());
        DnsQueryRecord& r = want_legit ? legit[el++] : malicious[em++];
        r.timestamp_us = plan.base_ts_us + static_cast<std::int64_t>(slot) * plan.gap_us;
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output formats
// ---------------------------------------------------------------------------
void write_query_log(std::span<const DnsQueryRecord> records, std::ostream& out) {
    for (const DnsQueryRecord& r : records) {
        nlohmann::json j;
        j["ts"] = r.timestamp_us;
        j["qname"] = r.qname;
        j["qtype"] = r.record_type.name();
        j["src"] = r.source;
        if (r.label) {
            j["tool"] = tool_class_name(r.label->tool);
            j["action"] = action_class_name(r.label->action);
        }
        out << j.dump() << '\n';
    }
}

std::vector<std::uint8_t> encode_dns_query(const std::string& qname, RecordType qtype,
                                           std::uint16_t id) {
    std::vector<std::uint8_t> msg{
        static_cast<std::uint8_t>(id >> 8), static_cast<std::uint8_t>(id & 0xff),
        0x01, 0x00,  // RD
        0x00, 0x01,  // QDCOUNT
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    };
    std::string label;
    auto flush = [&] {
        msg.push_back(static_cast<std::uint8_t>(label.size()));
        msg.insert(msg.end(), label.begin(), label.end());
        label.clear();
    };
    if (!qname.empty()) {
        for (char c : qname) {
            if (c == '.')
                flush();
            else
                label.push_back(c);
        }
        flush();
    }
    msg.push_back(0);
    msg.push_back(static_cast<std::uint8_t>(qtype.code() >> 8));
    msg.push_back(static_cast<std::uint8_t>(qtype.code() & 0xff));
    msg.push_back(0x00);
    msg.push_back(0x01);  // IN
    return msg;
}

namespace {

void put_le32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_le16(std::ostream& out, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(b, 2);
}

void put_be16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
}

std::uint32_t parse_ipv4(const std::string& s) {
    unsigned a = 0, b = 0, c = 0, d = 0;
    if (std::sscanf(s.c_str(), "%u.%u.%u.%u", &a, &b, &c, &d) == 4 && a < 256 &&
        b < 256 && c < 256 && d < 256)
        return (a << 24) | (b << 16) | (c << 8) | d;
    return (10u << 24) | (200u << 16) | 1u;  // fallback pool
}

std::uint16_t ipv4_checksum(const std::string& header) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < header.size(); i += 2)
        sum += (static_cast<std::uint8_t>(header[i]) << 8) |
               static_cast<std::uint8_t>(header[i + 1]);
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    return static_cast<std::uint16_t>(~sum);
}

}  // namespace

void write_pcap(std::span<const DnsQueryRecord> records, std::ostream& out) {
    put_le32(out, 0xa1b2c3d4);
    put_le16(out, 2);
    put_le16(out, 4);
    put_le32(out, 0);      // thiszone
    put_le32(out, 0);      // sigfigs
    put_le32(out, 65535);  // snaplen
    put_le32(out, 1);      // Ethernet

    std::uint16_t dns_id = 0;
    for (const DnsQueryRecord& r : records) {
        const auto dns = encode_dns_query(r.qname, r.record_type, dns_id++);

        std::string ip;
        const std::uint16_t ip_len = static_cast<std::uint16_t>(20 + 8 + dns.size());
        ip.push_back(0x45);
        ip.push_back(0x00);
        put_be16(ip, ip_len);
        put_be16(ip, dns_id);
        put_be16(ip, 0x4000);  // DF
        ip.push_back(64);      // TTL
        ip.push_back(17);      // UDP
        put_be16(ip, 0);       // checksum placeholder
        const std::uint32_t src = parse_ipv4(r.source);
        const std::uint32_t dst = (10u << 24) | (53u << 16) | 53u;
        for (int i = 3; i >= 0; --i) ip.push_back(static_cast<char>((src >> (8 * i)) & 0xff));
        for (int i = 3; i >= 0; --i) ip.push_back(static_cast<char>((dst >> (8 * i)) & 0xff));
        const std::uint16_t csum = ipv4_checksum(ip);
        ip[10] = static_cast<char>(csum >> 8);
        ip[11] = static_cast<char>(csum & 0xff);

        std::string udp;
        put_be16(udp, static_cast<std::uint16_t>(32768 + (dns_id % 16384)));
        put_be16(udp, 53);
        put_be16(udp, static_cast<std::uint16_t>(8 + dns.size()));
        put_be16(udp, 0);  // checksum optional over IPv4

        const std::uint32_t frame_len = static_cast<std::uint32_t>(14 + ip.size() +
                                                                   udp.size() + dns.size());
        put_le32(out, static_cast<std::uint32_t>(r.timestamp_us / 1000000));
        put_le32(out, static_cast<std::uint32_t>(r.timestamp_us % 1000000));
        put_le32(out, frame_len);
        put_le32(out, frame_len);

        static const char kDstMac[6] = {0x02, 0x35, 0x35, 0x00, 0x00, 0x01};
        out.write(kDstMac, 6);
        char src_mac[6] = {0x02, 0x35, 0x35, 0x00,
                           static_cast<char>((src >> 8) & 0xff),
                           static_cast<char>(src & 0xff)};
        out.write(src_mac, 6);
        out.put(0x08);
        out.put(0x00);
        out.write(ip.data(), static_cast<std::streamsize>(ip.size()));
        out.write(udp.data(), static_cast<std::streamsize>(udp.size()));
        out.write(reinterpret_cast<const char*>(dns.data()),
                  static_cast<std::streamsize>(dns.size()));
    }
}

}  // namespace dnstun::synth
