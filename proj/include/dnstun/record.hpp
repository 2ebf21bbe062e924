#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace dnstun {

/// DNS query type. The well-known set used by the covered tools is named;
/// anything else is carried by its numeric code.
class RecordType {
public:
    RecordType() : code_(1) {}
    explicit RecordType(std::uint16_t code) : code_(code) {}

    static const RecordType A;
    static const RecordType Aaaa;
    static const RecordType Txt;
    static const RecordType Cname;
    static const RecordType Mx;
    static const RecordType Null;
    static const RecordType Srv;

    std::uint16_t code() const { return code_; }

    /// Mnemonic for known codes, decimal string otherwise.
    std::string name() const;

    /// Accepts a mnemonic (case-insensitive) or a decimal code.
    static std::optional<RecordType> parse(const std::string& text);

    friend bool operator==(RecordType a, RecordType b) { return a.code_ == b.code_; }
    friend bool operator!=(RecordType a, RecordType b) { return a.code_ != b.code_; }

private:
    std::uint16_t code_;
};

enum class ToolClass : std::uint8_t {
    Legitimate = 0,
    RogueRobinPS,
    RogueRobinNet,
    Saitama,
    Symbiote,
    SymbioteDnscat2,
    Dnscat2,
    Iodine,
};

inline constexpr int kToolClassCount = 8;

enum class ActionClass : std::uint8_t {
    None = 0,
    Handshake,
    KeepAlive,
    Upload,
    Download,
};

inline constexpr int kActionClassCount = 5;

const std::string& tool_class_name(ToolClass t);
std::optional<ToolClass> tool_class_parse(const std::string& name);

const std::string& action_class_name(ActionClass a);
std::optional<ActionClass> action_class_parse(const std::string& name);

/// Ground-truth pair carried by synthetic data or annotated logs.
struct Label {
    ToolClass tool = ToolClass::Legitimate;
    ActionClass action = ActionClass::None;

    friend bool operator==(const Label&, const Label&) = default;
};

/// One observed DNS query.
///
/// Invariants: qname is lower-cased, without trailing dot, and equals
/// subdomain + "." + registered_domain when the subdomain is nonempty.
struct DnsQueryRecord {
    std::int64_t timestamp_us = 0;
    std::string qname;
    std::string subdomain;
    std::string registered_domain;
    RecordType record_type;
    std::string source;
    std::optional<Label> label;

    friend bool operator==(const DnsQueryRecord&, const DnsQueryRecord&) = default;
};

}  // namespace dnstun
