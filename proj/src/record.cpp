#include "dnstun/record.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dnstun {

const RecordType RecordType::A{1};
const RecordType RecordType::Aaaa{28};
const RecordType RecordType::Txt{16};
const RecordType RecordType::Cname{5};
const RecordType RecordType::Mx{15};
const RecordType RecordType::Null{10};
const RecordType RecordType::Srv{33};

namespace {

struct TypeName {
    std::uint16_t code;
    const char* name;
};

constexpr std::array<TypeName, 7> kTypeNames{{
    {1, "A"},
    {28, "AAAA"},
    {16, "TXT"},
    {5, "CNAME"},
    {15, "MX"},
    {10, "NULL"},
    {33, "SRV"},
}};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

}  // namespace

std::string RecordType::name() const {
    for (const auto& t : kTypeNames)
        if (t.code == code_) return t.name;
    return std::to_string(code_);
}

std::optional<RecordType> RecordType::parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const std::string u = upper(text);
    for (const auto& t : kTypeNames)
        if (u == t.name) return RecordType{t.code};
    if (std::all_of(u.begin(), u.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
        unsigned long v = std::stoul(u);
        if (v <= 0xffff) return RecordType{static_cast<std::uint16_t>(v)};
    }
    return std::nullopt;
}

namespace {

const std::array<std::string, kToolClassCount> kToolNames{
    "Legitimate",      "RogueRobinPS", "RogueRobinNet", "Saitama",
    "Symbiote",        "SymbioteDnscat2", "Dnscat2",    "Iodine",
};

const std::array<std::string, kActionClassCount> kActionNames{
    "None", "Handshake", "KeepAlive", "Upload", "Download",
};

}  // namespace

const std::string& tool_class_name(ToolClass t) {
    return kToolNames[static_cast<std::size_t>(t)];
}

std::optional<ToolClass> tool_class_parse(const std::string& name) {
    for (std::size_t i = 0; i < kToolNames.size(); ++i)
        if (kToolNames[i] == name) return static_cast<ToolClass>(i);
    return std::nullopt;
}

const std::string& action_class_name(ActionClass a) {
    return kActionNames[static_cast<std::size_t>(a)];
}

std::optional<ActionClass> action_class_parse(const std::string& name) {
    for (std::size_t i = 0; i < kActionNames.size(); ++i)
        if (kActionNames[i] == name) return static_cast<ActionClass>(i);
    return std::nullopt;
}

}  // namespace dnstun
