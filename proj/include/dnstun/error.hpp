#pragma once

#include <stdexcept>
#include <string>

namespace dnstun {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a DNS message cannot be decoded.
class DnsDecodeError : public Error {
public:
    enum class Kind { BadLabelLength, PointerLoop, Truncated };

    DnsDecodeError(Kind kind, const std::string& msg)
        : Error("dns decode: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Raised when a capture file's global header is unusable.
class CorruptHeaderError : public Error {
public:
    explicit CorruptHeaderError(const std::string& msg)
        : Error("pcap: " + msg) {}
};

/// Raised by model deserialization.
class ModelError : public Error {
public:
    enum class Kind { BadMagic, UnsupportedVersion, Corrupt };

    ModelError(Kind kind, const std::string& msg)
        : Error("model: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Raised by forest training on unusable input.
class TrainError : public Error {
public:
    enum class Kind { SingleClass, EmptyDataset, UnlabeledRow };

    TrainError(Kind kind, const std::string& msg)
        : Error("train: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Raised by the stratified train/test split.
class SplitError : public Error {
public:
    explicit SplitError(const std::string& msg) : Error("split: " + msg) {}
};

/// Raised by evaluation routines on inconsistent input.
class EvalError : public Error {
public:
    enum class Kind { LengthMismatch, UnknownLabel, SingleClass, NoWindows };

    EvalError(Kind kind, const std::string& msg)
        : Error("eval: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Raised by traffic generators.
class SynthError : public Error {
public:
    enum class Kind { UnsupportedScenario, EmptyPlan, BadProfile };

    SynthError(Kind kind, const std::string& msg)
        : Error("synth: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Raised when a window that must be labeled is not.
class UnlabeledError : public Error {
public:
    explicit UnlabeledError(const std::string& msg) : Error(msg) {}
};

}  // namespace dnstun
