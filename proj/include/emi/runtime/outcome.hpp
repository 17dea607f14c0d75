#pragma once

#include "emi/idl/value.hpp"

#include <string>
#include <string_view>

namespace emi::runtime {

/// Result of one invocation: a response value or a named fault. Faults raised
/// by the runtime itself use the reserved names below; application faults use
/// the names declared in the interface.
class Outcome {
public:
    static Outcome response(idl::Value v) { return Outcome(std::move(v), "", false); }
    static Outcome fault(std::string name, idl::Value payload) {
        return Outcome(std::move(payload), std::move(name), true);
    }

    bool isFault() const { return isFault_; }
    const idl::Value& value() const { return value_; } // response or fault payload
    const std::string& faultName() const { return faultName_; }

    bool operator==(const Outcome&) const = default;

private:
    Outcome(idl::Value v, std::string name, bool isFault)
        : value_(std::move(v)), faultName_(std::move(name)), isFault_(isFault) {}

    idl::Value value_;
    std::string faultName_;
    bool isFault_ = false;
};

// Reserved runtime fault names.
inline constexpr std::string_view kTypeViolation = "TypeViolation";
inline constexpr std::string_view kOperationNotFound = "OperationNotFound";
inline constexpr std::string_view kUnknownPath = "UnknownPath";
inline constexpr std::string_view kTransportError = "TransportError";
inline constexpr std::string_view kUndeclaredFault = "UndeclaredFault";
inline constexpr std::string_view kInternalError = "InternalError";

/// HTTP status a fault travels under. Unmapped (application) faults use 500.
int httpStatusForFault(std::string_view faultName);

/// Fault with the default {code, message} payload; code defaults to the
/// fault's HTTP status.
Outcome makeFault(std::string_view name, std::string message);

} // namespace emi::runtime
