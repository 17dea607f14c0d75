#pragma once

#include "emi/idl/type.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace emi::idl {

/// Payload for faults declared without their own type: {code: int, message: string}.
const ValueType& defaultErrorPayload();

struct FaultDef {
    std::string name;
    ValueType payload;

    FaultDef() : payload(defaultErrorPayload()) {}
    explicit FaultDef(std::string name) : name(std::move(name)), payload(defaultErrorPayload()) {}
    FaultDef(std::string name, ValueType payload)
        : name(std::move(name)), payload(std::move(payload)) {}
    bool operator==(const FaultDef&) const = default;
};

struct OperationDef {
    std::string name;
    ValueType request;
    ValueType response;
    std::vector<FaultDef> faults;

    const FaultDef* findFault(std::string_view name) const;
    bool operator==(const OperationDef&) const = default;
};

/// Named set of request-response operations with pairwise-distinct names.
class InterfaceDef {
public:
    InterfaceDef() = default;
    /// Throws IdlError on empty or duplicate operation names.
    InterfaceDef(std::string name, std::vector<OperationDef> operations);

    const std::string& name() const { return name_; }
    const std::vector<OperationDef>& operations() const { return operations_; }
    const OperationDef* find(std::string_view opName) const;

    /// Equality of the operation sets (order-sensitive), ignoring interface names.
    bool structurallyEqual(const InterfaceDef& other) const;

private:
    std::string name_;
    std::vector<OperationDef> operations_;
};

/// Uniform per-operation rewrite: extra request/response fields plus added faults.
struct InterfaceExtender {
    std::string name;
    RecordFields requestExtension;
    RecordFields responseExtension;
    std::vector<FaultDef> addedFaults;

    bool empty() const {
        return requestExtension.empty() && responseExtension.empty() && addedFaults.empty();
    }
    bool operator==(const InterfaceExtender&) const = default;
};

} // namespace emi::idl
