#include "emi/idl/interface.hpp"

#include "emi/idl/errors.hpp"

#include <algorithm>
#include <set>

namespace emi::idl {

const ValueType& defaultErrorPayload() {
    static const ValueType t = ValueType::record({
        {"code", Prim::Int},
        {"message", Prim::String},
    });
    return t;
}

const FaultDef* OperationDef::findFault(std::string_view name) const {
    auto it = std::find_if(faults.begin(), faults.end(),
                           [&](const FaultDef& f) { return f.name == name; });
    return it == faults.end() ? nullptr : &*it;
}

InterfaceDef::InterfaceDef(std::string name, std::vector<OperationDef> operations)
    : name_(std::move(name)), operations_(std::move(operations)) {
    std::set<std::string_view> seen;
    for (const auto& op : operations_) {
        if (op.name.empty())
            throw IdlError("interface '" + name_ + "' has an unnamed operation");
        if (!seen.insert(op.name).second)
            throw IdlError("interface '" + name_ + "' declares operation '" + op.name +
                           "' more than once");
    }
}

const OperationDef* InterfaceDef::find(std::string_view opName) const {
    auto it = std::find_if(operations_.begin(), operations_.end(),
                           [&](const OperationDef& op) { return op.name == opName; });
    return it == operations_.end() ? nullptr : &*it;
}

bool InterfaceDef::structurallyEqual(const InterfaceDef& other) const {
    return operations_ == other.operations_;
}

} // namespace emi::idl
