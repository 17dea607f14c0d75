#include "emi/idl/extender.hpp"

#include "emi/idl/errors.hpp"

#include <algorithm>

namespace emi::idl {

std::string_view sideName(MessageSide side) {
    return side == MessageSide::Request ? "request" : "response";
}

ValueType extendMessage(const ValueType& message, const RecordFields& extension,
                        MessageSide side, const std::string& operation) {
    if (extension.empty())
        return message;
    if (message.isVoid())
        return ValueType::record(extension);
    if (!message.isRecord())
        throw ExtendError(ExtendErrorKind::NonRecordMessage, operation,
                          std::string(sideName(side)) + " message is not a record");

    RecordFields merged = message.fields();
    for (const auto& f : extension) {
        if (message.findField(f.name))
            throw ExtendError(ExtendErrorKind::FieldCollision, operation,
                              std::string(sideName(side)) + " field '" + f.name +
                                  "' already exists");
        merged.push_back(f);
    }
    return ValueType::record(std::move(merged));
}

namespace {

std::vector<FaultDef> unionFaults(const std::vector<FaultDef>& base,
                                  const std::vector<FaultDef>& added,
                                  const std::string& operation) {
    std::vector<FaultDef> out = base;
    for (const auto& f : added) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const FaultDef& g) { return g.name == f.name; });
        if (it == out.end()) {
            out.push_back(f);
        } else if (!(it->payload == f.payload)) {
            throw ExtendError(ExtendErrorKind::FaultCollision, operation,
                              "fault '" + f.name + "' already declared with a different payload");
        }
    }
    return out;
}

} // namespace

InterfaceDef applyExtender(const InterfaceDef& iface, const InterfaceExtender& ext) {
    std::vector<OperationDef> ops;
    ops.reserve(iface.operations().size());
    for (const auto& op : iface.operations()) {
        OperationDef extended;
        extended.name = op.name;
        extended.request = extendMessage(op.request, ext.requestExtension,
                                         MessageSide::Request, op.name);
        extended.response = extendMessage(op.response, ext.responseExtension,
                                          MessageSide::Response, op.name);
        extended.faults = unionFaults(op.faults, ext.addedFaults, op.name);
        ops.push_back(std::move(extended));
    }
    return InterfaceDef(iface.name(), std::move(ops));
}

Value stripExtension(const Value& value, const InterfaceExtender& ext, MessageSide side) {
    const RecordFields& extension =
        side == MessageSide::Request ? ext.requestExtension : ext.responseExtension;
    if (extension.empty() || !value.isRecord())
        return value;

    Value::Fields kept;
    for (const auto& f : value.fields()) {
        bool stripped = std::any_of(extension.begin(), extension.end(),
                                    [&](const auto& e) { return e.name == f.name; });
        if (!stripped)
            kept.push_back(f);
    }
    return Value::record(std::move(kept));
}

} // namespace emi::idl
