#pragma once

#include "emi/idl/interface.hpp"
#include "emi/idl/value.hpp"

namespace emi::idl {

enum class MessageSide { Request, Response };

std::string_view sideName(MessageSide side);

/// Derive a new interface where every operation's request/response records
/// gain the extender's fields and every fault set gains its added faults.
/// The input interface is left untouched. Throws ExtendError on field
/// collisions or when a nonempty extension targets a non-record message.
/// A void message extended with nonempty fields becomes a record of exactly
/// those fields.
InterfaceDef applyExtender(const InterfaceDef& iface, const InterfaceExtender& ext);

/// Extend a single message type; used by applyExtender and by single-operation
/// refactorings. `operation` only labels errors.
ValueType extendMessage(const ValueType& message, const RecordFields& extension,
                        MessageSide side, const std::string& operation);

/// Remove the given side's extension fields from the top level of a record
/// value. Absent fields are ignored; other fields keep their order.
Value stripExtension(const Value& value, const InterfaceExtender& ext, MessageSide side);

} // namespace emi::idl
