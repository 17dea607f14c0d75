#pragma once

#include "emi/idl/interface.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emi::idl {

/// Parsed IDL file: named types (resolved, declaration order), interfaces,
/// and interface extenders.
struct IdlDocument {
    std::vector<std::pair<std::string, ValueType>> types;
    std::vector<InterfaceDef> interfaces;
    std::vector<InterfaceExtender> extenders;

    const ValueType* findType(std::string_view name) const;
    const InterfaceDef* findInterface(std::string_view name) const;
    const InterfaceExtender* findExtender(std::string_view name) const;
};

/// Parse the toolkit's IDL text format. Named type references are resolved
/// structurally (forward references allowed, recursion rejected); faults take
/// the payload of a same-named type declaration or default to
/// {code: int, message: string}. Throws ParseError with line/column.
IdlDocument parseIdl(std::string_view text);

} // namespace emi::idl
