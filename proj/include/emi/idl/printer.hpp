#pragma once

#include "emi/idl/parser.hpp"

#include <string>

namespace emi::idl {

std::string printType(const ValueType& type);
std::string printInterface(const InterfaceDef& iface);
std::string printExtender(const InterfaceExtender& ext);

/// Render a document that reparses to structurally equal interfaces and
/// extenders. Message types print inline; a type declaration is emitted per
/// fault whose payload differs from the default.
std::string printIdl(const IdlDocument& doc);
std::string printIdl(const std::vector<InterfaceDef>& interfaces,
                     const std::vector<InterfaceExtender>& extenders);

} // namespace emi::idl
