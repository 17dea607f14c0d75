#pragma once

#include "emi/idl/type.hpp"
#include "emi/idl/value.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace emi::idl {

/// Type-directed encoding: fields whose declared cardinality admits more than
/// one item encode as JSON arrays, single-valued fields as scalars. Union
/// values encode by their first conforming alternative; void encodes as {}.
nlohmann::json toJson(const Value& value, const ValueType& type);

/// Untyped encoding: one item -> scalar, otherwise array.
nlohmann::json toJson(const Value& value);

/// Untyped decoding: arrays become multi-item fields, scalars single items,
/// objects records, null unit.
Value valueFromJson(const nlohmann::json& j);

/// Canonical text form (sorted keys, no whitespace) for byte-equality checks.
std::string canonicalJson(const nlohmann::json& j);
std::string canonicalJson(const Value& value, const ValueType& type);

} // namespace emi::idl
