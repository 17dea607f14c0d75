#pragma once

#include "emi/idl/type.hpp"
#include "emi/idl/value.hpp"

#include <optional>
#include <string>

namespace emi::idl {

struct Violation {
    std::string path;   // dotted field path, e.g. "publications[2].year"
    std::string reason; // "type-mismatch", "missing-field", "undeclared-field",
                        // "cardinality", "no-union-alternative"
};

struct ConformanceResult {
    std::optional<Violation> violation;

    bool ok() const { return !violation.has_value(); }
    explicit operator bool() const { return ok(); }

    static ConformanceResult pass() { return {}; }
    static ConformanceResult fail(std::string path, std::string reason) {
        return {Violation{std::move(path), std::move(reason)}};
    }
};

/// Structural conformance: records check declared fields and cardinalities
/// (undeclared fields are violations), unions admit any alternative. Reports
/// the first violating path; never throws.
ConformanceResult conforms(const Value& value, const ValueType& type);

} // namespace emi::idl
