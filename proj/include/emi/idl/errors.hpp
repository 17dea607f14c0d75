#pragma once

#include <stdexcept>
#include <string>

namespace emi::idl {

class IdlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public IdlError {
public:
    ParseError(int line, int column, const std::string& message)
        : IdlError("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                   ": " + message),
          line(line), column(column), message(message) {}

    int line;
    int column;
    std::string message;
};

enum class ExtendErrorKind {
    FieldCollision,    // extension field already present on a message record
    NonRecordMessage,  // extension targets a message that is neither a record nor void
    FaultCollision,    // added fault name exists with a different payload
};

class ExtendError : public IdlError {
public:
    ExtendError(ExtendErrorKind kind, std::string operation, std::string detail)
        : IdlError("cannot extend operation '" + operation + "': " + detail),
          kind(kind), operation(std::move(operation)), detail(std::move(detail)) {}

    ExtendErrorKind kind;
    std::string operation;
    std::string detail;
};

} // namespace emi::idl
