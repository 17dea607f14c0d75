#pragma once

#include <stdexcept>
#include <string>

namespace emi::runtime {

class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad service or port configuration, detected before anything starts.
class ValidationError : public RuntimeError {
public:
    using RuntimeError::RuntimeError;
};

/// A network input port could not bind its location.
class PortBindError : public RuntimeError {
public:
    explicit PortBindError(const std::string& location)
        : RuntimeError("cannot bind " + location), location(location) {}
    std::string location;
};

} // namespace emi::runtime
