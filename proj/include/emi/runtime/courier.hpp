#pragma once

#include "emi/idl/value.hpp"
#include "emi/runtime/outcome.hpp"

#include <functional>
#include <string>

namespace emi::runtime {

/// Capability handed to a courier: deliver a (possibly rewritten) request to
/// the operation's underlying target and obtain its outcome. Callable at most
/// once per invocation; a second call raises RuntimeError.
using ForwardFn = std::function<Outcome(const idl::Value& request)>;

/// Interceptor for operations flowing through an input port. Receives the
/// operation name as data, so one handler can serve any interface. Once the
/// handler forwards, the forwarded outcome is the invocation's reply verbatim;
/// the handler's own return value only matters when it does not forward.
using CourierHandler =
    std::function<Outcome(const std::string& operation, const idl::Value& request,
                          const ForwardFn& forward)>;

} // namespace emi::runtime
