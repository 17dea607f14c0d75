#include "emi/runtime/outcome.hpp"

namespace emi::runtime {

int httpStatusForFault(std::string_view faultName) {
    if (faultName == "NotAuthorised")
        return 403;
    if (faultName == kTypeViolation || faultName == "InvalidPageRequest")
        return 400;
    if (faultName == kOperationNotFound || faultName == kUnknownPath)
        return 404;
    return 500; // TransportError, InternalError, UndeclaredFault, app faults
}

Outcome makeFault(std::string_view name, std::string message) {
    idl::Value payload = idl::Value::record();
    payload.set("code", idl::Value::integer(httpStatusForFault(name)));
    payload.set("message", idl::Value::string(std::move(message)));
    return Outcome::fault(std::string(name), std::move(payload));
}

} // namespace emi::runtime
