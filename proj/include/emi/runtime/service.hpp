#pragma once

#include "emi/idl/value.hpp"
#include "emi/runtime/outcome.hpp"
#include "emi/runtime/ports.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace emi::runtime {

/// Per-service view handed to operation handlers: invoke one of the owning
/// service's output ports. Valid while the deployment runs.
class ServiceContext {
public:
    using CallFn = std::function<Outcome(const std::string& outputPort,
                                         const std::string& operation,
                                         const idl::Value& request)>;

    ServiceContext() = default;
    explicit ServiceContext(CallFn call) : call_(std::move(call)) {}

    Outcome call(const std::string& outputPort, const std::string& operation,
                 const idl::Value& request) const;

private:
    CallFn call_;
};

/// Handler for one operation. Must be safe for concurrent invocation.
using OpHandler =
    std::function<Outcome(const idl::Value& request, const ServiceContext& ctx)>;

/// Operation name to handler. Directly exposed operations need one each.
struct Behavior {
    std::map<std::string, OpHandler> handlers;
};

struct ServiceSpec;

/// In-process child, reachable only through the parent: the deployment gives
/// the parent an output port named `as`, wired to the child's local input
/// port. All the child's input ports must be local.
struct EmbedSpec {
    std::shared_ptr<ServiceSpec> service;
    std::string as;
};

struct ServiceSpec {
    std::string name;
    std::vector<InputPortSpec> inputPorts;
    std::vector<OutputPortSpec> outputPorts;
    std::vector<EmbedSpec> embeds;
    Behavior behavior;
};

} // namespace emi::runtime
