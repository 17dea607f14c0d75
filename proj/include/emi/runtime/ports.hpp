#pragma once

#include "emi/idl/extender.hpp"
#include "emi/idl/interface.hpp"
#include "emi/runtime/courier.hpp"
#include "emi/runtime/location.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emi::runtime {

/// Client-side port: what this service may invoke, and where.
struct OutputPortSpec {
    std::string name;
    Location target;
    idl::InterfaceDef iface;
    /// "Service.inputPort" within the same deployment, resolved to that
    /// port's bound location at start time. Overrides `target` when set, so
    /// configs can reference sibling services before ports are assigned.
    std::string symbolicTarget;
};

/// Direct exposure of an interface, optionally under an extender: requests
/// validate against the extended interface and are stripped back before the
/// behavior runs.
struct InterfaceExposure {
    idl::InterfaceDef iface;
    std::optional<idl::InterfaceExtender> extender;
};

/// Forwarding exposure of an output port's interface, optionally extended.
struct AggregateExposure {
    std::string outputPort;
    std::optional<idl::InterfaceExtender> extender;
};

/// One resource path token routed to one output port.
struct RedirectExposure {
    std::string path;
    std::string outputPort;
};

/// A courier attached to an input port: operation-scoped, interface-scoped
/// (by exposed interface name), or port-scoped when both fields are empty.
/// Narrower scope wins.
struct CourierBinding {
    std::string interfaceName;
    std::string operation;
    CourierHandler handler;
};

/// Server-side port. Exposes exactly one of: interfaces, aggregates, or
/// redirects (http+json is the only protocol).
struct InputPortSpec {
    std::string name;
    Location location;
    std::vector<InterfaceExposure> interfaces;
    std::vector<AggregateExposure> aggregates;
    std::vector<RedirectExposure> redirects;
    std::vector<CourierBinding> couriers;
};

/// First duplicated operation name across the interfaces, or nullopt when all
/// names are pairwise distinct (the aggregation precondition).
std::optional<std::string> mergeCheck(const std::vector<idl::InterfaceDef>& interfaces);

/// What an input port accepts, computed statically from its specs.
struct EffectiveInterface {
    bool redirecting = false;
    idl::InterfaceDef direct; // union of (extended) exposures; empty if redirecting
    std::map<std::string, idl::InterfaceDef> byPath; // redirect ports only
};

/// Resolves aggregate output-port names against `outputPorts`. Throws
/// ValidationError on unknown ports, merge conflicts, or malformed redirect
/// tokens; propagates extender application errors.
EffectiveInterface effectiveInterface(const InputPortSpec& port,
                                      const std::vector<OutputPortSpec>& outputPorts);

} // namespace emi::runtime
