#include "emi/runtime/ports.hpp"

#include "emi/runtime/errors.hpp"

#include <set>

namespace emi::runtime {

std::optional<std::string> mergeCheck(const std::vector<idl::InterfaceDef>& interfaces) {
    std::set<std::string> seen;
    for (const auto& iface : interfaces) {
        for (const auto& op : iface.operations()) {
            if (!seen.insert(op.name).second)
                return op.name;
        }
    }
    return std::nullopt;
}

namespace {

const OutputPortSpec& findOutputPort(const std::vector<OutputPortSpec>& ports,
                                     const std::string& name, const std::string& portName) {
    for (const auto& p : ports) {
        if (p.name == name)
            return p;
    }
    throw ValidationError("input port '" + portName + "' references unknown output port '" +
                          name + "'");
}

} // namespace

EffectiveInterface effectiveInterface(const InputPortSpec& port,
                                      const std::vector<OutputPortSpec>& outputPorts) {
    int kinds = (port.interfaces.empty() ? 0 : 1) + (port.aggregates.empty() ? 0 : 1) +
                (port.redirects.empty() ? 0 : 1);
    if (kinds > 1)
        throw ValidationError("input port '" + port.name +
                              "' mixes interfaces, aggregates, and redirects");
    if (kinds == 0)
        throw ValidationError("input port '" + port.name + "' exposes nothing");

    EffectiveInterface out;

    if (!port.redirects.empty()) {
        out.redirecting = true;
        std::set<std::string> paths;
        for (const auto& r : port.redirects) {
            if (r.path.empty() || r.path.find('/') != std::string::npos)
                throw ValidationError("redirect path '" + r.path + "' on port '" + port.name +
                                      "' must be a nonempty slash-free token");
            if (!paths.insert(r.path).second)
                throw ValidationError("duplicate redirect path '" + r.path + "' on port '" +
                                      port.name + "'");
            out.byPath.emplace(r.path, findOutputPort(outputPorts, r.outputPort, port.name).iface);
        }
        return out;
    }

    std::vector<idl::InterfaceDef> contributions;
    for (const auto& e : port.interfaces)
        contributions.push_back(e.extender ? idl::applyExtender(e.iface, *e.extender) : e.iface);
    for (const auto& a : port.aggregates) {
        const OutputPortSpec& target = findOutputPort(outputPorts, a.outputPort, port.name);
        contributions.push_back(a.extender ? idl::applyExtender(target.iface, *a.extender)
                                           : target.iface);
    }

    if (auto conflict = mergeCheck(contributions))
        throw ValidationError("operation '" + *conflict + "' exposed more than once on port '" +
                              port.name + "'");

    std::vector<idl::OperationDef> ops;
    for (const auto& c : contributions)
        for (const auto& op : c.operations())
            ops.push_back(op);
    out.direct = idl::InterfaceDef(port.name, std::move(ops));
    return out;
}

} // namespace emi::runtime
