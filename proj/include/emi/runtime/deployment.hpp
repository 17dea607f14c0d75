#pragma once

#include "emi/runtime/errors.hpp"
#include "emi/runtime/location.hpp"
#include "emi/runtime/outcome.hpp"
#include "emi/runtime/ports.hpp"
#include "emi/runtime/service.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace emi::runtime {

class Deployment;

namespace detail {
struct RunningService;
}

/// View of one started service. Valid until Deployment::stop().
class ServiceHandle {
public:
    const std::string& name() const;

    /// Resolved location of an input port (real port numbers, not 0/auto).
    Location boundLocation(const std::string& inputPort) const;

    /// In-process invocation, same dispatch path as the wire minus HTTP.
    Outcome dispatch(const std::string& inputPort, const std::string& operation,
                     const idl::Value& request) const;
    Outcome dispatchPath(const std::string& inputPort, const std::string& path,
                         const std::string& operation, const idl::Value& request) const;

    const EffectiveInterface& effective(const std::string& inputPort) const;

    /// Invocations this service has served, over all its input ports.
    std::uint64_t invocations() const;

    /// True when this service was embedded into a parent.
    bool embedded() const;

private:
    friend class Deployment;
    explicit ServiceHandle(detail::RunningService* s) : s_(s) {}
    detail::RunningService* s_;
};

/// A set of services started together: binds ports, wires embeddings and
/// local channels, and routes output-port invocations.
class Deployment {
public:
    struct Options {
        /// Artificial latency, milliseconds, added to every network
        /// output-port hop between services. Local channels never pay it.
        int hopDelayMs = 0;
        /// First port for "auto" network locations. 0 reads EMI_BASE_PORT
        /// (default 9400).
        std::uint16_t basePort = 0;
        /// Resolve "auto" locations to ephemeral ports instead of basePort
        /// increments (what tests want).
        bool ephemeralNetworkPorts = false;
        /// Bounded in-flight capacity of each local channel.
        std::size_t localChannelCapacity = 16;
        /// Worker threads serving each local channel.
        int localChannelWorkers = 4;
    };

    Deployment();
    explicit Deployment(Options options);
    ~Deployment();
    Deployment(const Deployment&) = delete;
    Deployment& operator=(const Deployment&) = delete;

    /// Register a service. Specs validate on start().
    void add(ServiceSpec spec);

    /// Validate everything, bind every port, start serving. Throws
    /// ValidationError or PortBindError; a failed start leaves everything
    /// stopped.
    void start();
    void stop();
    bool running() const { return running_; }

    ServiceHandle service(const std::string& name);
    std::vector<std::string> serviceNames() const;

    /// Client-style invocation against a location this deployment can reach:
    /// HTTP for network locations, the in-process channel for local ones.
    /// `path` is the redirect token ("" for none).
    Outcome invokeAt(const Location& location, const std::string& path,
                     const std::string& operation, const idl::Value& request);

    /// Invocation through a service's named output port, as its behavior
    /// would do it (type-checked against the port interface, hop delay
    /// applied on network targets).
    Outcome invokePort(const std::string& serviceName, const std::string& outputPort,
                       const std::string& operation, const idl::Value& request);

    const Options& options() const { return options_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Options options_;
    std::atomic<bool> running_{false};
};

/// One-shot HTTP client call against any http+json endpoint, deployment or
/// not. `path` as in invokeAt.
Outcome httpInvoke(const std::string& host, std::uint16_t port, const std::string& path,
                   const std::string& operation, const idl::Value& request,
                   int timeoutMs = 5000);

} // namespace emi::runtime
