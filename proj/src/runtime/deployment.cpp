#include "emi/runtime/deployment.hpp"

#include "emi/idl/conformance.hpp"
#include "emi/idl/json.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <future>
#include <mutex>
#include <set>
#include <thread>

namespace emi::runtime {

Outcome ServiceContext::call(const std::string& outputPort, const std::string& operation,
                             const idl::Value& request) const {
    if (!call_)
        throw RuntimeError("service context is not bound to a running deployment");
    return call_(outputPort, operation, request);
}

namespace {

using idl::Value;
using idl::ValueType;
using nlohmann::json;

bool isReservedFault(std::string_view name) {
    return name == kTypeViolation || name == kOperationNotFound || name == kUnknownPath ||
           name == kTransportError || name == kUndeclaredFault || name == kInternalError;
}

json faultBody(const Outcome& out) {
    json body = idl::toJson(out.value());
    if (!body.is_object())
        body = json::object();
    if (!body.contains("code"))
        body["code"] = httpStatusForFault(out.faultName());
    if (!body.contains("message"))
        body["message"] = out.faultName();
    body["fault"] = out.faultName();
    return body;
}

Outcome decodeWire(int status, const std::string& body) {
    json j = body.empty() ? json::object() : json::parse(body, nullptr, false);
    if (j.is_discarded())
        return makeFault(kTransportError, "peer sent unparseable JSON");
    if (status < 400) {
        try {
            return Outcome::response(idl::valueFromJson(j));
        } catch (const std::exception& e) {
            return makeFault(kTransportError, e.what());
        }
    }
    std::string name{kTransportError};
    if (j.is_object() && j.contains("fault") && j["fault"].is_string()) {
        name = j["fault"].get<std::string>();
        j.erase("fault");
    }
    if (!j.is_object())
        j = json::object();
    return Outcome::fault(std::move(name), idl::valueFromJson(j));
}

std::string wirePath(const std::string& path, const std::string& operation) {
    return path.empty() ? "/" + operation : "/" + path + "/" + operation;
}

Outcome httpInvokeTyped(const std::string& host, std::uint16_t port, const std::string& path,
                        const std::string& op, const Value& request,
                        const ValueType* requestType, int timeoutMs) {
    httplib::Client client(host, port);
    client.set_connection_timeout(0, timeoutMs * 1000);
    client.set_read_timeout(timeoutMs / 1000, (timeoutMs % 1000) * 1000);

    std::string body;
    try {
        body =
            requestType ? idl::toJson(request, *requestType).dump() : idl::toJson(request).dump();
    } catch (const std::exception& e) {
        return makeFault(kTypeViolation, e.what());
    }
    auto res = client.Post(wirePath(path, op), body, "application/json");
    if (!res)
        return makeFault(kTransportError, httplib::to_string(res.error()));
    return decodeWire(res->status, res->body);
}

} // namespace

namespace detail {

/// Bounded FIFO request-response link for embedded services. Callers block
/// while the queue is full; worker threads run the owner's dispatch.
class LocalChannel {
public:
    using Handler =
        std::function<Outcome(const std::string& path, const std::string& op, const Value&)>;

    explicit LocalChannel(std::size_t capacity) : capacity_(std::max<std::size_t>(1, capacity)) {}
    ~LocalChannel() { close(); }

    void serve(Handler handler, int workers) {
        handler_ = std::move(handler);
        for (int i = 0; i < std::max(1, workers); ++i)
            workers_.emplace_back([this] { run(); });
    }

    Outcome call(const std::string& path, const std::string& op, const Value& request) {
        std::future<Outcome> reply;
        {
            std::unique_lock lock(m_);
            notFull_.wait(lock, [&] { return closed_ || queue_.size() < capacity_; });
            if (closed_)
                return makeFault(kTransportError, "local channel is closed");
            Job job;
            job.path = path;
            job.op = op;
            job.request = request;
            reply = job.reply.get_future();
            queue_.push_back(std::move(job));
        }
        notEmpty_.notify_one();
        return reply.get();
    }

    void close() {
        {
            std::lock_guard lock(m_);
            closed_ = true;
        }
        notEmpty_.notify_all();
        notFull_.notify_all();
        for (auto& w : workers_)
            if (w.joinable())
                w.join();
        workers_.clear();
    }

private:
    struct Job {
        std::string path;
        std::string op;
        Value request;
        std::promise<Outcome> reply;
    };

    void run() {
        while (true) {
            Job job;
            {
                std::unique_lock lock(m_);
                notEmpty_.wait(lock, [&] { return closed_ || !queue_.empty(); });
                if (queue_.empty())
                    return; // closed and drained
                job = std::move(queue_.front());
                queue_.pop_front();
            }
            notFull_.notify_one();
            try {
                job.reply.set_value(handler_(job.path, job.op, job.request));
            } catch (const std::exception& e) {
                job.reply.set_value(makeFault(kInternalError, e.what()));
            }
        }
    }

    std::mutex m_;
    std::condition_variable notEmpty_;
    std::condition_variable notFull_;
    std::deque<Job> queue_;
    bool closed_ = false;
    std::size_t capacity_;
    Handler handler_;
    std::vector<std::thread> workers_;
};

struct OpRoute {
    idl::OperationDef op; // extended: what the wire must satisfy
    bool direct = true;
    std::optional<idl::InterfaceExtender> extender;
    std::string outputPort;      // aggregated routes
    std::string sourceInterface; // name of the exposed interface
    int courierIndex = -1;       // into InputPortSpec::couriers
};

struct RunningPort {
    InputPortSpec spec; // location resolved
    EffectiveInterface effective;
    std::map<std::string, OpRoute> routes;
    std::map<std::string, std::string> redirectTable;
    std::unique_ptr<httplib::Server> server;
    std::thread serverThread;
    std::unique_ptr<LocalChannel> channel;
};

struct RunningService {
    std::string name;
    ServiceSpec spec;
    std::deque<RunningPort> ports;
    std::map<std::string, OutputPortSpec> outputPorts;
    ServiceContext ctx;
    std::atomic<std::uint64_t> invocations{0};
    bool embedded = false;
    // Bound at serve time; lets handles dispatch without owning the
    // deployment internals.
    std::function<Outcome(RunningPort&, const std::string& path, const std::string& op,
                          const idl::Value&)>
        dispatchFn;
};

} // namespace detail

using detail::LocalChannel;
using detail::OpRoute;
using detail::RunningPort;
using detail::RunningService;

struct Deployment::Impl {
    explicit Impl(Options o) : opts(o) {}

    Options opts;
    std::vector<ServiceSpec> pending;
    std::vector<std::unique_ptr<RunningService>> services;
    std::map<std::string, LocalChannel*> channels;
    std::uint16_t nextPort = 0;
    bool started = false;

    // --- assembly ---

    RunningService* flatten(ServiceSpec spec, bool embedded) {
        std::vector<EmbedSpec> embeds = std::move(spec.embeds);
        spec.embeds.clear();

        for (const auto& existing : services) {
            if (existing->name == spec.name)
                throw ValidationError("duplicate service name '" + spec.name + "'");
        }
        if (embedded) {
            for (const auto& ip : spec.inputPorts) {
                if (!ip.location.isLocal())
                    throw ValidationError("embedded service '" + spec.name +
                                          "' must only use local input ports");
            }
        }

        auto rs = std::make_unique<RunningService>();
        rs->name = spec.name;
        rs->embedded = embedded;
        rs->spec = std::move(spec);
        RunningService* self = rs.get();
        services.push_back(std::move(rs));

        // Name anonymous local ports now so embed targets can reference them.
        for (auto& ip : self->spec.inputPorts) {
            if (ip.location.isLocal() && ip.location.channelId.empty())
                ip.location.channelId = self->name + "." + ip.name;
        }

        for (auto& outp : self->spec.outputPorts)
            self->outputPorts.emplace(outp.name, outp);

        for (auto& e : embeds) {
            if (!e.service)
                throw ValidationError("embed without a service in '" + self->name + "'");
            if (e.as.empty())
                throw ValidationError("embed of '" + e.service->name + "' in '" + self->name +
                                      "' needs an output port name");
            if (self->outputPorts.count(e.as))
                throw ValidationError("embed target '" + e.as + "' collides with an output port of '" +
                                      self->name + "'");

            RunningService* child = flatten(*e.service, true);
            if (child->spec.inputPorts.empty())
                throw ValidationError("embedded service '" + child->name + "' has no input ports");
            const InputPortSpec& childPort = child->spec.inputPorts.front();
            EffectiveInterface eff = effectiveInterface(childPort, child->spec.outputPorts);
            if (eff.redirecting)
                throw ValidationError("cannot embed '" + child->name +
                                      "' through a redirecting input port");

            OutputPortSpec link;
            link.name = e.as;
            link.target = childPort.location;
            link.iface = eff.direct;
            self->outputPorts.emplace(link.name, link);
            self->spec.outputPorts.push_back(std::move(link));
        }
        return self;
    }

    void buildRoutes(RunningService& svc) {
        for (const auto& ip : svc.spec.inputPorts) {
            RunningPort port;
            port.spec = ip;
            port.effective = effectiveInterface(ip, svc.spec.outputPorts);

            if (port.effective.redirecting) {
                if (!ip.couriers.empty())
                    throw ValidationError("couriers are not supported on redirecting port '" +
                                          ip.name + "'");
                for (const auto& r : ip.redirects)
                    port.redirectTable.emplace(r.path, r.outputPort);
            } else {
                auto addRoutes = [&](const idl::InterfaceDef& extended, bool direct,
                                     const std::optional<idl::InterfaceExtender>& ext,
                                     const std::string& outputPort,
                                     const std::string& sourceName) {
                    for (const auto& op : extended.operations()) {
                        OpRoute route;
                        route.op = op;
                        route.direct = direct;
                        route.extender = ext && !ext->empty() ? ext : std::nullopt;
                        route.outputPort = outputPort;
                        route.sourceInterface = sourceName;
                        port.routes.emplace(op.name, std::move(route));
                    }
                };
                for (const auto& e : ip.interfaces) {
                    idl::InterfaceDef extended =
                        e.extender ? idl::applyExtender(e.iface, *e.extender) : e.iface;
                    addRoutes(extended, true, e.extender, "", e.iface.name());
                }
                for (const auto& a : ip.aggregates) {
                    auto pit = svc.outputPorts.find(a.outputPort);
                    if (pit == svc.outputPorts.end())
                        throw ValidationError("port '" + ip.name +
                                              "' aggregates unknown output port '" +
                                              a.outputPort + "'");
                    idl::InterfaceDef extended =
                        a.extender ? idl::applyExtender(pit->second.iface, *a.extender)
                                   : pit->second.iface;
                    addRoutes(extended, false, a.extender, a.outputPort,
                              pit->second.iface.name());
                }

                // Directly exposed operations need handlers.
                for (const auto& [opName, route] : port.routes) {
                    if (route.direct && !svc.spec.behavior.handlers.count(opName))
                        throw ValidationError("service '" + svc.name +
                                              "' has no handler for operation '" + opName + "'");
                }

                // Courier scopes must reference something this port exposes.
                for (std::size_t i = 0; i < ip.couriers.size(); ++i) {
                    const CourierBinding& b = ip.couriers[i];
                    if (!b.operation.empty()) {
                        auto rit = port.routes.find(b.operation);
                        if (rit == port.routes.end())
                            throw ValidationError("courier for unknown operation '" +
                                                  b.operation + "' on port '" + ip.name + "'");
                    } else if (!b.interfaceName.empty()) {
                        bool known = false;
                        for (const auto& [opName, route] : port.routes)
                            known = known || route.sourceInterface == b.interfaceName;
                        if (!known)
                            throw ValidationError("courier for interface '" + b.interfaceName +
                                                  "' not exposed on port '" + ip.name + "'");
                    }
                    if (!b.handler)
                        throw ValidationError("courier on port '" + ip.name + "' has no handler");
                }

                // Narrowest scope wins: operation, then interface, then the
                // whole port; first binding wins ties.
                for (auto& [opName, route] : port.routes) {
                    for (std::size_t i = 0; i < ip.couriers.size(); ++i) {
                        if (ip.couriers[i].operation == opName) {
                            route.courierIndex = static_cast<int>(i);
                            break;
                        }
                    }
                    if (route.courierIndex >= 0)
                        continue;
                    for (std::size_t i = 0; i < ip.couriers.size(); ++i) {
                        if (!ip.couriers[i].interfaceName.empty() &&
                            ip.couriers[i].interfaceName == route.sourceInterface) {
                            route.courierIndex = static_cast<int>(i);
                            break;
                        }
                    }
                    if (route.courierIndex >= 0)
                        continue;
                    for (std::size_t i = 0; i < ip.couriers.size(); ++i) {
                        if (ip.couriers[i].interfaceName.empty() &&
                            ip.couriers[i].operation.empty()) {
                            route.courierIndex = static_cast<int>(i);
                            break;
                        }
                    }
                }
            }
            svc.ports.push_back(std::move(port));
        }
    }

    void bindPorts(RunningService& svc) {
        for (auto& port : svc.ports) {
            Location& loc = port.spec.location;
            if (loc.isLocal()) {
                if (channels.count(loc.channelId))
                    throw ValidationError("duplicate local channel '" + loc.channelId + "'");
                port.channel = std::make_unique<LocalChannel>(opts.localChannelCapacity);
                channels.emplace(loc.channelId, port.channel.get());
                continue;
            }
            if (svc.embedded)
                throw ValidationError("embedded service '" + svc.name +
                                      "' cannot bind network port '" + port.spec.name + "'");
            if (loc.host.empty())
                loc.host = "127.0.0.1";
            port.server = std::make_unique<httplib::Server>();
            // SO_REUSEADDR only: rebinding a TIME_WAIT port is fine, two live
            // servers on one port (SO_REUSEPORT, the httplib default) is not.
            port.server->set_socket_options([](socket_t sock) {
                int yes = 1;
                ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
                             reinterpret_cast<const char*>(&yes), sizeof(yes));
            });
            if (loc.port == 0 && opts.ephemeralNetworkPorts) {
                int bound = port.server->bind_to_any_port(loc.host);
                if (bound <= 0)
                    throw PortBindError(loc.toString());
                loc.port = static_cast<std::uint16_t>(bound);
            } else {
                if (loc.port == 0)
                    loc.port = nextPort++;
                if (!port.server->bind_to_port(loc.host, loc.port))
                    throw PortBindError(loc.toString());
            }
        }
    }

    void resolveOutputPorts(RunningService& svc) {
        for (auto& [name, out] : svc.outputPorts) {
            if (!out.symbolicTarget.empty()) {
                auto dot = out.symbolicTarget.find('.');
                if (dot == std::string::npos || dot == 0 ||
                    dot + 1 == out.symbolicTarget.size())
                    throw ValidationError("output port '" + name + "' of '" + svc.name +
                                          "' has malformed symbolic target '" +
                                          out.symbolicTarget + "' (want Service.port)");
                RunningService* peer = find(out.symbolicTarget.substr(0, dot));
                if (!peer)
                    throw ValidationError("output port '" + name + "' of '" + svc.name +
                                          "' targets unknown service in '" +
                                          out.symbolicTarget + "'");
                std::string portName = out.symbolicTarget.substr(dot + 1);
                const RunningPort* peerPort = nullptr;
                for (const auto& p : peer->ports)
                    if (p.spec.name == portName)
                        peerPort = &p;
                if (!peerPort)
                    throw ValidationError("output port '" + name + "' of '" + svc.name +
                                          "' targets unknown input port in '" +
                                          out.symbolicTarget + "'");
                out.target = peerPort->spec.location;
            }
            if (out.target.isLocal()) {
                if (out.target.channelId.empty())
                    throw ValidationError("output port '" + name + "' of '" + svc.name +
                                          "' targets an unnamed local channel");
                if (!channels.count(out.target.channelId))
                    throw ValidationError("output port '" + name + "' of '" + svc.name +
                                          "' targets unknown channel '" + out.target.channelId +
                                          "'");
            }
            // Network targets may be a sibling's bound port or an endpoint
            // elsewhere; both go over real HTTP.
        }
    }

    void serve(RunningService& svc) {
        svc.ctx = ServiceContext([this, s = &svc](const std::string& port, const std::string& op,
                                                  const Value& request) {
            return invokeThroughOutputPort(*s, port, op, request, true);
        });
        svc.dispatchFn = [this, s = &svc](RunningPort& port, const std::string& path,
                                          const std::string& op, const Value& request) {
            return dispatchOn(*s, port, path, op, request);
        };
        for (auto& port : svc.ports) {
            RunningPort* p = &port;
            RunningService* s = &svc;
            if (port.channel) {
                port.channel->serve(
                    [this, s, p](const std::string& path, const std::string& op,
                                 const Value& request) { return dispatchOn(*s, *p, path, op, request); },
                    opts.localChannelWorkers);
                continue;
            }
            port.server->Post(R"(/(.*))", [this, s, p](const httplib::Request& req,
                                                       httplib::Response& res) {
                handleHttp(*s, *p, req, res);
            });
            port.serverThread = std::thread([srv = port.server.get()] { srv->listen_after_bind(); });
            port.server->wait_until_ready();
        }
    }

    void stopAll() {
        for (auto& svc : services) {
            for (auto& port : svc->ports) {
                if (port.server) {
                    port.server->stop();
                    if (port.serverThread.joinable())
                        port.serverThread.join();
                }
                if (port.channel)
                    port.channel->close();
            }
        }
        channels.clear();
        services.clear();
    }

    // --- dispatch ---

    Outcome dispatchOn(RunningService& svc, RunningPort& port, const std::string& path,
                       const std::string& op, const Value& request) {
        svc.invocations.fetch_add(1, std::memory_order_relaxed);
        try {
            return dispatchInner(svc, port, path, op, request);
        } catch (const std::exception& e) {
            return makeFault(kInternalError, e.what());
        }
    }

    Outcome dispatchInner(RunningService& svc, RunningPort& port, const std::string& path,
                          const std::string& op, const Value& request) {
        if (port.effective.redirecting) {
            if (path.empty())
                return makeFault(kUnknownPath, "port '" + port.spec.name + "' expects /path/op");
            auto it = port.redirectTable.find(path);
            if (it == port.redirectTable.end())
                return makeFault(kUnknownPath, "no redirect for '" + path + "'");
            // Forward verbatim; the target enforces its own interface.
            return invokeThroughOutputPort(svc, it->second, op, request, false);
        }
        if (!path.empty())
            return makeFault(kUnknownPath, "port '" + port.spec.name + "' has no resource paths");

        auto rit = port.routes.find(op);
        if (rit == port.routes.end())
            return makeFault(kOperationNotFound, "no operation '" + op + "' at port '" +
                                                     port.spec.name + "'");
        OpRoute& route = rit->second;

        // Validation happens against the extended interface, before couriers,
        // so extender-added fields are still present.
        if (auto c = idl::conforms(request, route.op.request); !c.ok())
            return makeFault(kTypeViolation, c.violation->path + ": " + c.violation->reason);

        auto target = [&](const Value& req) -> Outcome {
            Value sent = req;
            if (route.extender)
                sent = idl::stripExtension(sent, *route.extender, idl::MessageSide::Request);
            if (route.direct)
                return svc.spec.behavior.handlers.at(op)(sent, svc.ctx);
            return invokeThroughOutputPort(svc, route.outputPort, op, sent, true);
        };

        Outcome out = [&] {
            if (route.courierIndex < 0)
                return target(request);
            const CourierBinding& binding =
                port.spec.couriers[static_cast<std::size_t>(route.courierIndex)];
            std::optional<Outcome> forwarded;
            ForwardFn forward = [&](const Value& req) -> Outcome {
                if (forwarded)
                    throw RuntimeError("courier forwarded '" + op + "' twice");
                forwarded = target(req);
                return *forwarded;
            };
            Outcome returned = binding.handler(op, request, forward);
            // Forwarded outcome is the reply; couriers cannot rewrite it.
            return forwarded ? *forwarded : returned;
        }();

        if (!out.isFault()) {
            if (auto c = idl::conforms(out.value(), route.op.response); !c.ok())
                return makeFault(kInternalError, "response." + c.violation->path + ": " +
                                                     c.violation->reason);
            return out;
        }
        if (isReservedFault(out.faultName()) || route.op.findFault(out.faultName()))
            return out;
        return makeFault(kUndeclaredFault, "fault '" + out.faultName() +
                                               "' is not declared by operation '" + op + "'");
    }

    Outcome invokeThroughOutputPort(RunningService& svc, const std::string& portName,
                                    const std::string& op, const Value& request, bool validate) {
        auto pit = svc.outputPorts.find(portName);
        if (pit == svc.outputPorts.end())
            return makeFault(kTransportError, "service '" + svc.name + "' has no output port '" +
                                                  portName + "'");
        const OutputPortSpec& out = pit->second;
        const idl::OperationDef* od = out.iface.find(op);
        if (validate) {
            if (!od)
                return makeFault(kOperationNotFound, "operation '" + op + "' is not on port '" +
                                                         portName + "'");
            if (auto c = idl::conforms(request, od->request); !c.ok())
                return makeFault(kTypeViolation, c.violation->path + ": " + c.violation->reason);
        }

        // Unvalidated (redirect) hops serialize untyped: the wire carries the
        // request as sent, so the target sees undeclared fields and rejects
        // them itself instead of typed serialization silently dropping them.
        Outcome got =
            transportTo(out.target, "", op, request, validate && od ? &od->request : nullptr);

        if (validate && od) {
            if (!got.isFault()) {
                if (auto c = idl::conforms(got.value(), od->response); !c.ok())
                    return makeFault(kInternalError, "response." + c.violation->path + ": " +
                                                         c.violation->reason);
            } else if (!isReservedFault(got.faultName()) && !od->findFault(got.faultName())) {
                return makeFault(kUndeclaredFault, "peer raised undeclared fault '" +
                                                       got.faultName() + "'");
            }
        }
        return got;
    }

    Outcome transportTo(const Location& target, const std::string& path, const std::string& op,
                        const Value& request, const ValueType* requestType) {
        if (target.isLocal()) {
            auto cit = channels.find(target.channelId);
            if (cit == channels.end())
                return makeFault(kTransportError, "no local channel '" + target.channelId + "'");
            return cit->second->call(path, op, request);
        }
        if (opts.hopDelayMs > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(opts.hopDelayMs));
        return httpInvokeTyped(target.host, target.port, path, op, request, requestType, 5000);
    }

    // --- wire ---

    void handleHttp(RunningService& svc, RunningPort& port, const httplib::Request& req,
                    httplib::Response& res) {
        std::string raw = req.path;
        if (!raw.empty() && raw.front() == '/')
            raw.erase(0, 1);
        std::string path;
        std::string op = raw;
        if (auto slash = raw.find('/'); slash != std::string::npos) {
            path = raw.substr(0, slash);
            op = raw.substr(slash + 1);
            if (op.find('/') != std::string::npos) {
                writeOutcome(res, makeFault(kUnknownPath, "too many path segments"), nullptr);
                return;
            }
        }
        if (op.empty()) {
            writeOutcome(res, makeFault(kOperationNotFound, "missing operation name"), nullptr);
            return;
        }

        Value request = Value::record();
        if (!req.body.empty()) {
            json j = json::parse(req.body, nullptr, false);
            if (j.is_discarded()) {
                writeOutcome(res, makeFault(kTypeViolation, "request body is not valid JSON"),
                             nullptr);
                return;
            }
            try {
                request = idl::valueFromJson(j);
            } catch (const std::exception& e) {
                writeOutcome(res, makeFault(kTypeViolation, e.what()), nullptr);
                return;
            }
        }

        Outcome out = dispatchOn(svc, port, path, op, request);
        writeOutcome(res, out, responseTypeFor(port, path, op));
    }

    static const ValueType* responseTypeFor(const RunningPort& port, const std::string& path,
                                            const std::string& op) {
        if (port.effective.redirecting) {
            auto it = port.effective.byPath.find(path);
            if (it == port.effective.byPath.end())
                return nullptr;
            const idl::OperationDef* od = it->second.find(op);
            return od ? &od->response : nullptr;
        }
        auto rit = port.routes.find(op);
        return rit == port.routes.end() ? nullptr : &rit->second.op.response;
    }

    static void writeOutcome(httplib::Response& res, const Outcome& out,
                             const ValueType* responseType) {
        if (out.isFault()) {
            res.status = httpStatusForFault(out.faultName());
            res.set_content(faultBody(out).dump(), "application/json");
            return;
        }
        res.status = 200;
        json body;
        try {
            body = responseType ? idl::toJson(out.value(), *responseType)
                                : idl::toJson(out.value());
        } catch (const std::exception&) {
            body = idl::toJson(out.value());
        }
        res.set_content(body.dump(), "application/json");
    }

    // --- lookup ---

    RunningService* find(const std::string& name) {
        for (auto& svc : services)
            if (svc->name == name)
                return svc.get();
        return nullptr;
    }

    std::pair<RunningService*, RunningPort*> portAt(const Location& loc) {
        for (auto& svc : services) {
            for (auto& port : svc->ports) {
                if (port.spec.location == loc)
                    return {svc.get(), &port};
            }
        }
        return {nullptr, nullptr};
    }
};

// --- ServiceHandle ---

namespace {

RunningPort& portByName(RunningService& s, const std::string& inputPort) {
    for (auto& p : s.ports)
        if (p.spec.name == inputPort)
            return p;
    throw RuntimeError("service '" + s.name + "' has no input port '" + inputPort + "'");
}

} // namespace

const std::string& ServiceHandle::name() const { return s_->name; }

Location ServiceHandle::boundLocation(const std::string& inputPort) const {
    return portByName(*s_, inputPort).spec.location;
}

Outcome ServiceHandle::dispatch(const std::string& inputPort, const std::string& operation,
                                const idl::Value& request) const {
    return dispatchPath(inputPort, "", operation, request);
}

Outcome ServiceHandle::dispatchPath(const std::string& inputPort, const std::string& path,
                                    const std::string& operation,
                                    const idl::Value& request) const {
    RunningPort& port = portByName(*s_, inputPort);
    if (!s_->dispatchFn)
        throw RuntimeError("service '" + s_->name + "' is not serving");
    return s_->dispatchFn(port, path, operation, request);
}

const EffectiveInterface& ServiceHandle::effective(const std::string& inputPort) const {
    return portByName(*s_, inputPort).effective;
}

std::uint64_t ServiceHandle::invocations() const {
    return s_->invocations.load(std::memory_order_relaxed);
}

bool ServiceHandle::embedded() const { return s_->embedded; }

// --- Deployment ---

Deployment::Deployment() : Deployment(Options()) {}

Deployment::Deployment(Options options)
    : impl_(std::make_unique<Impl>(options)), options_(options) {}

Deployment::~Deployment() { stop(); }

void Deployment::add(ServiceSpec spec) {
    if (running_)
        throw ValidationError("cannot add services to a running deployment");
    impl_->pending.push_back(std::move(spec));
}

void Deployment::start() {
    if (running_)
        throw ValidationError("deployment already started");
    if (impl_->started)
        throw ValidationError("deployment cannot be restarted");
    impl_->started = true;

    if (impl_->opts.basePort == 0) {
        const char* env = std::getenv("EMI_BASE_PORT");
        int base = 9400;
        if (env && *env) {
            try {
                base = std::stoi(env);
            } catch (const std::exception&) {
                throw ValidationError("EMI_BASE_PORT is not a number");
            }
            if (base < 1 || base > 65535)
                throw ValidationError("EMI_BASE_PORT out of range");
        }
        impl_->nextPort = static_cast<std::uint16_t>(base);
    } else {
        impl_->nextPort = impl_->opts.basePort;
    }

    try {
        std::vector<ServiceSpec> pending = std::move(impl_->pending);
        impl_->pending.clear();
        for (auto& spec : pending)
            impl_->flatten(std::move(spec), false);
        for (auto& svc : impl_->services)
            impl_->buildRoutes(*svc);
        for (auto& svc : impl_->services)
            impl_->bindPorts(*svc);
        for (auto& svc : impl_->services)
            impl_->resolveOutputPorts(*svc);
        for (auto& svc : impl_->services)
            impl_->serve(*svc);
    } catch (...) {
        impl_->stopAll();
        throw;
    }
    running_ = true;
}

void Deployment::stop() {
    if (!impl_)
        return;
    impl_->stopAll();
    running_ = false;
}

ServiceHandle Deployment::service(const std::string& name) {
    RunningService* s = impl_->find(name);
    if (!s)
        throw ValidationError("unknown service '" + name + "'");
    return ServiceHandle(s);
}

std::vector<std::string> Deployment::serviceNames() const {
    std::vector<std::string> names;
    for (const auto& svc : impl_->services)
        names.push_back(svc->name);
    return names;
}

Outcome Deployment::invokeAt(const Location& location, const std::string& path,
                             const std::string& operation, const idl::Value& request) {
    if (location.isLocal()) {
        auto cit = impl_->channels.find(location.channelId);
        if (cit == impl_->channels.end())
            return makeFault(kTransportError, "no local channel '" + location.channelId + "'");
        return cit->second->call(path, operation, request);
    }
    // When the location is one of ours, encode with the declared request type.
    const ValueType* requestType = nullptr;
    auto [svc, port] = impl_->portAt(location);
    if (port && !port->effective.redirecting) {
        auto rit = port->routes.find(operation);
        if (rit != port->routes.end())
            requestType = &rit->second.op.request;
    } else if (port && port->effective.redirecting) {
        auto it = port->effective.byPath.find(path);
        if (it != port->effective.byPath.end()) {
            if (const idl::OperationDef* od = it->second.find(operation))
                requestType = &od->request;
        }
    }
    return httpInvokeTyped(location.host, location.port, path, operation, request, requestType,
                           5000);
}

Outcome Deployment::invokePort(const std::string& serviceName, const std::string& outputPort,
                               const std::string& operation, const idl::Value& request) {
    RunningService* s = impl_->find(serviceName);
    if (!s)
        return makeFault(kTransportError, "unknown service '" + serviceName + "'");
    return impl_->invokeThroughOutputPort(*s, outputPort, operation, request, true);
}

Outcome httpInvoke(const std::string& host, std::uint16_t port, const std::string& path,
                   const std::string& operation, const idl::Value& request, int timeoutMs) {
    return httpInvokeTyped(host, port, path, operation, request, nullptr, timeoutMs);
}

} // namespace emi::runtime
