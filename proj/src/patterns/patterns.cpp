#include "emi/patterns/patterns.hpp"

#include "emi/idl/extender.hpp"
#include "emi/idl/printer.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <utility>

namespace emi::patterns {

using idl::IdlDocument;
using idl::InterfaceDef;
using idl::InterfaceExtender;
using idl::Value;
using idl::ValueType;
using nlohmann::json;
using runtime::Outcome;

namespace {

// --- config plumbing --------------------------------------------------------

json::array_t& servicesArray(json& config) {
    if (!config.contains("services") || !config["services"].is_array())
        throw RecipeError("config has no services array");
    return config["services"].get_ref<json::array_t&>();
}

json& serviceEntry(json& config, const std::string& name) {
    for (json& svc : servicesArray(config)) {
        if (svc.value("name", "") == name)
            return svc;
    }
    throw RecipeError("no service named '" + name + "' in config");
}

json takeService(json& config, const std::string& name) {
    json::array_t& arr = servicesArray(config);
    for (auto it = arr.begin(); it != arr.end(); ++it) {
        if (it->value("name", "") == name) {
            json svc = std::move(*it);
            arr.erase(it);
            return svc;
        }
    }
    throw RecipeError("no service named '" + name + "' in config");
}

std::string exposedInterface(const json& svc) {
    for (const json& port : svc.value("inputPorts", json::array())) {
        for (const json& e : port.value("interfaces", json::array())) {
            if (e.contains("interface"))
                return e["interface"].get<std::string>();
        }
    }
    throw RecipeError("service '" + svc.value("name", "?") + "' exposes no interface");
}

std::string firstPortName(const json& svc) {
    const json ports = svc.value("inputPorts", json::array());
    if (ports.empty() || !ports[0].contains("name"))
        throw RecipeError("service '" + svc.value("name", "?") + "' has no named input port");
    return ports[0]["name"].get<std::string>();
}

std::string firstPortLocation(const json& svc) {
    const json ports = svc.value("inputPorts", json::array());
    if (ports.empty())
        throw RecipeError("service '" + svc.value("name", "?") + "' has no input ports");
    return ports[0].value("location", "auto");
}

/// Embedded services live on local channels; rewrite the whole subtree.
json localized(json svc) {
    if (svc.contains("inputPorts")) {
        for (json& port : svc["inputPorts"])
            port["location"] = "local";
    }
    if (svc.contains("embeds")) {
        for (json& e : svc["embeds"])
            e["service"] = localized(e["service"]);
    }
    return svc;
}

/// Re-point every exposure of `from` at the interface named `to`.
void renameExposure(json& svc, const std::string& from, const std::string& to) {
    for (json& port : svc["inputPorts"]) {
        if (!port.contains("interfaces"))
            continue;
        for (json& e : port["interfaces"]) {
            if (e.value("interface", "") == from)
                e["interface"] = to;
        }
    }
}

void extendExposure(json& svc, const std::string& ifaceName, const std::string& extName) {
    for (json& port : svc["inputPorts"]) {
        if (!port.contains("interfaces"))
            continue;
        for (json& e : port["interfaces"]) {
            if (e.value("interface", "") == ifaceName)
                e["extender"] = extName;
        }
    }
}

// --- document plumbing ------------------------------------------------------

IdlDocument withInterface(IdlDocument doc, InterfaceDef iface) {
    for (InterfaceDef& i : doc.interfaces) {
        if (i.name() == iface.name()) {
            i = std::move(iface);
            return doc;
        }
    }
    doc.interfaces.push_back(std::move(iface));
    return doc;
}

IdlDocument withExtender(IdlDocument doc, InterfaceExtender ext) {
    for (InterfaceExtender& e : doc.extenders) {
        if (e.name == ext.name) {
            e = std::move(ext);
            return doc;
        }
    }
    doc.extenders.push_back(std::move(ext));
    return doc;
}

const InterfaceDef& declaredInterface(const IdlDocument& doc, const std::string& name) {
    const InterfaceDef* iface = doc.findInterface(name);
    if (iface == nullptr)
        throw RecipeError("interface '" + name + "' is not declared");
    return *iface;
}

std::vector<std::string> operationNames(const InterfaceDef& iface) {
    std::vector<std::string> names;
    for (const auto& op : iface.operations())
        names.push_back(op.name);
    return names;
}

json keySettings(const ApiKeyConfig& cfg) {
    json keys = json::array();
    for (const std::string& k : cfg.validKeys)
        keys.push_back(k);
    return json{{"validKeys", std::move(keys)}, {"keyField", cfg.keyField}};
}

bool holdsValidKey(const Value& request, const ApiKeyConfig& cfg) {
    const Value* key = request.isRecord() ? request.single(cfg.keyField) : nullptr;
    return key != nullptr && key->isString() && cfg.validKeys.count(key->asString()) > 0;
}

json refactoringSkeleton(const std::string& pattern, StrategyCell cell,
                         const std::string& entryService, const std::string& entryPort,
                         const std::vector<std::string>& checks) {
    json r;
    r["pattern"] = pattern;
    r["generality"] = std::string(generalityName(cell.generality));
    r["distribution"] = std::string(distributionName(cell.distribution));
    r["entry"] = json{{"service", entryService}, {"port", entryPort}};
    r["checks"] = checks;
    return r;
}

} // namespace

// --- runtime building blocks --------------------------------------------------

runtime::CourierHandler apiKeyCourier(ApiKeyConfig cfg) {
    auto shared = std::make_shared<const ApiKeyConfig>(std::move(cfg));
    return [shared](const std::string&, const Value& request, const runtime::ForwardFn& forward) {
        if (!holdsValidKey(request, *shared))
            return runtime::makeFault("NotAuthorised", shared->keyField + " rejected");
        return forward(request);
    };
}

runtime::Behavior apiKeyCheckWrapper(runtime::Behavior inner,
                                     const std::vector<std::string>& operations,
                                     ApiKeyConfig cfg) {
    auto shared = std::make_shared<const ApiKeyConfig>(std::move(cfg));
    for (const std::string& op : operations) {
        auto it = inner.handlers.find(op);
        if (it == inner.handlers.end())
            throw RecipeError("apikeyCheck wraps unknown operation '" + op + "'");
        runtime::OpHandler next = std::move(it->second);
        it->second = [next = std::move(next), shared](const Value& request,
                                                      const runtime::ServiceContext& ctx) {
            if (!holdsValidKey(request, *shared))
                return runtime::makeFault("NotAuthorised", shared->keyField + " rejected");
            return next(request.without(shared->keyField), ctx);
        };
    }
    return inner;
}

runtime::Behavior forwardBehavior(const std::map<std::string, std::string>& routes) {
    runtime::Behavior b;
    for (const auto& [op, port] : routes) {
        b.handlers[op] = [op = op, port = port](const Value& request,
                                                const runtime::ServiceContext& ctx) {
            return ctx.call(port, op, request);
        };
    }
    return b;
}

runtime::Behavior paginateWrapper(runtime::Behavior inner, PaginateConfig cfg) {
    auto it = inner.handlers.find(cfg.operation);
    if (it == inner.handlers.end())
        throw RecipeError("paginate wraps unknown operation '" + cfg.operation + "'");
    auto shared = std::make_shared<const PaginateConfig>(std::move(cfg));
    runtime::OpHandler next = std::move(it->second);
    it->second = [next = std::move(next), shared](const Value& request,
                                                  const runtime::ServiceContext& ctx) -> Outcome {
        auto bad = [](std::string why) {
            return runtime::makeFault("InvalidPageRequest", std::move(why));
        };
        const Value* off = request.isRecord() ? request.single("offset") : nullptr;
        const Value* lim = request.isRecord() ? request.single("limit") : nullptr;
        if (off == nullptr || !off->isInt())
            return bad("offset must be an int");
        if (lim == nullptr || !lim->isInt())
            return bad("limit must be an int");
        const std::int64_t offset = off->asInt();
        const std::int64_t limit = lim->asInt();
        if (limit <= 0)
            return bad("limit must be positive");
        if (offset < 0)
            return bad("offset must not be negative");
        std::string criterion;
        if (const Value* sc = request.isRecord() ? request.single("sortCriterion") : nullptr) {
            if (!sc->isString() || shared->sorts.count(sc->asString()) == 0)
                return bad("unknown sort criterion");
            criterion = sc->asString();
        }

        Outcome out =
            next(request.without("offset").without("limit").without("sortCriterion"), ctx);
        if (out.isFault())
            return out;
        if (!out.value().isRecord())
            return runtime::makeFault(runtime::kInternalError,
                                      "paginated operation returned a non-record");
        Value full = out.value();

        std::vector<Value> items;
        if (const Value::Field* f = full.find(shared->collectionField))
            items = f->items;
        if (!criterion.empty()) {
            const bool numeric = shared->sorts.at(criterion) == "int";
            std::stable_sort(items.begin(), items.end(), [&](const Value& a, const Value& b) {
                const Value* ka = a.isRecord() ? a.single(criterion) : nullptr;
                const Value* kb = b.isRecord() ? b.single(criterion) : nullptr;
                if (numeric) {
                    const auto fallback = std::numeric_limits<std::int64_t>::min();
                    const std::int64_t ia = ka != nullptr && ka->isInt() ? ka->asInt() : fallback;
                    const std::int64_t ib = kb != nullptr && kb->isInt() ? kb->asInt() : fallback;
                    return ia < ib;
                }
                const std::string sa = ka != nullptr && ka->isString() ? ka->asString() : "";
                const std::string sb = kb != nullptr && kb->isString() ? kb->asString() : "";
                return sa < sb;
            });
        }

        const std::int64_t n = static_cast<std::int64_t>(items.size());
        const std::int64_t total = n == 0 ? 0 : (n + limit - 1) / limit;
        if (total > 0 && offset >= total)
            return bad("page " + std::to_string(offset) + " is out of range");
        std::vector<Value> page;
        if (n > 0) {
            const std::int64_t first = offset * limit;
            const std::int64_t last = std::min(n, first + limit);
            page.assign(items.begin() + first, items.begin() + last);
        }

        bool replaced = false;
        for (Value::Field& f : full.fields()) {
            if (f.name == shared->collectionField) {
                f.items = std::move(page);
                replaced = true;
                break;
            }
        }
        if (!replaced)
            full.fields().push_back({shared->collectionField, std::move(page)});
        full.set("offset", Value::integer(offset));
        full.set("limit", Value::integer(limit));
        if (!criterion.empty())
            full.set("sortCriterion", Value::string(criterion));
        full.set("total", Value::integer(total));
        return Outcome::response(std::move(full));
    };
    return inner;
}

// --- api key ------------------------------------------------------------------

RecipeResult applyApiKey(const json& baseConfig, const std::string& targetService,
                         const ApiKeyConfig& cfg, StrategyCell cell, const IdlDocument& doc) {
    if (cfg.validKeys.empty())
        throw RecipeError("api key recipe needs at least one valid key");
    if (cfg.keyField.empty())
        throw RecipeError("api key recipe needs a key field name");

    RecipeResult out;
    out.pattern = "apikey";
    out.cell = cell;
    out.score = score(cell);
    out.config = baseConfig;

    const json original = serviceEntry(out.config, targetService);
    const std::string ifaceName = exposedInterface(original);
    const InterfaceDef& iface = declaredInterface(doc, ifaceName);

    InterfaceExtender extender;
    extender.name = "APIKeyExtender";
    extender.requestExtension = {{cfg.keyField, idl::Prim::String}};
    extender.addedFaults = {idl::FaultDef("NotAuthorised")};
    InterfaceDef extended = idl::applyExtender(iface, extender);
    out.refactoredInterface = InterfaceDef(ifaceName + "WithAPIKey", extended.operations());
    out.refactoredIdl =
        idl::printIdl(withInterface(withExtender(doc, extender), out.refactoredInterface));
    out.config["idl"] = "inline";
    out.config["idlText"] = out.refactoredIdl;

    const std::vector<std::string> ops = operationNames(iface);
    const std::string portName = firstPortName(original);
    const std::string portLocation = firstPortLocation(original);
    const std::string gatewayName = targetService + "Gateway";

    const json keyCfg = keySettings(cfg);
    json courierEntry = {{"courier", "apikey"}, {"config", keyCfg}};
    json wrapperCfg = keyCfg;
    wrapperCfg["operations"] = ops;
    json wrapperEntry = {{"name", "apikeyCheck"}, {"config", wrapperCfg}};

    // The gateway cells forward everything through output port "pc".
    json gateway;
    gateway["name"] = gatewayName;
    json gatewayPort;
    gatewayPort["name"] = "ip";
    gatewayPort["location"] = portLocation;
    if (cell.generality == Generality::AdHoc) {
        json routes;
        for (const std::string& op : ops)
            routes[op] = "pc";
        gateway["behavior"] = "forward";
        gateway["behaviorConfig"] = json{{"routes", std::move(routes)}};
        gateway["wrappers"] = json::array({wrapperEntry});
        gatewayPort["interfaces"] =
            json::array({json{{"interface", out.refactoredInterface.name()}}});
    } else {
        gatewayPort["aggregates"] =
            json::array({json{{"outputPort", "pc"}, {"extender", extender.name}}});
        gatewayPort["couriers"] = json::array({courierEntry});
    }
    gateway["inputPorts"] = json::array({std::move(gatewayPort)});

    std::string entryService;
    std::string entryPort;
    switch (cell.distribution) {
    case Distribution::Internal: {
        entryService = targetService;
        entryPort = portName;
        json& target = serviceEntry(out.config, targetService);
        if (cell.generality == Generality::AdHoc) {
            target["wrappers"].push_back(wrapperEntry);
            renameExposure(target, ifaceName, out.refactoredInterface.name());
        } else {
            extendExposure(target, ifaceName, extender.name);
            target["inputPorts"][0]["couriers"].push_back(courierEntry);
        }
        break;
    }
    case Distribution::Adjacent: {
        entryService = gatewayName;
        entryPort = "ip";
        gateway["embeds"] =
            json::array({json{{"as", "pc"}, {"service", localized(takeService(out.config, targetService))}}});
        out.config["services"].push_back(std::move(gateway));
        break;
    }
    case Distribution::External: {
        entryService = gatewayName;
        entryPort = "ip";
        gateway["outputPorts"] = json::array({json{
            {"name", "pc"},
            {"target", "svc:" + targetService + "." + portName},
            {"interface", ifaceName},
        }});
        out.config["services"].push_back(std::move(gateway));
        break;
    }
    }

    out.checkNames = {"valid-key-equivalence", "invalid-key-rejected"};
    if (cell.distribution != Distribution::Internal)
        out.checkNames.push_back("original-isolated");

    json r = refactoringSkeleton(out.pattern, cell, entryService, entryPort, out.checkNames);
    r["interface"] = out.refactoredInterface.name();
    r["original"] = json{{"service", targetService}, {"interface", ifaceName}};
    r["oracle"] = json{{"services", json::array({original})}};
    r["config"] = keyCfg;
    out.config["refactorings"].push_back(std::move(r));
    return out;
}

// --- pagination -----------------------------------------------------------------

namespace {

/// Criteria an item collection can be sorted by: primitive int/string fields
/// of cardinality one present (with one kind) in every union alternative.
std::map<std::string, std::string> sortableFields(const ValueType& item) {
    std::vector<const ValueType*> alts;
    if (item.isUnion()) {
        for (const ValueType& a : item.alternatives())
            alts.push_back(&a);
    } else {
        alts.push_back(&item);
    }
    std::map<std::string, std::string> common;
    bool first = true;
    for (const ValueType* alt : alts) {
        if (!alt->isRecord())
            return {};
        std::map<std::string, std::string> mine;
        for (const auto& f : alt->fields()) {
            if (!(f.spec.cardinality == idl::Cardinality::one()) || !f.spec.type.isPrimitive())
                continue;
            if (f.spec.type.prim() == idl::Prim::Int)
                mine[f.name] = "int";
            else if (f.spec.type.prim() == idl::Prim::String)
                mine[f.name] = "string";
        }
        if (first) {
            common = std::move(mine);
            first = false;
            continue;
        }
        for (auto it = common.begin(); it != common.end();) {
            auto hit = mine.find(it->first);
            if (hit == mine.end() || hit->second != it->second)
                it = common.erase(it);
            else
                ++it;
        }
    }
    return common;
}

} // namespace

RecipeResult applyPagination(const json& baseConfig, const std::string& targetService,
                             const std::string& operation, const IdlDocument& doc) {
    RecipeResult out;
    out.pattern = "paginate";
    out.cell = {Generality::AdHoc, Distribution::Internal};
    out.score = score(out.cell);
    out.config = baseConfig;

    const json original = serviceEntry(out.config, targetService);
    const std::string ifaceName = exposedInterface(original);
    const InterfaceDef& iface = declaredInterface(doc, ifaceName);
    const idl::OperationDef* op = iface.find(operation);
    if (op == nullptr)
        throw RecipeError("operation '" + operation + "' is not part of " + ifaceName);
    if (!op->response.isRecord())
        throw RecipeError("response of '" + operation + "' is not a record");
    const ValueType::Field* collection = nullptr;
    for (const auto& f : op->response.fields()) {
        if (f.spec.cardinality.unbounded()) {
            collection = &f;
            break;
        }
    }
    if (collection == nullptr)
        throw RecipeError("response of '" + operation + "' has no collection field to paginate");

    const std::map<std::string, std::string> sorts = sortableFields(collection->spec.type);

    const idl::RecordFields requestMeta = {
        {"offset", idl::Prim::Int},
        {"limit", idl::Prim::Int},
        {"sortCriterion", idl::Prim::String, idl::Cardinality::opt()},
    };
    idl::RecordFields responseMeta = requestMeta;
    responseMeta.push_back({"total", idl::Prim::Int});

    idl::OperationDef paged = *op;
    paged.request =
        idl::extendMessage(op->request, requestMeta, idl::MessageSide::Request, operation);
    paged.response =
        idl::extendMessage(op->response, responseMeta, idl::MessageSide::Response, operation);
    paged.faults.push_back(idl::FaultDef("InvalidPageRequest"));

    std::vector<idl::OperationDef> ops;
    for (const auto& o : iface.operations())
        ops.push_back(o.name == operation ? paged : o);
    out.refactoredInterface = InterfaceDef(ifaceName + "Paged", std::move(ops));
    out.refactoredIdl = idl::printIdl(withInterface(doc, out.refactoredInterface));
    out.config["idl"] = "inline";
    out.config["idlText"] = out.refactoredIdl;

    json pageCfg = {
        {"operation", operation},
        {"collectionField", collection->name},
        {"sorts", sorts},
    };
    json& target = serviceEntry(out.config, targetService);
    target["wrappers"].push_back(json{{"name", "paginate"}, {"config", pageCfg}});
    renameExposure(target, ifaceName, out.refactoredInterface.name());

    out.checkNames = {"page-slices-match-oracle", "pages-concatenate-to-collection",
                      "invalid-page-requests-fault"};
    json r = refactoringSkeleton(out.pattern, out.cell, targetService, firstPortName(original),
                                 out.checkNames);
    r["interface"] = out.refactoredInterface.name();
    r["original"] = json{{"service", targetService}, {"interface", ifaceName}};
    r["oracle"] = json{{"services", json::array({original})}};
    r["config"] = std::move(pageCfg);
    out.config["refactorings"].push_back(std::move(r));
    return out;
}

// --- merge endpoints --------------------------------------------------------------

RecipeResult applyMergeEndpoints(const json& baseConfig, const std::string& serviceA,
                                 const std::string& serviceB, StrategyCell cell,
                                 const IdlDocument& doc) {
    if (cell.distribution == Distribution::Internal)
        throw RecipeError("merging endpoints introduces a gateway; Internal is not a legal cell");
    if (serviceA == serviceB)
        throw RecipeError("merge needs two distinct services");

    RecipeResult out;
    out.pattern = "merge";
    out.cell = cell;
    out.score = score(cell);
    out.config = baseConfig;

    const json origA = serviceEntry(out.config, serviceA);
    const json origB = serviceEntry(out.config, serviceB);
    const std::string ifaceAName = exposedInterface(origA);
    const std::string ifaceBName = exposedInterface(origB);
    const InterfaceDef& ifaceA = declaredInterface(doc, ifaceAName);
    const InterfaceDef& ifaceB = declaredInterface(doc, ifaceBName);
    if (auto dup = runtime::mergeCheck({ifaceA, ifaceB}))
        throw RecipeError("merge conflict: both interfaces declare operation '" + *dup + "'");

    std::vector<idl::OperationDef> ops = ifaceA.operations();
    for (const auto& o : ifaceB.operations())
        ops.push_back(o);
    out.refactoredInterface = InterfaceDef("MergedInterface", std::move(ops));
    out.refactoredIdl = idl::printIdl(withInterface(doc, out.refactoredInterface));
    out.config["idl"] = "inline";
    out.config["idlText"] = out.refactoredIdl;

    const std::string gatewayName = "MergeGateway";
    json gateway;
    gateway["name"] = gatewayName;
    json port;
    port["name"] = "ip";
    port["location"] = firstPortLocation(origA);

    json owners;
    for (const auto& o : ifaceA.operations())
        owners[o.name] = serviceA;
    for (const auto& o : ifaceB.operations())
        owners[o.name] = serviceB;

    if (cell.generality == Generality::AdHoc) {
        json routes;
        for (const auto& o : ifaceA.operations())
            routes[o.name] = "pa";
        for (const auto& o : ifaceB.operations())
            routes[o.name] = "pb";
        gateway["behavior"] = "forward";
        gateway["behaviorConfig"] = json{{"routes", std::move(routes)}};
        port["interfaces"] = json::array({json{{"interface", out.refactoredInterface.name()}}});
    } else {
        port["aggregates"] = json::array({
            json{{"outputPort", "pa"}},
            json{{"outputPort", "pb"}},
        });
    }
    gateway["inputPorts"] = json::array({std::move(port)});

    if (cell.distribution == Distribution::Adjacent) {
        json childA = localized(takeService(out.config, serviceA));
        json childB = localized(takeService(out.config, serviceB));
        gateway["embeds"] = json::array({
            json{{"as", "pa"}, {"service", std::move(childA)}},
            json{{"as", "pb"}, {"service", std::move(childB)}},
        });
    } else {
        gateway["outputPorts"] = json::array({
            json{{"name", "pa"},
                 {"target", "svc:" + serviceA + "." + firstPortName(origA)},
                 {"interface", ifaceAName}},
            json{{"name", "pb"},
                 {"target", "svc:" + serviceB + "." + firstPortName(origB)},
                 {"interface", ifaceBName}},
        });
    }
    out.config["services"].push_back(std::move(gateway));

    out.checkNames = {"merged-responses-match-owners", "merge-preserves-operations"};
    json r = refactoringSkeleton(out.pattern, cell, gatewayName, "ip", out.checkNames);
    r["interface"] = out.refactoredInterface.name();
    r["originals"] = json::array({
        json{{"service", serviceA}, {"interface", ifaceAName}},
        json{{"service", serviceB}, {"interface", ifaceBName}},
    });
    r["oracle"] = json{{"services", json::array({origA, origB})}};
    r["config"] = json{{"owners", std::move(owners)}};
    out.config["refactorings"].push_back(std::move(r));
    return out;
}

// --- version identifier ------------------------------------------------------------

RecipeResult applyVersionIdentifier(const json& baseConfig,
                                    const std::vector<std::pair<std::string, std::string>>& versions,
                                    StrategyCell cell, const IdlDocument& doc) {
    if (cell.generality == Generality::AdHoc)
        throw RecipeError("version identifiers ride on redirection, which routes path tokens "
                          "without naming operations; only the Parametric cells are legal");
    if (cell.distribution == Distribution::Internal)
        throw RecipeError("version identifiers introduce a gateway; Internal is not a legal cell");
    if (versions.size() < 2)
        throw RecipeError("version identifier needs at least two versions");

    RecipeResult out;
    out.pattern = "version";
    out.cell = cell;
    out.score = score(cell);
    out.config = baseConfig;
    out.refactoredInterface = InterfaceDef(); // redirection adds no operations of its own
    out.refactoredIdl = idl::printIdl(doc);
    out.config["idl"] = "inline";
    out.config["idlText"] = out.refactoredIdl;

    const std::string gatewayName = "VersionGateway";
    json gateway;
    gateway["name"] = gatewayName;
    json port;
    port["name"] = "ip";
    port["location"] = firstPortLocation(serviceEntry(out.config, versions.front().second));
    port["redirects"] = json::array();

    json versionsJson = json::array();
    json oracleServices = json::array();
    std::set<std::string> seenTags;
    std::set<std::string> seenServices;
    for (const auto& [tag, svcName] : versions) {
        if (tag.empty())
            throw RecipeError("version tags must be nonempty");
        if (!seenTags.insert(tag).second)
            throw RecipeError("duplicate version tag '" + tag + "'");
        if (!seenServices.insert(svcName).second)
            throw RecipeError("service '" + svcName + "' appears under two version tags");

        const json orig = serviceEntry(out.config, svcName);
        const std::string ifaceName = exposedInterface(orig);
        declaredInterface(doc, ifaceName);
        port["redirects"].push_back(json{{"path", tag}, {"outputPort", tag}});
        if (cell.distribution == Distribution::Adjacent) {
            gateway["embeds"].push_back(
                json{{"as", tag}, {"service", localized(takeService(out.config, svcName))}});
        } else {
            gateway["outputPorts"].push_back(json{
                {"name", tag},
                {"target", "svc:" + svcName + "." + firstPortName(orig)},
                {"interface", ifaceName},
            });
        }
        versionsJson.push_back(json{{"path", tag}, {"service", svcName}, {"interface", ifaceName}});
        oracleServices.push_back(orig);
    }
    gateway["inputPorts"] = json::array({std::move(port)});
    out.config["services"].push_back(std::move(gateway));

    out.checkNames = {"versioned-responses-match-direct", "versions-isolated"};
    json r = refactoringSkeleton(out.pattern, cell, gatewayName, "ip", out.checkNames);
    r["versions"] = std::move(versionsJson);
    r["oracle"] = json{{"services", std::move(oracleServices)}};
    r["config"] = json::object();
    out.config["refactorings"].push_back(std::move(r));
    return out;
}

} // namespace emi::patterns
