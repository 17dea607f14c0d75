#include "emi/config/loader.hpp"

#include "emi/demo/model.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace emi::config {

namespace fs = std::filesystem;
using nlohmann::json;
using runtime::Location;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string resolvePath(const std::string& ref, const std::string& baseDir) {
    fs::path p(ref);
    if (p.is_absolute() || baseDir.empty())
        return ref;
    return (fs::path(baseDir) / p).string();
}

std::string requireString(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty())
        throw ConfigError(where + " needs a nonempty \"" + key + "\"");
    return obj[key].get<std::string>();
}

Location parseLocationToken(const std::string& token, const std::string& where) {
    if (token == "auto")
        return Location::network("127.0.0.1", 0);
    if (token == "local")
        return Location::local("");
    if (token.rfind("local:", 0) == 0)
        return Location::local(token.substr(6));
    try {
        return Location::parse(token);
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

const idl::InterfaceDef& interfaceRef(const LoadedConfig& cfg, const std::string& name,
                                      const std::string& where) {
    const idl::InterfaceDef* iface = cfg.doc.findInterface(name);
    if (iface == nullptr)
        throw ConfigError(where + " references unknown interface '" + name + "'");
    return *iface;
}

const idl::InterfaceExtender& extenderRef(const LoadedConfig& cfg, const std::string& name,
                                          const std::string& where) {
    const idl::InterfaceExtender* ext = cfg.doc.findExtender(name);
    if (ext == nullptr)
        throw ConfigError(where + " references unknown extender '" + name + "'");
    return *ext;
}

runtime::InputPortSpec inputPortFromConfig(const json& port, const LoadedConfig& cfg,
                                           const Registry& registry, const std::string& svcName) {
    runtime::InputPortSpec spec;
    spec.name = requireString(port, "name", "input port of '" + svcName + "'");
    const std::string where = "port '" + svcName + "." + spec.name + "'";
    spec.location = parseLocationToken(port.value("location", "auto"), where);

    for (const json& e : port.value("interfaces", json::array())) {
        runtime::InterfaceExposure exp;
        exp.iface = interfaceRef(cfg, requireString(e, "interface", where), where);
        if (e.contains("extender"))
            exp.extender = extenderRef(cfg, e["extender"].get<std::string>(), where);
        spec.interfaces.push_back(std::move(exp));
    }
    for (const json& a : port.value("aggregates", json::array())) {
        runtime::AggregateExposure agg;
        agg.outputPort = requireString(a, "outputPort", where);
        if (a.contains("extender"))
            agg.extender = extenderRef(cfg, a["extender"].get<std::string>(), where);
        spec.aggregates.push_back(std::move(agg));
    }
    for (const json& r : port.value("redirects", json::array())) {
        spec.redirects.push_back(
            {requireString(r, "path", where), requireString(r, "outputPort", where)});
    }
    for (const json& c : port.value("couriers", json::array())) {
        runtime::CourierBinding binding;
        binding.interfaceName = c.value("interface", "");
        binding.operation = c.value("operation", "");
        const std::string courier = requireString(c, "courier", where);
        auto it = registry.couriers.find(courier);
        if (it == registry.couriers.end())
            throw ConfigError(where + " references unknown courier '" + courier + "'");
        binding.handler = it->second(c.value("config", json::object()));
        spec.couriers.push_back(std::move(binding));
    }
    return spec;
}

runtime::OutputPortSpec outputPortFromConfig(const json& port, const LoadedConfig& cfg,
                                             const std::string& svcName) {
    runtime::OutputPortSpec spec;
    spec.name = requireString(port, "name", "output port of '" + svcName + "'");
    const std::string where = "output port '" + svcName + "." + spec.name + "'";
    const std::string target = requireString(port, "target", where);
    if (target.rfind("svc:", 0) == 0)
        spec.symbolicTarget = target.substr(4);
    else
        spec.target = parseLocationToken(target, where);
    spec.iface = interfaceRef(cfg, requireString(port, "interface", where), where);
    return spec;
}

} // namespace

runtime::ServiceSpec serviceFromConfig(const json& svc, const LoadedConfig& cfg,
                                       const Registry& registry) {
    if (!svc.is_object())
        throw ConfigError("service entries must be objects");
    runtime::ServiceSpec spec;
    spec.name = requireString(svc, "name", "service");

    if (svc.contains("behavior")) {
        const std::string key = svc["behavior"].get<std::string>();
        auto it = registry.behaviors.find(key);
        if (it == registry.behaviors.end())
            throw ConfigError("service '" + spec.name + "' references unknown behavior '" + key +
                              "'");
        spec.behavior = it->second(cfg.dataset, svc.value("behaviorConfig", json::object()));
    }
    for (const json& w : svc.value("wrappers", json::array())) {
        const std::string key = requireString(w, "name", "wrapper of '" + spec.name + "'");
        auto it = registry.wrappers.find(key);
        if (it == registry.wrappers.end())
            throw ConfigError("service '" + spec.name + "' references unknown wrapper '" + key +
                              "'");
        spec.behavior = it->second(std::move(spec.behavior), w.value("config", json::object()));
    }

    for (const json& port : svc.value("inputPorts", json::array()))
        spec.inputPorts.push_back(inputPortFromConfig(port, cfg, registry, spec.name));
    for (const json& port : svc.value("outputPorts", json::array()))
        spec.outputPorts.push_back(outputPortFromConfig(port, cfg, spec.name));
    for (const json& e : svc.value("embeds", json::array())) {
        runtime::EmbedSpec embed;
        embed.as = requireString(e, "as", "embed of '" + spec.name + "'");
        if (!e.contains("service"))
            throw ConfigError("embed '" + spec.name + "." + embed.as + "' needs a service");
        embed.service = std::make_shared<runtime::ServiceSpec>(
            serviceFromConfig(e["service"], cfg, registry));
        spec.embeds.push_back(std::move(embed));
    }
    return spec;
}

LoadedConfig resolveConfig(json config, const std::string& baseDir) {
    if (!config.is_object())
        throw ConfigError("config root must be an object");
    LoadedConfig out;

    if (config.contains("idlText")) {
        if (!config["idlText"].is_string())
            throw ConfigError("idlText must be a string of IDL source");
        try {
            out.doc = idl::parseIdl(config["idlText"].get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("in idlText: ") + e.what());
        }
    } else {
        const std::string idlRef = config.value("idl", "pubcat");
        if (idlRef == "pubcat") {
            out.doc = demo::pubCatDocument();
        } else {
            const std::string path = resolvePath(idlRef, baseDir);
            try {
                out.doc = idl::parseIdl(readFile(path));
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw ConfigError("in '" + path + "': " + e.what());
            }
        }
    }

    const std::string dataRef = config.value("dataset", "builtin");
    try {
        if (dataRef == "builtin")
            out.dataset = std::make_shared<const demo::Dataset>(demo::Dataset::builtin());
        else
            out.dataset = std::make_shared<const demo::Dataset>(
                demo::Dataset::loadFile(resolvePath(dataRef, baseDir)));
    } catch (const demo::DemoError& e) {
        throw ConfigError(e.what());
    }

    out.raw = std::move(config);
    return out;
}

LoadedConfig loadConfigFile(const std::string& path) {
    json parsed;
    try {
        parsed = json::parse(readFile(path));
    } catch (const json::exception& e) {
        throw ConfigError("in '" + path + "': " + e.what());
    }
    return resolveConfig(std::move(parsed), fs::path(path).parent_path().string());
}

void configureDeployment(runtime::Deployment& dep, const LoadedConfig& cfg,
                         const Registry& registry) {
    if (!cfg.raw.contains("services") || !cfg.raw["services"].is_array())
        throw ConfigError("config has no services array");
    for (const json& svc : cfg.raw["services"])
        dep.add(serviceFromConfig(svc, cfg, registry));
}

} // namespace emi::config
