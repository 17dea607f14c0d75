#include "emi/config/registry.hpp"

#include "emi/demo/services.hpp"
#include "emi/patterns/patterns.hpp"

namespace emi::config {

namespace {

using nlohmann::json;

std::vector<std::string> stringList(const json& arr, const std::string& what) {
    if (!arr.is_array())
        throw ConfigError(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const json& e : arr) {
        if (!e.is_string())
            throw ConfigError(what + " must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

patterns::ApiKeyConfig apiKeySettings(const json& cfg) {
    patterns::ApiKeyConfig out;
    for (const std::string& k : stringList(cfg.value("validKeys", json::array()), "validKeys"))
        out.validKeys.insert(k);
    out.keyField = cfg.value("keyField", "apiKey");
    return out;
}

std::shared_ptr<const demo::Dataset> requireData(const std::shared_ptr<const demo::Dataset>& d,
                                                 const char* who) {
    if (!d)
        throw ConfigError(std::string(who) + " needs a dataset");
    return d;
}

} // namespace

Registry standardRegistry() {
    Registry r;

    r.behaviors["pubcat"] = [](const std::shared_ptr<const demo::Dataset>& data, const json&) {
        return demo::pubCatBehavior(requireData(data, "behavior 'pubcat'"));
    };
    r.behaviors["pubcatV2"] = [](const std::shared_ptr<const demo::Dataset>& data, const json&) {
        return demo::pubCatV2Behavior(requireData(data, "behavior 'pubcatV2'"));
    };
    r.behaviors["citind"] = [](const std::shared_ptr<const demo::Dataset>& data, const json&) {
        return demo::citIndBehavior(requireData(data, "behavior 'citind'"));
    };
    r.behaviors["forward"] = [](const std::shared_ptr<const demo::Dataset>&, const json& cfg) {
        const json routes = cfg.value("routes", json::object());
        if (!routes.is_object() || routes.empty())
            throw ConfigError("behavior 'forward' needs routes {operation: outputPort}");
        std::map<std::string, std::string> map;
        for (const auto& [op, port] : routes.items()) {
            if (!port.is_string())
                throw ConfigError("forward route for '" + op + "' must name an output port");
            map[op] = port.get<std::string>();
        }
        return patterns::forwardBehavior(map);
    };

    r.wrappers["apikeyCheck"] = [](runtime::Behavior inner, const json& cfg) {
        return patterns::apiKeyCheckWrapper(
            std::move(inner), stringList(cfg.value("operations", json::array()), "operations"),
            apiKeySettings(cfg));
    };
    r.wrappers["paginate"] = [](runtime::Behavior inner, const json& cfg) {
        patterns::PaginateConfig pc;
        pc.operation = cfg.value("operation", "");
        pc.collectionField = cfg.value("collectionField", "");
        if (pc.operation.empty() || pc.collectionField.empty())
            throw ConfigError("wrapper 'paginate' needs operation and collectionField");
        const json sorts = cfg.value("sorts", json::object());
        for (const auto& [name, kind] : sorts.items()) {
            if (!kind.is_string() || (kind != "int" && kind != "string"))
                throw ConfigError("paginate sort '" + name + "' must be \"int\" or \"string\"");
            pc.sorts[name] = kind.get<std::string>();
        }
        return patterns::paginateWrapper(std::move(inner), std::move(pc));
    };

    r.couriers["apikey"] = [](const json& cfg) {
        return patterns::apiKeyCourier(apiKeySettings(cfg));
    };

    return r;
}

} // namespace emi::config
