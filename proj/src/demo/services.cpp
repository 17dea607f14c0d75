#include "emi/demo/services.hpp"

#include <algorithm>

namespace emi::demo {

using idl::Value;
using runtime::Behavior;
using runtime::Location;
using runtime::Outcome;
using runtime::ServiceContext;
using runtime::ServiceSpec;

Value publicationValue(const Publication& pub, bool withDoi) {
    Value v = Value::record();
    if (pub.kind == Publication::Kind::Article)
        v.set("journal", Value::string(pub.journal));
    else
        v.set("confId", Value::string(pub.confId));
    v.set("title", Value::string(pub.title));
    for (const std::string& a : pub.authors)
        v.add("authors", Value::string(a));
    v.set("year", Value::integer(pub.year));
    if (withDoi)
        v.set("doi", Value::string(pub.doi));
    return v;
}

namespace {

std::string requestString(const Value& request, std::string_view field) {
    const Value* v = request.single(field);
    return v && v->isString() ? v->asString() : std::string();
}

template <typename Pred>
Outcome selectPubs(const Dataset& data, bool withDoi, Pred keep) {
    Value out = Value::record();
    std::int64_t count = 0;
    for (const Publication& pub : data.publications) {
        if (!keep(pub))
            continue;
        out.add("publications", publicationValue(pub, withDoi));
        count++;
    }
    if (withDoi)
        out.set("count", Value::integer(count));
    return Outcome::response(std::move(out));
}

Behavior catalogueBehavior(std::shared_ptr<const Dataset> data, bool withDoi) {
    Behavior b;
    b.handlers["getAuthorPubs"] = [data, withDoi](const Value& request, const ServiceContext&) {
        std::string authorId = requestString(request, "authorId");
        return selectPubs(*data, withDoi, [&](const Publication& p) {
            return std::find(p.authors.begin(), p.authors.end(), authorId) != p.authors.end();
        });
    };
    b.handlers["getConfPubs"] = [data, withDoi](const Value& request, const ServiceContext&) {
        std::string confId = requestString(request, "confId");
        return selectPubs(*data, withDoi, [&](const Publication& p) {
            return p.kind != Publication::Kind::Article && p.confId == confId;
        });
    };
    return b;
}

ServiceSpec oneInterfaceService(std::string name, Location at, idl::InterfaceDef iface,
                                Behavior behavior) {
    ServiceSpec spec;
    spec.name = std::move(name);
    runtime::InputPortSpec ip;
    ip.name = "ip";
    ip.location = std::move(at);
    ip.interfaces.push_back({std::move(iface), std::nullopt});
    spec.inputPorts.push_back(std::move(ip));
    spec.behavior = std::move(behavior);
    return spec;
}

} // namespace

Behavior pubCatBehavior(std::shared_ptr<const Dataset> data) {
    return catalogueBehavior(std::move(data), false);
}

Behavior pubCatV2Behavior(std::shared_ptr<const Dataset> data) {
    return catalogueBehavior(std::move(data), true);
}

Behavior citIndBehavior(std::shared_ptr<const Dataset> data) {
    Behavior b;
    b.handlers["getCitations"] = [data](const Value& request, const ServiceContext&) {
        std::string pubKey = requestString(request, "pubKey");
        Value out = Value::record();
        auto it = data->citations.find(pubKey);
        if (it != data->citations.end()) {
            for (const std::string& cited : it->second)
                out.add("citations", Value::string(cited));
        }
        return Outcome::response(std::move(out));
    };
    b.handlers["getCited"] = [data](const Value& request, const ServiceContext&) {
        std::string pubKey = requestString(request, "pubKey");
        Value out = Value::record();
        // Citing publications in dataset order keeps the reply deterministic.
        for (const Publication& pub : data->publications) {
            auto it = data->citations.find(pub.id);
            if (it == data->citations.end())
                continue;
            if (std::find(it->second.begin(), it->second.end(), pubKey) != it->second.end())
                out.add("citations", Value::string(pub.id));
        }
        return Outcome::response(std::move(out));
    };
    return b;
}

ServiceSpec pubCatService(std::string name, Location at, std::shared_ptr<const Dataset> data) {
    return oneInterfaceService(std::move(name), std::move(at), pubCatInterface(),
                               pubCatBehavior(std::move(data)));
}

ServiceSpec pubCatV2Service(std::string name, Location at, std::shared_ptr<const Dataset> data) {
    return oneInterfaceService(std::move(name), std::move(at), pubCatV2Interface(),
                               pubCatV2Behavior(std::move(data)));
}

ServiceSpec citIndService(std::string name, Location at, std::shared_ptr<const Dataset> data) {
    return oneInterfaceService(std::move(name), std::move(at), citIndInterface(),
                               citIndBehavior(std::move(data)));
}

} // namespace emi::demo
