#include "emi/idl/json.hpp"

#include "emi/idl/conformance.hpp"
#include "emi/idl/errors.hpp"

#include <nlohmann/json.hpp>

namespace emi::idl {

namespace {

using nlohmann::json;

json primToJson(const Value& v) {
    if (v.isUnit())
        return json::object();
    if (v.isBool())
        return v.asBool();
    if (v.isInt())
        return v.asInt();
    if (v.isDouble())
        return v.asDouble();
    if (v.isString())
        return v.asString();
    throw IdlError("cannot encode record value against primitive type");
}

json typedToJson(const Value& v, const ValueType& t);

json typedRecordToJson(const Value& v, const ValueType& t) {
    json out = json::object();
    for (const auto& decl : t.fields()) {
        const Value::Field* f = v.find(decl.name);
        if (!f || f->items.empty())
            continue;
        bool wantArray = decl.spec.cardinality.admits(2) ||
                         (decl.spec.cardinality.max && *decl.spec.cardinality.max > 1);
        if (wantArray) {
            json arr = json::array();
            for (const auto& item : f->items)
                arr.push_back(typedToJson(item, decl.spec.type));
            out[decl.name] = std::move(arr);
        } else {
            out[decl.name] = typedToJson(f->items.front(), decl.spec.type);
        }
    }
    return out;
}

json typedToJson(const Value& v, const ValueType& t) {
    switch (t.kind()) {
    case TypeKind::Primitive:
        return primToJson(v);
    case TypeKind::Record:
        if (!v.isRecord())
            throw IdlError("cannot encode non-record value against record type");
        return typedRecordToJson(v, t);
    case TypeKind::Union:
        for (const auto& alt : t.alternatives()) {
            if (conforms(v, alt).ok())
                return typedToJson(v, alt);
        }
        throw IdlError("value matches no union alternative during encoding");
    }
    throw IdlError("unknown type kind during encoding");
}

json untypedToJson(const Value& v) {
    if (!v.isRecord())
        return primToJson(v);
    json out = json::object();
    for (const auto& f : v.fields()) {
        if (f.items.empty())
            continue;
        if (f.items.size() == 1) {
            out[f.name] = untypedToJson(f.items.front());
        } else {
            json arr = json::array();
            for (const auto& item : f.items)
                arr.push_back(untypedToJson(item));
            out[f.name] = std::move(arr);
        }
    }
    return out;
}

} // namespace

json toJson(const Value& value, const ValueType& type) {
    return typedToJson(value, type);
}

json toJson(const Value& value) {
    return untypedToJson(value);
}

Value valueFromJson(const json& j) {
    switch (j.type()) {
    case json::value_t::null:
        return Value::unit();
    case json::value_t::boolean:
        return Value::boolean(j.get<bool>());
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
        return Value::integer(j.get<std::int64_t>());
    case json::value_t::number_float:
        return Value::number(j.get<double>());
    case json::value_t::string:
        return Value::string(j.get<std::string>());
    case json::value_t::array:
        throw IdlError("top-level JSON arrays have no value form");
    case json::value_t::object: {
        Value::Fields fields;
        for (const auto& [key, sub] : j.items()) {
            std::vector<Value> items;
            if (sub.is_array()) {
                for (const auto& item : sub)
                    items.push_back(valueFromJson(item));
            } else {
                items.push_back(valueFromJson(sub));
            }
            fields.emplace_back(key, std::move(items));
        }
        return Value::record(std::move(fields));
    }
    default:
        throw IdlError("unsupported JSON value");
    }
}

std::string canonicalJson(const json& j) {
    // nlohmann::json objects iterate in key order already; dump with no
    // indentation gives a stable byte form.
    return j.dump();
}

std::string canonicalJson(const Value& value, const ValueType& type) {
    return canonicalJson(toJson(value, type));
}

} // namespace emi::idl
