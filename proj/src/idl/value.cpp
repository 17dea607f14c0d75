#include "emi/idl/value.hpp"

#include "emi/idl/errors.hpp"

#include <algorithm>

namespace emi::idl {

Value::Field::Field(std::string name, Value item) : name(std::move(name)) {
    items.push_back(std::move(item));
}

Value::Kind Value::kind() const {
    return static_cast<Kind>(repr_.index());
}

const Value::Fields& Value::fields() const {
    if (!isRecord())
        throw IdlError("fields() on non-record value");
    return std::get<Fields>(repr_);
}

Value::Fields& Value::fields() {
    if (!isRecord())
        throw IdlError("fields() on non-record value");
    return std::get<Fields>(repr_);
}

const Value::Field* Value::find(std::string_view name) const {
    if (!isRecord())
        return nullptr;
    const auto& fs = std::get<Fields>(repr_);
    auto it = std::find_if(fs.begin(), fs.end(),
                           [&](const Field& f) { return f.name == name; });
    return it == fs.end() ? nullptr : &*it;
}

const Value* Value::single(std::string_view name) const {
    const Field* f = find(name);
    return (f && !f->items.empty()) ? &f->items.front() : nullptr;
}

Value& Value::set(std::string name, Value v) {
    auto& fs = fields();
    auto it = std::find_if(fs.begin(), fs.end(),
                           [&](const Field& f) { return f.name == name; });
    if (it != fs.end()) {
        it->items.clear();
        it->items.push_back(std::move(v));
    } else {
        fs.emplace_back(std::move(name), std::move(v));
    }
    return *this;
}

Value& Value::add(std::string name, Value v) {
    auto& fs = fields();
    auto it = std::find_if(fs.begin(), fs.end(),
                           [&](const Field& f) { return f.name == name; });
    if (it != fs.end()) {
        it->items.push_back(std::move(v));
    } else {
        fs.emplace_back(std::move(name), std::move(v));
    }
    return *this;
}

Value Value::without(std::string_view name) const {
    if (!isRecord())
        return *this;
    Fields kept;
    for (const auto& f : std::get<Fields>(repr_)) {
        if (f.name != name)
            kept.push_back(f);
    }
    return Value::record(std::move(kept));
}

bool Value::operator==(const Value& other) const {
    if (repr_.index() != other.repr_.index())
        return false;
    if (!isRecord())
        return repr_ == other.repr_;

    const auto& a = std::get<Fields>(repr_);
    const auto& b = std::get<Fields>(other.repr_);
    if (a.size() != b.size())
        return false;
    for (const auto& f : a) {
        const Field* g = other.find(f.name);
        if (!g || f.items.size() != g->items.size())
            return false;
        if (!std::equal(f.items.begin(), f.items.end(), g->items.begin()))
            return false;
    }
    return true;
}

Value mergeFields(const Value& base, const Value& extra) {
    if (!base.isRecord() || !extra.isRecord())
        throw IdlError("mergeFields expects record values");
    Value out = base;
    for (const auto& f : extra.fields()) {
        auto& fs = out.fields();
        auto it = std::find_if(fs.begin(), fs.end(),
                               [&](const Value::Field& g) { return g.name == f.name; });
        if (it != fs.end())
            it->items = f.items;
        else
            fs.push_back(f);
    }
    return out;
}

std::string_view kindName(Value::Kind k) {
    switch (k) {
    case Value::Kind::Unit: return "void";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Int: return "int";
    case Value::Kind::Double: return "double";
    case Value::Kind::String: return "string";
    case Value::Kind::Record: return "record";
    }
    return "?";
}

} // namespace emi::idl
