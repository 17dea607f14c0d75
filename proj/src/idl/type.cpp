#include "emi/idl/type.hpp"

#include "emi/idl/errors.hpp"

#include <algorithm>
#include <set>

namespace emi::idl {

std::string_view primName(Prim p) {
    switch (p) {
    case Prim::String: return "string";
    case Prim::Int: return "int";
    case Prim::Bool: return "bool";
    case Prim::Double: return "double";
    case Prim::Void: return "void";
    }
    return "?";
}

struct ValueType::Node {
    Kind kind = Kind::Primitive;
    Prim prim = Prim::Void;
    std::vector<Field> fields;
    std::vector<ValueType> alternatives;
};

const std::shared_ptr<const ValueType::Node>& ValueType::primNode(Prim p) {
    static const auto make = [](Prim q) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Primitive;
        n->prim = q;
        return std::shared_ptr<const Node>(n);
    };
    static const std::shared_ptr<const Node> nodes[] = {
        make(Prim::String), make(Prim::Int), make(Prim::Bool),
        make(Prim::Double), make(Prim::Void)};
    return nodes[static_cast<int>(p)];
}

ValueType::ValueType() : node_(primNode(Prim::Void)) {}

ValueType ValueType::primitive(Prim p) { return ValueType(primNode(p)); }

ValueType ValueType::record(std::vector<Field> fields) {
    std::set<std::string_view> names;
    for (const auto& f : fields) {
        if (f.name.empty())
            throw IdlError("record field name must be nonempty");
        if (!names.insert(f.name).second)
            throw IdlError("duplicate record field '" + f.name + "'");
        if (f.spec.cardinality.max && f.spec.cardinality.min > *f.spec.cardinality.max)
            throw IdlError("field '" + f.name + "' has cardinality min > max");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Record;
    n->fields = std::move(fields);
    return ValueType(std::move(n));
}

ValueType ValueType::unionOf(std::vector<ValueType> alternatives) {
    std::vector<ValueType> flat;
    for (auto& a : alternatives) {
        if (a.isUnion()) {
            for (const auto& inner : a.alternatives()) flat.push_back(inner);
        } else {
            flat.push_back(std::move(a));
        }
    }
    if (flat.size() < 2)
        throw IdlError("union needs at least two alternatives");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Union;
    n->alternatives = std::move(flat);
    return ValueType(std::move(n));
}

ValueType::Kind ValueType::kind() const { return node_->kind; }

bool ValueType::isVoid() const {
    return node_->kind == Kind::Primitive && node_->prim == Prim::Void;
}

Prim ValueType::prim() const {
    if (node_->kind != Kind::Primitive)
        throw IdlError("prim() on non-primitive type");
    return node_->prim;
}

const std::vector<ValueType::Field>& ValueType::fields() const {
    if (node_->kind != Kind::Record)
        throw IdlError("fields() on non-record type");
    return node_->fields;
}

const ValueType::Field* ValueType::findField(std::string_view name) const {
    if (node_->kind != Kind::Record)
        return nullptr;
    auto it = std::find_if(node_->fields.begin(), node_->fields.end(),
                           [&](const Field& f) { return f.name == name; });
    return it == node_->fields.end() ? nullptr : &*it;
}

const std::vector<ValueType>& ValueType::alternatives() const {
    if (node_->kind != Kind::Union)
        throw IdlError("alternatives() on non-union type");
    return node_->alternatives;
}

bool ValueType::operator==(const ValueType& other) const {
    if (node_ == other.node_)
        return true;
    if (node_->kind != other.node_->kind)
        return false;
    switch (node_->kind) {
    case Kind::Primitive:
        return node_->prim == other.node_->prim;
    case Kind::Record:
        return node_->fields == other.node_->fields;
    case Kind::Union:
        return node_->alternatives == other.node_->alternatives;
    }
    return false;
}

} // namespace emi::idl
