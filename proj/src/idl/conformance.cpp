#include "emi/idl/conformance.hpp"

#include <string>

namespace emi::idl {

namespace {

// Primitive admission. Integers are accepted where a double is expected
// because JSON transport cannot preserve the distinction for whole numbers.
bool admitsPrimitive(Prim expected, const Value& v) {
    switch (expected) {
    case Prim::String: return v.isString();
    case Prim::Int: return v.isInt();
    case Prim::Bool: return v.isBool();
    case Prim::Double: return v.isDouble() || v.isInt();
    case Prim::Void: return v.isUnit();
    }
    return false;
}

ConformanceResult checkValue(const Value& v, const ValueType& t, const std::string& path);

// Paths name fields from the message root: "authorId", "publications[2].year".
// A violation at the root itself reports "$".
std::string joinPath(const std::string& path, const std::string& name) {
    return path.empty() ? name : path + "." + name;
}

std::string atRoot(const std::string& path) {
    return path.empty() ? "$" : path;
}

ConformanceResult checkRecord(const Value& v, const ValueType& t, const std::string& path) {
    if (!v.isRecord())
        return ConformanceResult::fail(atRoot(path),
                                       "expected record, got " + std::string(kindName(v.kind())));

    // Closed records: every present field must be declared.
    for (const auto& f : v.fields()) {
        if (!t.findField(f.name))
            return ConformanceResult::fail(joinPath(path, f.name), "undeclared field");
    }

    for (const auto& decl : t.fields()) {
        std::string fieldPath = joinPath(path, decl.name);
        const Value::Field* present = v.find(decl.name);
        std::size_t count = present ? present->items.size() : 0;
        if (!decl.spec.cardinality.admits(count)) {
            std::string want = "[" + std::to_string(decl.spec.cardinality.min) + "," +
                               (decl.spec.cardinality.max
                                    ? std::to_string(*decl.spec.cardinality.max)
                                    : std::string("*")) +
                               "]";
            return ConformanceResult::fail(fieldPath, "cardinality " + want + " violated by " +
                                                          std::to_string(count) + " item(s)");
        }
        if (!present)
            continue;
        for (std::size_t i = 0; i < present->items.size(); ++i) {
            std::string itemPath =
                count > 1 ? fieldPath + "[" + std::to_string(i) + "]" : fieldPath;
            auto r = checkValue(present->items[i], decl.spec.type, itemPath);
            if (!r.ok())
                return r;
        }
    }
    return ConformanceResult::pass();
}

ConformanceResult checkValue(const Value& v, const ValueType& t, const std::string& path) {
    switch (t.kind()) {
    case TypeKind::Primitive:
        if (t.prim() == Prim::Void) {
            // void admits unit or an empty record (the natural decoding of {}).
            if (v.isUnit() || (v.isRecord() && v.fields().empty()))
                return ConformanceResult::pass();
            return ConformanceResult::fail(atRoot(path), "expected void, got " +
                                                             std::string(kindName(v.kind())));
        }
        if (!admitsPrimitive(t.prim(), v))
            return ConformanceResult::fail(atRoot(path),
                                           "expected " + std::string(primName(t.prim())) +
                                               ", got " + std::string(kindName(v.kind())));
        return ConformanceResult::pass();
    case TypeKind::Record:
        return checkRecord(v, t, path);
    case TypeKind::Union:
        for (const auto& alt : t.alternatives()) {
            if (checkValue(v, alt, path).ok())
                return ConformanceResult::pass();
        }
        return ConformanceResult::fail(atRoot(path), "value matches no union alternative");
    }
    return ConformanceResult::fail(atRoot(path), "unknown type kind");
}

} // namespace

ConformanceResult conforms(const Value& value, const ValueType& type) {
    return checkValue(value, type, "");
}

} // namespace emi::idl
