#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace emi::idl {

/// Runtime message datum: a primitive or a record mapping field names to
/// item lists (lists realize cardinalities). Field order is preserved.
class Value {
public:
    enum class Kind { Unit, Bool, Int, Double, String, Record };

    struct Field {
        std::string name;
        std::vector<Value> items;

        Field(std::string name, Value item);
        Field(std::string name, std::vector<Value> items)
            : name(std::move(name)), items(std::move(items)) {}
        bool operator==(const Field&) const = default;
    };
    using Fields = std::vector<Field>;

    Value() : repr_(Unit{}) {}

    static Value unit() { return Value(); }
    static Value boolean(bool b) { return Value(Repr(b)); }
    static Value integer(std::int64_t i) { return Value(Repr(i)); }
    static Value number(double d) { return Value(Repr(d)); }
    static Value string(std::string s) { return Value(Repr(std::move(s))); }
    static Value record(Fields fields = {}) { return Value(Repr(std::move(fields))); }

    Kind kind() const;
    bool isUnit() const { return kind() == Kind::Unit; }
    bool isBool() const { return kind() == Kind::Bool; }
    bool isInt() const { return kind() == Kind::Int; }
    bool isDouble() const { return kind() == Kind::Double; }
    bool isString() const { return kind() == Kind::String; }
    bool isRecord() const { return kind() == Kind::Record; }

    bool asBool() const { return std::get<bool>(repr_); }
    std::int64_t asInt() const { return std::get<std::int64_t>(repr_); }
    double asDouble() const { return std::get<double>(repr_); }
    const std::string& asString() const { return std::get<std::string>(repr_); }

    const Fields& fields() const;
    Fields& fields();

    const Field* find(std::string_view name) const;
    bool has(std::string_view name) const { return find(name) != nullptr; }

    /// First item of the named field, or nullptr when absent/empty.
    const Value* single(std::string_view name) const;

    /// Replace-or-append a single-item field. Record values only.
    Value& set(std::string name, Value v);
    /// Append one item to the named field, creating it if needed.
    Value& add(std::string name, Value v);

    /// Copy with the named top-level field removed (no-op when absent).
    Value without(std::string_view name) const;

    /// Structural equality; record field order is irrelevant, item order matters.
    bool operator==(const Value& other) const;

private:
    struct Unit {
        bool operator==(const Unit&) const = default;
    };
    using Repr = std::variant<Unit, bool, std::int64_t, double, std::string, Fields>;
    explicit Value(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

/// Append `extra`'s top-level fields to record `base`. Fields already present
/// in `base` keep their position and are overwritten by the incoming items.
Value mergeFields(const Value& base, const Value& extra);

std::string_view kindName(Value::Kind k);

} // namespace emi::idl
