#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emi::idl {

enum class Prim { String, Int, Bool, Double, Void };

std::string_view primName(Prim p);

/// Field multiplicity. Default is exactly-one; `*` is 0..unbounded, `?` is 0..1.
struct Cardinality {
    std::uint32_t min = 1;
    std::optional<std::uint32_t> max = 1; // nullopt = unbounded

    static Cardinality one() { return {1, 1}; }
    static Cardinality opt() { return {0, 1}; }
    static Cardinality many() { return {0, std::nullopt}; }

    bool unbounded() const { return !max.has_value(); }
    bool admits(std::size_t n) const {
        return n >= min && (unbounded() || n <= *max);
    }
    bool operator==(const Cardinality&) const = default;
};

/// Structural message type: a primitive, a record of named fields, or a
/// union of alternatives. Immutable; copies share the underlying node.
class ValueType {
public:
    enum class Kind { Primitive, Record, Union };

    struct FieldSpec; // {type, cardinality}
    struct Field;     // {name, spec}

    ValueType(); // void

    static ValueType primitive(Prim p);
    static ValueType record(std::vector<Field> fields);
    static ValueType unionOf(std::vector<ValueType> alternatives);

    Kind kind() const;
    bool isPrimitive() const { return kind() == Kind::Primitive; }
    bool isRecord() const { return kind() == Kind::Record; }
    bool isUnion() const { return kind() == Kind::Union; }
    bool isVoid() const;

    Prim prim() const;                          // Primitive only
    const std::vector<Field>& fields() const;   // Record only
    const Field* findField(std::string_view name) const;
    const std::vector<ValueType>& alternatives() const; // Union only

    bool operator==(const ValueType& other) const; // structural

private:
    struct Node;
    explicit ValueType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static const std::shared_ptr<const Node>& primNode(Prim p);
    std::shared_ptr<const Node> node_;
};

struct ValueType::FieldSpec {
    ValueType type;
    Cardinality cardinality = Cardinality::one();
    bool operator==(const FieldSpec&) const = default;
};

struct ValueType::Field {
    std::string name;
    FieldSpec spec;

    Field(std::string name, FieldSpec spec) : name(std::move(name)), spec(std::move(spec)) {}
    Field(std::string name, ValueType type, Cardinality card = Cardinality::one())
        : name(std::move(name)), spec{std::move(type), card} {}
    Field(std::string name, Prim p, Cardinality card = Cardinality::one())
        : name(std::move(name)), spec{ValueType::primitive(p), card} {}
    bool operator==(const Field&) const = default;
};

using RecordFields = std::vector<ValueType::Field>;
using TypeKind = ValueType::Kind;

} // namespace emi::idl
