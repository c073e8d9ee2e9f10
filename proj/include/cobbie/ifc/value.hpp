#pragma once
// STEP attribute values: the ISO 10303-21 parameter grammar as a closed sum type.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cobbie::ifc {

using InstanceId = std::int64_t;

struct AttributeValue;
using AttributeList = std::vector<AttributeValue>;

struct NullValue {
    bool operator==(const NullValue&) const = default;
};

// '*' in a parameter list: value derivable from the schema, not stored.
struct DerivedPlaceholder {
    bool operator==(const DerivedPlaceholder&) const = default;
};

struct EnumToken {
    std::string token;  // stored without surrounding dots
    bool operator==(const EnumToken&) const = default;
};

struct Reference {
    InstanceId id = 0;
    bool operator==(const Reference&) const = default;
};

// .U. logicals; .T./.F. map to plain bool
struct LogicalUnknown {
    bool operator==(const LogicalUnknown&) const = default;
};

// e.g. IFCLABEL('x') appearing inline in a parameter list
struct TypedScalar {
    std::string type_tag;
    std::shared_ptr<AttributeValue> value;
    bool operator==(const TypedScalar& o) const;
};

struct AttributeValue {
    std::variant<NullValue, DerivedPlaceholder, std::int64_t, double, std::string,
                 EnumToken, bool, LogicalUnknown, Reference, TypedScalar, AttributeList>
        data;

    bool is_null() const { return std::holds_alternative<NullValue>(data); }
    bool is_ref() const { return std::holds_alternative<Reference>(data); }
    bool is_list() const { return std::holds_alternative<AttributeList>(data); }
    bool is_text() const { return std::holds_alternative<std::string>(data); }

    InstanceId ref_id() const { return std::get<Reference>(data).id; }
    const std::string& text() const { return std::get<std::string>(data); }
    const AttributeList& list() const { return std::get<AttributeList>(data); }

    // Numeric convenience: Int or Real (also unwraps one TypedScalar layer).
    bool as_real(double& out) const;

    bool operator==(const AttributeValue& o) const { return data == o.data; }
};

inline bool TypedScalar::operator==(const TypedScalar& o) const {
    if (type_tag != o.type_tag) return false;
    if (!value || !o.value) return value == o.value;
    return *value == *o.value;
}

inline bool AttributeValue::as_real(double& out) const {
    if (auto* i = std::get_if<std::int64_t>(&data)) {
        out = static_cast<double>(*i);
        return true;
    }
    if (auto* d = std::get_if<double>(&data)) {
        out = *d;
        return true;
    }
    if (auto* t = std::get_if<TypedScalar>(&data)) {
        if (t->value) return t->value->as_real(out);
    }
    return false;
}

}  // namespace cobbie::ifc
