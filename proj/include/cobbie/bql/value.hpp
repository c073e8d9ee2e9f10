#pragma once
// Runtime values of the BQL action language.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cobbie/ifc/value.hpp"

namespace cobbie::bql {

struct Value;
using ValueList = std::vector<Value>;
using ValueMap = std::map<std::string, Value>;

struct EntityRef {
    cobbie::ifc::InstanceId id = 0;
    bool operator==(const EntityRef&) const = default;
};

struct FunctionDecl;  // AST node, defined in ast.hpp

struct Closure {
    std::shared_ptr<const FunctionDecl> decl;
};

struct Value {
    std::variant<std::monostate, bool, std::int64_t, double, std::string, EntityRef,
                 std::shared_ptr<ValueList>, std::shared_ptr<ValueMap>, Closure>
        data;

    Value() = default;
    static Value null() { return Value{}; }
    static Value boolean(bool b) { return make(b); }
    static Value integer(std::int64_t i) { return make(i); }
    static Value real(double d) { return make(d); }
    static Value str(std::string s) { return make(std::move(s)); }
    static Value entity(cobbie::ifc::InstanceId id) { return make(EntityRef{id}); }
    static Value list(ValueList v) { return make(std::make_shared<ValueList>(std::move(v))); }
    static Value map(ValueMap m) { return make(std::make_shared<ValueMap>(std::move(m))); }

    bool is_null() const { return std::holds_alternative<std::monostate>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_real() const { return std::holds_alternative<double>(data); }
    bool is_str() const { return std::holds_alternative<std::string>(data); }
    bool is_entity() const { return std::holds_alternative<EntityRef>(data); }
    bool is_list() const { return std::holds_alternative<std::shared_ptr<ValueList>>(data); }
    bool is_map() const { return std::holds_alternative<std::shared_ptr<ValueMap>>(data); }
    bool is_fn() const { return std::holds_alternative<Closure>(data); }
    bool is_number() const { return is_int() || is_real(); }

    double as_number() const {
        return is_int() ? static_cast<double>(std::get<std::int64_t>(data))
                        : std::get<double>(data);
    }
    bool truthy() const;

private:
    template <typename T>
    static Value make(T&& v) {
        Value out;
        out.data = std::forward<T>(v);
        return out;
    }
};

// Reals rendered with up to 6 fractional digits, trailing zeros trimmed.
std::string format_value(const Value& v);
std::string type_name(const Value& v);

bool value_equals(const Value& a, const Value& b);

}  // namespace cobbie::bql
