#include "cobbie/bql/interp.hpp"

#include <cmath>
#include <cstdio>

namespace cobbie::bql {

bool Value::truthy() const {
    if (is_null()) return false;
    if (is_bool()) return std::get<bool>(data);
    if (is_int()) return std::get<std::int64_t>(data) != 0;
    if (is_real()) return std::get<double>(data) != 0.0;
    if (is_str()) return !std::get<std::string>(data).empty();
    if (is_list()) return !std::get<std::shared_ptr<ValueList>>(data)->empty();
    if (is_map()) return !std::get<std::shared_ptr<ValueMap>>(data)->empty();
    return true;
}

std::string type_name(const Value& v) {
    switch (v.data.index()) {
        case 0: return "null";
        case 1: return "bool";
        case 2: return "int";
        case 3: return "real";
        case 4: return "str";
        case 5: return "entity";
        case 6: return "list";
        case 7: return "map";
        default: return "fn";
    }
}

namespace {

std::string format_real(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", d);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string format_inner(const Value& v) {
    if (v.is_str()) return "\"" + std::get<std::string>(v.data) + "\"";
    return format_value(v);
}

}  // namespace

std::string format_value(const Value& v) {
    switch (v.data.index()) {
        case 0: return "null";
        case 1: return std::get<bool>(v.data) ? "true" : "false";
        case 2: return std::to_string(std::get<std::int64_t>(v.data));
        case 3: return format_real(std::get<double>(v.data));
        case 4: return std::get<std::string>(v.data);
        case 5: return "#" + std::to_string(std::get<EntityRef>(v.data).id);
        case 6: {
            std::string out = "[";
            const auto& list = *std::get<std::shared_ptr<ValueList>>(v.data);
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (i) out += ", ";
                out += format_inner(list[i]);
            }
            return out + "]";
        }
        case 7: {
            std::string out = "{";
            const auto& map = *std::get<std::shared_ptr<ValueMap>>(v.data);
            bool first = true;
            for (const auto& [k, val] : map) {
                if (!first) out += ", ";
                first = false;
                out += k + ": " + format_inner(val);
            }
            return out + "}";
        }
        default: return "<fn>";
    }
}

bool value_equals(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number()) {
        if (a.is_int() && b.is_int())
            return std::get<std::int64_t>(a.data) == std::get<std::int64_t>(b.data);
        return a.as_number() == b.as_number();
    }
    if (a.data.index() != b.data.index()) return false;
    switch (a.data.index()) {
        case 0: return true;
        case 1: return std::get<bool>(a.data) == std::get<bool>(b.data);
        case 4: return std::get<std::string>(a.data) == std::get<std::string>(b.data);
        case 5: return std::get<EntityRef>(a.data) == std::get<EntityRef>(b.data);
        case 6: {
            const auto& la = *std::get<std::shared_ptr<ValueList>>(a.data);
            const auto& lb = *std::get<std::shared_ptr<ValueList>>(b.data);
            if (la.size() != lb.size()) return false;
            for (std::size_t i = 0; i < la.size(); ++i)
                if (!value_equals(la[i], lb[i])) return false;
            return true;
        }
        case 7: {
            const auto& ma = *std::get<std::shared_ptr<ValueMap>>(a.data);
            const auto& mb = *std::get<std::shared_ptr<ValueMap>>(b.data);
            if (ma.size() != mb.size()) return false;
            for (const auto& [k, v] : ma) {
                auto it = mb.find(k);
                if (it == mb.end() || !value_equals(v, it->second)) return false;
            }
            return true;
        }
        default: return false;
    }
}

void Interpreter::tick() {
    if (steps_ >= env_.step_budget()) throw BudgetExhausted{};
    ++steps_;
}

void Interpreter::emit(const std::string& text) {
    if (truncated_) return;
    std::size_t limit = env_.output_limit();
    if (out_.size() + text.size() <= limit) {
        out_ += text;
        return;
    }
    out_.append(text, 0, limit > out_.size() ? limit - out_.size() : 0);
    out_ += kTruncationMarker;
    truncated_ = true;
}

cobbie::ifc::InstanceId Interpreter::require_entity(const Value& v, const char* what) const {
    if (v.is_entity()) {
        auto id = std::get<EntityRef>(v.data).id;
        if (!graph().has(id)) throw RuntimeFailure{"unknown entity #" + std::to_string(id)};
        return id;
    }
    if (v.is_int()) {
        auto id = std::get<std::int64_t>(v.data);
        if (!graph().has(id)) throw RuntimeFailure{"unknown entity #" + std::to_string(id)};
        return id;
    }
    throw RuntimeFailure{std::string("type mismatch: ") + what + " expects an entity, got " +
                         type_name(v)};
}

Value* Interpreter::lookup(const std::string& name) {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        auto found = (*it)->find(name);
        if (found != (*it)->end()) return &found->second;
    }
    auto found = env_.bindings().find(name);
    if (found != env_.bindings().end()) return &found->second;
    return nullptr;
}

void Interpreter::bind(const std::string& name, Value v) {
    if (!frames_.empty()) {
        (*frames_.back())[name] = std::move(v);
    } else {
        env_.bindings()[name] = std::move(v);
    }
}

Value Interpreter::exec_block(const Block& b) {
    Value last;
    for (const auto& s : b.statements) exec_stmt(*s, last);
    return last;
}

void Interpreter::exec_stmt(const Stmt& s, Value& last) {
    tick();
    switch (s.kind) {
        case Stmt::Kind::Let:
        case Stmt::Kind::Assign:
            bind(s.name, eval(*s.expr));
            last = Value::null();
            return;
        case Stmt::Kind::ExprStmt:
            last = eval(*s.expr);
            return;
        case Stmt::Kind::If:
            if (eval(*s.expr).truthy()) {
                last = exec_block(*s.body);
            } else if (s.else_body) {
                last = exec_block(*s.else_body);
            } else {
                last = Value::null();
            }
            return;
        case Stmt::Kind::ForIn: {
            Value iterable = eval(*s.expr);
            if (!iterable.is_list())
                fail("type mismatch: for-in expects a list, got " + type_name(iterable));
            // iterate over a copy; loop body may rebind the source
            ValueList items = *std::get<std::shared_ptr<ValueList>>(iterable.data);
            for (const Value& item : items) {
                tick();
                bind(s.name, item);
                exec_block(*s.body);
            }
            last = Value::null();
            return;
        }
        case Stmt::Kind::Return:
            throw ReturnSignal{s.expr ? eval(*s.expr) : Value::null()};
        case Stmt::Kind::FnDecl: {
            if (is_builtin_name(s.fn->name))
                fail("cannot redefine builtin '" + s.fn->name + "'");
            Value v;
            v.data = Closure{s.fn};
            bind(s.fn->name, std::move(v));
            last = Value::null();
            return;
        }
    }
}

Value Interpreter::binary(const Expr& e) {
    if (e.bin_op == BinaryOp::And) {
        Value lhs = eval(*e.lhs);
        return lhs.truthy() ? Value::boolean(eval(*e.rhs).truthy()) : Value::boolean(false);
    }
    if (e.bin_op == BinaryOp::Or) {
        Value lhs = eval(*e.lhs);
        return lhs.truthy() ? Value::boolean(true) : Value::boolean(eval(*e.rhs).truthy());
    }
    Value a = eval(*e.lhs);
    Value b = eval(*e.rhs);
    switch (e.bin_op) {
        case BinaryOp::Eq: return Value::boolean(value_equals(a, b));
        case BinaryOp::Ne: return Value::boolean(!value_equals(a, b));
        default: break;
    }
    if (e.bin_op == BinaryOp::Add && a.is_str() && b.is_str())
        return Value::str(std::get<std::string>(a.data) + std::get<std::string>(b.data));
    if (a.is_str() && b.is_str()) {
        const auto& sa = std::get<std::string>(a.data);
        const auto& sb = std::get<std::string>(b.data);
        switch (e.bin_op) {
            case BinaryOp::Lt: return Value::boolean(sa < sb);
            case BinaryOp::Le: return Value::boolean(sa <= sb);
            case BinaryOp::Gt: return Value::boolean(sa > sb);
            case BinaryOp::Ge: return Value::boolean(sa >= sb);
            default: fail("type mismatch: arithmetic on strings");
        }
    }
    if (!a.is_number() || !b.is_number())
        fail("type mismatch: operator expects numbers, got " + type_name(a) + " and " +
             type_name(b));
    switch (e.bin_op) {
        case BinaryOp::Lt: return Value::boolean(a.as_number() < b.as_number());
        case BinaryOp::Le: return Value::boolean(a.as_number() <= b.as_number());
        case BinaryOp::Gt: return Value::boolean(a.as_number() > b.as_number());
        case BinaryOp::Ge: return Value::boolean(a.as_number() >= b.as_number());
        default: break;
    }
    bool both_int = a.is_int() && b.is_int();
    switch (e.bin_op) {
        case BinaryOp::Add:
            return both_int ? Value::integer(std::get<std::int64_t>(a.data) +
                                             std::get<std::int64_t>(b.data))
                            : Value::real(a.as_number() + b.as_number());
        case BinaryOp::Sub:
            return both_int ? Value::integer(std::get<std::int64_t>(a.data) -
                                             std::get<std::int64_t>(b.data))
                            : Value::real(a.as_number() - b.as_number());
        case BinaryOp::Mul:
            return both_int ? Value::integer(std::get<std::int64_t>(a.data) *
                                             std::get<std::int64_t>(b.data))
                            : Value::real(a.as_number() * b.as_number());
        case BinaryOp::Div: {
            if (b.as_number() == 0.0) fail("division by zero");
            if (both_int) {
                std::int64_t x = std::get<std::int64_t>(a.data);
                std::int64_t y = std::get<std::int64_t>(b.data);
                if (x % y == 0) return Value::integer(x / y);
            }
            return Value::real(a.as_number() / b.as_number());
        }
        case BinaryOp::Mod: {
            if (!both_int) fail("type mismatch: '%' expects integers");
            std::int64_t y = std::get<std::int64_t>(b.data);
            if (y == 0) fail("division by zero");
            return Value::integer(std::get<std::int64_t>(a.data) % y);
        }
        default: fail("internal: unhandled operator");
    }
}

Value Interpreter::call_function(const FunctionDecl& fn, std::vector<Value> args) {
    if (args.size() != fn.params.size())
        fail("arity mismatch: " + (fn.name.empty() ? std::string("fn") : fn.name) + " expects " +
             std::to_string(fn.params.size()) + " argument(s), got " +
             std::to_string(args.size()));
    if (depth_ >= kMaxCallDepth) fail("recursion depth limit exceeded");
    std::map<std::string, Value> locals;
    for (std::size_t i = 0; i < args.size(); ++i) locals[fn.params[i]] = std::move(args[i]);
    frames_.push_back(&locals);
    ++depth_;
    Value result;
    try {
        result = exec_block(*fn.body);
    } catch (ReturnSignal& r) {
        result = std::move(r.value);
    } catch (...) {
        --depth_;
        frames_.pop_back();
        throw;
    }
    --depth_;
    frames_.pop_back();
    return result;
}

Value Interpreter::call_callable(const Value& fn, std::vector<Value> args) {
    if (!fn.is_fn()) fail("type mismatch: expected a function, got " + type_name(fn));
    return call_function(*std::get<Closure>(fn.data).decl, std::move(args));
}

Value Interpreter::eval_call(const Expr& e) {
    std::vector<Value> args;
    args.reserve(e.items.size());

    if (e.lhs->kind == Expr::Kind::Identifier) {
        const std::string& name = e.lhs->str_val;
        if (Value* bound = lookup(name)) {
            Value callee = *bound;
            for (const auto& a : e.items) args.push_back(eval(*a));
            return call_callable(callee, std::move(args));
        }
        auto tool = env_.tools().find(name);
        if (tool != env_.tools().end()) {
            for (const auto& a : e.items) args.push_back(eval(*a));
            return call_function(*tool->second, std::move(args));
        }
        const auto& builtins = builtin_table();
        auto b = builtins.find(name);
        if (b != builtins.end()) {
            for (const auto& a : e.items) args.push_back(eval(*a));
            return b->second(*this, args);
        }
        fail("unknown builtin: " + name);
    }
    Value callee = eval(*e.lhs);
    for (const auto& a : e.items) args.push_back(eval(*a));
    return call_callable(callee, std::move(args));
}

Value Interpreter::eval(const Expr& e) {
    tick();
    switch (e.kind) {
        case Expr::Kind::NullLit: return Value::null();
        case Expr::Kind::BoolLit: return Value::boolean(e.bool_val);
        case Expr::Kind::IntLit: return Value::integer(e.int_val);
        case Expr::Kind::RealLit: return Value::real(e.real_val);
        case Expr::Kind::StrLit: return Value::str(e.str_val);
        case Expr::Kind::ListLit: {
            ValueList items;
            items.reserve(e.items.size());
            for (const auto& it : e.items) items.push_back(eval(*it));
            return Value::list(std::move(items));
        }
        case Expr::Kind::Identifier: {
            if (Value* v = lookup(e.str_val)) return *v;
            auto tool = env_.tools().find(e.str_val);
            if (tool != env_.tools().end()) {
                Value v;
                v.data = Closure{tool->second};
                return v;
            }
            fail("unknown identifier: " + e.str_val);
        }
        case Expr::Kind::Binary: return binary(e);
        case Expr::Kind::Unary: {
            Value v = eval(*e.lhs);
            if (e.un_op == UnaryOp::Not) return Value::boolean(!v.truthy());
            if (v.is_int()) return Value::integer(-std::get<std::int64_t>(v.data));
            if (v.is_real()) return Value::real(-std::get<double>(v.data));
            fail("type mismatch: unary '-' expects a number, got " + type_name(v));
        }
        case Expr::Kind::Call: return eval_call(e);
        case Expr::Kind::Index: {
            Value target = eval(*e.lhs);
            Value key = eval(*e.rhs);
            if (target.is_list()) {
                if (!key.is_int()) fail("type mismatch: list index must be an integer");
                const auto& list = *std::get<std::shared_ptr<ValueList>>(target.data);
                std::int64_t idx = std::get<std::int64_t>(key.data);
                if (idx < 0 || idx >= static_cast<std::int64_t>(list.size()))
                    fail("index out of range: " + std::to_string(idx));
                return list[static_cast<std::size_t>(idx)];
            }
            if (target.is_map()) {
                if (!key.is_str()) fail("type mismatch: map key must be a string");
                const auto& map = *std::get<std::shared_ptr<ValueMap>>(target.data);
                auto it = map.find(std::get<std::string>(key.data));
                return it == map.end() ? Value::null() : it->second;
            }
            fail("type mismatch: cannot index a " + type_name(target));
        }
        case Expr::Kind::Lambda: {
            Value v;
            v.data = Closure{e.fn};
            return v;
        }
    }
    fail("internal: unhandled expression");
}

ExecResult Interpreter::run(std::string_view code) {
    out_.clear();
    truncated_ = false;
    steps_ = 0;
    depth_ = 0;
    frames_.clear();

    ExecResult result;
    try {
        Block program = parse_program(code);
        exec_block(program);
    } catch (const SyntaxError& e) {
        result.error = "parse error (line " + std::to_string(e.line) + "): " + e.message;
    } catch (const RuntimeFailure& e) {
        result.error = e.message;
    } catch (const BudgetExhausted&) {
        result.error = "step budget exceeded";
    } catch (const ReturnSignal&) {
        // top-level return: treated as normal completion
    }
    result.printed = std::move(out_);
    result.steps_used = steps_;
    return result;
}

ExecResult ExecEnvironment::execute(std::string_view code) {
    Interpreter interp(*this);
    return interp.run(code);
}

std::optional<ToolLoadError> ExecEnvironment::install_tool(std::string_view name,
                                                           std::string_view source) {
    std::shared_ptr<FunctionDecl> fn;
    try {
        fn = parse_function(source);
    } catch (const SyntaxError& e) {
        return ToolLoadError{e.message, e.line};
    }
    if (!name.empty() && fn->name != name)
        return ToolLoadError{"tool name '" + std::string(name) + "' does not match function '" +
                                 fn->name + "'",
                             fn->line};
    if (is_builtin_name(fn->name))
        return ToolLoadError{"tool name collides with builtin '" + fn->name + "'", fn->line};
    tools_[fn->name] = fn;
    tool_sources_[fn->name] = std::string(source);
    return std::nullopt;
}

bool is_builtin_name(const std::string& name) { return builtin_table().count(name) > 0; }

}  // namespace cobbie::bql
