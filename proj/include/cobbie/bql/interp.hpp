#pragma once
// Tree-walking interpreter internals, shared with the builtin catalogue.

#include <functional>
#include <map>
#include <vector>

#include "cobbie/bql/env.hpp"
#include "cobbie/bql/parse.hpp"

namespace cobbie::bql {

struct RuntimeFailure {
    std::string message;
};
struct BudgetExhausted {};
struct ReturnSignal {
    Value value;
};

class Interpreter {
public:
    explicit Interpreter(ExecEnvironment& env) : env_(env) {}

    ExecResult run(std::string_view code);

    // Builtin support surface.
    ExecEnvironment& env() { return env_; }
    const cobbie::ifc::EntityGraph& graph() const { return env_.graph(); }
    Value call_callable(const Value& fn, std::vector<Value> args);
    void emit(const std::string& text);
    [[noreturn]] void fail(std::string message) const { throw RuntimeFailure{std::move(message)}; }
    cobbie::ifc::InstanceId require_entity(const Value& v, const char* what) const;
    void tick();

private:
    ExecEnvironment& env_;
    std::string out_;
    bool truncated_ = false;
    std::int64_t steps_ = 0;
    int depth_ = 0;
    std::vector<std::map<std::string, Value>*> frames_;

    Value* lookup(const std::string& name);
    void bind(const std::string& name, Value v);
    Value exec_block(const Block& b);
    void exec_stmt(const Stmt& s, Value& last);
    Value eval(const Expr& e);
    Value eval_call(const Expr& e);
    Value binary(const Expr& e);
    Value call_function(const FunctionDecl& fn, std::vector<Value> args);

    friend const std::map<std::string, std::function<Value(Interpreter&, std::vector<Value>&)>>&
    builtin_table();
};

using Builtin = std::function<Value(Interpreter&, std::vector<Value>&)>;
const std::map<std::string, Builtin>& builtin_table();

}  // namespace cobbie::bql
