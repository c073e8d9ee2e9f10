#pragma once
// BQL abstract syntax tree.

#include <memory>
#include <string>
#include <vector>

namespace cobbie::bql {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
    std::vector<StmtPtr> statements;
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

struct FunctionDecl {
    std::string name;  // empty for lambdas
    std::vector<std::string> params;
    std::shared_ptr<Block> body;
    int line = 0;
};

struct Expr {
    enum class Kind {
        NullLit,
        BoolLit,
        IntLit,
        RealLit,
        StrLit,
        ListLit,
        Identifier,
        Binary,
        Unary,
        Call,
        Index,
        Lambda
    };
    Kind kind;
    int line = 0;

    bool bool_val = false;
    std::int64_t int_val = 0;
    double real_val = 0;
    std::string str_val;  // also identifier name
    std::vector<ExprPtr> items;  // list elements / call args
    ExprPtr lhs, rhs;            // binary operands; callee/index target in lhs
    BinaryOp bin_op = BinaryOp::Add;
    UnaryOp un_op = UnaryOp::Neg;
    std::shared_ptr<FunctionDecl> fn;
};

struct Stmt {
    enum class Kind { Let, Assign, ExprStmt, If, ForIn, Return, FnDecl };
    Kind kind;
    int line = 0;

    std::string name;  // let/assign/for variable
    ExprPtr expr;      // initializer / condition / iterable / return value
    std::shared_ptr<Block> body;
    std::shared_ptr<Block> else_body;
    std::shared_ptr<FunctionDecl> fn;
};

}  // namespace cobbie::bql
