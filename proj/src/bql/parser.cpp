#include "cobbie/bql/parse.hpp"

namespace cobbie::bql {

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Block program() {
        Block b = block_body("");
        expect_end();
        return b;
    }

    std::shared_ptr<FunctionDecl> single_function() {
        if (!is_ident("fn")) throw SyntaxError{cur().line, "expected 'fn'"};
        StmtPtr s = statement();
        expect_end();
        if (s->kind != Stmt::Kind::FnDecl || s->fn->name.empty())
            throw SyntaxError{s->line, "expected a named function definition"};
        return s->fn;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool at_end() const { return cur().kind == Token::Kind::End; }

    bool is_punct(const char* p) const {
        return cur().kind == Token::Kind::Punct && cur().text == p;
    }
    bool is_ident(const char* name) const {
        return cur().kind == Token::Kind::Ident && cur().text == name;
    }
    bool eat_punct(const char* p) {
        if (!is_punct(p)) return false;
        advance();
        return true;
    }
    void expect_punct(const char* p, const char* what) {
        if (!eat_punct(p)) throw SyntaxError{cur().line, std::string("expected '") + p + "' " + what};
    }
    void expect_end() {
        if (!at_end()) throw SyntaxError{cur().line, "unexpected '" + cur().text + "'"};
    }

    Block block_body(const char* terminator) {
        Block b;
        for (;;) {
            while (eat_punct(";")) {}
            if (at_end()) break;
            if (terminator[0] && is_punct(terminator)) break;
            b.statements.push_back(statement());
        }
        return b;
    }

    std::shared_ptr<Block> braced_block() {
        expect_punct("{", "to open block");
        Block b = block_body("}");
        expect_punct("}", "to close block");
        return std::make_shared<Block>(std::move(b));
    }

    StmtPtr statement() {
        int line = cur().line;
        auto mk = [&](Stmt::Kind k) {
            auto s = std::make_unique<Stmt>();
            s->kind = k;
            s->line = line;
            return s;
        };
        if (is_ident("let")) {
            advance();
            if (cur().kind != Token::Kind::Ident)
                throw SyntaxError{cur().line, "expected identifier after 'let'"};
            auto s = mk(Stmt::Kind::Let);
            s->name = advance().text;
            expect_punct("=", "in let statement");
            s->expr = expression();
            eat_punct(";");
            return s;
        }
        if (is_ident("fn")) {
            advance();
            auto s = mk(Stmt::Kind::FnDecl);
            s->fn = function_rest(/*named=*/true, line);
            return s;
        }
        if (is_ident("if")) return if_statement();
        if (is_ident("for")) {
            advance();
            if (cur().kind != Token::Kind::Ident)
                throw SyntaxError{cur().line, "expected loop variable after 'for'"};
            auto s = mk(Stmt::Kind::ForIn);
            s->name = advance().text;
            if (!is_ident("in")) throw SyntaxError{cur().line, "expected 'in'"};
            advance();
            s->expr = expression();
            s->body = braced_block();
            return s;
        }
        if (is_ident("return")) {
            advance();
            auto s = mk(Stmt::Kind::Return);
            if (!is_punct(";") && !is_punct("}") && !at_end()) s->expr = expression();
            eat_punct(";");
            return s;
        }
        // assignment or expression statement
        if (cur().kind == Token::Kind::Ident && pos_ + 1 < toks_.size() &&
            toks_[pos_ + 1].kind == Token::Kind::Punct && toks_[pos_ + 1].text == "=") {
            auto s = mk(Stmt::Kind::Assign);
            s->name = advance().text;
            advance();  // '='
            s->expr = expression();
            eat_punct(";");
            return s;
        }
        auto s = mk(Stmt::Kind::ExprStmt);
        s->expr = expression();
        eat_punct(";");
        return s;
    }

    StmtPtr if_statement() {
        int line = cur().line;
        advance();  // 'if'
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::If;
        s->line = line;
        expect_punct("(", "after 'if'");
        s->expr = expression();
        expect_punct(")", "after condition");
        s->body = braced_block();
        if (is_ident("else")) {
            advance();
            if (is_ident("if")) {
                auto nested = std::make_shared<Block>();
                nested->statements.push_back(if_statement());
                s->else_body = std::move(nested);
            } else {
                s->else_body = braced_block();
            }
        }
        return s;
    }

    std::shared_ptr<FunctionDecl> function_rest(bool named, int line) {
        auto fn = std::make_shared<FunctionDecl>();
        fn->line = line;
        if (named) {
            if (cur().kind != Token::Kind::Ident)
                throw SyntaxError{cur().line, "expected function name"};
            fn->name = advance().text;
        }
        expect_punct("(", "in function definition");
        if (!is_punct(")")) {
            for (;;) {
                if (cur().kind != Token::Kind::Ident)
                    throw SyntaxError{cur().line, "expected parameter name"};
                fn->params.push_back(advance().text);
                if (!eat_punct(",")) break;
            }
        }
        expect_punct(")", "after parameters");
        fn->body = braced_block();
        return fn;
    }

    ExprPtr mk_expr(Expr::Kind k, int line) {
        auto e = std::make_unique<Expr>();
        e->kind = k;
        e->line = line;
        return e;
    }

    ExprPtr expression() { return or_expr(); }

    ExprPtr binary_chain(ExprPtr (Parser::*next)(),
                         std::initializer_list<std::pair<const char*, BinaryOp>> ops) {
        ExprPtr lhs = (this->*next)();
        for (;;) {
            bool matched = false;
            for (const auto& [text, op] : ops) {
                if (is_punct(text)) {
                    int line = advance().line;
                    auto e = mk_expr(Expr::Kind::Binary, line);
                    e->bin_op = op;
                    e->lhs = std::move(lhs);
                    e->rhs = (this->*next)();
                    lhs = std::move(e);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr or_expr() { return binary_chain(&Parser::and_expr, {{"||", BinaryOp::Or}}); }
    ExprPtr and_expr() { return binary_chain(&Parser::equality, {{"&&", BinaryOp::And}}); }
    ExprPtr equality() {
        return binary_chain(&Parser::comparison, {{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}});
    }
    ExprPtr comparison() {
        return binary_chain(&Parser::additive, {{"<=", BinaryOp::Le},
                                                {">=", BinaryOp::Ge},
                                                {"<", BinaryOp::Lt},
                                                {">", BinaryOp::Gt}});
    }
    ExprPtr additive() {
        return binary_chain(&Parser::multiplicative, {{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}});
    }
    ExprPtr multiplicative() {
        return binary_chain(&Parser::unary, {{"*", BinaryOp::Mul},
                                             {"/", BinaryOp::Div},
                                             {"%", BinaryOp::Mod}});
    }

    ExprPtr unary() {
        if (is_punct("-") || is_punct("!")) {
            const Token& t = advance();
            auto e = mk_expr(Expr::Kind::Unary, t.line);
            e->un_op = t.text == "-" ? UnaryOp::Neg : UnaryOp::Not;
            e->lhs = unary();
            return e;
        }
        return postfix();
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        for (;;) {
            if (is_punct("(")) {
                int line = advance().line;
                auto call = mk_expr(Expr::Kind::Call, line);
                call->lhs = std::move(e);
                if (!is_punct(")")) {
                    for (;;) {
                        call->items.push_back(expression());
                        if (!eat_punct(",")) break;
                    }
                }
                expect_punct(")", "after arguments");
                e = std::move(call);
            } else if (is_punct("[")) {
                int line = advance().line;
                auto idx = mk_expr(Expr::Kind::Index, line);
                idx->lhs = std::move(e);
                idx->rhs = expression();
                expect_punct("]", "after index");
                e = std::move(idx);
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const Token& t = cur();
        switch (t.kind) {
            case Token::Kind::Int: {
                auto e = mk_expr(Expr::Kind::IntLit, t.line);
                e->int_val = advance().int_val;
                return e;
            }
            case Token::Kind::Real: {
                auto e = mk_expr(Expr::Kind::RealLit, t.line);
                e->real_val = advance().real_val;
                return e;
            }
            case Token::Kind::Str: {
                auto e = mk_expr(Expr::Kind::StrLit, t.line);
                e->str_val = advance().text;
                return e;
            }
            case Token::Kind::Ident: {
                if (t.text == "true" || t.text == "false") {
                    auto e = mk_expr(Expr::Kind::BoolLit, t.line);
                    e->bool_val = advance().text == "true";
                    return e;
                }
                if (t.text == "null") {
                    advance();
                    return mk_expr(Expr::Kind::NullLit, t.line);
                }
                if (t.text == "fn") {
                    int line = advance().line;
                    auto e = mk_expr(Expr::Kind::Lambda, line);
                    e->fn = function_rest(/*named=*/false, line);
                    return e;
                }
                auto e = mk_expr(Expr::Kind::Identifier, t.line);
                e->str_val = advance().text;
                return e;
            }
            case Token::Kind::Punct:
                if (t.text == "(") {
                    advance();
                    ExprPtr inner = expression();
                    expect_punct(")", "after expression");
                    return inner;
                }
                if (t.text == "[") {
                    int line = advance().line;
                    auto e = mk_expr(Expr::Kind::ListLit, line);
                    if (!is_punct("]")) {
                        for (;;) {
                            e->items.push_back(expression());
                            if (!eat_punct(",")) break;
                        }
                    }
                    expect_punct("]", "after list literal");
                    return e;
                }
                break;
            case Token::Kind::End:
                break;
        }
        throw SyntaxError{t.line, "unexpected '" + (t.kind == Token::Kind::End ? "end of input"
                                                                               : t.text) + "'"};
    }
};

}  // namespace

Block parse_program(std::string_view source) { return Parser(lex(source)).program(); }

std::shared_ptr<FunctionDecl> parse_function(std::string_view source) {
    return Parser(lex(source)).single_function();
}

}  // namespace cobbie::bql
