#include "cobbie/bql/env.hpp"

namespace cobbie::bql {

// Mirrors docs/bql_grammar.ebnf; a test keeps the two in sync.
const std::string& grammar_text() {
    static const std::string text = R"ebnf((* BQL: the query language accepted by the sandboxed execution environment. *)

program        = { statement } ;
statement      = let_stmt | assign_stmt | fn_decl | if_stmt | for_stmt
               | return_stmt | expr_stmt ;
let_stmt       = "let" , identifier , "=" , expression , [ ";" ] ;
assign_stmt    = identifier , "=" , expression , [ ";" ] ;
fn_decl        = "fn" , identifier , "(" , [ params ] , ")" , block ;
if_stmt        = "if" , "(" , expression , ")" , block ,
                 [ "else" , ( if_stmt | block ) ] ;
for_stmt       = "for" , identifier , "in" , expression , block ;
return_stmt    = "return" , [ expression ] , [ ";" ] ;
expr_stmt      = expression , [ ";" ] ;
block          = "{" , { statement } , "}" ;
params         = identifier , { "," , identifier } ;

expression     = or_expr ;
or_expr        = and_expr , { "||" , and_expr } ;
and_expr       = equality , { "&&" , equality } ;
equality       = comparison , { ( "==" | "!=" ) , comparison } ;
comparison     = additive , { ( "<" | "<=" | ">" | ">=" ) , additive } ;
additive       = multiplicative , { ( "+" | "-" ) , multiplicative } ;
multiplicative = unary , { ( "*" | "/" | "%" ) , unary } ;
unary          = ( "-" | "!" ) , unary | postfix ;
postfix        = primary , { call_suffix | index_suffix } ;
call_suffix    = "(" , [ expression , { "," , expression } ] , ")" ;
index_suffix   = "[" , expression , "]" ;
primary        = integer | real | string | "true" | "false" | "null"
               | lambda | identifier | "(" , expression , ")" | list_lit ;
lambda         = "fn" , "(" , [ params ] , ")" , block ;
list_lit       = "[" , [ expression , { "," , expression } ] , "]" ;

(* The value of a block used as a lambda body is its last expression
   statement, so `fn(x){ x > 1 }` is a predicate. Statements may be
   separated by newlines; semicolons are optional. Comments start with
   `//` and run to end of line. Strings use single or double quotes. *)
)ebnf";
    return text;
}

}  // namespace cobbie::bql
