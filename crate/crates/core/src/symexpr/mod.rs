//! Symbolic expressions: the parsed tree, sparse polynomials and canonical
//! rational functions.

mod expr;
mod poly;
mod ratfun;
mod var;

pub use expr::{
    make_power, make_product, make_sum, parse_expr, parse_gq, parse_ratfun, poly_to_expr,
    ratfun_to_expr, render, Bindings, Expr, Func, Sym,
};
pub use poly::{gcd, Mono, Poly};
pub use ratfun::RatFun;
pub use var::Var;
