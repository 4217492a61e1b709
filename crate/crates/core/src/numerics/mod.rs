//! Exact rationals, outward-rounded intervals and the functions built on them.

pub mod dyadic;
pub mod elementary;
pub mod expr;
pub mod interval;
pub mod logcomb;
pub mod rational;
pub mod special;

pub use dyadic::{Dyadic, Round};
pub use expr::{eval, eval_interval, sign_adaptive, sign_adaptive_with_bits, Expr, Value};
pub use interval::Interval;
pub use logcomb::{sign_by_integer_products, sign_of_log_combination, LogCombination, LogValue};
pub use rational::{format_rational, int, parse_rational, rat, Rational, Sign};
