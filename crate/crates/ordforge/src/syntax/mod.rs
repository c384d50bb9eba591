//! Languages of IKP, IKP(P), IKP(E) and their infinitary systems.

pub mod ast;
pub mod classify;
pub mod parse;
pub mod print;
pub mod rank;

pub use ast::{eq_expand, fun_expand, sub_expand, Bound, Comp, Formula, Hint, Quant, Sequent, Term, Theory};
pub use classify::{classify, relativize, Class};
pub use parse::{parse_formula, parse_term, ParseError};
pub use print::{pretty_formula, pretty_sequent, print_formula, print_sequent, print_term};
pub use rank::{
    k_of, k_of_sequent, level, mbound, norm_no, norm_no_sequent, rank, rank_irs, rank_irse, rank_irsp, RankError,
    System,
};
