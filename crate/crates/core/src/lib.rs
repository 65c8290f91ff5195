//! Exact computations around Lie polynomials and polynomial identities of
//! small matrix algebras.
//!
//! * [`freelie`]: free Lie / free associative algebra arithmetic, Lie
//!   membership of multilinear polynomials, ad-form conversions.
//! * [`grassmann`]: the Grassmann algebra on finitely many generators and
//!   the vanishing test that rules out Lie polynomials of degree ≥ 3.
//! * [`symbolalg`]: the generic symbol algebra of degree `n` and the linear
//!   system search for multilinear Lie identities of `sl_n`.
//! * [`mateval`]: evaluation on `gl_n`/`sl_n` over exact fields, value
//!   classification, censuses and the nilpotent-value criterion.
//! * [`wordmaps`]: word maps on `SL_2` and `PSL_2` over finite fields.
//! * [`cli`]: expression parsing, run configuration and reports.

pub mod linalg;
pub mod freelie;
pub mod grassmann;
pub mod cyclotomic;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod symbolalg;
pub mod mateval;
pub mod wordmaps;
pub mod cli;
