//! Matrix evaluation of polynomials over exact fields.
//!
//! * [`eval`]: compiled evaluation of associative and Lie polynomials.
//! * [`classify`]: the value taxonomy for `2×2` and `3×3` matrices.
//! * [`census`]: exhaustive and sampled image censuses.
//! * [`nilcrit`]: the determinant/entry divisibility test for the absence
//!   of nonzero nilpotent values, restricted to random curves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldError;
use crate::freelie::VarId;

pub mod census;
pub mod classify;
pub mod eval;
pub mod nilcrit;

pub use census::{nilpotent_value_search, run_census, Census, CensusConfig, Mode, Witness};
pub use classify::{classify, classify2, classify3, is_nilpotent, ValueClass};
pub use eval::{evaluate_poly, random_trace_zero, sample_matrix, CompiledPoly, Poly};
pub use nilcrit::{nilcrit_check, GenericTraceZeroMatrix, NilcritConfig, NilcritReport, NilcritVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatevalError {
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(VarId),
    #[error("expected {expected}x{expected} matrices, found {found}x{found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("classifier for {expected}x{expected} matrices applied to a {found}x{found} matrix")]
    WrongDimension { expected: usize, found: usize },
    #[error("{needed} evaluations exceed the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("exhaustive mode needs a finite field")]
    InfiniteDomain,
    #[error("no matrices assigned, so the dimension is unknown")]
    NoDimension,
    #[error("{0} does not take trace-zero values on generic trace-zero matrices")]
    NotTraceVanishing(String),
    #[error("determinant vanished on {0} consecutive random curves")]
    DegenerateCurve(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Where arguments are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Sl(usize),
    Gl(usize),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Sl(n) | Domain::Gl(n) => *n,
        }
    }

    pub fn trace_zero(&self) -> bool {
        matches!(self, Domain::Sl(_))
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Sl(n) => write!(f, "sl{n}"),
            Domain::Gl(n) => write!(f, "gl{n}"),
        }
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || format!("cannot parse domain {s:?}; expected sl<n> or gl<n>");
        let (ctor, rest): (fn(usize) -> Domain, &str) = if let Some(r) = t.strip_prefix("sl") {
            (Domain::Sl, r)
        } else if let Some(r) = t.strip_prefix("gl") {
            (Domain::Gl, r)
        } else {
            return Err(bad());
        };
        let n: usize = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(ctor(n))
    }
}
