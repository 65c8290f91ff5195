//! Image censuses: classify the value of a polynomial at every tuple of a
//! finite domain, or at seeded random tuples.
//!
//! Work is split into fixed-size blocks of tuple indices. Counts merge by
//! addition and each class keeps the witness with the smallest index, so
//! the result does not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{classify, ValueClass};
use super::eval::{sample_matrix, CompiledPoly, Poly};
use super::{Domain, MatevalError};
use crate::field::{Field, FieldSpec};
use crate::matrix::{all_matrices, all_trace_zero, Matrix};
use crate::with_field;

pub const DEFAULT_BUDGET: u64 = 50_000_000;
const BLOCK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" | "sample" => Ok(Mode::Sampled),
            _ => Err(format!("unknown mode {s:?}; expected exhaustive or sampled")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub domain: Domain,
    pub field: FieldSpec,
    pub mode: Mode,
    /// Number of random tuples in sampled mode.
    pub trials: u64,
    pub seed: u64,
    /// Cap on the number of evaluations in exhaustive mode.
    pub budget: u64,
}

impl CensusConfig {
    pub fn exhaustive(domain: Domain, field: FieldSpec) -> Self {
        CensusConfig {
            domain,
            field,
            mode: Mode::Exhaustive,
            trials: 0,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn sampled(domain: Domain, field: FieldSpec, trials: u64, seed: u64) -> Self {
        CensusConfig {
            domain,
            field,
            mode: Mode::Sampled,
            trials,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// One stored argument tuple for a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Position in the enumeration order (exhaustive) or sample number.
    pub index: u64,
    pub arguments: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub poly: String,
    pub variables: Vec<String>,
    pub domain: Domain,
    pub field: FieldSpec,
    pub mode: Mode,
    pub seed: u64,
    pub trials: u64,
    pub counts: BTreeMap<ValueClass, u64>,
    pub witnesses: BTreeMap<ValueClass, Witness>,
    /// Finite-field results are evidence about the infinite-field statements.
    pub note: String,
}

impl Census {
    pub fn classes(&self) -> Vec<ValueClass> {
        self.counts.keys().copied().collect()
    }

    pub fn count(&self, c: ValueClass) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }
}

#[derive(Clone)]
struct Partial<E> {
    counts: BTreeMap<ValueClass, u64>,
    witnesses: BTreeMap<ValueClass, (u64, Vec<Matrix<E>>, Matrix<E>)>,
}

impl<E: Clone> Partial<E> {
    fn new() -> Self {
        Partial {
            counts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
        }
    }

    fn record(&mut self, class: ValueClass, index: u64, args: &[Matrix<E>], value: Matrix<E>) {
        *self.counts.entry(class).or_insert(0) += 1;
        self.witnesses
            .entry(class)
            .or_insert_with(|| (index, args.to_vec(), value));
    }

    fn merge(mut self, o: Self) -> Self {
        for (c, k) in o.counts {
            *self.counts.entry(c).or_insert(0) += k;
        }
        for (c, w) in o.witnesses {
            match self.witnesses.get(&c) {
                Some(old) if old.0 <= w.0 => {}
                _ => {
                    self.witnesses.insert(c, w);
                }
            }
        }
        self
    }
}

/// All elements of a finite domain, in lexicographic order of entries.
pub fn domain_elements<F: Field>(f: &F, domain: Domain) -> Option<Vec<Matrix<F::Elem>>> {
    match domain {
        Domain::Sl(n) => all_trace_zero(f, n),
        Domain::Gl(n) => all_matrices(f, n),
    }
}

/// Mixed-radix decoding with the first argument most significant.
pub fn tuple_indices(mut index: u64, base: u64, arity: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = (index % base) as usize;
        index /= base;
    }
    out
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn census_in<F: Field>(f: &F, p: &Poly, cfg: &CensusConfig) -> Result<Census, MatevalError> {
    let n = cfg.domain.dim();
    let compiled = CompiledPoly::compile(f, p)?;
    let arity = compiled.arity();
    let eval = |args: &[Matrix<F::Elem>]| -> Result<(ValueClass, Matrix<F::Elem>), MatevalError> {
        let v = compiled.evaluate(f, n, args);
        Ok((classify(f, &v)?, v))
    };

    let (total, partial) = match cfg.mode {
        Mode::Exhaustive => {
            let elems = domain_elements(f, cfg.domain).ok_or(MatevalError::InfiniteDomain)?;
            let base = elems.len() as u64;
            let needed = u128::from(base).pow(arity as u32);
            if needed > u128::from(cfg.budget) {
                return Err(MatevalError::BudgetExceeded {
                    needed,
                    budget: cfg.budget,
                });
            }
            let total = needed as u64;
            let partial = (0..total.div_ceil(BLOCK))
                .into_par_iter()
                .map(|b| {
                    let mut part = Partial::new();
                    let mut args = Vec::with_capacity(arity);
                    for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                        args.clear();
                        args.extend(tuple_indices(idx, base, arity).into_iter().map(|i| elems[i].clone()));
                        let (c, v) = eval(&args)?;
                        part.record(c, idx, &args, v);
                    }
                    Ok::<_, MatevalError>(part)
                })
                .try_reduce(Partial::new, |a, b| Ok(a.merge(b)))?;
            (total, partial)
        }
        Mode::Sampled => {
            let total = cfg.trials;
            let partial = (0..total.div_ceil(BLOCK))
                .into_par_iter()
                .map(|b| {
                    let mut rng = block_rng(cfg.seed, b);
                    let mut part = Partial::new();
                    for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                        let args: Vec<_> = (0..arity).map(|_| sample_matrix(f, cfg.domain, &mut rng)).collect();
                        let (c, v) = eval(&args)?;
                        part.record(c, idx, &args, v);
                    }
                    Ok::<_, MatevalError>(part)
                })
                .try_reduce(Partial::new, |a, b| Ok(a.merge(b)))?;
            (total, partial)
        }
    };

    let note = if cfg.field.is_finite() {
        "finite field: evidence only".to_string()
    } else if cfg.mode == Mode::Sampled {
        "random rational sample: evidence only".to_string()
    } else {
        String::new()
    };
    Ok(Census {
        poly: p.to_string(),
        variables: compiled.variables().iter().map(|v| v.to_string()).collect(),
        domain: cfg.domain,
        field: cfg.field,
        mode: cfg.mode,
        seed: cfg.seed,
        trials: total,
        counts: partial.counts,
        witnesses: partial
            .witnesses
            .into_iter()
            .map(|(c, (index, args, value))| {
                (
                    c,
                    Witness {
                        index,
                        arguments: args.iter().map(|m| m.format(f)).collect(),
                        value: value.format(f),
                    },
                )
            })
            .collect(),
        note,
    })
}

/// Classifies the values of `p` over `cfg.domain` and `cfg.field`.
pub fn run_census(p: &Poly, cfg: &CensusConfig) -> Result<Census, MatevalError> {
    with_field!(cfg.field, |f| census_in(&f, p, cfg))?
}

/// The first tuple (enumeration order, or sample order) at which `p` takes
/// a nonzero nilpotent value.
pub fn nilpotent_value_search(p: &Poly, cfg: &CensusConfig) -> Result<Option<Witness>, MatevalError> {
    let census = run_census(p, cfg)?;
    Ok(census.witnesses.get(&ValueClass::NilpotentNonzero).cloned())
}
