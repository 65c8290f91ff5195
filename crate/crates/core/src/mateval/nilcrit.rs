//! Nilpotent-value criterion on generic trace-zero matrices.
//!
//! For a trace-vanishing polynomial `f`, let `f̄` be its value at generic
//! trace-zero matrices with independent polynomial entries. `f` has no
//! nonzero nilpotent values exactly when every prime divisor of `det f̄`
//! divides every entry of `f̄`. The check below restricts `f̄` to random
//! curves `ξ_i = c_i(t)` and tests the divisibility over ℚ[t]: strip from
//! `D = det` every factor it shares with `g = gcd(entries)`, repeatedly,
//! and pass iff what remains of `D` is constant.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::{CompiledPoly, Poly};
use super::MatevalError;
use crate::field::Ring;
use crate::matrix::Matrix;
use crate::poly::{MPoly, MultivariateRing, UPoly, UnivariateRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilcritConfig {
    /// Matrix size.
    pub n: usize,
    pub curves: usize,
    pub seed: u64,
    pub curve_degree: usize,
    /// Curve coefficients are integers in `[-height, height]`.
    pub height: i64,
    /// Consecutive curves with `D ≡ 0` tolerated before giving up.
    pub max_degenerate: usize,
}

impl Default for NilcritConfig {
    fn default() -> Self {
        NilcritConfig {
            n: 2,
            curves: 10,
            seed: 0,
            curve_degree: 2,
            height: 10,
            max_degenerate: 100,
        }
    }
}

/// `n×n` matrix of fresh variables with the last diagonal entry set to
/// minus the sum of the other diagonal entries. Uses `n² − 1` variables
/// starting at `offset`.
#[derive(Clone, Debug)]
pub struct GenericTraceZeroMatrix {
    pub matrix: Matrix<MPoly>,
    pub offset: usize,
}

impl GenericTraceZeroMatrix {
    pub fn new(ring: &MultivariateRing, n: usize, offset: usize) -> Self {
        let mut m = Matrix::zero(ring, n);
        let mut next = offset;
        let mut diag = ring.zero();
        for i in 0..n {
            for j in 0..n {
                if i == n - 1 && j == n - 1 {
                    continue;
                }
                let v = ring.var(next);
                next += 1;
                if i == j {
                    diag = ring.add(&diag, &v);
                }
                m.set(i, j, v);
            }
        }
        m.set(n - 1, n - 1, ring.neg(&diag));
        GenericTraceZeroMatrix { matrix: m, offset }
    }

    pub fn variable_count(n: usize) -> usize {
        n * n - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum NilcritVerdict {
    Pass,
    Fail {
        /// The substituted polynomial for each generic variable.
        curve: Vec<String>,
        det: String,
        entry_gcd: String,
        /// Part of `D` coprime to the entries.
        cofactor: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilcritReport {
    pub verdict: NilcritVerdict,
    pub curves_checked: usize,
    pub degenerate_resampled: usize,
    pub generic_variables: usize,
    pub note: String,
}

impl NilcritReport {
    pub fn passed(&self) -> bool {
        self.verdict == NilcritVerdict::Pass
    }
}

/// `f̄` on generic trace-zero matrices.
pub fn generic_value(p: &Poly, n: usize) -> Result<(Matrix<MPoly>, usize), MatevalError> {
    let k = GenericTraceZeroMatrix::variable_count(n);
    let arity = p.variables().len();
    let ring = MultivariateRing::new(k * arity);
    let compiled = CompiledPoly::compile(&ring, p)?;
    let args: Vec<Matrix<MPoly>> = (0..arity)
        .map(|i| GenericTraceZeroMatrix::new(&ring, n, i * k).matrix)
        .collect();
    Ok((compiled.evaluate(&ring, n, &args), k * arity))
}

/// Removes from `d` every irreducible factor it shares with `g`.
fn coprime_part(mut d: UPoly, g: &UPoly) -> UPoly {
    loop {
        let h = d.gcd(g);
        if h.is_constant() {
            return d;
        }
        d = d.div_rem(&h).0;
    }
}

pub fn nilcrit_check(p: &Poly, cfg: &NilcritConfig) -> Result<NilcritReport, MatevalError> {
    let (fbar, nvars) = generic_value(p, cfg.n)?;
    let mring = MultivariateRing::new(nvars);
    if !mring.is_zero(&fbar.trace(&mring)) {
        return Err(MatevalError::NotTraceVanishing(p.to_string()));
    }
    let ur = UnivariateRing;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut degenerate = 0;
    let mut streak = 0;
    let mut checked = 0;
    while checked < cfg.curves {
        let curve: Vec<UPoly> = (0..nvars)
            .map(|_| {
                UPoly::new(
                    (0..=cfg.curve_degree)
                        .map(|_| BigRational::from_integer(rng.gen_range(-cfg.height..=cfg.height).into()))
                        .collect(),
                )
            })
            .collect();
        let m = fbar.map(|e| e.substitute(&curve));
        let d = m.det(&ur);
        if d.is_zero() {
            degenerate += 1;
            streak += 1;
            if streak > cfg.max_degenerate {
                return Err(MatevalError::DegenerateCurve(streak));
            }
            continue;
        }
        streak = 0;
        checked += 1;
        let g = m.entries().iter().fold(UPoly::default(), |acc, e| acc.gcd(e));
        let rest = coprime_part(d.clone(), &g);
        if !rest.is_constant() {
            return Ok(NilcritReport {
                verdict: NilcritVerdict::Fail {
                    curve: curve.iter().map(|c| c.to_string()).collect(),
                    det: d.to_string(),
                    entry_gcd: g.to_string(),
                    cofactor: rest.to_string(),
                },
                curves_checked: checked,
                degenerate_resampled: degenerate,
                generic_variables: nvars,
                note: note(),
            });
        }
    }
    Ok(NilcritReport {
        verdict: NilcritVerdict::Pass,
        curves_checked: checked,
        degenerate_resampled: degenerate,
        generic_variables: nvars,
        note: note(),
    })
}

fn note() -> String {
    "curve restriction over Q[t]; a failure is conclusive, passes are probabilistic; \
     the quantifier over all extension domains is not testable"
        .to_string()
}
