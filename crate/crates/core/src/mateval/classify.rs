//! Value classes for `2×2` and `3×3` matrices.

use serde::{Deserialize, Serialize};

use super::MatevalError;
use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ValueClass {
    Zero,
    ScalarNonzero,
    NilpotentNonzero,
    TraceZeroNonNilpotent,
    /// Eigenvalues `c, cω, cω²` with `c ≠ 0`: characteristic polynomial `λ³ − c³`.
    ThreeScalarNonzero,
    NonzeroTrace,
    Other,
}

impl ValueClass {
    pub const ALL: [ValueClass; 7] = [
        ValueClass::Zero,
        ValueClass::ScalarNonzero,
        ValueClass::NilpotentNonzero,
        ValueClass::TraceZeroNonNilpotent,
        ValueClass::ThreeScalarNonzero,
        ValueClass::NonzeroTrace,
        ValueClass::Other,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ValueClass::Zero => "Zero",
            ValueClass::ScalarNonzero => "ScalarNonzero",
            ValueClass::NilpotentNonzero => "NilpotentNonzero",
            ValueClass::TraceZeroNonNilpotent => "TraceZeroNonNilpotent",
            ValueClass::ThreeScalarNonzero => "ThreeScalarNonzero",
            ValueClass::NonzeroTrace => "NonzeroTrace",
            ValueClass::Other => "Other",
        }
    }
}

impl std::fmt::Display for ValueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `M^n = 0`.
pub fn is_nilpotent<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.pow(f, m.dim() as u32).is_zero(f)
}

pub fn classify2<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<ValueClass, MatevalError> {
    if m.dim() != 2 {
        return Err(MatevalError::WrongDimension {
            expected: 2,
            found: m.dim(),
        });
    }
    Ok(if m.is_zero(f) {
        ValueClass::Zero
    } else if !f.is_zero(&m.trace(f)) {
        ValueClass::NonzeroTrace
    } else if m.is_scalar(f) {
        ValueClass::ScalarNonzero
    } else if f.is_zero(&m.det(f)) {
        ValueClass::NilpotentNonzero
    } else {
        ValueClass::TraceZeroNonNilpotent
    })
}

/// Without a primitive cube root of unity in `f`, matrices with
/// characteristic polynomial `λ³ − c³`, `c ≠ 0`, land in [`ValueClass::Other`].
pub fn classify3<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<ValueClass, MatevalError> {
    if m.dim() != 3 {
        return Err(MatevalError::WrongDimension {
            expected: 3,
            found: m.dim(),
        });
    }
    if m.is_zero(f) {
        return Ok(ValueClass::Zero);
    }
    if !f.is_zero(&m.trace(f)) {
        return Ok(ValueClass::NonzeroTrace);
    }
    if m.is_scalar(f) {
        return Ok(ValueClass::ScalarNonzero);
    }
    if f.is_zero(&m.e2(f)) {
        if f.is_zero(&m.det(f)) {
            return Ok(ValueClass::NilpotentNonzero);
        }
        return Ok(if f.primitive_cube_root().is_some() {
            ValueClass::ThreeScalarNonzero
        } else {
            ValueClass::Other
        });
    }
    Ok(ValueClass::TraceZeroNonNilpotent)
}

/// Dispatches on the matrix size; sizes other than 2 and 3 are rejected.
pub fn classify<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<ValueClass, MatevalError> {
    match m.dim() {
        3 => classify3(f, m),
        _ => classify2(f, m),
    }
}
