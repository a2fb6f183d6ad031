//! Spin structures as quadratic refinements `q` of the intersection form,
//! `q(u + v) = q(u) + q(v) + u.v`.
//!
//! A refinement is fixed by its values on `x_1..x_{2g}`; expanding a vector
//! over its support gives
//! `q(x) = sum_{i in S} q(x_i) + sum_{i<j in S} x_i.x_j`, which is the
//! quadratic form `x^T Q x` with `Q` upper triangular, `Q_ii = q(x_i)` and
//! `Q_ij` the Gram entry for `i < j`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{check_genus, Error, Result};
use crate::gf2::{Gf2Vector, IntersectionForm, SymplecticBasis};

/// Largest genus for which 2^{2g}-sized sweeps run by default.
pub const DEFAULT_ENUMERATION_CUTOFF: usize = 14;

/// Hard ceiling: sweeps index the space with a single `u64`.
pub const MAX_ENUMERATION_CUTOFF: usize = 31;

/// Genus bound for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoff(usize);

impl Cutoff {
    pub fn new(genus: usize) -> Result<Self> {
        if genus > MAX_ENUMERATION_CUTOFF {
            return Err(Error::CutoffExceeded {
                genus,
                cutoff: MAX_ENUMERATION_CUTOFF,
            });
        }
        Ok(Self(genus))
    }

    pub fn genus(self) -> usize {
        self.0
    }

    pub fn check(self, genus: usize) -> Result<()> {
        if genus > self.0 {
            Err(Error::CutoffExceeded {
                genus,
                cutoff: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Cutoff {
    fn default() -> Self {
        Self(DEFAULT_ENUMERATION_CUTOFF)
    }
}

/// Arf invariant of a spin structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArfClass {
    /// Arf 0: the structure bounds.
    Bounded = 0,
    /// Arf 1.
    Unbounded = 1,
}

impl ArfClass {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            ArfClass::Unbounded
        } else {
            ArfClass::Bounded
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for ArfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArfClass::Bounded => f.write_str("bounded"),
            ArfClass::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Quadratic refinement determined by its basis values.
#[derive(Clone)]
pub struct SpinStructure {
    form: Arc<IntersectionForm>,
    values: Gf2Vector,
}

impl PartialEq for SpinStructure {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form)
    }
}

impl Eq for SpinStructure {}

impl Hash for SpinStructure {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl PartialOrd for SpinStructure {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpinStructure {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.values.cmp(&other.values)
    }
}

impl fmt::Debug for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinStructure(g={}, {})", self.genus(), self.label())
    }
}

impl fmt::Display for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl SpinStructure {
    /// `values` bit `i` is `q(x_{i+1})`.
    pub fn new(form: Arc<IntersectionForm>, values: Gf2Vector) -> Result<Self> {
        check_genus(form.genus(), values.genus())?;
        Ok(Self { form, values })
    }

    /// Structure whose basis values are the bits of `index`.
    pub fn from_index(form: Arc<IntersectionForm>, index: u64) -> Result<Self> {
        let g = form.genus();
        if g > 32 || (2 * g < 64 && index >> (2 * g) != 0) {
            return Err(Error::BadLabel(format!("index {index:#x} at genus {g}")));
        }
        Ok(Self {
            values: Gf2Vector::from_word(g, index),
            form,
        })
    }

    /// Structure taking the same value on every `x_i`.
    pub fn constant(form: Arc<IntersectionForm>, value: bool) -> Self {
        let g = form.genus();
        let values = if value {
            Gf2Vector::all_ones(g)
        } else {
            Gf2Vector::zero(g)
        };
        Self { form, values }
    }

    pub fn genus(&self) -> usize {
        self.form.genus()
    }

    pub fn form(&self) -> &Arc<IntersectionForm> {
        &self.form
    }

    pub fn basis_values(&self) -> &Gf2Vector {
        &self.values
    }

    /// Basis values as an integer, for `g <= 32`.
    pub fn index(&self) -> Option<u64> {
        self.values.word()
    }

    /// Report label, e.g. `q:3` for values `(1, 1)`.
    pub fn label(&self) -> String {
        format!("q:{}", self.values.to_hex())
    }

    pub fn from_label(form: Arc<IntersectionForm>, label: &str) -> Result<Self> {
        let hex = label
            .strip_prefix("q:")
            .ok_or_else(|| Error::BadLabel(label.to_string()))?;
        let values = Gf2Vector::from_hex(form.genus(), hex)?;
        Ok(Self { form, values })
    }

    pub fn evaluate(&self, x: &Gf2Vector) -> Result<bool> {
        check_genus(self.genus(), x.genus())?;
        Ok(self.evaluate_raw(x))
    }

    pub(crate) fn evaluate_raw(&self, x: &Gf2Vector) -> bool {
        self.values.dot(x) ^ self.form.cross_terms(x)
    }

    pub fn arf(&self) -> ArfClass {
        arf(self)
    }
}

/// `q(x)`.
pub fn evaluate(q: &SpinStructure, x: &Gf2Vector) -> Result<bool> {
    q.evaluate(x)
}

/// Single-word kernels for `g <= 32`.
#[derive(Clone, Debug)]
pub(crate) struct PackedForm {
    pub(crate) dim: usize,
    pub(crate) rows: Vec<u64>,
    upper: Vec<u64>,
    // (a, q0(a), b, q0(b)) for each symplectic pair, q0 = cross terms.
    arf_pairs: Vec<(u64, bool, u64, bool)>,
}

#[inline]
pub(crate) fn parity(w: u64) -> bool {
    w.count_ones() & 1 == 1
}

impl PackedForm {
    pub(crate) fn new(form: &IntersectionForm) -> Option<Self> {
        if form.genus() > 32 {
            return None;
        }
        let rows: Vec<u64> = form
            .gram_rows()
            .iter()
            .map(|r| r.word().expect("genus <= 32"))
            .collect();
        let upper = rows
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                if i + 1 >= 64 {
                    0
                } else {
                    r & !((2u64 << i) - 1)
                }
            })
            .collect();
        let mut packed = Self {
            dim: form.dim(),
            rows,
            upper,
            arf_pairs: Vec::new(),
        };
        packed.arf_pairs = pack_basis(&packed, form.symplectic_basis());
        Some(packed)
    }

    #[inline]
    pub(crate) fn cross(&self, x: u64) -> bool {
        let mut rest = x;
        let mut acc = 0u32;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc ^= (self.upper[i] & x).count_ones();
        }
        acc & 1 == 1
    }

    #[cfg(test)]
    pub(crate) fn eval(&self, values: u64, x: u64) -> bool {
        parity(values & x) ^ self.cross(x)
    }

    #[inline]
    pub(crate) fn arf(&self, values: u64) -> bool {
        self.arf_pairs.iter().fold(false, |acc, &(a, ca, b, cb)| {
            acc ^ ((parity(a & values) ^ ca) & (parity(b & values) ^ cb))
        })
    }

    /// Gray-code sweep using `q(x + e_i) = q(x) + q(e_i) + x.e_i`.
    pub(crate) fn zero_count(&self, values: u64) -> u64 {
        let total = 1u64 << self.dim;
        let mut x = 0u64;
        let mut q = false;
        let mut zeros = 1u64;
        for k in 1..total {
            let i = k.trailing_zeros() as usize;
            q ^= ((values >> i) & 1 == 1) ^ parity(self.rows[i] & x);
            x ^= 1 << i;
            zeros += (!q) as u64;
        }
        zeros
    }
}

fn pack_basis(packed: &PackedForm, basis: &SymplecticBasis) -> Vec<(u64, bool, u64, bool)> {
    basis
        .pairs
        .iter()
        .map(|(a, b)| {
            let a = a.word().expect("genus <= 32");
            let b = b.word().expect("genus <= 32");
            (a, packed.cross(a), b, packed.cross(b))
        })
        .collect()
}

/// Number of `x` with `q(x) = 0`, by full enumeration.
pub fn zero_count(q: &SpinStructure) -> Result<u64> {
    zero_count_with(q, Cutoff::default())
}

pub fn zero_count_with(q: &SpinStructure, cutoff: Cutoff) -> Result<u64> {
    cutoff.check(q.genus())?;
    let packed = PackedForm::new(q.form()).expect("cutoff keeps genus <= 31");
    Ok(packed.zero_count(q.index().expect("genus <= 31")))
}

/// Arf invariant via the form's cached symplectic basis:
/// `sum_i q(a_i) q(b_i)`.
pub fn arf(q: &SpinStructure) -> ArfClass {
    arf_with_basis(q, q.form().symplectic_basis())
}

/// Arf invariant computed over the supplied symplectic basis.
pub fn arf_with_basis(q: &SpinStructure, basis: &SymplecticBasis) -> ArfClass {
    ArfClass::from_bit(basis.pairs.iter().fold(false, |acc, (a, b)| {
        acc ^ (q.evaluate_raw(a) & q.evaluate_raw(b))
    }))
}

/// All `2^{2g}` structures in increasing order of basis values.
pub fn enumerate_all(
    form: &Arc<IntersectionForm>,
    cutoff: Cutoff,
) -> Result<impl Iterator<Item = SpinStructure>> {
    cutoff.check(form.genus())?;
    let form = Arc::clone(form);
    let total = 1u64 << (2 * form.genus());
    Ok((0..total).map(move |i| SpinStructure {
        values: Gf2Vector::from_word(form.genus(), i),
        form: Arc::clone(&form),
    }))
}

/// Counts of structures by Arf class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Census {
    pub bounded: u64,
    pub unbounded: u64,
}

pub fn census(form: &IntersectionForm, cutoff: Cutoff) -> Result<Census> {
    cutoff.check(form.genus())?;
    let packed = PackedForm::new(form).expect("cutoff keeps genus <= 31");
    let total = 1u64 << (2 * form.genus());
    let unbounded = (0..total)
        .into_par_iter()
        .filter(|&v| packed.arf(v))
        .count() as u64;
    Ok(Census {
        bounded: total - unbounded,
        unbounded,
    })
}
