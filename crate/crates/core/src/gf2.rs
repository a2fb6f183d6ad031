//! Linear and bilinear algebra over GF(2) on the first homology of a
//! closed genus-`g` surface.
//!
//! Vectors are coefficient vectors over the basis `x_1..x_{2g}`; `x_i`
//! occupies bit `i - 1`, least-significant first. For `g <= 32` a vector is
//! a single `u64` word and every kernel below reduces to AND/XOR/popcount.
//! The extra class `x_{2g+1}` is never stored; it is the all-ones vector
//! because `x_1 + ... + x_{2g+1} = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use crate::error::{check_genus, Error, Result};

type Words = SmallVec<[u64; 1]>;

/// Default cap on the search for the order of a map.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 16;

fn word_count(dim: usize) -> usize {
    dim.div_ceil(64).max(1)
}

fn parity(w: u64) -> bool {
    w.count_ones() & 1 == 1
}

/// Element of `H_1(F_g; Z_2)` as a `2g`-bit coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    genus: usize,
    words: Words,
}

impl Gf2Vector {
    pub fn zero(genus: usize) -> Self {
        Self {
            genus,
            words: smallvec![0; word_count(2 * genus)],
        }
    }

    /// The basis class `x_{index + 1}`.
    pub fn basis(genus: usize, index: usize) -> Self {
        let mut v = Self::zero(genus);
        v.set(index, true);
        v
    }

    /// `x_1 + ... + x_{2g}`, i.e. the class `x_{2g+1}`.
    pub fn all_ones(genus: usize) -> Self {
        let dim = 2 * genus;
        let mut v = Self::zero(genus);
        for (k, w) in v.words.iter_mut().enumerate() {
            let lo = k * 64;
            let bits = dim.saturating_sub(lo).min(64);
            *w = if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
        }
        v
    }

    /// Packs the low `2g` bits of `word`. Only valid for `g <= 32`.
    ///
    /// # Panics
    /// Panics if `genus > 32` or `word` has bits at or above `2g`.
    pub fn from_word(genus: usize, word: u64) -> Self {
        assert!(genus <= 32, "single-word vectors need genus <= 32");
        let dim = 2 * genus;
        assert!(
            dim == 64 || word >> dim == 0,
            "word {word:#x} has bits beyond dimension {dim}"
        );
        Self {
            genus,
            words: smallvec![word],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(genus: usize, bits: I) -> Result<Self> {
        let mut v = Self::zero(genus);
        let mut n = 0;
        for (i, b) in bits.into_iter().enumerate() {
            if i < 2 * genus {
                v.set(i, b);
            }
            n += 1;
        }
        if n != 2 * genus {
            return Err(Error::DimensionMismatch {
                expected: 2 * genus,
                found: n,
            });
        }
        Ok(v)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    /// The packed word, when the vector fits in one.
    pub fn word(&self) -> Option<u64> {
        (self.genus <= 32).then(|| self.words[0])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim(), "bit {i} out of range (dim={})", self.dim());
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim(), "bit {i} out of range (dim={})", self.dim());
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim(), "bit {i} out of range (dim={})", self.dim());
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of basis classes in the support.
    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Indices `i` (0-based) with a nonzero coefficient on `x_{i+1}`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * 64 + bit)
            })
        })
    }

    /// Coordinate dot product `sum u_i v_i`. Not the intersection pairing.
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.genus, other.genus);
        self.words
            .iter()
            .zip(&other.words)
            .fold(false, |acc, (a, b)| acc ^ parity(a & b))
    }

    pub(crate) fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.genus, other.genus);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Lowercase hexadecimal of the coefficient vector read as an integer
    /// (bit 0 = coefficient of `x_1`).
    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        for &w in self.words.iter().rev() {
            if out.is_empty() {
                if w != 0 {
                    out = format!("{w:x}");
                }
            } else {
                out.push_str(&format!("{w:016x}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn from_hex(genus: usize, hex: &str) -> Result<Self> {
        let bad = || Error::BadLabel(hex.to_string());
        if hex.is_empty() {
            return Err(bad());
        }
        let mut v = Self::zero(genus);
        for (pos, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(bad)? as u64;
            if c.is_ascii_uppercase() {
                return Err(bad());
            }
            for b in 0..4 {
                if (nibble >> b) & 1 == 1 {
                    let i = pos * 4 + b;
                    if i >= v.dim() {
                        return Err(bad());
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }
}

impl Ord for Gf2Vector {
    /// Numeric order of the coefficient vectors, after genus.
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus
            .cmp(&other.genus)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Gf2Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector(g={}; ", self.genus)?;
        for i in 0..self.dim() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.support().map(|i| format!("x_{}", i + 1)).collect();
        f.write_str(&terms.join(" + "))
    }
}

impl AddAssign<&Gf2Vector> for Gf2Vector {
    fn add_assign(&mut self, rhs: &Gf2Vector) {
        assert_eq!(self.genus, rhs.genus, "genus mismatch in vector addition");
        self.xor_assign(rhs);
    }
}

impl Add<&Gf2Vector> for &Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Gf2Vector {
    type Output = Gf2Vector;

    fn add(mut self, rhs: Gf2Vector) -> Gf2Vector {
        self += &rhs;
        self
    }
}

/// Hyperbolic basis `(a_i, b_i)` with `a_i . b_j = delta_ij` and all
/// other pairings zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub pairs: Vec<(Gf2Vector, Gf2Vector)>,
}

impl SymplecticBasis {
    /// Checks every pairing condition and that the `2g` vectors span.
    pub fn is_valid_for(&self, form: &IntersectionForm) -> bool {
        if self.pairs.len() != form.genus() {
            return false;
        }
        let flat: Vec<&Gf2Vector> = self.pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        if flat.iter().any(|v| v.genus() != form.genus()) {
            return false;
        }
        for (i, (a_i, b_i)) in self.pairs.iter().enumerate() {
            for (j, (a_j, b_j)) in self.pairs.iter().enumerate() {
                if form.pair_raw(a_i, b_j) != (i == j)
                    || form.pair_raw(a_i, a_j)
                    || form.pair_raw(b_i, b_j)
                {
                    return false;
                }
            }
        }
        rank(flat.into_iter().cloned().collect()) == form.dim()
    }
}

/// Symmetric, alternating, nondegenerate pairing on `H_1(F_g; Z_2)`.
#[derive(Clone, Debug)]
pub struct IntersectionForm {
    genus: usize,
    rows: Vec<Gf2Vector>,
    // Row i restricted to columns j > i.
    upper: Vec<Gf2Vector>,
    basis: SymplecticBasis,
}

impl PartialEq for IntersectionForm {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && self.rows == other.rows
    }
}

impl Eq for IntersectionForm {}

impl IntersectionForm {
    /// Validates the Gram rows and builds the form.
    pub fn new(genus: usize, rows: Vec<Gf2Vector>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::ZeroGenus);
        }
        let dim = 2 * genus;
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows.len(),
            });
        }
        for row in &rows {
            check_genus(genus, row.genus())?;
        }
        for i in 0..dim {
            if rows[i].get(i) {
                return Err(Error::InvalidForm(format!(
                    "x_{0}.x_{0} = 1, form is not alternating",
                    i + 1
                )));
            }
            for j in (i + 1)..dim {
                if rows[i].get(j) != rows[j].get(i) {
                    return Err(Error::InvalidForm(format!(
                        "entries ({}, {}) and ({}, {}) differ, form is not symmetric",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let upper = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut u = row.clone();
                for j in 0..=i {
                    u.set(j, false);
                }
                u
            })
            .collect();
        let mut form = Self {
            genus,
            rows,
            upper,
            basis: SymplecticBasis { pairs: Vec::new() },
        };
        form.basis = symplectic_gram_schmidt(&form)?;
        Ok(form)
    }

    /// The x-basis form: `x_i . x_j = 1` for all `i != j`.
    pub fn standard(genus: usize) -> Result<Self> {
        let rows = (0..2 * genus)
            .map(|i| {
                let mut r = Gf2Vector::all_ones(genus);
                r.set(i, false);
                r
            })
            .collect();
        Self::new(genus, rows)
    }

    /// Block-diagonal form with hyperbolic pairs `(x_{2k-1}, x_{2k})`.
    pub fn block_symplectic(genus: usize) -> Result<Self> {
        let rows = (0..2 * genus)
            .map(|i| Gf2Vector::basis(genus, i ^ 1))
            .collect();
        Self::new(genus, rows)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn gram_rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// The intersection number `u . v`.
    pub fn pair(&self, u: &Gf2Vector, v: &Gf2Vector) -> Result<bool> {
        check_genus(self.genus, u.genus())?;
        check_genus(self.genus, v.genus())?;
        Ok(self.pair_raw(u, v))
    }

    pub(crate) fn pair_raw(&self, u: &Gf2Vector, v: &Gf2Vector) -> bool {
        u.support().fold(false, |acc, i| acc ^ self.rows[i].dot(v))
    }

    /// `sum_{i<j in supp(x)} x_i . x_j`, the pairing contribution to any
    /// quadratic refinement evaluated at `x`.
    pub(crate) fn cross_terms(&self, x: &Gf2Vector) -> bool {
        x.support().fold(false, |acc, i| acc ^ self.upper[i].dot(x))
    }

    /// The symplectic basis computed at construction.
    pub fn symplectic_basis(&self) -> &SymplecticBasis {
        &self.basis
    }

    /// The `n x n` Gram matrix (`n = 2g`), row-major, as bits.
    pub fn gram_matrix(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.dim()).map(|j| r.get(j) as u8).collect())
            .collect()
    }
}

/// Shorthand for [`IntersectionForm::standard`].
pub fn standard_form(genus: usize) -> Result<IntersectionForm> {
    IntersectionForm::standard(genus)
}

/// Symplectic Gram-Schmidt. Each step takes the lowest-index remaining
/// vector that has a partner, pairs it with its lowest-index partner, and
/// projects the rest onto the orthogonal complement of the new pair.
pub fn symplectic_basis(form: &IntersectionForm) -> Result<SymplecticBasis> {
    symplectic_gram_schmidt(form)
}

fn symplectic_gram_schmidt(form: &IntersectionForm) -> Result<SymplecticBasis> {
    let g = form.genus();
    let mut remaining: Vec<Gf2Vector> = (0..form.dim()).map(|i| Gf2Vector::basis(g, i)).collect();
    let mut pairs = Vec::with_capacity(g);
    while !remaining.is_empty() {
        let found = (0..remaining.len()).find_map(|u| {
            (0..remaining.len())
                .find(|&v| v != u && form.pair_raw(&remaining[u], &remaining[v]))
                .map(|v| (u, v))
        });
        let Some((ui, vi)) = found else {
            return Err(Error::InvalidForm("form is degenerate".into()));
        };
        let a = remaining[ui].clone();
        let b = remaining[vi].clone();
        let (hi, lo) = if ui > vi { (ui, vi) } else { (vi, ui) };
        remaining.remove(hi);
        remaining.remove(lo);
        for w in &mut remaining {
            let wb = form.pair_raw(w, &b);
            let wa = form.pair_raw(w, &a);
            if wb {
                w.xor_assign(&a);
            }
            if wa {
                w.xor_assign(&b);
            }
        }
        pairs.push((a, b));
    }
    Ok(SymplecticBasis { pairs })
}

/// Rank over GF(2) of a set of vectors of common genus.
pub fn rank(mut rows: Vec<Gf2Vector>) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let dim = first.dim();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..rows.len()).find(|&k| rows[k].get(col)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        r += 1;
    }
    r
}

/// Solution set of an affine system `row_k . v = rhs_k` over GF(2): a
/// particular solution plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Gf2Vector,
    pub kernel: Vec<Gf2Vector>,
}

impl AffineSolution {
    /// Every solution, sorted ascending. `2^kernel.len()` elements.
    pub fn elements(&self) -> Vec<Gf2Vector> {
        let n = self.kernel.len();
        assert!(
            n < 40,
            "solution space of dimension {n} is too large to list"
        );
        let mut out = Vec::with_capacity(1 << n);
        let mut cur = self.particular.clone();
        out.push(cur.clone());
        for k in 1u64..(1u64 << n) {
            cur.xor_assign(&self.kernel[k.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        out.sort();
        out
    }
}

/// Solves `rows[k] . v = rhs[k]` for `v` of the given genus. `None` when
/// the system is inconsistent.
pub fn solve_affine(genus: usize, equations: &[(Gf2Vector, bool)]) -> Option<AffineSolution> {
    let dim = 2 * genus;
    let mut rows: Vec<(Gf2Vector, bool)> = equations.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..rows.len()).find(|&k| rows[k].0.get(col)) else {
            continue;
        };
        rows.swap(r, p);
        let (pivot, prhs) = rows[r].clone();
        for (k, (row, rhs)) in rows.iter_mut().enumerate() {
            if k != r && row.get(col) {
                row.xor_assign(&pivot);
                *rhs ^= prhs;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| *rhs) {
        return None;
    }
    let mut particular = Gf2Vector::zero(genus);
    for (k, &col) in pivots.iter().enumerate() {
        particular.set(col, rows[k].1);
    }
    let kernel = (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = Gf2Vector::basis(genus, free);
            for (k, &col) in pivots.iter().enumerate() {
                if rows[k].0.get(free) {
                    v.set(col, true);
                }
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

fn check_images(images: &[Gf2Vector], form: &IntersectionForm) -> Result<()> {
    if images.len() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: images.len(),
        });
    }
    for v in images {
        check_genus(form.genus(), v.genus())?;
    }
    Ok(())
}

fn check_form_preserving(images: &[Gf2Vector], form: &IntersectionForm) -> Result<()> {
    check_images(images, form)?;
    let dim = form.dim();
    for i in 0..dim {
        for j in i..dim {
            let before = form.entry(i, j);
            let after = form.pair_raw(&images[i], &images[j]);
            if before != after {
                return Err(Error::NotFormPreserving {
                    i: i + 1,
                    j: j + 1,
                    before: before as u8,
                    after: after as u8,
                });
            }
        }
    }
    if rank(images.to_vec()) != dim {
        return Err(Error::NotInvertible);
    }
    Ok(())
}

/// `true` iff the matrix whose `i`-th entry is the image of `x_{i+1}` is
/// invertible and preserves every basis pairing.
pub fn is_form_preserving(images: &[Gf2Vector], form: &IntersectionForm) -> bool {
    check_form_preserving(images, form).is_ok()
}

/// Result of an order search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapOrder {
    Finite(u64),
    OverCap,
}

impl MapOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            MapOrder::Finite(n) => Some(n),
            MapOrder::OverCap => None,
        }
    }
}

impl fmt::Display for MapOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapOrder::Finite(n) => write!(f, "{n}"),
            MapOrder::OverCap => f.write_str("over-cap"),
        }
    }
}

/// Form-preserving automorphism `f_*` of `H_1(F_g; Z_2)`.
#[derive(Clone, Debug)]
pub struct HomologyMap {
    form: Arc<IntersectionForm>,
    // images[i] = f(x_{i+1})
    images: Vec<Gf2Vector>,
}

impl PartialEq for HomologyMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form)
    }
}

impl Eq for HomologyMap {}

impl HomologyMap {
    /// Validates that `images` describe an invertible, form-preserving map.
    pub fn new(form: Arc<IntersectionForm>, images: Vec<Gf2Vector>) -> Result<Self> {
        check_form_preserving(&images, &form)?;
        Ok(Self { form, images })
    }

    pub(crate) fn new_unchecked(form: Arc<IntersectionForm>, images: Vec<Gf2Vector>) -> Self {
        debug_assert!(is_form_preserving(&images, &form));
        Self { form, images }
    }

    pub fn identity(form: Arc<IntersectionForm>) -> Self {
        let g = form.genus();
        let images = (0..form.dim()).map(|i| Gf2Vector::basis(g, i)).collect();
        Self { form, images }
    }

    pub fn genus(&self) -> usize {
        self.form.genus()
    }

    pub fn form(&self) -> &Arc<IntersectionForm> {
        &self.form
    }

    /// `images()[i]` is the image of `x_{i+1}`.
    pub fn images(&self) -> &[Gf2Vector] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, v)| *v == Gf2Vector::basis(self.genus(), i))
    }

    pub fn apply(&self, x: &Gf2Vector) -> Result<Gf2Vector> {
        check_genus(self.genus(), x.genus())?;
        Ok(self.apply_raw(x))
    }

    pub(crate) fn apply_raw(&self, x: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zero(self.genus());
        for i in x.support() {
            out.xor_assign(&self.images[i]);
        }
        out
    }

    fn same_form(&self, other: &Self) -> Result<()> {
        check_genus(self.genus(), other.genus())?;
        if Arc::ptr_eq(&self.form, &other.form) || self.form == other.form {
            Ok(())
        } else {
            Err(Error::FormMismatch)
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_form(other)?;
        Ok(self.compose_raw(other))
    }

    pub(crate) fn compose_raw(&self, other: &Self) -> Self {
        Self {
            form: Arc::clone(&self.form),
            images: other.images.iter().map(|v| self.apply_raw(v)).collect(),
        }
    }

    /// `self^k` by repeated squaring.
    pub fn power(&self, mut k: u64) -> Self {
        let mut acc = Self::identity(Arc::clone(&self.form));
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_raw(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose_raw(&base);
            }
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        let g = self.genus();
        let dim = self.form.dim();
        // Rows (f(x_i) | e_i); reducing the left half to the identity leaves
        // f^{-1}(x_j) on the right of the row whose left half is e_j.
        let mut rows: Vec<(Gf2Vector, Gf2Vector)> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Gf2Vector::basis(g, i)))
            .collect();
        for col in 0..dim {
            let p = (col..dim)
                .find(|&k| rows[k].0.get(col))
                .expect("homology maps are invertible");
            rows.swap(col, p);
            let (pl, pr) = rows[col].clone();
            for (k, (l, r)) in rows.iter_mut().enumerate() {
                if k != col && l.get(col) {
                    l.xor_assign(&pl);
                    r.xor_assign(&pr);
                }
            }
        }
        Self {
            form: Arc::clone(&self.form),
            images: rows.into_iter().map(|(_, r)| r).collect(),
        }
    }

    /// Least `k >= 1` with `self^k = id`, searching up to `cap`.
    pub fn order(&self, cap: u64) -> MapOrder {
        let mut cur = self.clone();
        for k in 1..=cap.max(1) {
            if cur.is_identity() {
                return MapOrder::Finite(k);
            }
            cur = self.compose_raw(&cur);
        }
        MapOrder::OverCap
    }

    /// Rows of the matrix in the "image of x_i" convention.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.images
            .iter()
            .map(|r| (0..self.form.dim()).map(|j| r.get(j) as u8).collect())
            .collect()
    }
}

/// Order of `f` with the default cap.
pub fn map_order(f: &HomologyMap) -> MapOrder {
    f.order(DEFAULT_ORDER_CAP)
}
