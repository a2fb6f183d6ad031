//! The action `f^*(q)(x) = q(f_*(x))` of form-preserving maps on spin
//! structures: invariance, fixed sets split by Arf class, cyclic orbits,
//! and the transvection-generated symplectic group.
//!
//! Pullback is contravariant, `(f ∘ h)^* = h^* ∘ f^*`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_genus, Error, Result};
use crate::gf2::{
    map_order, solve_affine, AffineSolution, Gf2Vector, HomologyMap, IntersectionForm, MapOrder,
};
use crate::number_theory;
use crate::spin::{arf, parity, ArfClass, Cutoff, PackedForm, SpinStructure};

fn same_form(f: &HomologyMap, q: &SpinStructure) -> Result<()> {
    check_genus(f.genus(), q.genus())?;
    if Arc::ptr_eq(f.form(), q.form()) || f.form() == q.form() {
        Ok(())
    } else {
        Err(Error::FormMismatch)
    }
}

/// `f^*(q)`, with basis values `q(f(x_i))`.
pub fn pullback(f: &HomologyMap, q: &SpinStructure) -> Result<SpinStructure> {
    same_form(f, q)?;
    Ok(pullback_raw(f, q))
}

fn pullback_raw(f: &HomologyMap, q: &SpinStructure) -> SpinStructure {
    let values = Gf2Vector::from_bits(f.genus(), f.images().iter().map(|img| q.evaluate_raw(img)))
        .expect("one value per basis class");
    SpinStructure::new(Arc::clone(q.form()), values).expect("same genus")
}

pub fn is_invariant(f: &HomologyMap, q: &SpinStructure) -> Result<bool> {
    Ok(pullback(f, q)? == *q)
}

/// Pullback on packed basis values, `g <= 32`.
#[derive(Clone, Debug)]
pub(crate) struct PackedAction {
    images: Vec<u64>,
    // cross terms of each image
    consts: Vec<bool>,
    // images[i] ^ e_i: q is fixed iff parity(fixed_rows[i] & q) == consts[i]
    fixed_rows: Vec<u64>,
}

impl PackedAction {
    pub(crate) fn new(f: &HomologyMap, packed: &PackedForm) -> Self {
        let images: Vec<u64> = f
            .images()
            .iter()
            .map(|v| v.word().expect("genus <= 32"))
            .collect();
        let consts = images.iter().map(|&w| packed.cross(w)).collect();
        let fixed_rows = images
            .iter()
            .enumerate()
            .map(|(i, &w)| w ^ (1u64 << i))
            .collect();
        Self {
            images,
            consts,
            fixed_rows,
        }
    }

    #[inline]
    pub(crate) fn pullback(&self, values: u64) -> u64 {
        self.images
            .iter()
            .zip(&self.consts)
            .enumerate()
            .fold(0u64, |acc, (i, (&img, &c))| {
                acc | (((parity(img & values) ^ c) as u64) << i)
            })
    }

    #[inline]
    pub(crate) fn is_fixed(&self, values: u64) -> bool {
        self.fixed_rows
            .iter()
            .zip(&self.consts)
            .all(|(&r, &c)| parity(r & values) == c)
    }
}

/// The affine space of `f`-invariant basis-value vectors: the solutions of
/// `q . (f(x_i) + x_i) = sum_{j<k in supp f(x_i)} x_j.x_k` for every `i`.
pub fn invariant_space(f: &HomologyMap) -> Option<AffineSolution> {
    let form = f.form();
    let equations: Vec<(Gf2Vector, bool)> = f
        .images()
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let mut row = img.clone();
            row.flip(i);
            (row, form.cross_terms(img))
        })
        .collect();
    solve_affine(f.genus(), &equations)
}

/// Invariant structures of a map, partitioned by Arf class, each list
/// ascending in basis values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointReport {
    pub genus: usize,
    pub map_order: MapOrder,
    pub fixed_bounded: Vec<SpinStructure>,
    pub fixed_unbounded: Vec<SpinStructure>,
}

#[derive(Serialize)]
struct FixedPointJson {
    genus: usize,
    map_order: Option<u64>,
    fixed_bounded: Vec<String>,
    fixed_unbounded: Vec<String>,
    extendable: bool,
}

impl FixedPointReport {
    pub fn extendable(&self) -> bool {
        !self.fixed_bounded.is_empty()
    }

    /// Least bounded invariant structure.
    pub fn witness(&self) -> Option<&SpinStructure> {
        self.fixed_bounded.first()
    }

    pub fn fixed(&self, class: ArfClass) -> &[SpinStructure] {
        match class {
            ArfClass::Bounded => &self.fixed_bounded,
            ArfClass::Unbounded => &self.fixed_unbounded,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = FixedPointJson {
            genus: self.genus,
            map_order: self.map_order.finite(),
            fixed_bounded: self
                .fixed_bounded
                .iter()
                .map(SpinStructure::label)
                .collect(),
            fixed_unbounded: self
                .fixed_unbounded
                .iter()
                .map(SpinStructure::label)
                .collect(),
            extendable: self.extendable(),
        };
        serde_json::to_value(json).expect("plain data serializes")
    }
}

fn split_by_arf(structures: Vec<SpinStructure>) -> (Vec<SpinStructure>, Vec<SpinStructure>) {
    structures
        .into_iter()
        .partition(|q| arf(q) == ArfClass::Bounded)
}

fn fixed_values_scan(f: &HomologyMap, packed: &PackedForm) -> Vec<u64> {
    let action = PackedAction::new(f, packed);
    let total = 1u64 << packed.dim;
    (0..total)
        .into_par_iter()
        .filter(|&v| action.is_fixed(v))
        .collect()
}

/// Largest invariant-space dimension that is listed element by element.
pub const MAX_LISTED_DIM: usize = 2 * crate::spin::DEFAULT_ENUMERATION_CUTOFF;

fn fixed_from_space(f: &HomologyMap) -> Result<Vec<SpinStructure>> {
    let Some(space) = invariant_space(f) else {
        return Ok(Vec::new());
    };
    if space.kernel.len() > MAX_LISTED_DIM {
        return Err(Error::CutoffExceeded {
            genus: f.genus(),
            cutoff: crate::spin::DEFAULT_ENUMERATION_CUTOFF,
        });
    }
    space
        .elements()
        .into_iter()
        .map(|v| SpinStructure::new(Arc::clone(f.form()), v))
        .collect()
}

pub fn invariant_structures(f: &HomologyMap) -> Result<FixedPointReport> {
    invariant_structures_with(f, Cutoff::default())
}

/// Exact fixed set of `f^*`. Scans all `2^{2g}` structures up to the
/// cutoff; beyond it, enumerates the solution space of the affine system.
pub fn invariant_structures_with(f: &HomologyMap, cutoff: Cutoff) -> Result<FixedPointReport> {
    let fixed = if f.genus() <= cutoff.genus() {
        let packed = PackedForm::new(f.form()).expect("cutoff keeps genus <= 31");
        fixed_values_scan(f, &packed)
            .into_iter()
            .map(|v| SpinStructure::from_index(Arc::clone(f.form()), v))
            .collect::<Result<Vec<_>>>()?
    } else {
        fixed_from_space(f)?
    };
    let (fixed_bounded, fixed_unbounded) = split_by_arf(fixed);
    Ok(FixedPointReport {
        genus: f.genus(),
        map_order: map_order(f),
        fixed_bounded,
        fixed_unbounded,
    })
}

/// Numbers of invariant structures by Arf class, without listing them.
pub fn invariant_counts(f: &HomologyMap, cutoff: Cutoff) -> Result<(u64, u64)> {
    if f.genus() <= cutoff.genus() {
        let packed = PackedForm::new(f.form()).expect("cutoff keeps genus <= 31");
        let action = PackedAction::new(f, &packed);
        let total = 1u64 << packed.dim;
        Ok((0..total)
            .into_par_iter()
            .filter(|&v| action.is_fixed(v))
            .map(|v| if packed.arf(v) { (0, 1) } else { (1, 0) })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1)))
    } else {
        let (b, u) = split_by_arf(fixed_from_space(f)?);
        Ok((b.len() as u64, u.len() as u64))
    }
}

/// Extendability verdict with the least bounded invariant structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extendability {
    pub extendable: bool,
    pub witness: Option<SpinStructure>,
}

pub fn is_extendable(f: &HomologyMap) -> Result<Extendability> {
    is_extendable_with(f, Cutoff::default())
}

pub fn is_extendable_with(f: &HomologyMap, cutoff: Cutoff) -> Result<Extendability> {
    let witness = if f.genus() <= cutoff.genus() {
        let packed = PackedForm::new(f.form()).expect("cutoff keeps genus <= 31");
        let action = PackedAction::new(f, &packed);
        let total = 1u64 << packed.dim;
        (0..total)
            .into_par_iter()
            .find_first(|&v| action.is_fixed(v) && !packed.arf(v))
            .map(|v| SpinStructure::from_index(Arc::clone(f.form()), v))
            .transpose()?
    } else {
        fixed_from_space(f)?
            .into_iter()
            .find(|q| arf(q) == ArfClass::Bounded)
    };
    Ok(Extendability {
        extendable: witness.is_some(),
        witness,
    })
}

/// One orbit of the cyclic group `<f>` acting on structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    /// Least member of the orbit.
    pub representative: SpinStructure,
    pub size: u64,
    pub stabilizer_order: u64,
}

/// Orbits of `<f>` on the structures of one Arf class, ordered by
/// representative.
pub fn orbits(f: &HomologyMap, class: ArfClass) -> Result<Vec<OrbitRecord>> {
    orbits_with(f, class, Cutoff::default())
}

pub fn orbits_with(f: &HomologyMap, class: ArfClass, cutoff: Cutoff) -> Result<Vec<OrbitRecord>> {
    cutoff.check(f.genus())?;
    let order = match map_order(f) {
        MapOrder::Finite(n) => n,
        MapOrder::OverCap => {
            return Err(Error::OrderOverCap {
                cap: crate::gf2::DEFAULT_ORDER_CAP,
            })
        }
    };
    let packed = PackedForm::new(f.form()).expect("cutoff keeps genus <= 31");
    let action = PackedAction::new(f, &packed);
    let total = 1u64 << packed.dim;
    let want = class == ArfClass::Unbounded;
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut out = Vec::new();
    for v in 0..total {
        if seen[(v / 64) as usize] >> (v % 64) & 1 == 1 || packed.arf(v) != want {
            continue;
        }
        let mut size = 0u64;
        let mut cur = v;
        loop {
            seen[(cur / 64) as usize] |= 1 << (cur % 64);
            size += 1;
            cur = action.pullback(cur);
            if cur == v {
                break;
            }
        }
        out.push(OrbitRecord {
            representative: SpinStructure::from_index(Arc::clone(f.form()), v)?,
            size,
            stabilizer_order: order / size,
        });
    }
    Ok(out)
}

/// Outcome of the fixed-point argument for a map of odd prime-power order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuaranteeResult {
    /// `p` does not divide the class cardinality, so a fixed point must exist.
    pub guaranteed: bool,
    /// The fixed structures of the chosen class, found by search.
    pub fixed: Vec<SpinStructure>,
}

impl GuaranteeResult {
    /// A guarantee was never contradicted by the search.
    pub fn consistent(&self) -> bool {
        !self.guaranteed || !self.fixed.is_empty()
    }
}

pub fn pgroup_fixed_point_guarantee(
    f: &HomologyMap,
    p: u64,
    m: u32,
    class: ArfClass,
) -> Result<GuaranteeResult> {
    if p < 3 || !number_theory::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let order = match map_order(f) {
        MapOrder::Finite(n) => n,
        MapOrder::OverCap => {
            return Err(Error::OrderOverCap {
                cap: crate::gf2::DEFAULT_ORDER_CAP,
            })
        }
    };
    if m == 0 || p.checked_pow(m) != Some(order) {
        return Err(Error::OrderMismatch { order, p, m });
    }
    let g = f.genus() as u64;
    let divides = match class {
        ArfClass::Bounded => number_theory::divides_bg(p, g)?,
        ArfClass::Unbounded => number_theory::divides_ug(p, g)?,
    };
    let report = invariant_structures(f)?;
    Ok(GuaranteeResult {
        guaranteed: !divides,
        fixed: report.fixed(class).to_vec(),
    })
}

/// `h^{-1} ∘ f ∘ h`.
pub fn conjugate(f: &HomologyMap, h: &HomologyMap) -> Result<HomologyMap> {
    h.inverse().compose(&f.compose(h)?)
}

/// `T_u(x) = x + (x.u) u`.
pub fn transvection(form: &Arc<IntersectionForm>, u: &Gf2Vector) -> Result<HomologyMap> {
    check_genus(form.genus(), u.genus())?;
    let g = form.genus();
    let images = (0..form.dim())
        .map(|i| {
            let mut e = Gf2Vector::basis(g, i);
            if form.pair_raw(&e, u) {
                e.xor_assign(u);
            }
            e
        })
        .collect();
    Ok(HomologyMap::new_unchecked(Arc::clone(form), images))
}

/// Largest genus for which the full group is materialized.
pub const MAX_CLOSURE_GENUS: usize = 3;

const SLOT: usize = 8;

/// The group generated by all transvections, stored as packed matrices
/// (image of `x_{i+1}` in byte `i`).
#[derive(Clone, Debug)]
pub struct SymplecticGroup {
    form: Arc<IntersectionForm>,
    elements: Vec<u64>,
}

fn packed_apply(m: u64, v: u64) -> u64 {
    let mut out = 0;
    let mut rest = v;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out ^= (m >> (SLOT * i)) & 0xff;
    }
    out
}

fn packed_compose(f: u64, h: u64, dim: usize) -> u64 {
    (0..dim).fold(0, |acc, i| {
        acc | packed_apply(f, (h >> (SLOT * i)) & 0xff) << (SLOT * i)
    })
}

fn pack_map(f: &HomologyMap) -> u64 {
    f.images().iter().enumerate().fold(0, |acc, (i, v)| {
        acc | v.word().expect("small genus") << (SLOT * i)
    })
}

impl SymplecticGroup {
    /// Breadth-first closure of the identity under left multiplication by
    /// every transvection `T_u`, `u != 0`.
    pub fn generate(form: &Arc<IntersectionForm>) -> Result<Self> {
        let g = form.genus();
        if g > MAX_CLOSURE_GENUS {
            return Err(Error::ClosureTooLarge {
                genus: g,
                max: MAX_CLOSURE_GENUS,
            });
        }
        let dim = form.dim();
        let generators: Vec<u64> = (1u64..(1 << dim))
            .map(|u| transvection(form, &Gf2Vector::from_word(g, u)).map(|t| pack_map(&t)))
            .collect::<Result<_>>()?;
        let identity = pack_map(&HomologyMap::identity(Arc::clone(form)));
        let mut seen = HashSet::from([identity]);
        let mut elements = vec![identity];
        let mut queue = VecDeque::from([identity]);
        while let Some(e) = queue.pop_front() {
            for &t in &generators {
                let next = packed_compose(t, e, dim);
                if seen.insert(next) {
                    elements.push(next);
                    queue.push_back(next);
                }
            }
        }
        Ok(Self {
            form: Arc::clone(form),
            elements,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn form(&self) -> &Arc<IntersectionForm> {
        &self.form
    }

    /// Elements in discovery order; the identity comes first.
    pub fn iter(&self) -> impl Iterator<Item = HomologyMap> + '_ {
        let g = self.form.genus();
        self.elements.iter().map(move |&m| {
            let images = (0..self.form.dim())
                .map(|i| Gf2Vector::from_word(g, (m >> (SLOT * i)) & 0xff))
                .collect();
            HomologyMap::new_unchecked(Arc::clone(&self.form), images)
        })
    }

    /// Orbits of the whole group on spin structures, computed element by
    /// element; sizes in order of least representative.
    pub fn structure_orbits(&self) -> Vec<StructureOrbit> {
        let g = self.form.genus();
        let packed = PackedForm::new(&self.form).expect("small genus");
        let actions: Vec<PackedAction> = self
            .iter()
            .map(|h| PackedAction::new(&h, &packed))
            .collect();
        let total = 1u64 << (2 * g);
        let mut seen = vec![false; total as usize];
        let mut out = Vec::new();
        for v in 0..total {
            if seen[v as usize] {
                continue;
            }
            let orbit: HashSet<u64> = actions.iter().map(|a| a.pullback(v)).collect();
            for &w in &orbit {
                seen[w as usize] = true;
            }
            out.push(StructureOrbit {
                representative: SpinStructure::from_index(Arc::clone(&self.form), v)
                    .expect("in range"),
                size: orbit.len() as u64,
                arf: ArfClass::from_bit(packed.arf(v)),
            });
        }
        out
    }
}

/// An orbit of a (non-cyclic) group on spin structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureOrbit {
    pub representative: SpinStructure,
    pub size: u64,
    pub arf: ArfClass,
}

/// Orbits of the group generated by all transvections on spin structures,
/// found by breadth-first search over the generators. For a finite group
/// these coincide with the orbits of the full group.
pub fn transvection_orbits(
    form: &Arc<IntersectionForm>,
    cutoff: Cutoff,
) -> Result<Vec<StructureOrbit>> {
    let g = form.genus();
    cutoff.check(g)?;
    let packed = PackedForm::new(form).expect("cutoff keeps genus <= 31");
    let dim = form.dim();
    let generators: Vec<PackedAction> = (1u64..(1 << dim))
        .map(|u| {
            transvection(form, &Gf2Vector::from_word(g, u)).map(|t| PackedAction::new(&t, &packed))
        })
        .collect::<Result<_>>()?;
    let total = 1u64 << dim;
    let mut seen = vec![false; total as usize];
    let mut out = Vec::new();
    for start in 0..total {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut size = 1u64;
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for t in &generators {
                let next = t.pullback(cur);
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    size += 1;
                    queue.push_back(next);
                }
            }
        }
        out.push(StructureOrbit {
            representative: SpinStructure::from_index(Arc::clone(form), start)?,
            size,
            arf: ArfClass::from_bit(packed.arf(start)),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eta, tau, v, wiman};
    use crate::gf2::standard_form;
    use crate::spin::enumerate_all;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn form(g: usize) -> Arc<IntersectionForm> {
        Arc::new(standard_form(g).unwrap())
    }

    fn q(form: &Arc<IntersectionForm>, idx: u64) -> SpinStructure {
        SpinStructure::from_index(Arc::clone(form), idx).unwrap()
    }

    fn random_symplectic(form: &Arc<IntersectionForm>, rng: &mut ChaCha8Rng) -> HomologyMap {
        let g = form.genus();
        let mut h = HomologyMap::identity(Arc::clone(form));
        for _ in 0..(4 * g + 4) {
            let u = rng.gen_range(1u64..(1 << (2 * g)));
            h = h
                .compose(&transvection(form, &Gf2Vector::from_word(g, u)).unwrap())
                .unwrap();
        }
        h
    }

    /// Fixed set by pulling back every structure through `evaluate`.
    fn naive_fixed(f: &HomologyMap) -> Vec<SpinStructure> {
        enumerate_all(f.form(), Cutoff::default())
            .unwrap()
            .filter(|s| is_invariant(f, s).unwrap())
            .collect()
    }

    #[test]
    fn pullback_examples() {
        let f1 = form(1);
        let id = HomologyMap::identity(f1.clone());
        for idx in 0..4 {
            assert_eq!(pullback(&id, &q(&f1, idx)).unwrap(), q(&f1, idx));
        }
        // swap x_1 <-> x_2 takes (0,1) to (1,0)
        let swap = v(1).unwrap();
        let src = q(swap.form(), 0b10);
        assert_eq!(pullback(&swap, &src).unwrap().index(), Some(0b01));
    }

    #[test]
    fn pullback_agrees_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in 1..=3 {
            let f = form(g);
            for _ in 0..10 {
                let h = random_symplectic(&f, &mut rng);
                let s = q(&f, rng.gen_range(0..(1u64 << (2 * g))));
                let p = pullback(&h, &s).unwrap();
                for x in 0..(1u64 << (2 * g)) {
                    let x = Gf2Vector::from_word(g, x);
                    assert_eq!(
                        p.evaluate(&x).unwrap(),
                        s.evaluate(&h.apply(&x).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn contravariance_exhaustive_genus_one() {
        let f1 = form(1);
        let group: Vec<_> = SymplecticGroup::generate(&f1).unwrap().iter().collect();
        assert_eq!(group.len(), 6);
        for a in &group {
            for b in &group {
                let ab = a.compose(b).unwrap();
                for idx in 0..4 {
                    let s = q(&f1, idx);
                    let lhs = pullback(&ab, &s).unwrap();
                    let rhs = pullback(b, &pullback(a, &s).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn contravariance_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in 2..=3 {
            let f = form(g);
            for _ in 0..30 {
                let a = random_symplectic(&f, &mut rng);
                let b = random_symplectic(&f, &mut rng);
                let s = q(&f, rng.gen_range(0..(1u64 << (2 * g))));
                let lhs = pullback(&a.compose(&b).unwrap(), &s).unwrap();
                let rhs = pullback(&b, &pullback(&a, &s).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(arf(&lhs), arf(&s));
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let t = tau(1).unwrap();
        let f1 = Arc::clone(t.form());
        assert!(is_invariant(&t, &q(&f1, 0b11)).unwrap());
        assert!(!is_invariant(&t, &q(&f1, 0b10)).unwrap());
        let id = eta(1).unwrap();
        for idx in 0..4 {
            assert!(is_invariant(&id, &q(&f1, idx)).unwrap());
        }
    }

    #[test]
    fn invariant_structure_examples() {
        let r = invariant_structures(&tau(1).unwrap()).unwrap();
        assert!(r.fixed_bounded.is_empty());
        assert_eq!(r.fixed_unbounded.len(), 1);
        assert_eq!(r.fixed_unbounded[0].index(), Some(0b11));

        let r = invariant_structures(&v(1).unwrap()).unwrap();
        let all: Vec<_> = r
            .fixed_bounded
            .iter()
            .chain(&r.fixed_unbounded)
            .map(|s| s.index().unwrap())
            .collect();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&0) && all.contains(&3));

        let r = invariant_structures(&eta(1).unwrap()).unwrap();
        assert_eq!((r.fixed_bounded.len(), r.fixed_unbounded.len()), (3, 1));
        assert_eq!(r.map_order, MapOrder::Finite(1));
    }

    #[test]
    fn scan_solver_and_naive_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in 1..=3 {
            let f = form(g);
            for _ in 0..15 {
                let h = random_symplectic(&f, &mut rng);
                let naive = naive_fixed(&h);
                let report = invariant_structures(&h).unwrap();
                let mut scanned: Vec<_> = report
                    .fixed_bounded
                    .iter()
                    .chain(&report.fixed_unbounded)
                    .cloned()
                    .collect();
                scanned.sort();
                assert_eq!(scanned, naive);
                let solved = fixed_from_space(&h).unwrap();
                assert_eq!(solved, naive);
                let forced = invariant_structures_with(&h, Cutoff::new(0).unwrap()).unwrap();
                assert_eq!(forced, report);
            }
        }
    }

    #[test]
    fn extendability_examples() {
        assert!(is_extendable(&wiman(4).unwrap()).unwrap().extendable);
        assert!(!is_extendable(&wiman(1).unwrap()).unwrap().extendable);
        assert!(!is_extendable(&v(2).unwrap()).unwrap().extendable);
        let e = is_extendable(&eta(1).unwrap()).unwrap();
        assert_eq!(e.witness.unwrap().index(), Some(0));
    }

    #[test]
    fn witness_is_least_bounded_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for g in 1..=3 {
            let f = form(g);
            for _ in 0..10 {
                let h = random_symplectic(&f, &mut rng);
                let expected = naive_fixed(&h)
                    .into_iter()
                    .find(|s| arf(s) == ArfClass::Bounded);
                let got = is_extendable(&h).unwrap();
                assert_eq!(got.witness, expected);
                assert_eq!(
                    is_extendable_with(&h, Cutoff::new(0).unwrap()).unwrap(),
                    got
                );
            }
        }
    }

    #[test]
    fn extendability_above_cutoff_uses_solver() {
        // genus 16 is beyond the default scan cutoff
        for g in [15usize, 16, 19, 20] {
            let w = is_extendable(&wiman(g).unwrap()).unwrap();
            assert_eq!(w.extendable, g % 4 == 0 || g % 4 == 3, "g={g}");
            let vv = is_extendable(&v(g).unwrap()).unwrap();
            assert_eq!(vv.extendable, g % 4 != 2, "g={g}");
        }
        assert!(matches!(
            invariant_structures(&eta(15).unwrap()),
            Err(Error::CutoffExceeded { .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        let t = tau(2).unwrap();
        let orbs = orbits(&t, ArfClass::Bounded).unwrap();
        assert_eq!(orbs.iter().map(|o| o.size).sum::<u64>(), 10);
        assert!(orbs.iter().all(|o| o.size == 1 || o.size == 5));
        assert_eq!(orbs.iter().filter(|o| o.size == 1).count() % 5, 0);
        for o in &orbs {
            assert_eq!(o.size * o.stabilizer_order, 5);
        }
        let id = eta(2).unwrap();
        for class in [ArfClass::Bounded, ArfClass::Unbounded] {
            assert!(orbits(&id, class).unwrap().iter().all(|o| o.size == 1));
        }
    }

    #[test]
    fn orbit_stabilizer_for_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for g in 1..=3 {
            let f = form(g);
            for _ in 0..10 {
                let h = random_symplectic(&f, &mut rng);
                let order = map_order(&h).finite().unwrap();
                for class in [ArfClass::Bounded, ArfClass::Unbounded] {
                    let orbs = orbits(&h, class).unwrap();
                    let expected = if class == ArfClass::Bounded {
                        (1u64 << (2 * g - 1)) + (1 << (g - 1))
                    } else {
                        (1u64 << (2 * g - 1)) - (1 << (g - 1))
                    };
                    assert_eq!(orbs.iter().map(|o| o.size).sum::<u64>(), expected);
                    for o in &orbs {
                        assert_eq!(o.size * o.stabilizer_order, order);
                        assert_eq!(arf(&o.representative), class);
                    }
                }
            }
        }
    }

    #[test]
    fn pgroup_examples() {
        let r = pgroup_fixed_point_guarantee(&tau(1).unwrap(), 3, 1, ArfClass::Bounded).unwrap();
        assert!(!r.guaranteed);
        assert!(r.fixed.is_empty());

        let r = pgroup_fixed_point_guarantee(&tau(2).unwrap(), 5, 1, ArfClass::Bounded).unwrap();
        assert!(!r.guaranteed);
        assert!(r.fixed.is_empty());

        let group = SymplecticGroup::generate(&form(2)).unwrap();
        let mut seen = 0;
        for h in group.iter().filter(|h| map_order(h) == MapOrder::Finite(3)) {
            let r = pgroup_fixed_point_guarantee(&h, 3, 1, ArfClass::Bounded).unwrap();
            assert!(r.guaranteed);
            assert!(!r.fixed.is_empty());
            seen += 1;
        }
        assert!(seen > 0);

        assert!(matches!(
            pgroup_fixed_point_guarantee(&tau(2).unwrap(), 3, 1, ArfClass::Bounded),
            Err(Error::OrderMismatch { order: 5, .. })
        ));
        assert!(matches!(
            pgroup_fixed_point_guarantee(&tau(2).unwrap(), 4, 1, ArfClass::Bounded),
            Err(Error::NotOddPrime(4))
        ));
    }

    #[test]
    fn conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = tau(2).unwrap();
        let id = HomologyMap::identity(Arc::clone(t.form()));
        assert_eq!(conjugate(&t, &id).unwrap(), t);
        for g in 1..=3 {
            let f = form(g);
            for kind in crate::families::FamilyKind::ALL {
                let base = crate::families::family_map(kind, g).unwrap();
                for _ in 0..5 {
                    let h = random_symplectic(&f, &mut rng);
                    let c = conjugate(&base, &h).unwrap();
                    assert_eq!(map_order(&c), map_order(&base));
                    let (b0, u0) = invariant_counts(&base, Cutoff::default()).unwrap();
                    let (b1, u1) = invariant_counts(&c, Cutoff::default()).unwrap();
                    assert_eq!((b0, u0), (b1, u1));
                    assert_eq!(
                        is_extendable(&c).unwrap().extendable,
                        is_extendable(&base).unwrap().extendable
                    );
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(SymplecticGroup::generate(&form(1)).unwrap().len(), 6);
        assert_eq!(SymplecticGroup::generate(&form(2)).unwrap().len(), 720);
        assert!(matches!(
            SymplecticGroup::generate(&form(4)),
            Err(Error::ClosureTooLarge { .. })
        ));
        let group = SymplecticGroup::generate(&form(2)).unwrap();
        assert!(group.iter().next().unwrap().is_identity());
        assert!(group
            .iter()
            .all(|h| crate::gf2::is_form_preserving(h.images(), h.form())));
    }

    #[test]
    fn closure_orbits_match_generator_orbits() {
        for g in 1..=2 {
            let f = form(g);
            let group = SymplecticGroup::generate(&f).unwrap();
            let mut a = group.structure_orbits();
            let mut b = transvection_orbits(&f, Cutoff::default()).unwrap();
            a.sort_by(|x, y| x.representative.cmp(&y.representative));
            b.sort_by(|x, y| x.representative.cmp(&y.representative));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn transvection_orbit_sizes() {
        for (g, sizes) in [(1, (3, 1)), (2, (10, 6)), (3, (36, 28))] {
            let orbs = transvection_orbits(&form(g), Cutoff::default()).unwrap();
            assert_eq!(orbs.len(), 2);
            let b = orbs.iter().find(|o| o.arf == ArfClass::Bounded).unwrap();
            let u = orbs.iter().find(|o| o.arf == ArfClass::Unbounded).unwrap();
            assert_eq!((b.size, u.size), sizes);
        }
    }

    #[test]
    fn fixed_point_report_json() {
        let r = invariant_structures(&tau(1).unwrap()).unwrap();
        let j = r.to_json();
        assert_eq!(
            j,
            serde_json::json!({
                "genus": 1,
                "map_order": 3,
                "fixed_bounded": [],
                "fixed_unbounded": ["q:3"],
                "extendable": false
            })
        );
    }
}
