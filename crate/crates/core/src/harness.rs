//! Exhaustive verification routines. Each check recomputes a finite
//! statement over a genus range and records every disagreement.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::action::{invariant_counts, invariant_structures, transvection_orbits, SymplecticGroup};
use crate::error::{Error, Result};
use crate::families::{family_map, FamilyKind};
use crate::gf2::{map_order, Gf2Vector, HomologyMap, IntersectionForm, MapOrder};
use crate::number_theory::{
    bg_card, class_sums, closed_form_check, divides_bg, multiplicative_order, primes_8k7,
    quadratic_residue, ug_card, zero_count_prediction,
};
use crate::spin::{arf, census, zero_count, ArfClass, Cutoff, SpinStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Cardinality,
    Bu,
    InvariantCounts,
    ZeroFormulas,
    ClassSums,
    Extendability,
    Pgroup,
    Transitivity,
    Divisibility,
}

impl CheckId {
    pub const ALL: [CheckId; 9] = [
        CheckId::Cardinality,
        CheckId::Bu,
        CheckId::InvariantCounts,
        CheckId::ZeroFormulas,
        CheckId::ClassSums,
        CheckId::Extendability,
        CheckId::Pgroup,
        CheckId::Transitivity,
        CheckId::Divisibility,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CheckId::Cardinality => "cardinality",
            CheckId::Bu => "bu",
            CheckId::InvariantCounts => "invariant_counts",
            CheckId::ZeroFormulas => "zero_formulas",
            CheckId::ClassSums => "class_sums",
            CheckId::Extendability => "extendability",
            CheckId::Pgroup => "pgroup",
            CheckId::Transitivity => "transitivity",
            CheckId::Divisibility => "divisibility",
        }
    }

    /// The statement the check recomputes.
    pub fn anchor(self) -> &'static str {
        match self {
            CheckId::Cardinality => "|B_g| = 2^(2g-1) + 2^(g-1) and |U_g| = 2^(2g-1) - 2^(g-1)",
            CheckId::Bu => "q has Arf 0 (resp. 1) iff it vanishes on exactly 2^(2g-1) + 2^(g-1) (resp. 2^(2g-1) - 2^(g-1)) classes",
            CheckId::InvariantCounts => "tau_g fixes exactly one structure, constant g mod 2 on x_1..x_(2g+1); v_g fixes exactly the two constant structures",
            CheckId::ZeroFormulas => "q constant 0 on the orbit vanishes on A_0 + A_1 classes; constant 1 on A_0 + A_3",
            CheckId::ClassSums => "A_0 + A_1 + A_2 + A_3 = 2^(2g); A_0 - A_2 + i(A_1 - A_3) = (1 + i)^(2g)",
            CheckId::Extendability => "bounded invariant structure exists for w_g and tau_g iff g = 0, 3 mod 4, for v_g iff g = 0, 1, 3 mod 4; w_g and tau_g fix the same structures",
            CheckId::Pgroup => "for f of order p^m, p odd: p not dividing |B_g| (|U_g|) forces a bounded (unbounded) fixed structure; fixed counts = class size mod p",
            CheckId::Transitivity => "the symplectic group acts on spin structures with exactly two orbits, B_g and U_g",
            CheckId::Divisibility => "3 | |B_g| iff g odd; 5 | |B_g| iff g = 2 mod 4; primes 7 mod 8 divide no 2^g + 1",
        }
    }

    /// Largest genus each check runs at.
    pub fn cap(self) -> usize {
        match self {
            CheckId::Cardinality => 8,
            CheckId::Bu => 6,
            CheckId::InvariantCounts => 8,
            CheckId::ZeroFormulas => 6,
            CheckId::ClassSums => 60,
            CheckId::Extendability => 12,
            CheckId::Pgroup => 2,
            CheckId::Transitivity => 3,
            CheckId::Divisibility => 40,
        }
    }

    pub fn run(self, genus_to: usize) -> VerificationReport {
        match self {
            CheckId::Cardinality => verify_cardinality(genus_to),
            CheckId::Bu => verify_bu(genus_to),
            CheckId::InvariantCounts => verify_invariant_counts(genus_to),
            CheckId::ZeroFormulas => verify_zero_formulas(genus_to),
            CheckId::ClassSums => verify_class_sums(genus_to),
            CheckId::Extendability => verify_extendability(genus_to),
            CheckId::Pgroup => verify_pgroup(genus_to),
            CheckId::Transitivity => verify_transitivity(genus_to),
            CheckId::Divisibility => verify_thm13_divisibility(genus_to),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = CheckId::ALL.iter().map(|c| c.id()).collect();
                format!(
                    "unknown check {s:?}; expected all or one of {}",
                    names.join(", ")
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub genus: usize,
    pub expected: String,
    pub observed: String,
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub anchor: String,
    /// Effective inclusive range after clamping to the check's cap.
    pub genus_range: [usize; 2],
    pub status: Status,
    pub mismatches: Vec<Mismatch>,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Per-genus evidence, kept out of the JSON report.
    #[serde(skip)]
    pub observed: Vec<(usize, String)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

struct Run {
    check: CheckId,
    lo: usize,
    hi: usize,
    note: Option<String>,
    mismatches: Vec<Mismatch>,
    observed: Vec<(usize, String)>,
    start: Instant,
}

impl Run {
    fn new(check: CheckId, genus_to: usize) -> Self {
        let cap = check.cap();
        let hi = genus_to.clamp(1, cap);
        let note =
            (genus_to > cap).then(|| format!("requested genus_to {genus_to} clamped to cap {cap}"));
        Self {
            check,
            lo: 1,
            hi,
            note,
            mismatches: Vec::new(),
            observed: Vec::new(),
            start: Instant::now(),
        }
    }

    fn genera(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }

    fn expect<T: PartialEq + fmt::Debug>(&mut self, genus: usize, expected: T, observed: T) {
        if expected != observed {
            self.mismatch(genus, format!("{expected:?}"), format!("{observed:?}"));
        }
    }

    fn mismatch(&mut self, genus: usize, expected: impl Into<String>, observed: impl Into<String>) {
        self.mismatches.push(Mismatch {
            genus,
            expected: expected.into(),
            observed: observed.into(),
        });
    }

    fn error(&mut self, genus: usize, context: &str, err: Error) {
        self.mismatch(genus, context.to_string(), format!("error: {err}"));
    }

    fn observe(&mut self, genus: usize, what: impl Into<String>) {
        self.observed.push((genus, what.into()));
    }

    fn finish(self) -> VerificationReport {
        VerificationReport {
            check_id: self.check.id().to_string(),
            anchor: self.check.anchor().to_string(),
            genus_range: [self.lo, self.hi],
            status: if self.mismatches.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            mismatches: self.mismatches,
            elapsed: self.start.elapsed(),
            note: self.note,
            observed: self.observed,
        }
    }
}

fn form(genus: usize) -> Result<Arc<IntersectionForm>> {
    Ok(Arc::new(IntersectionForm::standard(genus)?))
}

pub fn verify_cardinality(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::Cardinality, genus_to);
    for g in run.genera() {
        let observed = form(g).and_then(|f| census(&f, Cutoff::default()));
        match (observed, bg_card(g), ug_card(g)) {
            (Ok(c), Ok(b), Ok(u)) => {
                run.observe(g, format!("({}, {})", c.bounded, c.unbounded));
                run.expect(g, (b, u), (c.bounded as u128, c.unbounded as u128));
            }
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => run.error(g, "census", e),
        }
    }
    run.finish()
}

pub fn verify_bu(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::Bu, genus_to);
    for g in run.genera() {
        let f = match form(g) {
            Ok(f) => f,
            Err(e) => {
                run.error(g, "form", e);
                continue;
            }
        };
        let hi = (1u64 << (2 * g - 1)) + (1 << (g - 1));
        let lo = (1u64 << (2 * g - 1)) - (1 << (g - 1));
        let bad: Vec<Mismatch> = (0..(1u64 << (2 * g)))
            .into_par_iter()
            .filter_map(|idx| {
                let q = SpinStructure::from_index(Arc::clone(&f), idx).ok()?;
                let zc = zero_count(&q).ok()?;
                let class = arf(&q);
                let expected = match class {
                    ArfClass::Bounded => hi,
                    ArfClass::Unbounded => lo,
                };
                (zc != expected).then(|| Mismatch {
                    genus: g,
                    expected: format!("{} vanishes on {expected} ({class})", q.label()),
                    observed: format!("{zc}"),
                })
            })
            .collect();
        run.observe(g, format!("{} structures checked", 1u64 << (2 * g)));
        run.mismatches.extend(bad);
    }
    run.finish()
}

pub fn verify_invariant_counts(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::InvariantCounts, genus_to);
    for g in run.genera() {
        let outcome = (|| -> Result<(Vec<SpinStructure>, Vec<SpinStructure>)> {
            let fix = |m: HomologyMap| -> Result<Vec<SpinStructure>> {
                let r = invariant_structures(&m)?;
                let mut all: Vec<_> = r
                    .fixed_bounded
                    .into_iter()
                    .chain(r.fixed_unbounded)
                    .collect();
                all.sort();
                Ok(all)
            };
            Ok((
                fix(family_map(FamilyKind::Tau, g)?)?,
                fix(family_map(FamilyKind::V, g)?)?,
            ))
        })();
        let (tau_fixed, v_fixed) = match outcome {
            Ok(x) => x,
            Err(e) => {
                run.error(g, "fixed sets", e);
                continue;
            }
        };
        let labels = |s: &[SpinStructure]| s.iter().map(SpinStructure::label).collect::<Vec<_>>();
        let constant =
            |bit: bool| Gf2Vector::from_bits(g, std::iter::repeat_n(bit, 2 * g)).unwrap();
        let tau_expected = vec![constant(g % 2 == 1).to_hex()];
        let tau_observed: Vec<_> = tau_fixed
            .iter()
            .map(|q| q.basis_values().to_hex())
            .collect();
        run.expect(g, tau_expected, tau_observed);
        let v_expected = vec![constant(false).to_hex(), constant(true).to_hex()];
        let v_observed: Vec<_> = v_fixed.iter().map(|q| q.basis_values().to_hex()).collect();
        run.expect(g, v_expected, v_observed);
        run.observe(
            g,
            format!("tau {:?}, v {:?}", labels(&tau_fixed), labels(&v_fixed)),
        );
    }
    run.finish()
}

pub fn verify_zero_formulas(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::ZeroFormulas, genus_to);
    for g in run.genera() {
        for bit in [false, true] {
            let observed = form(g).and_then(|f| zero_count(&SpinStructure::constant(f, bit)));
            match (observed, zero_count_prediction(g, bit)) {
                (Ok(z), Ok(p)) => {
                    run.observe(g, format!("constant {}: {z} zeros", bit as u8));
                    run.expect(g, p, z as u128);
                }
                (Err(e), _) | (_, Err(e)) => run.error(g, "zero count", e),
            }
        }
    }
    run.finish()
}

pub fn verify_class_sums(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::ClassSums, genus_to);
    for g in run.genera() {
        let (s, closed, bg) = match (class_sums(g), closed_form_check(g), bg_card(g)) {
            (Ok(s), Ok(c), Ok(b)) => (s, c, b),
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => {
                run.error(g, "class sums", e);
                continue;
            }
        };
        run.expect(g, 1u128 << (2 * g), s.total());
        if !closed {
            run.mismatch(g, "closed-form differences", format!("{:?}", s.a));
        }
        run.expect(g, g % 4 <= 1, s.a[0] + s.a[1] == bg);
        run.expect(g, g % 4 == 0 || g % 4 == 3, s.a[0] + s.a[3] == bg);
    }
    run.finish()
}

/// Builds a family map; swapped out by mutation tests.
pub type MapSource<'a> = &'a (dyn Fn(FamilyKind, usize) -> Result<HomologyMap> + Sync);

pub fn verify_extendability(genus_to: usize) -> VerificationReport {
    verify_extendability_with(genus_to, &family_map)
}

pub fn verify_extendability_with(genus_to: usize, source: MapSource<'_>) -> VerificationReport {
    let mut run = Run::new(CheckId::Extendability, genus_to);
    for g in run.genera() {
        let mut fixed_sets = Vec::new();
        for (kind, expected) in [
            (FamilyKind::Wiman, matches!(g % 4, 0 | 3)),
            (FamilyKind::V, matches!(g % 4, 0 | 1 | 3)),
            (FamilyKind::Tau, matches!(g % 4, 0 | 3)),
        ] {
            match source(kind, g).and_then(|m| invariant_structures(&m)) {
                Ok(report) => {
                    if report.extendable() != expected {
                        run.mismatch(
                            g,
                            format!("{kind} extendable={expected}"),
                            format!("extendable={}", report.extendable()),
                        );
                    }
                    run.observe(
                        g,
                        format!(
                            "{kind}: extendable={} fixed {}+{}",
                            report.extendable(),
                            report.fixed_bounded.len(),
                            report.fixed_unbounded.len()
                        ),
                    );
                    if kind != FamilyKind::V {
                        fixed_sets.push(report);
                    }
                }
                Err(e) => run.error(g, kind.name(), e),
            }
        }
        if let [w, t] = fixed_sets.as_slice() {
            if w.fixed_bounded != t.fixed_bounded || w.fixed_unbounded != t.fixed_unbounded {
                run.mismatch(
                    g,
                    format!("wiman fixed set {:?}", w.to_json()),
                    format!("tau fixed set {:?}", t.to_json()),
                );
            }
        }
    }
    run.finish()
}

/// `Some((p, m))` when `n = p^m` for an odd prime `p`.
fn odd_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 3 || n.is_multiple_of(2) {
        return None;
    }
    let p = (3..=n).find(|d| n.is_multiple_of(*d))?;
    let mut rest = n;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

pub fn verify_pgroup(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::Pgroup, genus_to);
    for g in run.genera() {
        let group = match form(g).and_then(|f| SymplecticGroup::generate(&f)) {
            Ok(group) => group,
            Err(e) => {
                run.error(g, "group closure", e);
                continue;
            }
        };
        let expected_order = match g {
            1 => 6,
            2 => 720,
            _ => 1_451_520,
        };
        run.expect(g, expected_order, group.len());
        let (bg, ug) = (bg_card(g).unwrap() as u64, ug_card(g).unwrap() as u64);
        let mut tested = 0;
        for h in group.iter() {
            let order = match map_order(&h) {
                MapOrder::Finite(n) => n,
                MapOrder::OverCap => {
                    run.mismatch(g, "finite order", "over cap");
                    continue;
                }
            };
            let Some((p, _)) = odd_prime_power(order) else {
                continue;
            };
            tested += 1;
            let (fb, fu) = match invariant_counts(&h, Cutoff::default()) {
                Ok(c) => c,
                Err(e) => {
                    run.error(g, "fixed counts", e);
                    continue;
                }
            };
            let label = crate::matrix_file::format(&h).replace('\n', "; ");
            if bg % p != 0 && fb == 0 {
                run.mismatch(
                    g,
                    format!("bounded fixed structure for order {order}"),
                    label.clone(),
                );
            }
            if ug % p != 0 && fu == 0 {
                run.mismatch(
                    g,
                    format!("unbounded fixed structure for order {order}"),
                    label.clone(),
                );
            }
            if fb % p != bg % p || fu % p != ug % p {
                run.mismatch(
                    g,
                    format!("fixed counts = ({bg}, {ug}) mod {p}"),
                    format!("({fb}, {fu}) for {label}"),
                );
            }
        }
        // tau_g has order 2g + 1 dividing |B_g| for g = 1, 2: no bounded fixed point.
        match family_map(FamilyKind::Tau, g).and_then(|t| invariant_counts(&t, Cutoff::default())) {
            Ok((fb, _)) => run.expect(g, 0, fb),
            Err(e) => run.error(g, "tau fixed counts", e),
        }
        run.observe(
            g,
            format!(
                "|group| = {}, {tested} odd prime-power elements",
                group.len()
            ),
        );
    }
    run.finish()
}

pub fn verify_transitivity(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::Transitivity, genus_to);
    for g in run.genera() {
        let orbits = match form(g).and_then(|f| transvection_orbits(&f, Cutoff::default())) {
            Ok(o) => o,
            Err(e) => {
                run.error(g, "orbits", e);
                continue;
            }
        };
        let mut observed: Vec<(ArfClass, u64)> = orbits.iter().map(|o| (o.arf, o.size)).collect();
        observed.sort();
        let expected = vec![
            (ArfClass::Bounded, bg_card(g).unwrap() as u64),
            (ArfClass::Unbounded, ug_card(g).unwrap() as u64),
        ];
        run.observe(g, format!("{observed:?}"));
        run.expect(g, expected, observed);
    }
    run.finish()
}

/// Bound for the family of primes `7 mod 8` that is checked.
pub const PRIME_SCAN_LIMIT: u64 = 10_000;

pub fn verify_thm13_divisibility(genus_to: usize) -> VerificationReport {
    let mut run = Run::new(CheckId::Divisibility, genus_to);
    let primes = primes_8k7(PRIME_SCAN_LIMIT);
    for p in &primes {
        match (multiplicative_order(2, *p), quadratic_residue(2, *p)) {
            (Ok(ord), Ok(qr)) => {
                if ord % 2 == 0 || !qr {
                    run.mismatch(
                        0,
                        format!("p={p}: odd ord2, 2 a square"),
                        format!("ord2={ord} qr={qr}"),
                    );
                }
            }
            (Err(e), _) | (_, Err(e)) => run.error(0, "order of 2", e),
        }
    }
    for g in run.genera() {
        let gg = g as u64;
        let outcome = (|| -> Result<()> {
            run.expect(g, g % 2 == 1, divides_bg(3, gg)?);
            run.expect(g, g % 4 == 2, divides_bg(5, gg)?);
            let dividing: Vec<u64> = primes
                .iter()
                .copied()
                .filter(|&p| divides_bg(p, gg).unwrap_or(true))
                .collect();
            run.expect(g, Vec::<u64>::new(), dividing);
            Ok(())
        })();
        if let Err(e) = outcome {
            run.error(g, "divisibility", e);
        }
    }
    run.observe(
        0,
        format!("{} primes = 7 mod 8 below {PRIME_SCAN_LIMIT}", primes.len()),
    );
    run.finish()
}

/// Runs the selected checks (all when `checks` is empty), each clamped to
/// its cap; `genus_to = None` runs each check at its cap.
pub fn run_checks(checks: &[CheckId], genus_to: Option<usize>) -> Vec<VerificationReport> {
    let selected: Vec<CheckId> = if checks.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        checks.to_vec()
    };
    selected
        .par_iter()
        .map(|c| c.run(genus_to.unwrap_or(c.cap())))
        .collect()
}

pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes the reports as JSON through a temporary file in the target
/// directory, so a failed write leaves nothing at `path`.
pub fn write_reports(reports: &[VerificationReport], path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(reports_to_json(reports).as_bytes())
        .map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs every check and, when `output` is given, writes the JSON report.
pub fn run_all(genus_to: Option<usize>, output: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let reports = run_checks(&[], genus_to);
    if let Some(path) = output {
        write_reports(&reports, path)?;
    }
    Ok(reports)
}
