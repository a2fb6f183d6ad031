//! Exit criteria. Every comparison is exact; each criterion also has a
//! wall-clock budget. One PASS/FAIL line is printed per criterion,
//! straight to stdout so it shows without `--nocapture`.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use spinform_core::action::{invariant_counts, transvection_orbits, SymplecticGroup};
use spinform_core::families::{family_map, FamilyKind};
use spinform_core::gf2::{Gf2Vector, HomologyMap, IntersectionForm, MapOrder};
use spinform_core::harness::{self, verify_extendability_with};
use spinform_core::number_theory::{
    bg_card, class_sums, closed_form_check, divides_bg, multiplicative_order, primes_8k7, ug_card,
    zero_count_prediction,
};
use spinform_core::spin::{arf, census, zero_count, ArfClass, Cutoff, SpinStructure};
use spinform_core::{invariant_structures, is_extendable, map_order, Error};

fn form(g: usize) -> Arc<IntersectionForm> {
    Arc::new(IntersectionForm::standard(g).unwrap())
}

fn bg(g: usize) -> u64 {
    bg_card(g).unwrap() as u64
}

fn ug(g: usize) -> u64 {
    ug_card(g).unwrap() as u64
}

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1_census() -> Outcome {
    for g in 1..=8 {
        let c = census(&form(g), Cutoff::default()).map_err(|e| e.to_string())?;
        let expected = (
            (1u64 << (2 * g - 1)) + (1 << (g - 1)),
            (1u64 << (2 * g - 1)) - (1 << (g - 1)),
        );
        ensure((c.bounded, c.unbounded) == expected, || {
            format!(
                "g={g}: census {:?}, expected {expected:?}",
                (c.bounded, c.unbounded)
            )
        })?;
    }
    Ok(())
}

fn criterion_2_zero_count_vs_arf() -> Outcome {
    for g in 1..=6 {
        let f = form(g);
        for idx in 0..(1u64 << (2 * g)) {
            let q = SpinStructure::from_index(Arc::clone(&f), idx).unwrap();
            let zc = zero_count(&q).unwrap();
            let class = arf(&q);
            ensure(zc == bg(g) || zc == ug(g), || {
                format!("g={g} {}: {zc} zeros", q.label())
            })?;
            ensure((zc == bg(g)) == (class == ArfClass::Bounded), || {
                format!("g={g} {}: {zc} zeros but Arf {class}", q.label())
            })?;
        }
    }
    Ok(())
}

fn fixed(kind: FamilyKind, g: usize) -> Vec<SpinStructure> {
    let r = invariant_structures(&family_map(kind, g).unwrap()).unwrap();
    let mut all: Vec<_> = r
        .fixed_bounded
        .into_iter()
        .chain(r.fixed_unbounded)
        .collect();
    all.sort();
    all
}

fn criterion_3_invariant_counts() -> Outcome {
    for g in 1..=8 {
        let f = form(g);
        let t = fixed(FamilyKind::Tau, g);
        ensure(
            t == vec![SpinStructure::constant(Arc::clone(&f), g % 2 == 1)],
            || format!("g={g}: tau fixes {t:?}"),
        )?;
        let v = fixed(FamilyKind::V, g);
        let expected = vec![
            SpinStructure::constant(Arc::clone(&f), false),
            SpinStructure::constant(Arc::clone(&f), true),
        ];
        ensure(v == expected, || format!("g={g}: v fixes {v:?}"))?;
    }
    Ok(())
}

fn criterion_4_extendability_tables() -> Outcome {
    let verdicts = |kind| -> Vec<usize> {
        (1..=12)
            .filter(|&g| {
                is_extendable(&family_map(kind, g).unwrap())
                    .unwrap()
                    .extendable
            })
            .collect()
    };
    let wiman = verdicts(FamilyKind::Wiman);
    ensure(wiman == vec![3, 4, 7, 8, 11, 12], || {
        format!("wiman true at {wiman:?}")
    })?;
    let v_false: Vec<usize> = {
        let yes = verdicts(FamilyKind::V);
        (1..=12).filter(|g| !yes.contains(g)).collect()
    };
    ensure(v_false == vec![2, 6, 10], || {
        format!("v false at {v_false:?}")
    })?;
    for g in 1..=8 {
        ensure(
            fixed(FamilyKind::Wiman, g) == fixed(FamilyKind::Tau, g),
            || format!("g={g}: wiman and tau fixed sets differ"),
        )?;
    }
    Ok(())
}

fn criterion_5_zero_formulas() -> Outcome {
    for g in 1..=6 {
        let f = form(g);
        for bit in [false, true] {
            let z = zero_count(&SpinStructure::constant(Arc::clone(&f), bit)).unwrap() as u128;
            let p = zero_count_prediction(g, bit).unwrap();
            ensure(z == p, || {
                format!("g={g} constant {}: {z} zeros, predicted {p}", bit as u8)
            })?;
        }
    }
    for g in 1..=60 {
        let s = class_sums(g).unwrap();
        ensure(s.total() == 1u128 << (2 * g), || {
            format!("g={g}: sums total {}", s.total())
        })?;
        ensure(closed_form_check(g).unwrap(), || {
            format!("g={g}: closed forms fail for {:?}", s.a)
        })?;
        let b = bg_card(g).unwrap();
        ensure((s.a[0] + s.a[1] == b) == matches!(g % 4, 0 | 1), || {
            format!("g={g}: A0+A1")
        })?;
        ensure((s.a[0] + s.a[3] == b) == matches!(g % 4, 0 | 3), || {
            format!("g={g}: A0+A3")
        })?;
    }
    Ok(())
}

fn odd_prime_power(n: u64) -> Option<u64> {
    if n < 3 || n.is_multiple_of(2) {
        return None;
    }
    let p = (3..=n).find(|d| n.is_multiple_of(*d))?;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

fn criterion_6_sp4_sweep() -> Outcome {
    let group = SymplecticGroup::generate(&form(2)).unwrap();
    ensure(group.len() == 720, || {
        format!("|Sp(4,2)| = {}", group.len())
    })?;
    let (b, u) = (bg(2), ug(2));
    let mut prime_power_elements = 0;
    let mut order_five = 0;
    for h in group.iter() {
        let MapOrder::Finite(order) = map_order(&h) else {
            return Err("element of unbounded order".into());
        };
        let Some(p) = odd_prime_power(order) else {
            continue;
        };
        prime_power_elements += 1;
        let (fb, fu) = invariant_counts(&h, Cutoff::default()).unwrap();
        if b % p != 0 {
            ensure(fb > 0, || {
                format!("order {order} element with no bounded fixed structure")
            })?;
        }
        if p == 5 {
            order_five += 1;
            ensure(fb == 0 || fb % 5 == 0, || {
                format!("order-5 element fixes {fb} bounded")
            })?;
        }
        ensure(fb % p == b % p && fu % p == u % p, || {
            format!("order {order}: fixed ({fb}, {fu}) vs class sizes ({b}, {u}) mod {p}")
        })?;
    }
    ensure(prime_power_elements > 0 && order_five > 0, || {
        "no elements tested".into()
    })?;
    Ok(())
}

fn criterion_7_transitivity() -> Outcome {
    for (g, sizes) in [(1, (3u64, 1u64)), (2, (10, 6)), (3, (36, 28))] {
        let orbits = transvection_orbits(&form(g), Cutoff::default()).unwrap();
        ensure(orbits.len() == 2, || {
            format!("g={g}: {} orbits", orbits.len())
        })?;
        let mut got: Vec<(ArfClass, u64)> = orbits.iter().map(|o| (o.arf, o.size)).collect();
        got.sort();
        ensure(
            got == vec![(ArfClass::Bounded, sizes.0), (ArfClass::Unbounded, sizes.1)],
            || format!("g={g}: orbits {got:?}"),
        )?;
    }
    // The materialized group gives the same orbits where it is small.
    for g in 1..=2 {
        let mut sizes: Vec<u64> = SymplecticGroup::generate(&form(g))
            .unwrap()
            .structure_orbits()
            .iter()
            .map(|o| o.size)
            .collect();
        sizes.sort();
        ensure(sizes == vec![ug(g), bg(g)], || {
            format!("g={g}: closure orbits {sizes:?}")
        })?;
    }
    Ok(())
}

fn criterion_8_number_theory() -> Outcome {
    for g in 1..=40u64 {
        ensure(divides_bg(3, g).unwrap() == (g % 2 == 1), || {
            format!("p=3 g={g}")
        })?;
        ensure(divides_bg(5, g).unwrap() == (g % 4 == 2), || {
            format!("p=5 g={g}")
        })?;
    }
    let primes = primes_8k7(10_000);
    ensure(primes.len() > 100, || {
        format!("only {} primes", primes.len())
    })?;
    for p in primes {
        let ord = multiplicative_order(2, p).unwrap();
        ensure(ord % 2 == 1, || format!("p={p}: ord2 = {ord}"))?;
        for g in 1..=(2 * ord) {
            ensure(!divides_bg(p, g).unwrap(), || {
                format!("p={p} divides |B_{g}|")
            })?;
        }
    }
    Ok(())
}

fn flipped_tau(genus: usize, row: usize, col: usize) -> spinform_core::Result<HomologyMap> {
    let t = family_map(FamilyKind::Tau, genus)?;
    let mut images: Vec<Gf2Vector> = t.images().to_vec();
    images[row].flip(col);
    HomologyMap::new(Arc::clone(t.form()), images)
}

fn criterion_9_mutation_guard() -> Outcome {
    for g in 1..=4 {
        for row in 0..2 * g {
            for col in 0..2 * g {
                let source =
                    move |kind: FamilyKind, genus: usize| -> spinform_core::Result<HomologyMap> {
                        if kind == FamilyKind::Tau && genus == g {
                            flipped_tau(genus, row, col)
                        } else {
                            family_map(kind, genus)
                        }
                    };
                let report = verify_extendability_with(4, &source);
                ensure(!report.passed(), || {
                    format!("g={g}: flip ({row},{col}) went unnoticed")
                })?;
            }
        }
    }
    // The unmutated suite is green.
    ensure(harness::verify_extendability(12).passed(), || {
        "clean run failed".into()
    })?;
    // A flip is rejected at construction with the offending pair named.
    match flipped_tau(2, 0, 0) {
        Err(Error::NotFormPreserving { .. }) | Err(Error::NotInvertible) => Ok(()),
        other => Err(format!("flipped tau accepted: {other:?}")),
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        (
            "1 census g=1..8",
            Duration::from_secs(30),
            criterion_1_census,
        ),
        (
            "2 zero count vs Arf g=1..6",
            Duration::from_secs(60),
            criterion_2_zero_count_vs_arf,
        ),
        (
            "3 invariant counts g=1..8",
            Duration::from_secs(10),
            criterion_3_invariant_counts,
        ),
        (
            "4 extendability tables g=1..12",
            Duration::from_secs(30),
            criterion_4_extendability_tables,
        ),
        (
            "5 zero-count formulas and class sums",
            Duration::from_secs(10),
            criterion_5_zero_formulas,
        ),
        (
            "6 Sp(4,2) prime-power sweep",
            Duration::from_secs(60),
            criterion_6_sp4_sweep,
        ),
        (
            "7 transitivity g=1..3",
            Duration::from_secs(120),
            criterion_7_transitivity,
        ),
        (
            "8 number theory",
            Duration::from_secs(10),
            criterion_8_number_theory,
        ),
        (
            "9 mutation guard",
            Duration::from_secs(60),
            criterion_9_mutation_guard,
        ),
    ];
    let mut failures = Vec::new();
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= budget, || {
                format!("took {elapsed:?}, budget {budget:?}")
            })
        });
        let line = match &outcome {
            Ok(()) => format!("PASS  criterion {name} ({} ms)\n", elapsed.as_millis()),
            Err(why) => format!(
                "FAIL  criterion {name} ({} ms): {why}\n",
                elapsed.as_millis()
            ),
        };
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if let Err(why) = outcome {
            failures.push(format!("{name}: {why}"));
        }
    }
    assert!(
        failures.is_empty(),
        "failed criteria:\n{}",
        failures.join("\n")
    );
}

#[test]
fn full_harness_passes_at_default_caps() {
    let reports = harness::run_all(None, None).unwrap();
    for r in &reports {
        println!(
            "{:<16} {:?} {:?} {} ms",
            r.check_id,
            r.status,
            r.genus_range,
            r.elapsed.as_millis()
        );
    }
    assert!(reports.iter().all(|r| r.passed()), "{reports:#?}");
}
