//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use parafuse::fusion::{max_trig_identity_residual, qdim_multiplicativity};
use parafuse::qseries::{
    branching_check, pf_characters, qdim_limit_estimates, s_fixed_point_check, CentralCharges,
};
use parafuse::verlinde::verlinde_table;
use parafuse::{
    contragredient, fusion_table, pf_fuse, qdims, s_matrix, AffineLabel, Level, PfLabel,
};

type Outcome = Result<String, String>;

fn lvl(k: i64) -> Level {
    Level::new(k).expect("valid level")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 2..=10 {
        let level = lvl(k);
        let v = verlinde_table(level).map_err(|e| format!("k={k}: {e}"))?;
        let closed = fusion_table(level).map_err(|e| format!("k={k}: {e}"))?;
        ensure(v.table == closed, || {
            format!("k={k}: Verlinde table differs from closed form")
        })?;
        ensure(v.max_residual < 1e-7, || {
            format!("k={k}: rounding residual {:e}", v.max_residual)
        })?;
        worst = worst.max(v.max_residual);
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "k=2..10 identical, max residual {worst:.1e}, {:?}",
        start.elapsed()
    ))
}

fn sorted_fuse(level: Level, a: (i64, i64), b: (i64, i64)) -> Vec<(u32, u32)> {
    let a = PfLabel::new(level, a.0, a.1).unwrap();
    let b = PfLabel::new(level, b.0, b.1).unwrap();
    let mut out: Vec<(u32, u32)> = pf_fuse(level, a, b)
        .unwrap()
        .iter()
        .map(|l| (l.m(), l.n()))
        .collect();
    out.sort();
    out
}

fn golden_weights_and_qdims(
    level: Level,
    weights: &[Rational64],
    dims: &[f64],
) -> Result<(), String> {
    let labels = level.labels();
    for ((label, w), d) in labels.iter().zip(weights).zip(dims) {
        let got = level.conformal_weight(*label).map_err(|e| e.to_string())?;
        ensure(got == *w, || format!("weight {label}: {got} != {w}"))?;
        let q = parafuse::qdim(level, *label)
            .map_err(|e| e.to_string())?
            .value;
        ensure((q - d).abs() < 1e-12, || {
            format!("qdim {label}: {q} != {d}")
        })?;
    }
    ensure(labels.len() == weights.len(), || "label count".into())
}

fn ising_golden() -> Outcome {
    let level = lvl(2);
    let r = Rational64::new;
    let s2 = 2f64.sqrt();
    golden_weights_and_qdims(level, &[r(1, 16), r(0, 1), r(1, 2)], &[s2, 1.0, 1.0])?;
    let fused = sorted_fuse(level, (1, 0), (1, 0));
    ensure(fused == vec![(2, 0), (2, 1)], || {
        format!("sigma x sigma = {fused:?}")
    })?;
    let s = s_matrix(level).map_err(|e| e.to_string())?;
    let h = 1.0 / s2;
    let golden = [[0.0, h, -h], [h, 0.5, 0.5], [-h, 0.5, 0.5]];
    let mut worst = 0.0f64;
    for (a, row) in golden.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            worst = worst.max((s.get(a, b) - v).norm());
        }
    }
    ensure(worst < 1e-12, || format!("S differs by {worst:e}"))?;
    Ok(format!(
        "weights, qdims, fusion exact; S within {worst:.1e}"
    ))
}

fn potts_golden() -> Outcome {
    let level = lvl(3);
    let r = Rational64::new;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    golden_weights_and_qdims(
        level,
        &[r(1, 15), r(1, 15), r(2, 5), r(0, 1), r(2, 3), r(2, 3)],
        &[phi, phi, phi, 1.0, 1.0, 1.0],
    )?;
    let fused = sorted_fuse(level, (1, 0), (1, 0));
    ensure(fused == vec![(2, 0), (3, 2)], || {
        format!("(1,0) x (1,0) = {fused:?}")
    })?;
    Ok("weights, qdims, fusion exact".into())
}

fn qdim_multiplicative() -> Outcome {
    let mut worst = 0.0f64;
    for k in 2..=12 {
        let table = fusion_table(lvl(k)).map_err(|e| e.to_string())?;
        let r = qdim_multiplicativity(&table);
        ensure(r < 1e-9, || format!("k={k}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("k=2..12, max residual {worst:.1e}"))
}

fn trig_identity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 2..=50 {
        let r = max_trig_identity_residual(lvl(k));
        ensure(r < 1e-10, || format!("k={k}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "k=2..50, max residual {worst:.1e}, {:?}",
        start.elapsed()
    ))
}

fn s_matrix_health() -> Outcome {
    let (mut unitarity, mut kappa) = (0.0f64, 0.0f64);
    for k in 2..=20 {
        let level = lvl(k);
        let s = s_matrix(level).map_err(|e| format!("k={k}: {e}"))?;
        ensure(s.symmetry_residual() == 0.0, || {
            format!("k={k}: S not symmetric")
        })?;
        ensure(s.unitarity_residual() < 1e-10, || {
            format!("k={k}: unitarity {:e}", s.unitarity_residual())
        })?;
        ensure((s.kappa() - 2.0).abs() < 1e-9, || {
            format!("k={k}: kappa {}", s.kappa())
        })?;
        unitarity = unitarity.max(s.unitarity_residual());
        kappa = kappa.max((s.kappa() - 2.0).abs());

        let table = fusion_table(level).map_err(|e| e.to_string())?;
        let perm = s
            .charge_conjugation(1e-10)
            .ok_or_else(|| format!("k={k}: S^2 not a permutation"))?;
        for (a, &label) in table.order().iter().enumerate() {
            let dual = contragredient(level, &table, label).map_err(|e| e.to_string())?;
            ensure(perm[a] == table.index_of(dual), || {
                format!("k={k}: S^2 sends {label} elsewhere than {dual}")
            })?;
        }
    }
    Ok(format!(
        "k=2..20, max |SS^+ - I| {unitarity:.1e}, max |kappa - 2| {kappa:.1e}"
    ))
}

fn ring_axioms() -> Outcome {
    for k in 2..=8 {
        let level = lvl(k);
        let table = fusion_table(level).map_err(|e| e.to_string())?;
        ensure(table.is_commutative(), || format!("k={k}: not commutative"))?;
        ensure(table.has_unit(table.index_of(level.vacuum())), || {
            format!("k={k}: no unit")
        })?;
        ensure(table.is_associative(), || format!("k={k}: not associative"))?;
    }
    Ok("k=2..8 commutative, unital, associative".into())
}

fn character_suite() -> Outcome {
    let mut worst_fp = 0.0f64;
    for k in 2..=6 {
        let level = lvl(k);
        let c = CentralCharges::new(level).c_parafermion;
        let chars = pf_characters(level, 30).map_err(|e| format!("k={k}: {e}"))?;
        for (label, ch) in level.labels().iter().zip(&chars) {
            let expected = level.conformal_weight(*label).unwrap() - c / 24;
            ensure(ch.lowest_exponent() == Some(expected), || {
                format!(
                    "k={k} {label}: lowest exponent {:?} != {expected}",
                    ch.lowest_exponent()
                )
            })?;
            ensure(ch.has_nonnegative_integer_coefficients(), || {
                format!("k={k} {label}: negative coefficient")
            })?;
        }
        let fp = s_fixed_point_check(level, 40).map_err(|e| e.to_string())?;
        ensure(fp.max_residual < 1e-3, || {
            format!("k={k}: fixed-point residual {:e}", fp.max_residual)
        })?;
        worst_fp = worst_fp.max(fp.max_residual);
        let coarse = s_fixed_point_check(level, 3).map_err(|e| e.to_string())?;
        let fine = s_fixed_point_check(level, 6).map_err(|e| e.to_string())?;
        ensure(fine.max_residual < coarse.max_residual, || {
            format!(
                "k={k}: residual {:e} at depth 6 not below {:e} at depth 3",
                fine.max_residual, coarse.max_residual
            )
        })?;
    }
    for k in 2..=4 {
        let level = lvl(k);
        for i in 0..=k {
            let r = branching_check(level, AffineLabel::new(level, i).unwrap(), 10)
                .map_err(|e| e.to_string())?;
            ensure(r.mismatched_terms == 0 && r.compared_terms > 0, || {
                format!(
                    "k={k} i={i}: {} of {} terms differ",
                    r.mismatched_terms, r.compared_terms
                )
            })?;
        }
    }
    Ok(format!(
        "exponent law and positivity k<=6, branching k<=4, fixed-point max {worst_fp:.1e}"
    ))
}

fn qdim_limit() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_at_tenth = 0.0f64;
    for k in 2..=6 {
        let level = lvl(k);
        let exact: Vec<f64> = qdims(level).iter().map(|q| q.value).collect();
        let errors: Vec<Vec<f64>> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&y| {
                let est =
                    qdim_limit_estimates(level, y, 20).map_err(|e| format!("k={k} y={y}: {e}"))?;
                Ok(est
                    .iter()
                    .zip(&exact)
                    .map(|(e, q)| (e - q).abs() / q)
                    .collect())
            })
            .collect::<Result<_, String>>()?;
        for (a, label) in level.labels().iter().enumerate() {
            let (e2, e1, e05) = (errors[0][a], errors[1][a], errors[2][a]);
            worst_at_tenth = worst_at_tenth.max(e1);
            if e1 >= 0.02 {
                failures.push(format!("k={k} {label}: {:.2}% at y=0.1", 100.0 * e1));
            }
            let trend = e1 < e2 && e05 < e1 || e2 < 1e-12;
            if !trend {
                failures.push(format!(
                    "k={k} {label}: error not decreasing ({e2:e}, {e1:e}, {e05:e})"
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "max relative error at y=0.1 {:.2}%",
            100.0 * worst_at_tenth
        ))
    } else {
        Err(format!(
            "{} violations, worst {:.2}% at y=0.1; first: {}",
            failures.len(),
            100.0 * worst_at_tenth,
            failures[0]
        ))
    }
}

fn label_machinery() -> Outcome {
    let start = Instant::now();
    for k in 2..=100i64 {
        let level = lvl(k);
        let labels = level.labels();
        let n = (k * (k + 1) / 2) as usize;
        ensure(labels.len() == n, || {
            format!("k={k}: {} labels", labels.len())
        })?;
        let mut hits = vec![0u8; n];
        for m in 0..=k {
            for j in 0..k {
                let raw = PfLabel::new(level, m, j).unwrap();
                let inv = level.involution(raw).unwrap();
                ensure(level.involution(inv).unwrap() == raw, || {
                    format!("k={k}: involution not idempotent at {raw}")
                })?;
                let c = level.canonicalize(raw).unwrap();
                ensure(c == level.canonicalize(inv).unwrap(), || {
                    format!("k={k}: orbit of {raw} split")
                })?;
                hits[level.index_of(c)] += 1;
            }
        }
        ensure(hits.iter().all(|&h| h == 2), || {
            format!("k={k}: orbits are not pairs")
        })?;
        for &l in &labels {
            let w = level.conformal_weight(l).unwrap();
            let ok = if l == level.vacuum() {
                w == 0.into()
            } else {
                w > 0.into()
            };
            ensure(ok, || format!("k={k}: weight {w} at {l}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("k=2..100, {:?}", start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("k=2 golden", ising_golden),
        ("k=3 golden", potts_golden),
        ("qdim multiplicativity", qdim_multiplicative),
        ("trigonometric identity", trig_identity),
        ("S-matrix health", s_matrix_health),
        ("fusion-ring axioms", ring_axioms),
        ("character suite", character_suite),
        ("qdim limit", qdim_limit),
        ("label machinery", label_machinery),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
