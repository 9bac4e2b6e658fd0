//! The aggregated property suite run by `parafuse verify`.

use std::fmt;

use crate::error::Result;
use crate::fusion::{
    coset_consistency, fusion_table, max_trig_identity_residual, qdim_multiplicativity, FusionTable,
};
use crate::labels::{AffineLabel, Level, PfLabel};
use crate::modular::{ratio_consistency, representative_invariance, s_matrix_with, SMatrix};
use crate::qseries::characters::{
    branching_check, pf_characters, s_fixed_point_check, CentralCharges,
};
use crate::tolerance::Tolerances;
use crate::verlinde::{affine_verlinde_check, verlinde_table_from};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// Worst residual or count observed, when the check is numeric.
    pub metric: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tolerances: Tolerances,
    /// Depth for the character checks.
    pub depth: u32,
    /// Character checks are skipped above this level.
    pub character_max_k: u32,
    /// Branching reassembly is skipped above this level.
    pub branching_max_k: u32,
    /// Exhaustive associativity is skipped above this level.
    pub associativity_max_k: u32,
    /// Bound on the fixed-point residual of the characters.
    pub fixed_point_tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerances: Tolerances::default(),
            depth: 40,
            character_max_k: 6,
            branching_max_k: 4,
            associativity_max_k: 12,
            fixed_point_tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub level: Level,
    pub kappa: f64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn bound(&mut self, name: &'static str, metric: f64, bound: f64) {
        let ok = metric < bound;
        self.checks.push(Check {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            metric: Some(metric),
            detail: format!("{metric:e} {} {bound:e}", if ok { "<" } else { ">=" }),
        });
    }

    fn flag(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            metric: None,
            detail: detail.into(),
        });
    }

    fn skip(&mut self, name: &'static str, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            status: Status::Skipped,
            metric: None,
            detail: detail.into(),
        });
    }

    fn error(&mut self, name: &'static str, err: impl fmt::Display) {
        self.flag(name, false, err.to_string());
    }
}

/// Runs every property suite at one level. Check failures are reported,
/// not returned as errors; `Err` means the S-matrix itself could not be built.
pub fn run(level: Level, config: &Config) -> Result<VerifyReport> {
    let tol = &config.tolerances;
    let mut suite = Suite { checks: Vec::new() };

    labels_suite(level, &mut suite);

    let s = s_matrix_with(level, tol)?;
    suite.bound("s-matrix.unitarity", s.unitarity_residual(), tol.unitarity);
    suite.bound("s-matrix.normalization", (s.kappa() - 2.0).abs(), tol.kappa);
    suite.flag(
        "s-matrix.symmetry",
        s.symmetry_residual() == 0.0,
        format!("max |S - S^T| = {:e}", s.symmetry_residual()),
    );
    suite.bound("qdim.ratio", ratio_consistency(&s), tol.unitarity);
    suite.bound(
        "qdim.representative-invariance",
        representative_invariance(level),
        tol.unitarity,
    );

    match fusion_table(level) {
        Ok(table) => fusion_suite(level, &s, &table, config, &mut suite),
        Err(e) => suite.error("fusion.table", e),
    }

    suite.bound(
        "fusion.trig-identity",
        max_trig_identity_residual(level),
        1e-10,
    );
    let affine = affine_verlinde_check(level);
    suite.flag(
        "verlinde.affine",
        affine.mismatches.is_empty() && affine.max_residual < tol.rounding,
        format!(
            "{} triples, {} mismatches, max residual {:e}",
            affine.triples,
            affine.mismatches.len(),
            affine.max_residual
        ),
    );

    character_suite(level, &s, config, &mut suite);

    Ok(VerifyReport {
        level,
        kappa: s.kappa(),
        checks: suite.checks,
    })
}

fn labels_suite(level: Level, suite: &mut Suite) {
    let k = level.k();
    let labels = level.labels();
    let expected = (k as usize) * (k as usize + 1) / 2;
    suite.flag(
        "labels.count",
        labels.len() == expected && level.rank() == expected,
        format!("{} labels, expected {expected}", labels.len()),
    );

    // every raw label has exactly one canonical representative in its orbit
    let mut hits = vec![0usize; labels.len()];
    let mut involution_ok = true;
    for m in 0..=k {
        for n in 0..k {
            let raw = PfLabel::new(level, m.into(), n.into()).expect("in range");
            let twice = level.involution(raw).and_then(|x| level.involution(x));
            involution_ok &= twice == Ok(raw);
            match level.canonicalize(raw) {
                Ok(c) => hits[level.index_of(c)] += 1,
                Err(_) => involution_ok = false,
            }
        }
    }
    suite.flag(
        "labels.partition",
        involution_ok && hits.iter().all(|&h| h == 2),
        "involution squares to the identity and every orbit has two raw labels",
    );

    let vacuum = level.vacuum();
    let positive = labels.iter().all(|&l| match level.conformal_weight(l) {
        Ok(w) if l == vacuum => w == 0.into(),
        Ok(w) => w > 0.into(),
        Err(_) => false,
    });
    suite.flag(
        "labels.weight-positivity",
        positive,
        "vacuum weight 0, all others positive",
    );
}

fn fusion_suite(
    level: Level,
    s: &SMatrix,
    table: &FusionTable,
    config: &Config,
    suite: &mut Suite,
) {
    let k = level.k();
    match verlinde_table_from(s, config.tolerances.rounding) {
        Ok(v) => suite.flag(
            "verlinde.oracle",
            v.table == *table,
            format!(
                "closed form {} Verlinde; max rounding residual {:e}",
                if v.table == *table { "==" } else { "!=" },
                v.max_residual
            ),
        ),
        Err(e) => suite.error("verlinde.oracle", e),
    }

    let vac = table.index_of(level.vacuum());
    suite.flag(
        "fusion.commutativity",
        table.is_commutative(),
        "N_ab^c = N_ba^c",
    );
    suite.flag(
        "fusion.unit",
        table.has_unit(vac),
        "vacuum acts as the identity",
    );
    if k <= config.associativity_max_k {
        suite.flag(
            "fusion.associativity",
            table.is_associative(),
            "exhaustive over label quadruples",
        );
    } else {
        suite.skip(
            "fusion.associativity",
            format!("k > {}", config.associativity_max_k),
        );
    }

    match s.charge_conjugation(config.tolerances.unitarity) {
        Some(perm) => {
            let duals: Vec<usize> = (0..table.dim())
                .map(|a| {
                    crate::fusion::contragredient(level, table, table.order()[a])
                        .map(|d| table.index_of(d))
                        .unwrap_or(usize::MAX)
                })
                .collect();
            suite.flag(
                "s-matrix.charge-conjugation",
                perm == duals,
                "S^2 permutes labels as a -> contragredient(a)",
            );
        }
        None => suite.flag(
            "s-matrix.charge-conjugation",
            false,
            "S^2 is not a permutation",
        ),
    }

    suite.bound(
        "fusion.qdim-multiplicativity",
        qdim_multiplicativity(table),
        1e-9,
    );

    match coset_consistency(level) {
        Ok(r) => suite.flag(
            "fusion.coset-consistency",
            r.violations.is_empty(),
            format!("{} checks, {} violations", r.checks, r.violations.len()),
        ),
        Err(e) => suite.error("fusion.coset-consistency", e),
    }
}

fn character_suite(level: Level, s: &SMatrix, config: &Config, suite: &mut Suite) {
    const NAMES: [&str; 4] = [
        "characters.exponent-law",
        "characters.nonnegative",
        "characters.fixed-point",
        "characters.branching",
    ];
    let k = level.k();
    if k > config.character_max_k {
        for name in NAMES {
            suite.skip(name, format!("k > {}", config.character_max_k));
        }
        return;
    }
    let chars = match pf_characters(level, config.depth) {
        Ok(c) => c,
        Err(e) => {
            for name in NAMES {
                suite.error(name, &e);
            }
            return;
        }
    };

    let c = CentralCharges::new(level).c_parafermion;
    let mut wrong = Vec::new();
    for (label, ch) in s.order().iter().zip(&chars) {
        let expected = level.conformal_weight(*label).ok().map(|w| w - c / 24);
        if ch.lowest_exponent() != expected {
            wrong.push(label.to_string());
        }
    }
    suite.flag(
        NAMES[0],
        wrong.is_empty(),
        if wrong.is_empty() {
            "lowest exponent = weight - c/24 for every label".to_string()
        } else {
            format!("mismatch at {}", wrong.join(", "))
        },
    );
    suite.flag(
        NAMES[1],
        chars
            .iter()
            .all(|c| c.has_nonnegative_integer_coefficients()),
        "coefficients are nonnegative integers",
    );

    match s_fixed_point_check(level, config.depth) {
        Ok(r) => suite.bound(NAMES[2], r.max_residual, config.fixed_point_tolerance),
        Err(e) => suite.error(NAMES[2], e),
    }

    if k > config.branching_max_k {
        suite.skip(NAMES[3], format!("k > {}", config.branching_max_k));
        return;
    }
    let depth = config.depth.min(12);
    let mut mismatched = 0;
    let mut compared = 0;
    for i in 0..=k {
        let ai = AffineLabel::new(level, i.into()).expect("in range");
        match branching_check(level, ai, depth) {
            Ok(r) => {
                mismatched += r.mismatched_terms;
                compared += r.compared_terms;
            }
            Err(e) => {
                suite.error(NAMES[3], e);
                return;
            }
        }
    }
    suite.flag(
        NAMES[3],
        mismatched == 0,
        format!("{compared} terms compared at depth {depth}, {mismatched} mismatched"),
    );
}
