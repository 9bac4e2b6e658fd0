//! Verlinde-formula oracle for the fusion rules.
//!
//! `N_{ab}^c = Σ_x S_{ax} S_{bx} conj(S_{cx}) / S_{vac,x}`, computed from the
//! normalized S-matrix alone and rounded to the nearest integer. Nothing here
//! uses the closed-form rule in [`crate::fusion`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fusion::{affine_channels, FusionTable};
use crate::labels::Level;
use crate::modular::{s_matrix_with, SMatrix};
use crate::tolerance::Tolerances;

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

#[inline]
fn neumaier(acc: &mut (f64, f64), x: f64) {
    let (sum, comp) = acc;
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// A rounded Verlinde coefficient together with its rounding diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerlindeResult {
    pub coefficient: u32,
    /// `|raw - coefficient|`, measured in the complex plane.
    pub residual: f64,
    /// `|Im raw|`.
    pub imaginary: f64,
}

fn round_raw(raw: Complex64, tolerance: f64) -> Result<VerlindeResult> {
    let nearest = raw.re.round();
    let residual = (raw - Complex64::new(nearest, 0.0)).norm();
    if !(residual < tolerance) || nearest < 0.0 {
        return Err(Error::RoundingResidual {
            raw: raw.re,
            residual,
            tolerance,
        });
    }
    Ok(VerlindeResult {
        coefficient: nearest as u32,
        residual,
        imaginary: raw.im.abs(),
    })
}

/// One Verlinde coefficient `N_{ab}^c` from matrix indices.
pub fn verlinde_coeff(
    s: &SMatrix,
    a: usize,
    b: usize,
    c: usize,
    tolerance: f64,
) -> Result<VerlindeResult> {
    let vac = s.vacuum_index();
    let mut acc = CompensatedSum::default();
    for x in 0..s.dim() {
        acc.add(s.get(a, x) * s.get(b, x) * s.get(c, x).conj() / s.get(vac, x));
    }
    round_raw(acc.value(), tolerance)
}

/// A Verlinde-derived table plus the worst diagnostics seen while rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct VerlindeTable {
    pub table: FusionTable,
    pub max_residual: f64,
    pub max_imaginary: f64,
}

pub fn verlinde_table(level: Level) -> Result<VerlindeTable> {
    let tol = Tolerances::default();
    let s = s_matrix_with(level, &tol)?;
    verlinde_table_from(&s, tol.rounding)
}

/// Full fusion table from an S-matrix. Per pair `(a, b)` the weights
/// `S_{ax} S_{bx} / S_{vac,x}` are formed once and contracted against every row `c`.
pub fn verlinde_table_from(s: &SMatrix, tolerance: f64) -> Result<VerlindeTable> {
    let n = s.dim();
    let vac = s.vacuum_index();
    let inv_vac: Vec<Complex64> = (0..n).map(|x| s.get(vac, x).inv()).collect();
    let stats = std::sync::Mutex::new((0.0f64, 0.0f64));
    let table = FusionTable::from_fn(s.level(), |a, b| {
        let weights: Vec<Complex64> = (0..n)
            .map(|x| s.get(a, x) * s.get(b, x) * inv_vac[x])
            .collect();
        let mut row = BTreeMap::new();
        let (mut worst_res, mut worst_im) = (0.0f64, 0.0f64);
        for c in 0..n {
            let mut acc = CompensatedSum::default();
            for (x, w) in weights.iter().enumerate() {
                acc.add(w * s.get(c, x).conj());
            }
            let r = round_raw(acc.value(), tolerance)?;
            worst_res = worst_res.max(r.residual);
            worst_im = worst_im.max(r.imaginary);
            if r.coefficient > 0 {
                row.insert(c, r.coefficient);
            }
        }
        let mut guard = stats.lock().expect("stats lock");
        guard.0 = guard.0.max(worst_res);
        guard.1 = guard.1.max(worst_im);
        Ok(row)
    })?;
    let (max_residual, max_imaginary) = stats.into_inner().expect("stats lock");
    Ok(VerlindeTable {
        table,
        max_residual,
        max_imaginary,
    })
}

/// Outcome of the affine `sl_2` Verlinde cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineVerlindeReport {
    pub triples: usize,
    pub mismatches: Vec<(u32, u32, u32)>,
    pub max_residual: f64,
    pub unitarity_residual: f64,
}

/// Compares `Σ_x S_{ix} S_{jx} S_{cx} / S_{0x}` for the affine S-matrix
/// `S_{ij} = sqrt(2/(k+2)) sin(π(i+1)(j+1)/(k+2))` with the affine channel rule.
pub fn affine_verlinde_check(level: Level) -> AffineVerlindeReport {
    let k = level.k();
    let n = k as usize + 1;
    let h = f64::from(k + 2);
    let norm = (2.0 / h).sqrt();
    let s: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| norm * (PI * ((i + 1) * (j + 1)) as f64 / h).sin()))
        .collect();
    let mut unitarity = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|x| s[i * n + x] * s[j * n + x]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            unitarity = unitarity.max((dot - target).abs());
        }
    }
    assert!(
        unitarity < Tolerances::DEFAULT_UNITARITY,
        "affine S-matrix is not unitary: {unitarity:e}"
    );

    let results: Vec<(f64, Vec<(u32, u32, u32)>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst = 0.0f64;
            let mut bad = Vec::new();
            for j in 0..n {
                let channels: Vec<u32> = affine_channels(k, i as u32, j as u32).collect();
                for c in 0..n {
                    let raw: f64 = (0..n)
                        .map(|x| s[i * n + x] * s[j * n + x] * s[c * n + x] / s[x])
                        .sum();
                    let rounded = raw.round();
                    worst = worst.max((raw - rounded).abs());
                    let expected = f64::from(u8::from(channels.contains(&(c as u32))));
                    if rounded != expected {
                        bad.push((i as u32, j as u32, c as u32));
                    }
                }
            }
            (worst, bad)
        })
        .collect();

    let mut report = AffineVerlindeReport {
        triples: n * n * n,
        mismatches: Vec::new(),
        max_residual: 0.0,
        unitarity_residual: unitarity,
    };
    for (worst, bad) in results {
        report.max_residual = report.max_residual.max(worst);
        report.mismatches.extend(bad);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::fusion_table;
    use crate::labels::CanonicalLabel;
    use crate::modular::s_matrix;

    fn lvl(k: i64) -> Level {
        Level::new(k).unwrap()
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut acc = CompensatedSum::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            acc.add(Complex64::new(x, -x));
        }
        assert_eq!(acc.value(), Complex64::new(2.0, -2.0));
    }

    #[test]
    fn ising_coefficients() {
        let level = lvl(2);
        let s = s_matrix(level).unwrap();
        let idx = |m, n| level.index_of(CanonicalLabel::new(level, m, n).unwrap());
        let sigma = idx(1, 0);
        let eps = idx(2, 1);
        let r = verlinde_coeff(&s, sigma, sigma, eps, 1e-7).unwrap();
        assert_eq!(r.coefficient, 1);
        let r = verlinde_coeff(&s, sigma, eps, sigma, 1e-7).unwrap();
        assert_eq!(r.coefficient, 1);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn vacuum_row_is_identity() {
        for k in 2..=6 {
            let level = lvl(k);
            let s = s_matrix(level).unwrap();
            let v = s.vacuum_index();
            for a in 0..s.dim() {
                for c in 0..s.dim() {
                    let r = verlinde_coeff(&s, v, a, c, 1e-7).unwrap();
                    assert_eq!(r.coefficient, u32::from(a == c));
                }
            }
        }
    }

    #[test]
    fn oracle_matches_closed_form() {
        for k in [2, 3, 7] {
            let v = verlinde_table(lvl(k)).unwrap();
            assert_eq!(v.table, fusion_table(lvl(k)).unwrap(), "k={k}");
            assert!(v.max_residual < 1e-7);
            assert!(v.max_imaginary < 1e-9);
        }
    }

    #[test]
    fn rounding_error_is_loud() {
        let s = s_matrix(lvl(5)).unwrap();
        let err = verlinde_table_from(&s, 0.0).unwrap_err();
        assert!(matches!(err, Error::RoundingResidual { .. }));
    }

    #[test]
    fn affine_check_examples() {
        let r = affine_verlinde_check(lvl(2));
        assert_eq!(r.triples, 27);
        assert!(r.mismatches.is_empty());
        let r = affine_verlinde_check(lvl(10));
        assert!(r.mismatches.is_empty());
        assert!(r.max_residual < 1e-9);
    }
}
