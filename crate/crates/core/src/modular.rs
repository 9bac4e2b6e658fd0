//! The modular S-matrix over canonical labels and the quantum dimensions it
//! determines.
//!
//! The raw entry
//!
//! ```text
//! S_{(m,n),(m',n')} = (k(k+2))^{-1/2} exp(iπ (m-2n)(m'-2n') / k) sin(π (m+1)(m'+1) / (k+2))
//! ```
//!
//! is indexed by raw labels, so every module is counted twice. Restricted to
//! canonical labels the matrix is rescaled by a factor `κ` fitted so that the
//! vacuum row has unit norm; `κ = 2` exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::labels::{CanonicalLabel, Level, PfLabel};
use crate::tolerance::Tolerances;

/// Raw S-matrix entry for two (not necessarily canonical) labels.
pub fn s_entry_raw(level: Level, a: PfLabel, b: PfLabel) -> Result<Complex64> {
    level.check(a)?;
    level.check(b)?;
    Ok(raw_entry(level.k(), a.m(), a.charge(), b.m(), b.charge()))
}

fn raw_entry(k: u32, ma: u32, pa: i64, mb: u32, pb: i64) -> Complex64 {
    let k64 = i64::from(k);
    // Reduce the integer arguments before scaling so the phases stay exact
    // and the formula is symmetric bit for bit.
    let phase_num = (pa * pb).rem_euclid(2 * k64);
    let sine_num = (i64::from(ma + 1) * i64::from(mb + 1)).rem_euclid(2 * (k64 + 2));
    let norm = 1.0 / ((k64 * (k64 + 2)) as f64).sqrt();
    let sine = (PI * sine_num as f64 / (k64 + 2) as f64).sin();
    let phase = PI * phase_num as f64 / k64 as f64;
    Complex64::from_polar(norm * sine, phase)
}

/// Dense S-matrix over the canonical labels of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    level: Level,
    order: Vec<CanonicalLabel>,
    entries: Vec<Complex64>,
    kappa: f64,
    unitarity_residual: f64,
}

impl SMatrix {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn order(&self) -> &[CanonicalLabel] {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// The fitted normalization applied to the raw entries.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `max |(S S^†)_{ab} - δ_{ab}|` measured at construction.
    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    pub fn vacuum_index(&self) -> usize {
        self.level.index_of(self.level.vacuum())
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.entries[a * self.order.len() + b]
    }

    pub fn entry(&self, a: CanonicalLabel, b: CanonicalLabel) -> Complex64 {
        self.get(self.level.index_of(a), self.level.index_of(b))
    }

    pub fn row(&self, a: usize) -> &[Complex64] {
        let n = self.order.len();
        &self.entries[a * n..(a + 1) * n]
    }

    /// Largest `|S_{ab} - S_{ba}|`; zero for matrices built by [`s_matrix`].
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a + 1..n {
                worst = worst.max((self.get(a, b) - self.get(b, a)).norm());
            }
        }
        worst
    }

    /// Dense product `S S`, row-major.
    pub fn squared(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                (0..n).map(move |b| (0..n).map(|x| self.get(a, x) * self.get(x, b)).sum())
            })
            .collect()
    }

    /// Reads `S^2` as a permutation matrix: entry `a` of the result is the
    /// unique `b` with `(S^2)_{ab} = 1`. Returns `None` if `S^2` is not a
    /// permutation within `tolerance`.
    pub fn charge_conjugation(&self, tolerance: f64) -> Option<Vec<usize>> {
        let n = self.dim();
        let sq = self.squared();
        let mut perm = Vec::with_capacity(n);
        for a in 0..n {
            let row = &sq[a * n..(a + 1) * n];
            let mut hit = None;
            for (b, v) in row.iter().enumerate() {
                if (v - 1.0).norm() < tolerance {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(b);
                } else if v.norm() >= tolerance {
                    return None;
                }
            }
            perm.push(hit?);
        }
        Some(perm)
    }
}

fn unitarity_residual(entries: &[Complex64], n: usize) -> f64 {
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut worst = 0.0f64;
            for b in 0..n {
                let dot: Complex64 = (0..n)
                    .map(|x| entries[a * n + x] * entries[b * n + x].conj())
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Builds the normalized S-matrix with default tolerances.
pub fn s_matrix(level: Level) -> Result<SMatrix> {
    s_matrix_with(level, &Tolerances::default())
}

pub fn s_matrix_with(level: Level, tol: &Tolerances) -> Result<SMatrix> {
    let order = level.labels();
    let n = order.len();
    let k = level.k();
    let raw: Vec<Complex64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let la = order[a];
            order
                .iter()
                .map(move |lb| raw_entry(k, la.m(), la.charge(), lb.m(), lb.charge()))
        })
        .collect();

    let vac = level.index_of(level.vacuum());
    let vac_norm: f64 = raw[vac * n..(vac + 1) * n]
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let kappa = 1.0 / vac_norm;
    if !((kappa - 2.0).abs() <= tol.kappa) {
        return Err(Error::Normalization {
            kappa,
            tolerance: tol.kappa,
        });
    }

    let entries: Vec<Complex64> = raw.into_iter().map(|z| z * kappa).collect();
    let residual = unitarity_residual(&entries, n);
    if !(residual <= tol.unitarity) {
        return Err(Error::UnitarityViolation {
            residual,
            tolerance: tol.unitarity,
        });
    }

    Ok(SMatrix {
        level,
        order,
        entries,
        kappa,
        unitarity_residual: residual,
    })
}

/// Quantum dimension of a canonical label with its closed-form sine ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDim {
    pub label: CanonicalLabel,
    pub value: f64,
    /// `(m+1, k+2)`: the value is `sin(π(m+1)/(k+2)) / sin(π/(k+2))`.
    pub closed_form: (u32, u32),
}

pub fn qdim(level: Level, label: CanonicalLabel) -> Result<QDim> {
    level.check_canonical(label)?;
    let k = level.k();
    let numer = label.m() + 1;
    // sin(πa/(k+2)) = sin(π(k+2-a)/(k+2)); evaluating the smaller argument
    // makes labels m and k-m produce identical floats.
    let reduced = numer.min(k + 2 - numer);
    let denom = f64::from(k + 2);
    let value = (PI * f64::from(reduced) / denom).sin() / (PI / denom).sin();
    Ok(QDim {
        label,
        value,
        closed_form: (numer, k + 2),
    })
}

/// Quantum dimensions of all canonical labels, in label order.
pub fn qdims(level: Level) -> Vec<QDim> {
    level
        .labels()
        .into_iter()
        .map(|l| qdim(level, l).expect("enumerated labels are canonical"))
        .collect()
}

/// `Σ_a qdim(a)^2` over canonical labels.
pub fn global_dimension(level: Level) -> f64 {
    qdims(level).iter().map(|q| q.value * q.value).sum()
}

/// Largest `|qdim(a) - S_{a,vac}/S_{vac,vac}|`.
pub fn ratio_consistency(s: &SMatrix) -> f64 {
    let vac = s.vacuum_index();
    let s00 = s.get(vac, vac);
    s.order()
        .iter()
        .enumerate()
        .map(|(a, &label)| {
            let q = qdim(s.level(), label).expect("canonical").value;
            (s.get(a, vac) / s00 - q).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest `|S_raw(a, b) - S_raw(involution(a), b)|` over all raw label pairs.
pub fn representative_invariance(level: Level) -> f64 {
    let k = level.k();
    let raws: Vec<PfLabel> = (0..=k)
        .flat_map(|m| (0..k).map(move |n| (m, n)))
        .map(|(m, n)| PfLabel::new(level, m.into(), n.into()).expect("in range"))
        .collect();
    raws.par_iter()
        .map(|&a| {
            let ia = level.involution(a).expect("in range");
            raws.iter()
                .map(|&b| {
                    let x = s_entry_raw(level, a, b).expect("in range");
                    let y = s_entry_raw(level, ia, b).expect("in range");
                    (x - y).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}
