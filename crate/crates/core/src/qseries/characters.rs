//! Affine `sl_2` characters, string functions and parafermion characters.
//!
//! The level-`k` affine character of `L(k,i)` is built from the Weyl–Kac
//! quotient `(Θ_{i+1,k+2} - Θ_{-(i+1),k+2}) / (Θ_{1,2} - Θ_{-1,2})`, which
//! already carries the `q^{h_i - c/24}` normalization. The string function
//! `c^i_m` is the charge-`m` sector with the lattice factor `q^{m^2/4k}`
//! removed, and the parafermion character is `ch M^{i,j} = η · c^i_{i-2j}`.
//!
//! Depths are counted in integer `L(0)` levels: a parafermion character at
//! depth `d` is exact for every graded piece with `L(0)`-eigenvalue below `d`.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;

use super::series::{rat, PuiseuxSeries, TwoVarSeries};
use super::theta::{eta_series, theta_series};
use crate::error::{Error, Result};
use crate::labels::{AffineLabel, CanonicalLabel, Level, PfLabel};
use crate::modular::{s_matrix, SMatrix};

/// Smallest accepted depth; below it a string function keeps fewer than
/// three integer graded pieces.
pub const MIN_DEPTH: u32 = 3;

/// Central charges of the coset `K(sl_2,k) = L(k,0) / Heisenberg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralCharges {
    pub c_affine: Rational64,
    pub c_heisenberg: Rational64,
    pub c_parafermion: Rational64,
}

impl CentralCharges {
    pub fn new(level: Level) -> Self {
        let k = i64::from(level.k());
        let c_affine = rat(3 * k, k + 2);
        let c_heisenberg = rat(1, 1);
        CentralCharges {
            c_affine,
            c_heisenberg,
            c_parafermion: c_affine - c_heisenberg,
        }
    }
}

fn denominator_for(k: u64) -> u64 {
    48u64.lcm(&(4 * k * (k + 2))).lcm(&(2 * k))
}

/// Character of `L(k, i)` for any `k >= 1`, exact below the absolute exponent `cutoff`.
pub fn affine_character_at(k: u32, i: u32, cutoff: Rational64) -> Result<TwoVarSeries> {
    if k == 0 || i > k {
        return Err(Error::InvalidArgument(format!(
            "affine character needs 0 <= i <= k and k >= 1, got k={k}, i={i}"
        )));
    }
    let work = cutoff + rat(1, 1);
    let m = u64::from(k) + 2;
    let shift = i64::from(i) + 1;
    let numer = theta_series(shift, m, work).sub(&theta_series(-shift, m, work))?;
    let denom = theta_series(1, 2, work).sub(&theta_series(-1, 2, work))?;
    let quot = numer.div(&denom)?;
    if quot.cutoff() < cutoff {
        return Err(Error::TruncationTooSmall(format!(
            "affine quotient exact only below {}, needed {cutoff}",
            quot.cutoff()
        )));
    }
    let base = rat(shift * shift, 4 * m as i64) - rat(1, 8);
    quot.truncate(cutoff)
        .rebase(base, denominator_for(u64::from(k)))
}

pub fn affine_character(level: Level, i: AffineLabel, cutoff: Rational64) -> Result<TwoVarSeries> {
    affine_character_at(level.k(), i.get(), cutoff)
}

/// Absolute cutoff of `c^i_m` so that `η · c^i_m` is exact below `L(0) = depth`.
fn string_cutoff(level: Level, depth: u32) -> Rational64 {
    let cc = CentralCharges::new(level);
    Rational64::from_integer(i64::from(depth)) - cc.c_parafermion / 24 - rat(1, 24)
}

fn extract_string(ch: &TwoVarSeries, k: u32, m: i64, cutoff: Rational64) -> Result<PuiseuxSeries> {
    let lattice = rat(m * m, 4 * i64::from(k));
    let sector = ch.charge_sector(m).shift(-lattice);
    if sector.cutoff() < cutoff {
        return Err(Error::TruncationTooSmall(format!(
            "charge sector {m} exact only below {}, needed {cutoff}",
            sector.cutoff()
        )));
    }
    Ok(sector.truncate(cutoff))
}

fn check_depth(depth: u32) -> Result<()> {
    if depth < MIN_DEPTH {
        return Err(Error::TruncationTooSmall(format!(
            "depth {depth} keeps fewer than {MIN_DEPTH} graded pieces"
        )));
    }
    Ok(())
}

/// String function `c^i_m`, truncated so that `η · c^i_m` is exact below
/// `L(0) = depth`. Vanishes identically when `i - m` is odd.
pub fn string_function(
    level: Level,
    i: AffineLabel,
    m_sector: i64,
    depth: u32,
) -> Result<PuiseuxSeries> {
    check_depth(depth)?;
    let k = level.k();
    let cutoff = string_cutoff(level, depth);
    if (i64::from(i.get()) - m_sector).is_odd() {
        return Ok(PuiseuxSeries::zero(
            cutoff,
            level.series_denominator(),
            cutoff,
        ));
    }
    let lattice = rat(m_sector * m_sector, 4 * i64::from(k));
    let ch = affine_character(level, i, cutoff + lattice)?;
    extract_string(&ch, k, m_sector, cutoff)
}

fn eta_times(level: Level, string: &PuiseuxSeries, depth: u32) -> Result<PuiseuxSeries> {
    let cc = CentralCharges::new(level);
    let target = Rational64::from_integer(i64::from(depth)) - cc.c_parafermion / 24;
    let product = eta_series(depth + 2).mul(string)?;
    if product.cutoff() < target {
        return Err(Error::TruncationTooSmall(format!(
            "character exact only below {}, needed {target}",
            product.cutoff()
        )));
    }
    Ok(product.truncate(target))
}

/// `ch M^{i,j} = η · c^i_{i-2j}` for a canonical label, exact below `L(0) = depth`.
pub fn pf_character(level: Level, label: CanonicalLabel, depth: u32) -> Result<PuiseuxSeries> {
    level.check_canonical(label)?;
    let i = AffineLabel::new(level, label.m().into())?;
    let string = string_function(level, i, label.charge(), depth)?;
    eta_times(level, &string, depth)
}

/// Characters of every canonical label, in label order. Each affine
/// character is expanded once and shared by all of its charge sectors.
pub fn pf_characters(level: Level, depth: u32) -> Result<Vec<PuiseuxSeries>> {
    check_depth(depth)?;
    let k = level.k();
    let cutoff = string_cutoff(level, depth);
    let reach = rat(i64::from(k), 4);
    let per_i: Vec<Vec<PuiseuxSeries>> = (1..=k)
        .into_par_iter()
        .map(|i| {
            let ch = affine_character_at(k, i, cutoff + reach)?;
            (0..i)
                .map(|n| {
                    let m = i64::from(i) - 2 * i64::from(n);
                    let string = extract_string(&ch, k, m, cutoff)?;
                    eta_times(level, &string, depth)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_i.into_iter().flatten().collect())
}

/// Residuals of `Z_a(i) = Σ_b S_{ab} Z_b(i)` at the fixed point `τ = i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointReport {
    pub depth: u32,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub max_tail: f64,
}

pub fn s_fixed_point_check(level: Level, depth: u32) -> Result<FixedPointReport> {
    let s = s_matrix(level)?;
    let chars = pf_characters(level, depth)?;
    fixed_point_from(&s, &chars, depth)
}

fn fixed_point_from(s: &SMatrix, chars: &[PuiseuxSeries], depth: u32) -> Result<FixedPointReport> {
    let tau = Complex64::new(0.0, 1.0);
    let evals = chars
        .iter()
        .map(|c| c.evaluate(tau))
        .collect::<Result<Vec<_>>>()?;
    let n = s.dim();
    let residuals: Vec<f64> = (0..n)
        .map(|a| {
            let image: Complex64 = (0..n).map(|b| s.get(a, b) * evals[b].value).sum();
            (evals[a].value - image).norm()
        })
        .collect();
    Ok(FixedPointReport {
        depth,
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        max_tail: evals.iter().map(|e| e.tail).fold(0.0, f64::max),
        residuals,
    })
}

/// Estimates of `Z_M(iy) / Z_V(iy)` for every canonical label, in label
/// order. Characters are evaluated at `i/y`, where they converge quickly,
/// and carried back with the S-matrix.
pub fn qdim_limit_estimates(level: Level, y: f64, depth: u32) -> Result<Vec<f64>> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "y = {y} must lie in (0, 1)"
        )));
    }
    let s = s_matrix(level)?;
    let chars = pf_characters(level, depth)?;
    let tau = Complex64::new(0.0, 1.0 / y);
    let evals = chars
        .iter()
        .map(|c| c.evaluate(tau))
        .collect::<Result<Vec<_>>>()?;
    let n = s.dim();
    let transformed = |a: usize| -> Result<Complex64> {
        let value: Complex64 = (0..n).map(|b| s.get(a, b) * evals[b].value).sum();
        let tail: f64 = (0..n).map(|b| s.get(a, b).norm() * evals[b].tail).sum();
        if tail > 0.01 * value.norm() {
            return Err(Error::InsufficientTruncation {
                tail,
                numerator: value.norm(),
            });
        }
        Ok(value)
    };
    let vacuum = transformed(s.vacuum_index())?;
    (0..n).map(|a| Ok((transformed(a)? / vacuum).re)).collect()
}

pub fn qdim_limit_estimate(level: Level, label: CanonicalLabel, y: f64, depth: u32) -> Result<f64> {
    level.check_canonical(label)?;
    Ok(qdim_limit_estimates(level, y, depth)?[level.index_of(label)])
}

/// Comparison of `η · ch L(k,i)` with `Σ_j Θ_{i-2j,k} · ch M^{i,j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingReport {
    pub i: u32,
    pub compared_terms: usize,
    pub mismatched_terms: usize,
}

/// Reassembles the affine character from lattice theta functions and
/// parafermion characters, one term per charge sector `j = 0..k-1`.
pub fn branching_check(level: Level, i: AffineLabel, depth: u32) -> Result<BranchingReport> {
    check_depth(depth)?;
    let k = level.k();
    let cc = CentralCharges::new(level);
    let target = Rational64::from_integer(i64::from(depth)) - cc.c_parafermion / 24;
    let ch = affine_character(level, i, target + rat(1, 1))?;
    let lhs = eta_series(depth + 2).to_two_var().mul(&ch)?;

    let mut rhs = TwoVarSeries::zero(target, level.series_denominator(), target + rat(1, 1));
    let theta_cut = Rational64::from_integer(i64::from(depth) + 1);
    for j in 0..k {
        let label = level.canonicalize(PfLabel::new(level, i.get().into(), j.into())?)?;
        let character = pf_character(level, label, depth)?;
        let r = i64::from(i.get()) - 2 * i64::from(j);
        let term = theta_series(r, u64::from(k), theta_cut).mul(&character.to_two_var())?;
        rhs = rhs.add(&term)?;
    }
    if lhs.cutoff() < target || rhs.cutoff() < target {
        return Err(Error::TruncationTooSmall(format!(
            "branching sides exact below {} and {}, needed {target}",
            lhs.cutoff(),
            rhs.cutoff()
        )));
    }
    let lhs = lhs.truncate(target);
    let diff = lhs.sub(&rhs.truncate(target))?;
    Ok(BranchingReport {
        i: i.get(),
        compared_terms: lhs.iter().map(|(_, p)| p.len()).sum(),
        mismatched_terms: diff.iter().map(|(_, p)| p.len()).sum(),
    })
}
