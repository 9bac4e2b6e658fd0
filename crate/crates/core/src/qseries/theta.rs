//! Dedekind eta and classical theta functions as truncated series.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::series::{rat, LaurentPoly, PuiseuxSeries, TwoVarSeries};

/// `η(q) = q^{1/24} Π_{n>=1} (1 - q^n)`, exact for exponents below `1/24 + depth`.
pub fn eta_series(depth: u32) -> PuiseuxSeries {
    let len = depth as usize;
    let mut coeffs = vec![BigInt::zero(); len];
    if len > 0 {
        coeffs[0] = BigInt::one();
    }
    for n in 1..len {
        // multiply by (1 - q^n), high to low so each factor is used once
        for e in (n..len).rev() {
            let below = coeffs[e - n].clone();
            coeffs[e] -= below;
        }
    }
    let offset = rat(1, 24);
    PuiseuxSeries::from_terms(
        offset,
        1,
        offset + Rational64::from_integer(i64::from(depth)),
        coeffs.into_iter().enumerate().map(|(e, c)| {
            (
                offset + Rational64::from_integer(e as i64),
                BigRational::from_integer(c),
            )
        }),
    )
    .expect("integer steps lie on the grid")
}

/// `Θ_{n,m} = Σ_{j ∈ Z + n/2m} q^{m j^2} z^{m j}` for exponents `m j^2 < cutoff`.
///
/// The charge variable carries `2mj`, so the term `q^{c^2/4m}` sits at charge
/// `c` for every `c ≡ n (mod 2m)`.
pub fn theta_series(n: i64, m: u64, cutoff: Rational64) -> TwoVarSeries {
    assert!(m >= 1, "theta index m must be positive");
    let m = m as i64;
    let modulus = 2 * m;
    let mut out = TwoVarSeries::zero(Rational64::zero(), 4 * m as u64, cutoff);
    // c^2 < 4m * cutoff
    let bound = (cutoff * Rational64::from_integer(4 * m))
        .ceil()
        .to_integer()
        .max(0);
    let mut reach = 0i64;
    while reach * reach < bound {
        reach += 1;
    }
    let start = -reach - modulus;
    let first = start + (n - start).rem_euclid(modulus);
    let mut c = first;
    while c <= reach + modulus {
        let e = Rational64::new(c * c, 4 * m);
        if e < cutoff {
            out.add_term(e, &LaurentPoly::monomial(c, BigRational::one()))
                .expect("theta exponents lie on the grid");
        }
        c += modulus;
    }
    out
}
