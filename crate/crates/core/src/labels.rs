//! Module labels for the parafermion algebra at level `k`.
//!
//! A raw label `(m, n)` with `0 <= m <= k` and `n` taken modulo `k` names the
//! module `M^{m,n}`. The identification `M^{m,n} ~ M^{k-m, k-m+n}` pairs the
//! `k(k+1)` raw labels into `k(k+1)/2` isomorphism classes; each class has
//! exactly one canonical representative with `1 <= m <= k` and `n <= m-1`.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};

/// The level `k >= 2` of the underlying affine `sl_2` algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level(u32);

impl Level {
    pub fn new(k: i64) -> Result<Self> {
        if (2..=i64::from(u32::MAX / 4)).contains(&k) {
            Ok(Level(k as u32))
        } else {
            Err(Error::InvalidLevel(k))
        }
    }

    #[inline]
    pub fn k(self) -> u32 {
        self.0
    }

    /// Number of isomorphism classes of irreducible modules, `k(k+1)/2`.
    pub fn rank(self) -> usize {
        let k = self.0 as usize;
        k * (k + 1) / 2
    }

    /// `M^{m,n} -> M^{k-m, (k-m+n) mod k}`.
    pub fn involution(self, label: PfLabel) -> Result<PfLabel> {
        self.check(label)?;
        let k = self.0;
        Ok(PfLabel {
            m: k - label.m,
            n: (k - label.m + label.n) % k,
        })
    }

    /// The canonical representative of the class of `label`.
    pub fn canonicalize(self, label: PfLabel) -> Result<CanonicalLabel> {
        self.check(label)?;
        if is_canonical(label.m, label.n) {
            return Ok(CanonicalLabel {
                m: label.m,
                n: label.n,
            });
        }
        let dual = self.involution(label)?;
        debug_assert!(is_canonical(dual.m, dual.n));
        Ok(CanonicalLabel {
            m: dual.m,
            n: dual.n,
        })
    }

    /// All canonical labels in lexicographic `(m, n)` order.
    pub fn labels(self) -> Vec<CanonicalLabel> {
        (1..=self.0)
            .flat_map(|m| (0..m).map(move |n| CanonicalLabel { m, n }))
            .collect()
    }

    /// Position of a canonical label in [`Level::labels`].
    pub fn index_of(self, label: CanonicalLabel) -> usize {
        let m = label.m as usize;
        m * (m - 1) / 2 + label.n as usize
    }

    pub fn vacuum(self) -> CanonicalLabel {
        CanonicalLabel { m: self.0, n: 0 }
    }

    /// Exact lowest `L(0)` eigenvalue of the module with a canonical label:
    ///
    /// `λ = (k(m-2n) - (m-2n)^2 + 2kn(m-n+1)) / (2k(k+2))`.
    pub fn conformal_weight(self, label: CanonicalLabel) -> Result<Rational64> {
        self.check_canonical(label)?;
        let k = i64::from(self.0);
        let m = i64::from(label.m);
        let n = i64::from(label.n);
        let p = m - 2 * n;
        let num = k * p - p * p + 2 * k * n * (m - n + 1);
        Ok(Rational64::new(num, 2 * k * (k + 2)))
    }

    pub fn check(self, label: PfLabel) -> Result<()> {
        if label.m > self.0 || label.n >= self.0 {
            return Err(Error::InvalidLabel {
                k: self.0,
                m: i64::from(label.m),
                n: i64::from(label.n),
            });
        }
        Ok(())
    }

    pub fn check_canonical(self, label: CanonicalLabel) -> Result<()> {
        if label.m > self.0 || !is_canonical(label.m, label.n) {
            return Err(Error::NotCanonical {
                k: self.0,
                m: label.m,
                n: label.n,
            });
        }
        Ok(())
    }

    /// Common exponent denominator `lcm(48, 4k(k+2), 2k)` for all q-series at this level.
    pub fn series_denominator(self) -> u64 {
        use num_integer::Integer;
        let k = u64::from(self.0);
        48u64.lcm(&(4 * k * (k + 2))).lcm(&(2 * k))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.0)
    }
}

#[inline]
fn is_canonical(m: u32, n: u32) -> bool {
    m >= 1 && n < m
}

/// A raw module label `(m, n)`; `n` is stored reduced modulo `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PfLabel {
    m: u32,
    n: u32,
}

impl PfLabel {
    /// Builds `(m, n mod k)`, rejecting `m` outside `[0, k]`.
    pub fn new(level: Level, m: i64, n: i64) -> Result<Self> {
        let k = level.k();
        if !(0..=i64::from(k)).contains(&m) {
            return Err(Error::InvalidLabel { k, m, n });
        }
        Ok(PfLabel {
            m: m as u32,
            n: n.rem_euclid(i64::from(k)) as u32,
        })
    }

    #[inline]
    pub fn m(self) -> u32 {
        self.m
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.n
    }

    /// The `U(1)` charge `m - 2n` of the lattice factor paired with this label.
    #[inline]
    pub fn charge(self) -> i64 {
        i64::from(self.m) - 2 * i64::from(self.n)
    }
}

impl fmt::Display for PfLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// A canonical label: `1 <= m <= k`, `0 <= n <= m-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLabel {
    m: u32,
    n: u32,
}

impl CanonicalLabel {
    pub fn new(level: Level, m: i64, n: i64) -> Result<Self> {
        let raw = PfLabel::new(level, m, n)?;
        if !is_canonical(raw.m, raw.n) || n != i64::from(raw.n) {
            return Err(Error::NotCanonical {
                k: level.k(),
                m: raw.m,
                n: raw.n,
            });
        }
        Ok(CanonicalLabel { m: raw.m, n: raw.n })
    }

    #[inline]
    pub fn m(self) -> u32 {
        self.m
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.n
    }

    #[inline]
    pub fn charge(self) -> i64 {
        i64::from(self.m) - 2 * i64::from(self.n)
    }

    pub fn raw(self) -> PfLabel {
        PfLabel {
            m: self.m,
            n: self.n,
        }
    }
}

impl From<CanonicalLabel> for PfLabel {
    fn from(label: CanonicalLabel) -> Self {
        label.raw()
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Label `i` of the affine module `L(k, i)`, `0 <= i <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLabel(u32);

impl AffineLabel {
    pub fn new(level: Level, i: i64) -> Result<Self> {
        if !(0..=i64::from(level.k())).contains(&i) {
            return Err(Error::InvalidAffineLabel { k: level.k(), i });
        }
        Ok(AffineLabel(i as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

/// Residue `r mod 2k` naming the lattice module `V_{Zγ + rγ/2k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeLabel(u32);

impl LatticeLabel {
    pub fn new(level: Level, r: i64) -> Self {
        LatticeLabel(r.rem_euclid(2 * i64::from(level.k())) as u32)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}
