/// Numerical tolerances used when building and checking modular data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Bound on `max |(S S^†)_{ab} - δ_{ab}|`.
    pub unitarity: f64,
    /// Bound on `|κ - 2|` for the fitted S-matrix normalization.
    pub kappa: f64,
    /// Bound on the distance of a Verlinde sum from the nearest integer.
    pub rounding: f64,
}

impl Tolerances {
    pub const DEFAULT_UNITARITY: f64 = 1e-10;
    pub const DEFAULT_KAPPA: f64 = 1e-9;
    pub const DEFAULT_ROUNDING: f64 = 1e-7;
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitarity: Self::DEFAULT_UNITARITY,
            kappa: Self::DEFAULT_KAPPA,
            rounding: Self::DEFAULT_ROUNDING,
        }
    }
}
