/// Numerical thresholds shared by the floating-point code paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub rank_eps: f64,
    /// Relative residual a computed root must reach.
    pub root_residual: f64,
    /// Relative reconstruction residual accepted when verifying certificates.
    pub verify: f64,
    /// Chordal root separation at or below which a form has a square factor.
    pub square_factor: f64,
    /// Chordal root separation at or above which a form is square-free.
    /// Separations strictly between the two thresholds are reported as ambiguous.
    pub square_free: f64,
    pub aberth_max_iter: usize,
    /// Seed for the root finder's initial guesses.
    pub seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_eps: 1e-10,
            root_residual: 1e-10,
            verify: 1e-8,
            square_factor: 1e-4,
            square_free: 1e-3,
            aberth_max_iter: 500,
            seed: 0x5eed,
        }
    }
}

impl Tolerances {
    pub fn with_rank_eps(mut self, eps: f64) -> Self {
        self.rank_eps = eps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
