/// Numerical thresholds used throughout the crate.
///
/// Every routine that needs a threshold takes it from here; the defaults are
/// the values the test suites are calibrated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues above `-psd` count as nonnegative.
    pub psd: f64,
    /// Eigenvalues below this are treated as zero when inverting.
    pub sing: f64,
    /// `|rho12|` below this routes to the diagonal (`rho12 = 0`) theory.
    pub offdiag: f64,
    /// `|C2 - C1|` (and `|C1 - 1/2|`) below this counts as equality.
    pub degeneracy: f64,
    /// Slack on both ends of a boundary failure-rate interval.
    pub interval: f64,
    /// Maximum deviation of a barred POVM's sum from the average state.
    pub completeness: f64,
    /// Square-root arguments within this of zero are clamped to zero.
    pub sqrt_clamp: f64,
    /// Sign margin used when classifying the interior branch.
    pub branch: f64,
    /// Allowed disagreement between the two routes to `eta0`.
    pub eta_consistency: f64,
    /// Stop bisecting once `|P_I(q) - Q|` is below this.
    pub bisection_value: f64,
    /// Stop bisecting once the bracket is narrower than this.
    pub bisection_width: f64,
    pub bisection_max_iter: usize,
    /// Residual bound for every KKT condition.
    pub kkt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: 1e-10,
            sing: 1e-12,
            offdiag: 1e-10,
            degeneracy: 1e-10,
            interval: 1e-10,
            completeness: 1e-8,
            sqrt_clamp: 1e-12,
            branch: 1e-12,
            eta_consistency: 1e-8,
            bisection_value: 1e-10,
            bisection_width: 1e-14,
            bisection_max_iter: 200,
            kkt: 1e-9,
        }
    }
}

/// `sqrt(x)` with arguments in `[-clamp, 0)` treated as zero.
pub(crate) fn clamped_sqrt(x: f64, clamp: f64) -> f64 {
    if x < 0.0 && x >= -clamp {
        0.0
    } else {
        x.sqrt()
    }
}
