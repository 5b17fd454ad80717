use crate::speeds::CaseTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("euler angles out of range: {0}")]
    AngleRange(String),

    #[error("evaluation at the polar singularity sin(theta) = 0 (theta = {theta})")]
    PolarSingularity { theta: f64 },

    #[error("wigner_matrix expects an SU(2) representation index; use torus_character for torus indices")]
    NotSu2Rep,

    #[error("operation requires the SU(2) backend")]
    NotSu2Backend,

    #[error("band limit mismatch: {context} (grid/symbol supports {supported}, requested {requested})")]
    BandLimit {
        context: &'static str,
        supported: u32,
        requested: u32,
    },

    #[error("sample vector has {got} values but the grid has {expected} nodes")]
    GridMismatch { expected: usize, got: usize },

    #[error("mollification scale must lie in (0, 1], got {epsilon}")]
    EpsilonRange { epsilon: f64 },

    #[error(
        "stability guard violated: dt * nu * sqrt(sup a) = {product:.6} > 0.5; \
         use dt <= {max_dt:.6e}"
    )]
    StabilityGuard { product: f64, max_dt: f64 },

    #[error("operation requires a case {expected} profile, got case {got}")]
    WrongCase { expected: CaseTag, got: CaseTag },

    #[error("Gevrey order s = {s} outside the admissible interval [1, {upper}) for case {case}")]
    GevreyOrder { s: f64, upper: f64, case: CaseTag },

    #[error("Gevrey index s must satisfy s >= 1, got {s}")]
    SRange { s: f64 },

    #[error("mode frequency nu = {nu} is in the analytic regime; the transformed evolution requires nu >= 1")]
    NuRange { nu: f64 },

    #[error("Gevrey fit needs at least {needed} nonzero shells, found {found}")]
    FitUnderdetermined { needed: usize, found: usize },

    #[error(
        "symbol oracle disagreement: closed form and Euler-angle operator differ by {deviation:.3e} \
         (tolerance {tolerance:.1e}) at two_ell = {two_ell}"
    )]
    OracleMismatch {
        deviation: f64,
        tolerance: f64,
        two_ell: u32,
    },

    #[error("unknown speed profile key '{0}'")]
    ProfileKey(String),

    #[error("invalid profile parameter: {0}")]
    ProfileParam(String),

    #[error("horizon mismatch: profile is defined on [0, {profile}] but the problem runs to {requested}")]
    Horizon { profile: f64, requested: f64 },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}
