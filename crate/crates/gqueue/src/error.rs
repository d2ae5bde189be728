use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the analytic solver and the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("transform evaluated at a pole (s = {s})")]
    LstPole { s: Complex64 },

    #[error("unsupported derivative order {order}; orders 1 and 2 are available")]
    UnsupportedOrder { order: u32 },

    #[error("model is unstable: stability requires {condition} (load {rho:.6})")]
    Unstable { condition: String, rho: f64 },

    #[error(
        "characteristic root count mismatch: expected {expected}, found {found} \
         (winding count {winding})"
    )]
    RootCount {
        expected: usize,
        found: usize,
        winding: i64,
    },

    #[error(
        "near-multiple characteristic roots (min pairwise distance {gap:.3e}); \
         the geometric solution form assumes distinct roots"
    )]
    DegenerateSpectrum { gap: f64 },

    #[error("linear system is ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("residual {residual:.3e} exceeds tolerance {tolerance:.3e} in {context}")]
    ResidualTooLarge {
        residual: f64,
        tolerance: f64,
        context: &'static str,
    },

    #[error(
        "contour quadrature did not stabilize at {nodes} nodes; a root may lie close \
         to the contour (perturb the radius)"
    )]
    QuadratureDiverged { nodes: usize },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("probability at n = {n} has imaginary part {imag:.3e} (tolerance 1e-9)")]
    ImaginaryResidue { n: usize, imag: f64 },

    #[error("probability at n = {n} is {value:.3e}, below the -1e-12 floor")]
    NegativeProbability { n: usize, value: f64 },

    #[error("no real characteristic root found; the decay rate is undefined")]
    NoRealRoot,

    #[error("compared results were produced from different model parameters")]
    ParameterMismatch,

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
