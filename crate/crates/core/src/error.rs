use thiserror::Error;

/// Errors shared by all modules of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation requested at (or too close to) a pole of a rational function.
    #[error("pole at k = {k}: |denominator| = {denom_abs:e} below tolerance")]
    Pole { k: num_complex::Complex64, denom_abs: f64 },

    /// Matrix dimensions do not match the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Laurent expansion at infinity requested for an unbounded function.
    #[error("function diverges at infinity (numerator degree {num_deg} > denominator degree {den_deg})")]
    DivergesAtInfinity { num_deg: usize, den_deg: usize },

    /// Defect parameters violate `ad - bc = 1` or `|alpha| = 1`.
    #[error("invalid defect parameters: {0}")]
    Parameter(String),

    /// The bound-state exclusion condition fails for the given parameters.
    #[error("parameters admit a bound state: {0}")]
    BoundState(String),

    /// Bound-state condition is undefined (b = 0 and a + d = 0).
    #[error("bound-state condition undefined: b = 0 and a + d = 0")]
    Degenerate,

    /// A function fails its required parity under `k -> -k`.
    #[error("parity violation in {name}: residual {residual:e} at k = {k}")]
    Parity { name: String, residual: f64, k: f64 },

    /// Dilatation functions fail the automorphism identities.
    #[error("dilatation is not an automorphism: {0}")]
    Automorphism(String),

    /// Two momentum magnitudes coincide, violating genericity.
    #[error("momenta not generic: |{a}| and |{b}| coincide")]
    Genericity { a: f64, b: f64 },

    /// A dressed vacuum expectation value is not a multiple of the identity.
    #[error("dressed vacuum value not scalar: off-diagonal magnitude {0:e}")]
    NotScalar(f64),

    /// Differential rendering requested for a non-polynomial spectral entry.
    #[error("entry is not polynomial in k; cannot render as a differential operator")]
    NotPolynomial,

    /// Case solution requested with parameters of a different case.
    #[error("case mismatch: {0}")]
    CaseMismatch(String),

    /// The infinite-dilation limit with sign-indefinite E has no fixed branch.
    #[error("a = infinity with E containing -1 entries: square-root branch undefined")]
    InfinityCase,

    /// Invalid run configuration.
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },
}
