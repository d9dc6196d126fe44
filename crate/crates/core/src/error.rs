use core::fmt;

/// Which side of a resonance a half-maximum search ran on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain.
    #[error("{what} must be {constraint}, got {value}")]
    Domain {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// The incident energy is not below a barrier height.
    #[error("incident energy {energy} eV is not below barrier height {height} eV (tunneling regime only)")]
    UnsupportedRegime { energy: f64, height: f64 },

    /// A hyperbolic argument passed the overflow guard.
    #[error("decay exponent {exponent} exceeds the overflow guard of {limit}")]
    Overflow { exponent: f64, limit: f64 },

    /// The incident energy sits on a segment height, where the local wave
    /// number vanishes.
    #[error("incident energy {energy} eV coincides with segment height {height} eV; perturb the request")]
    DegenerateEnergy { energy: f64, height: f64 },

    /// Transfer-matrix determinant drifted away from one.
    #[error("transfer matrix determinant drifted by {drift:e}")]
    DeterminantDrift { drift: f64 },

    /// The half-maximum level was not crossed before the neighbouring
    /// resonance (or the end of the admissible window).
    #[error("half maximum not bracketed on the {side} side of the resonance at k = {k_res}; resonances overlap")]
    Overlap { k_res: f64, side: Side },

    /// The transmitted phase jumped inside a finite-difference stencil.
    #[error("phase discontinuity inside the stencil at k = {k}; retry with dk below {suggested_dk:e}")]
    PhaseDiscontinuity { k: f64, suggested_dk: f64 },

    /// The root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    /// The root finder ran out of iterations.
    #[error("root finder did not converge, last estimate {last}")]
    NoConvergence { last: f64 },

    /// An operation needing at least one item received none.
    #[error("{0} is empty")]
    Empty(&'static str),

    /// A width that must be positive came out as zero.
    #[error("zero {0}; half-maximum bracketing failed")]
    ZeroWidth(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, constraint: &'static str, value: f64) -> Error {
    Error::Domain {
        what,
        constraint,
        value,
    }
}
