use thiserror::Error;

/// Errors produced by domain validation and simulator construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the requested quantity.
    #[error("{name} = {value} is out of domain: {rule}")]
    Domain {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },

    /// A basis-state index does not address any amplitude of the state space.
    #[error("basis index {index} is out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    /// A size or depth parameter exceeds the dense-matrix desk-scale cap.
    #[error("{name} = {value} exceeds the supported cap of {cap}")]
    SizeCap {
        name: &'static str,
        value: usize,
        cap: usize,
    },

    /// The requested angle has no tabulated closed form.
    #[error("theta = {0} rad is not one of the tabulated angles pi/2, 2pi/3, 3pi/4, 5pi/6")]
    NotTabulated(f64),

    /// A matrix or state failed a structural invariant at construction.
    #[error("construction failed: {0}")]
    Construction(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
