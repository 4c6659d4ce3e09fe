use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{h} exceeds the supported cap of 2^16")]
    FieldTooLarge { p: u32, h: u32 },
    #[error("modulus encoding {0} is not a monic irreducible polynomial of the requested degree")]
    BadModulus(u64),
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element encoding {enc} out of range for GF({q})")]
    ElementOutOfRange { enc: u32, q: u32 },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("coordinate vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("subspace dimension {k} out of range (allowed {min}..={max})")]
    DimensionOutOfRange { k: isize, min: isize, max: isize },
    #[error("subspace does not lie in the hyperplane at infinity")]
    NotAtInfinity,
    #[error("point does not lie in the flat")]
    PointOutsideFlat,
    #[error("projection centre meets the target subspace")]
    CentreMeetsTarget,
    #[error("affine space AG({n},{q}) is too large for a bit-packed point set")]
    SpaceTooLarge { n: usize, q: u32 },
    #[error("point set has {got} points, expected {expected}")]
    WrongSize { got: usize, expected: usize },
    #[error("quadric parameters invalid: {0}")]
    BadQuadric(String),
    #[error("subspace is not contained in the quadric")]
    NotInQuadric,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
