use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus {0} is not a prime in [2, 2^31]")]
    NonPrimeModulus(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("subspace is not contained in the ambient subspace")]
    NotASubspace,
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("element {0:?} does not lie in the augmentation ideal")]
    NotInPlus(Vec<u64>),
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCapExceeded { dim: u64, cap: u64 },
    #[error("shift does not vanish on A_+^2: {0}")]
    InvalidShift(String),
    #[error("subspace is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("ideal is not stable under the p-map: {0}")]
    NotPIdeal(String),
    #[error("p-map restriction is not additive: {0}")]
    NotAdditive(String),
    #[error("subspace is not stable: {0}")]
    NotStable(String),
    #[error("map is not a divided-power homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("invalid Beck module: {0}")]
    InvalidModule(String),
    #[error("search space of {size} candidates exceeds cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("polynomial has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("degree/term budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("variable index {index} out of range 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("localization is the zero algebra")]
    ZeroLocalization,
    #[error("P-action does not descend to the presented module: {0}")]
    InconsistentPAction(String),
    #[error("localization kernel is not compatible with the grading: {0}")]
    NonGradedLocalization(String),
}
