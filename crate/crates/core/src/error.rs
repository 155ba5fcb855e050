use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: Erdős functions exist only for odd q >= 3")]
    InvalidModulus(u64),

    #[error("invalid Erdős function: {0}")]
    InvalidFunction(String),

    #[error("precision must be at least 53 bits, got {0}")]
    InvalidPrecision(u32),

    #[error("cotangent is singular: {q} divides {a}")]
    SingularArgument { a: i64, q: u64 },

    #[error("Dedekind sum has a singular term: gcd({a_j}, {a_i}) != 1")]
    SingularTerm { a_i: u64, a_j: u64 },

    #[error("parity of f ({function}) does not match parity of k = {k}")]
    ParityMismatch { function: &'static str, k: u32 },

    #[error("non-vanishing bound needs k >= 2, got {0}")]
    BoundVacuous(u32),

    #[error("reciprocity needs M = d + sum(m) even, got {0}")]
    ParityViolation(u32),

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("malformed Dedekind specification: {0}")]
    InvalidSpec(String),

    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailure(String),

    #[error("partitions have different sizes ({0} vs {1})")]
    SizeMismatch(u32, u32),

    #[error("population is empty (q = {q}, k = {k})")]
    EmptyPopulation { q: u32, k: u32 },

    #[error("sub-Gaussian tail bound fails at order 2n = {0}")]
    TailBoundUnavailable(u32),

    #[error("population of {size} functions at q = {q} exceeds the enumeration guard q <= {guard}")]
    PopulationTooLarge { q: u32, size: u64, guard: u32 },

    #[error("{undecided} value(s) at q = {q} remain undecided at {bits} bits")]
    PrecisionExhausted { q: u32, undecided: u64, bits: u32 },

    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("{0}")]
    Domain(String),

    #[error("division by an interval containing zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
