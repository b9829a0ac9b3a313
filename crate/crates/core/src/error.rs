use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field degree n={n}: n must be even with 4 <= n <= {max}")]
    UnsupportedDegree { n: u32, max: u32 },

    #[error("element 0x{bits:x} does not fit in {n} bits")]
    ElementOutOfRange { bits: u64, n: u32 },

    #[error("subfield degree {sub} does not divide {n}")]
    NotADivisor { sub: u32, n: u32 },

    #[error("zero raised to a negative power")]
    ZeroToNegativePower,

    #[error("polynomial exponents must be >= 1 (got {0})")]
    NonPositiveExponent(i128),

    #[error("malformed polynomial term `{0}`: expected coeffhex:exp")]
    MalformedTerm(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{0}")]
    ConditionFailed(String),

    #[error("exponent {exp} is not congruent to {lead} modulo 2^m-1 = {modulus}")]
    NotNihoCongruent { lead: u64, exp: u64, modulus: u64 },

    #[error("gcd(d1, 2^n-1) = gcd({d1}, {order}) != 1")]
    LeadNotCoprime { d1: u64, order: u64 },

    #[error("engine needs 2^(2n) work; n={n} exceeds the cap {cap} (raise the cap to override)")]
    SizeCapExceeded { n: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
