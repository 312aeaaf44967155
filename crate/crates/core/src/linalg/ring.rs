use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision integer used for every exact scalar.
pub type Int = BigInt;

/// Ground ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

impl Ring {
    /// The prime field F_p; fails unless `p` is prime.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::InvalidArguments(format!("{p} is not prime")))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Characteristic, 0 for Z and Q.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Canonical representative of `x` in this ring (entries of Q-matrices are integral).
    pub fn reduce(&self, x: Int) -> Int {
        match self {
            Ring::PrimeField(p) => x.mod_floor(&Int::from(*p)),
            _ => x,
        }
    }

    pub fn from_i64(&self, x: i64) -> Int {
        self.reduce(Int::from(x))
    }

    /// Multiplicative inverse in a prime field.
    pub fn inverse(&self, x: &Int) -> Option<Int> {
        match self {
            Ring::PrimeField(p) => {
                let m = Int::from(*p);
                let x = x.mod_floor(&m);
                if x.is_zero() {
                    return None;
                }
                let e = x.extended_gcd(&m);
                Some(e.x.mod_floor(&m))
            }
            _ => {
                if x.abs().is_one() {
                    Some(x.clone())
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            t if t.starts_with('F') => {
                let p: u64 = t[1..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ring {t:?}")))?;
                Ring::prime_field(p).map_err(|_| Error::Parse(format!("{p} is not prime")))
            }
            t => Err(Error::Parse(format!("unknown ring {t:?}"))),
        }
    }
}
