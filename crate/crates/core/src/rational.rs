use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Exact nonnegative rational, used wherever a degree threshold must be
/// compared without floating-point truncation (e.g. d(H) >= d(G)/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Rational {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        if g == 0 {
            return Rational { num: 0, den: 1 };
        }
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn zero() -> Rational {
        Rational { num: 0, den: 1 }
    }

    /// Average degree of a graph with `m` edges on `n` vertices: 2m/n.
    pub fn average_degree(m: usize, n: usize) -> Rational {
        Rational::new(2 * m as u64, n as u64)
    }

    pub fn halved(self) -> Rational {
        Rational::new(self.num, self.den * 2)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialEq<u64> for Rational {
    fn eq(&self, other: &u64) -> bool {
        self.den == 1 && self.num == *other
    }
}

impl PartialOrd<u64> for Rational {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some((self.num as u128).cmp(&(*other as u128 * self.den as u128)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
