use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient ring `Z/p^e` for an odd prime `p`.
///
/// Public computations only ever use `e = 1` or `e = 2`; larger exponents
/// exist for the ghost-component arithmetic of length-3 Witt vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: u64,
    e: u32,
    #[serde(skip)]
    q: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Modulus {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidModulus(format!("{p} is not an odd prime")));
        }
        if e == 0 {
            return Err(Error::InvalidModulus("exponent must be positive".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q
                .checked_mul(p)
                .filter(|q| *q < (1 << 62))
                .ok_or_else(|| Error::InvalidModulus(format!("{p}^{e} too large")))?;
        }
        Ok(Modulus { p, e, q })
    }

    /// `Z/p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `p^e`.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn with_exponent(&self, e: u32) -> Modulus {
        Modulus::new(self.p, e).expect("valid prime stays valid")
    }

    pub fn reduce(&self, c: u64) -> u64 {
        c % self.q
    }

    pub fn reduce_i(&self, c: i128) -> u64 {
        c.rem_euclid(self.q as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut n: u64) -> u64 {
        let mut r = 1 % self.q;
        a %= self.q;
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            n >>= 1;
        }
        r
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit; `None` when `a` is divisible by `p`.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        // phi(p^e) = p^(e-1) (p-1)
        let phi = self.q / self.p * (self.p - 1);
        Some(self.pow(a, phi - 1))
    }

    /// Teichmüller representative of `a mod p` in `Z/p^e`.
    pub fn teichmuller(&self, a: u64) -> u64 {
        let mut t = a % self.p;
        for _ in 1..self.e {
            t = self.pow(t, self.p);
        }
        t
    }

    /// Centered representative in `(-q/2, q/2]`.
    pub fn centered(&self, a: u64) -> i64 {
        let a = a % self.q;
        if a > self.q / 2 {
            a as i64 - self.q as i64
        } else {
            a as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        assert!(Modulus::new(2, 1).is_err());
        assert!(Modulus::new(9, 1).is_err());
        assert!(Modulus::new(5, 0).is_err());
        assert!(Modulus::new(5, 2).is_ok());
    }

    #[test]
    fn inverses_and_teichmuller() {
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(m.mul(m.inv(2).unwrap(), 2), 1);
        assert_eq!(m.inv(10), None);
        // 2^5 = 32 = 7 mod 25
        assert_eq!(m.teichmuller(2), 7);
        assert_eq!(m.pow(m.teichmuller(3), 5), m.teichmuller(3));
    }
}
