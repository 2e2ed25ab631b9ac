use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::OracleError;

/// An element of `Z[q, q^-1]`, stored sparsely as exponent -> coefficient.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.add_term(e, BigInt::from(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `q^k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Dense coefficients of `q^{-min} * self`, lowest degree first.
    fn dense(&self) -> (i64, Vec<BigInt>) {
        let (Some(lo), Some(hi)) = (self.min_exponent(), self.max_exponent()) else {
            return (0, Vec::new());
        };
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    /// Exact division in `Z[q, q^-1]`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, OracleError> {
        if divisor.is_zero() {
            return Err(OracleError::InexactDivision("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (num_shift, mut rem) = self.dense();
        let (den_shift, den) = divisor.dense();
        if rem.len() < den.len() {
            return Err(OracleError::InexactDivision(format!("{self} / {divisor}")));
        }
        let lead = den.last().expect("nonzero divisor");
        let mut quot = vec![BigInt::zero(); rem.len() - den.len() + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + den.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(OracleError::InexactDivision(format!("{self} / {divisor}")));
            }
            for (t, d) in den.iter().enumerate() {
                rem[k + t] -= &q * d;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(OracleError::InexactDivision(format!("{self} / {divisor}")));
        }
        let mut out = Self::zero();
        for (k, c) in quot.into_iter().enumerate() {
            out.add_term(num_shift - den_shift + k as i64, c);
        }
        Ok(out)
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = abs.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{abs}q")?,
                (e, true) => write!(f, "q^{e}")?,
                (e, false) => write!(f, "{abs}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// The quantum integer `[n] = (q^n - q^-n) / (q - q^-1)`.
pub fn q_int(n: i64) -> LaurentScalar {
    let sign = n.signum();
    let m = n.abs();
    LaurentScalar::from_terms((0..m).map(|k| (m - 1 - 2 * k, sign)))
}

/// `[n]! = [1][2]...[n]`.
pub fn q_factorial(n: u32) -> LaurentScalar {
    (1..=n as i64).fold(LaurentScalar::one(), |acc, k| &acc * &q_int(k))
}

/// The Gaussian binomial `[m choose k] = [m]! / ([k]! [m-k]!)`, computed by
/// exact division.
pub fn q_binomial(m: u32, k: u32) -> Result<LaurentScalar, OracleError> {
    if k > m {
        return Err(OracleError::InexactDivision(format!("[{m} choose {k}] with k > m")));
    }
    let den = &q_factorial(k) * &q_factorial(m - k);
    q_factorial(m).exact_div(&den)
}
