//! Polynomials in fractional powers of `q`.
//!
//! A [`QPoly`] is a finite sum `Σ c_k q^{k/N}` stored over a root order `N`.
//! Exponents may be negative: operator words such as `m q^{-Δ} (ħθ)` need
//! them, and the ring constructions check that none survive in their output.
//! The canonical form keeps `N` minimal, so structural equality is equality
//! of polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::{gcd_u64, lcm_u64, Rat};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    root: u64,
    terms: BTreeMap<i64, Rat>,
}

impl Default for QPoly {
    fn default() -> Self {
        QPoly::zero()
    }
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly {
            root: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> QPoly {
        QPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> QPoly {
        QPoly::monomial(c, &Rat::zero())
    }

    /// `c · q^exponent`.
    pub fn monomial(c: Rat, exponent: &Rat) -> QPoly {
        let root = exponent.denom_u64();
        let k = (exponent * &Rat::from(root))
            .to_i64()
            .expect("q exponent out of range");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        QPoly { root, terms }.normalized()
    }

    pub fn q() -> QPoly {
        QPoly::monomial(Rat::one(), &Rat::one())
    }

    /// Builds from `(k, c)` pairs meaning `c · q^{k/root}`.
    pub fn from_terms(root: u64, terms: impl IntoIterator<Item = (i64, Rat)>) -> QPoly {
        assert!(root > 0, "root order must be positive");
        let mut map: BTreeMap<i64, Rat> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_default() += &c;
        }
        QPoly { root, terms: map }.normalized()
    }

    fn normalized(mut self) -> QPoly {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.root = 1;
            return self;
        }
        let mut g = self.root;
        for &k in self.terms.keys() {
            g = gcd_u64(g, k.unsigned_abs());
        }
        if g > 1 {
            let gi = g as i64;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k / gi, c))
                .collect();
            self.root /= g;
        }
        self
    }

    /// Exponent numerators rescaled to root order `target` (a multiple of `self.root`).
    fn rescaled(&self, target: u64) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        debug_assert_eq!(target % self.root, 0);
        let s = (target / self.root) as i64;
        self.terms.iter().map(move |(k, c)| (k * s, c))
    }

    pub fn root_order(&self) -> u64 {
        self.root
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(exponent, coefficient)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &Rat)> + '_ {
        let n = self.root as i64;
        self.terms.iter().map(move |(k, c)| (Rat::new(*k, n), c))
    }

    /// Coefficient of `q^exponent`.
    pub fn coeff(&self, exponent: &Rat) -> Rat {
        let scaled = exponent * &Rat::from(self.root);
        match scaled.to_i64() {
            Some(k) => self.terms.get(&k).cloned().unwrap_or_default(),
            None => Rat::zero(),
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&0).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<Rat> {
        self.terms
            .keys()
            .next()
            .map(|k| Rat::new(*k, self.root as i64))
    }

    pub fn max_exponent(&self) -> Option<Rat> {
        self.terms
            .keys()
            .next_back()
            .map(|k| Rat::new(*k, self.root as i64))
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().next().is_some_and(|k| *k < 0)
    }

    pub fn as_monomial(&self) -> Option<(Rat, &Rat)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            root: self.root,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `q^exponent`.
    pub fn shift(&self, exponent: &Rat) -> QPoly {
        self * &QPoly::monomial(Rat::one(), exponent)
    }

    /// Inverse of a monomial unit `c q^e`.
    pub fn inv(&self) -> Result<QPoly> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self.as_monomial() {
            Some((e, c)) => Ok(QPoly::monomial(c.recip()?, &-e)),
            None => Err(Error::NotAUnit(self.to_string())),
        }
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `θ = q d/dq`, acting by `q^{k/N} ↦ (k/N) q^{k/N}`.
    pub fn theta(&self) -> QPoly {
        let n = self.root as i64;
        QPoly {
            root: self.root,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c * &Rat::new(*k, n)))
                .collect(),
        }
        .normalized()
    }

    /// Degree of `c q^e` is `e · q_weight`; `None` for zero or inhomogeneous input.
    pub fn degree(&self, q_weight: &Rat) -> Option<Rat> {
        let mut it = self.terms();
        let (e0, _) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some(&e0 * q_weight)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.len() <= 1
    }

    /// Value at `q^{1/L} = t`; `L` must be a multiple of the root order.
    pub fn eval_root(&self, t: &Rat, big_l: u64) -> Result<Rat> {
        if big_l % self.root != 0 {
            return Err(Error::Dimension(format!(
                "evaluation root {big_l} is not a multiple of {}",
                self.root
            )));
        }
        let mut acc = Rat::zero();
        for (k, c) in self.rescaled(big_l) {
            let k = i32::try_from(k).map_err(|_| Error::Internal("exponent overflow".into()))?;
            acc += &(c * &t.pow(k));
        }
        Ok(acc)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if e.is_zero() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a} ")?;
                }
                if e.is_one() {
                    write!(f, "q")?;
                } else if e.is_integer() && !e.is_negative() {
                    write!(f, "q^{e}")?;
                } else {
                    write!(f, "q^({e})")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let root = lcm_u64(self.root, rhs.root);
        let mut terms: BTreeMap<i64, Rat> = self.rescaled(root).map(|(k, c)| (k, c.clone())).collect();
        for (k, c) in rhs.rescaled(root) {
            *terms.entry(k).or_default() += c;
        }
        QPoly { root, terms }.normalized()
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            root: self.root,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let root = lcm_u64(self.root, rhs.root);
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ka, ca) in self.rescaled(root) {
            for (kb, cb) in rhs.rescaled(root) {
                *terms.entry(ka + kb).or_default() += &(ca * cb);
            }
        }
        QPoly { root, terms }.normalized()
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(QPoly);

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: (i64, i64), e: (i64, i64)) -> QPoly {
        QPoly::monomial(Rat::new(c.0, c.1), &Rat::new(e.0, e.1))
    }

    #[test]
    fn fractional_exponents_add_over_common_root() {
        let p = &qp((1, 1), (1, 3)) * &qp((1, 1), (1, 6));
        assert_eq!(p, qp((1, 1), (1, 2)));
        assert_eq!(p.root_order(), 2);
    }

    #[test]
    fn monomial_inverse() {
        let x = qp((6, 1), (-1, 3));
        assert_eq!(x.inv().unwrap(), qp((1, 6), (1, 3)));
        let two_terms = &QPoly::one() + &QPoly::q();
        assert!(matches!(two_terms.inv(), Err(Error::NotAUnit(_))));
        assert!(matches!(QPoly::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(qp((1, 1), (1, 2)).theta(), qp((1, 2), (1, 2)));
        assert!(QPoly::constant(Rat::integer(5)).theta().is_zero());
        // r = q^(1/2)/2, so 12 r^2 = 3q and θ(3q) = 3q.
        let r = qp((1, 2), (1, 2));
        let twelve_r2 = (&r * &r).scale(&Rat::integer(12));
        assert_eq!(twelve_r2.theta(), qp((3, 1), (1, 1)));
    }

    #[test]
    fn canonical_root_after_cancellation() {
        let a = &qp((1, 1), (1, 2)) + &QPoly::q();
        let b = &a - &qp((1, 1), (1, 2));
        assert_eq!(b, QPoly::q());
        assert_eq!(b.root_order(), 1);
    }

    #[test]
    fn degree_tracks_q_weight() {
        let x = qp((1, 6), (1, 3));
        assert_eq!(x.degree(&Rat::integer(12)), Some(Rat::integer(4)));
        assert_eq!((&x + &QPoly::one()).degree(&Rat::integer(12)), None);
    }

    #[test]
    fn display() {
        let x = &qp((1, 6), (1, 3)) - &QPoly::one();
        assert_eq!(x.to_string(), "-1 + 1/6 q^(1/3)");
    }
}
