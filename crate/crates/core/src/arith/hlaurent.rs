//! Laurent polynomials in ħ with coefficients in `QPoly`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::qpoly::{owned_ops, QPoly};
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HLaurent {
    terms: BTreeMap<i32, QPoly>,
}

impl HLaurent {
    pub fn zero() -> HLaurent {
        HLaurent::default()
    }

    pub fn one() -> HLaurent {
        HLaurent::from(QPoly::one())
    }

    pub fn hbar() -> HLaurent {
        HLaurent::hbar_pow(1)
    }

    pub fn hbar_pow(m: i32) -> HLaurent {
        HLaurent::term(m, QPoly::one())
    }

    /// `c · ħ^m`.
    pub fn term(m: i32, c: QPoly) -> HLaurent {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        HLaurent { terms }
    }

    pub fn constant(c: Rat) -> HLaurent {
        HLaurent::from(QPoly::constant(c))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, QPoly)>) -> HLaurent {
        let mut out = HLaurent::zero();
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    fn add_term(&mut self, m: i32, c: &QPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &QPoly)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Coefficient of `ħ^m`.
    pub fn coeff(&self, m: i32) -> QPoly {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn min_hbar(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_hbar(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_hbar_free(&self) -> bool {
        self.terms.keys().all(|m| *m == 0)
    }

    /// The ħ-free part, if there is nothing else.
    pub fn as_qpoly(&self) -> Option<QPoly> {
        if self.is_hbar_free() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// The value as a rational constant, if it is one.
    pub fn as_rat(&self) -> Option<Rat> {
        let c = self.as_qpoly()?;
        match c.len() {
            0 => Some(Rat::zero()),
            1 if c.min_exponent().is_some_and(|e| e.is_zero()) => Some(c.constant_term()),
            _ => None,
        }
    }

    /// Substitution ħ ↦ −ħ.
    pub fn negate_hbar(&self) -> HLaurent {
        HLaurent {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }

    /// θ applied coefficientwise; ħ is a constant.
    pub fn theta(&self) -> HLaurent {
        HLaurent::from_terms(self.terms.iter().map(|(m, c)| (*m, c.theta())))
    }

    /// Value at q = 0 (only `q^0` terms survive).
    pub fn at_q_zero(&self) -> HLaurent {
        HLaurent::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (*m, QPoly::constant(c.constant_term()))),
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPoly) -> QPoly) -> HLaurent {
        HLaurent::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn scale(&self, c: &Rat) -> HLaurent {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_qpoly(&self, c: &QPoly) -> HLaurent {
        self.map_coeffs(|p| p * c)
    }

    pub fn shift_hbar(&self, k: i32) -> HLaurent {
        HLaurent {
            terms: self.terms.iter().map(|(m, c)| (m + k, c.clone())).collect(),
        }
    }

    /// Inverse of a monomial unit `c q^e ħ^m`.
    pub fn inv(&self) -> Result<HLaurent> {
        match self.terms.len() {
            0 => Err(Error::DivisionByZero),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                Ok(HLaurent::term(-m, c.inv().map_err(|_| Error::NotAUnit(self.to_string()))?))
            }
            _ => Err(Error::NotAUnit(self.to_string())),
        }
    }

    pub fn pow(&self, n: u32) -> HLaurent {
        let mut acc = HLaurent::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Weighted degree with |ħ| = 2 and the given |q|; `None` if zero or inhomogeneous.
    pub fn degree(&self, q_weight: &Rat) -> Option<Rat> {
        let mut out: Option<Rat> = None;
        for (m, c) in &self.terms {
            for (e, _) in c.terms() {
                let d = &e * q_weight + Rat::integer(2 * i64::from(*m));
                match &out {
                    None => out = Some(d),
                    Some(prev) if *prev == d => {}
                    Some(_) => return None,
                }
            }
        }
        out
    }

    /// True when zero or homogeneous of degree `deg`.
    pub fn is_homogeneous_of(&self, deg: &Rat, q_weight: &Rat) -> bool {
        self.is_zero() || self.degree(q_weight).as_ref() == Some(deg)
    }

    /// Errors when an ħ exponent leaves `[-window, window]`.
    pub fn check_window(&self, window: i32) -> Result<()> {
        for m in self.terms.keys() {
            if m.abs() > window {
                return Err(Error::HbarWindow {
                    exponent: *m,
                    window,
                });
            }
        }
        Ok(())
    }

    /// Value at `q^{1/L} = t`, `ħ = h`.
    pub fn eval(&self, t: &Rat, big_l: u64, h: &Rat) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += &(c.eval_root(t, big_l)? * h.pow(*m));
        }
        Ok(acc)
    }

    /// Root order of q needed by every coefficient.
    pub fn root_order(&self) -> u64 {
        self.terms
            .values()
            .map(QPoly::root_order)
            .fold(1, super::rat::lcm_u64)
    }

    pub fn has_negative_q(&self) -> bool {
        self.terms.values().any(|c| c.has_negative_exponent())
    }
}

impl From<QPoly> for HLaurent {
    fn from(c: QPoly) -> HLaurent {
        HLaurent::term(0, c)
    }
}

impl From<Rat> for HLaurent {
    fn from(c: Rat) -> HLaurent {
        HLaurent::constant(c)
    }
}

impl fmt::Display for HLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let h = match m {
                0 => String::new(),
                1 => "ħ".to_string(),
                _ => format!("ħ^{m}"),
            };
            if h.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{h}")?;
            } else if c.len() == 1 {
                write!(f, "{c} {h}")?;
            } else {
                write!(f, "({c}) {h}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&HLaurent> for &HLaurent {
    type Output = HLaurent;
    fn add(self, rhs: &HLaurent) -> HLaurent {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Neg for &HLaurent {
    type Output = HLaurent;
    fn neg(self) -> HLaurent {
        HLaurent {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Sub<&HLaurent> for &HLaurent {
    type Output = HLaurent;
    fn sub(self, rhs: &HLaurent) -> HLaurent {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Mul<&HLaurent> for &HLaurent {
    type Output = HLaurent;
    fn mul(self, rhs: &HLaurent) -> HLaurent {
        let mut out = HLaurent::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma + mb, &(ca * cb));
            }
        }
        out
    }
}

owned_ops!(HLaurent);

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> QPoly {
        QPoly::monomial(Rat::new(1, 2), &Rat::new(1, 2))
    }

    #[test]
    fn hbar_negation_examples() {
        let x = HLaurent::term(1, r().scale(&Rat::integer(27)));
        assert_eq!(x.negate_hbar(), -&x);
        let y = &HLaurent::term(2, QPoly::constant(Rat::new(-9, 8)))
            + &HLaurent::from((&r() * &r()).scale(&Rat::new(27, 2)));
        assert_eq!(y.negate_hbar(), y);
        let z = &HLaurent::hbar() + &HLaurent::hbar_pow(-1);
        assert_eq!(z.negate_hbar(), -&z);
    }

    #[test]
    fn monomial_units() {
        let x = HLaurent::term(-2, QPoly::monomial(Rat::integer(6), &Rat::new(-1, 3)));
        assert!((&x * &x.inv().unwrap()).is_one());
        let y = &HLaurent::one() + &HLaurent::hbar();
        assert!(matches!(y.inv(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn degrees() {
        let qw = Rat::integer(2);
        // 27 ħ r has degree 2 + 1/2·2 = 3 under |q| = 2.
        let x = HLaurent::term(1, r().scale(&Rat::integer(27)));
        assert_eq!(x.degree(&qw), Some(Rat::integer(3)));
        let y = &x + &HLaurent::one();
        assert_eq!(y.degree(&qw), None);
    }

    #[test]
    fn window() {
        let x = HLaurent::hbar_pow(-3);
        assert!(x.check_window(3).is_ok());
        assert!(matches!(
            x.check_window(2),
            Err(Error::HbarWindow { exponent: -3, .. })
        ));
    }
}
