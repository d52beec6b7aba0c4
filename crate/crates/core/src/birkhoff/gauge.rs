//! Graded gauge transformations solved order by order in q.
//!
//! We look for `X` (new basis = old basis · X) and an ħ-free `ω` with
//! `X ω = A X + ħθ(X)`. Every entry of `X` is a sum of monomials
//! `c q^κ ħ^l` whose degree is pinned by homogeneity, so each unknown is a
//! single rational. At each positive q-exponent the equations are linear in
//! the unknowns of that exponent; lower exponents enter only through the
//! residual. Optionally the Gram matrix `X̄ᵀ H X` is forced to be q-free.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{Equation, HLaurent, LinearSystem, Mat, QPoly, Rat, SolveOutcome};
use crate::error::{Error, Result};

pub struct GaugeAnsatz<'a> {
    pub source: &'a Mat<HLaurent>,
    /// The q⁰ part of `X`; it must be ħ-free.
    pub initial: Mat<Rat>,
    pub src_degrees: &'a [Rat],
    pub dst_degrees: &'a [Rat],
    pub q_weight: Rat,
    /// Monomials `q^{k/root}` only.
    pub root: u64,
    pub hbar_min: i32,
    pub hbar_max: i32,
    pub gram: Option<&'a Mat<HLaurent>>,
    /// Set unknowns left free at some order to zero and rely on the final
    /// exact check. X slots are eliminated first, so the free ones are ω entries.
    pub default_free: bool,
}

#[derive(Clone, Debug)]
pub struct GaugeSolution {
    pub x: Mat<HLaurent>,
    pub omega: Mat<QPoly>,
    /// Number of unknowns set to zero because their order left them free.
    pub defaulted: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    X { i: usize, j: usize, l: i32 },
    Omega { i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum EqKey {
    Flat(usize, usize, i32),
    Gram(usize, usize, i32),
}

/// `X ω − A X − ħθ(X)`.
pub fn gauge_residual(a: &Mat<HLaurent>, x: &Mat<HLaurent>, omega: &Mat<HLaurent>) -> Mat<HLaurent> {
    let lhs = x.matmul(omega);
    let rhs = &a.matmul(x) + &x.theta().map(|e| e.shift_hbar(1));
    &lhs - &rhs
}

fn valid_exponent(kappa: &Rat, root: u64) -> bool {
    kappa.is_positive() && (kappa * &Rat::from(root)).is_integer()
}

fn q_coeff(x: &HLaurent, kappa: &Rat) -> BTreeMap<i32, Rat> {
    x.terms()
        .map(|(m, c)| (m, c.coeff(kappa)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

impl GaugeAnsatz<'_> {
    fn slots(&self) -> BTreeMap<Rat, Vec<Slot>> {
        let n = self.source.rows();
        let two = Rat::integer(2);
        let mut by_order: BTreeMap<Rat, Vec<Slot>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for l in self.hbar_min..=self.hbar_max {
                    let kappa = (&self.dst_degrees[j] - &self.src_degrees[i]
                        - &two * &Rat::integer(i64::from(l)))
                        / self.q_weight.clone();
                    if valid_exponent(&kappa, self.root) {
                        by_order.entry(kappa).or_default().push(Slot::X { i, j, l });
                    }
                }
                let kappa = (&two + &self.dst_degrees[j] - &self.dst_degrees[i]) / self.q_weight.clone();
                if valid_exponent(&kappa, self.root) {
                    by_order.entry(kappa).or_default().push(Slot::Omega { i, j });
                }
            }
        }
        by_order
    }

    pub fn solve(&self) -> Result<GaugeSolution> {
        let n = self.source.rows();
        let a0 = self.source.at_q_zero();
        let x0 = self.initial.to_hlaurent();
        let x0_inv = self.initial.inverse()?.to_hlaurent();
        let omega0 = x0_inv.matmul(&a0).matmul(&x0);
        let omega0_rat = omega0.to_rat().ok_or_else(|| {
            Error::OutsideSmallCell(format!(
                "initial connection X0^-1 A0 X0 is not constant:\n{omega0}"
            ))
        })?;

        let mut x = x0.clone();
        let mut omega = omega0.clone();
        let h0 = self.gram.map(|h| h.at_q_zero());
        let h0x0 = h0.as_ref().map(|h| h.matmul(&x0));
        let x0h0 = h0.as_ref().map(|h| x0.adjoint().matmul(h));

        let mut defaulted = 0;
        for (kappa, mut slots) in self.slots() {
            slots.sort();
            let index: BTreeMap<Slot, usize> =
                slots.iter().enumerate().map(|(k, s)| (*s, k)).collect();
            let mut eqs: BTreeMap<EqKey, Equation> = BTreeMap::new();

            let res = gauge_residual(self.source, &x, &omega);
            for (i, j, e) in res.entries() {
                for (m, c) in q_coeff(e, &kappa) {
                    eqs.entry(EqKey::Flat(i, j, m)).or_default().rhs = -c;
                }
            }
            if let Some(h) = self.gram {
                let g = x.adjoint().matmul(h).matmul(&x);
                for (i, j, e) in g.entries() {
                    for (m, c) in q_coeff(e, &kappa) {
                        eqs.entry(EqKey::Gram(i, j, m)).or_default().rhs = -c;
                    }
                }
            }

            let kap_h = kappa.clone();
            for (slot, &v) in &index {
                match *slot {
                    Slot::X { i, j: k, l } => {
                        // X_κ ω_0
                        for j in 0..n {
                            let c = &omega0_rat[(k, j)];
                            if !c.is_zero() {
                                eqs.entry(EqKey::Flat(i, j, l)).or_default().add(v, c);
                            }
                        }
                        // − A_0 X_κ
                        for r in 0..n {
                            for (m, c) in a0[(r, i)].terms() {
                                eqs.entry(EqKey::Flat(r, k, l + m))
                                    .or_default()
                                    .add(v, &-c.constant_term());
                            }
                        }
                        // − ħθ X_κ
                        eqs.entry(EqKey::Flat(i, k, l + 1)).or_default().add(v, &-&kap_h);
                        if let (Some(hx), Some(xh)) = (&h0x0, &x0h0) {
                            // conj(X_κ)ᵀ H_0 X_0: the slot (i, k) sits in row k of the product.
                            let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
                            for j in 0..n {
                                for (m, c) in hx[(i, j)].terms() {
                                    eqs.entry(EqKey::Gram(k, j, l + m))
                                        .or_default()
                                        .add(v, &(&sign * &c.constant_term()));
                                }
                            }
                            // conj(X_0)ᵀ H_0 X_κ
                            for r in 0..n {
                                for (m, c) in xh[(r, i)].terms() {
                                    eqs.entry(EqKey::Gram(r, k, l + m))
                                        .or_default()
                                        .add(v, &c.constant_term());
                                }
                            }
                        }
                    }
                    Slot::Omega { i: k, j } => {
                        // X_0 ω_κ
                        for i in 0..n {
                            let c = self.initial[(i, k)].clone();
                            if !c.is_zero() {
                                eqs.entry(EqKey::Flat(i, j, 0)).or_default().add(v, &c);
                            }
                        }
                    }
                }
            }

            let order = kappa.to_string();
            let mut system = LinearSystem::new(slots.len());
            let keys: Vec<EqKey> = eqs.keys().cloned().collect();
            for eq in eqs.into_values() {
                system.push(eq);
            }
            let values = match system.solve() {
                SolveOutcome::Solved(v) => v,
                SolveOutcome::Underdetermined { values, free } if self.default_free => {
                    defaulted += free.len();
                    values
                }
                SolveOutcome::Underdetermined { free, .. } => {
                    return Err(Error::Underdetermined {
                        order,
                        free: free.len(),
                    })
                }
                SolveOutcome::Inconsistent { equation, residue } => {
                    return Err(Error::Inconsistent {
                        order,
                        residue: format!("{:?} leaves {residue}", keys[equation]),
                    })
                }
            };
            for (slot, v) in slots.iter().zip(values) {
                if v.is_zero() {
                    continue;
                }
                match *slot {
                    Slot::X { i, j, l } => {
                        let t = HLaurent::term(l, QPoly::monomial(v, &kappa));
                        x[(i, j)] = &x[(i, j)] + &t;
                    }
                    Slot::Omega { i, j } => {
                        let t = HLaurent::from(QPoly::monomial(v, &kappa));
                        omega[(i, j)] = &omega[(i, j)] + &t;
                    }
                }
            }
        }

        let res = gauge_residual(self.source, &x, &omega);
        if let Some((i, j, e)) = res.entries().find(|(_, _, e)| !e.is_zero()) {
            return Err(Error::Inconsistent {
                order: lowest_order(e),
                residue: format!("gauge identity entry ({i},{j}) = {e}"),
            });
        }
        if let Some(h) = self.gram {
            let g = x.adjoint().matmul(h).matmul(&x);
            let bad = g.entries().find(|(_, _, e)| e.as_rat().is_none()).map(|(i, j, e)| {
                Error::Inconsistent {
                    order: lowest_order(e),
                    residue: format!("Gram entry ({i},{j}) = {e}"),
                }
            });
            if let Some(err) = bad {
                return Err(err);
            }
        }
        let omega = omega
            .to_qpoly()
            .ok_or_else(|| Error::Internal("ω acquired ħ terms".into()))?;
        Ok(GaugeSolution { x, omega, defaulted })
    }
}

fn lowest_order(e: &HLaurent) -> String {
    let exps: BTreeSet<Rat> = e
        .terms()
        .filter_map(|(_, c)| c.min_exponent())
        .collect();
    exps.iter().next().map_or("?".into(), Rat::to_string)
}
