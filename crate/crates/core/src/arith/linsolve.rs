//! Sparse linear systems over ℚ, solved by incremental Gauss-Jordan elimination.

use std::collections::{BTreeMap, HashMap};

use super::rat::Rat;

/// One equation `Σ coeffs[v]·x_v = rhs`.
#[derive(Clone, Debug, Default)]
pub struct Equation {
    pub coeffs: BTreeMap<usize, Rat>,
    pub rhs: Rat,
}

impl Equation {
    pub fn new() -> Equation {
        Equation::default()
    }

    pub fn add(&mut self, var: usize, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(var).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&var);
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Solved(Vec<Rat>),
    /// Consistent, with the listed variables left free.
    Underdetermined { values: Vec<Rat>, free: Vec<usize> },
    /// The equation with this index reduced to `0 = residue`.
    Inconsistent { equation: usize, residue: Rat },
}

#[derive(Debug, Default)]
pub struct LinearSystem {
    n_vars: usize,
    pivots: HashMap<usize, usize>,
    rows: Vec<(usize, Equation)>,
    inconsistent: Option<(usize, Rat)>,
    seen: usize,
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> LinearSystem {
        LinearSystem {
            n_vars,
            ..LinearSystem::default()
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, mut eq: Equation) {
        let index = self.seen;
        self.seen += 1;
        if self.inconsistent.is_some() {
            return;
        }
        debug_assert!(eq.coeffs.keys().all(|v| *v < self.n_vars));
        let hits: Vec<(usize, Rat)> = eq
            .coeffs
            .iter()
            .filter(|(v, _)| self.pivots.contains_key(v))
            .map(|(v, c)| (*v, c.clone()))
            .collect();
        for (v, c) in hits {
            let (_, row) = &self.rows[self.pivots[&v]];
            for (u, a) in &row.coeffs {
                eq.add(*u, &-(a * &c));
            }
            eq.rhs -= &(&row.rhs * &c);
        }
        if eq.is_trivial() {
            if !eq.rhs.is_zero() {
                self.inconsistent = Some((index, eq.rhs));
            }
            return;
        }
        let (&pv, pc) = eq.coeffs.iter().next().unwrap();
        let inv = pc.recip().expect("nonzero pivot");
        for c in eq.coeffs.values_mut() {
            *c *= &inv;
        }
        eq.rhs *= &inv;
        for (_, row) in self.rows.iter_mut() {
            let Some(f) = row.coeffs.get(&pv).cloned() else {
                continue;
            };
            for (u, a) in &eq.coeffs {
                row.add(*u, &-(a * &f));
            }
            row.rhs -= &(&eq.rhs * &f);
        }
        self.pivots.insert(pv, self.rows.len());
        self.rows.push((pv, eq));
    }

    /// Reduced rows keyed by pivot, and the non-pivot variables.
    pub fn reduced_rows(&self) -> (Vec<(usize, &Equation)>, Vec<usize>) {
        let rows = self.rows.iter().map(|(p, e)| (*p, e)).collect();
        let free = (0..self.n_vars)
            .filter(|v| !self.pivots.contains_key(v))
            .collect();
        (rows, free)
    }

    /// Solution with free variables set to zero.
    pub fn solve(&self) -> SolveOutcome {
        if let Some((equation, residue)) = &self.inconsistent {
            return SolveOutcome::Inconsistent {
                equation: *equation,
                residue: residue.clone(),
            };
        }
        let mut values = vec![Rat::zero(); self.n_vars];
        for (pv, row) in &self.rows {
            values[*pv] = row.rhs.clone();
        }
        let free: Vec<usize> = (0..self.n_vars)
            .filter(|v| !self.pivots.contains_key(v))
            .collect();
        if free.is_empty() {
            SolveOutcome::Solved(values)
        } else {
            SolveOutcome::Underdetermined { values, free }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(pairs: &[(usize, i64)], rhs: i64) -> Equation {
        let mut e = Equation::new();
        for (v, c) in pairs {
            e.add(*v, &Rat::integer(*c));
        }
        e.rhs = Rat::integer(rhs);
        e
    }

    #[test]
    fn unique_solution() {
        let mut s = LinearSystem::new(2);
        s.push(eq(&[(0, 1), (1, 1)], 3));
        s.push(eq(&[(0, 1), (1, -1)], 1));
        assert_eq!(
            s.solve(),
            SolveOutcome::Solved(vec![Rat::integer(2), Rat::integer(1)])
        );
    }

    #[test]
    fn redundant_and_free() {
        let mut s = LinearSystem::new(3);
        s.push(eq(&[(0, 1), (1, 2)], 4));
        s.push(eq(&[(0, 2), (1, 4)], 8));
        match s.solve() {
            SolveOutcome::Underdetermined { free, .. } => assert_eq!(free, vec![1, 2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistency_is_located() {
        let mut s = LinearSystem::new(1);
        s.push(eq(&[(0, 1)], 1));
        s.push(eq(&[], 0));
        s.push(eq(&[(0, 3)], 2));
        assert_eq!(
            s.solve(),
            SolveOutcome::Inconsistent {
                equation: 2,
                residue: Rat::integer(-1)
            }
        );
    }
}
