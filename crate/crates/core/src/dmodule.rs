//! The D-module `D^ħ / (relation)` in the basis `P_0 = 1, P_i = (1/r_i) ħθ P_{i-1}`,
//! its ħ-twisted dual, and the pairings read off from `P ⊙ δ`.
//!
//! Sections are column vectors in the `P` basis. The connection matrix `A`
//! satisfies `ħθ·P_j = Σ_i A[i][j] P_i`, so `ħθ` acts on a section `v` by
//! `A·v + ħθ(v)`. Dual elements are row vectors in the `P*` basis; on them
//! `ħθ` acts by `c ↦ c·A − ħθ(c)` and a scalar `f(q, ħ)` acts as `f(q, −ħ)`.

use crate::arith::{HLaurent, Mat, QPoly, Rat};
use crate::error::Result;
use crate::weights::WeightData;

pub type Row = Vec<HLaurent>;

/// One factor of an operator word.
#[derive(Clone, Debug, PartialEq)]
pub enum OpFactor {
    HTheta,
    /// Multiplication by a function of `q` and `ħ`.
    Scalar(HLaurent),
    /// `ħθ + c ħ`.
    Shifted(Rat),
}

/// A composition `f_1 ∘ f_2 ∘ ⋯ ∘ f_k`; the rightmost factor acts first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct OpWord(pub Vec<OpFactor>);

impl OpWord {
    pub fn then_left(mut self, f: OpFactor) -> OpWord {
        self.0.insert(0, f);
        self
    }

    /// The word of `P_α`: `(1/r_α) ħθ ⋯ (1/r_1) ħθ`.
    pub fn basis(r: &[QPoly], alpha: usize) -> Result<OpWord> {
        let mut w = OpWord::default();
        for i in 1..=alpha {
            w = w
                .then_left(OpFactor::HTheta)
                .then_left(OpFactor::Scalar(HLaurent::from(r[i - 1].inv()?)));
        }
        Ok(w)
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub rank: usize,
    /// `r_1, …, r_rank`; the last one belongs to the relation column.
    pub r: Vec<QPoly>,
    pub connection: Mat<HLaurent>,
    pub degrees: Vec<Rat>,
    pub q_weight: Rat,
    /// Index `i` of the cyclic dual element `δ_i`.
    pub delta_index: usize,
    /// Normalising constant in front of `(P ⊙ δ)(Q)`.
    pub norm: Rat,
}

impl Presentation {
    /// `ħθ` on a section.
    pub fn section_theta(&self, v: &[HLaurent]) -> Vec<HLaurent> {
        let mut out = self.connection.apply(v);
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &x.theta().shift_hbar(1);
        }
        out
    }

    /// `ħθ ⊙ c` on a dual row vector.
    pub fn dual_theta(&self, c: &[HLaurent]) -> Row {
        let mut out = self.connection.apply_left(c);
        for (o, x) in out.iter_mut().zip(c) {
            *o = &*o - &x.theta().shift_hbar(1);
        }
        out
    }

    /// `f ⊙ c`, acting through `f(q, −ħ)`.
    pub fn dual_scalar(&self, f: &HLaurent, c: &[HLaurent]) -> Row {
        let g = f.negate_hbar();
        c.iter().map(|x| &g * x).collect()
    }

    pub fn apply_word(&self, word: &OpWord, c: &[HLaurent]) -> Row {
        let mut cur = c.to_vec();
        for f in word.0.iter().rev() {
            cur = match f {
                OpFactor::HTheta => self.dual_theta(&cur),
                OpFactor::Scalar(s) => self.dual_scalar(s, &cur),
                OpFactor::Shifted(s) => {
                    let t = self.dual_theta(&cur);
                    let shift = HLaurent::hbar().scale(s);
                    let sc = self.dual_scalar(&shift, &cur);
                    t.iter().zip(&sc).map(|(a, b)| a + b).collect()
                }
            };
        }
        cur
    }

    pub fn dual_basis(&self, i: usize) -> Row {
        let mut v = vec![HLaurent::zero(); self.rank];
        v[i] = HLaurent::one();
        v
    }

    /// Coordinates of `(ħθ)^k · 1` for `k < rank`, as columns.
    pub fn cyclic_section_matrix(&self) -> Mat<HLaurent> {
        let mut cols = Vec::with_capacity(self.rank);
        let mut v = vec![HLaurent::zero(); self.rank];
        v[0] = HLaurent::one();
        for _ in 0..self.rank {
            cols.push(v.clone());
            v = self.section_theta(&v);
        }
        Mat::from_fn(self.rank, self.rank, |i, j| cols[j][i].clone())
    }

    /// `δ_i`, dual to `1, ħθ, (ħθ)², …`, in `P*` coordinates.
    pub fn delta(&self, i: usize) -> Result<Row> {
        let m = self.cyclic_section_matrix();
        let mut e = vec![HLaurent::zero(); self.rank];
        e[i] = HLaurent::one();
        match m.solve_left_upper(&e) {
            Some(row) => row,
            None => Ok(m.inverse()?.row(i).to_vec()),
        }
    }

    /// `P_α ⊙ δ` for `0 ≤ α ≤ rank`, using `P_α = (1/r_α) ħθ P_{α−1}`.
    pub fn p_on_delta(&self) -> Result<Vec<Row>> {
        let mut out = Vec::with_capacity(self.rank + 1);
        let mut cur = self.delta(self.delta_index)?;
        out.push(cur.clone());
        for alpha in 1..=self.rank {
            let s = HLaurent::from(self.r[alpha - 1].inv()?);
            cur = self.dual_scalar(&s, &self.dual_theta(&cur));
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// `H[i][j] = ⟨⟨P_i, P_j⟩⟩`; the first argument is the twisted one.
    pub fn gram(&self) -> Result<Mat<HLaurent>> {
        let rows = self.p_on_delta()?;
        let norm = HLaurent::constant(self.norm.clone());
        Ok(Mat::from_fn(self.rank, self.rank, |i, j| &norm * &rows[i][j]))
    }

    /// Gram matrix of the basis `X = P·K`: `K̄ᵀ H K`.
    pub fn gram_in_basis(&self, k: &Mat<HLaurent>) -> Result<Mat<HLaurent>> {
        Ok(k.adjoint().matmul(&self.gram()?).matmul(k))
    }

    /// `⟨⟨v, w⟩⟩` for sections given in `P` coordinates.
    pub fn pairing(&self, v: &[HLaurent], w: &[HLaurent]) -> Result<HLaurent> {
        let h = self.gram()?;
        let vb: Vec<HLaurent> = v.iter().map(HLaurent::negate_hbar).collect();
        let hw = h.apply(w);
        Ok(vb.iter().zip(&hw).fold(HLaurent::zero(), |acc, (a, b)| &acc + &(a * b)))
    }

    /// Root order of q across the connection.
    pub fn root_order(&self) -> u64 {
        self.connection
            .entries()
            .map(|(_, _, x)| x.root_order())
            .fold(1, crate::arith::lcm_u64)
    }

    /// Whether `{P_α ⊙ δ}_{α < rank}` is a basis, tested at the rational point
    /// `q^{1/N} = t`, `ħ = h`. A nonzero determinant there proves independence.
    pub fn cyclic_at(&self, t: &Rat, h: &Rat) -> Result<bool> {
        let rows = self.p_on_delta()?;
        let big_l = self.root_order();
        let m = Mat::from_fn(self.rank, self.rank, |i, j| rows[i][j].clone());
        let vals = m.try_map(|x| x.eval(t, big_l, h))?;
        Ok(!vals.det().is_zero())
    }

    /// Cyclicity at a few random points: true once any point certifies it.
    pub fn is_cyclic(&self, rng: &mut impl rand::Rng, tries: usize) -> Result<bool> {
        for _ in 0..tries {
            let t = Rat::new(rng.gen_range(2..50), rng.gen_range(1..50));
            let h = Rat::new(rng.gen_range(2..50), rng.gen_range(1..50));
            if self.cyclic_at(&t, &h)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The presentation of `D^ħ/(T_w − q)` for `P(w)`.
pub fn wps_presentation(wd: &WeightData) -> Presentation {
    let s = wd.rank();
    let mut a: Mat<HLaurent> = Mat::zeros(s, s);
    for i in 0..s {
        let target = (i + 1) % s;
        a[(target, i)] = HLaurent::from(wd.r(i + 1).clone());
    }
    let q_weight = wd.q_weight();
    Presentation {
        rank: s,
        r: wd.r_seq.clone(),
        connection: a,
        degrees: basis_degrees(&wd.r_seq[..s - 1], &q_weight),
        q_weight,
        delta_index: wd.weights.len() - 1,
        norm: wd.factor_consts[0].recip().expect("positive"),
    }
}

/// `deg P_0 = 0`, `deg P_i = deg P_{i−1} + 2 − deg r_i`.
pub fn basis_degrees(r: &[QPoly], q_weight: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::zero()];
    for ri in r {
        let d = ri.degree(q_weight).expect("r_i is a monomial");
        let last = out.last().unwrap().clone();
        out.push(last + Rat::integer(2) - d);
    }
    out
}

/// Closed form of `P_α ⊙ δ_n` for `P(w)`: index and coefficient of the single `P*` term.
pub fn wps_p_on_delta_closed_form(wd: &WeightData, alpha: usize) -> (usize, Rat) {
    let n = wd.weights.len() - 1;
    let s = wd.rank();
    let u1 = wd.multiplicities[0];
    if alpha < u1 {
        return (n - alpha, Rat::one());
    }
    if alpha == s {
        return (n, Rat::one());
    }
    let block = wd.block_of(alpha);
    let m1 = &wd.factor_consts[0];
    let mi = &wd.factor_consts[block];
    ((s + n - alpha) % s, m1 / mi)
}

/// `q^{-1}T ⊙ δ` minus `δ`: zero exactly when `(T − q) ⊙ δ = 0`.
pub fn wps_annihilation_residue(pres: &Presentation) -> Result<Row> {
    let rows = pres.p_on_delta()?;
    let delta = pres.delta(pres.delta_index)?;
    Ok(rows[pres.rank]
        .iter()
        .zip(&delta)
        .map(|(a, b)| a - b)
        .collect())
}

/// Checks that a dual row is the single term `c · P*_index`.
pub fn as_single_term(row: &[HLaurent]) -> Option<(usize, HLaurent)> {
    let mut hit = None;
    for (i, x) in row.iter().enumerate() {
        if !x.is_zero() {
            if hit.is_some() {
                return None;
            }
            hit = Some((i, x.clone()));
        }
    }
    hit
}
