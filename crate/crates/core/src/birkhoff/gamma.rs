//! Choice of `γ = diag(ħ^{a_j})` for Step 2.
//!
//! Shifting `P̂_j` by `ħ^{-a_j}` changes its degree to `e_j = D_j − 2a_j`. The
//! pairing matches the shifted basis with its dual exactly when the multiset
//! `{c − e_j}` equals `{e_j}`, where `c` is twice the dimension. The `a_j`
//! are constant on blocks and vanish on the first one.

use crate::arith::Rat;
use crate::error::{Error, Result};

use super::HypersurfaceSpec;

const SEARCH_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormulaCheck {
    pub reading: String,
    /// Per block.
    pub values: Vec<Rat>,
    pub exact: bool,
    pub up_to_shift: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaResult {
    /// One exponent per basis element.
    pub exponents: Vec<i32>,
    pub block_exponents: Vec<i32>,
    /// Number of admissible block assignments found.
    pub candidates: usize,
    pub unique: bool,
    pub closed_formula: Vec<ClosedFormulaCheck>,
}

fn sorted(mut v: Vec<Rat>) -> Vec<Rat> {
    v.sort();
    v
}

fn is_self_dual(e: &[Rat], c: &Rat) -> bool {
    sorted(e.to_vec()) == sorted(e.iter().map(|x| c - x).collect())
}

fn shifted_degrees(degrees: &[Rat], per_index: &[i32]) -> Vec<Rat> {
    degrees
        .iter()
        .zip(per_index)
        .map(|(d, a)| d - &Rat::integer(2 * i64::from(*a)))
        .collect()
}

/// Closed-formula values per block under the two index readings.
pub fn closed_formula_readings(spec: &HypersurfaceSpec) -> Vec<(String, Vec<Rat>)> {
    let wd = &spec.truncated;
    let k = wd.n_blocks();
    let idx = spec.fano_index() as i64;
    let u = |i: usize| Rat::from(wd.multiplicities.get(i).copied().unwrap_or(0) as u64);
    let f = |i: usize| wd.fractions.get(i).cloned().unwrap_or_else(Rat::one);
    let half = Rat::new(1, 2);
    let formula = |i: usize| {
        // ½(u_1 + Σ_{l=2}^{i} u_l + u_{i+1}) − (σ−d) f_{i+1}, with 1-based i.
        let mut s = u(0);
        for l in 1..i {
            s += &u(l);
        }
        s += &u(i);
        &half * &s - &(Rat::integer(idx) * f(i))
    };
    vec![
        ("block i+1".to_string(), (0..k).map(formula).collect()),
        ("block i".to_string(), (0..k).map(|b| formula(b + 1)).collect()),
    ]
}

pub fn gamma_exponents(spec: &HypersurfaceSpec, degrees: &[Rat]) -> Result<GammaResult> {
    let wd = &spec.truncated;
    let k = wd.n_blocks();
    let c = spec.top_degree();
    let two = Rat::integer(2);

    // Each block's a keeps its e in [0, c].
    let mut ranges: Vec<(i32, i32)> = Vec::with_capacity(k);
    for b in 0..k {
        let start = wd.block_start(b);
        let block = &degrees[start..start + wd.multiplicities[b]];
        let lo_d = block.iter().min().expect("non-empty block");
        let hi_d = block.iter().max().expect("non-empty block");
        let lo = (-((&c - hi_d) / two.clone()).floor()).to_i64().unwrap_or(0).max(0);
        let hi = (lo_d / &two).floor().to_i64().unwrap_or(i64::MAX >> 2);
        let (lo, hi) = if b == 0 { (0, 0) } else { (lo, hi) };
        if lo > hi {
            return Err(no_gamma(degrees, &c, "some block cannot reach degrees in [0, c]"));
        }
        ranges.push((lo as i32, hi as i32));
    }
    let size: u128 = ranges.iter().map(|(l, h)| (h - l + 1) as u128).product();
    if size > SEARCH_LIMIT {
        return Err(Error::NoGamma(format!(
            "search space of {size} assignments exceeds {SEARCH_LIMIT}"
        )));
    }

    let mut best: Option<Vec<i32>> = None;
    let mut candidates = 0usize;
    let mut current = vec![0i32; k];
    let expand = |blocks: &[i32]| -> Vec<i32> {
        (0..wd.rank()).map(|i| blocks[wd.block_of(i)]).collect()
    };
    search(0, &ranges, &mut current, &mut |blocks| {
        let e = shifted_degrees(degrees, &expand(blocks));
        if is_self_dual(&e, &c) {
            candidates += 1;
            let key = |v: &[i32]| (v.iter().map(|x| i64::from(*x)).sum::<i64>(), v.to_vec());
            if best.as_ref().map_or(true, |b| key(blocks) < key(b)) {
                best = Some(blocks.to_vec());
            }
        }
    });
    let block_exponents =
        best.ok_or_else(|| no_gamma(degrees, &c, "no block-constant assignment"))?;
    let closed_formula = closed_formula_readings(spec)
        .into_iter()
        .map(|(reading, values)| {
            let got: Vec<Rat> = block_exponents.iter().map(|a| Rat::integer(i64::from(*a))).collect();
            let exact = values == got;
            let shift = &got[0] - &values[0];
            let up_to_shift = values.iter().zip(&got).all(|(v, g)| &(g - v) == &shift);
            ClosedFormulaCheck {
                reading,
                values,
                exact,
                up_to_shift,
            }
        })
        .collect();
    Ok(GammaResult {
        exponents: expand(&block_exponents),
        block_exponents,
        candidates,
        unique: candidates == 1,
        closed_formula,
    })
}

fn search(b: usize, ranges: &[(i32, i32)], cur: &mut Vec<i32>, visit: &mut impl FnMut(&[i32])) {
    if b == ranges.len() {
        visit(cur);
        return;
    }
    for a in ranges[b].0..=ranges[b].1 {
        cur[b] = a;
        search(b + 1, ranges, cur, visit);
    }
}

fn no_gamma(degrees: &[Rat], c: &Rat, why: &str) -> Error {
    let e: Vec<String> = sorted(degrees.to_vec()).iter().map(Rat::to_string).collect();
    let d: Vec<String> = sorted(degrees.iter().map(|x| c - x).collect())
        .iter()
        .map(Rat::to_string)
        .collect();
    Error::NoGamma(format!(
        "{why}: degrees {{{}}} against dual degrees {{{}}}",
        e.join(", "),
        d.join(", ")
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1112_cubic() {
        let spec = HypersurfaceSpec::new(&[1, 1, 1, 2], 3).unwrap();
        let d: Vec<Rat> = [0, 2, 4, 4].iter().map(|x| Rat::integer(*x)).collect();
        let g = gamma_exponents(&spec, &d).unwrap();
        assert_eq!(g.exponents, vec![0, 0, 0, 1]);
        assert!(g.unique);
        let r = closed_formula_readings(&spec);
        assert_eq!(r[0].1, vec![Rat::integer(3), Rat::integer(1)]);
        assert_eq!(r[1].1, vec![Rat::integer(1), Rat::integer(0)]);
        assert!(g.closed_formula.iter().all(|c| !c.exact && !c.up_to_shift));
    }

    #[test]
    fn cp4_cubic_is_trivial() {
        let spec = HypersurfaceSpec::new(&[1, 1, 1, 1, 1], 3).unwrap();
        let d: Vec<Rat> = [0, 2, 4, 6].iter().map(|x| Rat::integer(*x)).collect();
        assert_eq!(gamma_exponents(&spec, &d).unwrap().exponents, vec![0; 4]);
    }
}
