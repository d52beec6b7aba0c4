//! Fano hypersurfaces `X^d ⊂ P(1, w_1, …, w_n)`: from the operator
//! `T_{w_1,…,w_n} − q S_{d−1}` to a quantum product with a constant pairing.
//!
//! The pipeline runs in two gauge steps. Step 1 removes the ħ-dependence of
//! the connection (big cell). Step 2 shifts by `γ = diag(ħ^{a_j})` and then
//! gauges again so that the Gram matrix becomes constant (small cell).

mod gamma;
mod gauge;

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{HLaurent, Mat, QPoly, Rat};
use crate::dmodule::{basis_degrees, OpFactor, OpWord, Presentation, Row};
use crate::error::{Error, Result};
use crate::ring::{solve_structure_constants, QuantumRing};
use crate::weights::{Label, WeightData};

pub use gamma::{gamma_exponents, ClosedFormulaCheck, GammaResult};
pub use gauge::{gauge_residual, GaugeAnsatz, GaugeSolution};

/// Name of the environment variable that overrides the ħ-degree cap of Step 1.
pub const MAX_HDEG_ENV: &str = "OQDM_MAX_HDEG";

#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceSpec {
    /// `(w_0, …, w_n)` with `w_0 = 1`.
    pub weights: Vec<u64>,
    pub degree: u64,
    pub sigma: u64,
    /// Data of the truncated weights `(w_1, …, w_n)`.
    pub truncated: WeightData,
}

impl HypersurfaceSpec {
    pub fn new(weights: &[u64], degree: u64) -> Result<HypersurfaceSpec> {
        if weights.len() < 2 {
            return Err(Error::InvalidInput(
                "a hypersurface needs at least two weights".into(),
            ));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        if weights[0] != 1 {
            return Err(Error::InvalidInput(format!(
                "hypersurface mode requires w0 = 1, got {}",
                weights[0]
            )));
        }
        if degree == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        let sigma: u64 = weights.iter().sum();
        if sigma == degree {
            return Err(Error::InvalidInput(format!(
                "sigma = d = {degree} is the Calabi-Yau case, which is not supported"
            )));
        }
        if sigma < degree {
            return Err(Error::InvalidInput(format!(
                "not Fano: sigma = {sigma} < d = {degree}"
            )));
        }
        Ok(HypersurfaceSpec {
            weights: weights.to_vec(),
            degree,
            sigma,
            truncated: WeightData::new(&weights[1..])?,
        })
    }

    /// `n`, so that the ambient space is `P(w_0, …, w_n)`.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    /// Rank `σ − 1` of the D-module.
    pub fn rank(&self) -> usize {
        (self.sigma - 1) as usize
    }

    pub fn fano_index(&self) -> u64 {
        self.sigma - self.degree
    }

    /// Root order of `q` for gauges and structure constants: the grading step
    /// `q^{1/(σ−d)}` together with the gaps of the truncated weights.
    pub fn root_order(&self) -> u64 {
        crate::arith::lcm_u64(self.fano_index(), self.truncated.root_order())
    }

    /// `|q| = 2σ − 2d`.
    pub fn q_weight(&self) -> Rat {
        Rat::from(2 * self.fano_index())
    }

    /// Twice the dimension of the hypersurface.
    pub fn top_degree(&self) -> Rat {
        Rat::from(2 * (self.n() as u64 - 1))
    }
}

/// `q^{-1}T_{w_1,…,w_n} − S_{d−1}` in the form
/// `c_T q^{-1} ħ^{σ−1} Π (θ − ρ) − c_S ħ^{d−1} Π (θ + s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceOperator {
    pub t_coeff: Rat,
    pub t_hbar: u64,
    /// Roots `ρ = j / w_i`, `1 ≤ i ≤ n`, ascending with multiplicity.
    pub t_roots: Vec<Rat>,
    pub s_coeff: Rat,
    pub s_hbar: u64,
    /// Shifts `s = j / d`, `1 ≤ j ≤ d−1`.
    pub s_shifts: Vec<Rat>,
}

pub fn build_hypersurface_operator(spec: &HypersurfaceSpec) -> HypersurfaceOperator {
    let mut t_roots: Vec<Rat> = spec.weights[1..]
        .iter()
        .flat_map(|&w| (0..w).map(move |j| Rat::new(j as i64, w as i64)))
        .collect();
    t_roots.sort();
    let d = spec.degree;
    HypersurfaceOperator {
        t_coeff: spec.truncated.w_pow_w_rat(),
        t_hbar: spec.sigma - 1,
        t_roots,
        s_coeff: Rat::from(num_traits::pow(num_bigint::BigInt::from(d), d as usize)),
        s_hbar: d - 1,
        s_shifts: (1..d).map(|j| Rat::new(j as i64, d as i64)).collect(),
    }
}

fn hbar_power(k: u64) -> String {
    match k {
        0 => String::new(),
        1 => "ħ".into(),
        _ => format!("ħ^{k}"),
    }
}

fn theta_factor(shift: &Rat) -> String {
    if shift.is_zero() {
        "θ".into()
    } else if shift.is_negative() {
        format!("(θ - {})", shift.abs())
    } else {
        format!("(θ + {shift})")
    }
}

fn product_of_factors(shifts: &[Rat]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < shifts.len() {
        let mut k = i;
        while k < shifts.len() && shifts[k] == shifts[i] {
            k += 1;
        }
        out.push_str(&theta_factor(&shifts[i]));
        if k - i > 1 {
            out.push_str(&format!("^{}", k - i));
        }
        i = k;
    }
    out
}

impl fmt::Display for HypersurfaceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.t_coeff.is_one() {
            String::new()
        } else {
            format!("{} ", self.t_coeff)
        };
        let neg: Vec<Rat> = self.t_roots.iter().map(|r| -r).collect();
        write!(
            f,
            "{c}q^-1 {}{}",
            hbar_power(self.t_hbar),
            product_of_factors(&neg)
        )?;
        let s = if self.s_coeff.is_one() {
            String::new()
        } else {
            format!("{} ", self.s_coeff)
        };
        let h = hbar_power(self.s_hbar);
        if self.s_shifts.is_empty() && h.is_empty() {
            write!(f, " - {}", if s.is_empty() { "1".into() } else { s.trim().to_string() })
        } else {
            write!(f, " - {s}{h}{}", product_of_factors(&self.s_shifts))
        }
    }
}

/// No left factor `(θ − ρ)` is shared by both summands once `q` is moved right.
pub fn check_irreducible(spec: &HypersurfaceSpec) -> bool {
    common_roots(spec).is_empty()
}

/// The roots `j/w_i` that coincide with some `j'/d`, `1 ≤ j' ≤ d−1`.
pub fn common_roots(spec: &HypersurfaceSpec) -> Vec<Rat> {
    let op = build_hypersurface_operator(spec);
    let mut out: Vec<Rat> = op
        .t_roots
        .iter()
        .filter(|r| op.s_shifts.contains(r))
        .cloned()
        .collect();
    out.dedup();
    out
}

/// The section `S_{d−1}·1` in the basis `P_0, …`, using only the sub-diagonal part of `A`.
fn s_on_one(spec: &HypersurfaceSpec, a: &Mat<HLaurent>) -> Vec<HLaurent> {
    let rank = spec.rank();
    let pres = Presentation {
        rank,
        r: spec.truncated.r_seq.clone(),
        connection: a.clone(),
        degrees: Vec::new(),
        q_weight: spec.q_weight(),
        delta_index: 0,
        norm: Rat::one(),
    };
    let mut v = vec![HLaurent::zero(); rank];
    v[0] = HLaurent::one();
    for s in build_hypersurface_operator(spec).s_shifts.iter().rev() {
        let t = pres.section_theta(&v);
        v = t
            .iter()
            .zip(&v)
            .map(|(x, y)| x + &y.scale(s).shift_hbar(1))
            .collect();
    }
    let c = Rat::from(num_traits::pow(
        num_bigint::BigInt::from(spec.degree),
        spec.degree as usize,
    ));
    v.iter().map(|x| x.scale(&c)).collect()
}

/// The matrix of `ħθ` on `P_0, …, P_{σ−2}` (that is, `ħΩ`).
pub fn connection_omega(spec: &HypersurfaceSpec) -> Result<Mat<HLaurent>> {
    if !check_irreducible(spec) {
        return Err(Error::Reducible(format!(
            "weights {:?} with d = {} share the root(s) {:?}",
            spec.weights,
            spec.degree,
            common_roots(spec).iter().map(Rat::to_string).collect::<Vec<_>>()
        )));
    }
    let rank = spec.rank();
    let wd = &spec.truncated;
    let mut a: Mat<HLaurent> = Mat::zeros(rank, rank);
    for i in 0..rank - 1 {
        a[(i + 1, i)] = HLaurent::from(wd.r(i + 1).clone());
    }
    let last = s_on_one(spec, &a);
    let r_last = HLaurent::from(wd.r(rank).clone());
    for (i, x) in last.iter().enumerate() {
        a[(i, rank - 1)] = &r_last * x;
    }
    Ok(a)
}

pub fn hypersurface_presentation(spec: &HypersurfaceSpec) -> Result<Presentation> {
    let rank = spec.rank();
    let q_weight = spec.q_weight();
    let wd = &spec.truncated;
    let prod: Rat = wd.weights.iter().map(|&w| Rat::from(w)).fold(Rat::one(), |a, b| a * b);
    Ok(Presentation {
        rank,
        r: wd.r_seq.clone(),
        connection: connection_omega(spec)?,
        degrees: basis_degrees(&wd.r_seq[..rank - 1], &q_weight),
        q_weight,
        delta_index: spec.n() - 1,
        norm: Rat::from(spec.degree) / prod,
    })
}

/// `S_{d−1}` as an operator word.
pub fn s_word(spec: &HypersurfaceSpec) -> OpWord {
    let op = build_hypersurface_operator(spec);
    let mut w = OpWord(op.s_shifts.iter().map(|s| OpFactor::Shifted(s.clone())).collect());
    w = w.then_left(OpFactor::Scalar(HLaurent::constant(op.s_coeff)));
    w
}

/// `(q^{-1}T − S_{d−1}) ⊙ δ_{n−1}`; zero when the relation annihilates `δ_{n−1}`.
pub fn hypersurface_annihilation_residue(spec: &HypersurfaceSpec, pres: &Presentation) -> Result<Row> {
    let rows = pres.p_on_delta()?;
    let delta = pres.delta(pres.delta_index)?;
    let s = pres.apply_word(&s_word(spec), &delta);
    Ok(rows[pres.rank].iter().zip(&s).map(|(a, b)| a - b).collect())
}

/// Split a matrix by powers of ħ.
pub fn hbar_coefficients(m: &Mat<HLaurent>) -> BTreeMap<i32, Mat<QPoly>> {
    let mut out: BTreeMap<i32, Mat<QPoly>> = BTreeMap::new();
    for (i, j, e) in m.entries() {
        for (k, c) in e.terms() {
            out.entry(k)
                .or_insert_with(|| Mat::zeros(m.rows(), m.cols()))[(i, j)] = c.clone();
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Step1 {
    /// `L_+^{-1}`: the new basis is `P̂ = P · x`.
    pub x: Mat<HLaurent>,
    pub l_plus: Mat<HLaurent>,
    /// `Q_0` and `Q_1, Q_2, …` in `L_+ = Q_0 (I + ħ Q_1 + ħ² Q_2 + ⋯)`.
    pub q_factors: Vec<Mat<QPoly>>,
    pub omega_hat: Mat<QPoly>,
    pub degrees: Vec<Rat>,
    pub hbar_degree: i32,
}

pub fn default_hbar_cap(spec: &HypersurfaceSpec) -> i32 {
    spec.sigma as i32
}

/// The ħ-degree cap, from the environment when set.
pub fn hbar_cap_from_env(spec: &HypersurfaceSpec) -> Result<i32> {
    match std::env::var(MAX_HDEG_ENV) {
        Ok(v) => v.trim().parse::<i32>().ok().filter(|c| *c >= 0).ok_or_else(|| {
            Error::InvalidInput(format!("{MAX_HDEG_ENV} must be a non-negative integer, got {v:?}"))
        }),
        Err(_) => Ok(default_hbar_cap(spec)),
    }
}

pub fn birkhoff_step1(spec: &HypersurfaceSpec, pres: &Presentation, cap: i32) -> Result<Step1> {
    let rank = pres.rank;
    let mut last_err = None;
    for m in 0..=cap {
        let ansatz = GaugeAnsatz {
            source: &pres.connection,
            initial: Mat::identity(rank),
            src_degrees: &pres.degrees,
            dst_degrees: &pres.degrees,
            q_weight: pres.q_weight.clone(),
            root: spec.root_order(),
            hbar_min: 0,
            hbar_max: m,
            gram: None,
            default_free: false,
        };
        match ansatz.solve() {
            Ok(sol) => {
                sol.x.check_window(spec.sigma as i32)?;
                let l_plus = sol.x.inverse()?;
                let coeffs = hbar_coefficients(&l_plus);
                let q0 = coeffs.get(&0).cloned().unwrap_or_else(|| Mat::zeros(rank, rank));
                let rest = q0.inverse()?.to_hlaurent().matmul(&l_plus);
                let rest_coeffs = hbar_coefficients(&rest);
                let top = rest_coeffs.keys().next_back().copied().unwrap_or(0);
                let mut q_factors = vec![q0];
                for k in 1..=top {
                    q_factors.push(
                        rest_coeffs
                            .get(&k)
                            .cloned()
                            .unwrap_or_else(|| Mat::zeros(rank, rank)),
                    );
                }
                return Ok(Step1 {
                    x: sol.x,
                    l_plus,
                    q_factors,
                    omega_hat: sol.omega,
                    degrees: pres.degrees.clone(),
                    hbar_degree: m,
                });
            }
            Err(e @ (Error::Inconsistent { .. } | Error::Underdetermined { .. })) => {
                last_err = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::GaugeCapExceeded {
        cap,
        detail: last_err.map_or_else(String::new, |e| e.to_string()),
    })
}

#[derive(Clone, Debug)]
pub struct Step2 {
    pub gamma: Vec<i32>,
    /// Source basis `B = P̂ γ^{-1}`: its connection and Gram matrix.
    pub source_connection: Mat<HLaurent>,
    pub source_gram: Mat<HLaurent>,
    /// Block scalars fixed by the pairing normalization; `Z|_{q=0}` is their diagonal.
    pub block_scalars: Vec<Rat>,
    pub z: Mat<HLaurent>,
    pub z_at_q0: Mat<HLaurent>,
    pub omega_tilde: Mat<QPoly>,
    pub s: Mat<Rat>,
    pub degrees: Vec<Rat>,
    /// `E^{-1}` (the ħ⁰ part of Z) and `(L^f_-)^{-1} = Z E`.
    pub e_inv: Mat<HLaurent>,
    pub lf_inv: Mat<HLaurent>,
}

/// The target pairing: that of `P(w_1, …, w_n)` with the untwisted block scaled by `d`.
pub fn target_pairing(spec: &HypersurfaceSpec) -> Result<Mat<Rat>> {
    let wd = &spec.truncated;
    let gram = crate::dmodule::wps_presentation(wd).gram()?;
    let u1 = wd.multiplicities[0];
    let d = Rat::from(spec.degree);
    gram.try_map(|x| x.as_rat().ok_or_else(|| Error::Internal("non-constant pairing".into())))
        .map(|m| {
            Mat::from_fn(m.rows(), m.cols(), |i, j| {
                if i < u1 && j < u1 {
                    &m[(i, j)] * &d
                } else {
                    m[(i, j)].clone()
                }
            })
        })
}

fn gamma_matrix(a: &[i32], sign: i32) -> Mat<HLaurent> {
    Mat::diagonal(a.iter().map(|k| HLaurent::hbar_pow(sign * k)).collect())
}

fn partner_block(wd: &WeightData, b: usize) -> usize {
    if b == 0 {
        return 0;
    }
    let f = Rat::one() - &wd.fractions[b];
    wd.fractions.iter().position(|g| *g == f).expect("fractions are symmetric")
}

/// The block scalars `z_b` with `D H_B(0) D = S`.
fn block_scalars(spec: &HypersurfaceSpec, h0: &Mat<Rat>, target: &Mat<Rat>) -> Result<Vec<Rat>> {
    let wd = &spec.truncated;
    let k = wd.n_blocks();
    let mut z: Vec<Option<Rat>> = vec![None; k];
    for b in 0..k {
        let p = partner_block(wd, b);
        if z[b].is_some() {
            continue;
        }
        let i = wd.block_start(b);
        let j = (0..target.cols())
            .find(|&j| !target[(i, j)].is_zero())
            .ok_or_else(|| Error::Internal("degenerate target pairing".into()))?;
        if h0[(i, j)].is_zero() {
            return Err(Error::OutsideSmallCell(format!(
                "pairing entry ({i},{j}) vanishes at q = 0 in the shifted basis"
            )));
        }
        let t = &target[(i, j)] / &h0[(i, j)];
        if b == 0 {
            if !t.is_one() {
                return Err(Error::OutsideSmallCell(format!(
                    "untwisted pairing is {} but {} is required",
                    h0[(i, j)],
                    target[(i, j)]
                )));
            }
            z[0] = Some(Rat::one());
        } else if p == b {
            let root = t.sqrt_exact().filter(Rat::is_positive).ok_or_else(|| {
                Error::OutsideSmallCell(format!("no rational square root of {t} for block {b}"))
            })?;
            z[b] = Some(root);
        } else {
            z[b] = Some(Rat::one());
            z[p] = Some(t);
        }
    }
    Ok(z.into_iter().map(|x| x.expect("assigned")).collect())
}

/// Step 2 from a Step-1 connection `ω̂` (possibly with ħ terms) and Gram matrix `Ĥ`.
pub fn birkhoff_step2(
    spec: &HypersurfaceSpec,
    omega_hat: &Mat<HLaurent>,
    gram_hat: &Mat<HLaurent>,
    degrees: &[Rat],
    gamma: &[i32],
) -> Result<Step2> {
    let wd = &spec.truncated;
    let rank = spec.rank();
    let g = gamma_matrix(gamma, 1);
    let g_inv = gamma_matrix(gamma, -1);
    let source_connection = g.matmul(omega_hat).matmul(&g_inv);
    let source_gram = g_inv.adjoint().matmul(gram_hat).matmul(&g_inv);
    let e: Vec<Rat> = degrees
        .iter()
        .zip(gamma)
        .map(|(d, a)| d - &Rat::integer(2 * i64::from(*a)))
        .collect();

    let h0 = source_gram.at_q_zero().to_rat().ok_or_else(|| {
        Error::OutsideSmallCell(format!(
            "Gram matrix of the shifted basis depends on ħ at q = 0:\n{}",
            source_gram.at_q_zero()
        ))
    })?;
    let target = target_pairing(spec)?;
    let z_blocks = block_scalars(spec, &h0, &target)?;
    let diag: Vec<Rat> = (0..rank).map(|i| z_blocks[wd.block_of(i)].clone()).collect();
    let d = Mat::diagonal(diag);
    let check = d.matmul(&h0).matmul(&d);
    if check != target {
        return Err(Error::OutsideSmallCell(format!(
            "block scalars {:?} do not normalize the pairing:\n{check}",
            z_blocks.iter().map(Rat::to_string).collect::<Vec<_>>()
        )));
    }

    let max_a = gamma.iter().copied().max().unwrap_or(0).max(0);
    let ansatz = GaugeAnsatz {
        source: &source_connection,
        initial: d,
        src_degrees: &e,
        dst_degrees: &e,
        q_weight: spec.q_weight(),
        root: spec.root_order(),
        hbar_min: -max_a,
        hbar_max: 0,
        gram: Some(&source_gram),
        default_free: true,
    };
    let sol = ansatz.solve().map_err(|err| match err {
        Error::Inconsistent { .. } | Error::Underdetermined { .. } => {
            Error::OutsideSmallCell(err.to_string())
        }
        other => other,
    })?;
    let s_mat = sol
        .x
        .adjoint()
        .matmul(&source_gram)
        .matmul(&sol.x)
        .to_rat()
        .ok_or_else(|| Error::Internal("pairing did not become constant".into()))?;
    if s_mat != target {
        return Err(Error::Internal("pairing differs from its normalization".into()));
    }
    let e_inv = hbar_coefficients(&sol.x)
        .get(&0)
        .cloned()
        .map(|m| m.to_hlaurent())
        .unwrap_or_else(|| Mat::zeros(rank, rank));
    let lf_inv = sol.x.matmul(&e_inv.inverse()?);
    Ok(Step2 {
        gamma: gamma.to_vec(),
        source_connection,
        source_gram,
        block_scalars: z_blocks,
        z_at_q0: sol.x.at_q_zero(),
        z: sol.x,
        omega_tilde: sol.omega,
        s: s_mat,
        degrees: e,
        e_inv,
        lf_inv,
    })
}

#[derive(Clone, Debug)]
pub struct HypersurfaceResult {
    pub spec: HypersurfaceSpec,
    pub operator: HypersurfaceOperator,
    pub presentation: Presentation,
    pub step1: Step1,
    pub gram_hat: Mat<HLaurent>,
    pub gamma: GammaResult,
    pub step2: Step2,
    pub ring: QuantumRing,
    /// Structure constants `(i, j, k)` not fixed by the constraints; set to zero.
    pub free_constants: Vec<(usize, usize, usize)>,
}

impl HypersurfaceResult {
    /// `Ω` as the matrix of ħθ (the paper's display divides by ħ).
    pub fn omega(&self) -> &Mat<HLaurent> {
        &self.presentation.connection
    }

    pub fn ages(&self) -> Vec<Rat> {
        let wd = &self.spec.truncated;
        (0..wd.n_blocks())
            .map(|b| &self.step2.degrees[wd.block_start(b)] / &Rat::integer(2))
            .collect()
    }
}

pub fn hypersurface_ring(
    spec: &HypersurfaceSpec,
    step2: &Step2,
) -> Result<(QuantumRing, Vec<(usize, usize, usize)>)> {
    let wd = &spec.truncated;
    let labels: Vec<Label> = (0..spec.rank())
        .map(|i| {
            let b = wd.block_of(i);
            Label {
                block: b,
                fraction: wd.fractions[b].clone(),
                power: i - wd.block_start(b),
                degree: step2.degrees[i].clone(),
            }
        })
        .collect();
    let q_weight = spec.q_weight();
    let sol = solve_structure_constants(
        &step2.omega_tilde,
        &step2.s,
        &step2.degrees,
        &q_weight,
        spec.root_order(),
    )?;
    let ring = QuantumRing {
        labels,
        q_weight,
        mult_matrix: step2.omega_tilde.clone(),
        table: sol.table,
        pairing: step2.s.to_qpoly(),
    };
    ring.check_no_negative_powers()?;
    for check in [
        ring.check_identity(),
        ring.check_commutative(),
        ring.check_associative(),
        ring.check_frobenius(),
    ] {
        check.map_err(|e| Error::Internal(format!("hypersurface product: {e}")))?;
    }
    Ok((ring, sol.free))
}

pub fn run_hypersurface(spec: &HypersurfaceSpec, cap: i32) -> Result<HypersurfaceResult> {
    let operator = build_hypersurface_operator(spec);
    let presentation = hypersurface_presentation(spec)?;
    let step1 = birkhoff_step1(spec, &presentation, cap)?;
    let gram_hat = presentation.gram_in_basis(&step1.x)?;
    let gamma = gamma_exponents(spec, &step1.degrees)?;
    let step2 = birkhoff_step2(
        spec,
        &step1.omega_hat.to_hlaurent(),
        &gram_hat,
        &step1.degrees,
        &gamma.exponents,
    )?;
    let (ring, free_constants) = hypersurface_ring(spec, &step2)?;
    Ok(HypersurfaceResult {
        spec: spec.clone(),
        operator,
        presentation,
        step1,
        gram_hat,
        gamma,
        step2,
        ring,
        free_constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> QPoly {
        QPoly::monomial(Rat::new(1, 2), &Rat::new(1, 2))
    }

    fn c(v: i64) -> QPoly {
        QPoly::constant(Rat::integer(v))
    }

    #[test]
    fn operators() {
        let s = HypersurfaceSpec::new(&[1, 1, 1, 1, 1], 3).unwrap();
        assert_eq!(
            build_hypersurface_operator(&s).to_string(),
            "q^-1 ħ^4θ^4 - 27 ħ^2(θ + 1/3)(θ + 2/3)"
        );
        let s = HypersurfaceSpec::new(&[1, 1, 1, 2], 3).unwrap();
        assert_eq!(
            build_hypersurface_operator(&s).to_string(),
            "4 q^-1 ħ^4θ^3(θ - 1/2) - 27 ħ^2(θ + 1/3)(θ + 2/3)"
        );
        let s = HypersurfaceSpec::new(&[1, 1, 2], 1).unwrap();
        assert_eq!(
            build_hypersurface_operator(&s).to_string(),
            "4 q^-1 ħ^3θ^2(θ - 1/2) - 1"
        );
    }

    #[test]
    fn irreducibility() {
        for (w, d) in [(&[1, 1, 1, 2][..], 3), (&[1, 1, 1, 1, 1], 3), (&[1, 1, 1, 1], 2)] {
            assert!(check_irreducible(&HypersurfaceSpec::new(w, d).unwrap()));
        }
        // ½ is a root of both summands.
        let s = HypersurfaceSpec::new(&[1, 1, 2, 2], 4).unwrap();
        assert!(!check_irreducible(&s));
        assert!(matches!(connection_omega(&s), Err(Error::Reducible(_))));
    }

    #[test]
    fn rejects_non_fano_and_bad_w0() {
        assert!(HypersurfaceSpec::new(&[1, 1, 1], 3).is_err());
        assert!(HypersurfaceSpec::new(&[1, 1], 3).is_err());
        assert!(HypersurfaceSpec::new(&[2, 1, 1], 1).is_err());
    }

    #[test]
    fn omega_cp4_cubic() {
        let s = HypersurfaceSpec::new(&[1, 1, 1, 1, 1], 3).unwrap();
        let a = connection_omega(&s).unwrap();
        let q6 = HLaurent::term(2, QPoly::q().scale(&Rat::integer(6)));
        let q27h = HLaurent::term(1, QPoly::q().scale(&Rat::integer(27)));
        let q27 = HLaurent::from(QPoly::q().scale(&Rat::integer(27)));
        assert_eq!(a.column(3), vec![q6, q27h, q27, HLaurent::zero()]);
        for i in 0..3 {
            assert!(a[(i + 1, i)].is_one());
        }
    }

    #[test]
    fn omega_p1112_cubic() {
        let s = HypersurfaceSpec::new(&[1, 1, 1, 2], 3).unwrap();
        let a = connection_omega(&s).unwrap();
        assert_eq!(
            a.column(3),
            vec![
                HLaurent::term(2, r().scale(&Rat::integer(6))),
                HLaurent::term(1, r().scale(&Rat::integer(27))),
                HLaurent::from(r().scale(&Rat::integer(27))),
                HLaurent::zero()
            ]
        );
        assert_eq!(a[(3, 2)], HLaurent::from(r()));
    }

    #[test]
    fn cp4_cubic_step1() {
        let s = HypersurfaceSpec::new(&[1, 1, 1, 1, 1], 3).unwrap();
        let pres = hypersurface_presentation(&s).unwrap();
        let st = birkhoff_step1(&s, &pres, 5).unwrap();
        let q = |k: i64| QPoly::q().scale(&Rat::integer(k));
        assert_eq!(st.q_factors[0][(0, 2)], q(6));
        assert_eq!(st.q_factors[0][(1, 3)], q(21));
        assert_eq!(st.q_factors[1][(0, 3)], q(6));
        assert_eq!(st.q_factors.len(), 2);
        let w = &st.omega_hat;
        assert_eq!(w[(0, 1)], q(6));
        assert_eq!(w[(0, 3)], QPoly::monomial(Rat::integer(36), &Rat::integer(2)));
        assert_eq!(w[(1, 2)], q(15));
        assert_eq!(w[(2, 3)], q(6));
    }

    #[test]
    fn p1112_cubic_full() {
        let s = HypersurfaceSpec::new(&[1, 1, 1, 2], 3).unwrap();
        let res = run_hypersurface(&s, 5).unwrap();
        let w = &res.step1.omega_hat;
        let r2 = &r() * &r();
        assert_eq!(w[(0, 1)], r2.scale(&Rat::integer(12)));
        assert_eq!(w[(1, 2)], r2.scale(&Rat::integer(18)));
        assert_eq!(w[(0, 3)], (&r2 * &r()).scale(&Rat::integer(-36)));
        assert_eq!(w[(2, 3)], r().scale(&Rat::integer(-3)));
        assert_eq!(res.gamma.exponents, vec![0, 0, 0, 1]);
        assert_eq!(
            res.step2.z_at_q0,
            Mat::diagonal(vec![
                HLaurent::one(),
                HLaurent::one(),
                HLaurent::one(),
                HLaurent::constant(Rat::new(2, 3))
            ])
        );
        let wt = &res.step2.omega_tilde;
        assert_eq!(wt[(0, 1)], r2.scale(&Rat::integer(12)));
        assert_eq!(wt[(1, 2)], r2.scale(&Rat::integer(12)));
        assert_eq!(wt[(1, 3)], r());
        assert_eq!(wt[(3, 1)], r().scale(&Rat::integer(3)));
        assert_eq!(res.step2.s[(3, 3)], Rat::new(1, 2));
        assert_eq!(res.step2.s[(0, 2)], Rat::new(3, 2));
        let ring = &res.ring;
        let pp = ring.product(1, 1);
        assert_eq!(pp, &[r2.scale(&Rat::integer(12)), c(0), c(1), r().scale(&Rat::integer(3))][..]);
        assert_eq!(ring.product(1, 3), &[c(0), r(), c(0), c(0)][..]);
        // One coefficient survives every constraint; zero puts it at 𝟙½ ∘ 𝟙½ = ⅓p² − 3r².
        assert_eq!(res.free_constants, vec![(3, 3, 3)]);
        let r3 = &r2 * &r();
        assert_eq!(
            ring.product(2, 2),
            &[(&r2 * &r2).scale(&Rat::integer(81)), c(0), c(0), r3.scale(&Rat::integer(63))][..]
        );
        assert_eq!(
            ring.product(3, 3),
            &[r2.scale(&Rat::integer(-3)), c(0), QPoly::constant(Rat::new(1, 3)), c(0)][..]
        );
        ring.check_identity().unwrap();
        ring.check_commutative().unwrap();
        ring.check_associative().unwrap();
        ring.check_frobenius().unwrap();
        ring.check_degrees().unwrap();
        assert_eq!(res.ages(), vec![Rat::zero(), Rat::one()]);
    }

    /// The published table is another member of the solution family: it
    /// satisfies every constraint the solver imposes.
    #[test]
    fn p1112_family_contains_published_table() {
        let s = HypersurfaceSpec::new(&[1, 1, 1, 2], 3).unwrap();
        let res = run_hypersurface(&s, 5).unwrap();
        let mut ring = res.ring.clone();
        let r2 = &r() * &r();
        let r3 = &r2 * &r();
        let set = |ring: &mut QuantumRing, i: usize, j: usize, v: Vec<QPoly>| {
            ring.table[i][j] = v.clone();
            ring.table[j][i] = v;
        };
        set(&mut ring, 2, 2, vec![(&r2 * &r2).scale(&Rat::integer(108)), c(0), c(0), r3.scale(&Rat::integer(36))]);
        set(&mut ring, 2, 3, vec![r3.scale(&Rat::integer(12)), c(0), c(0), c(0)]);
        set(&mut ring, 3, 3, vec![c(0), c(0), QPoly::constant(Rat::new(1, 3)), r().scale(&Rat::integer(-3))]);
        assert_ne!(ring.table, res.ring.table);
        assert_eq!(ring.mult_by(1), res.step2.omega_tilde);
        ring.check_identity().unwrap();
        ring.check_commutative().unwrap();
        ring.check_associative().unwrap();
        ring.check_frobenius().unwrap();
        ring.check_degrees().unwrap();
    }
}
