//! Small quantum cohomology rings as explicit structure-constant tables.

use std::collections::BTreeMap;

use crate::arith::{Equation, HLaurent, LinearSystem, Mat, QPoly, Rat, SolveOutcome};
use crate::dmodule::wps_presentation;
use crate::error::{Error, Result};
use crate::weights::{Label, WeightData};

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumRing {
    pub labels: Vec<Label>,
    pub q_weight: Rat,
    /// Matrix of `p ∘ ·`: column `j` holds the coordinates of `p ∘ c_j`.
    pub mult_matrix: Mat<QPoly>,
    /// `table[i][j][k]` is the coefficient of `c_k` in `c_i ∘ c_j`.
    pub table: Vec<Vec<Vec<QPoly>>>,
    pub pairing: Mat<QPoly>,
}

impl QuantumRing {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn degrees(&self) -> Vec<Rat> {
        self.labels.iter().map(|l| l.degree.clone()).collect()
    }

    pub fn product(&self, i: usize, j: usize) -> &[QPoly] {
        &self.table[i][j]
    }

    /// Matrix of `c_i ∘ ·`.
    pub fn mult_by(&self, i: usize) -> Mat<QPoly> {
        let n = self.rank();
        Mat::from_fn(n, n, |k, j| self.table[i][j][k].clone())
    }

    pub fn multiply(&self, a: &[QPoly], b: &[QPoly]) -> Vec<QPoly> {
        let n = self.rank();
        let mut out = vec![QPoly::zero(); n];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<QPoly> {
        let mut v = vec![QPoly::zero(); self.rank()];
        v[i] = QPoly::one();
        v
    }

    pub fn pair(&self, a: &[QPoly], b: &[QPoly]) -> QPoly {
        let gb = self.pairing.apply(b);
        a.iter()
            .zip(&gb)
            .fold(QPoly::zero(), |acc, (x, y)| &acc + &(x * y))
    }

    /// Human-readable expansion of a coordinate vector.
    pub fn format_element(&self, v: &[QPoly]) -> String {
        let mut out = String::new();
        for (c, l) in v.iter().zip(&self.labels).filter(|(c, _)| !c.is_zero()) {
            let name = l.name();
            // A single negative term is written with a minus sign in front.
            let neg = c.len() == 1 && c.terms().all(|(_, a)| a.is_negative());
            let c = if neg { -c } else { c.clone() };
            let term = if name == "1" {
                c.to_string()
            } else if c.is_one() {
                name
            } else if c.len() == 1 {
                format!("{c} {name}")
            } else {
                format!("({c}) {name}")
            };
            match (out.is_empty(), neg) {
                (true, false) => out.push_str(&term),
                (true, true) => out.push_str(&format!("-{term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
                (false, true) => out.push_str(&format!(" - {term}")),
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    pub fn check_identity(&self) -> std::result::Result<(), String> {
        for j in 0..self.rank() {
            if self.table[0][j] != self.basis_vector(j) {
                return Err(format!("1 ∘ c_{j} = {}", self.format_element(&self.table[0][j])));
            }
        }
        Ok(())
    }

    pub fn check_commutative(&self) -> std::result::Result<(), String> {
        let n = self.rank();
        for i in 0..n {
            for j in i + 1..n {
                if self.table[i][j] != self.table[j][i] {
                    return Err(format!("c_{i} ∘ c_{j} ≠ c_{j} ∘ c_{i}"));
                }
            }
        }
        Ok(())
    }

    pub fn check_associative(&self) -> std::result::Result<(), String> {
        let n = self.rank();
        // With a unit, triples containing c_0 hold trivially; with commutativity
        // the triple (i, j, k) is equivalent to (k, j, i).
        let from = usize::from(self.check_identity().is_ok());
        let commutative = self.check_commutative().is_ok();
        for i in from..n {
            for j in from..n {
                for k in from..n {
                    if commutative && k < i {
                        continue;
                    }
                    // (c_i ∘ c_j) ∘ c_k against c_i ∘ (c_j ∘ c_k), both sparse sums.
                    let mut left = vec![QPoly::zero(); n];
                    for (l, c) in self.table[i][j].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        accumulate(&mut left, c, &self.table[l][k]);
                    }
                    let mut right = vec![QPoly::zero(); n];
                    for (l, c) in self.table[j][k].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        accumulate(&mut right, c, &self.table[i][l]);
                    }
                    if left != right {
                        return Err(format!("associativity fails for c_{i}, c_{j}, c_{k}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_degrees(&self) -> std::result::Result<(), String> {
        let d = self.degrees();
        for (i, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let want = &d[i] + &d[j] - &d[k];
                    if c.degree(&self.q_weight).as_ref() != Some(&want) {
                        return Err(format!(
                            "coefficient {c} of c_{k} in c_{i} ∘ c_{j} is not of degree {want}"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `⟨⟨c_a ∘ c_b, c_c⟩⟩ = ⟨⟨c_a, c_b ∘ c_c⟩⟩` for all basis triples.
    pub fn check_frobenius(&self) -> std::result::Result<(), String> {
        let n = self.rank();
        let g = &self.pairing;
        for a in 0..n {
            for b in 0..n {
                let ab = &self.table[a][b];
                let ab_g = g.apply_left(ab);
                for c in 0..n {
                    let bc = &self.table[b][c];
                    let mut rhs = QPoly::zero();
                    for (k, x) in bc.iter().enumerate() {
                        if !x.is_zero() && !g[(a, k)].is_zero() {
                            rhs = &rhs + &(&g[(a, k)] * x);
                        }
                    }
                    if ab_g[c] != rhs {
                        return Err(format!("Frobenius fails for ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_no_negative_powers(&self) -> Result<()> {
        for (i, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(QPoly::has_negative_exponent) {
                    return Err(Error::Internal(format!(
                        "negative power of q in c_{i} ∘ c_{j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The product at q = 0.
    pub fn classical_limit(&self) -> Vec<Vec<Vec<Rat>>> {
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(QPoly::constant_term).collect())
                    .collect()
            })
            .collect()
    }

    /// Rank over ℚ of `1, p, p², …` in the classical ring.
    pub fn classical_p_span(&self) -> usize {
        let n = self.rank();
        let m = self.mult_matrix.constant_terms();
        let mut vecs: Vec<Vec<Rat>> = Vec::new();
        let mut v = vec![Rat::zero(); n];
        v[0] = Rat::one();
        for _ in 0..n {
            vecs.push(v.clone());
            v = m.apply(&v);
        }
        rank_of(vecs)
    }
}

fn rank_of(mut rows: Vec<Vec<Rat>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].recip().expect("nonzero");
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] * &inv;
                for k in 0..cols {
                    let d = &rows[rank][k] * &f;
                    rows[r][k] -= &d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `p ∘ c_i = r_{i+1} c_{i+1}` with indices mod σ.

fn accumulate(acc: &mut [QPoly], c: &QPoly, v: &[QPoly]) {
    for (a, x) in acc.iter_mut().zip(v).filter(|(_, x)| !x.is_zero()) {
        *a = &*a + &(c * x);
    }
}
pub fn multiplication_matrix(wd: &WeightData) -> Mat<QPoly> {
    let s = wd.rank();
    let mut m: Mat<QPoly> = Mat::zeros(s, s);
    for i in 0..s {
        m[((i + 1) % s, i)] = wd.r(i + 1).clone();
    }
    m
}

/// `c_i ∘ c_j = (r_1⋯r_i)^{-1} M^i e_j`.
pub fn full_product_table(wd: &WeightData, m: &Mat<QPoly>) -> Result<Vec<Vec<Vec<QPoly>>>> {
    let s = wd.rank();
    let mut table = Vec::with_capacity(s);
    let mut power: Mat<QPoly> = Mat::identity(s);
    let mut prefix = QPoly::one();
    for i in 0..s {
        if i > 0 {
            power = m.matmul(&power);
            prefix = &prefix * wd.r(i);
        }
        let inv = prefix.inv()?;
        let row: Vec<Vec<QPoly>> = (0..s)
            .map(|j| power.column(j).iter().map(|x| x * &inv).collect())
            .collect();
        table.push(row);
    }
    Ok(table)
}

/// The orbifold quantum cohomology ring of `P(w)`.
pub fn wps_ring(wd: &WeightData) -> Result<QuantumRing> {
    let m = multiplication_matrix(wd);
    let table = full_product_table(wd, &m)?;
    let gram = wps_presentation(wd).gram()?;
    let pairing = gram.try_map(|x: &HLaurent| {
        x.as_qpoly()
            .ok_or_else(|| Error::Internal(format!("ħ-dependent pairing entry {x}")))
    })?;
    let ring = QuantumRing {
        labels: wd.labels(),
        q_weight: wd.q_weight(),
        mult_matrix: m,
        table,
        pairing,
    };
    ring.check_no_negative_powers()?;
    Ok(ring)
}

#[derive(Clone, Debug)]
pub struct StructureSolution {
    pub table: Vec<Vec<Vec<QPoly>>>,
    /// `(i, j, k)` with `i ≤ j` for each coefficient of `c_k` in `c_i ∘ c_j`
    /// left free by every constraint; these are set to zero in `table`.
    pub free: Vec<(usize, usize, usize)>,
}

/// Affine form: constant plus coefficients of the free unknowns.
type Affine = (Rat, BTreeMap<usize, Rat>);

fn mono_coeff(x: &QPoly, what: &str) -> Result<Rat> {
    if x.is_zero() {
        return Ok(Rat::zero());
    }
    x.as_monomial()
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Internal(format!("{what} entry {x} is not a monomial")))
}

/// Structure constants of a commutative graded Frobenius algebra with unit
/// `c_0`, with `p = c_1` acting by `omega`. Every coefficient is a monomial
/// whose exponent is fixed by the degrees, so all constraints are linear or
/// quadratic equations over ℚ. Linear ones (unit, `p ∘`, associativity with
/// `p`, Frobenius) are imposed first; associativity equations whose quadratic
/// part vanishes on the remaining family are then added until nothing changes.
pub fn solve_structure_constants(
    omega: &Mat<QPoly>,
    pairing: &Mat<Rat>,
    degrees: &[Rat],
    q_weight: &Rat,
    root: u64,
) -> Result<StructureSolution> {
    let n = degrees.len();
    let root_r = Rat::from(root);
    let kappa = |i: usize, j: usize, k: usize| (&(&degrees[i] + &degrees[j]) - &degrees[k]) / q_weight.clone();
    let mut var: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let x = kappa(i, j, k);
                if !x.is_negative() && (&x * &root_r).is_integer() {
                    let id = var.len();
                    var.insert((i, j, k), id);
                }
            }
        }
    }
    let slot = |i: usize, j: usize, k: usize| {
        let key = if i <= j { (i, j, k) } else { (j, i, k) };
        var.get(&key).copied()
    };
    let w: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| mono_coeff(&omega[(i, j)], "p ∘")).collect())
        .collect::<Result<_>>()?;

    let mut system = LinearSystem::new(var.len());
    let pin = |sys: &mut LinearSystem, terms: Vec<(Option<usize>, Rat)>, rhs: Rat| {
        let mut e = Equation::new();
        let mut rhs = rhs;
        for (v, c) in terms {
            match v {
                Some(v) => e.add(v, &c),
                None => rhs -= &c,
            }
        }
        e.rhs = rhs;
        sys.push(e);
    };
    let one = Rat::one();
    for j in 0..n {
        for k in 0..n {
            let unit = if j == k { one.clone() } else { Rat::zero() };
            match slot(0, j, k) {
                Some(v) => pin(&mut system, vec![(Some(v), one.clone())], unit),
                None if !unit.is_zero() => {
                    return Err(Error::Internal(format!("unit cannot act on c_{j}")))
                }
                None => {}
            }
            if n > 1 {
                match slot(1, j, k) {
                    Some(v) => pin(&mut system, vec![(Some(v), one.clone())], w[k][j].clone()),
                    None if !w[k][j].is_zero() => {
                        return Err(Error::Internal(format!("p ∘ c_{j} has an entry of wrong degree")))
                    }
                    None => {}
                }
            }
        }
    }
    if n > 1 {
        // p ∘ (c_j ∘ c_k) = (p ∘ c_j) ∘ c_k
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let mut terms = Vec::new();
                    for l in 0..n {
                        if let Some(v) = slot(j, k, l) {
                            terms.push((Some(v), w[m][l].clone()));
                        }
                        if let Some(v) = slot(l, k, m) {
                            terms.push((Some(v), -&w[l][j]));
                        }
                    }
                    pin(&mut system, terms, Rat::zero());
                }
            }
        }
    }
    // ⟨c_i ∘ c_j, c_k⟩ = ⟨c_i, c_j ∘ c_k⟩
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut terms = Vec::new();
                for l in 0..n {
                    if let Some(v) = slot(i, j, l) {
                        terms.push((Some(v), pairing[(l, k)].clone()));
                    }
                    if let Some(v) = slot(j, k, l) {
                        terms.push((Some(v), -&pairing[(i, l)]));
                    }
                }
                pin(&mut system, terms, Rat::zero());
            }
        }
    }

    loop {
        let (forms, free) = match system.solve() {
            SolveOutcome::Solved(values) => {
                return Ok(StructureSolution {
                    table: build_table(n, &slot, &values, &kappa),
                    free: Vec::new(),
                })
            }
            SolveOutcome::Underdetermined { .. } => parametrize(&system),
            SolveOutcome::Inconsistent { residue, .. } => {
                return Err(Error::Inconsistent {
                    order: "structure constants".into(),
                    residue: residue.to_string(),
                })
            }
        };
        let form = |i: usize, j: usize, k: usize| -> Affine {
            slot(i, j, k).map_or((Rat::zero(), BTreeMap::new()), |v| forms[v].clone())
        };
        let before = system.rank();
        for i in 1..n {
            for j in 1..n {
                for k in 1..n {
                    for m in 0..n {
                        // (c_i ∘ c_j) ∘ c_k − c_i ∘ (c_j ∘ c_k)
                        let mut acc = Quadratic::default();
                        for l in 0..n {
                            acc.add_product(&form(i, j, l), &form(l, k, m), &one);
                            acc.add_product(&form(j, k, l), &form(i, l, m), &-&one);
                        }
                        if acc.quad.values().all(Rat::is_zero) {
                            let mut e = Equation::new();
                            for (v, c) in &acc.lin {
                                e.add(*v, c);
                            }
                            e.rhs = -acc.constant;
                            system.push(e);
                        }
                    }
                }
            }
        }
        if system.rank() == before {
            let values = match system.solve() {
                SolveOutcome::Underdetermined { values, .. } | SolveOutcome::Solved(values) => values,
                SolveOutcome::Inconsistent { residue, .. } => {
                    return Err(Error::Inconsistent {
                        order: "structure constants".into(),
                        residue: residue.to_string(),
                    })
                }
            };
            let keys: BTreeMap<usize, (usize, usize, usize)> = var.iter().map(|(k, v)| (*v, *k)).collect();
            return Ok(StructureSolution {
                table: build_table(n, &slot, &values, &kappa),
                free: free.iter().map(|v| keys[v]).collect(),
            });
        }
    }
}

#[derive(Default)]
struct Quadratic {
    constant: Rat,
    lin: BTreeMap<usize, Rat>,
    quad: BTreeMap<(usize, usize), Rat>,
}

impl Quadratic {
    fn add_product(&mut self, a: &Affine, b: &Affine, sign: &Rat) {
        self.constant += &(&(&a.0 * &b.0) * sign);
        for (v, c) in &a.1 {
            *self.lin.entry(*v).or_default() += &(&(c * &b.0) * sign);
        }
        for (v, c) in &b.1 {
            *self.lin.entry(*v).or_default() += &(&(c * &a.0) * sign);
        }
        for (u, x) in &a.1 {
            for (v, y) in &b.1 {
                let key = if u <= v { (*u, *v) } else { (*v, *u) };
                *self.quad.entry(key).or_default() += &(&(x * y) * sign);
            }
        }
    }
}

/// Every unknown as an affine form in the free ones.
fn parametrize(system: &LinearSystem) -> (Vec<Affine>, Vec<usize>) {
    let (rows, free) = system.reduced_rows();
    let mut forms: Vec<Affine> = (0..system.n_vars())
        .map(|v| {
            let mut f = BTreeMap::new();
            f.insert(v, Rat::one());
            (Rat::zero(), f)
        })
        .collect();
    for (pv, eq) in rows {
        let lin = eq
            .coeffs
            .iter()
            .filter(|(v, _)| **v != pv)
            .map(|(v, c)| (*v, -c))
            .collect();
        forms[pv] = (eq.rhs.clone(), lin);
    }
    (forms, free)
}

fn build_table(
    n: usize,
    slot: &impl Fn(usize, usize, usize) -> Option<usize>,
    values: &[Rat],
    kappa: &impl Fn(usize, usize, usize) -> Rat,
) -> Vec<Vec<Vec<QPoly>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| match slot(i, j, k) {
                            Some(v) if !values[v].is_zero() => {
                                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                                QPoly::monomial(values[v].clone(), &kappa(a, b, k))
                            }
                            _ => QPoly::zero(),
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(c: (i64, i64), e: (i64, i64)) -> QPoly {
        QPoly::monomial(Rat::new(c.0, c.1), &Rat::new(e.0, e.1))
    }

    #[test]
    fn p123_entries() {
        let wd = WeightData::new(&[1, 2, 3]).unwrap();
        let ring = wps_ring(&wd).unwrap();
        // 𝟙_{1/3} ∘ 𝟙_{1/3} = (1/3) q^{1/3}
        let mut want = vec![QPoly::zero(); 6];
        want[0] = mono((1, 3), (1, 3));
        assert_eq!(ring.product(3, 3), &want[..]);
        // 𝟙_{1/2} ∘ 𝟙_{2/3} = q^{1/6} 𝟙_{1/3}
        let mut want = vec![QPoly::zero(); 6];
        want[3] = mono((1, 1), (1, 6));
        assert_eq!(ring.product(4, 5), &want[..]);
        let classical = ring.classical_limit();
        assert!(classical[1][2].iter().all(Rat::is_zero));
        let mut three_p2 = vec![Rat::zero(); 6];
        three_p2[2] = Rat::integer(3);
        assert_eq!(classical[4][4], three_p2);
        assert!(ring.classical_p_span() < 6);
    }

    #[test]
    fn p113_square() {
        let wd = WeightData::new(&[1, 1, 3]).unwrap();
        let ring = wps_ring(&wd).unwrap();
        assert_eq!(ring.product(4, 4), &ring.basis_vector(3)[..]);
    }

    #[test]
    fn ring_axioms_small() {
        for w in [&[1][..], &[1, 2, 3], &[1, 1, 3], &[2, 3, 4], &[1, 1, 1, 1]] {
            let wd = WeightData::new(w).unwrap();
            let ring = wps_ring(&wd).unwrap();
            ring.check_identity().unwrap();
            ring.check_commutative().unwrap();
            ring.check_associative().unwrap();
            ring.check_degrees().unwrap();
            ring.check_frobenius().unwrap();
        }
    }

    #[test]
    fn tampering_breaks_associativity() {
        let wd = WeightData::new(&[1, 1, 3]).unwrap();
        let mut ring = wps_ring(&wd).unwrap();
        let two = QPoly::constant(Rat::integer(2));
        ring.table[3][3] = ring.table[3][3].iter().map(|x| x * &two).collect();
        ring.check_commutative().unwrap();
        assert!(ring.check_associative().is_err());
    }

    #[test]
    fn relation_of_the_ring() {
        let wd = WeightData::new(&[1, 2, 3]).unwrap();
        let m = multiplication_matrix(&wd);
        let lhs = m.pow(6).scale(&QPoly::constant(wd.w_pow_w_rat()));
        assert_eq!(lhs, Mat::identity(6).scale(&QPoly::q()));
    }

    #[test]
    fn point() {
        let wd = WeightData::new(&[1]).unwrap();
        let ring = wps_ring(&wd).unwrap();
        assert_eq!(ring.mult_matrix[(0, 0)], QPoly::q());
    }
}
