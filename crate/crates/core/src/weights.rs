//! Combinatorial data attached to a weight vector.

use num_bigint::BigInt;

use crate::arith::{QPoly, Rat};
use crate::error::{Error, Result};

/// Everything derived from `(w_0, …, w_n)`.
///
/// Fractions are `F = {i / w_j : 0 ≤ i < w_j}` sorted ascending, blocks are
/// indexed from zero here (block `i` holds the `u_i` labels `𝟙_{f_i} p^j`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightData {
    pub weights: Vec<u64>,
    pub sigma: u64,
    pub w_pow_w: BigInt,
    pub fractions: Vec<Rat>,
    pub multiplicities: Vec<usize>,
    pub index_sets: Vec<Vec<usize>>,
    pub deltas: Vec<Rat>,
    pub factor_consts: Vec<Rat>,
    pub r_seq: Vec<QPoly>,
    pub ages: Vec<Rat>,
}

/// One basis element `𝟙_{f_block} p^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub block: usize,
    pub fraction: Rat,
    pub power: usize,
    pub degree: Rat,
}

impl Label {
    pub fn name(&self) -> String {
        let p = match self.power {
            0 => String::new(),
            1 => "p".to_string(),
            k => format!("p^{k}"),
        };
        if self.fraction.is_zero() {
            if p.is_empty() {
                "1".to_string()
            } else {
                p
            }
        } else if p.is_empty() {
            format!("1_{{{}}}", self.fraction)
        } else {
            format!("1_{{{}}}{}", self.fraction, p)
        }
    }
}

impl WeightData {
    pub fn new(weights: &[u64]) -> Result<WeightData> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("empty weight list".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        let sigma: u64 = weights.iter().sum();
        let w_pow_w = weights
            .iter()
            .map(|&w| num_traits::pow(BigInt::from(w), w as usize))
            .product();

        let mut fractions: Vec<Rat> = weights
            .iter()
            .flat_map(|&w| (0..w).map(move |i| Rat::new(i as i64, w as i64)))
            .collect();
        fractions.sort();
        fractions.dedup();

        let index_sets: Vec<Vec<usize>> = fractions
            .iter()
            .map(|f| {
                (0..weights.len())
                    .filter(|&j| (f * &Rat::from(weights[j])).is_integer())
                    .collect()
            })
            .collect();
        let multiplicities: Vec<usize> = index_sets.iter().map(Vec::len).collect();

        let k = fractions.len();
        let deltas: Vec<Rat> = (0..k)
            .map(|i| {
                let next = fractions.get(i + 1).cloned().unwrap_or_else(Rat::one);
                &next - &fractions[i]
            })
            .collect();
        let factor_consts: Vec<Rat> = index_sets
            .iter()
            .map(|s| s.iter().map(|&j| Rat::from(weights[j])).fold(Rat::one(), |a, b| a * b))
            .collect();

        let mut r_seq = vec![QPoly::one(); sigma as usize];
        let mut alpha = 0usize;
        for i in 0..k {
            alpha += multiplicities[i];
            r_seq[alpha - 1] =
                QPoly::monomial(factor_consts[i].recip().expect("positive"), &deltas[i]);
        }

        let sig = Rat::from(sigma);
        let mut ages = Vec::with_capacity(k);
        let mut before = 0usize;
        for i in 0..k {
            ages.push(Rat::from(before as u64) - &fractions[i] * &sig);
            before += multiplicities[i];
        }

        Ok(WeightData {
            weights: weights.to_vec(),
            sigma,
            w_pow_w,
            fractions,
            multiplicities,
            index_sets,
            deltas,
            factor_consts,
            r_seq,
            ages,
        })
    }

    pub fn n_blocks(&self) -> usize {
        self.fractions.len()
    }

    pub fn rank(&self) -> usize {
        self.sigma as usize
    }

    /// `u_0 + … + u_{i-1}` (zero-based blocks), i.e. the first index of block `i`.
    pub fn block_start(&self, i: usize) -> usize {
        self.multiplicities[..i].iter().sum()
    }

    pub fn block_of(&self, alpha: usize) -> usize {
        let mut acc = 0;
        for (i, u) in self.multiplicities.iter().enumerate() {
            acc += u;
            if alpha < acc {
                return i;
            }
        }
        panic!("index {alpha} beyond rank {}", self.sigma)
    }

    /// `r_α` for `1 ≤ α ≤ σ`.
    pub fn r(&self, alpha: usize) -> &QPoly {
        &self.r_seq[alpha - 1]
    }

    pub fn w_pow_w_rat(&self) -> Rat {
        Rat::from(self.w_pow_w.clone())
    }

    /// Ages from the fractional-part formula `Σ_j ⟨−w_j f⟩`.
    pub fn ages_by_fractional_parts(&self) -> Vec<Rat> {
        self.fractions
            .iter()
            .map(|f| {
                self.weights
                    .iter()
                    .map(|&w| (-(f * &Rat::from(w))).fract_floor())
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::with_capacity(self.rank());
        for (i, f) in self.fractions.iter().enumerate() {
            for j in 0..self.multiplicities[i] {
                out.push(Label {
                    block: i,
                    fraction: f.clone(),
                    power: j,
                    degree: Rat::integer(2) * &self.ages[i] + Rat::integer(2 * j as i64),
                });
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<Rat> {
        self.labels().into_iter().map(|l| l.degree).collect()
    }

    /// Grading weight of `q`: `2σ`.
    pub fn q_weight(&self) -> Rat {
        Rat::from(2 * self.sigma)
    }

    /// The root order of `q` needed by all `r_α`.
    pub fn root_order(&self) -> u64 {
        self.r_seq
            .iter()
            .map(QPoly::root_order)
            .fold(1, crate::arith::lcm_u64)
    }

    /// Leading factors of the factorization `q^{-1} T_w = Π_i m_i q^{-Δ_i} (ħθ)^{u_i}`,
    /// as `(m_i, Δ_i, u_i)` from the left (`i = k` first).
    pub fn factorization(&self) -> Vec<(Rat, Rat, usize)> {
        (0..self.n_blocks())
            .rev()
            .map(|i| {
                (
                    self.factor_consts[i].clone(),
                    self.deltas[i].clone(),
                    self.multiplicities[i],
                )
            })
            .collect()
    }
}

/// Renders the factorization as `m q^{-Δ}(ħθ)^u · …`.
pub fn factorization_string(wd: &WeightData) -> String {
    wd.factorization()
        .iter()
        .map(|(m, d, u)| {
            let pow = if *u == 1 {
                String::new()
            } else {
                format!("^{u}")
            };
            format!("{m} q^(-{d})(ħθ){pow}")
        })
        .collect::<Vec<_>>()
        .join(" · ")
}
