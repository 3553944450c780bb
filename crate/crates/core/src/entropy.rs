// SPDX-License-Identifier: Apache-2.0

//! Entropies of joint distributions over a few finite random variables.

use rand::Rng;
use thiserror::Error;

/// Slack allowed when comparing sums of entropies computed in `f64`.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;

pub const MAX_VARIABLES: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("at most {MAX_VARIABLES} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("{got} probabilities for a table of size {expected}")]
    Size { expected: usize, got: usize },
    #[error("probabilities must be nonnegative and sum to 1")]
    NotNormalized,
    #[error("variable index {0} out of range")]
    BadVariable(usize),
}

/// A joint law, stored row-major with the last variable fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    cards: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(cards: Vec<usize>, probs: Vec<f64>) -> Result<Self, EntropyError> {
        if cards.len() > MAX_VARIABLES {
            return Err(EntropyError::TooManyVariables(cards.len()));
        }
        let size: usize = cards.iter().product();
        if probs.len() != size {
            return Err(EntropyError::Size {
                expected: size,
                got: probs.len(),
            });
        }
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) || (total - 1.0).abs() > 1e-12 {
            return Err(EntropyError::NotNormalized);
        }
        Ok(Self { cards, probs })
    }

    /// Normalizes nonnegative integer weights.
    pub fn from_counts(cards: Vec<usize>, counts: &[u64]) -> Result<Self, EntropyError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(EntropyError::NotNormalized);
        }
        Self::new(
            cards,
            counts.iter().map(|&c| c as f64 / total as f64).collect(),
        )
    }

    /// Random law with integer weights in `0..16` on every cell.
    pub fn random<R: Rng>(rng: &mut R, cards: Vec<usize>) -> Self {
        let size: usize = cards.iter().product();
        loop {
            let counts: Vec<u64> = (0..size).map(|_| rng.gen_range(0..16)).collect();
            if let Ok(d) = Self::from_counts(cards.clone(), &counts) {
                return d;
            }
        }
    }

    pub fn variables(&self) -> usize {
        self.cards.len()
    }

    fn marginal(&self, vars: &[usize]) -> Result<Vec<f64>, EntropyError> {
        if let Some(&bad) = vars.iter().find(|&&v| v >= self.cards.len()) {
            return Err(EntropyError::BadVariable(bad));
        }
        let size: usize = vars.iter().map(|&v| self.cards[v]).product();
        let mut out = vec![0.0; size];
        let mut idx = vec![0usize; self.cards.len()];
        for &p in &self.probs {
            let cell = vars.iter().fold(0, |acc, &v| acc * self.cards[v] + idx[v]);
            out[cell] += p;
            for pos in (0..idx.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < self.cards[pos] {
                    break;
                }
                idx[pos] = 0;
            }
        }
        Ok(out)
    }

    /// `H(vars)` in bits.
    pub fn entropy(&self, vars: &[usize]) -> Result<f64, EntropyError> {
        let mut vs = vars.to_vec();
        vs.sort_unstable();
        vs.dedup();
        Ok(self
            .marginal(&vs)?
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum())
    }

    /// `H(of | given) = H(of, given) - H(given)`.
    pub fn conditional_entropy(&self, of: &[usize], given: &[usize]) -> Result<f64, EntropyError> {
        let joint: Vec<usize> = of.iter().chain(given).copied().collect();
        Ok(self.entropy(&joint)? - self.entropy(given)?)
    }

    /// `I(a; b | given)`.
    pub fn mutual_information(
        &self,
        a: &[usize],
        b: &[usize],
        given: &[usize],
    ) -> Result<f64, EntropyError> {
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        Ok(
            self.conditional_entropy(a, given)? + self.conditional_entropy(b, given)?
                - self.conditional_entropy(&ab, given)?,
        )
    }
}

/// Both sides of `H(X,Y|U) + H(X,Z|U) + H(Y,Z|U) >= 2 H(X,Y,Z|U)` for
/// variables `(X, Y, Z, U) = (0, 1, 2, 3)`; `U` may be absent.
pub fn pairwise_inequality(d: &JointDistribution) -> Result<(f64, f64), EntropyError> {
    let given: Vec<usize> = if d.variables() > 3 {
        vec![3]
    } else {
        Vec::new()
    };
    let lhs = d.conditional_entropy(&[0, 1], &given)?
        + d.conditional_entropy(&[0, 2], &given)?
        + d.conditional_entropy(&[1, 2], &given)?;
    let rhs = 2.0 * d.conditional_entropy(&[0, 1, 2], &given)?;
    Ok((lhs, rhs))
}

/// Checks the pairwise inequality on `trials` random laws and returns the
/// number of violations beyond [`ENTROPY_TOLERANCE`].
pub fn shannon_sanity<R: Rng>(rng: &mut R, trials: usize) -> usize {
    (0..trials)
        .filter(|_| {
            let cards = (0..4).map(|_| rng.gen_range(1..=3)).collect();
            let d = JointDistribution::random(rng, cards);
            let (lhs, rhs) = pairwise_inequality(&d).expect("four variables");
            lhs < rhs - ENTROPY_TOLERANCE
        })
        .count()
}
