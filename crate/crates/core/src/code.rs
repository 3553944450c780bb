// SPDX-License-Identifier: Apache-2.0

//! Linear distributed-storage codes over (file, key) coordinates.
//!
//! Every stored or transmitted symbol is a linear functional of the vector
//! `(A, K)` of `B` file symbols followed by `R` key symbols. The generator
//! `G` is `(B+R) x nα`; node `i` stores the `α` columns listed in
//! `layout[i]`. Nodes are numbered from 0 in the API and from 1 in every
//! serialized artifact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FiniteField;
use crate::matrix::{FieldMatrix, MatrixError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attack {
    None,
    Type1,
    Type2,
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attack::None => "none",
            Attack::Type1 => "type1",
            Attack::Type2 => "type2",
        })
    }
}

impl FromStr for Attack {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Attack::None),
            "type1" | "type-i" | "1" => Ok(Attack::Type1),
            "type2" | "type-ii" | "2" => Ok(Attack::Type2),
            other => Err(format!("unknown attack kind {other:?}")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("malformed code: {0}")]
    Shape(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `(n, k, d, α, β, B, R, l, attack)` of a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DssParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
    /// Secure file size `B`.
    #[serde(rename = "B")]
    pub file_symbols: usize,
    /// Key size `R`.
    #[serde(rename = "R")]
    pub key_symbols: usize,
    /// Number of wiretapped nodes `l`.
    pub l: usize,
    pub attack: Attack,
}

impl DssParams {
    pub fn validate(&self) -> Result<(), CodeError> {
        let bad = |m: String| Err(CodeError::Params(m));
        if !(self.k <= self.d && self.d < self.n) {
            return bad(format!(
                "need k <= d <= n-1, got (n,k,d)=({},{},{})",
                self.n, self.k, self.d
            ));
        }
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.l >= self.k {
            return bad(format!("need l < k, got l={} k={}", self.l, self.k));
        }
        if self.beta > self.alpha || self.alpha == 0 || self.beta == 0 {
            return bad(format!(
                "need 1 <= beta <= alpha, got alpha={} beta={}",
                self.alpha, self.beta
            ));
        }
        if self.file_symbols == 0 {
            return bad("file size must be at least one symbol".into());
        }
        Ok(())
    }

    /// `B + R`, the number of coordinates every functional acts on.
    pub fn coordinates(&self) -> usize {
        self.file_symbols + self.key_symbols
    }
}

/// Repair of a single node: what each helper sends and how it is decoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRepair {
    pub helpers: Vec<usize>,
    /// One `β x α` matrix per helper, applied to the helper's contents.
    pub transfers: Vec<FieldMatrix>,
    /// `α x dβ` matrix applied to the concatenated downloads.
    pub decoder: FieldMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan {
    pub nodes: Vec<NodeRepair>,
}

/// A complete linear code with its repair plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearDssCode {
    pub params: DssParams,
    pub field: FiniteField,
    pub generator: FieldMatrix,
    pub layout: Vec<Vec<usize>>,
    pub repair: RepairPlan,
    /// Builder that produced the code.
    pub builder: String,
}

impl LinearDssCode {
    /// Checks shapes only; the property checks live in `verifier`.
    pub fn check_shape(&self) -> Result<(), CodeError> {
        let p = &self.params;
        p.validate()?;
        let bad = |m: String| Err(CodeError::Shape(m));
        if self.generator.field() != &self.field {
            return bad("generator field differs from code field".into());
        }
        if self.generator.shape() != (p.coordinates(), p.n * p.alpha) {
            return bad(format!(
                "generator is {:?}, expected ({}, {})",
                self.generator.shape(),
                p.coordinates(),
                p.n * p.alpha
            ));
        }
        if self.layout.len() != p.n || self.layout.iter().any(|cols| cols.len() != p.alpha) {
            return bad("layout must list alpha columns for each of n nodes".into());
        }
        let mut seen = vec![false; p.n * p.alpha];
        for &c in self.layout.iter().flatten() {
            if c >= seen.len() || seen[c] {
                return bad(format!("column {c} missing or assigned twice"));
            }
            seen[c] = true;
        }
        if self.repair.nodes.len() != p.n {
            return bad("repair plan must cover every node".into());
        }
        for (j, nr) in self.repair.nodes.iter().enumerate() {
            if nr.helpers.len() != p.d || nr.transfers.len() != p.d {
                return bad(format!("node {} repair must use d={} helpers", j + 1, p.d));
            }
            if nr.helpers.iter().any(|&h| h == j || h >= p.n) {
                return bad(format!("node {} has an invalid helper", j + 1));
            }
            let mut hs = nr.helpers.clone();
            hs.sort_unstable();
            hs.dedup();
            if hs.len() != p.d {
                return bad(format!("node {} repeats a helper", j + 1));
            }
            if nr.transfers.iter().any(|t| t.shape() != (p.beta, p.alpha)) {
                return bad(format!("node {} transfer is not beta x alpha", j + 1));
            }
            if nr.decoder.shape() != (p.alpha, p.d * p.beta) {
                return bad(format!("node {} decoder is not alpha x d*beta", j + 1));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// The `α x (B+R)` functionals stored at `node`.
    pub fn node_functionals(&self, node: usize) -> FieldMatrix {
        self.generator.select_cols(&self.layout[node]).transpose()
    }

    /// Functionals stored at every node of `nodes`, stacked in order.
    pub fn stored_functionals(&self, nodes: &[usize]) -> FieldMatrix {
        let cols: Vec<usize> = nodes
            .iter()
            .flat_map(|&i| self.layout[i].iter().copied())
            .collect();
        self.generator.select_cols(&cols).transpose()
    }

    /// The `β x (B+R)` functionals helper `i` sends when `node` is repaired.
    pub fn transfer_functionals(&self, node: usize, helper_pos: usize) -> FieldMatrix {
        let nr = &self.repair.nodes[node];
        nr.transfers[helper_pos]
            .mul(&self.node_functionals(nr.helpers[helper_pos]))
            .expect("shapes checked")
    }

    /// All `dβ` download functionals for repairing `node`, helper order.
    pub fn repair_download(&self, node: usize) -> FieldMatrix {
        let parts: Vec<FieldMatrix> = (0..self.params.d)
            .map(|h| self.transfer_functionals(node, h))
            .collect();
        FieldMatrix::vstack_all(&self.field, self.params.coordinates(), &parts).expect("same width")
    }

    /// Columns `B..B+R` of a functional matrix.
    pub fn key_part(&self, functionals: &FieldMatrix) -> FieldMatrix {
        let b = self.params.file_symbols;
        functionals.col_range(b..b + self.params.key_symbols)
    }

    /// `[I_B | 0]`: the functionals that read off the file.
    pub fn file_functionals(&self) -> FieldMatrix {
        let idx: Vec<usize> = (0..self.params.file_symbols).collect();
        FieldMatrix::unit_rows(&self.field, self.params.coordinates(), &idx)
    }

    /// Node contents for a concrete `(A, K)`.
    pub fn encode(&self, file: &[u32], keys: &[u32]) -> Result<Vec<Vec<u32>>, CodeError> {
        if file.len() != self.params.file_symbols || keys.len() != self.params.key_symbols {
            return Err(CodeError::Params(format!(
                "expected {} file and {} key symbols",
                self.params.file_symbols, self.params.key_symbols
            )));
        }
        let state: Vec<u32> = file.iter().chain(keys).copied().collect();
        (0..self.params.n)
            .map(|i| Ok(self.node_functionals(i).mul_vec(&state)?))
            .collect()
    }

    /// Disk reads of helper `helper_pos` when repairing `node`: the number
    /// of stored symbols with a nonzero coefficient in some transfer row.
    pub fn transfer_reads(&self, node: usize, helper_pos: usize) -> usize {
        let t = &self.repair.nodes[node].transfers[helper_pos];
        (0..t.cols())
            .filter(|&c| (0..t.rows()).any(|r| t.get(r, c) != 0))
            .count()
    }
}

/// Contiguous layout: node `i` owns columns `iα..(i+1)α`.
pub fn contiguous_layout(n: usize, alpha: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| (i * alpha..(i + 1) * alpha).collect())
        .collect()
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= n {
        rec(0, n, size, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_all() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(5, 3).len(), binomial(5, 3));
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn params_validation() {
        let mut p = DssParams {
            n: 3,
            k: 2,
            d: 2,
            alpha: 1,
            beta: 1,
            file_symbols: 1,
            key_symbols: 1,
            l: 1,
            attack: Attack::Type1,
        };
        assert!(p.validate().is_ok());
        p.l = 2;
        assert!(p.validate().is_err());
        p.l = 1;
        p.beta = 2;
        assert!(p.validate().is_err());
        p.beta = 1;
        p.d = 3;
        assert!(p.validate().is_err());
    }

    #[test]
    fn attack_parsing() {
        assert_eq!("type2".parse::<Attack>().unwrap(), Attack::Type2);
        assert_eq!("Type-I".parse::<Attack>().unwrap(), Attack::Type1);
        assert!("type3".parse::<Attack>().is_err());
    }
}
