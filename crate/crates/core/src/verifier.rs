// SPDX-License-Identifier: Apache-2.0

//! Rank-based checks of reconstruction, exact repair and secrecy.
//!
//! For uniform independent `A` and `K`, an observation `E = M·(A, K)`
//! leaks `I(A; E) = rank(M) - rank(M_K)` symbols, where `M_K` keeps only
//! the key columns of `M`.

use serde::Serialize;
use thiserror::Error;

use crate::code::{subsets, Attack, LinearDssCode};
use crate::matrix::FieldMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("view has {got} coordinates, code has {expected}")]
    CoordinateMismatch { expected: usize, got: usize },
    #[error("state space of {states} exceeds the enumeration budget {budget}")]
    OverBudget { states: u128, budget: u128 },
    #[error("node {0} is out of range")]
    BadNode(usize),
    #[error("view distribution is not a lattice distribution over F_q")]
    NonLattice,
    #[error("attack kind {0} has no wiretap view")]
    NoView(Attack),
}

/// What the adversary sees, as functionals over `(A, K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapView {
    pub attack: Attack,
    pub nodes: Vec<usize>,
    pub functionals: FieldMatrix,
}

impl WiretapView {
    pub fn new(code: &LinearDssCode, attack: Attack, nodes: &[usize]) -> Result<Self, VerifyError> {
        if let Some(&bad) = nodes.iter().find(|&&i| i >= code.n()) {
            return Err(VerifyError::BadNode(bad));
        }
        match attack {
            Attack::Type1 => Ok(Self::type1(code, nodes)),
            Attack::Type2 => Ok(Self::type2(code, nodes)),
            Attack::None => Err(VerifyError::NoView(attack)),
        }
    }

    /// Stored contents of `nodes`.
    pub fn type1(code: &LinearDssCode, nodes: &[usize]) -> Self {
        Self {
            attack: Attack::Type1,
            nodes: nodes.to_vec(),
            functionals: code.stored_functionals(nodes),
        }
    }

    /// Every download made while repairing each node of `nodes`, with
    /// repeated rows dropped after their first occurrence.
    pub fn type2(code: &LinearDssCode, nodes: &[usize]) -> Self {
        let rows = type2_rows(code, nodes)
            .into_iter()
            .map(|r| r.row)
            .collect::<Vec<_>>();
        Self {
            attack: Attack::Type2,
            nodes: nodes.to_vec(),
            functionals: FieldMatrix::from_rows(&code.field, code.params.coordinates(), &rows)
                .expect("rows have code width"),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.rows() == 0
    }
}

/// One observed download row of a type-2 view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownloadRow {
    /// Node being repaired.
    pub node: usize,
    /// Position of the helper in the node's repair plan.
    pub helper_pos: usize,
    /// Row of that helper's transfer.
    pub row_index: usize,
    pub row: Vec<u32>,
}

/// Every type-2 download row in observation order, keeping only the first
/// occurrence of repeated rows. Shared with the simulator so that observed
/// values and functionals stay aligned.
pub fn type2_rows(code: &LinearDssCode, nodes: &[usize]) -> Vec<DownloadRow> {
    let mut out: Vec<DownloadRow> = Vec::new();
    for &j in nodes {
        for helper_pos in 0..code.repair.nodes[j].helpers.len() {
            let t = code.transfer_functionals(j, helper_pos);
            for row_index in 0..t.rows() {
                let row = t.row(row_index).to_vec();
                if !out.iter().any(|seen| seen.row == row) {
                    out.push(DownloadRow {
                        node: j,
                        helper_pos,
                        row_index,
                        row,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeakageReport {
    /// `I(A; E)` in symbols.
    pub leakage: usize,
    /// `H(E) = rank(M)`.
    pub observed_rank: usize,
    /// `H(E | A) = rank(M_K)`.
    pub key_rank: usize,
    pub secure: bool,
}

pub fn leakage_rank(
    code: &LinearDssCode,
    view: &WiretapView,
) -> Result<LeakageReport, VerifyError> {
    let coords = code.params.coordinates();
    if view.functionals.rows() > 0 && view.functionals.cols() != coords {
        return Err(VerifyError::CoordinateMismatch {
            expected: coords,
            got: view.functionals.cols(),
        });
    }
    Ok(rank_leakage(code, &view.functionals))
}

pub(crate) fn rank_leakage(code: &LinearDssCode, m: &FieldMatrix) -> LeakageReport {
    if m.rows() == 0 {
        return LeakageReport {
            leakage: 0,
            observed_rank: 0,
            key_rank: 0,
            secure: true,
        };
    }
    let observed_rank = m.rank();
    let key_rank = code.key_part(m).rank();
    let leakage = observed_rank - key_rank;
    LeakageReport {
        leakage,
        observed_rank,
        key_rank,
        secure: leakage == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    /// Offending nodes (1-based) when the check fails.
    pub witness: Option<Vec<usize>>,
    pub detail: String,
}

impl CheckResult {
    fn ok(check: &str, detail: String) -> Self {
        Self {
            check: check.into(),
            pass: true,
            witness: None,
            detail,
        }
    }

    fn fail(check: &str, nodes: &[usize], detail: String) -> Self {
        Self {
            check: check.into(),
            pass: false,
            witness: Some(nodes.iter().map(|i| i + 1).collect()),
            detail,
        }
    }
}

/// Every `k`-subset must determine the whole file.
pub fn verify_mds(code: &LinearDssCode) -> CheckResult {
    let p = &code.params;
    let all = subsets(p.n, p.k);
    for s in &all {
        let rep = rank_leakage(code, &code.stored_functionals(s));
        if rep.leakage != p.file_symbols {
            return CheckResult::fail(
                "mds",
                s,
                format!(
                    "recovers {} of {} file symbols",
                    rep.leakage, p.file_symbols
                ),
            );
        }
    }
    CheckResult::ok("mds", format!("{} subsets of size {}", all.len(), p.k))
}

/// `Decode_j · stack_i(P_ij · W_i) = W_j` as maps on `(A, K)` for every node.
pub fn verify_exact_repair(code: &LinearDssCode) -> CheckResult {
    let p = &code.params;
    for j in 0..p.n {
        let nr = &code.repair.nodes[j];
        if nr.transfers.iter().any(|t| t.shape() != (p.beta, p.alpha))
            || nr.decoder.shape() != (p.alpha, p.d * p.beta)
        {
            return CheckResult::fail("exact_repair", &[j], "plan has wrong shape".into());
        }
        let download = code.repair_download(j);
        match nr.decoder.mul(&download) {
            Ok(rebuilt) if rebuilt == code.node_functionals(j) => {}
            _ => {
                return CheckResult::fail(
                    "exact_repair",
                    &[j],
                    "decoded functionals differ from stored ones".into(),
                )
            }
        }
    }
    CheckResult::ok("exact_repair", format!("{} nodes", p.n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetLeakage {
    /// 1-based node numbers.
    pub nodes: Vec<usize>,
    #[serde(flatten)]
    pub report: LeakageReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecrecyReport {
    pub attack: Attack,
    pub l: usize,
    pub pass: bool,
    /// Largest leakage over all subsets, first such subset.
    pub worst: SubsetLeakage,
    pub table: Vec<SubsetLeakage>,
}

impl SecrecyReport {
    pub fn check(&self) -> CheckResult {
        let name = format!("{}(l={})", self.attack, self.l);
        if self.pass {
            CheckResult::ok(&name, format!("{} subsets, leakage 0", self.table.len()))
        } else {
            CheckResult {
                check: name,
                pass: false,
                witness: Some(self.worst.nodes.clone()),
                detail: format!("leakage {} symbols", self.worst.report.leakage),
            }
        }
    }
}

/// Leakage of every `l`-subset under `attack`.
pub fn verify_secrecy(
    code: &LinearDssCode,
    attack: Attack,
    l: usize,
) -> Result<SecrecyReport, VerifyError> {
    let mut table = Vec::new();
    for s in subsets(code.n(), l) {
        let view = WiretapView::new(code, attack, &s)?;
        table.push(SubsetLeakage {
            nodes: s.iter().map(|i| i + 1).collect(),
            report: leakage_rank(code, &view)?,
        });
    }
    let worst = table
        .iter()
        .fold(None::<&SubsetLeakage>, |best, cur| match best {
            Some(b) if b.report.leakage >= cur.report.leakage => Some(b),
            _ => Some(cur),
        })
        .cloned()
        .unwrap_or(SubsetLeakage {
            nodes: Vec::new(),
            report: rank_leakage(code, &FieldMatrix::zeros(&code.field, 0, 0)),
        });
    Ok(SecrecyReport {
        attack,
        l,
        pass: worst.report.leakage == 0,
        worst,
        table,
    })
}

pub fn verify_type1(code: &LinearDssCode, l: usize) -> SecrecyReport {
    verify_secrecy(code, Attack::Type1, l).expect("type1 views always exist")
}

pub fn verify_type2(code: &LinearDssCode, l: usize) -> SecrecyReport {
    verify_secrecy(code, Attack::Type2, l).expect("type2 views always exist")
}

/// MDS, exact repair and the declared secrecy property.
pub fn gate(code: &LinearDssCode) -> Vec<CheckResult> {
    let mut out = vec![verify_mds(code), verify_exact_repair(code)];
    match code.params.attack {
        Attack::None => {}
        attack => out.push(
            verify_secrecy(code, attack, code.params.l)
                .expect("view exists")
                .check(),
        ),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{contiguous_layout, DssParams, NodeRepair, RepairPlan};
    use crate::field::FiniteField;

    /// n copies of a single file symbol, repaired by copying from helpers.
    fn repetition(n: usize) -> LinearDssCode {
        let f = FiniteField::prime(5).unwrap();
        let g = FieldMatrix::new(&f, 1, n, vec![1; n]).unwrap();
        let nodes = (0..n)
            .map(|j| {
                let helpers: Vec<usize> = (0..n).filter(|&i| i != j).collect();
                let mut dec = vec![0u32; n - 1];
                dec[0] = 1;
                NodeRepair {
                    transfers: helpers
                        .iter()
                        .map(|_| FieldMatrix::identity(&f, 1))
                        .collect(),
                    helpers,
                    decoder: FieldMatrix::new(&f, 1, n - 1, dec).unwrap(),
                }
            })
            .collect();
        LinearDssCode {
            params: DssParams {
                n,
                k: 1,
                d: n - 1,
                alpha: 1,
                beta: 1,
                file_symbols: 1,
                key_symbols: 0,
                l: 0,
                attack: Attack::None,
            },
            field: f.clone(),
            generator: g,
            layout: contiguous_layout(n, 1),
            repair: RepairPlan { nodes },
            builder: "repetition".into(),
        }
    }

    #[test]
    fn copy_repair_passes() {
        let c = repetition(4);
        c.check_shape().unwrap();
        assert!(verify_mds(&c).pass);
        assert!(verify_exact_repair(&c).pass);
        assert!(verify_type1(&c, 0).pass);
    }

    #[test]
    fn zeroed_node_fails_mds_with_witness() {
        let mut c = repetition(3);
        c.generator.set(0, 0, 0).unwrap();
        let r = verify_mds(&c);
        assert!(!r.pass);
        assert!(r.witness.unwrap().contains(&1));
    }

    #[test]
    fn zeroed_transfer_fails_repair() {
        let mut c = repetition(3);
        c.repair.nodes[1].transfers[0] = FieldMatrix::zeros(&c.field, 1, 1);
        let r = verify_exact_repair(&c);
        assert!(!r.pass);
        assert_eq!(r.witness, Some(vec![2]));
    }

    #[test]
    fn keyless_view_leaks_its_rank() {
        let c = repetition(3);
        let rep = leakage_rank(&c, &WiretapView::type1(&c, &[0])).unwrap();
        assert_eq!(rep.leakage, 1);
        let empty = leakage_rank(&c, &WiretapView::type1(&c, &[])).unwrap();
        assert_eq!(empty.leakage, 0);
        assert!(empty.secure);
    }
}
