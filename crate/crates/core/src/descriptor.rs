// SPDX-License-Identifier: Apache-2.0

//! JSON code descriptors and verification reports.
//!
//! Node numbers in descriptors are 1-based; generator column indices in
//! `layout` are 0-based. Parsing re-runs the verification gate, so a
//! descriptor whose code does not have its declared properties is refused.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Attack, CodeError, DssParams, LinearDssCode, NodeRepair, RepairPlan};
use crate::enumeration::leakage_exhaustive;
use crate::field::{FieldError, FiniteField};
use crate::matrix::{FieldMatrix, MatrixError};
use crate::verifier::{self, CheckResult, SecrecyReport, VerifyError, WiretapView};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("malformed descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported descriptor: {0}")]
    Schema(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("descriptor fails its declared properties")]
    Gate(Vec<CheckResult>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub builder: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBlock {
    pub p: u32,
    pub m: u32,
    /// Modulus coefficients, lowest degree first.
    pub poly: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixBlock {
    pub rows: usize,
    pub cols: usize,
    /// Row-major element labels.
    pub data: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairBlock {
    pub node: usize,
    pub helpers: Vec<usize>,
    pub transfers: Vec<MatrixBlock>,
    pub decoder: MatrixBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub params: DssParams,
    pub field: FieldBlock,
    pub generator: MatrixBlock,
    pub layout: Vec<Vec<usize>>,
    pub repair: Vec<RepairBlock>,
}

impl From<&FieldMatrix> for MatrixBlock {
    fn from(m: &FieldMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().to_vec(),
        }
    }
}

impl MatrixBlock {
    fn to_matrix(&self, field: &FiniteField) -> Result<FieldMatrix, MatrixError> {
        FieldMatrix::new(field, self.rows, self.cols, self.data.clone())
    }
}

impl CodeDescriptor {
    pub fn from_code(code: &LinearDssCode) -> Self {
        let f = &code.field;
        Self {
            schema_version: SCHEMA_VERSION,
            provenance: Provenance {
                builder: code.builder.clone(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            params: code.params,
            field: FieldBlock {
                p: f.characteristic(),
                m: f.degree(),
                poly: f.modulus().to_vec(),
            },
            generator: (&code.generator).into(),
            layout: code.layout.clone(),
            repair: code
                .repair
                .nodes
                .iter()
                .enumerate()
                .map(|(j, nr)| RepairBlock {
                    node: j + 1,
                    helpers: nr.helpers.iter().map(|h| h + 1).collect(),
                    transfers: nr.transfers.iter().map(MatrixBlock::from).collect(),
                    decoder: (&nr.decoder).into(),
                })
                .collect(),
        }
    }

    /// Rebuilds the code without running the gate.
    pub fn to_code_unchecked(&self) -> Result<LinearDssCode, DescriptorError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DescriptorError::Schema(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let field = if self.field.m == 1 {
            let f = FiniteField::prime(self.field.p)?;
            if self.field.poly != f.modulus() {
                return Err(DescriptorError::Schema(
                    "prime field with a nontrivial modulus".into(),
                ));
            }
            f
        } else {
            FiniteField::with_modulus(self.field.p, self.field.poly.clone())?
        };
        if field.degree() != self.field.m {
            return Err(DescriptorError::Schema(format!(
                "modulus has degree {}, field block says {}",
                field.degree(),
                self.field.m
            )));
        }
        let n = self.params.n;
        if self.repair.len() != n {
            return Err(DescriptorError::Schema(format!(
                "{} repair plans for {n} nodes",
                self.repair.len()
            )));
        }
        let mut nodes = Vec::with_capacity(n);
        for (j, block) in self.repair.iter().enumerate() {
            if block.node != j + 1 {
                return Err(DescriptorError::Schema(format!(
                    "repair plan {} is for node {}",
                    j + 1,
                    block.node
                )));
            }
            let helpers = block
                .helpers
                .iter()
                .map(|&h| {
                    h.checked_sub(1)
                        .filter(|&h| h < n)
                        .ok_or_else(|| DescriptorError::Schema(format!("helper {h} out of range")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            nodes.push(NodeRepair {
                helpers,
                transfers: block
                    .transfers
                    .iter()
                    .map(|t| t.to_matrix(&field))
                    .collect::<Result<_, _>>()?,
                decoder: block.decoder.to_matrix(&field)?,
            });
        }
        let code = LinearDssCode {
            params: self.params,
            generator: self.generator.to_matrix(&field)?,
            field,
            layout: self.layout.clone(),
            repair: RepairPlan { nodes },
            builder: self.provenance.builder.clone(),
        };
        self.params.validate()?;
        code.check_shape()?;
        Ok(code)
    }

    /// Rebuilds the code and refuses it unless every gate check passes.
    pub fn to_code(&self) -> Result<LinearDssCode, DescriptorError> {
        let code = self.to_code_unchecked()?;
        let checks = verifier::gate(&code);
        if checks.iter().all(|c| c.pass) {
            Ok(code)
        } else {
            Err(DescriptorError::Gate(checks))
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(code: &LinearDssCode) -> String {
    let mut s = serde_json::to_string_pretty(&CodeDescriptor::from_code(code))
        .expect("descriptor serializes");
    s.push('\n');
    s
}

/// Parses a descriptor and re-runs the verification gate.
pub fn parse(text: &str) -> Result<LinearDssCode, DescriptorError> {
    serde_json::from_str::<CodeDescriptor>(text)?.to_code()
}

/// Rank and enumerated leakage of one view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    /// 1-based nodes.
    pub nodes: Vec<usize>,
    pub rank_leakage: usize,
    /// Exact rational, in symbols.
    pub exhaustive_leakage: String,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub builder: String,
    pub params: DssParams,
    pub field: String,
    pub checks: Vec<CheckResult>,
    pub secrecy: Option<SecrecyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<Vec<OracleRow>>,
    pub pass: bool,
}

/// MDS, exact repair and secrecy against `attack` with `l` nodes; with a
/// budget, every secrecy view is also enumerated.
pub fn verification_report(
    code: &LinearDssCode,
    attack: Attack,
    l: usize,
    exhaustive_budget: Option<u128>,
) -> Result<VerificationReport, VerifyError> {
    let mut checks = vec![
        verifier::verify_mds(code),
        verifier::verify_exact_repair(code),
    ];
    let secrecy = match attack {
        Attack::None => None,
        a => {
            let rep = verifier::verify_secrecy(code, a, l)?;
            checks.push(rep.check());
            Some(rep)
        }
    };
    let exhaustive = match (exhaustive_budget, &secrecy) {
        (Some(budget), Some(rep)) => {
            let mut rows = Vec::with_capacity(rep.table.len());
            for entry in &rep.table {
                let nodes: Vec<usize> = entry.nodes.iter().map(|i| i - 1).collect();
                let view = WiretapView::new(code, attack, &nodes)?;
                let ex = leakage_exhaustive(code, &view, budget)?;
                rows.push(OracleRow {
                    nodes: entry.nodes.clone(),
                    rank_leakage: entry.report.leakage,
                    exhaustive_leakage: ex.to_string(),
                    agree: ex == Ratio::from_integer(entry.report.leakage as i64),
                });
            }
            let agree = rows.iter().all(|r| r.agree);
            checks.push(CheckResult {
                check: "oracle_agreement".into(),
                pass: agree,
                witness: rows.iter().find(|r| !r.agree).map(|r| r.nodes.clone()),
                detail: format!("{} views enumerated", rows.len()),
            });
            Some(rows)
        }
        _ => None,
    };
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        builder: code.builder.clone(),
        params: code.params,
        field: code.field.to_string(),
        pass: checks.iter().all(|c| c.pass),
        checks,
        secrecy,
        exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;

    #[test]
    fn round_trip_is_identity() {
        let f5 = FiniteField::prime(5).unwrap();
        for code in [
            constructions::build_322_type1(&f5).unwrap(),
            constructions::build_433_l1_minimal().unwrap(),
            constructions::build_mbr_rbt(3, 2, 1, &f5).unwrap(),
        ] {
            let text = to_json(&code);
            let back = parse(&text).unwrap();
            assert_eq!(back, code);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn extension_field_round_trip() {
        let f9 = FiniteField::extension(3, 2).unwrap();
        let code = constructions::build_322_type1(&f9).unwrap();
        let d = CodeDescriptor::from_code(&code);
        assert_eq!(d.field.poly, vec![1, 0, 1]);
        assert_eq!(parse(&to_json(&code)).unwrap(), code);
    }

    #[test]
    fn tampered_descriptor_is_refused() {
        let code = constructions::build_433_l1_minimal().unwrap();
        let mut d = CodeDescriptor::from_code(&code);
        // node 4 stores k; zero it
        d.generator.data[2 * 4 + 3] = 0;
        let text = serde_json::to_string(&d).unwrap();
        assert!(matches!(parse(&text), Err(DescriptorError::Gate(_))));

        let mut d = CodeDescriptor::from_code(&code);
        d.schema_version = 2;
        assert!(matches!(d.to_code(), Err(DescriptorError::Schema(_))));
    }

    #[test]
    fn report_with_enumeration() {
        let code = constructions::build_433_l1_minimal().unwrap();
        let rep = verification_report(&code, Attack::Type1, 1, Some(1 << 20)).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.exhaustive.unwrap().len(), 4);
    }
}
