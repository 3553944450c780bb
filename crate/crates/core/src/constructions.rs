// SPDX-License-Identifier: Apache-2.0

//! Builders for the explicit secure exact-repair codes.
//!
//! Every public `build_*` function returns a code only after it passes
//! [`verifier::gate`]: reconstruction from every `k`-subset, exact repair
//! of every node, and secrecy for its declared attack and `l`.

use thiserror::Error;

use crate::code::{
    binomial, contiguous_layout, Attack, CodeError, DssParams, LinearDssCode, NodeRepair,
    RepairPlan,
};
use crate::field::{next_prime, FieldError, FiniteField};
use crate::matrix::{FieldMatrix, MatrixError};
use crate::verifier::{self, CheckResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("{builder} needs a field of order at least {need}, got {got}")]
    FieldTooSmall {
        builder: &'static str,
        need: u32,
        got: u32,
    },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("no repair plan found for node {node}")]
    RepairSynthesis { node: usize },
    #[error("{builder} over {field} fails verification: {}", summarize(.failures))]
    Gate {
        builder: String,
        field: String,
        failures: Vec<CheckResult>,
    },
    #[error("no field up to order {limit} passes verification for {builder}")]
    NoField { builder: &'static str, limit: u32 },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn summarize(failures: &[CheckResult]) -> String {
    failures
        .iter()
        .map(|c| match &c.witness {
            Some(w) => format!("{} at nodes {:?} ({})", c.check, w, c.detail),
            None => format!("{} ({})", c.check, c.detail),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Builder identifiers accepted by the CLI and recorded as provenance.
pub mod names {
    pub const FIG1_322: &str = "fig1-322";
    pub const MBR: &str = "mbr";
    pub const TABLE1_423: &str = "table1-423";
    pub const TABLE2_433: &str = "table2-433";
    pub const TABLE3_433: &str = "table3-433";
    pub const KEYLESS_433: &str = "keyless-433";
    pub const N_MINUS_2: &str = "n-minus-2";
}

fn gated(code: LinearDssCode) -> Result<LinearDssCode, ConstructionError> {
    code.check_shape()?;
    let failures: Vec<CheckResult> = verifier::gate(&code)
        .into_iter()
        .filter(|c| !c.pass)
        .collect();
    if failures.is_empty() {
        Ok(code)
    } else {
        Err(ConstructionError::Gate {
            builder: code.builder.clone(),
            field: code.field.to_string(),
            failures,
        })
    }
}

fn require_order(
    builder: &'static str,
    field: &FiniteField,
    need: u32,
) -> Result<(), ConstructionError> {
    if field.order() < need {
        Err(ConstructionError::FieldTooSmall {
            builder,
            need,
            got: field.order(),
        })
    } else {
        Ok(())
    }
}

/// Generator whose column `c` is `Σ_s coeffs[c][s] · base_col[s]`, i.e. each
/// stored symbol is a combination of base symbols `x_s` given by the
/// columns of `base`.
fn combine_columns(base: &FieldMatrix, combos: &[Vec<(usize, u32)>]) -> FieldMatrix {
    let f = base.field();
    let mut g = FieldMatrix::zeros(f, base.rows(), combos.len());
    for (c, terms) in combos.iter().enumerate() {
        for r in 0..base.rows() {
            let v = terms
                .iter()
                .fold(0, |acc, &(s, coef)| f.add(acc, f.mul(coef, base.get(r, s))));
            g.set(r, c, v).expect("valid label");
        }
    }
    g
}

/// Rows of `F_q^len` whose first nonzero entry is 1, unit rows first, then
/// by support size and label order.
fn projective_rows(field: &FiniteField, len: usize) -> Vec<Vec<u32>> {
    let q = field.order() as u64;
    let total = q.pow(len as u32);
    let mut rows: Vec<Vec<u32>> = (1..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let d = (idx % q) as u32;
                    idx /= q;
                    d
                })
                .collect::<Vec<u32>>()
        })
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    rows.sort_by_key(|v| v.iter().filter(|&&x| x != 0).count());
    rows
}

/// Decoder for node `node` given per-helper transfers, if one exists.
fn decoder_for(
    code: &LinearDssCode,
    node: usize,
    helpers: &[usize],
    transfers: &[FieldMatrix],
) -> Option<FieldMatrix> {
    let parts: Vec<FieldMatrix> = helpers
        .iter()
        .zip(transfers)
        .map(|(&h, t)| t.mul(&code.node_functionals(h)).expect("beta x alpha"))
        .collect();
    let download = FieldMatrix::vstack_all(&code.field, code.params.coordinates(), &parts).ok()?;
    download
        .solve_left(&code.node_functionals(node))
        .ok()
        .flatten()
}

/// Repair plan using all other nodes as helpers.
///
/// With `β = α` helpers forward everything. With `β = 1` each helper sends
/// one combination of its symbols; combinations are searched in order of
/// increasing support, so unit rows (plain copies) are preferred.
pub fn synthesize_repair(code: &LinearDssCode) -> Result<RepairPlan, ConstructionError> {
    let p = code.params;
    let f = &code.field;
    let mut nodes = Vec::with_capacity(p.n);
    for j in 0..p.n {
        let helpers: Vec<usize> = (0..p.n).filter(|&i| i != j).collect();
        let found = if p.beta == p.alpha {
            let transfers = vec![FieldMatrix::identity(f, p.alpha); helpers.len()];
            decoder_for(code, j, &helpers, &transfers).map(|dec| (transfers, dec))
        } else if p.beta == 1 {
            search_single_symbol(code, j, &helpers)
        } else {
            return Err(ConstructionError::Params(format!(
                "cannot synthesize repair with alpha={} beta={}",
                p.alpha, p.beta
            )));
        };
        let (transfers, decoder) =
            found.ok_or(ConstructionError::RepairSynthesis { node: j + 1 })?;
        nodes.push(NodeRepair {
            helpers,
            transfers,
            decoder,
        });
    }
    Ok(RepairPlan { nodes })
}

fn search_single_symbol(
    code: &LinearDssCode,
    node: usize,
    helpers: &[usize],
) -> Option<(Vec<FieldMatrix>, FieldMatrix)> {
    let f = &code.field;
    let alpha = code.params.alpha;
    let cands: Vec<FieldMatrix> = projective_rows(f, alpha)
        .into_iter()
        .map(|r| FieldMatrix::new(f, 1, alpha, r).expect("valid row"))
        .collect();
    let mut choice = vec![0usize; helpers.len()];
    loop {
        let transfers: Vec<FieldMatrix> = choice.iter().map(|&c| cands[c].clone()).collect();
        if let Some(dec) = decoder_for(code, node, helpers, &transfers) {
            return Some((transfers, dec));
        }
        // odometer, last helper fastest
        let mut pos = helpers.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < cands.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn placeholder_plan(field: &FiniteField, p: &DssParams) -> RepairPlan {
    RepairPlan {
        nodes: (0..p.n)
            .map(|j| NodeRepair {
                helpers: (0..p.n).filter(|&i| i != j).collect(),
                transfers: vec![FieldMatrix::zeros(field, p.beta, p.alpha); p.d],
                decoder: FieldMatrix::zeros(field, p.alpha, p.d * p.beta),
            })
            .collect(),
    }
}

/// Code with a synthesized repair plan, before gating.
fn assemble(
    builder: &str,
    params: DssParams,
    field: &FiniteField,
    generator: FieldMatrix,
    layout: Vec<Vec<usize>>,
) -> Result<LinearDssCode, ConstructionError> {
    let mut code = LinearDssCode {
        params,
        field: field.clone(),
        generator,
        layout,
        repair: placeholder_plan(field, &params),
        builder: builder.to_string(),
    };
    code.repair = synthesize_repair(&code)?;
    Ok(code)
}

/// Three nodes storing `X + i·K`, `i = 1, 2, 3`: Type-I secure for one
/// wiretapped node but not Type-II.
pub fn build_322_type1(field: &FiniteField) -> Result<LinearDssCode, ConstructionError> {
    if field.order() <= 3 {
        return Err(ConstructionError::FieldTooSmall {
            builder: names::FIG1_322,
            need: 4,
            got: field.order(),
        });
    }
    let params = DssParams {
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
    let g = FieldMatrix::from_rows(field, 3, &[vec![1, 1, 1], vec![1, 2, 3]])?;
    gated(assemble(
        names::FIG1_322,
        params,
        field,
        g,
        contiguous_layout(3, 1),
    )?)
}

/// Smallest prime field with more than `C(n, 2)` elements.
pub fn default_mbr_field(n: usize) -> FiniteField {
    FiniteField::prime(next_prime(binomial(n, 2) as u64 + 1) as u32).expect("prime")
}

/// Repair-by-transfer MBR code with `d = n - 1` and `β = 1`.
///
/// Each unordered node pair `{i, j}` shares one codeword symbol; node `i`
/// stores the `n - 1` symbols of the pairs containing it, ordered by the
/// other node, and repair of `j` forwards the shared symbols verbatim. The
/// `C(n, 2)` codeword symbols are a Vandermonde encoding of `(A, K)` at
/// points `1..=C(n,2)` with the key on the top-degree rows.
pub fn build_mbr_rbt(
    n: usize,
    k: usize,
    l: usize,
    field: &FiniteField,
) -> Result<LinearDssCode, ConstructionError> {
    let d = n.saturating_sub(1);
    if !(l < k && k <= d) {
        return Err(ConstructionError::Params(format!(
            "need l < k <= n-1, got n={n} k={k} l={l}"
        )));
    }
    let pairs = binomial(n, 2);
    require_order(names::MBR, field, pairs as u32 + 1)?;
    let total = k * d - binomial(k, 2);
    let keys = l * d - binomial(l, 2);
    let params = DssParams {
        n,
        k,
        d,
        alpha: d,
        beta: 1,
        file_symbols: total - keys,
        key_symbols: keys,
        l,
        attack: Attack::Type2,
    };
    let points = (1..=pairs as u64)
        .map(|x| field.from_integer(x))
        .collect::<Result<Vec<_>, _>>()?;
    let base = FieldMatrix::vandermonde(field, &points, total, 0).map_err(|e| match e {
        MatrixError::DuplicatePoint(_) => ConstructionError::FieldTooSmall {
            builder: names::MBR,
            need: pairs as u32 + 1,
            got: field.order(),
        },
        other => other.into(),
    })?;
    let pair_index = |a: usize, b: usize| {
        let (i, j) = (a.min(b), a.max(b));
        // pairs enumerated (0,1), (0,2), ..., (1,2), ...
        i * n - i * (i + 1) / 2 + (j - i - 1)
    };
    let combos: Vec<Vec<(usize, u32)>> = (0..n)
        .flat_map(|i| (0..n).filter(move |&o| o != i).map(move |o| (i, o)))
        .map(|(i, o)| vec![(pair_index(i, o), 1)])
        .collect();
    let generator = combine_columns(&base, &combos);
    let layout = contiguous_layout(n, d);
    let mut code = LinearDssCode {
        params,
        field: field.clone(),
        generator,
        layout,
        repair: placeholder_plan(field, &params),
        builder: names::MBR.to_string(),
    };
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let helpers: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let transfers: Vec<FieldMatrix> = helpers
            .iter()
            .map(|&i| {
                let slot = if j < i { j } else { j - 1 };
                FieldMatrix::unit_rows(field, d, &[slot])
            })
            .collect();
        let decoder = decoder_for(&code, j, &helpers, &transfers)
            .ok_or(ConstructionError::RepairSynthesis { node: j + 1 })?;
        nodes.push(NodeRepair {
            helpers,
            transfers,
            decoder,
        });
    }
    code.repair = RepairPlan { nodes };
    gated(code)
}

fn table1_params() -> DssParams {
    DssParams {
        n: 4,
        k: 2,
        d: 3,
        alpha: 2,
        beta: 1,
        file_symbols: 2,
        key_symbols: 2,
        l: 1,
        attack: Attack::Type1,
    }
}

/// `x1..x4` as columns of the 4x4 Vandermonde matrix at points 1..4 with
/// the rows reordered so that `key_rows` come last.
fn table1_base(
    field: &FiniteField,
    key_rows: [usize; 2],
) -> Result<FieldMatrix, ConstructionError> {
    let points = (1..=4)
        .map(|x| field.from_integer(x))
        .collect::<Result<Vec<_>, _>>()?;
    let v = FieldMatrix::vandermonde(field, &points, 4, 0)?;
    let mut order: Vec<usize> = (0..4).filter(|r| !key_rows.contains(r)).collect();
    order.extend(key_rows);
    Ok(v.select_rows(&order))
}

/// `(4,2,3)` code at `(α, β) = (2, 1)` storing two file symbols.
///
/// Nodes hold `(x1, x2)`, `(x3, x4)`, `(x1+x3, x2+x4)` and `(x1+x4, x2+2x3)`.
/// The key rows of the Vandermonde precode are chosen by trying every pair
/// in a fixed order, top-degree first, and keeping the first that passes.
pub fn build_423_l1(field: &FiniteField) -> Result<LinearDssCode, ConstructionError> {
    require_order(names::TABLE1_423, field, 5)?;
    const KEY_ROW_ORDER: [[usize; 2]; 6] = [[2, 3], [0, 1], [0, 2], [0, 3], [1, 2], [1, 3]];
    let two = field.from_integer(2)?;
    let combos = vec![
        vec![(0, 1)],
        vec![(1, 1)],
        vec![(2, 1)],
        vec![(3, 1)],
        vec![(0, 1), (2, 1)],
        vec![(1, 1), (3, 1)],
        vec![(0, 1), (3, 1)],
        vec![(1, 1), (2, two)],
    ];
    let mut last = None;
    for key_rows in KEY_ROW_ORDER {
        let g = combine_columns(&table1_base(field, key_rows)?, &combos);
        let attempt = assemble(
            names::TABLE1_423,
            table1_params(),
            field,
            g,
            contiguous_layout(4, 2),
        )
        .and_then(gated);
        match attempt {
            Ok(code) => return Ok(code),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// The `(4,2,3)` layout exactly as tabulated, with node 4 holding
/// `(x1+x4, x2+x3)`. Not gated: nodes 3 and 4 together span only three
/// dimensions, so no precode makes it both recoverable and secure.
pub fn table1_as_printed(field: &FiniteField) -> Result<LinearDssCode, ConstructionError> {
    let combos = vec![
        vec![(0, 1)],
        vec![(1, 1)],
        vec![(2, 1)],
        vec![(3, 1)],
        vec![(0, 1), (2, 1)],
        vec![(1, 1), (3, 1)],
        vec![(0, 1), (3, 1)],
        vec![(1, 1), (2, 1)],
    ];
    let g = combine_columns(&table1_base(field, [2, 3])?, &combos);
    unverified(
        names::TABLE1_423,
        table1_params(),
        field,
        g,
        contiguous_layout(4, 2),
    )
}

fn unverified(
    builder: &str,
    params: DssParams,
    field: &FiniteField,
    generator: FieldMatrix,
    layout: Vec<Vec<usize>>,
) -> Result<LinearDssCode, ConstructionError> {
    let mut code = LinearDssCode {
        params,
        field: field.clone(),
        generator,
        layout,
        repair: placeholder_plan(field, &params),
        builder: builder.to_string(),
    };
    if let Ok(plan) = synthesize_repair(&code) {
        code.repair = plan;
    }
    Ok(code)
}

fn table2_params() -> DssParams {
    DssParams {
        n: 4,
        k: 3,
        d: 3,
        alpha: 1,
        beta: 1,
        file_symbols: 2,
        key_symbols: 1,
        l: 1,
        attack: Attack::Type1,
    }
}

/// `(4,3,3)` code over `F_2` at `(α, β) = (1, 1)` storing two file symbols
/// with one key: nodes hold `a1+k`, `a2+k`, `a1+a2+k`, `k`.
pub fn build_433_l1_minimal() -> Result<LinearDssCode, ConstructionError> {
    let f2 = FiniteField::prime(2)?;
    // rows a1, a2, k; one column per node
    let g = FieldMatrix::from_rows(
        &f2,
        4,
        &[vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![1, 1, 1, 1]],
    )?;
    gated(assemble(
        names::TABLE2_433,
        table2_params(),
        &f2,
        g,
        contiguous_layout(4, 1),
    )?)
}

/// The `(4,3,3)` minimal layout as tabulated, `(a1+k, a1+k, a1+a2+k, k)`.
/// Not gated: nodes {1,2,3} cannot recover `a1` and node 3 cannot be
/// rebuilt from the others.
pub fn table2_as_printed() -> Result<LinearDssCode, ConstructionError> {
    let f2 = FiniteField::prime(2)?;
    let g = FieldMatrix::from_rows(
        &f2,
        4,
        &[vec![1, 1, 1, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 1]],
    )?;
    unverified(
        names::TABLE2_433,
        table2_params(),
        &f2,
        g,
        contiguous_layout(4, 1),
    )
}

/// Symbolic description of the cyclic `(4,3,3)` code at `(α, β) = (3, 2)`.
///
/// Symbols are numbered `1..=12`: `x1..x8` are base symbols and
/// `x9 = x6+x7`, `x10 = x1+x8`, `x11 = x2+x3`, `x12 = x4+x5`.
pub mod cyclic433 {
    /// Base symbols summed by each parity symbol `x9..x12`.
    pub const PARITIES: [[usize; 2]; 4] = [[6, 7], [1, 8], [2, 3], [4, 5]];

    /// Symbols stored at node `i` (1-based): `(x_{2i-1}, x_{2i}, x_{8+i})`.
    pub fn stored(node: usize) -> [usize; 3] {
        [2 * node - 1, 2 * node, 8 + node]
    }

    /// Node relabeling `σ(i) = i + 1 (mod 4)`.
    pub fn shift_node(node: usize) -> usize {
        node % 4 + 1
    }

    /// Base symbols move by two, parity `8+i` follows its node.
    pub fn shift_symbol(sym: usize) -> usize {
        if sym <= 8 {
            (sym + 1) % 8 + 1
        } else {
            8 + shift_node(sym - 8)
        }
    }

    /// Symbols each helper sends when node 1 fails.
    pub const NODE1_REPAIR: [(usize, [usize; 2]); 3] = [(2, [3, 10]), (3, [6, 11]), (4, [7, 8])];

    /// `(helper, symbols sent)` when `node` fails, by cyclic shift of the
    /// node-1 procedure.
    pub fn repair(node: usize) -> Vec<(usize, [usize; 2])> {
        NODE1_REPAIR
            .iter()
            .map(|&(h, syms)| {
                let (mut h, mut syms) = (h, syms);
                for _ in 1..node {
                    h = shift_node(h);
                    syms = syms.map(shift_symbol);
                }
                (h, syms)
            })
            .collect()
    }

    /// Base symbols (0-based) summed to form `x_sym`.
    pub fn expand(sym: usize) -> Vec<usize> {
        if sym <= 8 {
            vec![sym - 1]
        } else {
            PARITIES[sym - 9].iter().map(|s| s - 1).collect()
        }
    }
}

fn cyclic433_code(
    builder: &str,
    params: DssParams,
    field: &FiniteField,
    base: &FieldMatrix,
) -> Result<LinearDssCode, ConstructionError> {
    let combos: Vec<Vec<(usize, u32)>> = (1..=4)
        .flat_map(cyclic433::stored)
        .map(|s| cyclic433::expand(s).into_iter().map(|b| (b, 1)).collect())
        .collect();
    let generator = combine_columns(base, &combos);
    let mut code = LinearDssCode {
        params,
        field: field.clone(),
        generator,
        layout: contiguous_layout(4, 3),
        repair: placeholder_plan(field, &params),
        builder: builder.to_string(),
    };
    let mut nodes = Vec::with_capacity(4);
    for j in 1..=4 {
        let plan = cyclic433::repair(j);
        let helpers: Vec<usize> = plan.iter().map(|(h, _)| h - 1).collect();
        let transfers: Vec<FieldMatrix> = plan
            .iter()
            .map(|(h, syms)| {
                let held = cyclic433::stored(*h);
                let slots: Vec<usize> = syms
                    .iter()
                    .map(|s| {
                        held.iter()
                            .position(|x| x == s)
                            .expect("helper stores the symbol")
                    })
                    .collect();
                FieldMatrix::unit_rows(field, 3, &slots)
            })
            .collect();
        let decoder = decoder_for(&code, j - 1, &helpers, &transfers)
            .ok_or(ConstructionError::RepairSynthesis { node: j })?;
        nodes.push(NodeRepair {
            helpers,
            transfers,
            decoder,
        });
    }
    code.repair = RepairPlan { nodes };
    Ok(code)
}

/// The cyclic `(4,3,3)` code storing five file symbols under three keys.
///
/// `x1..x8` are the columns of the 8x8 Vandermonde matrix at points 1..8
/// (rows are powers 0..7); rows 0..5 carry the file and rows 5..8 the keys.
pub fn build_433_l1_interior(field: &FiniteField) -> Result<LinearDssCode, ConstructionError> {
    require_order(names::TABLE3_433, field, 9)?;
    let params = DssParams {
        n: 4,
        k: 3,
        d: 3,
        alpha: 3,
        beta: 2,
        file_symbols: 5,
        key_symbols: 3,
        l: 1,
        attack: Attack::Type1,
    };
    let points = (1..=8)
        .map(|x| field.from_integer(x))
        .collect::<Result<Vec<_>, _>>()?;
    let base = FieldMatrix::vandermonde(field, &points, 8, 0)?;
    gated(cyclic433_code(names::TABLE3_433, params, field, &base)?)
}

/// Searches prime fields from 11 upward for [`build_433_l1_interior`].
pub fn build_433_l1_interior_auto() -> Result<LinearDssCode, ConstructionError> {
    const LIMIT: u32 = 257;
    let mut p = 11;
    while p <= LIMIT {
        let field = FiniteField::prime(p)?;
        if let Ok(code) = build_433_l1_interior(&field) {
            return Ok(code);
        }
        p = next_prime(p as u64 + 1) as u32;
    }
    Err(ConstructionError::NoField {
        builder: names::TABLE3_433,
        limit: LIMIT,
    })
}

/// The same cyclic layout without keys: `x1..x8` are the file itself.
pub fn build_433_keyless(field: &FiniteField) -> Result<LinearDssCode, ConstructionError> {
    let params = DssParams {
        n: 4,
        k: 3,
        d: 3,
        alpha: 3,
        beta: 2,
        file_symbols: 8,
        key_symbols: 0,
        l: 0,
        attack: Attack::None,
    };
    let base = FieldMatrix::identity(field, 8);
    gated(cyclic433_code(names::KEYLESS_433, params, field, &base)?)
}

/// Smallest prime field with more than `n` elements.
pub fn default_n_minus_2_field(n: usize) -> FiniteField {
    FiniteField::prime(next_prime(n as u64 + 1) as u32).expect("prime")
}

/// `(n, n-1, n-1)` code at `(α, β) = (1, 1)` storing one file symbol
/// under `n - 2` keys; node `i` stores `(1, p_i, ..., p_i^(n-2))·(a, K)`.
pub fn build_n_minus_2(n: usize, field: &FiniteField) -> Result<LinearDssCode, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Params(format!("need n >= 3, got {n}")));
    }
    require_order(names::N_MINUS_2, field, n as u32 + 1)?;
    let params = DssParams {
        n,
        k: n - 1,
        d: n - 1,
        alpha: 1,
        beta: 1,
        file_symbols: 1,
        key_symbols: n - 2,
        l: n - 2,
        attack: Attack::Type1,
    };
    let points = (1..=n as u64)
        .map(|x| field.from_integer(x))
        .collect::<Result<Vec<_>, _>>()?;
    let g = FieldMatrix::vandermonde(field, &points, n - 1, 0)?;
    gated(assemble(
        names::N_MINUS_2,
        params,
        field,
        g,
        contiguous_layout(n, 1),
    )?)
}
