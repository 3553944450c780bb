// SPDX-License-Identifier: Apache-2.0

//! Brute-force leakage: enumerate every `(A, K)`, tabulate the joint law
//! of `(A, E)` and evaluate `I(A; E)` directly.
//!
//! This path never computes a rank, so it can cross-check the verifier.

use std::collections::HashMap;
use std::hash::Hash;

use num_rational::Ratio;

use crate::code::LinearDssCode;
use crate::matrix::FieldMatrix;
use crate::verifier::{VerifyError, WiretapView};

pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Number of `(A, K)` states, `q^(B+R)`.
pub fn state_count(code: &LinearDssCode) -> u128 {
    (code.field.order() as u128).saturating_pow(code.params.coordinates() as u32)
}

/// `I(A; E)` in units of `log q`, exactly.
///
/// For a uniform input every ratio `p(a, e) / (p(a) p(e))` of a linear
/// view is an integer power of `q`; anything else is reported as
/// [`VerifyError::NonLattice`].
pub fn leakage_exhaustive(
    code: &LinearDssCode,
    view: &WiretapView,
    budget: u128,
) -> Result<Ratio<i64>, VerifyError> {
    let coords = code.params.coordinates();
    let m = &view.functionals;
    if m.rows() > 0 && m.cols() != coords {
        return Err(VerifyError::CoordinateMismatch {
            expected: coords,
            got: m.cols(),
        });
    }
    let states = state_count(code);
    if states > budget {
        return Err(VerifyError::OverBudget { states, budget });
    }
    let q = code.field.order() as u64;
    let rows = m.rows() as u32;
    // pack observations into one integer when they fit
    let packed = (q as u128).checked_pow(rows).is_some();
    if packed {
        information(
            tabulate(code, m, states, |obs| {
                obs.iter()
                    .fold(0u128, |acc, &x| acc * q as u128 + x as u128)
            }),
            states,
            q,
        )
    } else {
        information(tabulate(code, m, states, |obs| obs.to_vec()), states, q)
    }
}

/// `Σ p(a,e) log_q(p(a,e) / (p(a) p(e)))` from counts over `states` draws.
fn information<K: Hash + Eq>(
    tables: Tables<K>,
    states: u128,
    q: u64,
) -> Result<Ratio<i64>, VerifyError> {
    let (joint, by_file, by_view) = tables;
    let total = states as u64;
    let mut acc = Ratio::new(0i64, 1);
    for ((a, e), &c) in &joint {
        let num = c as u128 * total as u128;
        let den = by_file[a] as u128 * by_view[e] as u128;
        let exponent = log_exact(num, den, q as u128).ok_or(VerifyError::NonLattice)?;
        acc += Ratio::new(c as i64 * exponent, total as i64);
    }
    Ok(acc)
}

type Tables<K> = (HashMap<(u64, K), u64>, HashMap<u64, u64>, HashMap<K, u64>);

/// Counts of `(A, E)`, `A` and `E` over every state.
fn tabulate<K: Hash + Eq + Clone>(
    code: &LinearDssCode,
    m: &FieldMatrix,
    states: u128,
    key: impl Fn(&[u32]) -> K,
) -> Tables<K> {
    let f = &code.field;
    let q = f.order();
    let b = code.params.file_symbols;
    let coords = code.params.coordinates();
    let mut joint: HashMap<(u64, K), u64> = HashMap::new();
    let mut by_file: HashMap<u64, u64> = HashMap::new();
    let mut by_view: HashMap<K, u64> = HashMap::new();

    let mut state = vec![0u32; coords];
    let mut obs = vec![0u32; m.rows()];
    for _ in 0..states {
        for (r, o) in obs.iter_mut().enumerate() {
            *o = m
                .row(r)
                .iter()
                .zip(&state)
                .fold(0, |acc, (&c, &x)| f.add(acc, f.mul(c, x)));
        }
        let file_idx = state[..b]
            .iter()
            .rev()
            .fold(0u64, |acc, &x| acc * q as u64 + x as u64);
        let e = key(&obs);
        *by_file.entry(file_idx).or_default() += 1;
        *by_view.entry(e.clone()).or_default() += 1;
        *joint.entry((file_idx, e)).or_default() += 1;
        // mixed-radix increment
        for x in state.iter_mut() {
            *x += 1;
            if *x < q {
                break;
            }
            *x = 0;
        }
    }
    (joint, by_file, by_view)
}

/// `t` with `num / den = base^t`, if such an integer exists.
fn log_exact(num: u128, den: u128, base: u128) -> Option<i64> {
    let (mut hi, mut lo, sign) = if num >= den {
        (num, den, 1)
    } else {
        (den, num, -1)
    };
    if hi % lo != 0 {
        return None;
    }
    hi /= lo;
    lo = 0;
    while hi > 1 {
        if hi % base != 0 {
            return None;
        }
        hi /= base;
        lo += 1;
    }
    Some(sign * lo as i64)
}
