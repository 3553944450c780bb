// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use sregen_core::constructions::*;
use sregen_core::{FiniteField, LinearDssCode};

pub fn field(q: u64) -> FiniteField {
    FiniteField::of_order(q).unwrap()
}

pub fn fig1() -> LinearDssCode {
    build_322_type1(&field(5)).unwrap()
}

pub fn table1() -> LinearDssCode {
    build_423_l1(&field(5)).unwrap()
}

pub fn table2() -> LinearDssCode {
    build_433_l1_minimal().unwrap()
}

pub fn table3() -> LinearDssCode {
    build_433_l1_interior_auto().unwrap()
}

pub fn keyless() -> LinearDssCode {
    build_433_keyless(&field(2)).unwrap()
}

/// `(n, k, l)` of the MBR operating points; `d = n - 1`.
pub const MBR_POINTS: [(usize, usize, usize); 6] = [
    (3, 2, 1),
    (4, 2, 1),
    (4, 3, 1),
    (4, 3, 2),
    (5, 4, 3),
    (6, 5, 4),
];

pub fn mbr(n: usize, k: usize, l: usize) -> LinearDssCode {
    build_mbr_rbt(n, k, l, &default_mbr_field(n)).unwrap()
}

pub fn n_minus_2(n: usize) -> LinearDssCode {
    build_n_minus_2(n, &default_n_minus_2_field(n)).unwrap()
}

/// One code from every builder at its default field.
pub fn all_codes() -> Vec<LinearDssCode> {
    let mut out = vec![fig1(), table1(), table2(), table3(), keyless()];
    out.extend(MBR_POINTS.iter().map(|&(n, k, l)| mbr(n, k, l)));
    out.extend((3..=6).map(n_minus_2));
    out
}

/// 0-based node subsets given 1-based numbers.
pub fn nodes(one_based: &[usize]) -> Vec<usize> {
    one_based.iter().map(|i| i - 1).collect()
}
