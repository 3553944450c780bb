// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. All comparisons are exact except the entropy
//! check, which uses `ENTROPY_TOLERANCE`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sregen_core::code::{contiguous_layout, subsets, DssParams, RepairPlan};
use sregen_core::constructions::{cyclic433, synthesize_repair};
use sregen_core::entropy::{shannon_sanity, ENTROPY_TOLERANCE};
use sregen_core::enumeration::{leakage_exhaustive, state_count};
use sregen_core::sim::SimState;
use sregen_core::tradeoff::{
    covered_tuples, functional_capacity, mbr_secure_capacity, rat, region_sweep,
    secure_capacity_bound, theorem_bound, upper_bound, GridSpec, Rational, RegionFamily,
    TradeoffQuery,
};
use sregen_core::verifier::{
    gate, leakage_rank, verify_exact_repair, verify_mds, verify_type1, verify_type2, SecrecyReport,
    WiretapView,
};
use sregen_core::{Attack, FieldMatrix, LinearDssCode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn int(n: usize) -> Rational {
    Ratio::from_integer(n as i64)
}

fn query(code: &LinearDssCode, attack: Attack) -> TradeoffQuery {
    let p = code.params;
    TradeoffQuery {
        n: p.n,
        k: p.k,
        d: p.d,
        l: p.l,
        alpha: int(p.alpha),
        beta: int(p.beta),
        attack,
    }
}

fn all_zero(rep: &SecrecyReport) -> bool {
    rep.pass && rep.table.iter().all(|r| r.report.leakage == 0)
}

fn ac1() -> Outcome {
    let code = table1();
    let p = code.params;
    let mds = verify_mds(&code);
    ensure!(
        mds.pass && mds.detail == "6 subsets of size 2",
        "mds: {mds:?}"
    );
    let rep = verify_exact_repair(&code);
    ensure!(rep.pass && rep.detail == "4 nodes", "exact repair: {rep:?}");
    let t1 = verify_type1(&code, 1);
    ensure!(
        all_zero(&t1) && t1.table.len() == 4,
        "type1: {:?}",
        t1.worst
    );
    ensure!(
        (p.alpha, p.beta, p.file_symbols) == (2, 1, 2),
        "params {p:?}"
    );
    let bound = theorem_bound(&query(&code, Attack::Type1)).map_err(|e| e.to_string())?;
    let min = int(p.alpha).min(int(2 * p.beta));
    ensure!(
        bound.capacity == min && min == int(p.file_symbols),
        "bound {} vs B {}",
        bound.capacity,
        p.file_symbols
    );
    Ok(format!(
        "table1-423 over {}: B = 2 = min(alpha, 2 beta), leakage 0 at all 4 nodes",
        code.field
    ))
}

fn ac2() -> Outcome {
    let code = table2();
    let p = code.params;
    ensure!(code.field.order() == 2, "field {}", code.field);
    ensure!(
        (p.file_symbols, p.alpha, p.beta) == (2, 1, 1),
        "params {p:?}"
    );
    ensure!(
        state_count(&code) == 8,
        "state count {}",
        state_count(&code)
    );
    let t1 = verify_type1(&code, 1);
    ensure!(
        all_zero(&t1) && t1.table.len() == 4,
        "type1: {:?}",
        t1.worst
    );
    for node in 0..4 {
        let view = WiretapView::new(&code, Attack::Type1, &[node]).map_err(|e| e.to_string())?;
        let rank = leakage_rank(&code, &view)
            .map_err(|e| e.to_string())?
            .leakage;
        let ex = leakage_exhaustive(&code, &view, 8).map_err(|e| e.to_string())?;
        ensure!(
            ex == int(rank),
            "node {}: rank {rank}, exhaustive {ex}",
            node + 1
        );
    }
    Ok(
        "table2-433 over F_2: B = 2 at (1,1), rank = exhaustive = 0 on all 4 nodes over 8 states"
            .into(),
    )
}

fn ac3() -> Outcome {
    let code = table3();
    let p = code.params;
    ensure!(
        (p.file_symbols, p.alpha, p.beta) == (5, 3, 2),
        "params {p:?}"
    );
    for j in 1..=4 {
        let nr = &code.repair.nodes[j - 1];
        for (pos, (helper, syms)) in cyclic433::repair(j).into_iter().enumerate() {
            let held = cyclic433::stored(helper);
            let slots: Vec<usize> = syms
                .iter()
                .map(|s| held.iter().position(|x| x == s).unwrap())
                .collect();
            ensure!(
                nr.helpers[pos] == helper - 1
                    && nr.transfers[pos] == FieldMatrix::unit_rows(&code.field, 3, &slots),
                "node {j}: transfer from node {helper} is not the cyclic plan"
            );
        }
    }
    let rep = verify_exact_repair(&code);
    ensure!(rep.pass, "exact repair: {rep:?}");
    let t1 = verify_type1(&code, 1);
    ensure!(all_zero(&t1), "type1: {:?}", t1.worst);
    let bound = theorem_bound(&query(&code, Attack::Type1))
        .map_err(|e| e.to_string())?
        .capacity;
    let formula = (int(p.alpha) + int(6 * p.beta)) / int(3);
    ensure!(
        bound == formula && formula == int(5),
        "bound {bound}, (alpha+6beta)/3 = {formula}"
    );
    Ok(format!(
        "table3-433 over {}: B = 5 = (alpha+6beta)/3, cyclic repair exact at 4 nodes, leakage 0",
        code.field
    ))
}

fn ac4() -> Outcome {
    let code = keyless();
    let p = code.params;
    ensure!(p.file_symbols == 8, "B = {}", p.file_symbols);
    let point = (rat(p.alpha as i64, 8), rat(p.beta as i64, 8));
    ensure!(
        point == (rat(3, 8), rat(1, 4)),
        "normalized point {point:?}"
    );
    let mut s = SimState::init(&code, 0);
    for j in 0..4 {
        let t = s.fail_and_repair(j).map_err(|e| e.to_string())?;
        ensure!(
            t.exact && t.disk_reads() == 6,
            "node {}: {} reads",
            j + 1,
            t.disk_reads()
        );
    }
    ensure!(s.disk_reads().total == 24, "total {}", s.disk_reads().total);
    Ok("keyless-433: B = 8, point (3/8, 1/4), 6 disk reads per repair at every node".into())
}

fn ac5() -> Outcome {
    let want = [
        (2, 1, 1),
        (3, 1, 2),
        (3, 1, 3),
        (3, 1, 1),
        (4, 1, 1),
        (5, 1, 1),
    ];
    let mut seen = Vec::new();
    for (&(n, k, l), &(alpha, beta, b)) in MBR_POINTS.iter().zip(&want) {
        let code = mbr(n, k, l);
        let p = code.params;
        ensure!(
            (p.d, p.alpha, p.beta, p.file_symbols) == (n - 1, alpha, beta, b),
            "({n},{k},{},{l}): got {p:?}",
            n - 1
        );
        let t2 = verify_type2(&code, l);
        ensure!(
            all_zero(&t2),
            "({n},{k},{},{l}) type2: {:?}",
            n - 1,
            t2.worst
        );
        let cap = mbr_secure_capacity(k, n - 1, l, int(beta));
        ensure!(
            cap == int(b),
            "({n},{k},{},{l}): capacity {cap} vs B {b}",
            n - 1
        );
        seen.push(format!("({n},{k},{},{l})->({alpha},{beta},{b})", n - 1));
    }
    Ok(seen.join(" "))
}

fn ac6() -> Outcome {
    let code = fig1();
    ensure!(all_zero(&verify_type1(&code, 1)), "type1 fails");
    let t2 = verify_type2(&code, 1);
    ensure!(!t2.pass, "type2 passes");
    ensure!(
        t2.table.len() == 3 && t2.table.iter().all(|r| r.report.leakage == 1),
        "type2 table {:?}",
        t2.table
    );
    Ok("fig1-322: type1(1) leakage 0, type2(1) leakage exactly 1 at nodes 1, 2, 3".into())
}

fn ac7() -> Outcome {
    let tuples = covered_tuples(8);
    let step = rat(4, 64);
    let mut checked = 0usize;
    for &(n, k, d, l) in &tuples {
        for i in 1..=64 {
            for j in 1..=64 {
                let (alpha, beta) = (step * int(i), step * int(j));
                let cut = secure_capacity_bound(n, k, d, l, alpha, beta);
                let functional = functional_capacity(n, k, d, alpha, beta);
                ensure!(
                    cut <= functional,
                    "({n},{k},{d},{l}) at ({alpha},{beta}): secure cut > functional cut"
                );
                let mut caps = Vec::new();
                for attack in [Attack::Type1, Attack::Type2] {
                    let q = TradeoffQuery {
                        n,
                        k,
                        d,
                        l,
                        alpha,
                        beta,
                        attack,
                    };
                    let cap = theorem_bound(&q).map_err(|e| e.to_string())?.capacity;
                    ensure!(
                        cap <= cut,
                        "({n},{k},{d},{l}) {attack} at ({alpha},{beta}): {cap} > {cut}"
                    );
                    caps.push(cap);
                }
                ensure!(
                    caps[1] <= caps[0],
                    "({n},{k},{d},{l}) at ({alpha},{beta}): type2 > type1"
                );
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{} tuples x 64x64 grid, {checked} points, 0 violations",
        tuples.len()
    ))
}

fn ac8() -> Outcome {
    let tuples = covered_tuples(8);
    for &(n, k, d, l) in &tuples {
        let family = RegionFamily {
            n,
            k,
            d,
            l,
            attack: Attack::Type2,
            upper_bound_only: false,
        };
        let region = region_sweep(&family, &GridSpec::default()).map_err(|e| e.to_string())?;
        ensure!(
            region.corners.len() == 1,
            "({n},{k},{d},{l}): {} corners",
            region.corners.len()
        );
        let c = &region.corners[0];
        ensure!(
            c.alpha_bar == int(d) * c.beta_bar && c.label == "MBR",
            "({n},{k},{d},{l}): corner ({}, {}) off the MBR line",
            c.alpha_bar,
            c.beta_bar
        );
    }
    Ok(format!(
        "{} type2 tuples, one corner each on alpha_bar = d beta_bar",
        tuples.len()
    ))
}

fn random_candidate(rng: &mut ChaCha8Rng) -> LinearDssCode {
    let f = field(5);
    let b = rng.gen_range(1..=2);
    let r = rng.gen_range(0..=2);
    let params = DssParams {
        n: 3,
        k: 2,
        d: 2,
        alpha: 1,
        beta: 1,
        file_symbols: b,
        key_symbols: r,
        l: 1,
        attack: Attack::Type2,
    };
    let data = (0..(b + r) * 3).map(|_| rng.gen_range(0..5)).collect();
    let mut code = LinearDssCode {
        params,
        field: f.clone(),
        generator: FieldMatrix::new(&f, b + r, 3, data).unwrap(),
        layout: contiguous_layout(3, 1),
        repair: RepairPlan { nodes: Vec::new() },
        builder: "random".into(),
    };
    if let Ok(plan) = synthesize_repair(&code) {
        code.repair = plan;
    }
    code
}

fn ac9() -> Outcome {
    let mut emitted = 0;
    for code in all_codes() {
        if !gate(&code).iter().all(|c| c.pass) {
            continue;
        }
        emitted += 1;
        let q = query(&code, code.params.attack);
        let cap = match theorem_bound(&q) {
            Ok(b) => b.capacity,
            Err(_) => upper_bound(&q).map_err(|e| e.to_string())?.capacity,
        };
        ensure!(
            int(code.params.file_symbols) <= cap,
            "{}: B = {} > {cap}",
            code.builder,
            code.params.file_symbols
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut repairable = 0;
    for i in 0..1000 {
        let code = random_candidate(&mut rng);
        let ok = code.repair.nodes.len() == 3
            && verify_mds(&code).pass
            && verify_exact_repair(&code).pass;
        if !ok {
            continue;
        }
        repairable += 1;
        ensure!(
            !verify_type2(&code, 1).pass,
            "candidate {i} passes type2(1): {:?}",
            code.generator
        );
    }
    Ok(format!(
        "{emitted} built codes within their bound; 1000 random (3,2,2) candidates, {repairable} pass MDS and repair, 0 pass type2(1)"
    ))
}

fn ac10() -> Outcome {
    const BUDGET: u128 = 1 << 20;
    let (mut codes, mut views) = (Vec::new(), 0usize);
    for code in all_codes() {
        if state_count(&code) > BUDGET {
            continue;
        }
        for attack in [Attack::Type1, Attack::Type2] {
            for size in 0..=code.n() {
                for set in subsets(code.n(), size) {
                    let view = WiretapView::new(&code, attack, &set).map_err(|e| e.to_string())?;
                    let rank = leakage_rank(&code, &view)
                        .map_err(|e| e.to_string())?
                        .leakage;
                    let ex = leakage_exhaustive(&code, &view, BUDGET).map_err(|e| e.to_string())?;
                    ensure!(
                        ex == int(rank),
                        "{} {attack} {set:?}: rank {rank}, exhaustive {ex}",
                        code.builder
                    );
                    views += 1;
                }
            }
        }
        codes.push(format!("{}/{}", code.builder, code.field));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let violations = shannon_sanity(&mut rng, 10_000);
    ensure!(violations == 0, "{violations} entropy violations");
    Ok(format!(
        "{} codes, {views} views exact; 10000 random laws, 0 violations (tol {ENTROPY_TOLERANCE:e})",
        codes.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("{id:<5} PASS  {detail} [{ms} ms]"),
            Err(why) => {
                failed += 1;
                println!("{id:<5} FAIL  {why} [{ms} ms]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
