// SPDX-License-Identifier: Apache-2.0

//! Secure file-size bounds over the storage/repair-bandwidth plane.
//!
//! Every bound used here is positively homogeneous and concave in
//! `(α, β)`, and is kept as a minimum of linear forms
//! `min_i (a_i α + b_i β)` with exact rational coefficients. The
//! normalized region `{(ᾱ, β̄) : bound(ᾱ, β̄) >= 1}` then has a polyline
//! boundary whose corners can be found exactly.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::code::{binomial, Attack};

pub type Rational = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

fn int(n: usize) -> Rational {
    Ratio::from_integer(n as i64)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TradeoffError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("no optimal tradeoff is known for (n,k,d)=({n},{k},{d}), l={l}, attack {attack}")]
    NoTheorem {
        n: usize,
        k: usize,
        d: usize,
        l: usize,
        attack: Attack,
    },
}

/// Where a capacity value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// `Σ_{i<k} min(α, (d-i)β)`, no secrecy.
    FunctionalCut,
    /// `Σ_{l<=i<k} min(α, (d-i)β)`, secure cut-set bound.
    SecureCut,
    /// Secure file size at `α = dβ`.
    MbrPoint,
    /// Optimal exact-repair tradeoff of the `(3,2,2)` system, `l = 1`.
    #[serde(rename = "optimal-322-l1")]
    Optimal322L1,
    /// Optimal exact-repair tradeoff of the `(4,2,3)` system, `l = 1`.
    #[serde(rename = "optimal-423-l1")]
    Optimal423L1,
    /// Optimal exact-repair tradeoff of the `(4,3,3)` system, `l = 1`.
    #[serde(rename = "optimal-433-l1")]
    Optimal433L1,
    /// Optimal exact-repair tradeoff of the `(4,3,3)` system, `l = 2`.
    #[serde(rename = "optimal-433-l2")]
    Optimal433L2,
    /// Optimal exact-repair tradeoff of `(n, n-1, n-1)` systems, `l = n-2`.
    #[serde(rename = "optimal-nn1-l2")]
    OptimalNn1L2,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeoffQuery {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub l: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub attack: Attack,
}

impl TradeoffQuery {
    pub fn validate(&self) -> Result<(), TradeoffError> {
        validate_tuple(self.n, self.k, self.d, self.l)?;
        if self.alpha.is_negative() || self.beta.is_negative() {
            return Err(TradeoffError::InvalidQuery(
                "alpha and beta must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

fn validate_tuple(n: usize, k: usize, d: usize, l: usize) -> Result<(), TradeoffError> {
    if !(l < k && k <= d && d < n) {
        return Err(TradeoffError::InvalidQuery(format!(
            "need l < k <= d <= n-1, got (n,k,d,l)=({n},{k},{d},{l})"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    #[serde(serialize_with = "ser_rational")]
    pub capacity: Rational,
    pub capacity_f64: f64,
    pub source: BoundSource,
    /// Known to be optimal, not just an upper bound.
    pub tight: bool,
}

/// `min_i (a_i α + b_i β)` with nonnegative rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMin {
    terms: Vec<(Rational, Rational)>,
}

impl LinearMin {
    pub fn from_terms(terms: Vec<(Rational, Rational)>) -> Self {
        let mut m = Self { terms };
        m.prune();
        m
    }

    /// `min(c·α, e·β)`.
    fn min2(c: Rational, e: Rational) -> Self {
        Self::from_terms(vec![(c, Rational::zero()), (Rational::zero(), e)])
    }

    fn zero() -> Self {
        Self::from_terms(vec![(Rational::zero(), Rational::zero())])
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    /// Pointwise sum; `min` distributes over `+`.
    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(a, b) in &self.terms {
            for &(c, d) in &other.terms {
                terms.push((a + c, b + d));
            }
        }
        Self::from_terms(terms)
    }

    /// Pointwise minimum.
    pub fn min(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied().collect())
    }

    pub fn eval(&self, alpha: Rational, beta: Rational) -> Rational {
        self.terms
            .iter()
            .map(|&(a, b)| a * alpha + b * beta)
            .min()
            .expect("nonempty")
    }

    /// Drops duplicate terms and terms dominated coefficient-wise.
    fn prune(&mut self) {
        let mut kept: Vec<(Rational, Rational)> = Vec::new();
        let mut sorted = self.terms.clone();
        sorted.sort();
        sorted.dedup();
        for &t in &sorted {
            let dominated = sorted.iter().any(|&o| o != t && o.0 <= t.0 && o.1 <= t.1);
            if !dominated {
                kept.push(t);
            }
        }
        self.terms = kept;
    }

    /// Smallest `β̄ >= 0` with `self(ᾱ, β̄) >= 1`, if any.
    pub fn min_beta(&self, alpha: Rational) -> Option<Rational> {
        let mut need = Rational::zero();
        for &(a, b) in &self.terms {
            let rest = Rational::from_integer(1) - a * alpha;
            if b.is_zero() {
                if rest.is_positive() {
                    return None;
                }
            } else {
                need = need.max(rest / b);
            }
        }
        Some(need)
    }

    /// Smallest `ᾱ >= 0` with `self(ᾱ, β̄) >= 1`, if any.
    pub fn min_alpha(&self, beta: Rational) -> Option<Rational> {
        let swapped = Self {
            terms: self.terms.iter().map(|&(a, b)| (b, a)).collect(),
        };
        swapped.min_beta(beta)
    }
}

/// `Σ_{i=from}^{k-1} min(α, (d-i)β)` as a [`LinearMin`].
fn cut_sum(k: usize, d: usize, from: usize) -> LinearMin {
    (from..k).fold(LinearMin::zero(), |acc, i| {
        acc.plus(&LinearMin::min2(int(1), int(d - i)))
    })
}

/// `Σ_{i=0}^{k-1} min(α, (d-i)β)`.
pub fn functional_capacity(
    n: usize,
    k: usize,
    d: usize,
    alpha: Rational,
    beta: Rational,
) -> Rational {
    secure_capacity_bound(n, k, d, 0, alpha, beta)
}

/// `Σ_{i=l}^{k-1} min(α, (d-i)β)`.
pub fn secure_capacity_bound(
    _n: usize,
    k: usize,
    d: usize,
    l: usize,
    alpha: Rational,
    beta: Rational,
) -> Rational {
    (l..k).map(|i| alpha.min(int(d - i) * beta)).sum()
}

/// Secure file size at the MBR point `α = dβ`.
pub fn mbr_secure_capacity(k: usize, d: usize, l: usize, beta: Rational) -> Rational {
    let total = (k * d - binomial(k, 2)) as i64;
    let leaked = (l * d - binomial(l, 2)) as i64;
    Ratio::from_integer(total - leaked) * beta
}

/// The optimal-tradeoff expression for a covered tuple.
pub fn theorem_expr(
    n: usize,
    k: usize,
    d: usize,
    l: usize,
    attack: Attack,
) -> Result<(LinearMin, BoundSource), TradeoffError> {
    let none = || TradeoffError::NoTheorem { n, k, d, l, attack };
    if attack == Attack::None {
        return Err(none());
    }
    let type2 = attack == Attack::Type2;
    let m = LinearMin::min2;
    let one = int(1);
    let out = match (n, k, d, l) {
        (3, 2, 2, 1) => (
            if type2 {
                m(rat(1, 2), one)
            } else {
                m(one, one)
            },
            BoundSource::Optimal322L1,
        ),
        (4, 2, 3, 1) => (
            if type2 {
                m(rat(2, 3), int(2))
            } else {
                m(one, int(2))
            },
            BoundSource::Optimal423L1,
        ),
        (4, 3, 3, 1) => (
            if type2 {
                m(one, int(3))
            } else {
                m(one, int(2))
                    .plus(&m(one, one))
                    .min(&LinearMin::from_terms(vec![(rat(1, 3), int(2))]))
            },
            BoundSource::Optimal433L1,
        ),
        (4, 3, 3, 2) => (
            if type2 {
                m(rat(1, 3), one)
            } else {
                m(one, one)
            },
            BoundSource::Optimal433L2,
        ),
        (n, k, d, l) if n >= 3 && k == n - 1 && d == n - 1 && l == n - 2 => (
            if type2 {
                m(rat(1, (n - 1) as i64), one)
            } else {
                m(one, one)
            },
            BoundSource::OptimalNn1L2,
        ),
        _ => return Err(none()),
    };
    Ok(out)
}

/// Optimal secure capacity for a covered `(n, k, d, l)` tuple. Refuses
/// uncovered tuples rather than falling back to an upper bound.
pub fn theorem_bound(query: &TradeoffQuery) -> Result<BoundResult, TradeoffError> {
    query.validate()?;
    let (expr, source) = theorem_expr(query.n, query.k, query.d, query.l, query.attack)?;
    let capacity = expr.eval(query.alpha, query.beta);
    Ok(BoundResult {
        capacity,
        capacity_f64: to_f64(&capacity),
        source,
        tight: true,
    })
}

/// The secure cut-set bound, reported as an upper bound only.
pub fn upper_bound(query: &TradeoffQuery) -> Result<BoundResult, TradeoffError> {
    query.validate()?;
    let capacity =
        secure_capacity_bound(query.n, query.k, query.d, query.l, query.alpha, query.beta);
    Ok(BoundResult {
        capacity,
        capacity_f64: to_f64(&capacity),
        source: if query.l == 0 {
            BoundSource::FunctionalCut
        } else {
            BoundSource::SecureCut
        },
        tight: false,
    })
}

/// Which bound a region is drawn for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionFamily {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub l: usize,
    pub attack: Attack,
    /// Use the cut-set upper bound when no optimal tradeoff is known.
    pub upper_bound_only: bool,
}

impl RegionFamily {
    pub fn expr(&self) -> Result<(LinearMin, BoundSource), TradeoffError> {
        validate_tuple(self.n, self.k, self.d, self.l)?;
        match theorem_expr(self.n, self.k, self.d, self.l, self.attack) {
            Ok(found) => Ok(found),
            Err(e) if !self.upper_bound_only => Err(e),
            Err(_) => Ok((
                cut_sum(self.k, self.d, self.l),
                if self.l == 0 {
                    BoundSource::FunctionalCut
                } else {
                    BoundSource::SecureCut
                },
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub points: usize,
    pub max: Rational,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 512,
            max: int(3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryPoint {
    #[serde(serialize_with = "ser_rational")]
    pub alpha_bar: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta_bar: Rational,
    /// `MBR` or `corner` for corner points, empty otherwise.
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub source: BoundSource,
    pub corners: Vec<BoundaryPoint>,
    pub boundary: Vec<BoundaryPoint>,
}

/// Corners of `{(ᾱ, β̄) : f(ᾱ, β̄) >= 1}`, ordered by increasing `ᾱ`.
///
/// With `r = α/β` and `g(r) = f(r, 1)`, each slope change of the concave
/// polyline `g` at `r > 0` gives the corner `(r/g(r), 1/g(r))`.
pub fn corners(expr: &LinearMin, d: usize) -> Vec<BoundaryPoint> {
    let terms = expr.terms();
    let mut cands: Vec<Rational> = Vec::new();
    for (i, &(a1, b1)) in terms.iter().enumerate() {
        for &(a2, b2) in &terms[i + 1..] {
            if a1 != a2 {
                let r = (b2 - b1) / (a1 - a2);
                if r.is_positive() {
                    cands.push(r);
                }
            }
        }
    }
    cands.sort();
    cands.dedup();
    let mut out = Vec::new();
    for r in cands {
        let g = expr.eval(r, int(1));
        if !g.is_positive() {
            continue;
        }
        let active: Vec<Rational> = terms
            .iter()
            .filter(|&&(a, b)| a * r + b == g)
            .map(|&(a, _)| a)
            .collect();
        let (lo, hi) = (active.iter().min().unwrap(), active.iter().max().unwrap());
        if lo == hi {
            continue;
        }
        let label = if r == int(d) { "MBR" } else { "corner" };
        out.push(BoundaryPoint {
            alpha_bar: r / g,
            beta_bar: int(1) / g,
            label: label.into(),
        });
    }
    out.sort_by_key(|x| x.alpha_bar);
    out
}

/// Boundary of the normalized region inside `(0, max]^2`: the minimal `β̄`
/// on each `ᾱ` grid line and the minimal `ᾱ` on each `β̄` grid line, plus
/// the exact corners, sorted by `ᾱ` (so `β̄` is non-increasing).
pub fn region_sweep(family: &RegionFamily, grid: &GridSpec) -> Result<Region, TradeoffError> {
    if grid.points == 0 || !grid.max.is_positive() {
        return Err(TradeoffError::InvalidQuery("grid must be nonempty".into()));
    }
    let (expr, source) = family.expr()?;
    let corner_pts = corners(&expr, family.d);
    let mut pts: Vec<BoundaryPoint> = corner_pts.clone();
    let plain = |a: Rational, b: Rational| BoundaryPoint {
        alpha_bar: a,
        beta_bar: b,
        label: String::new(),
    };
    for i in 1..=grid.points {
        let t = grid.max * int(i) / int(grid.points);
        if let Some(b) = expr.min_beta(t) {
            if b.is_positive() && b <= grid.max {
                pts.push(plain(t, b));
            }
        }
        if let Some(a) = expr.min_alpha(t) {
            if a.is_positive() && a <= grid.max {
                pts.push(plain(a, t));
            }
        }
    }
    // corners first so they survive deduplication
    pts.sort_by(|x, y| {
        x.alpha_bar
            .cmp(&y.alpha_bar)
            .then(y.beta_bar.cmp(&x.beta_bar))
            .then(y.label.cmp(&x.label))
    });
    pts.dedup_by(|later, earlier| {
        later.alpha_bar == earlier.alpha_bar && later.beta_bar == earlier.beta_bar
    });
    Ok(Region {
        source,
        corners: corner_pts,
        boundary: pts,
    })
}

/// Every `(n, k, d, l)` tuple with a known optimal tradeoff, with the
/// `(n, n-1, n-1, n-2)` family listed up to `max_n`.
pub fn covered_tuples(max_n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = vec![(3, 2, 2, 1), (4, 2, 3, 1), (4, 3, 3, 1), (4, 3, 3, 2)];
    out.extend((5..=max_n).map(|n| (n, n - 1, n - 1, n - 2)));
    out
}
