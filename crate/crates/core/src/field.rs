// SPDX-License-Identifier: Apache-2.0

//! Finite fields `F_p` and `F_{p^m}` over integer element labels.
//!
//! An element is identified by its label in `0..q`. For a prime field the
//! label is the residue itself. For an extension field the label is the
//! base-`p` evaluation of the coefficient vector, lowest degree first, so
//! in `F_9 = F_3[x]/(x^2+1)` the label `3` is the element `x` and `5` is
//! `x + 2`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order for which extension-field tables are built.
pub const MAX_EXTENSION_ORDER: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("modulus polynomial {0:?} is not monic of the right degree")]
    BadModulus(Vec<u32>),
    #[error("modulus polynomial {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("no irreducible polynomial of degree {m} over F_{p}")]
    NoIrreducible { p: u32, m: u32 },
    #[error("label {label} is out of range for a field of order {order}")]
    LabelOutOfRange { label: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Binary operations exposed through [`FiniteField::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    m: u32,
    order: u32,
    /// Monic modulus, lowest degree first. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a primitive element `g`; empty for prime fields.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field handle. Cloning is cheap and all clones compare equal.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(
                f,
                "F_{}^{}{:?}",
                self.inner.p, self.inner.m, self.inner.modulus
            )
        }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.order)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Splits `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if p > (1 << 31) {
            return Err(FieldError::TooLarge(p as u64));
        }
        Ok(Self {
            inner: Arc::new(Inner {
                p,
                m: 1,
                order: p,
                modulus: vec![0, 1],
                exp: Vec::new(),
                log: Vec::new(),
            }),
        })
    }

    /// `F_{p^m}` with the default modulus: `x^2 + 1` for `F_9`, otherwise
    /// the lexicographically smallest monic irreducible polynomial.
    pub fn extension(p: u32, m: u32) -> Result<Self, FieldError> {
        match m {
            0 => Err(FieldError::ZeroDegree),
            1 => Self::prime(p),
            _ if p == 3 && m == 2 => Self::with_modulus(3, vec![1, 0, 1]),
            _ => {
                let modulus = smallest_irreducible(p, m)?;
                Self::with_modulus(p, modulus)
            }
        }
    }

    /// `F_{p^m}` reduced modulo `modulus` (monic, lowest degree first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(modulus));
        }
        let m = (modulus.len() - 1) as u32;
        if m == 1 {
            return Self::prime(p);
        }
        let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > MAX_EXTENSION_ORDER as u64 {
            return Err(FieldError::TooLarge(order));
        }
        if !is_irreducible(p, &modulus) {
            return Err(FieldError::Reducible(modulus));
        }
        let order = order as u32;
        let (exp, log) = build_log_tables(p, &modulus, order);
        Ok(Self {
            inner: Arc::new(Inner {
                p,
                m,
                order,
                modulus,
                exp,
                log,
            }),
        })
    }

    /// Field of order `q`, for any prime power `q`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if p > u32::MAX as u64 {
            return Err(FieldError::TooLarge(q));
        }
        Self::extension(p as u32, m)
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.m == 1
    }

    /// Validates a label.
    pub fn element(&self, label: u32) -> Result<u32, FieldError> {
        if label < self.inner.order {
            Ok(label)
        } else {
            Err(FieldError::LabelOutOfRange {
                label,
                order: self.inner.order,
            })
        }
    }

    /// Maps an integer into the field: reduction mod `p` for prime fields,
    /// the label itself for extension fields.
    pub fn from_integer(&self, value: u64) -> Result<u32, FieldError> {
        if self.is_prime_field() {
            Ok((value % self.inner.p as u64) as u32)
        } else {
            let label = u32::try_from(value).unwrap_or(u32::MAX);
            self.element(label)
        }
    }

    /// Checked binary operation on labels.
    pub fn apply(&self, op: FieldOp, a: u32, b: u32) -> Result<u32, FieldError> {
        let a = self.element(a)?;
        let b = self.element(b)?;
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
        })
    }

    // The arithmetic below assumes valid labels.

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.inner.order && b < self.inner.order);
        let p = self.inner.p;
        if self.inner.m == 1 {
            return ((a as u64 + b as u64) % p as u64) as u32;
        }
        self.digitwise(a, b, |x, y| (x + y) % p)
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.inner.order && b < self.inner.order);
        let p = self.inner.p;
        if self.inner.m == 1 {
            return ((a as u64 + p as u64 - b as u64) % p as u64) as u32;
        }
        self.digitwise(a, b, |x, y| (x + p - y) % p)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.inner.order && b < self.inner.order);
        if self.inner.m == 1 {
            return ((a as u64 * b as u64) % self.inner.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.inner.order - 1;
        let e = (self.inner.log[a as usize] + self.inner.log[b as usize]) % n;
        self.inner.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if self.inner.m == 1 {
            return Ok(self.pow(a, self.inner.p as u64 - 2));
        }
        let n = self.inner.order - 1;
        let e = (n - self.inner.log[a as usize]) % n;
        Ok(self.inner.exp[e as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Iterator over all labels.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.order
    }

    fn digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let p = self.inner.p;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.inner.m {
            out += f(a % p, b % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }
}

fn label_to_poly(p: u32, m: u32, mut label: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = label % p;
            label /= p;
            d
        })
        .collect()
}

fn poly_to_label(p: u32, coeffs: &[u32]) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo a monic `b` over `F_p`.
fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead as u64 * c as u64 % p as u64) as u32) % p;
        }
        r = trim(r);
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=m/2`.
fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let m = modulus.len() - 1;
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut divisor = label_to_poly(p, deg as u32, low as u32);
            divisor.push(1);
            if poly_rem(p, modulus, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Result<Vec<u32>, FieldError> {
    let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if order > MAX_EXTENSION_ORDER as u64 {
        return Err(FieldError::TooLarge(order));
    }
    (0..order as u32)
        .map(|low| {
            let mut poly = label_to_poly(p, m, low);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(p, poly))
        .ok_or(FieldError::NoIrreducible { p, m })
}

fn poly_mul_mod(p: u32, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(p, &prod, modulus)
}

fn build_log_tables(p: u32, modulus: &[u32], order: u32) -> (Vec<u32>, Vec<u32>) {
    let m = (modulus.len() - 1) as u32;
    let n = order - 1;
    for g in 2..order {
        let gp = label_to_poly(p, m, g);
        let mut exp = Vec::with_capacity(n as usize);
        let mut cur = vec![1u32];
        let mut log = vec![u32::MAX; order as usize];
        let mut primitive = true;
        for i in 0..n {
            let label = poly_to_label(p, &cur);
            if log[label as usize] != u32::MAX {
                primitive = false;
                break;
            }
            log[label as usize] = i;
            exp.push(label);
            cur = poly_mul_mod(p, &cur, &gp, modulus);
        }
        if primitive {
            log[0] = 0;
            return (exp, log);
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}
