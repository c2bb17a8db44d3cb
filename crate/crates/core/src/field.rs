//! Arithmetic in small finite fields GF(p^l).
//!
//! Elements are stored by their discrete-log index: `0` is the zero element
//! and `k + 1` denotes `α^k` for the fixed primitive element `α`. Under this
//! naming, multiplication and inversion are plain index arithmetic modulo
//! `q - 1`, and addition goes through the polynomial (base-`p` digit)
//! representation.
//!
//! The ordering `0 < 1 = α^0 < α^1 < ... < α^(q-2)` is the element order
//! used for every canonical form in this crate.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

/// An element of a [`FieldCtx`], named by its log index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Primitive polynomials, lowest coefficient first, for the fields the
/// datasets use. Anything else is found by a deterministic search.
const KNOWN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),          // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),       // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]),    // x^4 + x + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]), // x^5 + x^2 + 1
    (3, 2, &[2, 2, 1]),          // x^2 + 2x + 2
    (3, 3, &[1, 2, 0, 1]),       // x^3 + 2x + 1
    (5, 2, &[2, 4, 1]),          // x^2 + 4x + 2
    (7, 2, &[3, 6, 1]),          // x^2 + 6x + 3
];

/// A concrete finite field with exhaustive lookup tables.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    l: u32,
    q: u32,
    modulus: Vec<u32>,
    /// log index -> polynomial encoding (base-p digits, lowest degree first).
    poly_of: Vec<u32>,
    /// polynomial encoding -> log index.
    index_of: Vec<u16>,
    neg: Vec<u16>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.l == other.l && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, l)` with `q = p^l`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut rest, mut l) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        l += 1;
    }
    (rest == 1).then_some((p, l))
}

/// Walks the powers of `x` modulo `modulus`. Returns the exp table when `x`
/// has multiplicative order exactly `p^l - 1`.
fn power_table(p: u32, l: u32, modulus: &[u32]) -> Option<Vec<u32>> {
    let q = p.pow(l);
    let l = l as usize;
    let mut coeffs = vec![0u32; l];
    coeffs[0] = 1;
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    let mut exp = Vec::with_capacity(q as usize - 1);
    for k in 0..q - 1 {
        let code = encode(&coeffs);
        if k > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        // multiply by x, then reduce by the monic modulus
        let top = coeffs[l - 1];
        for i in (1..l).rev() {
            coeffs[i] = coeffs[i - 1];
        }
        coeffs[0] = 0;
        if top != 0 {
            for i in 0..l {
                coeffs[i] = (coeffs[i] + p - (top * modulus[i]) % p) % p;
            }
        }
    }
    (encode(&coeffs) == 1).then_some(exp)
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    (1..p)
        .find(|&g| {
            let mut x = 1u64;
            for k in 1..p {
                x = x * g as u64 % p as u64;
                if x == 1 {
                    return k == p - 1;
                }
            }
            false
        })
        .expect("every prime field has a primitive root")
}

fn search_modulus(p: u32, l: u32) -> Option<Vec<u32>> {
    let count = p.pow(l);
    (0..count).find_map(|code| {
        let mut m = Vec::with_capacity(l as usize + 1);
        let mut c = code;
        for _ in 0..l {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if m[0] == 0 {
            return None;
        }
        power_table(p, l, &m).map(|_| m)
    })
}

impl FieldCtx {
    /// Builds GF(p^l) from its fixed primitive polynomial.
    pub fn new(p: u32, l: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if l == 0 {
            return Err(Error::Field("extension degree must be positive".into()));
        }
        let q = p
            .checked_pow(l)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::Field(format!("GF({p}^{l}) exceeds the supported size")))?;
        let modulus = if l == 1 {
            // x - g for the smallest primitive root g
            vec![(p - smallest_primitive_root(p)) % p, 1]
        } else if let Some(&(_, _, m)) = KNOWN_MODULI.iter().find(|(pp, ll, _)| *pp == p && *ll == l) {
            m.to_vec()
        } else {
            search_modulus(p, l).ok_or_else(|| Error::Field(format!("no primitive polynomial for GF({q})")))?
        };
        let exp = power_table(p, l, &modulus)
            .ok_or_else(|| Error::Field(format!("modulus {modulus:?} is not primitive over GF({p})")))?;

        let mut poly_of = Vec::with_capacity(q as usize);
        poly_of.push(0);
        poly_of.extend_from_slice(&exp);
        let mut index_of = vec![0u16; q as usize];
        for (idx, &code) in poly_of.iter().enumerate() {
            index_of[code as usize] = idx as u16;
        }

        let mut ctx = FieldCtx { p, l, q, modulus, poly_of, index_of, neg: Vec::new(), add_table: None };
        ctx.neg = (0..q)
            .map(|i| {
                let code = ctx.poly_of[i as usize];
                ctx.index_of[ctx.poly_digitwise(code, 0, |a, _| (p - a) % p) as usize]
            })
            .collect();
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = ctx.add_slow(Elem(a as u16), Elem(b as u16)).0;
                }
            }
            ctx.add_table = Some(table);
        }
        Ok(ctx)
    }

    /// Builds the field of order `q`.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, l) = prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        Self::new(p, l)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn l(&self) -> u32 {
        self.l
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the primitive polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.l == 1
    }

    fn poly_digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.l {
            out += f(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let (pa, pb) = (self.poly_of[a.index()], self.poly_of[b.index()]);
        let code = if self.p == 2 { pa ^ pb } else { self.poly_digitwise(pa, pb, |x, y| (x + y) % self.p) };
        Elem(self.index_of[code as usize])
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|i| Elem(i as u16))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => Elem(t[a.index() * self.q as usize + b.index()]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let order = self.q - 1;
        Elem((1 + (a.0 as u32 - 1 + b.0 as u32 - 1) % order) as u16)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(Elem((1 + (order - (a.0 as u32 - 1)) % order) as u16))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `α^k` for any integer exponent.
    pub fn alpha_pow(&self, k: i64) -> Elem {
        let order = (self.q - 1) as i64;
        Elem((1 + k.rem_euclid(order)) as u16)
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| a.0 as u32 - 1)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        Elem((1 + (a.0 as u64 - 1) * (e % order) % order) as u16)
    }

    /// The field automorphism `x -> x^(p^e)`.
    pub fn frobenius(&self, a: Elem, e: u32) -> Elem {
        if a.is_zero() || self.l == 1 {
            return a;
        }
        let e = e % self.l;
        self.pow(a, (self.p as u64).pow(e))
    }

    /// Integer `n` as an element of the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        let v = n.rem_euclid(self.p as i64) as usize;
        Elem(self.index_of[v])
    }

    /// Element from its polynomial encoding (base-`p` digits, low first).
    pub fn from_poly(&self, code: u32) -> Option<Elem> {
        (code < self.q).then(|| Elem(self.index_of[code as usize]))
    }

    /// Polynomial encoding of an element; for prime fields this is its
    /// residue in `0..p`.
    pub fn to_poly(&self, a: Elem) -> u32 {
        self.poly_of[a.index()]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Option<u32> {
        let k = self.log(a)?;
        let n = self.q - 1;
        Some(n / gcd(n, k))
    }

    pub fn is_square(&self, a: Elem) -> bool {
        match self.log(a) {
            None => true,
            Some(k) => self.p == 2 || k % 2 == 0,
        }
    }

    /// Renders an element: digits for prime fields, `0 1 w v` for GF(4),
    /// and `a^k` otherwise.
    pub fn render(&self, a: Elem) -> String {
        if self.l == 1 {
            return self.to_poly(a).to_string();
        }
        match a.0 {
            0 => "0".into(),
            1 => "1".into(),
            k if self.q == 4 => if k == 2 { "w".into() } else { "v".into() },
            k => format!("a^{}", k - 1),
        }
    }

    /// Inverse of [`FieldCtx::render`]; also accepts `a^k` in any field.
    pub fn parse_token(&self, tok: &str) -> Option<Elem> {
        if let Some(exp) = tok.strip_prefix("a^") {
            let k: i64 = exp.parse().ok()?;
            return Some(self.alpha_pow(k));
        }
        if self.l == 1 {
            let v: u32 = tok.parse().ok()?;
            return (v < self.p).then(|| self.from_int(v as i64));
        }
        match tok {
            "0" => Some(Elem::ZERO),
            "1" => Some(Elem::ONE),
            "w" if self.q == 4 => Some(Elem(2)),
            "v" if self.q == 4 => Some(Elem(3)),
            _ => None,
        }
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A pair GF(q) ≤ GF(q^h) with the embedding of the small field and the
/// coordinate expansion over the basis `(1, α, ..., α^(h-1))` of the big
/// field's primitive element.
#[derive(Clone, Debug)]
pub struct Subfield {
    big: FieldCtx,
    small: FieldCtx,
    degree: usize,
    embed: Vec<Elem>,
    coords: Vec<Vec<Elem>>,
}

impl Subfield {
    pub fn new(big: &FieldCtx, small: &FieldCtx) -> Result<Self> {
        let incompatible = || Error::Field(format!("GF({}) is not a subfield of GF({})", small.q, big.q));
        if big.p != small.p || big.l % small.l != 0 {
            return Err(incompatible());
        }
        let degree = (big.l / small.l) as usize;
        let step = (big.q - 1) / (small.q - 1);
        // α_small -> α_big^(j·step) for the smallest admissible j; j = 1
        // whenever the two moduli are compatible.
        let embed = (1..small.q)
            .filter(|&j| gcd(j, small.q - 1) == 1)
            .map(|j| {
                small
                    .elements()
                    .map(|e| match small.log(e) {
                        None => Elem::ZERO,
                        Some(k) => big.alpha_pow(k as i64 * (j * step) as i64),
                    })
                    .collect::<Vec<_>>()
            })
            .find(|map| {
                small.elements().all(|a| {
                    small.elements().all(|b| map[small.add(a, b).index()] == big.add(map[a.index()], map[b.index()]))
                })
            })
            .ok_or_else(incompatible)?;

        let mut coords = vec![Vec::new(); big.q as usize];
        let basis: Vec<Elem> = (0..degree).map(|i| big.alpha_pow(i as i64)).collect();
        let total = (small.q as usize).pow(degree as u32);
        let mut digits = vec![Elem::ZERO; degree];
        for code in 0..total {
            let mut c = code;
            for d in digits.iter_mut() {
                *d = Elem((c % small.q as usize) as u16);
                c /= small.q as usize;
            }
            let value = digits
                .iter()
                .zip(&basis)
                .fold(Elem::ZERO, |acc, (&d, &b)| big.add(acc, big.mul(embed[d.index()], b)));
            coords[value.index()] = digits.clone();
        }
        Ok(Subfield { big: big.clone(), small: small.clone(), degree, embed, coords })
    }

    pub fn big(&self) -> &FieldCtx {
        &self.big
    }

    pub fn small(&self) -> &FieldCtx {
        &self.small
    }

    /// `h` with `|big| = |small|^h`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn embed(&self, e: Elem) -> Elem {
        self.embed[e.index()]
    }

    /// Coordinates of `e` over `(1, α, ..., α^(h-1))`.
    pub fn expand(&self, e: Elem) -> &[Elem] {
        &self.coords[e.index()]
    }

    /// Inverse of [`Subfield::expand`].
    pub fn evaluate(&self, coords: &[Elem]) -> Elem {
        coords.iter().enumerate().fold(Elem::ZERO, |acc, (i, &c)| {
            self.big.add(acc, self.big.mul(self.embed(c), self.big.alpha_pow(i as i64)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_poly_mul(ctx: &FieldCtx, a: u32, b: u32) -> u32 {
        // schoolbook multiplication of base-p digit vectors, then reduction
        let (p, l) = (ctx.p(), ctx.l() as usize);
        let digits = |mut v: u32| {
            let mut d = vec![0u32; l];
            for x in d.iter_mut() {
                *x = v % p;
                v /= p;
            }
            d
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![0u32; 2 * l];
        for i in 0..l {
            for j in 0..l {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let m = ctx.modulus();
        for deg in (l..2 * l).rev() {
            let c = prod[deg];
            if c != 0 {
                for i in 0..=l {
                    let k = deg - l + i;
                    prod[k] = (prod[k] + p * p - c * m[i] % p) % p;
                }
            }
        }
        prod[..l].iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    #[test]
    fn gf4_matches_omega_convention() {
        let f = FieldCtx::new(2, 2).unwrap();
        let w = f.parse_token("w").unwrap();
        let v = f.parse_token("v").unwrap();
        assert_eq!(f.mul(w, w), v);
        assert_eq!(f.add(w, Elem::ONE), v);
        assert_eq!(f.add(f.add(f.mul(w, w), w), Elem::ONE), Elem::ZERO);
    }

    #[test]
    fn prime_field_is_modular_arithmetic() {
        let f = FieldCtx::new(3, 1).unwrap();
        for a in 0..3i64 {
            for b in 0..3i64 {
                assert_eq!(f.to_poly(f.add(f.from_int(a), f.from_int(b))) as i64, (a + b) % 3);
                assert_eq!(f.to_poly(f.mul(f.from_int(a), f.from_int(b))) as i64, (a * b) % 3);
            }
        }
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f2.add(Elem::ONE, Elem::ONE), Elem::ZERO);
    }

    #[test]
    fn gf25_modulus_is_primitive() {
        let f = FieldCtx::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 4, 1]);
        // x as polynomial code 5 (digit 1 at degree 1); multiply until 1
        let x = f.from_poly(5).unwrap();
        let mut acc = x;
        let mut order = 1;
        while acc != Elem::ONE {
            acc = f.from_poly(naive_poly_mul(&f, f.to_poly(acc), 5)).unwrap();
            order += 1;
        }
        assert_eq!(order, 24);
    }

    #[test]
    fn gf8_product_wraps_log() {
        let f = FieldCtx::new(2, 3).unwrap();
        let (a3, a5) = (f.alpha_pow(3), f.alpha_pow(5));
        let oracle = naive_poly_mul(&f, f.to_poly(a3), f.to_poly(a5));
        assert_eq!(f.mul(a3, a5), f.alpha_pow(1));
        assert_eq!(f.to_poly(f.alpha_pow(1)), oracle);
    }

    #[test]
    fn mul_agrees_with_polynomial_multiplication() {
        for (p, l) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)] {
            let f = FieldCtx::new(p, l).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.to_poly(f.mul(a, b)), naive_poly_mul(&f, f.to_poly(a), f.to_poly(b)));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldCtx::new(4, 1).is_err());
        assert!(FieldCtx::new(2, 17).is_err());
        assert!(FieldCtx::new(2, 0).is_err());
        let f = FieldCtx::new(7, 1).unwrap();
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::DivisionByZero)));
    }

    #[test]
    fn searched_moduli_are_primitive() {
        for (p, l) in [(2, 6), (3, 4), (11, 2), (13, 1)] {
            let f = FieldCtx::new(p, l).unwrap();
            assert_eq!(f.q(), p.pow(l));
            let distinct: std::collections::HashSet<_> = (0..f.q() - 1).map(|k| f.to_poly(f.alpha_pow(k as i64))).collect();
            assert_eq!(distinct.len() as u32, f.q() - 1);
        }
    }

    #[test]
    fn embedding_into_gf9_sends_generator_to_alpha4() {
        let big = FieldCtx::new(3, 2).unwrap();
        let small = FieldCtx::new(3, 1).unwrap();
        let sub = Subfield::new(&big, &small).unwrap();
        let image = sub.embed(small.alpha_pow(1));
        assert_eq!(image, big.alpha_pow(4));
        assert_eq!(big.order(image), Some(2));
        assert_eq!(sub.embed(Elem::ZERO), Elem::ZERO);
    }

    #[test]
    fn gf4_expansion_matches_basis_columns() {
        let big = FieldCtx::new(2, 2).unwrap();
        let small = FieldCtx::new(2, 1).unwrap();
        let sub = Subfield::new(&big, &small).unwrap();
        let w = big.parse_token("w").unwrap();
        let v = big.parse_token("v").unwrap();
        assert_eq!(sub.expand(w), &[Elem::ZERO, Elem::ONE]);
        assert_eq!(sub.expand(v), &[Elem::ONE, Elem::ONE]);
        assert_eq!(sub.expand(Elem::ZERO), &[Elem::ZERO, Elem::ZERO]);
        assert_eq!(sub.embed(Elem::ONE), Elem::ONE);
    }

    #[test]
    fn incompatible_pairs_are_rejected() {
        let f8 = FieldCtx::new(2, 3).unwrap();
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert!(Subfield::new(&f8, &f4).is_err());
        assert!(Subfield::new(&f9, &f4).is_err());
    }

    #[test]
    fn render_round_trips() {
        for q in [2, 3, 4, 5, 8, 9, 25] {
            let f = FieldCtx::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.parse_token(&f.render(a)), Some(a));
            }
        }
        let f4 = FieldCtx::with_order(4).unwrap();
        assert_eq!(f4.parse_token("2"), None);
    }
}
