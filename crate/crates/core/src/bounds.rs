//! Bounds on `n_q(r, h; s)`, the maximum size of a projective
//! `h-(n, r, s)_q` system.

use std::fmt;

use crate::error::{Error, Result};
pub use crate::geometry::gauss_count;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub value: u64,
    pub kind: BoundKind,
    pub source: &'static str,
}

impl BoundResult {
    fn upper(value: u64, source: &'static str) -> Self {
        BoundResult { value, kind: BoundKind::Upper, source }
    }
}

impl fmt::Display for BoundResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
            BoundKind::Exact => "exact",
        };
        write!(f, "value={} kind={kind} source={}", self.value, self.source)
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `g_q(k, d) = Σ_{i<k} ⌈d / q^i⌉`, the minimum length of a linear
/// `[n, k, d]_q` code allowed by the Griesmer bound.
pub fn griesmer(q: u64, k: u32, d: u64) -> u64 {
    (0..k)
        .scan(1u64, |qi, _| {
            let term = ceil_div(d, *qi);
            *qi = qi.saturating_mul(q);
            Some(term)
        })
        .sum()
}

/// Minimum length of an additive code with `r/h` dimension and minimum
/// distance `d` permitted by the Griesmer bound for additive codes:
/// `d + ⌈(g_q(r-h+1, d) - d) / [h]_q⌉`.
pub fn additive_griesmer_min_n(q: u64, r: u32, h: u32, d: u64) -> Result<u64> {
    if h == 0 || h > r {
        return Err(Error::BoundParams(format!("need 1 <= h <= r, got h={h}, r={r}")));
    }
    let g = griesmer(q, r - h + 1, d);
    Ok(d + ceil_div(g - d, gauss_count(q, h)))
}

/// Largest `n` with `n >= additive_griesmer_min_n(q, r, h, n - s)`.
pub fn griesmer_max_n(q: u64, r: u32, h: u32, s: u64) -> Result<BoundResult> {
    if s == 0 || h == 0 || h > r {
        return Err(Error::BoundParams(format!("need s >= 1 and 1 <= h <= r, got s={s}, h={h}, r={r}")));
    }
    let k = r - h + 1;
    if k == 1 {
        return Err(Error::BoundParams("unbounded: a single block spans the space".into()));
    }
    let hq = gauss_count(q, h);
    // (g(k,d) - d) is nondecreasing in d, so the feasible d form a prefix
    let feasible = |d: u64| ceil_div(griesmer(q, k, d) - d, hq) <= s;
    let mut d = 0u64;
    while feasible(d + 1) {
        d += 1;
    }
    Ok(BoundResult::upper(s + d, "additive-griesmer"))
}

fn check_span_params(h: u32, j: u32, s: u64, t: u64) -> Result<()> {
    if s < t || t < 2 || h == 0 || j == 0 {
        return Err(Error::BoundParams(format!("need s >= t >= 2 and h, j >= 1, got s={s}, t={t}, h={h}, j={j}")));
    }
    Ok(())
}

/// Upper bound on `n_q(th + j, h; s)`:
/// `⌊(s - t + 1)·[h+j]_q / [j]_q + t - 1⌋`.
pub fn span_bound(q: u64, h: u32, j: u32, s: u64, t: u64) -> Result<BoundResult> {
    check_span_params(h, j, s, t)?;
    let value = (s - t + 1) * gauss_count(q, h + j) / gauss_count(q, j) + t - 1;
    Ok(BoundResult::upper(value, "span"))
}

/// Upper bound on `n_q(th + j, h; s)` for systems in which some
/// `(th - i)`-space contains `t` elements:
/// `⌊((s - t + 1)·[h+j]_q - [i+j]_q) / [j]_q + t⌋`.
pub fn span_bound_refined(q: u64, h: u32, j: u32, s: u64, t: u64, i: u32) -> Result<BoundResult> {
    check_span_params(h, j, s, t)?;
    if i > h {
        return Err(Error::BoundParams(format!("need i <= h, got i={i}, h={h}")));
    }
    let num = (s - t + 1) * gauss_count(q, h + j) - gauss_count(q, i + j);
    Ok(BoundResult::upper(num / gauss_count(q, j) + t, "span-refined"))
}

/// Whether `s` is a power of `p` (including `p^0 = 1`).
fn is_power_of(s: u64, p: u64) -> bool {
    let mut s = s;
    while s % p == 0 {
        s /= p;
    }
    s == 1
}

/// Strict upper bound on `n_q(2h + j, h; s)` when `s` has a factor coprime
/// to `q`: `n < (s - 1)·[h+j]_q / [j]_q + 1`. Returns `None` when `s` is a
/// power of the characteristic.
pub fn coprime_bound(q: u64, h: u32, j: u32, s: u64) -> Result<Option<BoundResult>> {
    if s < 2 || h == 0 || j == 0 {
        return Err(Error::BoundParams(format!("need s >= 2 and h, j >= 1, got s={s}, h={h}, j={j}")));
    }
    let p = smallest_prime_factor(q);
    if is_power_of(s, p) {
        return Ok(None);
    }
    let gj = gauss_count(q, j);
    let value = ((s - 1) * gauss_count(q, h + j) + gj - 1) / gj;
    Ok(Some(BoundResult::upper(value, "coprime")))
}

fn smallest_prime_factor(q: u64) -> u64 {
    (2..=q).find(|d| q % d == 0).unwrap_or(q)
}

/// The strongest of the closed-form upper bounds that apply to `(q, r, h, s)`.
pub fn best_upper(q: u64, r: u32, h: u32, s: u64) -> Result<BoundResult> {
    let mut best = griesmer_max_n(q, r, h, s)?;
    if r > 2 * h {
        let (t, j) = (2u64, r - 2 * h);
        if s >= 2 {
            let sb = span_bound(q, h, j, s, t)?;
            if sb.value < best.value {
                best = sb;
            }
            if let Some(cb) = coprime_bound(q, h, j, s)? {
                if cb.value < best.value {
                    best = cb;
                }
            }
        }
    }
    Ok(best)
}

/// Answers whether an `[n, k, d]_q` linear code exists.
pub trait LinearCodeOracle {
    fn exists(&self, n: u64, k: u32, d: u64) -> Result<bool>;
}

/// Treats every parameter set allowed by the Griesmer bound as feasible.
#[derive(Clone, Copy, Debug)]
pub struct GriesmerOracle {
    pub q: u64,
}

impl LinearCodeOracle for GriesmerOracle {
    fn exists(&self, n: u64, k: u32, d: u64) -> Result<bool> {
        Ok(n >= griesmer(self.q, k, d))
    }
}

/// A table of known existence facts, deferring to the Griesmer bound for
/// everything not listed.
#[derive(Clone, Debug)]
pub struct FactOracle {
    pub q: u64,
    pub facts: Vec<((u64, u32, u64), bool)>,
}

impl LinearCodeOracle for FactOracle {
    fn exists(&self, n: u64, k: u32, d: u64) -> Result<bool> {
        match self.facts.iter().find(|(key, _)| *key == (n, k, d)) {
            Some(&(_, known)) => Ok(known),
            None => GriesmerOracle { q: self.q }.exists(n, k, d),
        }
    }
}

impl<F: Fn(u64, u32, u64) -> Result<bool>> LinearCodeOracle for F {
    fn exists(&self, n: u64, k: u32, d: u64) -> Result<bool> {
        self(n, k, d)
    }
}

/// Weak coding upper bound: scans `n = s + 1, s + 2, ...` and asks the
/// oracle for a linear `[n·[h]_q, r, q^(h-1)·(n - s)]_q` code; the bound is
/// the last `n` before the first rejected length. The oracle is assumed to
/// be monotone along this family. The scan never exceeds
/// [`griesmer_max_n`].
pub fn coding_bound(q: u64, r: u32, h: u32, s: u64, oracle: &dyn LinearCodeOracle) -> Result<BoundResult> {
    let cap = griesmer_max_n(q, r, h, s)?.value;
    let hq = gauss_count(q, h);
    let scale = q.pow(h - 1);
    let mut best = s;
    for n in s + 1..=cap {
        if !oracle.exists(n * hq, r, scale * (n - s))? {
            break;
        }
        best = n;
    }
    Ok(BoundResult::upper(best, "weak-coding"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_counts() {
        assert_eq!(gauss_count(2, 3), 7);
        assert_eq!(gauss_count(4, 5), 341);
        assert_eq!(gauss_count(3, 5), 121);
        assert_eq!(gauss_count(5, 0), 0);
    }

    #[test]
    fn griesmer_values() {
        for d in 1..20 {
            assert_eq!(griesmer(2, 1, d), d);
        }
        assert_eq!(griesmer(2, 8, 46), 94);
        assert_eq!(griesmer(4, 4, 320), 425);
        assert_eq!(griesmer(2, 7, 22), 46);
    }

    #[test]
    fn additive_griesmer_values() {
        assert_eq!(additive_griesmer_min_n(4, 5, 2, 320).unwrap(), 341);
        assert_eq!(additive_griesmer_min_n(2, 8, 2, 22).unwrap(), 30);
        for d in 1..30 {
            assert_eq!(additive_griesmer_min_n(3, 4, 1, d).unwrap(), griesmer(3, 4, d));
        }
    }

    #[test]
    fn griesmer_max_values() {
        assert_eq!(griesmer_max_n(2, 8, 2, 8).unwrap().value, 30);
        for q in 2..=5u64 {
            if q == 4 || smallest_prime_factor(q) == q {
                for s in 1..10 {
                    assert_eq!(griesmer_max_n(q, 3, 2, s).unwrap().value, s * gauss_count(q, 3));
                }
            }
        }
        assert_eq!(griesmer_max_n(4, 5, 2, 21).unwrap().value, 341);
        assert!(griesmer_max_n(2, 2, 2, 1).is_err());
    }

    #[test]
    fn span_bounds() {
        assert_eq!(span_bound(3, 2, 1, 2, 2).unwrap().value, 14);
        assert_eq!(span_bound(4, 2, 1, 2, 2).unwrap().value, 22);
        assert!(span_bound(4, 2, 1, 1, 2).is_err());
        assert_eq!(span_bound_refined(3, 2, 1, 2, 2, 0).unwrap().value, 14);
        assert_eq!(span_bound_refined(5, 2, 1, 2, 2, 1).unwrap().value, 27);
        assert!(span_bound_refined(5, 2, 1, 2, 2, 3).is_err());
    }

    #[test]
    fn coprime_bounds() {
        assert_eq!(coprime_bound(5, 2, 1, 2).unwrap().unwrap().value, 31);
        assert_eq!(coprime_bound(4, 2, 1, 3).unwrap().unwrap().value, 42);
        assert_eq!(coprime_bound(2, 2, 1, 2).unwrap(), None);
        assert_eq!(coprime_bound(4, 2, 1, 4).unwrap(), None);
    }

    #[test]
    fn weak_coding_bound() {
        let facts = FactOracle { q: 2, facts: vec![((84, 8, 40), true), ((87, 8, 42), false)] };
        assert_eq!(coding_bound(2, 8, 2, 8, &facts).unwrap().value, 28);
        let plain = coding_bound(2, 8, 2, 8, &GriesmerOracle { q: 2 }).unwrap();
        assert_eq!(plain.value, griesmer_max_n(2, 8, 2, 8).unwrap().value);
        let failing = |_: u64, _: u32, _: u64| -> Result<bool> { Err(Error::Oracle("offline".into())) };
        assert!(coding_bound(2, 8, 2, 8, &failing).is_err());
    }
}
