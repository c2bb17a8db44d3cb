//! Projective systems: verification of `(n, s, μ)`, point expansion to
//! linear codes, multispread checks, and the bridge to additive codes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subfield};
use crate::geometry::{gauss_count, Matrix, ProjSpace, Subspace};

/// A multiset of subspaces of dimension at most `h` in `GF(q)^r`.
#[derive(Clone, Debug)]
pub struct ProjSystem {
    ctx: FieldCtx,
    r: usize,
    h: usize,
    elements: Vec<Subspace>,
}

impl ProjSystem {
    /// Rejects elements of dimension 0; see [`ProjSystem::new_allow_degenerate`].
    pub fn new(ctx: &FieldCtx, r: usize, h: usize, elements: Vec<Subspace>) -> Result<Self> {
        if let Some(i) = elements.iter().position(|e| e.dim() == 0) {
            return Err(Error::InvalidSystem(format!("element {i} is the zero subspace")));
        }
        Self::new_allow_degenerate(ctx, r, h, elements)
    }

    pub fn new_allow_degenerate(ctx: &FieldCtx, r: usize, h: usize, elements: Vec<Subspace>) -> Result<Self> {
        for (i, e) in elements.iter().enumerate() {
            if e.ambient() != r {
                return Err(Error::DimensionMismatch { expected: r, got: e.ambient() });
            }
            if e.dim() > h {
                return Err(Error::InvalidSystem(format!("element {i} has dimension {} > {h}", e.dim())));
            }
        }
        Ok(ProjSystem { ctx: ctx.clone(), r, h, elements })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ambient(&self) -> usize {
        self.r
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Subspace> {
        self.elements
    }

    pub fn push(&mut self, s: Subspace) -> Result<()> {
        if s.ambient() != self.r {
            return Err(Error::DimensionMismatch { expected: self.r, got: s.ambient() });
        }
        if s.dim() > self.h {
            return Err(Error::InvalidSystem(format!("dimension {} > {}", s.dim(), self.h)));
        }
        self.elements.push(s);
        Ok(())
    }

    pub fn is_faithful(&self) -> bool {
        self.elements.iter().all(|e| e.dim() == self.h)
    }

    pub fn space(&self) -> Result<ProjSpace> {
        ProjSpace::new(&self.ctx, self.r)
    }

    pub fn verify(&self) -> Result<SystemReport> {
        self.verify_in(&self.space()?)
    }

    /// Recomputes every parameter from scratch against a prepared
    /// point/hyperplane table.
    pub fn verify_in(&self, space: &ProjSpace) -> Result<SystemReport> {
        if space.ambient() != self.r || *space.ctx() != self.ctx {
            return Err(Error::DimensionMismatch { expected: self.r, got: space.ambient() });
        }
        let m = space.len();
        let (hyper, cover) = self
            .elements
            .par_iter()
            .fold(
                || (vec![0u32; m], vec![0u32; m]),
                |(mut hyp, mut cov), e| {
                    for i in space.hyperplanes_containing(e) {
                        hyp[i as usize] += 1;
                    }
                    for i in space.points_of(e) {
                        cov[i as usize] += 1;
                    }
                    (hyp, cov)
                },
            )
            .reduce(
                || (vec![0u32; m], vec![0u32; m]),
                |(mut a, mut b), (c, d)| {
                    a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                    b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
                    (a, b)
                },
            );
        let (s, witness) = argmax(&hyper);
        let (mu, mu_witness) = argmax(&cover);
        let s_min = hyper.iter().copied().min().unwrap_or(0) as usize;
        Ok(SystemReport {
            n: self.n(),
            r: self.r,
            h: self.h,
            s: s as usize,
            s_min,
            mu: mu as usize,
            faithful: self.is_faithful(),
            spanning: (s as usize) < self.n(),
            hyperplane_witness: witness,
            point_witness: mu_witness,
            per_hyperplane: hyper,
        })
    }

    /// Replaces every element by its points, each counted once per element.
    pub fn expand_points(&self) -> Result<PointMultiset> {
        self.expand_points_in(&self.space()?)
    }

    pub fn expand_points_in(&self, space: &ProjSpace) -> Result<PointMultiset> {
        if !self.is_faithful() {
            return Err(Error::InvalidSystem("point expansion needs a faithful system".into()));
        }
        let mut counts = vec![0u32; space.len()];
        for e in &self.elements {
            for i in space.points_of(e) {
                counts[i as usize] += 1;
            }
        }
        Ok(PointMultiset { r: self.r, counts })
    }

    /// Checks the multispread property: `Σ_{S∋v} q^(h - dim S)` constant
    /// over all points `v`.
    pub fn multispread_check(&self) -> Result<MultispreadReport> {
        let space = self.space()?;
        let report = self.verify_in(&space)?;
        self.multispread_check_in(&space, &report)
    }

    pub fn multispread_check_in(&self, space: &ProjSpace, report: &SystemReport) -> Result<MultispreadReport> {
        let q = self.ctx.q() as i128;
        let h = self.h as u32;
        let k = self.r as u32;
        let mut coverage = vec![0u64; space.len()];
        let mut lambda = 0u64;
        for e in &self.elements {
            let w = q.pow(h - e.dim() as u32) as u64;
            lambda += w - 1;
            for i in space.points_of(e) {
                coverage[i as usize] += w;
            }
        }
        let first = coverage.first().copied().unwrap_or(0);
        let witness = coverage.iter().position(|&c| c != first);
        let mu = if witness.is_none() { Some(first) } else { None };
        let n = self.n() as i128;
        let s = report.s as i128;
        let (eq_s, eq_lambda, congruence) = match mu {
            Some(mu) if k >= h => {
                let mu = mu as i128;
                let qkh = q.pow(k - h);
                let qh1 = q.pow(h) - 1;
                (
                    s == n - qkh * mu,
                    qh1 * s == (qkh - 1) * mu + lambda as i128,
                    (lambda as i128 + mu * (q.pow(k) - 1)).rem_euclid(qh1) == 0,
                )
            }
            _ => (false, false, false),
        };
        Ok(MultispreadReport {
            k: self.r,
            h: self.h,
            n: self.n(),
            lambda,
            mu,
            witness_point: witness,
            s: report.s,
            s_min: report.s_min,
            s_equation_holds: eq_s,
            lambda_equation_holds: eq_lambda,
            congruence_holds: congruence,
        })
    }

    /// Additive-code parameters `[n, r/h, n - s]`.
    pub fn code_params(&self, report: &SystemReport) -> CodeParams {
        CodeParams { n: self.n(), r: self.r, h: self.h, d: self.n() - report.s.min(self.n()) }
    }

    /// A generator matrix over `GF(q^h)` of the additive code: `r` rows,
    /// one column per element, whose expanded columns span the element.
    pub fn additive_generator(&self, sub: &Subfield) -> Result<Matrix> {
        if *sub.small() != self.ctx || sub.degree() != self.h {
            return Err(Error::Field("subfield pair does not match the system".into()));
        }
        let mut g = Matrix::zeros(self.r, self.n());
        for (t, e) in self.elements.iter().enumerate() {
            for rho in 0..self.r {
                let coords: Vec<Elem> = (0..self.h).map(|c| if c < e.dim() { e.basis().get(c, rho) } else { Elem::ZERO }).collect();
                g.set(rho, t, sub.evaluate(&coords));
            }
        }
        Ok(g)
    }

    /// Inverse of [`ProjSystem::additive_generator`]: element `t` is the
    /// span of the expansions of column `t`.
    pub fn from_additive_generator(g: &Matrix, sub: &Subfield) -> Result<ProjSystem> {
        let (small, h) = (sub.small(), sub.degree());
        let r = g.rows();
        let elements = (0..g.cols())
            .map(|t| {
                let rows: Vec<Vec<Elem>> = (0..h).map(|c| (0..r).map(|rho| sub.expand(g.get(rho, t))[c]).collect()).collect();
                Subspace::from_rows(small, r, &rows)
            })
            .collect::<Result<Vec<_>>>()?;
        ProjSystem::new_allow_degenerate(small, r, h, elements)
    }
}

/// Subfield construction: a `k × n` generator matrix of a linear code over
/// `GF(q^h)` becomes a system of `n` subspaces of dimension at most `h` in
/// `GF(q)^(kh)`. Row `i` contributes rows `α^j g_i` for `j < h`.
pub fn subfield_construct(gen: &Matrix, sub: &Subfield) -> Result<ProjSystem> {
    let big = sub.big();
    let h = sub.degree();
    let mut rows = Vec::with_capacity(gen.rows() * h);
    for i in 0..gen.rows() {
        for j in 0..h {
            let a = big.alpha_pow(j as i64);
            rows.push(gen.row(i).iter().map(|&e| big.mul(a, e)).collect::<Vec<_>>());
        }
    }
    let g_add = Matrix::from_rows(gen.cols(), &rows)?;
    ProjSystem::from_additive_generator(&g_add, sub)
}

fn argmax(v: &[u32]) -> (u32, Option<usize>) {
    v.iter().enumerate().fold((0, None), |(best, at), (i, &x)| if at.is_none() || x > best { (x, Some(i)) } else { (best, at) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemReport {
    pub n: usize,
    pub r: usize,
    pub h: usize,
    /// Maximum number of elements in a hyperplane, with multiplicity.
    pub s: usize,
    pub s_min: usize,
    /// Maximum number of elements through a point.
    pub mu: usize,
    pub faithful: bool,
    pub spanning: bool,
    pub hyperplane_witness: Option<usize>,
    pub point_witness: Option<usize>,
    pub per_hyperplane: Vec<u32>,
}

impl SystemReport {
    /// Histogram `count -> number of hyperplanes`.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.per_hyperplane {
            *h.entry(c).or_default() += 1;
        }
        h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub r: usize,
    pub h: usize,
    pub d: usize,
}

impl std::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.r % self.h == 0 {
            write!(f, "[{}, {}, {}]", self.n, self.r / self.h, self.d)
        } else {
            write!(f, "[{}, {}/{}, {}]", self.n, self.r, self.h, self.d)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultispreadReport {
    pub k: usize,
    pub h: usize,
    pub n: usize,
    pub lambda: u64,
    /// The constant weighted coverage, if it is constant.
    pub mu: Option<u64>,
    pub witness_point: Option<usize>,
    pub s: usize,
    pub s_min: usize,
    pub s_equation_holds: bool,
    pub lambda_equation_holds: bool,
    pub congruence_holds: bool,
}

impl MultispreadReport {
    pub fn is_valid(&self) -> bool {
        self.mu.is_some() && self.s == self.s_min && self.s_equation_holds && self.lambda_equation_holds && self.congruence_holds
    }
}

/// A multiset of projective points, indexed as in [`ProjSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMultiset {
    pub r: usize,
    pub counts: Vec<u32>,
}

impl PointMultiset {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Number of points (with multiplicity) on each hyperplane.
    pub fn hyperplane_counts(&self, space: &ProjSpace) -> Vec<u64> {
        let mut out = vec![0u64; space.len()];
        for (p, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for hyp in space.hyperplanes_containing(&space.point_subspace(p)) {
                out[hyp as usize] += c as u64;
            }
        }
        out
    }

    /// Weights of the associated linear code, one per hyperplane:
    /// `w(H) = n' - |points on H|`.
    pub fn weight_distribution(&self, space: &ProjSpace) -> WeightDistribution {
        let n = self.total();
        let on = self.hyperplane_counts(space);
        let mut weights = BTreeMap::new();
        for &c in &on {
            *weights.entry(n - c).or_insert(0u64) += 1;
        }
        WeightDistribution {
            n,
            max_on_hyperplane: on.iter().copied().max().unwrap_or(0),
            min_weight: weights.keys().next().copied().unwrap_or(0),
            max_weight: weights.keys().next_back().copied().unwrap_or(0),
            weights,
        }
    }

    pub fn divisibility_check(&self, space: &ProjSpace, delta: u64) -> bool {
        delta != 0 && self.weight_distribution(space).weights.keys().all(|w| w % delta == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub n: u64,
    /// Weight -> number of hyperplanes (codewords up to scalars).
    pub weights: BTreeMap<u64, u64>,
    pub min_weight: u64,
    pub max_weight: u64,
    pub max_on_hyperplane: u64,
}

impl WeightDistribution {
    /// The full distribution, each hyperplane accounting for `q - 1` codewords.
    pub fn full_spectrum(&self, q: u64) -> BTreeMap<u64, u64> {
        self.weights.iter().map(|(&w, &c)| (w, c * (q - 1))).collect()
    }
}

/// Result of checking the point-expansion transfer on a faithful system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub n_prime: u64,
    pub expected_n_prime: u64,
    pub s_prime: u64,
    pub expected_s_prime: u64,
    pub divisible: bool,
    pub max_weight: u64,
    pub max_weight_bound: u64,
    pub min_weight: u64,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.n_prime == self.expected_n_prime
            && self.s_prime == self.expected_s_prime
            && self.divisible
            && self.max_weight <= self.max_weight_bound
    }
}

pub fn transfer_check(sys: &ProjSystem, report: &SystemReport, space: &ProjSpace) -> Result<TransferReport> {
    let q = sys.ctx().q() as u64;
    let h = sys.h() as u32;
    let n = sys.n() as u64;
    let pm = sys.expand_points_in(space)?;
    let wd = pm.weight_distribution(space);
    let delta = q.pow(h.saturating_sub(1));
    Ok(TransferReport {
        n_prime: wd.n,
        expected_n_prime: n * gauss_count(q, h),
        s_prime: wd.max_on_hyperplane,
        expected_s_prime: n * gauss_count(q, h.saturating_sub(1)) + report.s as u64 * delta,
        divisible: wd.weights.keys().all(|w| w % delta == 0),
        max_weight: wd.max_weight,
        max_weight_bound: n * delta,
        min_weight: wd.min_weight,
    })
}
