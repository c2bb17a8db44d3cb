//! Semilinear maps acting on subspaces, group closure, orbits, and the
//! expansion of orbit-representative listings.
//!
//! A map `(M, e)` sends a row vector `v` to `σ^e(v)·M`, where `σ` is the
//! Frobenius automorphism `x -> x^p` applied entrywise. Listings written in
//! other conventions are converted with [`Convention::normalize`].

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::geometry::{Matrix, Subspace};
use crate::projsys::ProjSystem;

pub const DEFAULT_ORDER_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    pub mat: Matrix,
    pub frob: u32,
}

impl SemilinearMap {
    pub fn new(ctx: &FieldCtx, mat: Matrix, frob: u32) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch { expected: mat.rows(), got: mat.cols() });
        }
        mat.inverse(ctx)?;
        Ok(SemilinearMap { mat, frob: frob % ctx.l() })
    }

    pub fn linear(ctx: &FieldCtx, mat: Matrix) -> Result<Self> {
        Self::new(ctx, mat, 0)
    }

    pub fn identity(r: usize) -> Self {
        SemilinearMap { mat: Matrix::identity(r), frob: 0 }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn apply_vector(&self, ctx: &FieldCtx, v: &[crate::field::Elem]) -> Vec<crate::field::Elem> {
        if self.frob == 0 {
            self.mat.apply_row(ctx, v)
        } else {
            let w: Vec<_> = v.iter().map(|&e| ctx.frobenius(e, self.frob)).collect();
            self.mat.apply_row(ctx, &w)
        }
    }

    pub fn apply(&self, ctx: &FieldCtx, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: s.ambient() });
        }
        s.map_rows(ctx, self.dim(), |row| self.apply_vector(ctx, row))
    }

    /// The map "first `self`, then `other`".
    pub fn then(&self, ctx: &FieldCtx, other: &SemilinearMap) -> SemilinearMap {
        let twisted = self.mat.map(|e| ctx.frobenius(e, other.frob));
        SemilinearMap { mat: twisted.mul(ctx, &other.mat).expect("square maps of equal size"), frob: (self.frob + other.frob) % ctx.l() }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<SemilinearMap> {
        let back = (ctx.l() - self.frob) % ctx.l();
        let inv = self.mat.inverse(ctx)?;
        Ok(SemilinearMap { mat: inv.map(|e| ctx.frobenius(e, back)), frob: back })
    }

    /// Scales the matrix so its first nonzero entry is 1. Scalar matrices
    /// act trivially on subspaces, so this is the projective class.
    pub fn projective(&self, ctx: &FieldCtx) -> SemilinearMap {
        let lead = self.mat.as_flat().iter().copied().find(|e| !e.is_zero()).expect("invertible matrix");
        let inv = ctx.inv(lead).expect("nonzero lead");
        SemilinearMap { mat: self.mat.map(|e| ctx.mul(e, inv)), frob: self.frob }
    }

    pub fn is_projective_identity(&self, ctx: &FieldCtx) -> bool {
        self.frob == 0 && self.projective(ctx).mat.is_identity()
    }
}

/// How a listing's generator `(M, e)` is meant to act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `v -> σ^e(v)·M` on row vectors.
    RowRight,
    /// `v -> M·σ^e(v)` on column vectors.
    ColumnLeft,
    /// `v -> σ^e(v·M)`.
    FrobeniusAfter,
    /// `v -> σ^e(M·v)` on column vectors.
    ColumnLeftFrobeniusAfter,
}

impl Convention {
    pub const ALL: [Convention; 4] =
        [Convention::RowRight, Convention::ColumnLeft, Convention::FrobeniusAfter, Convention::ColumnLeftFrobeniusAfter];

    /// Rewrites `(M, e)` given in this convention as a row-right map.
    pub fn normalize(self, ctx: &FieldCtx, g: &SemilinearMap) -> SemilinearMap {
        let mat = match self {
            Convention::RowRight => g.mat.clone(),
            Convention::ColumnLeft => g.mat.transpose(),
            Convention::FrobeniusAfter => g.mat.map(|e| ctx.frobenius(e, g.frob)),
            Convention::ColumnLeftFrobeniusAfter => g.mat.transpose().map(|e| ctx.frobenius(e, g.frob)),
        };
        SemilinearMap { mat, frob: g.frob }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::RowRight => "row-right",
            Convention::ColumnLeft => "column-left",
            Convention::FrobeniusAfter => "row-right-frobenius-after",
            Convention::ColumnLeftFrobeniusAfter => "column-left-frobenius-after",
        }
    }
}

/// A group given by generators, acting projectively.
#[derive(Clone, Debug)]
pub struct GroupCtx {
    ctx: FieldCtx,
    r: usize,
    generators: Vec<SemilinearMap>,
    elements: Option<Vec<SemilinearMap>>,
}

impl GroupCtx {
    pub fn trivial(ctx: &FieldCtx, r: usize) -> Self {
        GroupCtx { ctx: ctx.clone(), r, generators: Vec::new(), elements: None }
    }

    pub fn new(ctx: &FieldCtx, r: usize, generators: Vec<SemilinearMap>) -> Result<Self> {
        for g in &generators {
            if g.dim() != r {
                return Err(Error::DimensionMismatch { expected: r, got: g.dim() });
            }
            g.mat.inverse(ctx)?;
        }
        Ok(GroupCtx { ctx: ctx.clone(), r, generators, elements: None })
    }

    /// Builds the group and enumerates it, failing above `cap` elements.
    pub fn closure(ctx: &FieldCtx, r: usize, generators: Vec<SemilinearMap>, cap: usize) -> Result<Self> {
        let mut g = Self::new(ctx, r, generators)?;
        g.close(cap)?;
        Ok(g)
    }

    fn close(&mut self, cap: usize) -> Result<()> {
        let id = SemilinearMap::identity(self.r);
        let gens: Vec<SemilinearMap> = self.generators.iter().map(|g| g.projective(&self.ctx)).collect();
        let mut seen: HashSet<SemilinearMap> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.then(&self.ctx, g).projective(&self.ctx);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::GroupTooLarge(cap));
                    }
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        self.elements = Some(order);
        Ok(())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ambient(&self) -> usize {
        self.r
    }

    pub fn generators(&self) -> &[SemilinearMap] {
        &self.generators
    }

    /// Group elements, if [`GroupCtx::closure`] was used.
    pub fn elements(&self) -> Option<&[SemilinearMap]> {
        self.elements.as_deref()
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(Vec::len)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.is_projective_identity(&self.ctx))
    }

    /// The orbit of `s`, in breadth-first order from `s`.
    pub fn orbit(&self, s: &Subspace) -> Result<Vec<Subspace>> {
        let mut seen = HashSet::from([s.clone()]);
        let mut out = vec![s.clone()];
        let mut i = 0;
        while i < out.len() {
            let x = out[i].clone();
            for g in &self.generators {
                let y = g.apply(&self.ctx, &x)?;
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// Whether every generator permutes the multiset of elements. On
    /// failure, returns the index of an element whose image count differs.
    pub fn invariance_check(&self, sys: &ProjSystem) -> Result<std::result::Result<(), usize>> {
        let mut counts: HashMap<&Subspace, i64> = HashMap::new();
        for e in sys.elements() {
            *counts.entry(e).or_default() += 1;
        }
        for g in &self.generators {
            let mut images: HashMap<Subspace, i64> = HashMap::new();
            for e in sys.elements() {
                *images.entry(g.apply(&self.ctx, e)?).or_default() += 1;
            }
            for (i, e) in sys.elements().iter().enumerate() {
                if images.get(e).copied().unwrap_or(0) != counts[e] {
                    return Ok(Err(i));
                }
            }
            if images.len() != counts.len() {
                let stray = sys.elements().iter().position(|e| !images.contains_key(e)).unwrap_or(0);
                return Ok(Err(stray));
            }
        }
        Ok(Ok(()))
    }

    /// Converts all generators from `conv` to the row-right convention.
    pub fn with_convention(&self, conv: Convention) -> GroupCtx {
        GroupCtx {
            ctx: self.ctx.clone(),
            r: self.r,
            generators: self.generators.iter().map(|g| conv.normalize(&self.ctx, g)).collect(),
            elements: None,
        }
    }
}

/// One entry of a listing: a subspace, optionally flagged as an orbit
/// representative with its declared orbit size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListingEntry {
    pub space: Subspace,
    pub orbit: Option<usize>,
}

/// Expands a listing into the full multiset.
///
/// A flagged representative with orbit size `k` is followed either by no
/// unflagged entries (the orbit is generated) or by exactly `k - 1` of them,
/// which must be the rest of the orbit. Other unflagged entries stand alone.
pub fn expand_listing(group: &GroupCtx, entries: &[ListingEntry]) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let entry = &entries[i];
        let Some(k) = entry.orbit else {
            out.push(entry.space.clone());
            i += 1;
            continue;
        };
        let orbit = group.orbit(&entry.space)?;
        if orbit.len() != k {
            return Err(Error::OrbitMismatch { index: i, detail: format!("declared size {k}, computed {}", orbit.len()) });
        }
        let followers = entries[i + 1..].iter().take(k - 1).take_while(|e| e.orbit.is_none()).count();
        if followers == 0 {
            out.extend(orbit);
        } else if followers == k - 1 {
            let listed: HashSet<&Subspace> = entries[i..i + k].iter().map(|e| &e.space).collect();
            let computed: HashSet<&Subspace> = orbit.iter().collect();
            if listed != computed {
                return Err(Error::OrbitMismatch { index: i, detail: "listed members differ from the computed orbit".into() });
            }
            out.extend(entries[i..i + k].iter().map(|e| e.space.clone()));
        } else {
            return Err(Error::OrbitMismatch { index: i, detail: format!("{followers} listed members for an orbit of size {k}") });
        }
        i += 1 + followers;
    }
    Ok(out)
}

/// Tries [`expand_listing`] under each convention, returning the first that
/// reproduces every declared orbit, together with the group rewritten in
/// the row-right convention.
pub fn expand_listing_any(group: &GroupCtx, entries: &[ListingEntry]) -> Result<(Vec<Subspace>, Convention, GroupCtx)> {
    let mut first_err = None;
    for conv in Convention::ALL {
        let g = group.with_convention(conv);
        match expand_listing(&g, entries) {
            Ok(v) => return Ok((v, conv, g)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one convention"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Elem;
    use crate::geometry::SubspaceIter;

    fn int_matrix(ctx: &FieldCtx, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<Elem>> = rows.iter().map(|r| r.iter().map(|&x| ctx.from_int(x)).collect()).collect();
        Matrix::from_rows(rows[0].len(), &rows).unwrap()
    }

    fn order3_gf3() -> (FieldCtx, SemilinearMap) {
        let f3 = FieldCtx::with_order(3).unwrap();
        let m = int_matrix(&f3, &[&[1, 1, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 1, 0], &[0, 0, 0, 1, 1], &[0, 0, 0, 0, 1]]);
        let g = SemilinearMap::linear(&f3, m).unwrap();
        (f3, g)
    }

    #[test]
    fn unipotent_generator_has_order_three() {
        let (f3, g) = order3_gf3();
        let grp = GroupCtx::closure(&f3, 5, vec![g], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(grp.order(), Some(3));
        let id = GroupCtx::closure(&f3, 5, vec![SemilinearMap::identity(5)], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(id.order(), Some(1));
    }

    #[test]
    fn closure_cap_is_enforced() {
        let f5 = FieldCtx::with_order(5).unwrap();
        let m = int_matrix(&f5, &[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let err = GroupCtx::closure(&f5, 3, vec![SemilinearMap::linear(&f5, m).unwrap()], 3);
        assert!(matches!(err, Err(Error::GroupTooLarge(3))));
    }

    #[test]
    fn singular_generator_rejected() {
        let f3 = FieldCtx::with_order(3).unwrap();
        let m = int_matrix(&f3, &[&[1, 1], &[1, 1]]);
        assert!(SemilinearMap::linear(&f3, m).is_err());
    }

    #[test]
    fn frobenius_fixes_subfield_rational_spaces() {
        let f4 = FieldCtx::with_order(4).unwrap();
        let sigma = SemilinearMap::new(&f4, Matrix::identity(3), 1).unwrap();
        let line = Subspace::from_rows(&f4, 3, &[vec![Elem::ONE, Elem::ONE, Elem::ZERO], vec![Elem::ZERO, Elem::ZERO, Elem::ONE]]).unwrap();
        assert_eq!(sigma.apply(&f4, &line).unwrap(), line);
        let w = f4.parse_token("w").unwrap();
        let p = Subspace::from_rows(&f4, 3, &[vec![Elem::ONE, w, Elem::ZERO]]).unwrap();
        let img = sigma.apply(&f4, &p).unwrap();
        assert_eq!(img.basis().get(0, 1), f4.parse_token("v").unwrap());
    }

    #[test]
    fn composition_matches_sequential_application() {
        let f4 = FieldCtx::with_order(4).unwrap();
        let w = f4.parse_token("w").unwrap();
        let a = SemilinearMap::new(&f4, Matrix::from_rows(2, &[vec![Elem::ONE, w], vec![Elem::ZERO, Elem::ONE]]).unwrap(), 1).unwrap();
        let b = SemilinearMap::new(&f4, Matrix::from_rows(2, &[vec![w, Elem::ZERO], vec![Elem::ONE, Elem::ONE]]).unwrap(), 0).unwrap();
        for s in SubspaceIter::new(&f4, 2, 1) {
            let seq = b.apply(&f4, &a.apply(&f4, &s).unwrap()).unwrap();
            assert_eq!(a.then(&f4, &b).apply(&f4, &s).unwrap(), seq);
            let back = a.inverse(&f4).unwrap().apply(&f4, &a.apply(&f4, &s).unwrap()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn orbit_stabilizer_on_lines() {
        let (f3, g) = order3_gf3();
        let grp = GroupCtx::closure(&f3, 5, vec![g], DEFAULT_ORDER_CAP).unwrap();
        let elems = grp.elements().unwrap();
        for s in SubspaceIter::new(&f3, 5, 2).step_by(37) {
            let orb = grp.orbit(&s).unwrap();
            let stab = elems.iter().filter(|m| m.apply(&f3, &s).unwrap() == s).count();
            assert_eq!(orb.len() * stab, 3);
        }
        let trivial = GroupCtx::trivial(&f3, 5);
        let s = SubspaceIter::new(&f3, 5, 2).next().unwrap();
        assert_eq!(trivial.orbit(&s).unwrap(), vec![s]);
    }

    #[test]
    fn listing_rules() {
        let (f3, g) = order3_gf3();
        let grp = GroupCtx::new(&f3, 5, vec![g]).unwrap();
        let moving = SubspaceIter::new(&f3, 5, 2).find(|s| grp.orbit(s).unwrap().len() == 3).unwrap();
        let orbit = grp.orbit(&moving).unwrap();
        let rep = |s: &Subspace, k| ListingEntry { space: s.clone(), orbit: Some(k) };
        let plain = |s: &Subspace| ListingEntry { space: s.clone(), orbit: None };

        assert_eq!(expand_listing(&grp, &[rep(&moving, 3)]).unwrap().len(), 3);
        let full = [rep(&orbit[0], 3), plain(&orbit[2]), plain(&orbit[1])];
        assert_eq!(expand_listing(&grp, &full).unwrap().len(), 3);
        assert!(expand_listing(&grp, &[rep(&moving, 1)]).is_err());
        let wrong = [rep(&orbit[0], 3), plain(&orbit[0]), plain(&orbit[1])];
        assert!(expand_listing(&grp, &wrong).is_err());
        let partial = [rep(&orbit[0], 3), plain(&orbit[1]), rep(&orbit[0], 3)];
        assert!(expand_listing(&grp, &partial).is_err());
        assert_eq!(expand_listing(&GroupCtx::trivial(&f3, 5), &[plain(&moving)]).unwrap().len(), 1);
    }

    #[test]
    fn invariance_detects_broken_orbit() {
        let (f3, g) = order3_gf3();
        let grp = GroupCtx::new(&f3, 5, vec![g]).unwrap();
        let moving = SubspaceIter::new(&f3, 5, 2).find(|s| grp.orbit(s).unwrap().len() == 3).unwrap();
        let mut elems = grp.orbit(&moving).unwrap();
        let sys = ProjSystem::new(&f3, 5, 2, elems.clone()).unwrap();
        assert_eq!(grp.invariance_check(&sys).unwrap(), Ok(()));
        elems[1] = SubspaceIter::new(&f3, 5, 2).find(|s| !elems.contains(s)).unwrap();
        let broken = ProjSystem::new(&f3, 5, 2, elems).unwrap();
        assert!(grp.invariance_check(&broken).unwrap().is_err());
    }
}
