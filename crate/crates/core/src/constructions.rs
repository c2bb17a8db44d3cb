//! Explicit constructions of projective systems: ovals, line spreads, the
//! arc-and-projection constructions from the conic and from extended
//! Reed–Solomon codes, and an orbit construction under a group of order `q^2`.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subfield};
use crate::geometry::{Matrix, ProjSpace, Subspace};
use crate::groups::{GroupCtx, SemilinearMap};
use crate::projsys::{subfield_construct, ProjSystem, SystemReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OvalKind {
    Conic,
    Hyperoval,
}

/// A set of points in `PG(2, q)` with no three collinear.
#[derive(Clone, Debug)]
pub struct OvalSpec {
    pub ctx: FieldCtx,
    pub kind: OvalKind,
    pub points: Vec<Subspace>,
}

impl OvalSpec {
    /// The largest number of points on a common line.
    pub fn max_on_line(&self) -> Result<usize> {
        let space = ProjSpace::new(&self.ctx, 3)?;
        let mut on = vec![0usize; space.len()];
        for p in &self.points {
            for l in space.hyperplanes_containing(p) {
                on[l as usize] += 1;
            }
        }
        Ok(on.into_iter().max().unwrap_or(0))
    }
}

fn point(ctx: &FieldCtx, v: Vec<Elem>) -> Subspace {
    Subspace::from_rows(ctx, v.len(), &[v]).expect("row has ambient width")
}

/// The conic `{(1, t, t^2)} ∪ {(0, 0, 1)}`.
pub fn make_conic(ctx: &FieldCtx) -> Result<OvalSpec> {
    let mut points: Vec<Subspace> = ctx.elements().map(|t| point(ctx, vec![Elem::ONE, t, ctx.mul(t, t)])).collect();
    points.push(point(ctx, vec![Elem::ZERO, Elem::ZERO, Elem::ONE]));
    let oval = OvalSpec { ctx: ctx.clone(), kind: OvalKind::Conic, points };
    if oval.max_on_line()? > 2 {
        return Err(Error::Construction("conic has three collinear points".into()));
    }
    Ok(oval)
}

/// The conic together with its nucleus `(0, 1, 0)`; even `q` only.
pub fn make_hyperoval(ctx: &FieldCtx) -> Result<OvalSpec> {
    if ctx.p() != 2 {
        return Err(Error::Construction(format!("hyperovals need even q, got q={}", ctx.q())));
    }
    let mut oval = make_conic(ctx)?;
    oval.kind = OvalKind::Hyperoval;
    oval.points.push(point(ctx, vec![Elem::ZERO, Elem::ONE, Elem::ZERO]));
    if oval.max_on_line()? > 2 {
        return Err(Error::Construction("hyperoval has three collinear points".into()));
    }
    Ok(oval)
}

/// The Desarguesian line spread of `GF(q)^4`: the points of `PG(1, q^2)`
/// under the subfield construction.
pub fn line_spread(small: &FieldCtx, big: &FieldCtx) -> Result<ProjSystem> {
    let sub = Subfield::new(big, small)?;
    if sub.degree() != 2 {
        return Err(Error::Field(format!("GF({}) is not a quadratic extension of GF({})", big.q(), small.q())));
    }
    let mut top = vec![Elem::ZERO];
    let mut bottom = vec![Elem::ONE];
    for x in big.elements() {
        top.push(Elem::ONE);
        bottom.push(x);
    }
    let g = Matrix::from_rows(top.len(), &[top, bottom])?;
    subfield_construct(&g, &sub)
}

/// Field reduction of a `GF(q^h)`-subspace of `GF(q^h)^k` to a
/// `GF(q)`-subspace of `GF(q)^(kh)`.
///
/// Uses the coordinates `v -> (first coordinate of α^j·v_i)_(i, j)`, which
/// is the coordinatization produced by [`subfield_construct`].
pub fn field_reduce(sub: &Subfield, w: &Subspace) -> Result<Subspace> {
    let (big, small, h) = (sub.big(), sub.small(), sub.degree());
    let k = w.ambient();
    let psi = |v: &[Elem]| -> Vec<Elem> {
        let mut out = Vec::with_capacity(k * h);
        for &vi in v {
            for j in 0..h {
                out.push(sub.expand(big.mul(big.alpha_pow(j as i64), vi))[0]);
            }
        }
        out
    };
    let mut rows = Vec::with_capacity(w.dim() * h);
    for row in w.basis().row_iter() {
        for m in 0..h {
            let a = big.alpha_pow(m as i64);
            let scaled: Vec<Elem> = row.iter().map(|&e| big.mul(a, e)).collect();
            rows.push(psi(&scaled));
        }
    }
    Subspace::from_rows(small, k * h, &rows)
}

fn first_rows(ctx: &FieldCtx, s: &Subspace, count: usize) -> Result<Subspace> {
    let rows: Vec<&[Elem]> = s.basis().row_iter().take(count).collect();
    Subspace::from_rows(ctx, s.ambient(), &rows)
}

/// Extends the basis of `inner` to a basis of `outer` using the rows of
/// `outer`'s canonical basis, in order.
fn extension_vectors(ctx: &FieldCtx, inner: &Subspace, outer: &Subspace) -> Result<Vec<Vec<Elem>>> {
    let mut span = inner.clone();
    let mut ext = Vec::new();
    for row in outer.basis().row_iter() {
        if !span.contains_vector(ctx, row) {
            ext.push(row.to_vec());
            span = span.span(ctx, &Subspace::from_rows(ctx, outer.ambient(), &[row])?)?;
        }
    }
    Ok(ext)
}

/// The shared recipe: reduce the arc points and the nested subspaces
/// `S_1 ⊂ S_2` to `GF(q)`, project through the first `⌈h/2⌉` canonical
/// basis vectors of the image of `S_1`, and add two `h`-spaces `b`, `b'`
/// that both contain the image of `S_1` and together span the image of `S_2`.
fn arc_projection(sub: &Subfield, arc: &[Subspace], s1: &Subspace, s2: &Subspace) -> Result<ProjSystem> {
    let small = sub.small();
    let h = sub.degree();
    let up = h.div_ceil(2);
    let s1r = field_reduce(sub, s1)?;
    let s2r = field_reduce(sub, s2)?;
    let u = first_rows(small, &s1r, up)?;
    let ps1 = s1r.project_through(small, &u)?;
    let ps2 = s2r.project_through(small, &u)?;
    let r = ps1.ambient();
    let ext = extension_vectors(small, &ps1, &ps2)?;
    if ext.len() != h {
        return Err(Error::Construction(format!("expected {h} extension vectors, found {}", ext.len())));
    }
    let with = |vs: &[Vec<Elem>]| -> Result<Subspace> {
        let mut rows: Vec<Vec<Elem>> = ps1.basis().row_iter().map(<[Elem]>::to_vec).collect();
        rows.extend_from_slice(vs);
        Subspace::from_rows(small, r, &rows)
    };
    let b = with(&ext[..up])?;
    let b2 = with(&ext[h - up..])?;
    let mut elements = arc
        .iter()
        .map(|a| field_reduce(sub, a)?.project_through(small, &u))
        .collect::<Result<Vec<_>>>()?;
    elements.push(b);
    elements.push(b2);
    ProjSystem::new(small, r, h, elements)
}

fn expect_params(sys: &ProjSystem, n: usize, s: usize) -> Result<SystemReport> {
    let rep = sys.verify()?;
    if rep.n != n || rep.s != s || !rep.faithful {
        return Err(Error::Construction(format!(
            "expected faithful n={n}, s={s}; got n={}, s={}, faithful={}",
            rep.n, rep.s, rep.faithful
        )));
    }
    Ok(rep)
}

fn big_field(small: &FieldCtx, h: usize) -> Result<(FieldCtx, Subfield)> {
    if h < 2 {
        return Err(Error::Construction("need h >= 2".into()));
    }
    let big = FieldCtx::new(small.p(), small.l() * h as u32)?;
    let sub = Subfield::new(&big, small)?;
    Ok((big, sub))
}

/// A faithful `h-(q^h + 2, ⌊2.5h⌋, 2)_q` system from the conic in
/// `PG(2, q^h)`, the point `P = (0, 0, 1)` and its tangent `x = 0`.
pub fn construct_oval(small: &FieldCtx, h: usize) -> Result<ProjSystem> {
    let (big, sub) = big_field(small, h)?;
    let conic = make_conic(&big)?;
    let p = point(&big, vec![Elem::ZERO, Elem::ZERO, Elem::ONE]);
    let tangent = Subspace::from_rows(&big, 3, &[[Elem::ZERO, Elem::ONE, Elem::ZERO], [Elem::ZERO, Elem::ZERO, Elem::ONE]])?;
    let arc: Vec<Subspace> = conic.points.into_iter().filter(|x| *x != p).collect();
    let sys = arc_projection(&sub, &arc, &p, &tangent)?;
    expect_params(&sys, big.q() as usize + 2, 2)?;
    Ok(sys)
}

/// The generator matrix of the extended Reed–Solomon code used by
/// [`construct_rs`]: one column `(1, x, ..., x^s)` per `x ∈ GF(q^h)`.
#[derive(Clone, Debug)]
pub struct RsFrame {
    pub big: FieldCtx,
    pub s: usize,
    pub columns: Vec<Vec<Elem>>,
}

impl RsFrame {
    pub fn new(big: &FieldCtx, s: usize) -> Self {
        let columns = big.elements().map(|x| (0..=s).map(|e| big.pow(x, e as u64)).collect()).collect();
        RsFrame { big: big.clone(), s, columns }
    }

    /// `S_i`: vectors whose first `s + 1 - i` coordinates vanish.
    pub fn s_space(&self, i: usize) -> Subspace {
        let k = self.s + 1;
        let rows: Vec<Vec<Elem>> = (k - i..k)
            .map(|c| (0..k).map(|j| if j == c { Elem::ONE } else { Elem::ZERO }).collect())
            .collect();
        Subspace::from_rows(&self.big, k, &rows).expect("unit rows")
    }

    /// Whether the chosen columns span an `|cols|`-space meeting `S_i` trivially.
    pub fn disjoint_from_s(&self, i: usize, cols: &[usize]) -> bool {
        let k = self.s + 1;
        let rows: Vec<&[Elem]> = cols.iter().map(|&c| self.columns[c].as_slice()).collect();
        let span = Subspace::from_rows(&self.big, k, &rows).expect("column width");
        span.dim() == cols.len() && span.intersect_dim(&self.big, &self.s_space(i)).expect("same ambient") == 0
    }
}

/// A faithful `h-(q^h + 2, hs + ⌊h/2⌋, s)_q` system from the extended
/// Reed–Solomon code over `GF(q^h)`.
pub fn construct_rs(small: &FieldCtx, h: usize, s: usize) -> Result<ProjSystem> {
    if s < 2 {
        return Err(Error::Construction("need s >= 2".into()));
    }
    let (big, sub) = big_field(small, h)?;
    let frame = RsFrame::new(&big, s);
    let arc: Vec<Subspace> = frame.columns.iter().map(|c| point(&big, c.clone())).collect();
    let sys = arc_projection(&sub, &arc, &frame.s_space(1), &frame.s_space(2))?;
    expect_params(&sys, big.q() as usize + 2, s)?;
    Ok(sys)
}

/// The pair of commuting order-`q` matrices and the base line of the
/// orbit construction over an odd prime field.
#[derive(Clone, Debug)]
pub struct OrbitFrame {
    pub ctx: FieldCtx,
    /// The smallest non-square.
    pub beta: Elem,
    pub a: Matrix,
    pub b: Matrix,
}

impl OrbitFrame {
    pub fn new(q: u32) -> Result<Self> {
        let ctx = FieldCtx::with_order(q)?;
        if ctx.l() != 1 || q == 2 {
            return Err(Error::Construction(format!("need an odd prime, got q={q}")));
        }
        let beta = (1..q as i64).map(|v| ctx.from_int(v)).find(|&e| !ctx.is_square(e)).expect("odd fields have non-squares");
        let mut a = Matrix::identity(5);
        for (i, j) in [(0, 2), (1, 3), (2, 4)] {
            a.set(i, j, Elem::ONE);
        }
        let mut b = Matrix::identity(5);
        b.set(0, 3, beta);
        b.set(1, 2, Elem::ONE);
        b.set(3, 4, Elem::ONE);
        Ok(OrbitFrame { ctx, beta, a, b })
    }

    pub fn group(&self) -> Result<GroupCtx> {
        let gens = vec![SemilinearMap::linear(&self.ctx, self.a.clone())?, SemilinearMap::linear(&self.ctx, self.b.clone())?];
        GroupCtx::new(&self.ctx, 5, gens)
    }

    /// The line with rows `(1, 0, 1/2, 0, z)` and `(0, 1, -1/2, 0, z')`.
    pub fn base_line(&self, z: i64, zp: i64) -> Subspace {
        let c = &self.ctx;
        let half = c.inv(c.from_int(2)).expect("odd characteristic");
        let rows = [
            vec![Elem::ONE, Elem::ZERO, half, Elem::ZERO, c.from_int(z)],
            vec![Elem::ZERO, Elem::ONE, c.neg(half), Elem::ZERO, c.from_int(zp)],
        ];
        Subspace::from_rows(c, 5, &rows).expect("rows have width 5")
    }

    /// `D = <e_3, e_4>` (0-indexed coordinates).
    pub fn d_line(&self) -> Subspace {
        self.unit_line(3)
    }

    /// `D' = <e_2, e_4>`, the `y = 0` member of [`OrbitFrame::invariant_lines`].
    pub fn d_prime_line(&self) -> Subspace {
        self.unit_line(2)
    }

    fn unit_line(&self, c: usize) -> Subspace {
        let mut r0 = vec![Elem::ZERO; 5];
        r0[c] = Elem::ONE;
        let mut r1 = vec![Elem::ZERO; 5];
        r1[4] = Elem::ONE;
        Subspace::from_rows(&self.ctx, 5, &[r0, r1]).expect("rows have width 5")
    }

    /// `D` and the `q` lines `<(0, 0, 1, y, 0), e_4>`.
    pub fn invariant_lines(&self) -> Vec<Subspace> {
        let c = &self.ctx;
        let mut out = vec![self.d_line()];
        for y in c.elements() {
            let rows = [vec![Elem::ZERO, Elem::ZERO, Elem::ONE, y, Elem::ZERO], vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE]];
            out.push(Subspace::from_rows(c, 5, &rows).expect("rows have width 5"));
        }
        out
    }
}

/// Which invariant lines to add to the base orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtraLines {
    None,
    DOnly,
    DAndDPrime,
    Custom(Vec<Subspace>),
}

/// The `⟨A, B⟩`-orbit of the base line, plus invariant lines. With both
/// `D` and `D'` the result is a faithful `2-(q^2 + 2, 5, 2)_q` system.
pub fn construct_orbit(q: u32, z: i64, zp: i64, extra: ExtraLines) -> Result<ProjSystem> {
    let frame = OrbitFrame::new(q)?;
    let mut elements = frame.group()?.orbit(&frame.base_line(z, zp))?;
    if elements.len() != (q * q) as usize {
        return Err(Error::Construction(format!("orbit has size {}, expected {}", elements.len(), q * q)));
    }
    match extra {
        ExtraLines::None => {}
        ExtraLines::DOnly => elements.push(frame.d_line()),
        ExtraLines::DAndDPrime => elements.extend([frame.d_line(), frame.d_prime_line()]),
        ExtraLines::Custom(lines) => elements.extend(lines),
    }
    let n = elements.len();
    let sys = ProjSystem::new(&frame.ctx, 5, 2, elements)?;
    expect_params(&sys, n, 2)?;
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    #[test]
    fn ovals() {
        assert_eq!(make_conic(&gf(3)).unwrap().points.len(), 4);
        assert_eq!(make_conic(&gf(5)).unwrap().points.len(), 6);
        let h = make_hyperoval(&gf(4)).unwrap();
        assert_eq!(h.points.len(), 6);
        assert_eq!(h.max_on_line().unwrap(), 2);
        assert!(make_hyperoval(&gf(3)).is_err());
    }

    #[test]
    fn line_spreads() {
        for (q, n) in [(2, 5), (3, 10), (4, 17)] {
            let small = gf(q);
            let big = gf(q * q);
            let sys = line_spread(&small, &big).unwrap();
            let rep = sys.verify().unwrap();
            assert_eq!((rep.n, rep.s, rep.mu), (n, 1, 1));
        }
        assert!(line_spread(&gf(2), &gf(8)).is_err());
    }

    #[test]
    fn field_reduction_matches_subfield_construction() {
        let big = gf(9);
        let small = gf(3);
        let sub = Subfield::new(&big, &small).unwrap();
        let frame = RsFrame::new(&big, 2);
        let cols: Vec<Vec<Elem>> = (0..3).map(|i| frame.columns.iter().map(|c| c[i]).collect()).collect();
        let g = Matrix::from_rows(frame.columns.len(), &cols).unwrap();
        let via_matrix = subfield_construct(&g, &sub).unwrap();
        for (c, e) in frame.columns.iter().zip(via_matrix.elements()) {
            assert_eq!(field_reduce(&sub, &point(&big, c.clone())).unwrap(), *e);
        }
    }

    #[test]
    fn doubly_extended_rs_gives_disjoint_lines() {
        let big = gf(9);
        let sub = Subfield::new(&big, &gf(3)).unwrap();
        let mut top = vec![Elem::ZERO];
        let mut bottom = vec![Elem::ONE];
        for x in big.elements() {
            top.push(Elem::ONE);
            bottom.push(x);
        }
        let g = Matrix::from_rows(10, &[top, bottom]).unwrap();
        let rep = subfield_construct(&g, &sub).unwrap().verify().unwrap();
        assert_eq!((rep.n, rep.mu), (10, 1));
    }

    #[test]
    fn small_oval_and_rs_constructions() {
        let rep = construct_oval(&gf(2), 2).unwrap().verify().unwrap();
        assert_eq!((rep.n, rep.r, rep.s), (6, 5, 2));
        let rep = construct_oval(&gf(3), 2).unwrap().verify().unwrap();
        assert_eq!((rep.n, rep.r, rep.s), (11, 5, 2));
        let rep = construct_rs(&gf(2), 2, 3).unwrap().verify().unwrap();
        assert_eq!((rep.n, rep.r, rep.s), (6, 7, 3));
        assert!(construct_rs(&gf(2), 1, 2).is_err());
    }

    #[test]
    fn vandermonde_property() {
        let frame = RsFrame::new(&gf(8), 3);
        for i in 1..=3 {
            let m = 4 - i;
            for start in 0..(8 - m) {
                let cols: Vec<usize> = (start..start + m).collect();
                assert!(frame.disjoint_from_s(i, &cols));
            }
        }
    }

    #[test]
    fn orbit_frame_matrices() {
        for q in [3u32, 5, 7] {
            let f = OrbitFrame::new(q).unwrap();
            let c = &f.ctx;
            assert!(!c.is_square(f.beta));
            assert_eq!(f.a.mul(c, &f.b).unwrap(), f.b.mul(c, &f.a).unwrap());
            for m in [&f.a, &f.b] {
                let mut pow = Matrix::identity(5);
                for _ in 0..q {
                    pow = pow.mul(c, m).unwrap();
                }
                assert!(pow.is_identity());
            }
            let grp = f.group().unwrap();
            let lines = f.invariant_lines();
            assert_eq!(lines.len(), q as usize + 1);
            for l in &lines {
                assert_eq!(grp.orbit(l).unwrap().len(), 1);
            }
        }
        assert!(OrbitFrame::new(9).is_err());
        assert!(OrbitFrame::new(2).is_err());
    }

    #[test]
    fn generator_a_shifts_x() {
        let f = OrbitFrame::new(3).unwrap();
        let a = SemilinearMap::linear(&f.ctx, f.a.clone()).unwrap();
        let img = a.apply(&f.ctx, &f.base_line(0, 0)).unwrap();
        // x = 1/2 = 2 becomes 2 + 1 = 0
        assert_eq!(img.basis().get(0, 2), Elem::ZERO);
        assert_eq!(img.basis().get(1, 3), Elem::ONE);
    }

    #[test]
    fn orbit_construction_q3() {
        let sys = construct_orbit(3, 0, 0, ExtraLines::DAndDPrime).unwrap();
        let rep = sys.verify().unwrap();
        assert_eq!((rep.n, rep.s, rep.mu), (11, 2, 2));
        let single = construct_orbit(3, 0, 0, ExtraLines::DOnly).unwrap().verify().unwrap();
        assert_eq!((single.n, single.s, single.mu), (10, 2, 1));
        let bare = construct_orbit(3, 1, 2, ExtraLines::None).unwrap().verify().unwrap();
        assert_eq!((bare.n, bare.s, bare.mu), (9, 2, 1));
    }
}
