//! The dataset text format and certification of datasets.
//!
//! ```text
//! # comment
//! field p=3 l=1
//! ambient r=5
//! blockdim h=2
//! claim n=34 s=4
//! claim faithful
//! claim multispread lambda=51 mu=5
//! gen frob=0
//! <r rows of r tokens>
//! elem orbit=3
//! <one row per basis vector>
//! elem
//! <rows>
//! ```
//!
//! Tokens are digits for prime fields, `0 1 w v` for GF(4), and `a^k` in
//! any field. `elem orbit=k` flags an orbit representative; see
//! [`crate::groups::expand_listing`] for how unflagged entries are read.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::geometry::{Matrix, Subspace};
use crate::groups::{expand_listing_any, Convention, GroupCtx, ListingEntry, SemilinearMap};
use crate::projsys::{MultispreadReport, ProjSystem, SystemReport};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Claims {
    pub n: Option<usize>,
    pub s: Option<usize>,
    pub faithful: bool,
    /// `(lambda, mu)`.
    pub multispread: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetEntry {
    pub rows: Matrix,
    pub orbit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub comments: Vec<String>,
    pub p: u32,
    pub l: u32,
    pub r: usize,
    pub h: usize,
    pub claims: Claims,
    /// `(matrix, frobenius exponent)` exactly as written in the file.
    pub generators: Vec<(Matrix, u32)>,
    pub entries: Vec<DatasetEntry>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn kv<'a>(line: usize, tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected {key}=<value>, found '{tok}'")))
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, key: &str) -> Result<T> {
    kv(line, tok, key)?.parse().map_err(|_| perr(line, format!("bad value for {key}")))
}

impl Dataset {
    pub fn field(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p, self.l)
    }

    pub fn parse(text: &str) -> Result<Dataset> {
        let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end())).collect();
        let mut comments = Vec::new();
        let mut field = None;
        let (mut r, mut h) = (None, None);
        let mut claims = Claims::default();
        let mut generators = Vec::new();
        let mut entries = Vec::new();
        let mut i = 0;
        let mut ctx: Option<FieldCtx> = None;

        // collects the matrix rows following a `gen` or `elem` line
        let read_rows = |i: &mut usize, ctx: &FieldCtx, r: usize, max: Option<usize>| -> Result<Vec<Vec<Elem>>> {
            let mut rows = Vec::new();
            while *i < lines.len() && max.map_or(true, |m| rows.len() < m) {
                let (ln, raw) = lines[*i];
                let t = raw.trim();
                if t.is_empty() || t.starts_with('#') {
                    *i += 1;
                    continue;
                }
                if t.starts_with(|c: char| c.is_ascii_alphabetic()) && !t.starts_with("a^") && !(ctx.q() == 4 && (t.starts_with('w') || t.starts_with('v'))) {
                    break;
                }
                let row = t
                    .split_whitespace()
                    .map(|tok| ctx.parse_token(tok).ok_or_else(|| perr(ln, format!("unknown field symbol '{tok}'"))))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != r {
                    return Err(perr(ln, format!("expected {r} entries, found {}", row.len())));
                }
                rows.push(row);
                *i += 1;
            }
            Ok(rows)
        };

        while i < lines.len() {
            let (ln, raw) = lines[i];
            let t = raw.trim();
            if t.is_empty() {
                i += 1;
                continue;
            }
            if let Some(c) = t.strip_prefix('#') {
                if generators.is_empty() && entries.is_empty() {
                    comments.push(c.trim_start().to_string());
                }
                i += 1;
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            match toks[0] {
                "field" if toks.len() == 3 => {
                    let p: u32 = num(ln, toks[1], "p")?;
                    let l: u32 = num(ln, toks[2], "l")?;
                    ctx = Some(FieldCtx::new(p, l).map_err(|e| perr(ln, e.to_string()))?);
                    field = Some((p, l));
                }
                "ambient" if toks.len() == 2 => r = Some(num(ln, toks[1], "r")?),
                "blockdim" if toks.len() == 2 => h = Some(num(ln, toks[1], "h")?),
                "claim" if toks.len() == 2 && toks[1] == "faithful" => claims.faithful = true,
                "claim" if toks.len() == 4 && toks[1] == "multispread" => {
                    claims.multispread = Some((num(ln, toks[2], "lambda")?, num(ln, toks[3], "mu")?));
                }
                "claim" if toks.len() == 3 => {
                    claims.n = Some(num(ln, toks[1], "n")?);
                    claims.s = Some(num(ln, toks[2], "s")?);
                }
                "gen" if toks.len() == 2 => {
                    let frob: u32 = num(ln, toks[1], "frob")?;
                    let (c, r) = header(ln, &ctx, r)?;
                    i += 1;
                    let rows = read_rows(&mut i, c, r, Some(r))?;
                    if rows.len() != r {
                        return Err(perr(ln, format!("generator needs {r} rows")));
                    }
                    generators.push((Matrix::from_rows(r, &rows)?, frob));
                    continue;
                }
                "elem" if toks.len() <= 2 => {
                    let orbit = match toks.get(1) {
                        Some(tok) => Some(num::<usize>(ln, tok, "orbit")?).filter(|&k| k > 0).map(Some).ok_or_else(|| perr(ln, "orbit size must be positive"))?,
                        None => None,
                    };
                    let (c, r) = header(ln, &ctx, r)?;
                    i += 1;
                    let rows = read_rows(&mut i, c, r, h)?;
                    entries.push(DatasetEntry { rows: Matrix::from_rows(r, &rows)?, orbit });
                    continue;
                }
                _ => return Err(perr(ln, format!("unrecognized line '{t}'"))),
            }
            i += 1;
        }
        let (p, l) = field.ok_or_else(|| perr(0, "missing field line"))?;
        Ok(Dataset {
            comments,
            p,
            l,
            r: r.ok_or_else(|| perr(0, "missing ambient line"))?,
            h: h.ok_or_else(|| perr(0, "missing blockdim line"))?,
            claims,
            generators,
            entries,
        })
    }

    pub fn read(path: &Path) -> Result<Dataset> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text: fixed line order, single spaces, LF endings.
    pub fn serialize(&self) -> String {
        let ctx = self.field().expect("dataset field was validated on construction");
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "field p={} l={}", self.p, self.l);
        let _ = writeln!(out, "ambient r={}", self.r);
        let _ = writeln!(out, "blockdim h={}", self.h);
        if let (Some(n), Some(s)) = (self.claims.n, self.claims.s) {
            let _ = writeln!(out, "claim n={n} s={s}");
        }
        if self.claims.faithful {
            out.push_str("claim faithful\n");
        }
        if let Some((lambda, mu)) = self.claims.multispread {
            let _ = writeln!(out, "claim multispread lambda={lambda} mu={mu}");
        }
        let write_rows = |out: &mut String, m: &Matrix| {
            for row in m.row_iter().take(m.rows()) {
                let toks: Vec<String> = row.iter().map(|&e| ctx.render(e)).collect();
                out.push_str(&toks.join(" "));
                out.push('\n');
            }
        };
        for (m, frob) in &self.generators {
            let _ = writeln!(out, "gen frob={frob}");
            write_rows(&mut out, m);
        }
        for e in &self.entries {
            match e.orbit {
                Some(k) => {
                    let _ = writeln!(out, "elem orbit={k}");
                }
                None => out.push_str("elem\n"),
            }
            write_rows(&mut out, &e.rows);
        }
        out
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.serialize().as_bytes()))
    }

    /// Builds a dataset listing every element of a system explicitly.
    pub fn from_system(sys: &ProjSystem, comment: &str, report: Option<&SystemReport>) -> Dataset {
        let ctx = sys.ctx();
        Dataset {
            comments: if comment.is_empty() { Vec::new() } else { vec![comment.to_string()] },
            p: ctx.p(),
            l: ctx.l(),
            r: sys.ambient(),
            h: sys.h(),
            claims: Claims {
                n: report.map(|r| r.n),
                s: report.map(|r| r.s),
                faithful: report.is_some_and(|r| r.faithful),
                multispread: None,
            },
            generators: Vec::new(),
            entries: sys.elements().iter().map(|e| DatasetEntry { rows: e.basis().clone(), orbit: None }).collect(),
        }
    }

    pub fn group(&self) -> Result<GroupCtx> {
        let ctx = self.field()?;
        let gens = self
            .generators
            .iter()
            .map(|(m, f)| SemilinearMap::new(&ctx, m.clone(), *f))
            .collect::<Result<Vec<_>>>()?;
        GroupCtx::new(&ctx, self.r, gens)
    }

    pub fn listing(&self) -> Result<Vec<ListingEntry>> {
        let ctx = self.field()?;
        Ok(self.entries.iter().map(|e| ListingEntry { space: Subspace::from_matrix(&ctx, &e.rows), orbit: e.orbit }).collect())
    }

    /// Expands the listing under the first convention that reproduces the
    /// declared orbit sizes.
    pub fn expand(&self) -> Result<(ProjSystem, Convention, GroupCtx)> {
        let ctx = self.field()?;
        let (elements, conv, group) = expand_listing_any(&self.group()?, &self.listing()?)?;
        Ok((ProjSystem::new_allow_degenerate(&ctx, self.r, self.h, elements)?, conv, group))
    }
}

fn header<'a>(line: usize, ctx: &'a Option<FieldCtx>, r: Option<usize>) -> Result<(&'a FieldCtx, usize)> {
    match (ctx, r) {
        (Some(c), Some(r)) => Ok((c, r)),
        _ => Err(perr(line, "field and ambient lines must precede matrices")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub claimed: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub digest: String,
    pub convention: Option<Convention>,
    pub checks: Vec<Check>,
    pub report: Option<SystemReport>,
    pub multispread: Option<MultispreadReport>,
    /// Human-readable explanation of the first failure.
    pub witness: Option<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// Line-oriented `key=value` records.
    pub fn to_key_values(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "file={name}");
        let _ = writeln!(out, "sha256={}", self.digest);
        if let Some(c) = self.convention {
            let _ = writeln!(out, "convention={}", c.name());
        }
        if let Some(r) = &self.report {
            let _ = writeln!(out, "n={}\ns={}\ns_min={}\nmu={}\nfaithful={}", r.n, r.s, r.s_min, r.mu, r.faithful);
        }
        if let Some(m) = &self.multispread {
            let mu = m.mu.map_or("none".to_string(), |v| v.to_string());
            let _ = writeln!(out, "lambda={}\nmultispread_mu={mu}", m.lambda);
        }
        for c in &self.checks {
            let _ = writeln!(out, "check.{}={} claimed={} computed={}", c.name, if c.pass { "pass" } else { "fail" }, c.claimed, c.computed);
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness={w}");
        }
        let _ = writeln!(out, "result={}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

fn check(name: &'static str, claimed: impl ToString, computed: impl ToString, pass: bool) -> Check {
    Check { name, claimed: claimed.to_string(), computed: computed.to_string(), pass }
}

fn render_vec(ctx: &FieldCtx, v: &[Elem]) -> String {
    v.iter().map(|&e| ctx.render(e)).collect::<Vec<_>>().join("")
}

/// Rechecks every claim of a dataset from scratch. Failures are reported
/// in the certificate, never as errors.
pub fn certify(ds: &Dataset) -> Certificate {
    let mut cert = Certificate { digest: ds.digest(), convention: None, checks: Vec::new(), report: None, multispread: None, witness: None };
    let (sys, conv, group) = match ds.expand() {
        Ok(x) => x,
        Err(e) => {
            cert.checks.push(check("listing", "declared orbits", e.to_string(), false));
            cert.witness = Some(e.to_string());
            return cert;
        }
    };
    cert.convention = Some(conv);
    cert.checks.push(check("listing", "declared orbits", conv.name(), true));
    let ctx = sys.ctx().clone();

    match group.invariance_check(&sys) {
        Ok(Ok(())) => cert.checks.push(check("invariance", "group-invariant", "group-invariant", true)),
        Ok(Err(i)) => {
            cert.checks.push(check("invariance", "group-invariant", format!("element {i} not permuted"), false));
            cert.witness.get_or_insert(format!("element {i} is not mapped into the system"));
        }
        Err(e) => cert.checks.push(check("invariance", "group-invariant", e.to_string(), false)),
    }

    let space = match sys.space() {
        Ok(s) => s,
        Err(e) => {
            cert.checks.push(check("space", "enumerable", e.to_string(), false));
            return cert;
        }
    };
    let report = sys.verify_in(&space).expect("system and space share ambient");
    if let Some(n) = ds.claims.n {
        cert.checks.push(check("n", n, report.n, n == report.n));
    }
    if let Some(s) = ds.claims.s {
        let pass = s == report.s;
        cert.checks.push(check("s", s, report.s, pass));
        if !pass {
            if let Some(w) = report.hyperplane_witness {
                cert.witness.get_or_insert(format!("hyperplane normal {} contains {} elements", render_vec(&ctx, space.point(w)), report.s));
            }
        }
    }
    if ds.claims.faithful {
        cert.checks.push(check("faithful", true, report.faithful, report.faithful));
    }
    if let Some((lambda, mu)) = ds.claims.multispread {
        let ms = sys.multispread_check_in(&space, &report).expect("system and space share ambient");
        let mu_ok = ms.mu == Some(mu);
        cert.checks.push(check("mu", mu, ms.mu.map_or("non-constant".into(), |v| v.to_string()), mu_ok));
        cert.checks.push(check("lambda", lambda, ms.lambda, ms.lambda == lambda));
        cert.checks.push(check("one_weight", report.s, ms.s_min, ms.s_min == ms.s));
        cert.checks.push(check(
            "parameter_equations",
            "hold",
            if ms.is_valid() { "hold" } else { "violated" },
            ms.is_valid(),
        ));
        if let Some(p) = ms.witness_point {
            cert.witness.get_or_insert(format!("point {} has deviating coverage", render_vec(&ctx, space.point(p))));
        }
        cert.multispread = Some(ms);
    }
    cert.report = Some(report);
    cert
}

/// Certifies every `*.psys` file of a directory, in parallel, sorted by name.
pub fn certify_dir(dir: &Path) -> Result<Vec<(String, Result<Certificate>)>> {
    use rayon::prelude::*;
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "psys"))
        .collect();
    paths.sort();
    Ok(paths
        .par_iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            (name, Dataset::read(p).map(|ds| certify(&ds)))
        })
        .collect())
}
