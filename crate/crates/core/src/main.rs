use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use additive_systems::bounds::{
    additive_griesmer_min_n, best_upper, coprime_bound, gauss_count, griesmer, griesmer_max_n, span_bound,
    span_bound_refined,
};
use additive_systems::constructions::{
    construct_oval, construct_orbit, construct_rs, line_spread, make_conic, make_hyperoval, ExtraLines, OrbitFrame,
};
use additive_systems::dataio::{certify, certify_dir, Dataset};
use additive_systems::search::{complete_multispread, disjoint_line_search, search_max, Limits, SearchProblem, Strategy};
use additive_systems::groups::GroupCtx;
use additive_systems::{Error, FieldCtx, ProjSystem};

#[derive(Parser)]
#[command(name = "addsys", version, about = "Projective systems over finite fields and additive codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify one dataset file.
    Verify { file: PathBuf },
    /// Certify every .psys file in a directory.
    CertifyAll { dir: PathBuf },
    /// Evaluate a bound.
    Bound {
        #[command(subcommand)]
        op: BoundOp,
    },
    /// Build a system and print it as a dataset.
    Construct {
        #[command(subcommand)]
        what: ConstructOp,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Search for a large system, optionally under a prescribed group.
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        s: u64,
        /// Dataset file whose generators define the group.
        #[arg(long)]
        group: Option<PathBuf>,
        /// Also allow subspaces of dimension below h.
        #[arg(long)]
        any_dim: bool,
        #[arg(long)]
        mu_cap: Option<u64>,
        #[arg(long)]
        target: Option<usize>,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Use seeded tabu search instead of exact search; needs --target.
        #[arg(long)]
        tabu_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for `target` pairwise disjoint lines of PG(4, q), at most two
    /// per hyperplane, or prove there are none.
    DisjointLines {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        target: usize,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point expansion and weight distribution of a faithful system.
    Expand { file: PathBuf },
    /// Multispread check of a dataset.
    Multispread { file: PathBuf },
    /// Complete a dataset to a multispread by adding h-spaces.
    Complete {
        file: PathBuf,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        mu: u64,
        /// Add only whole orbits under the dataset's own generators.
        #[arg(long)]
        use_group: bool,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BoundOp {
    Gauss { q: u64, t: u32 },
    Griesmer { q: u64, k: u32, d: u64 },
    AdditiveMin { q: u64, r: u32, h: u32, d: u64 },
    GriesmerMax { q: u64, r: u32, h: u32, s: u64 },
    Span { q: u64, h: u32, j: u32, s: u64, t: u64 },
    SpanRefined { q: u64, h: u32, j: u32, s: u64, t: u64, i: u32 },
    Coprime { q: u64, h: u32, j: u32, s: u64 },
    Best { q: u64, r: u32, h: u32, s: u64 },
}

#[derive(Clone, Copy, ValueEnum)]
enum Extra {
    None,
    D,
    DDPrime,
}

#[derive(Subcommand)]
enum ConstructOp {
    /// Points of a conic in PG(2, q).
    Conic { q: u32 },
    /// Conic plus nucleus, q even.
    Hyperoval { q: u32 },
    /// Line spread of GF(q)^4.
    Spread { q: u32 },
    /// h-(q^h+2, ⌊5h/2⌋, 2)_q system from the conic.
    Oval { q: u32, h: usize },
    /// h-(q^h+2, hs+⌊h/2⌋, s)_q system from Reed–Solomon codes.
    Rs { q: u32, h: usize, s: usize },
    /// 2-(q^2+2, 5, 2)_q orbit construction, q an odd prime.
    Orbit {
        q: u32,
        #[arg(long, default_value_t = 0)]
        z: i64,
        #[arg(long, default_value_t = 0)]
        zp: i64,
        #[arg(long, value_enum, default_value_t = Extra::DDPrime)]
        extra: Extra,
    },
}

fn emit(ds: &Dataset, out: Option<&PathBuf>) -> additive_systems::Result<()> {
    match out {
        Some(p) => fs::write(p, ds.serialize())?,
        None => print!("{}", ds.serialize()),
    }
    Ok(())
}

fn limits(budget: Option<f64>) -> Limits {
    budget.map(Limits::time).unwrap_or_default()
}

fn system_dataset(sys: &ProjSystem, comment: &str) -> additive_systems::Result<Dataset> {
    let rep = sys.verify()?;
    Ok(Dataset::from_system(sys, comment, Some(&rep)))
}

fn bound(op: BoundOp) -> additive_systems::Result<String> {
    Ok(match op {
        BoundOp::Gauss { q, t } => format!("value={}", gauss_count(q, t)),
        BoundOp::Griesmer { q, k, d } => format!("value={}", griesmer(q, k, d)),
        BoundOp::AdditiveMin { q, r, h, d } => format!("value={}", additive_griesmer_min_n(q, r, h, d)?),
        BoundOp::GriesmerMax { q, r, h, s } => griesmer_max_n(q, r, h, s)?.to_string(),
        BoundOp::Span { q, h, j, s, t } => span_bound(q, h, j, s, t)?.to_string(),
        BoundOp::SpanRefined { q, h, j, s, t, i } => span_bound_refined(q, h, j, s, t, i)?.to_string(),
        BoundOp::Coprime { q, h, j, s } => match coprime_bound(q, h, j, s)? {
            Some(b) => b.to_string(),
            None => "value=none".into(),
        },
        BoundOp::Best { q, r, h, s } => best_upper(q, r, h, s)?.to_string(),
    })
}

fn construct(what: ConstructOp, out: Option<&PathBuf>) -> additive_systems::Result<()> {
    let gf = FieldCtx::with_order;
    let (sys, comment) = match what {
        ConstructOp::Conic { q } | ConstructOp::Hyperoval { q } => {
            let ctx = gf(q)?;
            let oval = if matches!(what, ConstructOp::Conic { .. }) { make_conic(&ctx)? } else { make_hyperoval(&ctx)? };
            let sys = ProjSystem::new(&ctx, 3, 1, oval.points)?;
            (sys, format!("{:?} in PG(2,{q})", oval.kind).to_lowercase())
        }
        ConstructOp::Spread { q } => (line_spread(&gf(q)?, &gf(q * q)?)?, format!("line spread of GF({q})^4")),
        ConstructOp::Oval { q, h } => (construct_oval(&gf(q)?, h)?, format!("oval construction, q={q}, h={h}")),
        ConstructOp::Rs { q, h, s } => (construct_rs(&gf(q)?, h, s)?, format!("Reed-Solomon construction, q={q}, h={h}, s={s}")),
        ConstructOp::Orbit { q, z, zp, extra } => {
            let extra = match extra {
                Extra::None => ExtraLines::None,
                Extra::D => ExtraLines::DOnly,
                Extra::DDPrime => ExtraLines::DAndDPrime,
            };
            let frame = OrbitFrame::new(q)?;
            let sys = construct_orbit(q, z, zp, extra)?;
            let mut ds = system_dataset(&sys, &format!("orbit construction, q={q}, z={z}, z'={zp}"))?;
            ds.generators = vec![(frame.a, 0), (frame.b, 0)];
            return emit(&ds, out);
        }
    };
    emit(&system_dataset(&sys, &comment)?, out)
}

fn run(cli: Cli) -> additive_systems::Result<bool> {
    match cli.cmd {
        Cmd::Verify { file } => {
            let cert = certify(&Dataset::read(&file)?);
            print!("{}", cert.to_key_values(&file.display().to_string()));
            Ok(cert.passed())
        }
        Cmd::CertifyAll { dir } => {
            let mut ok = true;
            for (name, res) in certify_dir(&dir)? {
                match res {
                    Ok(cert) => {
                        ok &= cert.passed();
                        print!("{}", cert.to_key_values(&name));
                    }
                    Err(e) => {
                        ok = false;
                        println!("file={name}\nerror={e}\nresult=fail");
                    }
                }
                println!();
            }
            Ok(ok)
        }
        Cmd::Bound { op } => {
            println!("{}", bound(op)?);
            Ok(true)
        }
        Cmd::Construct { what, out } => {
            construct(what, out.as_ref())?;
            Ok(true)
        }
        Cmd::Search { q, r, h, s, group, any_dim, mu_cap, target, budget, tabu_seed, out } => {
            let ctx = FieldCtx::with_order(q)?;
            let mut problem = SearchProblem::new(&ctx, r, h, s).with_limits(limits(budget));
            problem.faithful_only = !any_dim;
            problem.mu_cap = mu_cap;
            problem.target_n = target;
            if let Some(seed) = tabu_seed {
                problem.strategy = Strategy::Tabu { seed };
            }
            let mut gens = Vec::new();
            if let Some(g) = group {
                let ds = Dataset::read(&g)?;
                if ds.field()?.q() != ctx.q() || ds.r != r {
                    return Err(Error::InvalidSystem("group file has a different field or ambient dimension".into()));
                }
                problem.group = ds.group()?;
                gens = ds.generators;
            }
            let res = search_max(&problem)?;
            eprintln!("n={} exhaustive={} nodes={} elapsed={:.3}s", res.n_best, res.exhaustive, res.nodes, res.elapsed.as_secs_f64());
            let comment = format!("search result, n={}, exhaustive={}", res.n_best, res.exhaustive);
            let mut ds = system_dataset(&res.best, &comment)?;
            ds.generators = gens;
            emit(&ds, out.as_ref())?;
            Ok(true)
        }
        Cmd::DisjointLines { q, target, budget, out } => {
            let res = disjoint_line_search(&FieldCtx::with_order(q)?, target, limits(budget))?;
            let verdict = if res.n_best >= target {
                "found"
            } else if res.exhaustive {
                "none"
            } else {
                "unknown"
            };
            println!("result={verdict}\nn_best={}\nnodes={}\nelapsed={:.3}s", res.n_best, res.nodes, res.elapsed.as_secs_f64());
            if res.n_best >= target {
                emit(&system_dataset(&res.best, &format!("{target} pairwise disjoint lines, at most two per hyperplane"))?, out.as_ref())?;
            }
            Ok(verdict != "unknown")
        }
        Cmd::Expand { file } => {
            let (sys, _, _) = Dataset::read(&file)?.expand()?;
            let space = sys.space()?;
            let wd = sys.expand_points_in(&space)?.weight_distribution(&space);
            println!("n_points={}\nmin_weight={}\nmax_weight={}", wd.n, wd.min_weight, wd.max_weight);
            let q = sys.ctx().q() as u64;
            for (w, c) in wd.full_spectrum(q) {
                println!("weight {w}={c}");
            }
            Ok(true)
        }
        Cmd::Multispread { file } => {
            let (sys, _, _) = Dataset::read(&file)?.expand()?;
            let ms = sys.multispread_check()?;
            match ms.mu {
                Some(mu) => println!("mu={mu}"),
                None => println!("mu=none\nwitness_point={}", ms.witness_point.unwrap_or(0)),
            }
            println!(
                "n={}\nk={}\nh={}\nlambda={}\ns={}\ns_min={}\ns_equation={}\nlambda_equation={}\ncongruence={}\nresult={}",
                ms.n,
                ms.k,
                ms.h,
                ms.lambda,
                ms.s,
                ms.s_min,
                ms.s_equation_holds,
                ms.lambda_equation_holds,
                ms.congruence_holds,
                if ms.is_valid() { "pass" } else { "fail" }
            );
            Ok(ms.is_valid())
        }
        Cmd::Complete { file, h, mu, use_group, budget, out } => {
            let input = Dataset::read(&file)?;
            let (sys, _, group) = input.expand()?;
            let group = if use_group { group } else { GroupCtx::trivial(sys.ctx(), sys.ambient()) };
            let res = complete_multispread(&sys, h, mu, &group, limits(budget))?;
            eprintln!("n={} added={} nodes={} elapsed={:.3}s", res.n_best, res.n_best - sys.n(), res.nodes, res.elapsed.as_secs_f64());
            let mut ds = system_dataset(&res.best, &format!("multispread completion, mu={mu}"))?;
            let ms = res.best.multispread_check()?;
            ds.claims.s = None;
            ds.claims.n = Some(res.n_best);
            ds.claims.multispread = ms.mu.map(|m| (ms.lambda, m));
            if use_group {
                ds.generators = input.generators;
            }
            emit(&ds, out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
