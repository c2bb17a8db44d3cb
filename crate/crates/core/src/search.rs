//! Exact search: branch and bound over group orbits of subspaces for
//! large projective systems, and exact cover for completing partial
//! systems to multispreads.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::bounds::{best_upper, gauss_count};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::geometry::{ProjSpace, Subspace, SubspaceIter};
use crate::groups::GroupCtx;
use crate::projsys::ProjSystem;

/// Node and wall-clock budgets. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

impl Limits {
    pub fn time(secs: f64) -> Self {
        Limits { nodes: None, time: Some(Duration::from_secs_f64(secs)) }
    }

    fn validate(&self) -> Result<()> {
        if self.nodes == Some(0) || self.time == Some(Duration::ZERO) {
            return Err(Error::InvalidSystem("search limits must be positive".into()));
        }
        Ok(())
    }
}

/// Maximize `n` for a projective `h-(n, r, s)_q` system that is a union of
/// orbits under `group`.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub ctx: FieldCtx,
    pub r: usize,
    pub h: usize,
    pub s: u64,
    pub group: GroupCtx,
    /// Restrict to `h`-spaces. Otherwise orbits of smaller subspaces are
    /// also available, after all `h`-space orbits.
    pub faithful_only: bool,
    /// Maximum number of elements through any point.
    pub mu_cap: Option<u64>,
    pub limits: Limits,
    /// Stop as soon as a system of this size is found.
    pub target_n: Option<usize>,
    /// Elements fixed in advance; they need not form whole orbits.
    pub seed: Vec<Subspace>,
    pub strategy: Strategy,
}

/// How [`search_max`] explores the orbit multiplicities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// [`Strategy::Hyperplanes`] when a target is set, else [`Strategy::Orbits`].
    #[default]
    Auto,
    /// Depth-first over orbits in representative order, each taken as often
    /// as it fits, with capacity-based cutoffs.
    Orbits,
    /// Needs a target. Repeatedly picks the open hyperplane with the fewest
    /// usable orbits and either adds one of them or closes the hyperplane,
    /// writing off its remaining capacity. Cut when the capacity left on
    /// open hyperplanes cannot hold the target.
    Hyperplanes,
    /// Needs a target. Seeded tabu search over swaps of equal-size orbits
    /// at fixed `n`, minimizing the total excess over the capacities, with
    /// restarts. Never proves optimality.
    Tabu { seed: u64 },
}

impl SearchProblem {
    pub fn new(ctx: &FieldCtx, r: usize, h: usize, s: u64) -> Self {
        SearchProblem {
            ctx: ctx.clone(),
            r,
            h,
            s,
            group: GroupCtx::trivial(ctx, r),
            faithful_only: true,
            mu_cap: None,
            limits: Limits::default(),
            target_n: None,
            seed: Vec::new(),
            strategy: Strategy::Auto,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_group(mut self, group: GroupCtx) -> Self {
        self.group = group;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_target(mut self, n: usize) -> Self {
        self.target_n = Some(n);
        self
    }

    pub fn with_seed(mut self, seed: Vec<Subspace>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mu_cap(mut self, mu: u64) -> Self {
        self.mu_cap = Some(mu);
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: ProjSystem,
    pub n_best: usize,
    /// The search space was fully explored, or the incumbent meets a
    /// proven upper bound.
    pub exhaustive: bool,
    pub nodes: u64,
    pub elapsed: Duration,
    /// Orbit representatives with their orbit sizes and multiplicities;
    /// expanding these after the seed gives `best`.
    pub orbits: Vec<(Subspace, usize, usize)>,
}

/// An orbit of subspaces with its incidences.
#[derive(Clone, Debug)]
struct OrbitVar {
    elements: Vec<Subspace>,
    hyper: Vec<(u32, u32)>,
    points: Vec<(u32, u32)>,
}

fn tally(ids: impl Iterator<Item = u32>, size: usize) -> Vec<(u32, u32)> {
    let mut counts = vec![0u32; size];
    for i in ids {
        counts[i as usize] += 1;
    }
    counts.into_iter().enumerate().filter(|&(_, c)| c > 0).map(|(i, c)| (i as u32, c)).collect()
}

fn orbit_table(group: &GroupCtx, space: &ProjSpace, dims: &[usize], with_points: bool) -> Result<Vec<OrbitVar>> {
    let ctx = space.ctx();
    let r = space.ambient();
    let mut out = Vec::new();
    for &d in dims {
        let mut seen = HashSet::new();
        for s in SubspaceIter::new(ctx, r, d) {
            if seen.contains(&s) {
                continue;
            }
            let elements = group.orbit(&s)?;
            seen.extend(elements.iter().cloned());
            let hyper = tally(elements.iter().flat_map(|e| space.hyperplanes_containing(e)), space.len());
            let points = if with_points {
                tally(elements.iter().flat_map(|e| space.points_of(e)), space.len())
            } else {
                Vec::new()
            };
            out.push(OrbitVar { elements, hyper, points });
        }
    }
    Ok(out)
}

struct Clock {
    start: Instant,
    limits: Limits,
    nodes: u64,
    stopped: bool,
}

impl Clock {
    fn new(limits: Limits) -> Self {
        Clock { start: Instant::now(), limits, nodes: 0, stopped: false }
    }

    /// Counts a node; returns false once a budget runs out.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.limits.nodes.is_some_and(|m| self.nodes > m) {
            self.stopped = true;
        }
        if self.nodes % 1024 == 0 && self.limits.time.is_some_and(|t| self.start.elapsed() > t) {
            self.stopped = true;
        }
        !self.stopped
    }
}

struct MaxSearch<'a> {
    orbits: &'a [OrbitVar],
    hres: Vec<i64>,
    pres: Option<Vec<i64>>,
    /// Total hyperplane capacity left.
    total: i64,
    /// Capacity consumed by one `h`-space.
    per_elem: i64,
    stack: Vec<usize>,
    n: usize,
    best: Vec<usize>,
    best_n: usize,
    goal: usize,
    clock: Clock,
    done: bool,
}

impl MaxSearch<'_> {
    fn max_mult(&self, o: usize) -> i64 {
        let v = &self.orbits[o];
        let mut m = i64::MAX;
        for &(i, c) in &v.hyper {
            m = m.min(self.hres[i as usize] / c as i64);
        }
        if let Some(p) = &self.pres {
            for &(i, c) in &v.points {
                m = m.min(p[i as usize] / c as i64);
            }
        }
        m
    }

    fn apply(&mut self, o: usize, sign: i64) {
        let v = &self.orbits[o];
        for &(i, c) in &v.hyper {
            self.hres[i as usize] -= sign * c as i64;
            self.total -= sign * c as i64;
        }
        if let Some(p) = self.pres.as_mut() {
            for &(i, c) in &v.points {
                p[i as usize] -= sign * c as i64;
            }
        }
        if sign > 0 {
            self.stack.push(o);
            self.n += v.elements.len();
        } else {
            self.stack.pop();
            self.n -= v.elements.len();
        }
    }

    fn explore(&mut self, cands: &[usize]) {
        if self.done || !self.clock.tick() {
            self.done = true;
            return;
        }
        if self.n > self.best_n {
            self.best_n = self.n;
            self.best = self.stack.clone();
            if self.best_n >= self.goal {
                self.done = true;
                return;
            }
        }
        let mults: Vec<i64> = cands.iter().map(|&c| self.max_mult(c)).collect();
        let mut reach: usize = cands.iter().zip(&mults).map(|(&c, &m)| m as usize * self.orbits[c].elements.len()).sum();
        let cap = (self.total / self.per_elem) as usize;
        for (i, &c) in cands.iter().enumerate() {
            if self.n + reach.min(cap) <= self.best_n {
                return;
            }
            self.apply(c, 1);
            let next: Vec<usize> = cands[i..].iter().copied().filter(|&d| self.max_mult(d) > 0).collect();
            self.explore(&next);
            self.apply(c, -1);
            if self.done {
                return;
            }
            reach -= mults[i] as usize * self.orbits[c].elements.len();
        }
    }
}

/// State for [`Strategy::Hyperplanes`]. Rows `0..nh` are hyperplanes,
/// the rest are points when a multiplicity cap is set.
struct HyperSearch<'a> {
    orbits: &'a [OrbitVar],
    /// `(orbit, count)` for every orbit meeting each row.
    touch: Vec<Vec<(u32, u32)>>,
    /// Row incidences of each orbit: hyperplanes, then shifted points.
    rows: Vec<Vec<(u32, u32)>>,
    nh: usize,
    res: Vec<i64>,
    closed: Vec<bool>,
    open_total: i64,
    per_elem: i64,
    /// Rows of the orbit whose residual is below its count.
    blocked: Vec<u32>,
    banned: Vec<u32>,
    /// Usable orbits meeting each hyperplane.
    usable: Vec<u32>,
    stack: Vec<usize>,
    n: usize,
    target: usize,
    best: Vec<usize>,
    best_n: usize,
    clock: Clock,
}

impl HyperSearch<'_> {
    fn avail(&self, o: usize) -> bool {
        self.blocked[o] == 0 && self.banned[o] == 0
    }

    fn toggle(&mut self, o: usize, on: bool) {
        for &(hp, _) in &self.orbits[o].hyper {
            if on {
                self.usable[hp as usize] += 1;
            } else {
                self.usable[hp as usize] -= 1;
            }
        }
    }

    fn set_res(&mut self, row: usize, new: i64) {
        let old = self.res[row];
        self.res[row] = new;
        for k in 0..self.touch[row].len() {
            let (o, c) = self.touch[row][k];
            let (o, c) = (o as usize, c as i64);
            let (was, now) = (old < c, new < c);
            if was == now {
                continue;
            }
            let before = self.avail(o);
            if now {
                self.blocked[o] += 1;
            } else {
                self.blocked[o] -= 1;
            }
            let after = self.avail(o);
            if before != after {
                self.toggle(o, after);
            }
        }
    }

    fn ban(&mut self, o: usize, on: bool) {
        let before = self.avail(o);
        if on {
            self.banned[o] += 1;
        } else {
            self.banned[o] -= 1;
        }
        let after = self.avail(o);
        if before != after {
            self.toggle(o, after);
        }
    }

    fn add(&mut self, o: usize, sign: i64) {
        for k in 0..self.rows[o].len() {
            let (row, c) = self.rows[o][k];
            let row = row as usize;
            if row < self.nh {
                self.open_total -= sign * c as i64;
            }
            self.set_res(row, self.res[row] - sign * c as i64);
        }
        if sign > 0 {
            self.stack.push(o);
            self.n += self.orbits[o].elements.len();
        } else {
            self.stack.pop();
            self.n -= self.orbits[o].elements.len();
        }
    }

    fn close(&mut self, hp: usize, on: bool, old: i64) {
        if on {
            self.closed[hp] = true;
            self.open_total -= old;
            self.set_res(hp, 0);
        } else {
            self.closed[hp] = false;
            self.open_total += old;
            self.set_res(hp, old);
        }
    }

    /// Returns true when the target is reached or the budget ran out.
    fn solve(&mut self) -> bool {
        if !self.clock.tick() {
            return true;
        }
        if self.n > self.best_n {
            self.best_n = self.n;
            self.best = self.stack.clone();
        }
        if self.n >= self.target {
            return true;
        }
        if self.open_total < self.per_elem * (self.target - self.n) as i64 {
            return false;
        }
        let pick = (0..self.nh).filter(|&hp| !self.closed[hp] && self.res[hp] > 0).min_by_key(|&hp| self.usable[hp]);
        let Some(hp) = pick else { return false };
        let opts: Vec<usize> = self.touch[hp].iter().map(|&(o, _)| o as usize).filter(|&o| self.avail(o)).collect();
        let mut stop = false;
        let mut banned = Vec::new();
        for &o in &opts {
            self.add(o, 1);
            stop = self.solve();
            self.add(o, -1);
            if stop {
                break;
            }
            self.ban(o, true);
            banned.push(o);
        }
        if !stop {
            let old = self.res[hp];
            if self.open_total - old >= self.per_elem * (self.target - self.n) as i64 {
                self.close(hp, true, old);
                stop = self.solve();
                self.close(hp, false, old);
            }
        }
        for o in banned {
            self.ban(o, false);
        }
        stop
    }
}

fn hyperplane_search(
    orbits: &[OrbitVar],
    hres: Vec<i64>,
    pres: Option<Vec<i64>>,
    per_elem: i64,
    seed_n: usize,
    target: usize,
    clock: Clock,
) -> (Vec<usize>, usize, Clock) {
    let nh = hres.len();
    let rows: Vec<Vec<(u32, u32)>> = orbits
        .iter()
        .map(|v| {
            let mut r = v.hyper.clone();
            if pres.is_some() {
                r.extend(v.points.iter().map(|&(p, c)| (p + nh as u32, c)));
            }
            r
        })
        .collect();
    let mut res = hres;
    res.extend(pres.into_iter().flatten());
    let mut touch = vec![Vec::new(); res.len()];
    for (o, r) in rows.iter().enumerate() {
        for &(row, c) in r {
            touch[row as usize].push((o as u32, c));
        }
    }
    let blocked: Vec<u32> = rows.iter().map(|r| r.iter().filter(|&&(row, c)| res[row as usize] < c as i64).count() as u32).collect();
    let mut usable = vec![0u32; nh];
    for (o, v) in orbits.iter().enumerate() {
        if blocked[o] == 0 {
            for &(hp, _) in &v.hyper {
                usable[hp as usize] += 1;
            }
        }
    }
    let open_total = res[..nh].iter().sum();
    let mut search = HyperSearch {
        orbits,
        touch,
        rows,
        nh,
        res,
        closed: vec![false; nh],
        open_total,
        per_elem,
        blocked,
        banned: vec![0; orbits.len()],
        usable,
        stack: Vec::new(),
        n: seed_n,
        target,
        best: Vec::new(),
        best_n: seed_n,
        clock,
    };
    search.solve();
    (search.best, search.best_n, search.clock)
}

struct Tabu {
    /// Row incidences as in [`HyperSearch`].
    rows: Vec<Vec<(u32, u32)>>,
    cap: Vec<i64>,
    load: Vec<i64>,
    excess: i64,
    chosen: Vec<usize>,
}

impl Tabu {
    fn shift(&mut self, o: usize, sign: i64) {
        for &(row, c) in &self.rows[o] {
            let row = row as usize;
            let before = (self.load[row] - self.cap[row]).max(0);
            self.load[row] += sign * c as i64;
            self.excess += (self.load[row] - self.cap[row]).max(0) - before;
        }
    }

    fn add_delta(&self, o: usize) -> i64 {
        self.rows[o]
            .iter()
            .map(|&(row, c)| {
                let (l, cap) = (self.load[row as usize], self.cap[row as usize]);
                (l + c as i64 - cap).max(0) - (l - cap).max(0)
            })
            .sum()
    }
}

fn tabu_search(
    orbits: &[OrbitVar],
    hres: Vec<i64>,
    pres: Option<Vec<i64>>,
    target_extra: usize,
    seed: u64,
    clock: &mut Clock,
) -> Option<Vec<usize>> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    let nh = hres.len();
    let rows: Vec<Vec<(u32, u32)>> = orbits
        .iter()
        .map(|v| {
            let mut r = v.hyper.clone();
            if pres.is_some() {
                r.extend(v.points.iter().map(|&(p, c)| (p + nh as u32, c)));
            }
            r
        })
        .collect();
    let mut cap = hres;
    cap.extend(pres.into_iter().flatten());
    let size = |o: usize| orbits[o].elements.len();
    let usable: Vec<usize> = (0..orbits.len()).filter(|&o| rows[o].iter().all(|&(row, c)| cap[row as usize] >= c as i64)).collect();
    let mut by_size: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &o in &usable {
        by_size.entry(size(o)).or_default().push(o);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let restart_len = 20_000u64;
    loop {
        // random start with exactly the required number of elements
        let mut order = usable.clone();
        order.shuffle(&mut rng);
        let mut chosen = Vec::new();
        let mut n = 0;
        for &o in &order {
            if n + size(o) <= target_extra {
                chosen.push(o);
                n += size(o);
            }
        }
        if n != target_extra {
            return None;
        }
        let mut st = Tabu { rows: rows.clone(), cap: cap.clone(), load: vec![0; cap.len()], excess: 0, chosen: Vec::new() };
        for &o in &chosen {
            st.shift(o, 1);
        }
        st.chosen = chosen;
        let mut tabu_until = vec![0u64; orbits.len()];
        let mut best_excess = st.excess;
        for it in 0..restart_len {
            if st.excess == 0 {
                return Some(st.chosen);
            }
            if !clock.tick() {
                return None;
            }
            let mut best: Option<(i64, usize, usize)> = None;
            let mut ties = 0u32;
            for pos in 0..st.chosen.len() {
                let a = st.chosen[pos];
                st.shift(a, -1);
                let removed = st.excess;
                for &b in &by_size[&size(a)] {
                    if b == a {
                        continue;
                    }
                    let after = removed + st.add_delta(b);
                    if tabu_until[b] > it && after >= best_excess {
                        continue;
                    }
                    match best {
                        Some((e, _, _)) if after > e => {}
                        Some((e, _, _)) if after == e => {
                            ties += 1;
                            if rng.gen_range(0..ties) == 0 {
                                best = Some((after, pos, b));
                            }
                        }
                        _ => {
                            ties = 1;
                            best = Some((after, pos, b));
                        }
                    }
                }
                st.shift(a, 1);
            }
            let Some((_, pos, b)) = best else { break };
            let a = st.chosen[pos];
            st.shift(a, -1);
            st.shift(b, 1);
            st.chosen[pos] = b;
            tabu_until[a] = it + 5 + rng.gen_range(0..10);
            best_excess = best_excess.min(st.excess);
        }
    }
}

/// Branch and bound over orbit multiplicities.
///
/// Candidates are tried in the enumeration order of their representatives
/// and each is taken as often as it fits before moving on. A branch is cut
/// when the remaining hyperplane capacity, or the summed multiplicities
/// still available, cannot beat the incumbent.
pub fn search_max(problem: &SearchProblem) -> Result<SearchOutcome> {
    problem.limits.validate()?;
    let SearchProblem { ctx, r, h, s, .. } = problem;
    let (r, h) = (*r, *h);
    if h == 0 || h > r {
        return Err(Error::InvalidSystem(format!("need 1 <= h <= r, got h={h}, r={r}")));
    }
    let space = ProjSpace::new(ctx, r)?;
    let dims: Vec<usize> = if problem.faithful_only { vec![h] } else { (1..=h).rev().collect() };
    let orbits = orbit_table(&problem.group, &space, &dims, problem.mu_cap.is_some())?;

    let mut hres = vec![*s as i64; space.len()];
    let mut pres = problem.mu_cap.map(|m| vec![m as i64; space.len()]);
    for e in &problem.seed {
        if e.dim() == 0 || e.dim() > h || e.ambient() != r {
            return Err(Error::InvalidSystem("seed element has the wrong shape".into()));
        }
        for i in space.hyperplanes_containing(e) {
            hres[i as usize] -= 1;
        }
        if let Some(p) = pres.as_mut() {
            for i in space.points_of(e) {
                p[i as usize] -= 1;
            }
        }
    }
    if hres.iter().chain(pres.iter().flatten()).any(|&x| x < 0) {
        return Err(Error::InvalidSystem("seed already violates the constraints".into()));
    }

    let q = ctx.q() as u64;
    let proven = if r > h { best_upper(q, r as u32, h as u32, *s).ok().map(|b| b.value as usize) } else { None };
    let goal = match (problem.target_n, proven) {
        (Some(t), Some(p)) => t.min(p),
        (Some(t), None) => t,
        (None, Some(p)) => p,
        (None, None) => usize::MAX,
    };
    let seed_n = problem.seed.len();
    let per_elem = gauss_count(q, (r - h) as u32).max(1) as i64;
    let strategy = match (problem.strategy, problem.target_n) {
        (Strategy::Auto, Some(_)) => Strategy::Hyperplanes,
        (Strategy::Auto, None) => Strategy::Orbits,
        (st, _) => st,
    };
    let clock = Clock::new(problem.limits);
    let (best_stack, best_n, clock) = match strategy {
        Strategy::Hyperplanes => {
            if goal == usize::MAX {
                return Err(Error::InvalidSystem("hyperplane strategy needs a target".into()));
            }
            hyperplane_search(&orbits, hres, pres, per_elem, seed_n, goal, clock)
        }
        Strategy::Tabu { seed } => {
            if goal == usize::MAX {
                return Err(Error::InvalidSystem("tabu strategy needs a target".into()));
            }
            let mut clock = clock;
            let found = if goal > seed_n { tabu_search(&orbits, hres, pres, goal - seed_n, seed, &mut clock) } else { Some(Vec::new()) };
            match found {
                Some(mut stack) => {
                    stack.sort_unstable();
                    let n = seed_n + stack.iter().map(|&o| orbits[o].elements.len()).sum::<usize>();
                    (stack, n, clock)
                }
                None => {
                    clock.stopped = true;
                    (Vec::new(), seed_n, clock)
                }
            }
        }
        _ => {
            let total = hres.iter().sum();
            let mut search = MaxSearch {
                orbits: &orbits,
                hres,
                pres,
                total,
                per_elem,
                stack: Vec::new(),
                n: seed_n,
                best: Vec::new(),
                best_n: seed_n,
                goal,
                clock,
                done: false,
            };
            let cands: Vec<usize> = (0..orbits.len()).filter(|&o| search.max_mult(o) > 0).collect();
            if seed_n < goal {
                search.explore(&cands);
            }
            (search.best, search.best_n, search.clock)
        }
    };
    let exhaustive = !clock.stopped && (proven.is_some_and(|p| best_n >= p) || best_n < goal);

    let mut elements = problem.seed.clone();
    let mut summary: Vec<(Subspace, usize, usize)> = Vec::new();
    for &o in &best_stack {
        elements.extend(orbits[o].elements.iter().cloned());
        match summary.last_mut() {
            Some(last) if last.0 == orbits[o].elements[0] => last.2 += 1,
            _ => summary.push((orbits[o].elements[0].clone(), orbits[o].elements.len(), 1)),
        }
    }
    let best = ProjSystem::new_allow_degenerate(ctx, r, h, elements)?;
    Ok(SearchOutcome {
        n_best: best.n(),
        best,
        exhaustive,
        nodes: clock.nodes,
        elapsed: clock.start.elapsed(),
        orbits: summary,
    })
}

/// Whether some `h`-space can be added to `sys` keeping every hyperplane
/// at most `s`. With `depth > 1`, asks for `depth` additional elements
/// within the given limits; an exhausted budget counts as `false`.
pub fn extendability_check(sys: &ProjSystem, s: u64, depth: usize, limits: Limits) -> Result<bool> {
    let problem = SearchProblem::new(sys.ctx(), sys.ambient(), sys.h(), s)
        .with_seed(sys.elements().to_vec())
        .with_limits(limits)
        .with_target(sys.n() + depth.max(1));
    match search_max(&problem) {
        Ok(out) => Ok(out.n_best >= sys.n() + depth.max(1)),
        Err(Error::InvalidSystem(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

struct CoverSearch<'a> {
    /// `(point, count)` incidences of each orbit.
    rows: &'a [Vec<(u32, u32)>],
    /// `(orbit, count)` for every orbit through each point.
    through: Vec<Vec<(u32, u32)>>,
    need: Vec<i64>,
    /// Points of each orbit whose need is below its count there.
    blocked: Vec<u32>,
    banned: Vec<bool>,
    chosen: Vec<u32>,
    clock: Clock,
}

impl CoverSearch<'_> {
    fn usable(&self, b: u32) -> bool {
        self.blocked[b as usize] == 0 && !self.banned[b as usize]
    }

    fn set_need(&mut self, p: usize, new: i64) {
        let old = self.need[p];
        self.need[p] = new;
        for &(b, c) in &self.through[p] {
            let c = c as i64;
            match (old < c, new < c) {
                (false, true) => self.blocked[b as usize] += 1,
                (true, false) => self.blocked[b as usize] -= 1,
                _ => {}
            }
        }
    }

    fn add(&mut self, b: u32, sign: i64) {
        for &(p, c) in &self.rows[b as usize] {
            self.set_need(p as usize, self.need[p as usize] - sign * c as i64);
        }
        if sign > 0 {
            self.chosen.push(b);
        } else {
            self.chosen.pop();
        }
    }

    /// Returns true when a cover was found.
    fn solve(&mut self) -> bool {
        if !self.clock.tick() {
            return false;
        }
        let mut pick: Option<Vec<u32>> = None;
        for p in 0..self.need.len() {
            if self.need[p] == 0 {
                continue;
            }
            let opts: Vec<u32> = self.through[p].iter().map(|&(b, _)| b).filter(|&b| self.usable(b)).collect();
            if opts.is_empty() {
                return false;
            }
            if pick.as_ref().is_none_or(|o| opts.len() < o.len()) {
                pick = Some(opts);
            }
        }
        let Some(opts) = pick else { return true };
        let mut tried = Vec::new();
        for &b in &opts {
            self.add(b, 1);
            if self.solve() {
                return true;
            }
            self.add(b, -1);
            if self.clock.stopped {
                break;
            }
            self.banned[b as usize] = true;
            tried.push(b);
        }
        for b in tried {
            self.banned[b as usize] = false;
        }
        false
    }
}

/// Adds `h`-spaces of `GF(q)^k` to `partial` until every point is covered
/// with weight exactly `mu`, where an element of dimension `d` has weight
/// `q^(h - d)`. The same space may be added more than once.
///
/// With a nontrivial `group`, only whole orbits are added; `partial` should
/// then be invariant, or no point coverage can come out constant.
///
/// Errors with [`Error::Infeasible`] when no completion exists and with
/// [`Error::BudgetExhausted`] when the limits stop the search first.
pub fn complete_multispread(partial: &ProjSystem, h: usize, mu: u64, group: &GroupCtx, limits: Limits) -> Result<SearchOutcome> {
    limits.validate()?;
    let ctx = partial.ctx();
    let k = partial.ambient();
    if h == 0 || h > k {
        return Err(Error::InvalidSystem(format!("need 1 <= h <= k, got h={h}, k={k}")));
    }
    if group.ambient() != k {
        return Err(Error::DimensionMismatch { expected: k, got: group.ambient() });
    }
    let space = ProjSpace::new(ctx, k)?;
    let q = ctx.q() as u64;
    let mut need = vec![mu as i64; space.len()];
    for e in partial.elements() {
        if e.dim() > h {
            return Err(Error::InvalidSystem(format!("element of dimension {} exceeds h={h}", e.dim())));
        }
        let w = q.pow((h - e.dim()) as u32) as i64;
        for p in space.points_of(e) {
            need[p as usize] -= w;
        }
    }
    if let Some(p) = need.iter().position(|&d| d < 0) {
        return Err(Error::Infeasible(format!("point {p} is already covered more than {mu} times")));
    }
    let orbits = orbit_table(group, &space, &[h], true)?;
    let rows: Vec<Vec<(u32, u32)>> = orbits.iter().map(|o| o.points.clone()).collect();
    let mut through = vec![Vec::new(); space.len()];
    for (b, r) in rows.iter().enumerate() {
        for &(p, c) in r {
            through[p as usize].push((b as u32, c));
        }
    }
    let blocked = rows.iter().map(|r| r.iter().filter(|&&(p, c)| need[p as usize] < c as i64).count() as u32).collect();
    let mut search = CoverSearch {
        rows: &rows,
        through,
        need,
        blocked,
        banned: vec![false; rows.len()],
        chosen: Vec::new(),
        clock: Clock::new(limits),
    };
    if !search.solve() {
        return Err(if search.clock.stopped {
            Error::BudgetExhausted { nodes: search.clock.nodes }
        } else {
            Error::Infeasible(format!("no completion to weighted coverage {mu}"))
        });
    }
    let mut elements = partial.elements().to_vec();
    let mut summary: Vec<(Subspace, usize, usize)> = Vec::new();
    let mut chosen = search.chosen.clone();
    chosen.sort_unstable();
    for &b in &chosen {
        let o = &orbits[b as usize];
        elements.extend(o.elements.iter().cloned());
        match summary.last_mut() {
            Some(last) if last.0 == o.elements[0] => last.2 += 1,
            _ => summary.push((o.elements[0].clone(), o.elements.len(), 1)),
        }
    }
    let best = ProjSystem::new_allow_degenerate(ctx, k, h, elements)?;
    Ok(SearchOutcome {
        n_best: best.n(),
        best,
        exhaustive: true,
        nodes: search.clock.nodes,
        elapsed: search.clock.start.elapsed(),
        orbits: summary,
    })
}

fn bits_and(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x &= y);
}

fn bits_count(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

fn bits_meet(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Candidate lines for [`disjoint_line_search`] with their incidences.
struct LineTable {
    hyps: Vec<Vec<u32>>,
    /// Candidates disjoint from each candidate.
    compat: Vec<Vec<u64>>,
    /// Candidates inside each hyperplane.
    inside: Vec<Vec<u64>>,
    /// Candidates grouped by the point where they meet each hyperplane.
    classes: Vec<Vec<Vec<u64>>>,
    /// Nontrivial collineations fixing each of the three fixed lines, as
    /// permutations of the candidates.
    perms: Vec<Vec<u32>>,
}

struct LineSearch<'a> {
    t: &'a LineTable,
    load: Vec<u8>,
    saturated: Vec<u32>,
    /// Hyperplane lists of the chosen lines, fixed ones included.
    placed: Vec<Vec<u32>>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    target: usize,
    clock: Clock,
    found: bool,
}

impl LineSearch<'_> {
    /// The tightest partition of the remaining candidates: by the
    /// hyperplane they share with a placed line, or by the point where
    /// they meet a full hyperplane. Each class takes at most one more
    /// line. Returns `None` when some partition has too few classes,
    /// otherwise the smallest class of the tightest partition.
    fn tightest(&self, p: &[u64], need: usize) -> Option<Vec<u64>> {
        let mut best: Option<(usize, usize, Vec<u64>)> = None;
        let mut consider = |classes: &mut dyn Iterator<Item = &Vec<u64>>| -> bool {
            let mut k = 0;
            let mut small: Option<(usize, Vec<u64>)> = None;
            for c in classes {
                let meet: Vec<u64> = c.iter().zip(p).map(|(x, y)| x & y).collect();
                let size = bits_count(&meet);
                if size > 0 {
                    k += 1;
                    if small.as_ref().is_none_or(|s| size < s.0) {
                        small = Some((size, meet));
                    }
                }
            }
            if k < need {
                return false;
            }
            if let Some((size, meet)) = small {
                if best.as_ref().is_none_or(|b| (k - need, size) < (b.0, b.1)) {
                    best = Some((k - need, size, meet));
                }
            }
            true
        };
        for hs in &self.placed {
            let load = &self.load;
            let inside = &self.t.inside;
            if !consider(&mut hs.iter().filter(|&&h| load[h as usize] < 2).map(|&h| &inside[h as usize])) {
                return None;
            }
        }
        for &h in &self.saturated {
            if !consider(&mut self.t.classes[h as usize].iter()) {
                return None;
            }
        }
        best.map(|b| b.2)
    }

    /// Adds candidate `c`, narrowing `next` to what stays compatible.
    fn place(&mut self, c: usize, next: &mut [u64]) -> usize {
        bits_and(next, &self.t.compat[c]);
        let mark = self.saturated.len();
        for &h in &self.t.hyps[c] {
            self.load[h as usize] += 1;
            if self.load[h as usize] == 2 {
                self.saturated.push(h);
                next.iter_mut().zip(&self.t.inside[h as usize]).for_each(|(x, y)| *x &= !y);
            }
        }
        self.chosen.push(c);
        self.placed.push(self.t.hyps[c].clone());
        mark
    }

    fn unplace(&mut self, c: usize, mark: usize) {
        self.placed.pop();
        self.chosen.pop();
        for &h in &self.t.hyps[c] {
            self.load[h as usize] -= 1;
        }
        self.saturated.truncate(mark);
    }

    /// Common entry checks; returns the class to branch on, if any.
    fn enter(&mut self, p: &[u64]) -> Option<Vec<u64>> {
        if self.found || !self.clock.tick() {
            return None;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.chosen.len() >= self.target {
            self.found = true;
            return None;
        }
        let need = self.target - self.chosen.len();
        if bits_count(p) < need {
            return None;
        }
        self.tightest(p, need)
    }

    /// Branches on orbit representatives under `group` (permutations of
    /// the candidates fixing every placed line), excluding the orbits
    /// already handled, until the group is trivial.
    fn explore_sym(&mut self, p: Vec<u64>, group: Vec<usize>) {
        if group.is_empty() {
            return self.explore(p);
        }
        if self.enter(&p).is_none() {
            return;
        }
        let mut rest = p;
        while let Some(w) = rest.iter().position(|&x| x != 0) {
            let c = w * 64 + rest[w].trailing_zeros() as usize;
            rest[w] &= rest[w] - 1;
            for &g in &group {
                let d = self.t.perms[g][c] as usize;
                rest[d / 64] &= !(1u64 << (d % 64));
            }
            let mut next = rest.clone();
            let mark = self.place(c, &mut next);
            let sub: Vec<usize> = group.iter().copied().filter(|&g| self.t.perms[g][c] as usize == c).collect();
            self.explore_sym(next, sub);
            self.unplace(c, mark);
            if self.found || self.clock.stopped {
                return;
            }
        }
    }

    fn explore(&mut self, p: Vec<u64>) {
        let Some(class) = self.enter(&p) else { return };
        let mut rest = p;
        for (w, &word) in class.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let c = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                rest[w] &= !(1u64 << (c % 64));
                let mut next = rest.clone();
                let mark = self.place(c, &mut next);
                self.explore(next);
                self.unplace(c, mark);
                if self.found || self.clock.stopped {
                    return;
                }
            }
        }
        // no line from this class
        self.explore(rest);
    }
}

/// Linear maps fixing `<e0,e1>`, `<e2,e3>` and `<e0+e2,e4>`, or swapping
/// the first two. Row vectors act on the right.
fn fixed_line_stabilizer(ctx: &FieldCtx) -> Vec<crate::groups::SemilinearMap> {
    use crate::field::Elem;
    let all: Vec<Elem> = ctx.elements().collect();
    let units: Vec<Elem> = all.iter().copied().filter(|e| !e.is_zero()).collect();
    let mut out = Vec::new();
    // scalars act trivially, so the shared diagonal entry is 1
    let c = Elem::ONE;
    {
        for &a1 in &all {
            for &a2 in &units {
                for &b1 in &all {
                    for &b2 in &units {
                        for &t in &all {
                            for &lam in &units {
                                for swap in [false, true] {
                                    let mut m = crate::geometry::Matrix::zeros(5, 5);
                                    let (lo, hi) = if swap { (2, 0) } else { (0, 2) };
                                    m.set(0, lo, c);
                                    m.set(1, lo, a1);
                                    m.set(1, lo + 1, a2);
                                    m.set(2, hi, c);
                                    m.set(3, hi, b1);
                                    m.set(3, hi + 1, b2);
                                    m.set(4, 0, t);
                                    m.set(4, 2, t);
                                    m.set(4, 4, lam);
                                    out.push(crate::groups::SemilinearMap::linear(ctx, m).expect("invertible"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Looks for `target` pairwise disjoint lines of `PG(4, q)` with at most
/// two in any hyperplane, i.e. a faithful `2-(target, 5, 2)_q` system with
/// `mu = 1`.
///
/// The collineation group is transitive on pairs of disjoint lines, and
/// the stabilizer of such a pair is transitive on the lines missing both
/// and their span, so the first three lines are fixed. `exhaustive` on the
/// outcome means no such system exists.
pub fn disjoint_line_search(ctx: &FieldCtx, target: usize, limits: Limits) -> Result<SearchOutcome> {
    disjoint_lines(ctx, target, limits, true)
}

fn disjoint_lines(ctx: &FieldCtx, target: usize, limits: Limits, symmetry: bool) -> Result<SearchOutcome> {
    limits.validate()?;
    let r = 5;
    let space = ProjSpace::new(ctx, r)?;
    let unit = |i: usize| {
        let mut v = vec![crate::field::Elem::ZERO; r];
        v[i] = crate::field::Elem::ONE;
        v
    };
    let mut mixed = unit(0);
    mixed[2] = crate::field::Elem::ONE;
    let fixed = [
        Subspace::from_rows(ctx, r, &[unit(0), unit(1)])?,
        Subspace::from_rows(ctx, r, &[unit(2), unit(3)])?,
        Subspace::from_rows(ctx, r, &[mixed, unit(4)])?,
    ];
    let npts = space.len();
    let words_p = npts.div_ceil(64);
    let pointset = |s: &Subspace| {
        let mut b = vec![0u64; words_p];
        for i in space.points_of(s) {
            b[i as usize / 64] |= 1 << (i % 64);
        }
        b
    };
    let mut load = vec![0u8; npts];
    let mut used = vec![0u64; words_p];
    for l in &fixed {
        space.hyperplanes_containing(l).iter().for_each(|&h| load[h as usize] += 1);
        pointset(l).iter().zip(used.iter_mut()).for_each(|(a, b)| *b |= a);
    }

    let mut lines = Vec::new();
    let mut points = Vec::new();
    let mut hyps = Vec::new();
    for l in SubspaceIter::new(ctx, r, 2) {
        let ps = pointset(&l);
        let hs = space.hyperplanes_containing(&l);
        if !bits_meet(&ps, &used) && hs.iter().all(|&h| load[h as usize] < 2) {
            lines.push(l);
            points.push(ps);
            hyps.push(hs);
        }
    }
    let m = lines.len();
    let words = m.div_ceil(64);
    let set = |b: &mut Vec<u64>, i: usize| b[i / 64] |= 1 << (i % 64);
    let mut compat = vec![vec![0u64; words]; m];
    let mut inside = vec![vec![0u64; words]; npts];
    let mut classes = Vec::with_capacity(npts);
    for (i, ps) in points.iter().enumerate() {
        for j in 0..m {
            if !bits_meet(ps, &points[j]) {
                set(&mut compat[i], j);
            }
        }
        for &h in &hyps[i] {
            set(&mut inside[h as usize], i);
        }
    }
    for h in 0..npts {
        let normal = space.point(h);
        let mut by_point: std::collections::BTreeMap<usize, Vec<u64>> = Default::default();
        for (i, l) in lines.iter().enumerate() {
            let (u, v) = (l.basis().row(0), l.basis().row(1));
            let (a, b) = (crate::geometry::dot(ctx, u, normal), crate::geometry::dot(ctx, v, normal));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let meet: Vec<_> = u.iter().zip(v).map(|(&x, &y)| ctx.sub(ctx.mul(b, x), ctx.mul(a, y))).collect();
            let k = space.index_of(&meet).expect("nonzero meet");
            set(by_point.entry(k).or_insert_with(|| vec![0u64; words]), i);
        }
        classes.push(by_point.into_values().collect());
    }
    let index: std::collections::HashMap<&Subspace, u32> = lines.iter().zip(0..).collect();
    let mut perms: Vec<Vec<u32>> = Vec::new();
    for g in fixed_line_stabilizer(ctx) {
        let perm = lines.iter().map(|l| index.get(&g.apply(ctx, l)?).copied().ok_or(Error::InvalidSystem("stabilizer leaves the candidates".into()))).collect::<Result<Vec<u32>>>()?;
        if perm.iter().enumerate().any(|(i, &j)| i != j as usize) && !perms.contains(&perm) {
            perms.push(perm);
        }
    }
    let group: Vec<usize> = if symmetry { (0..perms.len()).collect() } else { Vec::new() };
    let table = LineTable { hyps, compat, inside, classes, perms };

    let saturated = (0..npts as u32).filter(|&h| load[h as usize] >= 2).collect();
    let mut search = LineSearch {
        t: &table,
        load,
        saturated,
        placed: fixed.iter().map(|l| space.hyperplanes_containing(l)).collect(),
        chosen: Vec::new(),
        best: Vec::new(),
        target: target.saturating_sub(fixed.len()),
        clock: Clock::new(limits),
        found: false,
    };
    let mut all = vec![u64::MAX; words];
    if m % 64 != 0 {
        all[words - 1] = (1u64 << (m % 64)) - 1;
    }
    if m == 0 {
        all.clear();
    }
    search.explore_sym(all, group);

    let keep = target.min(fixed.len());
    let mut elements: Vec<Subspace> = fixed[..keep].to_vec();
    elements.extend(search.best.iter().map(|&i| lines[i].clone()));
    let best = ProjSystem::new(ctx, r, 2, elements)?;
    let exhaustive = !search.clock.stopped && !search.found;
    Ok(SearchOutcome {
        n_best: best.n(),
        best,
        exhaustive,
        nodes: search.clock.nodes,
        elapsed: search.clock.start.elapsed(),
        orbits: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_orbit, line_spread, ExtraLines};
    use crate::geometry::Matrix;
    use crate::groups::SemilinearMap;

    fn gf(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    /// Largest `n` by trying every multiset of lines, smallest first.
    fn brute_force(q: u32, r: usize, h: usize, s: u64) -> usize {
        let ctx = gf(q);
        let space = ProjSpace::new(&ctx, r).unwrap();
        let incid: Vec<Vec<u32>> = SubspaceIter::new(&ctx, r, h).map(|x| space.hyperplanes_containing(&x)).collect();
        fn go(incid: &[Vec<u32>], from: usize, load: &mut [u64], s: u64, n: usize) -> usize {
            let mut best = n;
            for i in from..incid.len() {
                if incid[i].iter().all(|&hp| load[hp as usize] < s) {
                    incid[i].iter().for_each(|&hp| load[hp as usize] += 1);
                    best = best.max(go(incid, i, load, s, n + 1));
                    incid[i].iter().for_each(|&hp| load[hp as usize] -= 1);
                }
            }
            best
        }
        go(&incid, 0, &mut vec![0; space.len()], s, 0)
    }

    #[test]
    fn spread_of_four_space() {
        let out = search_max(&SearchProblem::new(&gf(2), 4, 2, 1)).unwrap();
        assert_eq!(out.n_best, 5);
        assert!(out.exhaustive);
        assert!(out.best.verify().unwrap().s <= 1);
    }

    #[test]
    fn two_lines_in_five_space_share_a_hyperplane() {
        let out = search_max(&SearchProblem::new(&gf(2), 5, 2, 1)).unwrap();
        assert_eq!(out.n_best, 1);
        assert!(out.exhaustive);
    }

    #[test]
    fn agrees_with_brute_force() {
        for (r, h, s) in [(3, 1, 1), (3, 1, 2), (3, 2, 2), (3, 2, 3), (4, 2, 1), (4, 3, 2), (4, 1, 1)] {
            let out = search_max(&SearchProblem::new(&gf(2), r, h, s)).unwrap();
            assert!(out.exhaustive);
            assert_eq!(out.n_best, brute_force(2, r, h, s), "r={r} h={h} s={s}");
            assert!(out.best.verify().unwrap().s as u64 <= s);
        }
    }

    #[test]
    fn group_solutions_are_unions_of_orbits() {
        let ctx = gf(2);
        let m = Matrix::from_rows(4, &[[0u16, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]].map(|r| r.map(crate::field::Elem))).unwrap();
        let g = GroupCtx::new(&ctx, 4, vec![SemilinearMap::linear(&ctx, m).unwrap()]).unwrap();
        let out = search_max(&SearchProblem::new(&ctx, 4, 2, 1).with_group(g.clone())).unwrap();
        assert_eq!(out.n_best, 5);
        assert_eq!(g.invariance_check(&out.best).unwrap(), Ok(()));
        let total: usize = out.orbits.iter().map(|(_, size, mult)| size * mult).sum();
        assert_eq!(total, out.n_best);
    }

    #[test]
    fn deterministic() {
        let p = SearchProblem::new(&gf(2), 4, 2, 2);
        let a = search_max(&p).unwrap();
        let b = search_max(&p).unwrap();
        assert_eq!(a.best.elements(), b.best.elements());
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn node_budget_stops_early() {
        let p = SearchProblem::new(&gf(3), 5, 2, 2).with_limits(Limits { nodes: Some(50), time: None });
        let out = search_max(&p).unwrap();
        assert!(!out.exhaustive);
        assert!(out.best.verify().unwrap().s <= 2);
        assert!(search_max(&p.clone().with_limits(Limits { nodes: Some(0), time: None })).is_err());
    }

    #[test]
    fn mu_cap_is_respected() {
        let out = search_max(&SearchProblem::new(&gf(2), 4, 2, 2).with_mu_cap(1)).unwrap();
        assert_eq!(out.best.verify().unwrap().mu, 1);
        assert_eq!(out.n_best, 5);
    }

    #[test]
    fn extendability() {
        let ctx = gf(2);
        let spread = line_spread(&ctx, &gf(4)).unwrap();
        assert!(!extendability_check(&spread, 1, 1, Limits::default()).unwrap());
        assert!(extendability_check(&spread, 2, 1, Limits::default()).unwrap());
        let partial = construct_orbit(3, 0, 0, ExtraLines::DOnly).unwrap();
        assert!(extendability_check(&partial, 2, 1, Limits::default()).unwrap());
    }

    #[test]
    fn binary_multispread_completion() {
        // five pairwise disjoint lines of GF(2)^5
        let ctx = gf(2);
        let seed = search_max(&SearchProblem::new(&ctx, 5, 2, 2).with_mu_cap(1).with_target(5)).unwrap();
        assert_eq!(seed.n_best, 5);
        let out = complete_multispread(&seed.best, 3, 3, &GroupCtx::trivial(&ctx, 5), Limits::default()).unwrap();
        assert_eq!(out.n_best, 14);
        let ms = out.best.multispread_check().unwrap();
        assert_eq!(ms.mu, Some(3));
        assert!(ms.is_valid());
    }

    #[test]
    fn complete_input_is_returned_unchanged() {
        let ctx = gf(2);
        let spread = line_spread(&ctx, &gf(4)).unwrap();
        let out = complete_multispread(&spread, 2, 1, &GroupCtx::trivial(&ctx, 4), Limits::default()).unwrap();
        assert_eq!(out.best.elements(), spread.elements());
        assert!(matches!(complete_multispread(&spread, 2, 0, &GroupCtx::trivial(&ctx, 4), Limits::default()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn disjoint_lines_agree_with_generic_search() {
        let ctx = gf(2);
        let generic = search_max(&SearchProblem::new(&ctx, 5, 2, 2).with_mu_cap(1)).unwrap();
        assert!(generic.exhaustive);
        let max = generic.n_best;
        for symmetry in [true, false] {
            let hit = disjoint_lines(&ctx, max, Limits::default(), symmetry).unwrap();
            assert_eq!(hit.n_best, max);
            let rep = hit.best.verify().unwrap();
            assert!(rep.s <= 2 && rep.mu == 1);
            let miss = disjoint_lines(&ctx, max + 1, Limits::default(), symmetry).unwrap();
            assert!(miss.exhaustive && miss.n_best <= max);
        }
    }

    #[test]
    fn disjoint_lines_find_a_ternary_twelve() {
        let out = disjoint_line_search(&gf(3), 12, Limits::time(60.0)).unwrap();
        let rep = out.best.verify().unwrap();
        assert_eq!((rep.n, rep.s, rep.mu), (12, 2, 1));
        assert!(!out.exhaustive);
    }

    #[test]
    fn fixed_line_stabilizer_fixes_the_lines() {
        let ctx = gf(3);
        let e = |i: usize| {
            let mut v = vec![crate::field::Elem::ZERO; 5];
            v[i] = crate::field::Elem::ONE;
            v
        };
        let mut mixed = e(0);
        mixed[2] = crate::field::Elem::ONE;
        let l3 = Subspace::from_rows(&ctx, 5, &[mixed, e(4)]).unwrap();
        let pair = [Subspace::from_rows(&ctx, 5, &[e(0), e(1)]).unwrap(), Subspace::from_rows(&ctx, 5, &[e(2), e(3)]).unwrap()];
        let maps = fixed_line_stabilizer(&ctx);
        assert_eq!(maps.len(), 27 * 8 * 2);
        for g in &maps {
            assert_eq!(g.apply(&ctx, &l3).unwrap(), l3);
            let img = g.apply(&ctx, &pair[0]).unwrap();
            assert!(img == pair[0] || img == pair[1]);
        }
    }
}
