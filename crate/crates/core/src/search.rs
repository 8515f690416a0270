//! Backtracking search with arc-consistency over 12-bit pose masks.
//!
//! Used to complete finite regions and to exhaust periodic quotients of the
//! lattice. Search is single-threaded and deterministic: variables are taken
//! in a fixed spiral order from the region's centre and values in pose order
//! `(k ascending, m ascending)`, unless a seed asks for shuffled values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::lattice::{enumerate_sublattices, Cell, Direction, EdgeId, TorusDomain};
use crate::patch::{Patch, PoseEntry};
use crate::tile::{
    pose_bit, poses_in, rotation_mask, AdjacencyTable, PoseMask, RuleSet, TilePose, ALL_POSES, UNMIRRORED_POSES,
};

/// A constraint on a pinned cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pin {
    Pose(TilePose),
    /// Rotation fixed, chirality free.
    Rotation(u8),
    /// Any pose in the mask.
    Mask(PoseMask),
}

impl Pin {
    pub fn mask(self) -> PoseMask {
        match self {
            Pin::Pose(p) => pose_bit(p),
            Pin::Rotation(k) => rotation_mask(k),
            Pin::Mask(m) => m,
        }
    }
}

impl From<PoseEntry> for Pin {
    fn from(e: PoseEntry) -> Self {
        match e {
            PoseEntry::Full(p) => Pin::Pose(p),
            PoseEntry::Skeleton { k } => Pin::Rotation(k),
        }
    }
}

/// A finite set of cells to fill, with optional pins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    cells: BTreeSet<Cell>,
    pins: BTreeMap<Cell, Pin>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("pinned cell {0} lies outside the region")]
pub struct PinOutside(pub Cell);

impl Region {
    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Self {
        Region { cells: cells.into_iter().collect(), pins: BTreeMap::new() }
    }

    /// Cells within hex distance `radius` of `center`.
    pub fn disc(center: Cell, radius: u32) -> Self {
        let r = radius as i32;
        Region::from_cells(
            (-r..=r)
                .flat_map(|dq| (-r..=r).map(move |dr| center + Cell::new(dq, dr)))
                .filter(|c| c.distance(center) <= radius),
        )
    }

    /// Cells on or inside the triangle with corners `anchor`,
    /// `anchor + s·d0`, `anchor + s·d0 + s·d2`.
    pub fn triangle(anchor: Cell, size: u32) -> Self {
        let s = size as i32;
        Region::from_cells((0..=s).flat_map(|q| (0..=s - q).map(move |r| anchor + Cell::new(q, r))))
    }

    /// A `width × height` block in offset rows starting at the origin.
    pub fn rectangle(width: u32, height: u32) -> Self {
        Region::from_cells(
            (0..height as i32).flat_map(|r| (0..width as i32).map(move |x| Cell::new(x - r.div_euclid(2), r))),
        )
    }

    pub fn pin(&mut self, cell: Cell, pin: Pin) -> Result<(), PinOutside> {
        if !self.cells.contains(&cell) {
            return Err(PinOutside(cell));
        }
        self.pins.insert(cell, pin);
        Ok(())
    }

    /// Pins every entry of `patch` (skeleton entries pin the rotation only).
    pub fn pin_patch(&mut self, patch: &Patch) -> Result<(), PinOutside> {
        for (c, e) in patch.iter() {
            self.pin(c, e.into())?;
        }
        Ok(())
    }

    pub fn with_pins(mut self, pins: impl IntoIterator<Item = (Cell, Pin)>) -> Result<Self, PinOutside> {
        for (c, p) in pins {
            self.pin(c, p)?;
        }
        Ok(self)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    pub fn pins(&self) -> impl Iterator<Item = (Cell, Pin)> + '_ {
        self.pins.iter().map(|(c, p)| (*c, *p))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub rules: RuleSet,
    /// Branching decisions allowed before giving up with `Timeout`.
    pub budget_nodes: u64,
    pub time_limit: Option<Duration>,
    /// Shuffle value order deterministically when set.
    pub seed: Option<u64>,
    /// Arc consistency after every decision. Off means plain backtracking
    /// that checks each assignment against assigned neighbours only.
    pub propagate: bool,
    /// On tori, restrict the rotation of cell (0,0) using the lattice's
    /// rotational symmetry.
    pub symmetry_reduction: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            rules: RuleSet::Full,
            budget_nodes: 1_000_000_000,
            time_limit: None,
            seed: None,
            propagate: true,
            symmetry_reduction: false,
        }
    }
}

impl SearchConfig {
    pub fn with_rules(rules: RuleSet) -> Self {
        SearchConfig { rules, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Sat(Patch),
    /// Exhausted without a solution. `conflict` names an edge whose pinned
    /// tiles cannot meet, when that was detected before searching.
    Unsat {
        conflict: Option<EdgeId>,
    },
    Timeout,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat { .. } => "UNSAT",
            Verdict::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

const NO_NEIGHBOR: u32 = u32::MAX;

/// The constraint network: one variable per cell, neighbours per direction.
struct Network {
    cells: Vec<Cell>,
    nbrs: Vec<[u32; 6]>,
    init: Vec<PoseMask>,
    order: Vec<u32>,
    rules: RuleSet,
    torus: Option<TorusDomain>,
    support: [[PoseMask; 6]; 12],
}

enum Build {
    Ready(Box<Network>),
    Conflict(Option<EdgeId>),
}

fn support_table(rules: RuleSet) -> [[PoseMask; 6]; 12] {
    let t = AdjacencyTable::get();
    let mut s = [[0; 6]; 12];
    for p in TilePose::all() {
        for d in Direction::ALL {
            s[p.index()][d.index()] = t.support(rules, p, d);
        }
    }
    s
}

fn spiral_order(cells: &[Cell]) -> Vec<u32> {
    if cells.is_empty() {
        return Vec::new();
    }
    let n = cells.len() as i64;
    let sq: i64 = cells.iter().map(|c| c.q as i64).sum();
    let sr: i64 = cells.iter().map(|c| c.r as i64).sum();
    let centre = Cell::new((sq as f64 / n as f64).round() as i32, (sr as f64 / n as f64).round() as i32);
    let mut idx: Vec<u32> = (0..cells.len() as u32).collect();
    idx.sort_by_key(|&i| (cells[i as usize].distance(centre), cells[i as usize]));
    idx
}

impl Network {
    fn build(cells: Vec<Cell>, pins: &BTreeMap<Cell, PoseMask>, rules: RuleSet, torus: Option<TorusDomain>) -> Build {
        let index: BTreeMap<Cell, u32> = cells.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();
        let key = |c: Cell| match torus {
            Some(t) => t.reduce(c),
            None => c,
        };
        let nbrs: Vec<[u32; 6]> = cells
            .iter()
            .map(|c| Direction::ALL.map(|d| index.get(&key(c.neighbor(d))).copied().unwrap_or(NO_NEIGHBOR)))
            .collect();
        let base = match rules {
            RuleSet::R1Only => UNMIRRORED_POSES,
            _ => ALL_POSES,
        };
        let init: Vec<PoseMask> = cells
            .iter()
            .map(|c| {
                let pin = pins.get(c).copied().unwrap_or(ALL_POSES);
                match rules {
                    // Chirality is irrelevant to R1; keep the unmirrored twin of each rotation.
                    RuleSet::R1Only => (0..6u8)
                        .filter(|&k| pin & rotation_mask(k) != 0)
                        .fold(0, |m, k| m | pose_bit(TilePose::new(k, 0))),
                    _ => pin & base,
                }
            })
            .collect();
        let net =
            Network { order: spiral_order(&cells), cells, nbrs, init, rules, torus, support: support_table(rules) };

        // Pinned neighbours that cannot meet at all.
        for (i, c) in net.cells.iter().enumerate() {
            if !pins.contains_key(c) {
                continue;
            }
            for d in Direction::ALL {
                let j = net.nbrs[i][d.index()];
                if j == NO_NEIGHBOR || !pins.contains_key(&net.cells[j as usize]) {
                    continue;
                }
                let ok = if j as usize == i {
                    poses_in(net.init[i]).any(|p| net.support[p.index()][d.index()] & pose_bit(p) != 0)
                } else {
                    poses_in(net.init[i]).any(|p| net.support[p.index()][d.index()] & net.init[j as usize] != 0)
                };
                if !ok {
                    return Build::Conflict(Some(EdgeId::canonical(*c, d)));
                }
            }
        }
        if let Some(i) = net.init.iter().position(|m| *m == 0) {
            // An empty pin mask; report one of its edges.
            return Build::Conflict(Some(EdgeId::canonical(net.cells[i], Direction::new(0))));
        }
        Build::Ready(Box::new(net))
    }

    /// Poses of `v` compatible with the current domains of its neighbours.
    fn revise(&self, dom: &[PoseMask], v: usize) -> PoseMask {
        let mut keep = 0;
        let mut m = dom[v];
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            let ok = (0..6).all(|d| {
                let u = self.nbrs[v][d];
                if u == NO_NEIGHBOR {
                    true
                } else if u as usize == v {
                    self.support[b][d] & (1 << b) != 0
                } else {
                    self.support[b][d] & dom[u as usize] != 0
                }
            });
            if ok {
                keep |= 1 << b;
            }
        }
        keep
    }

    /// AC-3 from the given dirty variables. Returns false on a wipe-out.
    fn propagate(&self, dom: &mut [PoseMask], dirty: impl IntoIterator<Item = usize>) -> bool {
        let mut queue: Vec<usize> = Vec::new();
        let mut queued = vec![false; dom.len()];
        for v in dirty {
            for &u in &self.nbrs[v] {
                if u != NO_NEIGHBOR && !queued[u as usize] {
                    queued[u as usize] = true;
                    queue.push(u as usize);
                }
            }
            if !queued[v] {
                queued[v] = true;
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            queued[v] = false;
            let new = self.revise(dom, v);
            if new == dom[v] {
                continue;
            }
            if new == 0 {
                dom[v] = 0;
                return false;
            }
            dom[v] = new;
            for &u in &self.nbrs[v] {
                if u != NO_NEIGHBOR && !queued[u as usize] {
                    queued[u as usize] = true;
                    queue.push(u as usize);
                }
            }
        }
        true
    }

    /// Whether pose `p` at `v` agrees with every neighbour already decided.
    fn consistent_with_decided(&self, dom: &[PoseMask], decided: &[bool], v: usize, p: usize) -> bool {
        (0..6).all(|d| {
            let u = self.nbrs[v][d];
            if u == NO_NEIGHBOR {
                true
            } else if u as usize == v {
                self.support[p][d] & (1 << p) != 0
            } else if decided[u as usize] {
                self.support[p][d] & dom[u as usize] != 0
            } else {
                true
            }
        })
    }

    fn to_patch(&self, dom: &[PoseMask]) -> Patch {
        let mut patch = match self.torus {
            Some(t) => Patch::on_torus(t),
            None => Patch::new(),
        };
        for (c, m) in self.cells.iter().zip(dom) {
            let pose = TilePose::from_index(m.trailing_zeros() as usize);
            let entry = match self.rules {
                RuleSet::R1Only => PoseEntry::Skeleton { k: pose.k() },
                _ => PoseEntry::Full(pose),
            };
            patch.set(*c, entry);
        }
        patch
    }
}

struct Solver<'a> {
    net: &'a Network,
    config: &'a SearchConfig,
    stats: SearchStats,
    rng: Option<ChaCha8Rng>,
    started: Instant,
    timed_out: bool,
}

impl<'a> Solver<'a> {
    fn new(net: &'a Network, config: &'a SearchConfig) -> Self {
        Solver {
            net,
            config,
            stats: SearchStats::default(),
            rng: config.seed.map(ChaCha8Rng::seed_from_u64),
            started: Instant::now(),
            timed_out: false,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stats.nodes >= self.config.budget_nodes {
            self.timed_out = true;
        } else if let Some(limit) = self.config.time_limit {
            if self.stats.nodes.is_multiple_of(1024) && self.started.elapsed() > limit {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    fn values(&mut self, mask: PoseMask) -> Vec<usize> {
        let mut vals: Vec<usize> = (0..12).filter(|b| mask & (1 << b) != 0).collect();
        if let Some(rng) = self.rng.as_mut() {
            vals.shuffle(rng);
        }
        vals
    }

    /// Depth-first enumeration; `visit` sees each complete assignment.
    fn run(&mut self, visit: &mut dyn FnMut(&[PoseMask]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mut dom = self.net.init.clone();
        let n = dom.len();
        if self.config.propagate {
            if !self.net.propagate(&mut dom, 0..n) {
                return ControlFlow::Continue(());
            }
            self.dfs_ac(&mut dom, 0, visit)
        } else {
            // Self-adjacent constraints are unary; apply them up front.
            let none = vec![false; dom.len()];
            for v in 0..dom.len() {
                let kept = poses_in(dom[v])
                    .filter(|p| self.net.consistent_with_decided(&dom, &none, v, p.index()))
                    .fold(0, |m, p| m | pose_bit(p));
                dom[v] = kept;
                if kept == 0 {
                    return ControlFlow::Continue(());
                }
            }
            let mut decided = vec![false; dom.len()];
            self.dfs_plain(&mut dom, &mut decided, 0, visit)
        }
    }

    fn dfs_ac(
        &mut self,
        dom: &mut [PoseMask],
        depth: usize,
        visit: &mut dyn FnMut(&[PoseMask]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let Some(&var) = self.net.order.iter().find(|&&v| dom[v as usize].count_ones() > 1) else {
            return visit(dom);
        };
        let var = var as usize;
        for val in self.values(dom[var]) {
            if self.out_of_budget() {
                return ControlFlow::Break(());
            }
            self.stats.nodes += 1;
            let mut next = dom.to_vec();
            next[var] = 1 << val;
            if self.net.propagate(&mut next, [var]) {
                self.dfs_ac(&mut next, depth + 1, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn dfs_plain(
        &mut self,
        dom: &mut Vec<PoseMask>,
        decided: &mut Vec<bool>,
        pos: usize,
        visit: &mut dyn FnMut(&[PoseMask]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.stats.max_depth = self.stats.max_depth.max(pos);
        let Some(&var) = self.net.order.get(pos) else {
            return visit(dom);
        };
        let var = var as usize;
        let saved = dom[var];
        for val in self.values(saved) {
            if self.out_of_budget() {
                dom[var] = saved;
                return ControlFlow::Break(());
            }
            self.stats.nodes += 1;
            dom[var] = 1 << val;
            if self.net.consistent_with_decided(dom, decided, var, val) {
                decided[var] = true;
                let flow = self.dfs_plain(dom, decided, pos + 1, visit);
                decided[var] = false;
                if flow.is_break() {
                    dom[var] = saved;
                    return flow;
                }
            }
        }
        dom[var] = saved;
        ControlFlow::Continue(())
    }
}

fn pin_masks(region: &Region) -> BTreeMap<Cell, PoseMask> {
    region.pins.iter().map(|(c, p)| (*c, p.mask())).collect()
}

fn solve(
    cells: Vec<Cell>,
    pins: &BTreeMap<Cell, PoseMask>,
    torus: Option<TorusDomain>,
    config: &SearchConfig,
) -> SearchResult {
    let started = Instant::now();
    let net = match Network::build(cells, pins, config.rules, torus) {
        Build::Ready(n) => n,
        Build::Conflict(edge) => {
            return SearchResult {
                verdict: Verdict::Unsat { conflict: edge },
                stats: SearchStats { elapsed: started.elapsed(), ..Default::default() },
            }
        }
    };
    let mut solver = Solver::new(&net, config);
    let mut found = None;
    let _ = solver.run(&mut |dom| {
        found = Some(net.to_patch(dom));
        ControlFlow::Break(())
    });
    let mut stats = solver.stats;
    stats.elapsed = started.elapsed();
    let verdict = match found {
        Some(p) => {
            debug_assert!(p.validate().is_empty() || config.rules == RuleSet::None);
            Verdict::Sat(p)
        }
        None if solver.timed_out => Verdict::Timeout,
        None => Verdict::Unsat { conflict: None },
    };
    SearchResult { verdict, stats }
}

/// Fills `region` with tiles satisfying `config.rules`.
pub fn complete_region(region: &Region, config: &SearchConfig) -> SearchResult {
    solve(region.cells().collect(), &pin_masks(region), None, config)
}

/// Every completion of `region`, up to `limit`. The flag reports whether
/// the enumeration ran to exhaustion.
pub fn enumerate_completions(region: &Region, config: &SearchConfig, limit: usize) -> (Vec<Patch>, bool) {
    let pins = pin_masks(region);
    let net = match Network::build(region.cells().collect(), &pins, config.rules, None) {
        Build::Ready(n) => n,
        Build::Conflict(_) => return (Vec::new(), true),
    };
    let mut solver = Solver::new(&net, config);
    let mut out = Vec::new();
    let flow = solver.run(&mut |dom| {
        out.push(net.to_patch(dom));
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let exhausted = flow.is_continue() && !solver.timed_out;
    (out, exhausted)
}

/// Arc-consistent domains of a region without branching, or `None` on a
/// wipe-out.
pub fn propagate_region(region: &Region, rules: RuleSet) -> Option<BTreeMap<Cell, PoseMask>> {
    let net = match Network::build(region.cells().collect(), &pin_masks(region), rules, None) {
        Build::Ready(n) => n,
        Build::Conflict(_) => return None,
    };
    let mut dom = net.init.clone();
    let n = dom.len();
    if !net.propagate(&mut dom, 0..n) {
        return None;
    }
    Some(net.cells.iter().copied().zip(dom).collect())
}

/// Looks for a tiling of the plane that is periodic under `t`.
pub fn torus_search(t: TorusDomain, config: &SearchConfig) -> SearchResult {
    let mut pins = BTreeMap::new();
    if config.symmetry_reduction {
        if let Some(n) = [1, 2, 3].into_iter().find(|&n| t.invariant_under_rotation(n)) {
            let mask = (0..n as u8).fold(0, |m, k| m | rotation_mask(k));
            pins.insert(Cell::ORIGIN, mask);
        }
    }
    solve(t.representatives(), &pins, Some(t), config)
}

#[derive(Clone, Debug)]
pub struct DomainOutcome {
    pub domain: TorusDomain,
    pub result: SearchResult,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub max_index: usize,
    pub rules: RuleSet,
    pub outcomes: Vec<DomainOutcome>,
}

impl SweepReport {
    pub fn all_unsat(&self) -> bool {
        self.outcomes.iter().all(|o| o.result.verdict.is_unsat())
    }

    pub fn count(&self, label: &str) -> usize {
        self.outcomes.iter().filter(|o| o.result.verdict.label() == label).count()
    }

    pub fn total_nodes(&self) -> u64 {
        self.outcomes.iter().map(|o| o.result.stats.nodes).sum()
    }

    /// `PASS`/`FAIL` under the full rules; other rule sets are diagnostic.
    pub fn overall(&self) -> &'static str {
        match self.rules {
            RuleSet::Full if self.all_unsat() => "PASS",
            RuleSet::Full => "FAIL",
            _ => "DIAGNOSTIC",
        }
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# sweep max-index={} rules={:?}", self.max_index, self.rules)?;
        writeln!(f, "# basis verdict nodes time_ms")?;
        for o in &self.outcomes {
            writeln!(
                f,
                "{} {} {} {}",
                o.domain,
                o.result.verdict.label(),
                o.result.stats.nodes,
                o.result.stats.elapsed.as_millis()
            )?;
        }
        writeln!(
            f,
            "# domains={} unsat={} sat={} timeout={} nodes={}",
            self.outcomes.len(),
            self.count("UNSAT"),
            self.count("SAT"),
            self.count("TIMEOUT"),
            self.total_nodes()
        )?;
        let summary = match self.overall() {
            "PASS" => "all UNSAT",
            "FAIL" => "not all UNSAT",
            _ => "diagnostic run, no verdict",
        };
        writeln!(f, "{}: {}", self.overall(), summary)
    }
}

/// Runs [`torus_search`] on every sublattice of index up to `max_index`,
/// using `threads` workers (0 picks the rayon default). Results are in
/// enumeration order regardless of scheduling.
pub fn aperiodicity_sweep(max_index: usize, config: &SearchConfig, threads: usize) -> SweepReport {
    let domains = enumerate_sublattices(max_index);
    let run = || -> Vec<DomainOutcome> {
        domains.par_iter().map(|&domain| DomainOutcome { domain, result: torus_search(domain, config) }).collect()
    };
    let outcomes = if threads == 0 {
        run()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    };
    SweepReport { max_index, rules: config.rules, outcomes }
}
