//! Generators: the standard triangular patches, charge assignment over the
//! edge graph, and windows of the exotic tilings (fault lines, cycles).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::analysis::{build_edge_graph, AnalysisError, EdgeGraph, LeadLabel};
use crate::lattice::{Cell, Direction};
use crate::patch::{Patch, PoseEntry};
use crate::search::{complete_region, propagate_region, Pin, Region, SearchConfig, Verdict};
use crate::tile::{chirality_for_charge, poses_in, rotation_mask, ChargeSign, PoseMask, RuleSet, TilePose};

/// Largest `n` accepted by [`standard_skeleton`].
pub const MAX_LEVEL: u32 = 8;

/// An anticlockwise black triangle with sides travelling d0, d2, d4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleSpec {
    /// Bottom-left turning tile.
    pub anchor: Cell,
    pub size: u32,
}

impl TriangleSpec {
    pub fn new(anchor: Cell, size: u32) -> Self {
        TriangleSpec { anchor, size }
    }

    pub fn side_vectors(&self) -> [Cell; 3] {
        let s = self.size as i32;
        [0, 2, 4].map(|d| Direction::new(d).step() * s)
    }

    /// Turning tiles in travel order.
    pub fn corners(&self) -> [Cell; 3] {
        let [a, b, _] = self.side_vectors();
        [self.anchor, self.anchor + a, self.anchor + a + b]
    }

    /// Straight tiles of each side, in travel order.
    pub fn sides(&self) -> [Vec<Cell>; 3] {
        let corners = self.corners();
        [0usize, 1, 2].map(|i| {
            let step = Direction::new(2 * i as i32).step();
            (1..self.size as i32).map(|j| corners[i] + step * j).collect()
        })
    }

    pub fn region(&self) -> Region {
        Region::triangle(self.anchor, self.size)
    }

    /// Pins for the outline: straights on the sides, turn rotations at the
    /// corners.
    pub fn outline_pins(&self) -> Vec<(Cell, Pin)> {
        let mut pins = Vec::new();
        for (i, side) in self.sides().iter().enumerate() {
            pins.extend(side.iter().map(|&c| (c, Pin::Rotation(2 * i as u8))));
        }
        for (i, c) in self.corners().into_iter().enumerate() {
            pins.push((c, Pin::Mask(corner_mask(Direction::new(2 * i as i32 + 4), Direction::new(2 * i as i32)))));
        }
        pins
    }
}

/// Rotations whose turn piece enters travelling `from` and leaves travelling `to`.
fn corner_mask(from: Direction, to: Direction) -> PoseMask {
    (0..6u8)
        .filter(|&k| {
            [crate::tile::Piece::TopTurn, crate::tile::Piece::BottomTurn]
                .iter()
                .any(|p| p.ends(k) == (from.opposite(), to))
        })
        .fold(0, |m, k| m | rotation_mask(k))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("level {0} exceeds the supported maximum {MAX_LEVEL}")]
    TooLarge(u32),
    #[error("propagation wiped out the triangle of size {0}")]
    WipeOut(u32),
    #[error("propagation left non-corner cell {0} undetermined")]
    Branching(Cell),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("component rooted at edge {0} forces both charges on one edge")]
    Contradiction(usize),
    #[error("charge choice covers {given} components, graph has {needed}")]
    ChoiceSize { given: usize, needed: usize },
    #[error("assigned charges still violate the rules at {0} edges")]
    Invalid(usize),
    #[error("no standard patch up to level {MAX_LEVEL} contains the requested window")]
    WindowTooLarge,
    #[error("search did not complete the window: {0}")]
    Search(&'static str),
}

/// The black-line skeleton filling the triangle of size `2^n` at the origin.
pub fn standard_skeleton(n: u32) -> Result<Patch, ConstructError> {
    if n > MAX_LEVEL {
        return Err(ConstructError::TooLarge(n));
    }
    skeleton_for(TriangleSpec::new(Cell::ORIGIN, 1 << n))
}

/// Propagates the outline of `spec` inward. Every cell but the three
/// corners must end up with a single rotation; corners keep two options
/// and take the smaller.
pub fn skeleton_for(spec: TriangleSpec) -> Result<Patch, ConstructError> {
    let region = spec.region().with_pins(spec.outline_pins()).expect("outline lies in region");
    let domains = propagate_region(&region, RuleSet::R1Only).ok_or(ConstructError::WipeOut(spec.size))?;
    let corners = spec.corners();
    let mut p = Patch::new();
    for (cell, mask) in domains {
        let ks: BTreeSet<u8> = poses_in(mask).map(|t| t.k()).collect();
        if ks.len() != 1 && !corners.contains(&cell) {
            return Err(ConstructError::Branching(cell));
        }
        let k = *ks.first().ok_or(ConstructError::WipeOut(spec.size))?;
        p.set(cell, PoseEntry::Skeleton { k });
    }
    Ok(p)
}

/// One sign per edge-graph component, indexed like
/// [`EdgeGraph::components`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeChoice(pub Vec<ChargeSign>);

impl ChargeChoice {
    pub fn uniform(components: usize, sign: ChargeSign) -> Self {
        ChargeChoice(vec![sign; components])
    }

    /// Bit `i` of `bits` set means component `i` gets `+`.
    pub fn from_bits(components: usize, bits: u64) -> Self {
        ChargeChoice(
            (0..components).map(|i| if bits >> i & 1 == 1 { ChargeSign::Plus } else { ChargeSign::Minus }).collect(),
        )
    }

    /// Every root negative.
    pub fn default_for(g: &EdgeGraph) -> Self {
        Self::uniform(g.components.len(), ChargeSign::Minus)
    }
}

/// Edge charges implied by `choice`: each component's root gets its sign,
/// near arcs copy it and far arcs flip it.
pub fn edge_charges(g: &EdgeGraph, choice: &ChargeChoice) -> Result<Vec<ChargeSign>, ConstructError> {
    if choice.0.len() != g.components.len() {
        return Err(ConstructError::ChoiceSize { given: choice.0.len(), needed: g.components.len() });
    }
    let n = g.node_count();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for a in &g.arcs {
        let flip = a.label == LeadLabel::Far;
        adj[a.from].push((a.to, flip));
        adj[a.to].push((a.from, flip));
    }
    let mut charge: Vec<Option<ChargeSign>> = vec![None; n];
    for (ci, comp) in g.components.iter().enumerate() {
        let root = comp.root();
        charge[root] = Some(choice.0[ci]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let cv = charge[v].unwrap();
            for &(w, flip) in &adj[v] {
                let want = if flip { cv.star() } else { cv };
                match charge[w] {
                    None => {
                        charge[w] = Some(want);
                        queue.push_back(w);
                    }
                    Some(c) if c != want => return Err(ConstructError::Contradiction(root)),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(charge.into_iter().map(|c| c.expect("every node lies in a component")).collect())
}

/// Gives every tile the chirality realizing the charge of the run through
/// its straight piece, then checks the result against both rules.
pub fn assign_charges(skeleton: &Patch, choice: &ChargeChoice) -> Result<Patch, ConstructError> {
    let g = build_edge_graph(skeleton)?;
    let charges = edge_charges(&g, choice)?;
    let mut out = match skeleton.torus() {
        Some(t) => Patch::on_torus(t),
        None => Patch::new(),
    };
    for (cell, entry) in skeleton.iter() {
        let e = g.tracing.edge_of(cell).expect("every tile carries a straight");
        out.set(cell, TilePose::new(entry.k(), chirality_for_charge(charges[e])));
    }
    let bad = out.validate().len();
    if bad > 0 {
        return Err(ConstructError::Invalid(bad));
    }
    Ok(out)
}

/// Standard patch `P_n` with every component root negative.
pub fn standard_patch(n: u32) -> Result<Patch, ConstructError> {
    let sk = standard_skeleton(n)?;
    let g = build_edge_graph(&sk)?;
    assign_charges(&sk, &ChargeChoice::default_for(&g))
}

/// Row-major window coordinates: `width` cells per offset row, rows
/// `-below..height-below`.
fn window_cells(width: u32, height: u32, below: i32) -> impl Iterator<Item = (i32, Cell)> {
    (0..height as i32).flat_map(move |y| {
        let r = y - below;
        (0..width as i32).map(move |x| (x, Cell::new(x - r.div_euclid(2), r)))
    })
}

/// A `width × height` window across an infinite straight line `L`, which
/// runs east along row 0. Rows above and including `L` come from a standard
/// patch; rows below are the same sample slid `shift` cells along `L`.
/// Charges are reassigned on the window so both rules hold.
pub fn fault_line_window(width: u32, height: u32, shift: i32) -> Result<Patch, ConstructError> {
    let below = (height / 2) as i32;
    for level in 2..=MAX_LEVEL {
        // Rotating P_{level} by 180° turns the top side of its central
        // inverted triangle into row -s, travelling east with that
        // triangle above it, for cells q in -s+1..=-1.
        let s = 1i32 << (level - 1);
        let src = standard_skeleton(level)?.rotated(3);
        let x0 = -s / 2 - width as i32 / 2;
        let line_ok = (0..width as i32).all(|x| {
            let q = x0 + x;
            (-s + 1..=-1).contains(&q) && src.get(Cell::new(q, -s)).map(|e| e.k()) == Some(0)
        });
        if !line_ok {
            continue;
        }
        let mut sk = Patch::new();
        let mut complete = true;
        for (_, cell) in window_cells(width, height, below) {
            let slide = if cell.r < 0 { shift } else { 0 };
            let from = Cell::new(cell.q + x0 + slide, cell.r - s);
            match src.get(from) {
                Some(e) => sk.set(cell, e),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            continue;
        }
        let g = build_edge_graph(&sk)?;
        return assign_charges(&sk, &ChargeChoice::default_for(&g));
    }
    Err(ConstructError::WindowTooLarge)
}

/// A straight run given by its first cell, step direction and tile rotation.
pub type Ray = (Cell, i32, u8);

/// Rotation pins for every ray cell inside `region`.
fn pin_rays(region: &Region, rays: &[Ray]) -> Vec<(Cell, Pin)> {
    let mut pins = Vec::new();
    for &(start, d, k) in rays {
        let step = Direction::new(d).step();
        let mut c = start;
        let mut j = 0;
        // Rays leave the region once and never come back.
        while j < 4 * region.len() as i32 {
            if region.contains(c) {
                pins.push((c, Pin::Rotation(k)));
            }
            c = c + step;
            j += 1;
        }
    }
    pins
}

/// The three turning tiles of the `n`-cycle with spacing `2^n`, with their
/// rotations, and rays `(start, step direction, rotation)` for the six runs.
pub fn n_cycle_lines(n: u32) -> ([(Cell, u8); 3], Vec<Ray>) {
    let m = 1i32 << n;
    let t1 = Cell::ORIGIN;
    let t2 = Cell::new(0, m);
    let t3 = Cell::new(-m, m);
    let st = |d: i32| Direction::new(d).step();
    let rays = vec![
        // Runs heading into each turn, walked backwards from it.
        (t1 - st(0), 3, 0),
        (t2 - st(2), 5, 2),
        (t3 + st(1), 1, 4),
        // Runs leaving each turn.
        (t1 + st(2), 2, 2),
        (t2 + st(4), 4, 4),
        (t3 + st(0), 0, 0),
    ];
    ([(t1, 4), (t2, 0), (t3, 2)], rays)
}

/// Centre of the window around a three-line cycle of spacing `2^n`.
pub fn n_cycle_center(n: u32) -> Cell {
    let m = 1i32 << n;
    Cell::new(-m / 3, (2 * m) / 3)
}

/// A disc of `radius` around the cycle of three infinite turning lines with
/// spacing `2^n`, completed under both rules.
pub fn n_cycle_window(n: u32, radius: u32) -> Result<Patch, ConstructError> {
    let (turns, rays) = n_cycle_lines(n);
    let region = Region::disc(n_cycle_center(n), radius);
    let mut pins = pin_rays(&region, &rays);
    pins.extend(turns.iter().filter(|(c, _)| region.contains(*c)).map(|&(c, k)| (c, Pin::Rotation(k))));
    let region = region.with_pins(pins).expect("pins filtered to region");
    let res = complete_region(&region, &SearchConfig::default());
    match res.verdict {
        Verdict::Sat(p) => Ok(p),
        v => Err(ConstructError::Search(v.label())),
    }
}

/// Edge-graph components holding the six infinite runs of an `n`-cycle
/// window, and whether each incoming run leads through a far arc to the
/// next line's outgoing run.
pub fn n_cycle_core(window: &Patch, n: u32) -> Result<(usize, bool), ConstructError> {
    let g = build_edge_graph(window)?;
    let ([(t1, _), (t2, _), (t3, _)], rays) = n_cycle_lines(n);
    let edge = |c: Cell| g.tracing.edge_of(c);
    let runs: Option<Vec<usize>> = rays.iter().map(|&(c, _, _)| edge(c)).collect();
    let runs = runs.ok_or(ConstructError::WindowTooLarge)?;
    let comps: BTreeSet<usize> = runs.iter().map(|&e| g.component_of[e]).collect();
    // Incoming run of line i ends at turn t_i, whose straight is line i+1's outgoing run.
    let cyclic = [(0, t1), (1, t2), (2, t3)].iter().all(|&(i, t)| {
        g.out[runs[i]]
            .map(|a| g.arcs[a])
            .is_some_and(|a| a.label == LeadLabel::Far && edge(t) == Some(a.to) && a.to == runs[3 + (i + 1) % 3])
    });
    Ok((comps.len(), cyclic))
}

/// The three-line arrangement in which every line's incoming run leads to
/// the next line's incoming run. Turning tiles sit `a` apart. Contains only
/// the line tiles within `reach` of the centre, all unmirrored.
pub fn closed_far_cycle_core(a: u32, reach: u32) -> Patch {
    let a = a as i32;
    let st = |d: i32| Direction::new(d).step();
    let t1 = Cell::ORIGIN;
    let t2 = t1 - st(0) * a;
    let t3 = t1 + st(4) * a;
    let centre = Cell::new(-a / 3, -a / 3);
    let region = Region::disc(centre, reach + a as u32);
    let rays = [
        // Incoming runs: each passes through the next turn.
        (t1 - st(0), 3, 0u8),
        (t2 + st(5), 5, 2),
        (t3 + st(1), 1, 4),
        // Outgoing runs.
        (t1 + st(2), 2, 2),
        (t2 + st(4), 4, 4),
        (t3 + st(0), 0, 0),
    ];
    let mut p = Patch::new();
    for (c, pin) in pin_rays(&region, &rays) {
        if c.distance(centre) <= reach + a as u32 {
            if let Pin::Rotation(k) = pin {
                p.set(c, TilePose::new(k, 0));
            }
        }
    }
    for (c, k) in [(t1, 4u8), (t2, 0), (t3, 2)] {
        p.set(c, TilePose::new(k, 0));
    }
    p
}

/// Pins of [`closed_far_cycle_core`] as rotations only, on a disc, for search.
pub fn closed_far_cycle_region(a: u32, radius: u32) -> Region {
    let core = closed_far_cycle_core(a, radius);
    let centre = Cell::new(-(a as i32) / 3, -(a as i32) / 3);
    let region = Region::disc(centre, radius);
    let pins: BTreeMap<Cell, Pin> =
        core.iter().filter(|(c, _)| region.contains(*c)).map(|(c, e)| (c, Pin::Rotation(e.k()))).collect();
    region.with_pins(pins).expect("pins filtered to region")
}
