//! Black-line analysis: tracing lines, finding triangles, the "leads to"
//! graph between straight runs, and checks of the structural properties
//! valid tilings must have.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::lattice::{Cell, Direction};
use crate::patch::Patch;
use crate::tile::{tile_charge, ChargeSign, Piece};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("black line breaks at {cell} {dir}: patch is not R1-valid")]
    Broken { cell: Cell, dir: Direction },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineStep {
    pub cell: Cell,
    pub piece: Piece,
}

/// A maximal traced black line, in travel order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R1Line {
    pub steps: Vec<LineStep>,
    pub closed: bool,
}

impl R1Line {
    pub fn turn_count(&self) -> usize {
        self.steps.iter().filter(|s| s.piece.is_turn()).count()
    }

    /// Total turning in units of 60°; every turn is a left turn of 120°.
    pub fn net_turning(&self) -> i32 {
        2 * self.turn_count() as i32
    }

    fn min_cell(&self) -> Cell {
        self.steps.iter().map(|s| s.cell).min().unwrap_or_default()
    }
}

/// A maximal straight run of a black line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R1Edge {
    /// Straight tiles in travel order.
    pub cells: Vec<Cell>,
    pub direction: Direction,
    /// Shared tile charge of the run, if every tile carries one and they agree.
    pub charge: Option<ChargeSign>,
    /// False when the run's tiles disagree on their charge.
    pub charge_consistent: bool,
    /// The run reaches the patch boundary going backwards.
    pub truncated_start: bool,
    /// The run reaches the patch boundary going forwards.
    pub truncated_end: bool,
    pub line: usize,
}

impl R1Edge {
    pub fn length(&self) -> usize {
        self.cells.len()
    }

    pub fn boundary_truncated(&self) -> bool {
        self.truncated_start || self.truncated_end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub line: usize,
    /// Side length in tiles plus one; three bare turns have size 1.
    pub size: usize,
    /// The three turning tiles in travel order.
    pub corners: [Cell; 3],
    /// Straight runs (empty for size 1).
    pub edges: Vec<usize>,
    /// Total turning is +360°.
    pub anticlockwise: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeadLabel {
    /// The leading edge's triangle lies inside the target's.
    Near,
    Far,
}

impl fmt::Display for LeadLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeadLabel::Near => "N",
            LeadLabel::Far => "F",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub label: LeadLabel,
    /// The tile holding the terminating turn of `from` and a straight of `to`.
    pub turn_cell: Cell,
}

/// Lines, runs, and triangles of a patch, with lookups between them.
#[derive(Clone, Debug)]
pub struct Tracing {
    pub lines: Vec<R1Line>,
    /// Sorted by smallest cell.
    pub edges: Vec<R1Edge>,
    pub triangles: Vec<Triangle>,
    /// Closed lines that are not triangles (only possible on a torus).
    pub irregular_loops: Vec<usize>,
    step_at: HashMap<LineStep, (usize, usize)>,
    edge_of_cell: HashMap<Cell, usize>,
    triangle_of_line: HashMap<usize, usize>,
}

/// Traces every black line of an R1-valid patch. Lines are ordered by their
/// smallest cell; closed lines start at their smallest step.
pub fn trace_lines(p: &Patch) -> Result<Vec<R1Line>, AnalysisError> {
    let piece_entering = |cell: Cell, d: Direction| -> Result<Option<(Cell, Piece)>, AnalysisError> {
        let Some(n) = p.neighbor(cell, d) else { return Ok(None) };
        let k = p.get(n).expect("neighbor exists").k();
        Piece::entering(k, d.opposite()).map(|pc| Some((n, pc))).ok_or(AnalysisError::Broken { cell, dir: d })
    };
    let piece_leaving = |cell: Cell, d: Direction| -> Result<Option<(Cell, Piece)>, AnalysisError> {
        let Some(n) = p.neighbor(cell, d) else { return Ok(None) };
        let k = p.get(n).expect("neighbor exists").k();
        Piece::leaving(k, d.opposite()).map(|pc| Some((n, pc))).ok_or(AnalysisError::Broken { cell, dir: d })
    };

    let mut seen: HashSet<LineStep> = HashSet::new();
    let mut lines = Vec::new();
    for cell in p.cells() {
        for piece in Piece::ALL {
            let start = LineStep { cell, piece };
            if seen.contains(&start) {
                continue;
            }
            // Walk backwards to the line's beginning, or around a loop.
            let mut first = start;
            let mut closed = false;
            loop {
                let kf = p.get(first.cell).unwrap().k();
                let (entry_dir, _) = first.piece.ends(kf);
                match piece_leaving(first.cell, entry_dir)? {
                    None => break,
                    Some((c, pc)) => {
                        first = LineStep { cell: c, piece: pc };
                        if first == start {
                            closed = true;
                            break;
                        }
                    }
                }
            }
            let mut steps = vec![first];
            let mut cur = first;
            loop {
                let kc = p.get(cur.cell).unwrap().k();
                let (_, exit_dir) = cur.piece.ends(kc);
                match piece_entering(cur.cell, exit_dir)? {
                    None => break,
                    Some((c, pc)) => {
                        cur = LineStep { cell: c, piece: pc };
                        if cur == first {
                            break;
                        }
                        steps.push(cur);
                    }
                }
            }
            for s in &steps {
                seen.insert(*s);
            }
            if closed {
                let pos = steps.iter().enumerate().min_by_key(|(_, s)| **s).map(|(i, _)| i).unwrap();
                steps.rotate_left(pos);
            }
            lines.push(R1Line { steps, closed });
        }
    }
    lines.sort_by_key(|l| (l.min_cell(), l.steps[0]));
    Ok(lines)
}

/// Splits lines into straight runs and closed lines into triangles.
pub fn analyze(p: &Patch) -> Result<Tracing, AnalysisError> {
    let lines = trace_lines(p)?;
    let mut step_at = HashMap::new();
    let mut edges = Vec::new();
    let mut irregular = Vec::new();
    let mut loop_runs: Vec<(usize, Vec<usize>)> = Vec::new();

    for (li, line) in lines.iter().enumerate() {
        for (si, s) in line.steps.iter().enumerate() {
            step_at.insert(*s, (li, si));
        }
        let n = line.steps.len();
        // For closed lines start scanning just after a turn so runs do not wrap.
        let offset =
            if line.closed { line.steps.iter().position(|s| s.piece.is_turn()).map(|i| (i + 1) % n) } else { Some(0) };
        let mut runs_here = Vec::new();
        match offset {
            None => {
                // A closed line with no turn wraps around a torus.
                let cells: Vec<Cell> = line.steps.iter().map(|s| s.cell).collect();
                runs_here.push(edges.len());
                edges.push(make_edge(p, cells, li, true, true));
            }
            Some(off) => {
                let mut i = 0;
                while i < n {
                    let s = line.steps[(off + i) % n];
                    if s.piece.is_turn() {
                        i += 1;
                        continue;
                    }
                    let begin = i;
                    let mut cells = Vec::new();
                    while i < n && !line.steps[(off + i) % n].piece.is_turn() {
                        cells.push(line.steps[(off + i) % n].cell);
                        i += 1;
                    }
                    let ts = !line.closed && begin == 0;
                    let te = !line.closed && i == n;
                    runs_here.push(edges.len());
                    edges.push(make_edge(p, cells, li, ts, te));
                }
            }
        }
        if line.closed {
            loop_runs.push((li, runs_here));
        }
    }

    // Renumber runs by smallest cell.
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| edges[i].cells.iter().min().copied());
    let mut new_id = vec![0; edges.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let mut sorted: Vec<Option<R1Edge>> = edges.into_iter().map(Some).collect();
    let edges: Vec<R1Edge> = order.iter().map(|&i| sorted[i].take().unwrap()).collect();
    let edge_of_cell: HashMap<Cell, usize> =
        edges.iter().enumerate().flat_map(|(i, e)| e.cells.iter().map(move |c| (*c, i))).collect();

    let mut triangles = Vec::new();
    let mut triangle_of_line = HashMap::new();
    for (li, runs) in loop_runs {
        let line = &lines[li];
        let corners: Vec<Cell> = line.steps.iter().filter(|s| s.piece.is_turn()).map(|s| s.cell).collect();
        let lens: Vec<usize> = runs.iter().map(|&r| sorted_len(&edges, new_id[r])).collect();
        let regular =
            corners.len() == 3 && (runs.is_empty() || (runs.len() == 3 && lens.iter().all(|&l| l == lens[0])));
        if !regular {
            irregular.push(li);
            continue;
        }
        let side = lens.first().copied().unwrap_or(0);
        triangle_of_line.insert(li, triangles.len());
        triangles.push(Triangle {
            line: li,
            size: side + 1,
            corners: [corners[0], corners[1], corners[2]],
            edges: runs.iter().map(|&r| new_id[r]).collect(),
            anticlockwise: line.net_turning() == 6,
        });
    }

    Ok(Tracing { lines, edges, triangles, irregular_loops: irregular, step_at, edge_of_cell, triangle_of_line })
}

fn sorted_len(edges: &[R1Edge], id: usize) -> usize {
    edges[id].length()
}

fn make_edge(p: &Patch, cells: Vec<Cell>, line: usize, ts: bool, te: bool) -> R1Edge {
    let k = p.get(cells[0]).unwrap().k();
    let charges: Vec<Option<ChargeSign>> = cells.iter().map(|c| p.get(*c).unwrap().pose().map(tile_charge)).collect();
    let consistent = charges.iter().all(|c| *c == charges[0]);
    let charge = if consistent { charges[0] } else { None };
    R1Edge {
        cells,
        direction: Direction::new(k as i32),
        charge,
        charge_consistent: consistent,
        truncated_start: ts,
        truncated_end: te,
        line,
    }
}

/// The triangles among traced lines.
pub fn detect_triangles(t: &Tracing) -> &[Triangle] {
    &t.triangles
}

impl Tracing {
    /// The run holding the straight segment of `cell`.
    pub fn edge_of(&self, cell: Cell) -> Option<usize> {
        self.edge_of_cell.get(&cell).copied()
    }

    /// `(line, position)` of a piece.
    pub fn locate(&self, cell: Cell, piece: Piece) -> Option<(usize, usize)> {
        self.step_at.get(&LineStep { cell, piece }).copied()
    }

    /// The triangle a piece belongs to, if its line is one.
    pub fn triangle_through(&self, cell: Cell, piece: Piece) -> Option<&Triangle> {
        let (li, _) = self.locate(cell, piece)?;
        self.triangle_of_line.get(&li).map(|&t| &self.triangles[t])
    }

    pub fn triangle_of_line(&self, line: usize) -> Option<&Triangle> {
        self.triangle_of_line.get(&line).map(|&t| &self.triangles[t])
    }

    /// The step following `pos` on `line`, wrapping on closed lines.
    fn next_step(&self, line: usize, pos: usize) -> Option<LineStep> {
        let l = &self.lines[line];
        if pos + 1 < l.steps.len() {
            Some(l.steps[pos + 1])
        } else if l.closed {
            Some(l.steps[0])
        } else {
            None
        }
    }

    fn prev_step(&self, line: usize, pos: usize) -> Option<LineStep> {
        let l = &self.lines[line];
        if pos > 0 {
            Some(l.steps[pos - 1])
        } else if l.closed {
            l.steps.last().copied()
        } else {
            None
        }
    }

    /// The edge `e` leads to through its terminating turn, with its label.
    /// `None` when `e` runs into the patch boundary.
    pub fn leads_to(&self, e: usize) -> Option<(usize, LeadLabel, Cell)> {
        let edge = &self.edges[e];
        if edge.truncated_end {
            return None;
        }
        let last = *edge.cells.last()?;
        let (li, pos) = self.locate(last, Piece::Straight)?;
        let turn = self.next_step(li, pos)?;
        debug_assert!(turn.piece.is_turn());
        let target = self.edge_of(turn.cell)?;
        let label = match turn.piece {
            Piece::TopTurn => LeadLabel::Near,
            _ => LeadLabel::Far,
        };
        Some((target, label, turn.cell))
    }
}

/// `leads_to` for a run given by index into [`Tracing::edges`].
pub fn leads_to(t: &Tracing, e: usize) -> Option<(usize, LeadLabel)> {
    t.leads_to(e).map(|(to, l, _)| (to, l))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Node ids in increasing order; the first is the root.
    pub nodes: Vec<usize>,
    pub has_truncated: bool,
}

impl Component {
    pub fn root(&self) -> usize {
        self.nodes[0]
    }
}

/// Straight runs linked by "leads to" arcs.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    pub tracing: Tracing,
    pub arcs: Vec<Arc>,
    /// Outgoing arc per node (out-degree is at most one).
    pub out: Vec<Option<usize>>,
    /// Weakly connected components over all nodes, ordered by root.
    pub components: Vec<Component>,
    pub component_of: Vec<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

pub fn build_edge_graph(p: &Patch) -> Result<EdgeGraph, AnalysisError> {
    Ok(EdgeGraph::from_tracing(analyze(p)?))
}

impl EdgeGraph {
    pub fn from_tracing(tracing: Tracing) -> Self {
        let n = tracing.edges.len();
        let mut arcs = Vec::new();
        let mut out = vec![None; n];
        for (e, slot) in out.iter_mut().enumerate() {
            if let Some((to, label, turn_cell)) = tracing.leads_to(e) {
                *slot = Some(arcs.len());
                arcs.push(Arc { from: e, to, label, turn_cell });
            }
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for a in &arcs {
            union(&mut parent, a.from, a.to);
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            by_root.entry(r).or_default().push(v);
        }
        let mut components: Vec<Component> = by_root
            .into_values()
            .map(|nodes| {
                let has_truncated = nodes.iter().any(|&v| tracing.edges[v].boundary_truncated());
                Component { nodes, has_truncated }
            })
            .collect();
        components.sort_by_key(|c| c.root());
        let mut component_of = vec![0; n];
        for (ci, c) in components.iter().enumerate() {
            for &v in &c.nodes {
                component_of[v] = ci;
            }
        }
        EdgeGraph { tracing, arcs, out, components, component_of }
    }

    pub fn node_count(&self) -> usize {
        self.tracing.edges.len()
    }

    pub fn edge(&self, id: usize) -> &R1Edge {
        &self.tracing.edges[id]
    }

    /// Number of components of the subgraph on untruncated nodes.
    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let interior = |v: usize| !self.tracing.edges[v].boundary_truncated();
        let mut parent: Vec<usize> = (0..n).collect();
        for a in &self.arcs {
            if interior(a.from) && interior(a.to) {
                union(&mut parent, a.from, a.to);
            }
        }
        (0..n).filter(|&v| interior(v) && find(&mut parent, v) == v).count()
    }

    /// Components over every node, truncated ones included.
    pub fn total_component_count(&self) -> usize {
        self.components.len()
    }

    /// True when following arcs from any node never revisits a node.
    pub fn is_acyclic(&self) -> bool {
        let n = self.node_count();
        let mut state = vec![0u8; n];
        for s in 0..n {
            let mut path = Vec::new();
            let mut v = s;
            loop {
                if state[v] == 2 {
                    break;
                }
                if state[v] == 1 {
                    return false;
                }
                state[v] = 1;
                path.push(v);
                match self.out[v] {
                    Some(a) => v = self.arcs[a].to,
                    None => break,
                }
            }
            for v in path {
                state[v] = 2;
            }
        }
        true
    }
}

/// Tally of one property check over arcs or configurations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOutcome {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<usize>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (checked={} failed={} skipped={})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.failures.len(),
            self.skipped
        )
    }
}

/// Near arcs join equal charges, far arcs opposite ones. Arcs with an
/// uncharged end are skipped. Failures are arc indices.
pub fn check_charge_transfer(g: &EdgeGraph) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    for (i, a) in g.arcs.iter().enumerate() {
        let (Some(c1), Some(c2)) = (g.edge(a.from).charge, g.edge(a.to).charge) else {
            out.skipped += 1;
            continue;
        };
        out.checked += 1;
        let ok = match a.label {
            LeadLabel::Near => c1 == c2,
            LeadLabel::Far => c1 == c2.star(),
        };
        if !ok {
            out.failures.push(i);
        }
    }
    out
}

/// Directed 3-cycles made of far arcs, each reported once by its smallest node.
pub fn fff_cycles(g: &EdgeGraph) -> Vec<[usize; 3]> {
    let far_next = |v: usize| g.out[v].map(|a| g.arcs[a]).filter(|a| a.label == LeadLabel::Far).map(|a| a.to);
    let mut out = Vec::new();
    for v in 0..g.node_count() {
        let Some(b) = far_next(v) else { continue };
        let Some(c) = far_next(b) else { continue };
        if far_next(c) == Some(v) && v < b && v < c {
            out.push([v, b, c]);
        }
    }
    out
}

pub fn check_no_fff_cycle(g: &EdgeGraph) -> bool {
    fff_cycles(g).is_empty()
}

/// Tiles of the target run counted from the turning tile toward the side
/// away from the source's triangle, and whether that count reached a
/// terminating turn inside the patch.
pub fn run_beyond_turn(g: &EdgeGraph, arc: &Arc) -> (usize, bool) {
    let target = g.edge(arc.to);
    let pos = target.cells.iter().position(|c| *c == arc.turn_cell).expect("turn tile lies on target");
    match arc.label {
        // The target runs away from the source's triangle behind the turn tile.
        LeadLabel::Near => (pos + 1, !target.truncated_start),
        LeadLabel::Far => (target.cells.len() - pos, !target.truncated_end),
    }
}

/// For arcs whose source is complete and whose run is fully inside the
/// patch, the run is longer than the source.
pub fn check_length_growth(g: &EdgeGraph) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    for (i, a) in g.arcs.iter().enumerate() {
        let src = g.edge(a.from);
        let (run, complete) = run_beyond_turn(g, a);
        if src.boundary_truncated() || !complete {
            out.skipped += 1;
            continue;
        }
        out.checked += 1;
        if run <= src.length() {
            out.failures.push(i);
        }
    }
    out
}

/// Largest power of two dividing `n` (`n ≥ 1`).
pub fn ruler(n: usize) -> usize {
    n & n.wrapping_neg()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    /// Sizes of complete triangles that are not powers of two.
    pub bad_sizes: Vec<usize>,
    pub triangles_checked: usize,
    /// Turning configurations with at least one tile of room.
    pub configurations: usize,
    /// Positions compared against the ruler sequence.
    pub ruler: CheckOutcome,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.bad_sizes.is_empty() && self.ruler.passed()
    }
}

/// Sizes of the triangles met along the outgoing run of the turn at
/// `(line, pos)`, from the turning tile outward: `None` for incomplete ones.
/// Also returns the room `k`: the lesser of the two adjoining run lengths.
pub fn sizes_along_turn(t: &Tracing, line: usize, pos: usize) -> (usize, Vec<Option<usize>>) {
    let l = &t.lines[line];
    let count_straights = |forward: bool| -> usize {
        let mut n = 0;
        let mut p = pos;
        loop {
            let s = if forward { t.next_step(line, p) } else { t.prev_step(line, p) };
            match s {
                Some(s) if !s.piece.is_turn() => {
                    n += 1;
                    p = t.locate(s.cell, s.piece).unwrap().1;
                    if n > l.steps.len() {
                        break;
                    }
                }
                _ => break,
            }
        }
        n
    };
    let after = count_straights(true);
    let before = count_straights(false);
    let room = after.min(before);
    let mut sizes = Vec::with_capacity(after);
    let mut p = pos;
    for _ in 0..after {
        let s = t.next_step(line, p).unwrap();
        p = t.locate(s.cell, s.piece).unwrap().1;
        sizes.push(t.triangle_through(s.cell, Piece::TopTurn).map(|tr| tr.size));
    }
    (room, sizes)
}

/// Triangle sizes are powers of two, and along every turn with `k` tiles of
/// room the `n`-th inner triangle has size `ruler(n)` for `n = 1..=k`.
pub fn check_structure(t: &Tracing) -> StructureReport {
    let mut rep = StructureReport::default();
    for tr in &t.triangles {
        rep.triangles_checked += 1;
        if !tr.size.is_power_of_two() {
            rep.bad_sizes.push(tr.size);
        }
    }
    for (li, line) in t.lines.iter().enumerate() {
        for (pos, s) in line.steps.iter().enumerate() {
            if !s.piece.is_turn() {
                continue;
            }
            let (room, sizes) = sizes_along_turn(t, li, pos);
            if room == 0 {
                continue;
            }
            rep.configurations += 1;
            for n in 1..=room {
                match sizes[n - 1] {
                    None => rep.ruler.skipped += 1,
                    Some(sz) => {
                        rep.ruler.checked += 1;
                        if sz != ruler(n) {
                            rep.ruler.failures.push(n);
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Everything the analyzer reports about one patch.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub tiles: usize,
    pub lines: usize,
    pub closed_lines: usize,
    pub triangles_by_size: BTreeMap<usize, usize>,
    pub clockwise_triangles: usize,
    pub irregular_loops: usize,
    pub edges: usize,
    pub truncated_edges: usize,
    pub arcs: usize,
    pub near_arcs: usize,
    pub component_count: usize,
    pub total_components: usize,
    pub acyclic: bool,
    pub inconsistent_edge_charges: usize,
    pub charge_transfer: CheckOutcome,
    pub fff_cycles: usize,
    pub length_growth: CheckOutcome,
    pub structure: StructureReport,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.clockwise_triangles == 0
            && self.irregular_loops == 0
            && self.inconsistent_edge_charges == 0
            && self.charge_transfer.passed()
            && self.fff_cycles == 0
            && self.length_growth.passed()
            && self.structure.passed()
    }
}

pub fn report(p: &Patch) -> Result<AnalysisReport, AnalysisError> {
    let g = build_edge_graph(p)?;
    let t = &g.tracing;
    let mut by_size = BTreeMap::new();
    for tr in &t.triangles {
        *by_size.entry(tr.size).or_insert(0) += 1;
    }
    Ok(AnalysisReport {
        tiles: p.len(),
        lines: t.lines.len(),
        closed_lines: t.lines.iter().filter(|l| l.closed).count(),
        triangles_by_size: by_size,
        clockwise_triangles: t.triangles.iter().filter(|tr| !tr.anticlockwise).count(),
        irregular_loops: t.irregular_loops.len(),
        edges: t.edges.len(),
        truncated_edges: t.edges.iter().filter(|e| e.boundary_truncated()).count(),
        arcs: g.arcs.len(),
        near_arcs: g.arcs.iter().filter(|a| a.label == LeadLabel::Near).count(),
        component_count: g.component_count(),
        total_components: g.total_component_count(),
        acyclic: g.is_acyclic(),
        inconsistent_edge_charges: t.edges.iter().filter(|e| !e.charge_consistent).count(),
        charge_transfer: check_charge_transfer(&g),
        fff_cycles: fff_cycles(&g).len(),
        length_growth: check_length_growth(&g),
        structure: check_structure(t),
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tiles: {}", self.tiles)?;
        writeln!(f, "lines: {} (closed {})", self.lines, self.closed_lines)?;
        let sizes: Vec<String> = self.triangles_by_size.iter().map(|(s, n)| format!("{s}:{n}")).collect();
        writeln!(f, "triangles by size: {}", if sizes.is_empty() { "-".into() } else { sizes.join(" ") })?;
        writeln!(f, "clockwise triangles: {}", self.clockwise_triangles)?;
        writeln!(f, "irregular loops: {}", self.irregular_loops)?;
        writeln!(f, "edges: {} (truncated {})", self.edges, self.truncated_edges)?;
        writeln!(f, "arcs: {} (N {}, F {})", self.arcs, self.near_arcs, self.arcs - self.near_arcs)?;
        writeln!(f, "components (interior): {}", self.component_count)?;
        writeln!(f, "components (all): {}", self.total_components)?;
        writeln!(f, "acyclic: {}", self.acyclic)?;
        writeln!(f, "edge charge consistency: {}", if self.inconsistent_edge_charges == 0 { "PASS" } else { "FAIL" })?;
        writeln!(f, "charge transfer: {}", self.charge_transfer)?;
        writeln!(
            f,
            "no FFF cycle: {} ({} found)",
            if self.fff_cycles == 0 { "PASS" } else { "FAIL" },
            self.fff_cycles
        )?;
        writeln!(f, "length growth: {}", self.length_growth)?;
        let pow = if self.structure.bad_sizes.is_empty() { "PASS" } else { "FAIL" };
        writeln!(f, "power-of-two sizes: {} (triangles={})", pow, self.structure.triangles_checked)?;
        writeln!(f, "ruler sequence: {} (configurations={})", self.structure.ruler, self.structure.configurations)?;
        writeln!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
