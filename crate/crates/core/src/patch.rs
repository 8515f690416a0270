//! Finite patches of placed tiles and rule validation over them.

use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::{Cell, Direction, EdgeId, TorusDomain};
use crate::tile::{r1_match, r2_match, world_decoration, Decoration, TilePose};

/// A cell's content: a fully decorated tile, or a rotation with the
/// chirality (and hence the charges) left unassigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoseEntry {
    Full(TilePose),
    Skeleton { k: u8 },
}

impl PoseEntry {
    pub fn k(self) -> u8 {
        match self {
            PoseEntry::Full(p) => p.k(),
            PoseEntry::Skeleton { k } => k,
        }
    }

    pub fn pose(self) -> Option<TilePose> {
        match self {
            PoseEntry::Full(p) => Some(p),
            PoseEntry::Skeleton { .. } => None,
        }
    }

    /// A pose with the same black lines; chirality defaults to 0 for skeletons.
    pub fn r1_pose(self) -> TilePose {
        match self {
            PoseEntry::Full(p) => p,
            PoseEntry::Skeleton { k } => TilePose::new(k, 0),
        }
    }

    pub fn stripped(self) -> PoseEntry {
        PoseEntry::Skeleton { k: self.k() }
    }
}

impl From<TilePose> for PoseEntry {
    fn from(p: TilePose) -> Self {
        PoseEntry::Full(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    R1,
    R2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
        })
    }
}

/// A failed rule at an edge with tiles on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub edge: EdgeId,
    pub rule: Rule,
    /// Decorations on the canonical side, then on the neighbouring side.
    /// Skeleton entries report their chirality-0 decoration.
    pub details: (Decoration, Decoration),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation at {}: {} vs {}", self.rule, self.edge, self.details.0, self.details.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("cell {0} is already occupied")]
pub struct Occupied(pub Cell);

/// A finite map from cells to tile entries, optionally on a torus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Patch {
    cells: BTreeMap<Cell, PoseEntry>,
    torus: Option<TorusDomain>,
}

impl Patch {
    pub fn new() -> Self {
        Patch::default()
    }

    pub fn on_torus(torus: TorusDomain) -> Self {
        Patch { cells: BTreeMap::new(), torus: Some(torus) }
    }

    pub fn torus(&self) -> Option<TorusDomain> {
        self.torus
    }

    fn key(&self, cell: Cell) -> Cell {
        match &self.torus {
            Some(t) => t.reduce(cell),
            None => cell,
        }
    }

    /// Inserts or replaces the entry at `cell`.
    pub fn set(&mut self, cell: Cell, entry: impl Into<PoseEntry>) {
        let key = self.key(cell);
        self.cells.insert(key, entry.into());
    }

    /// Inserts into an empty cell.
    pub fn insert(&mut self, cell: Cell, entry: impl Into<PoseEntry>) -> Result<(), Occupied> {
        let key = self.key(cell);
        if self.cells.contains_key(&key) {
            return Err(Occupied(key));
        }
        self.cells.insert(key, entry.into());
        Ok(())
    }

    pub fn remove(&mut self, cell: Cell) -> Option<PoseEntry> {
        let key = self.key(cell);
        self.cells.remove(&key)
    }

    pub fn get(&self, cell: Cell) -> Option<PoseEntry> {
        self.cells.get(&self.key(cell)).copied()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains_key(&self.key(cell))
    }

    /// The stored key of the `d`-neighbour of `cell`, if occupied.
    pub fn neighbor(&self, cell: Cell, d: Direction) -> Option<Cell> {
        let n = self.key(cell.neighbor(d));
        self.cells.contains_key(&n).then_some(n)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Entries in lexicographic cell order.
    pub fn iter(&self) -> impl Iterator<Item = (Cell, PoseEntry)> + '_ {
        self.cells.iter().map(|(c, e)| (*c, *e))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.keys().copied()
    }

    /// True when every entry carries charges.
    pub fn is_full(&self) -> bool {
        self.cells.values().all(|e| e.pose().is_some())
    }

    /// Each shared edge once, as `(cell, d, neighbour)` with `d` in `0..3`.
    /// On a torus this is each quotient edge once (self-adjacency included).
    pub fn shared_edges(&self) -> Vec<(Cell, Direction, Cell)> {
        let mut out = Vec::new();
        for cell in self.cells.keys() {
            for d in &Direction::ALL[..3] {
                if let Some(n) = self.neighbor(*cell, *d) {
                    out.push((*cell, *d, n));
                }
            }
        }
        out
    }

    /// Checks R1 at every shared edge, and R2 where both sides carry charges.
    /// Edges with an empty side impose nothing.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (cell, d, n) in self.shared_edges() {
            let a = self.cells[&cell];
            let b = self.cells[&n];
            let (pa, pb) = (a.r1_pose(), b.r1_pose());
            let details = (world_decoration(pa, d), world_decoration(pb, d.opposite()));
            let edge = EdgeId { cell, dir: d };
            if !r1_match(pa, pb, d) {
                out.push(Violation { edge, rule: Rule::R1, details });
            }
            if let (PoseEntry::Full(pa), PoseEntry::Full(pb)) = (a, b) {
                if !r2_match(pa, pb, d) {
                    out.push(Violation { edge, rule: Rule::R2, details });
                }
            }
        }
        out
    }

    /// Forgets all charges.
    pub fn strip_charges(&self) -> Patch {
        Patch { cells: self.cells.iter().map(|(c, e)| (*c, e.stripped())).collect(), torus: self.torus }
    }

    /// Rotates positions and poses by `60°·n` about the origin.
    pub fn rotated(&self, n: i32) -> Patch {
        assert!(self.torus.is_none(), "rotation of torus patches is not supported");
        let cells = self
            .cells
            .iter()
            .map(|(c, e)| {
                let e = match *e {
                    PoseEntry::Full(p) => PoseEntry::Full(p.rotated(n)),
                    PoseEntry::Skeleton { k } => PoseEntry::Skeleton { k: (k as i32 + n).rem_euclid(6) as u8 },
                };
                (c.rotate(n), e)
            })
            .collect();
        Patch { cells, torus: None }
    }

    pub fn translated(&self, by: Cell) -> Patch {
        assert!(self.torus.is_none(), "translation of torus patches is not supported");
        Patch { cells: self.cells.iter().map(|(c, e)| (*c + by, *e)).collect(), torus: None }
    }

    /// Keeps the entries whose cells satisfy `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(Cell) -> bool) -> Patch {
        Patch {
            cells: self.cells.iter().filter(|(c, _)| keep(**c)).map(|(c, e)| (*c, *e)).collect(),
            torus: self.torus,
        }
    }
}

impl FromIterator<(Cell, PoseEntry)> for Patch {
    fn from_iter<I: IntoIterator<Item = (Cell, PoseEntry)>>(iter: I) -> Self {
        Patch { cells: iter.into_iter().collect(), torus: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn patch(entries: &[((i32, i32), PoseEntry)]) -> Patch {
        entries.iter().map(|((q, r), e)| (Cell::new(*q, *r), *e)).collect()
    }

    fn full(k: u8, m: u8) -> PoseEntry {
        PoseEntry::Full(TilePose::new(k, m))
    }

    #[test]
    fn validate_examples() {
        assert!(patch(&[((0, 0), full(0, 0)), ((1, 0), full(0, 0))]).validate().is_empty());
        let bad = patch(&[((0, 0), full(0, 0)), ((1, 0), full(0, 1))]).validate();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].rule, Rule::R2);
        assert_eq!(bad[0].edge, EdgeId::canonical(Cell::new(0, 0), Direction::new(0)));
        assert!(patch(&[((0, 0), full(3, 1))]).validate().is_empty());
        assert!(Patch::new().validate().is_empty());
    }

    #[test]
    fn strip_examples() {
        let p = patch(&[((0, 0), full(2, 1))]);
        let s = p.strip_charges();
        assert_eq!(s.get(Cell::ORIGIN), Some(PoseEntry::Skeleton { k: 2 }));
        assert_eq!(s.strip_charges(), s);
    }

    #[test]
    fn skeletons_only_check_r1() {
        let p = patch(&[((0, 0), full(0, 0)), ((1, 0), PoseEntry::Skeleton { k: 0 })]);
        assert!(p.validate().is_empty());
        let q = patch(&[((0, 0), full(0, 0)), ((1, 0), PoseEntry::Skeleton { k: 3 })]);
        assert_eq!(q.validate().len(), 1);
        assert_eq!(q.validate()[0].rule, Rule::R1);
    }

    #[test]
    fn insert_rejects_duplicates() {
        let mut p = Patch::new();
        p.insert(Cell::ORIGIN, TilePose::new(0, 0)).unwrap();
        assert!(p.insert(Cell::ORIGIN, TilePose::new(1, 0)).is_err());
        let mut t = Patch::on_torus(TorusDomain::new(2, 0, 1).unwrap());
        t.insert(Cell::new(0, 0), TilePose::new(0, 0)).unwrap();
        assert_eq!(t.insert(Cell::new(2, 0), TilePose::new(0, 0)), Err(Occupied(Cell::ORIGIN)));
    }

    #[test]
    fn torus_checks_each_quotient_edge_once() {
        for t in crate::lattice::enumerate_sublattices(6) {
            let mut p = Patch::on_torus(t);
            for c in t.representatives() {
                p.set(c, TilePose::new(0, 0));
            }
            assert_eq!(p.shared_edges().len(), 3 * t.index());
        }
        let mut single = Patch::on_torus(TorusDomain::new(1, 0, 1).unwrap());
        single.set(Cell::ORIGIN, TilePose::new(0, 0));
        let v = single.validate();
        assert!(v.iter().any(|v| v.rule == Rule::R1 && v.edge.dir == Direction::new(1)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn entry() -> impl Strategy<Value = PoseEntry> {
            prop_oneof![
                (0..6u8, 0..2u8).prop_map(|(k, m)| PoseEntry::Full(TilePose::new(k, m))),
                (0..6u8).prop_map(|k| PoseEntry::Skeleton { k }),
            ]
        }

        fn small_patch() -> impl Strategy<Value = Vec<((i32, i32), PoseEntry)>> {
            proptest::collection::vec(((-3..3i32, -3..3i32), entry()), 0..30)
        }

        proptest! {
            #[test]
            fn validate_is_order_independent(entries in small_patch(), keys in proptest::collection::vec(any::<u32>(), 30)) {
                let mut unique: Vec<(Cell, PoseEntry)> = Vec::new();
                for ((q, r), e) in &entries {
                    let c = Cell::new(*q, *r);
                    if !unique.iter().any(|(u, _)| *u == c) {
                        unique.push((c, *e));
                    }
                }
                let a: Patch = unique.iter().copied().collect();
                let mut order: Vec<usize> = (0..unique.len()).collect();
                order.sort_by_key(|&i| keys[i]);
                let mut b = Patch::new();
                for i in order {
                    b.insert(unique[i].0, unique[i].1).unwrap();
                }
                prop_assert_eq!(a.validate(), b.validate());
            }

            #[test]
            fn stripping_keeps_only_r1_violations(entries in small_patch()) {
                let p: Patch = entries.iter().map(|((q, r), e)| (Cell::new(*q, *r), *e)).collect();
                let full = p.validate();
                let stripped = p.strip_charges().validate();
                prop_assert!(stripped.iter().all(|v| v.rule == Rule::R1));
                let r1: Vec<_> = full.iter().filter(|v| v.rule == Rule::R1).map(|v| v.edge).collect();
                let st: Vec<_> = stripped.iter().map(|v| v.edge).collect();
                prop_assert_eq!(st, r1);
            }

            #[test]
            fn rotation_preserves_violation_count(entries in small_patch(), n in 0..6i32) {
                let p: Patch = entries.iter().map(|((q, r), e)| (Cell::new(*q, *r), *e)).collect();
                prop_assert_eq!(p.validate().len(), p.rotated(n).validate().len());
            }
        }
    }
}
