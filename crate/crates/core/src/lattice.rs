//! Hexagonal lattice substrate: axial cells, edge and vertex labels, and
//! periodic quotients of the lattice.
//!
//! Hexagons are pointy-topped. Direction `d` points at `60°·d` (y up), so
//! edge `d` of a hexagon faces that way, and vertex `j` sits at `30° + 60°·j`.
//! Edge `d` spans vertices `d - 1` and `d`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Axial step vectors, indexed by direction.
pub const STEPS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// A hexagon in axial coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub q: i32,
    pub r: i32,
}

impl Cell {
    pub const ORIGIN: Cell = Cell { q: 0, r: 0 };

    pub const fn new(q: i32, r: i32) -> Self {
        Cell { q, r }
    }

    pub fn neighbor(self, d: Direction) -> Cell {
        self + d.step()
    }

    /// Hex distance between two cells.
    pub fn distance(self, other: Cell) -> u32 {
        let dq = self.q - other.q;
        let dr = self.r - other.r;
        ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
    }

    /// Rotates the cell position by `60°·n` about the origin.
    pub fn rotate(self, n: i32) -> Cell {
        let mut c = self;
        for _ in 0..n.rem_euclid(6) {
            c = Cell::new(-c.r, c.q + c.r);
        }
        c
    }
}

/// Returns `c + step(d)`.
pub fn neighbor(c: Cell, d: Direction) -> Cell {
    c.neighbor(d)
}

impl Add for Cell {
    type Output = Cell;
    fn add(self, o: Cell) -> Cell {
        Cell::new(self.q + o.q, self.r + o.r)
    }
}

impl Sub for Cell {
    type Output = Cell;
    fn sub(self, o: Cell) -> Cell {
        Cell::new(self.q - o.q, self.r - o.r)
    }
}

impl Neg for Cell {
    type Output = Cell;
    fn neg(self) -> Cell {
        Cell::new(-self.q, -self.r)
    }
}

impl Mul<i32> for Cell {
    type Output = Cell;
    fn mul(self, k: i32) -> Cell {
        Cell::new(self.q * k, self.r * k)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.r)
    }
}

/// One of the six edge directions, `0..6`, anticlockwise from East.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(u8);

impl Direction {
    pub const ALL: [Direction; 6] =
        [Direction(0), Direction(1), Direction(2), Direction(3), Direction(4), Direction(5)];

    /// Reduces `d` modulo 6.
    pub const fn new(d: i32) -> Self {
        Direction(d.rem_euclid(6) as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn rotate(self, n: i32) -> Direction {
        Direction::new(self.0 as i32 + n)
    }

    pub const fn opposite(self) -> Direction {
        self.rotate(3)
    }

    pub fn step(self) -> Cell {
        let (q, r) = STEPS[self.index()];
        Cell::new(q, r)
    }

    /// The two vertices bounding this edge, clockwise end first.
    pub const fn vertices(self) -> [VertexIndex; 2] {
        [VertexIndex::new(self.0 as i32 - 1), VertexIndex::new(self.0 as i32)]
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

/// Vertex `j` of a hexagon, at angle `30° + 60°·j` from its centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexIndex(u8);

impl VertexIndex {
    pub const fn new(v: i32) -> Self {
        VertexIndex(v.rem_euclid(6) as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn rotate(self, n: i32) -> VertexIndex {
        VertexIndex::new(self.0 as i32 + n)
    }

    pub const fn is_on_edge(self, d: Direction) -> bool {
        let [a, b] = d.vertices();
        self.0 == a.0 || self.0 == b.0
    }
}

impl fmt::Display for VertexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("vertex {vertex} is not incident to edge {edge}")]
pub struct NotIncident {
    pub edge: Direction,
    pub vertex: VertexIndex,
}

/// Maps vertex `v` of edge `d` to the index the `d`-neighbour uses for the
/// same point: `d ↦ d + 2` and `d - 1 ↦ d + 3`.
pub fn vertex_correspondence(d: Direction, v: VertexIndex) -> Result<VertexIndex, NotIncident> {
    let [lo, hi] = d.vertices();
    if v == hi {
        Ok(v.rotate(2))
    } else if v == lo {
        Ok(v.rotate(4))
    } else {
        Err(NotIncident { edge: d, vertex: v })
    }
}

/// An undirected lattice edge in canonical form: direction in `0..3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub cell: Cell,
    pub dir: Direction,
}

impl EdgeId {
    pub fn canonical(cell: Cell, d: Direction) -> EdgeId {
        if d.index() < 3 {
            EdgeId { cell, dir: d }
        } else {
            EdgeId { cell: cell.neighbor(d), dir: d.opposite() }
        }
    }

    /// The two cells sharing this edge.
    pub fn cells(self) -> (Cell, Cell) {
        (self.cell, self.cell.neighbor(self.dir))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.cells();
        write!(f, "{a}-{b} [{}]", self.dir)
    }
}

/// A finite-index sublattice given by its Hermite normal form `[[a, b], [0, c]]`.
/// The lattice is spanned by the columns `(a, 0)` and `(b, c)` in axial
/// coordinates. Representatives are `{(i, j) : 0 ≤ i < a, 0 ≤ j < c}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusDomain {
    a: i32,
    b: i32,
    c: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("[[{a},{b}],[0,{c}]] is not in Hermite normal form (need a ≥ 1, c ≥ 1, 0 ≤ b < a)")]
pub struct NotHermite {
    pub a: i32,
    pub b: i32,
    pub c: i32,
}

impl TorusDomain {
    pub fn new(a: i32, b: i32, c: i32) -> Result<Self, NotHermite> {
        if a >= 1 && c >= 1 && (0..a).contains(&b) {
            Ok(TorusDomain { a, b, c })
        } else {
            Err(NotHermite { a, b, c })
        }
    }

    pub fn basis(&self) -> [[i32; 2]; 2] {
        [[self.a, self.b], [0, self.c]]
    }

    pub fn abc(&self) -> (i32, i32, i32) {
        (self.a, self.b, self.c)
    }

    pub fn index(&self) -> usize {
        (self.a * self.c) as usize
    }

    /// Canonical representative of the coset of `cell`.
    pub fn reduce(&self, cell: Cell) -> Cell {
        let t = cell.r.div_euclid(self.c);
        let r = cell.r - t * self.c;
        let q = (cell.q - t * self.b).rem_euclid(self.a);
        Cell::new(q, r)
    }

    pub fn contains_vector(&self, v: Cell) -> bool {
        self.reduce(v) == Cell::ORIGIN
    }

    /// All representatives in row-major `(r, q)` order.
    pub fn representatives(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.index());
        for r in 0..self.c {
            for q in 0..self.a {
                out.push(Cell::new(q, r));
            }
        }
        out
    }

    /// True when the lattice is mapped to itself by a `60°·n` rotation.
    pub fn invariant_under_rotation(&self, n: i32) -> bool {
        let cols = [Cell::new(self.a, 0), Cell::new(self.b, self.c)];
        cols.iter().all(|v| self.contains_vector(v.rotate(n)))
    }
}

impl fmt::Display for TorusDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[0,{}]]", self.a, self.b, self.c)
    }
}

/// Every HNF sublattice of index at most `max_index`, ordered by index, then
/// `a`, then `b`.
pub fn enumerate_sublattices(max_index: usize) -> Vec<TorusDomain> {
    let mut out = Vec::new();
    for index in 1..=max_index as i32 {
        for a in 1..=index {
            if index % a != 0 {
                continue;
            }
            let c = index / a;
            for b in 0..a {
                out.push(TorusDomain { a, b, c });
            }
        }
    }
    out
}
