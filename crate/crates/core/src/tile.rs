//! The decorated hexagonal tile, its twelve poses, and the two edge rules.
//!
//! Each edge carries one black-line crossing (recorded by the vertex it is
//! offset toward) and one charge (a sign plus clockwise/anticlockwise
//! orientation flags). Rule R1 asks black lines to continue across an edge;
//! rule R2 forbids two clockwise charges of equal sign from meeting.

use std::fmt;
use std::sync::OnceLock;

use crate::lattice::{vertex_correspondence, Direction, VertexIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChargeSign {
    Plus,
    Minus,
}

impl ChargeSign {
    pub fn star(self) -> ChargeSign {
        match self {
            ChargeSign::Plus => ChargeSign::Minus,
            ChargeSign::Minus => ChargeSign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ChargeSign::Plus => '+',
            ChargeSign::Minus => '-',
        }
    }
}

impl fmt::Display for ChargeSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Nonempty subset of {clockwise, anticlockwise}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrientationFlags {
    Cw,
    Ccw,
    Both,
}

impl OrientationFlags {
    pub fn has_cw(self) -> bool {
        matches!(self, OrientationFlags::Cw | OrientationFlags::Both)
    }

    pub fn has_ccw(self) -> bool {
        matches!(self, OrientationFlags::Ccw | OrientationFlags::Both)
    }

    /// Orientation as seen in a mirror.
    pub fn swapped(self) -> OrientationFlags {
        match self {
            OrientationFlags::Cw => OrientationFlags::Ccw,
            OrientationFlags::Ccw => OrientationFlags::Cw,
            OrientationFlags::Both => OrientationFlags::Both,
        }
    }
}

impl fmt::Display for OrientationFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrientationFlags::Cw => "{CW}",
            OrientationFlags::Ccw => "{CCW}",
            OrientationFlags::Both => "{CW,CCW}",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Decoration {
    pub sign: ChargeSign,
    pub flags: OrientationFlags,
    /// The edge vertex the black-line crossing is offset toward.
    pub r1_near_vertex: VertexIndex,
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, near {})", self.sign, self.flags, self.r1_near_vertex)
    }
}

const fn deco(sign: ChargeSign, flags: OrientationFlags, near: i32) -> Decoration {
    Decoration { sign, flags, r1_near_vertex: VertexIndex::new(near) }
}

/// Decorations of the canonical tile, indexed by edge direction.
pub const BASE_TABLE: [Decoration; 6] = [
    deco(ChargeSign::Plus, OrientationFlags::Both, 0),
    deco(ChargeSign::Plus, OrientationFlags::Ccw, 1),
    deco(ChargeSign::Minus, OrientationFlags::Cw, 1),
    deco(ChargeSign::Minus, OrientationFlags::Both, 2),
    deco(ChargeSign::Minus, OrientationFlags::Ccw, 4),
    deco(ChargeSign::Plus, OrientationFlags::Cw, 4),
];

/// Rotation `k` (anticlockwise, `60°` steps) applied after an optional
/// reflection `m` across the vertical axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TilePose {
    k: u8,
    m: u8,
}

impl TilePose {
    pub const fn new(k: u8, m: u8) -> Self {
        assert!(k < 6 && m < 2);
        TilePose { k, m }
    }

    pub const fn k(self) -> u8 {
        self.k
    }

    pub const fn m(self) -> u8 {
        self.m
    }

    pub fn is_mirrored(self) -> bool {
        self.m == 1
    }

    /// Position in the fixed value order `(k ascending, m ascending)`.
    pub const fn index(self) -> usize {
        (self.k * 2 + self.m) as usize
    }

    pub const fn from_index(i: usize) -> Self {
        TilePose::new((i / 2) as u8, (i % 2) as u8)
    }

    pub fn all() -> impl Iterator<Item = TilePose> {
        (0..12).map(TilePose::from_index)
    }

    /// The pose after rotating the whole tile by a further `60°·n`.
    pub fn rotated(self, n: i32) -> TilePose {
        TilePose::new((self.k as i32 + n).rem_euclid(6) as u8, self.m)
    }

    pub fn with_chirality(self, m: u8) -> TilePose {
        TilePose::new(self.k, m)
    }
}

impl fmt::Display for TilePose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={},m={})", self.k, self.m)
    }
}

fn mirror_direction(d: Direction) -> Direction {
    Direction::new(3 - d.index() as i32)
}

fn mirror_vertex(v: VertexIndex) -> VertexIndex {
    VertexIndex::new(2 - v.index() as i32)
}

/// Decoration on world edge `d` of a tile in pose `p`.
pub fn world_decoration(p: TilePose, d: Direction) -> Decoration {
    let k = p.k as i32;
    let local = d.rotate(-k);
    if p.m == 0 {
        let b = BASE_TABLE[local.index()];
        Decoration { r1_near_vertex: b.r1_near_vertex.rotate(k), ..b }
    } else {
        let b = BASE_TABLE[mirror_direction(local).index()];
        Decoration { sign: b.sign, flags: b.flags.swapped(), r1_near_vertex: mirror_vertex(b.r1_near_vertex).rotate(k) }
    }
}

/// Black lines continue across the edge shared with the `d`-neighbour.
pub fn r1_match(pa: TilePose, pb: TilePose, d: Direction) -> bool {
    let a = world_decoration(pa, d).r1_near_vertex;
    let b = world_decoration(pb, d.opposite()).r1_near_vertex;
    vertex_correspondence(d, a).map(|v| v == b).unwrap_or(false)
}

/// Two clockwise charges meeting at the edge must have opposite signs.
pub fn r2_match(pa: TilePose, pb: TilePose, d: Direction) -> bool {
    let a = world_decoration(pa, d);
    let b = world_decoration(pb, d.opposite());
    !(a.flags.has_cw() && b.flags.has_cw() && a.sign == b.sign)
}

pub fn valid_adjacency(pa: TilePose, pb: TilePose, d: Direction) -> bool {
    r1_match(pa, pb, d) && r2_match(pa, pb, d)
}

/// The clockwise charge on the inner side of the tile's straight segment:
/// negative for the canonical tile and its rotations, positive for mirrors.
pub fn tile_charge(p: TilePose) -> ChargeSign {
    if p.m == 0 {
        ChargeSign::Minus
    } else {
        ChargeSign::Plus
    }
}

/// Chirality realising a given straight-segment charge.
pub fn chirality_for_charge(c: ChargeSign) -> u8 {
    match c {
        ChargeSign::Minus => 0,
        ChargeSign::Plus => 1,
    }
}

/// One of the three black-line pieces drawn on every tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Piece {
    /// The straight segment, running from edge `k + 3` to edge `k`.
    Straight,
    /// The turn around vertex `k + 1`, on the same side as the straight's offset.
    TopTurn,
    /// The turn around vertex `k + 4`.
    BottomTurn,
}

impl Piece {
    pub const ALL: [Piece; 3] = [Piece::Straight, Piece::TopTurn, Piece::BottomTurn];

    pub fn is_turn(self) -> bool {
        self != Piece::Straight
    }

    /// `(entry edge, exit edge)` of the piece for a tile of rotation `k`.
    /// The line travels in the direction the crossing offsets imply: a
    /// crossing near the anticlockwise vertex of its edge is an exit.
    pub fn ends(self, k: u8) -> (Direction, Direction) {
        let k = k as i32;
        match self {
            Piece::Straight => (Direction::new(k + 3), Direction::new(k)),
            Piece::TopTurn => (Direction::new(k + 2), Direction::new(k + 1)),
            Piece::BottomTurn => (Direction::new(k + 5), Direction::new(k + 4)),
        }
    }

    /// Piece of a rotation-`k` tile that enters through edge `d`.
    pub fn entering(k: u8, d: Direction) -> Option<Piece> {
        Piece::ALL.into_iter().find(|p| p.ends(k).0 == d)
    }

    /// Piece of a rotation-`k` tile that leaves through edge `d`.
    pub fn leaving(k: u8, d: Direction) -> Option<Piece> {
        Piece::ALL.into_iter().find(|p| p.ends(k).1 == d)
    }
}

/// True when the crossing on edge `d` of pose `p` is an exit.
pub fn crossing_is_exit(p: TilePose, d: Direction) -> bool {
    world_decoration(p, d).r1_near_vertex == d.vertices()[1]
}

/// Bit mask over pose indices.
pub type PoseMask = u16;

pub const ALL_POSES: PoseMask = 0x0fff;
/// Poses with `m = 0`, one per rotation.
pub const UNMIRRORED_POSES: PoseMask = 0x0555;

pub fn pose_bit(p: TilePose) -> PoseMask {
    1 << p.index()
}

/// Both chiralities of rotation `k`.
pub fn rotation_mask(k: u8) -> PoseMask {
    0b11 << (2 * k as u32)
}

pub fn poses_in(mask: PoseMask) -> impl Iterator<Item = TilePose> {
    (0..12).filter(move |i| mask & (1 << i) != 0).map(TilePose::from_index)
}

/// Which rule set a computation enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleSet {
    /// Black-line continuity only.
    R1Only,
    /// R1 and R2.
    Full,
    /// No constraints; a control for the search machinery.
    None,
}

impl RuleSet {
    pub fn allows(self, pa: TilePose, pb: TilePose, d: Direction) -> bool {
        match self {
            RuleSet::R1Only => r1_match(pa, pb, d),
            RuleSet::Full => valid_adjacency(pa, pb, d),
            RuleSet::None => true,
        }
    }
}

/// Precomputed `support[rule][pose][d]`: mask of poses allowed as the
/// `d`-neighbour of `pose`.
pub struct AdjacencyTable {
    support: [[[PoseMask; 6]; 12]; 3],
}

impl AdjacencyTable {
    fn build() -> Self {
        let mut support = [[[0; 6]; 12]; 3];
        for (ri, rule) in [RuleSet::R1Only, RuleSet::Full, RuleSet::None].into_iter().enumerate() {
            for pa in TilePose::all() {
                for d in Direction::ALL {
                    support[ri][pa.index()][d.index()] =
                        TilePose::all().filter(|&pb| rule.allows(pa, pb, d)).fold(0, |m, pb| m | pose_bit(pb));
                }
            }
        }
        AdjacencyTable { support }
    }

    pub fn get() -> &'static AdjacencyTable {
        static TABLE: OnceLock<AdjacencyTable> = OnceLock::new();
        TABLE.get_or_init(AdjacencyTable::build)
    }

    pub fn support(&self, rule: RuleSet, pa: TilePose, d: Direction) -> PoseMask {
        let ri = match rule {
            RuleSet::R1Only => 0,
            RuleSet::Full => 1,
            RuleSet::None => 2,
        };
        self.support[ri][pa.index()][d.index()]
    }

    pub fn allows(&self, rule: RuleSet, pa: TilePose, pb: TilePose, d: Direction) -> bool {
        self.support(rule, pa, d) & pose_bit(pb) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u8, m: u8) -> TilePose {
        TilePose::new(k, m)
    }

    fn d(i: i32) -> Direction {
        Direction::new(i)
    }

    #[test]
    fn world_decoration_examples() {
        let a = world_decoration(p(0, 0), d(2));
        assert_eq!((a.sign, a.flags, a.r1_near_vertex.index()), (ChargeSign::Minus, OrientationFlags::Cw, 1));
        let b = world_decoration(p(1, 0), d(3));
        assert_eq!((b.sign, b.flags, b.r1_near_vertex.index()), (ChargeSign::Minus, OrientationFlags::Cw, 2));
        let c = world_decoration(p(0, 1), d(0));
        assert_eq!((c.sign, c.flags, c.r1_near_vertex.index()), (ChargeSign::Minus, OrientationFlags::Both, 0));
    }

    #[test]
    fn adjacency_examples() {
        assert!(r1_match(p(0, 0), p(0, 0), d(0)));
        assert!(!r1_match(p(0, 0), p(3, 0), d(0)));
        assert!(r1_match(p(0, 0), p(0, 1), d(0)));
        assert!(r2_match(p(0, 0), p(0, 0), d(0)));
        assert!(!r2_match(p(0, 0), p(0, 1), d(0)));
        assert!(valid_adjacency(p(0, 0), p(0, 0), d(0)));
        assert!(!valid_adjacency(p(0, 0), p(0, 1), d(0)));
    }

    #[test]
    fn tile_charge_examples() {
        assert_eq!(tile_charge(p(0, 0)), ChargeSign::Minus);
        assert_eq!(tile_charge(p(4, 0)), ChargeSign::Minus);
        assert_eq!(tile_charge(p(2, 1)), ChargeSign::Plus);
    }

    #[test]
    fn star_is_involution() {
        for s in [ChargeSign::Plus, ChargeSign::Minus] {
            assert_eq!(s.star().star(), s);
            assert_ne!(s.star(), s);
        }
    }

    #[test]
    fn near_vertex_lies_on_its_edge() {
        for pose in TilePose::all() {
            for dir in Direction::ALL {
                assert!(world_decoration(pose, dir).r1_near_vertex.is_on_edge(dir));
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric() {
        for pa in TilePose::all() {
            for pb in TilePose::all() {
                for dir in Direction::ALL {
                    assert_eq!(valid_adjacency(pa, pb, dir), valid_adjacency(pb, pa, dir.opposite()));
                }
            }
        }
    }

    #[test]
    fn group_laws() {
        let table = |pose: TilePose| Direction::ALL.map(|dir| world_decoration(pose, dir));
        for pose in TilePose::all() {
            assert_eq!(table(pose.rotated(6)), table(pose));
            // Rotating the tile by one step rotates the decoration table.
            let rot = table(pose.rotated(1));
            for dir in Direction::ALL {
                let base = world_decoration(pose, dir);
                let moved = rot[dir.rotate(1).index()];
                assert_eq!(moved.sign, base.sign);
                assert_eq!(moved.flags, base.flags);
                assert_eq!(moved.r1_near_vertex, base.r1_near_vertex.rotate(1));
            }
        }
        let mut tables: Vec<_> = TilePose::all().map(|pose| format!("{:?}", table(pose))).collect();
        tables.sort();
        tables.dedup();
        assert_eq!(tables.len(), 12);
    }

    #[test]
    fn mirror_fixes_r1_signature() {
        for k in 0..6 {
            for dir in Direction::ALL {
                assert_eq!(
                    world_decoration(p(k, 0), dir).r1_near_vertex,
                    world_decoration(p(k, 1), dir).r1_near_vertex
                );
            }
        }
    }

    #[test]
    fn straight_continuation_forces_equal_chirality() {
        for k in 0..6u8 {
            for m in 0..2 {
                for m2 in 0..2 {
                    let ok = valid_adjacency(p(k, m), p(k, m2), d(k as i32));
                    assert_eq!(ok, m == m2, "k={k} m={m} m'={m2}");
                }
            }
        }
    }

    #[test]
    fn pieces_cover_each_edge_once() {
        for k in 0..6u8 {
            let mut entries: Vec<_> = Piece::ALL.iter().map(|pc| pc.ends(k).0.index()).collect();
            let mut exits: Vec<_> = Piece::ALL.iter().map(|pc| pc.ends(k).1.index()).collect();
            entries.append(&mut exits);
            entries.sort();
            assert_eq!(entries, vec![0, 1, 2, 3, 4, 5]);
            for pc in Piece::ALL {
                let (i, o) = pc.ends(k);
                assert!(!crossing_is_exit(p(k, 0), i));
                assert!(crossing_is_exit(p(k, 0), o));
                if pc.is_turn() {
                    // Left turn by 120°: travel direction goes from i+3 to o.
                    assert_eq!(i.opposite().rotate(2), o);
                }
            }
        }
    }

    #[test]
    fn r1_match_is_exit_meets_entry() {
        for pa in TilePose::all() {
            for pb in TilePose::all() {
                for dir in Direction::ALL {
                    let xor = crossing_is_exit(pa, dir) != crossing_is_exit(pb, dir.opposite());
                    assert_eq!(r1_match(pa, pb, dir), xor);
                }
            }
        }
    }

    #[test]
    fn table_equals_pointwise_recomputation() {
        let t = AdjacencyTable::get();
        for rule in [RuleSet::R1Only, RuleSet::Full, RuleSet::None] {
            for pa in TilePose::all() {
                for pb in TilePose::all() {
                    for dir in Direction::ALL {
                        assert_eq!(t.allows(rule, pa, pb, dir), rule.allows(pa, pb, dir));
                    }
                }
            }
        }
    }
}
