//! Self-similarity, inflation, and the fault-line symmetry of generated
//! patches.

use std::collections::BTreeSet;

use monotile::analysis::analyze;
use monotile::construct::{fault_line_window, standard_skeleton, TriangleSpec};
use monotile::lattice::Cell;
use monotile::patch::Patch;
use monotile::tile::Piece;

/// Every triangle of size at least 2 in `P_n` carries the skeleton of the
/// standard patch of its size, rotated and translated to fit, on all but
/// its three corner tiles.
#[test]
fn sub_triangles_are_standard() {
    for n in 2..=5u32 {
        let big = standard_skeleton(n).unwrap();
        let t = analyze(&big).unwrap();
        let mut compared = 0;
        for tr in t.triangles.iter().filter(|tr| tr.size >= 2) {
            let level = tr.size.trailing_zeros();
            let small = standard_skeleton(level).unwrap();
            let spec = TriangleSpec::new(Cell::ORIGIN, tr.size as u32);
            let found = (0..6).any(|rot| {
                let corners: Vec<Cell> = spec.corners().iter().map(|c| c.rotate(rot)).collect();
                // Match the rotated anchor to each actual corner.
                tr.corners.iter().any(|&target| {
                    let shift = target - corners[0];
                    let placed: BTreeSet<Cell> = corners.iter().map(|&c| c + shift).collect();
                    if placed != tr.corners.iter().copied().collect() {
                        return false;
                    }
                    let moved: Patch = small.rotated(rot).translated(shift);
                    let same = moved
                        .iter()
                        .filter(|(c, _)| !placed.contains(c))
                        .all(|(c, e)| big.get(c).map(|b| b.k()) == Some(e.k()));
                    same
                })
            });
            assert!(found, "P_{n}: triangle {:?} is not standard", tr.corners);
            compared += 1;
        }
        assert!(compared > 0);
    }
}

/// The triangles of size at least 2 in `P_{n+1}` are those of `P_n` with
/// every corner doubled.
#[test]
fn inflation_doubles_triangles() {
    let corner_sets = |n: u32, min: usize| -> BTreeSet<Vec<Cell>> {
        analyze(&standard_skeleton(n).unwrap())
            .unwrap()
            .triangles
            .iter()
            .filter(|tr| tr.size >= min)
            .map(|tr| {
                let mut c = tr.corners.to_vec();
                c.sort();
                c
            })
            .collect()
    };
    for n in 0..=4 {
        let doubled: BTreeSet<Vec<Cell>> =
            corner_sets(n, 1).into_iter().map(|cs| cs.into_iter().map(|c| c * 2).collect()).collect();
        assert_eq!(corner_sets(n + 1, 2), doubled, "n={n}");
    }
}

/// Across an unshifted fault line triangles face equal partners; shifting
/// breaks that.
#[test]
fn fault_line_partners() {
    let sizes = |shift: i32| {
        let p = fault_line_window(32, 10, shift).unwrap();
        let t = analyze(&p).unwrap();
        let side = |pc: Piece| -> Vec<Option<usize>> {
            (0..32).map(|x| t.triangle_through(Cell::new(x, 0), pc).map(|tr| tr.size)).collect()
        };
        (side(Piece::TopTurn), side(Piece::BottomTurn))
    };
    let (above, below) = sizes(0);
    assert_eq!(above, below);
    let (above2, below2) = sizes(2);
    assert_eq!(above2, above, "the half containing the line is unchanged");
    assert_ne!(above2, below2);
    // Every cell of the line row is a straight travelling east.
    let p = fault_line_window(32, 10, 2).unwrap();
    assert!((0..32).all(|x| p.get(Cell::new(x, 0)).unwrap().k() == 0));
}
