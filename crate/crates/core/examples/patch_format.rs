//! Round-trips patches through the text format, including a torus quotient.

use monotile::format::{parse, serialize};
use monotile::lattice::{Cell, TorusDomain};
use monotile::patch::Patch;
use monotile::tile::TilePose;

fn main() {
    let text = "monotile-patch v1\n# two tiles\n1 0 0 0\n0 0 0 1\n";
    let p = parse(text).unwrap();
    print!("{}", serialize(&p));

    let t = TorusDomain::new(2, 1, 1).unwrap();
    let mut q = Patch::on_torus(t);
    for c in t.representatives() {
        q.set(c, TilePose::new(0, 0));
    }
    print!("{}", serialize(&q));
    println!(
        "neighbour of (1,0) going east wraps to {:?}",
        q.neighbor(Cell::new(1, 0), monotile::lattice::Direction::new(0))
    );
}
