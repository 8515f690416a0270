//! Validates a patch, then flips one tile's chirality and validates again.

use monotile::construct::standard_patch;
use monotile::lattice::Cell;
use monotile::patch::PoseEntry;

fn main() {
    let mut p = standard_patch(2).unwrap();
    println!("P_2: {} violations", p.validate().len());

    let cell = Cell::new(1, 0);
    if let Some(PoseEntry::Full(pose)) = p.get(cell) {
        p.set(cell, pose.with_chirality(1 - pose.m()));
    }
    let v = p.validate();
    println!("after flipping {cell}: {} violations", v.len());
    for x in v {
        println!("  {x}");
    }
}
