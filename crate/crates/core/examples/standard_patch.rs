//! Builds the standard patch on a triangle of size 2^n and prints it.
//!
//! cargo run --example standard_patch -- 3

use monotile::construct::standard_patch;
use monotile::format::serialize;

fn main() {
    let n: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let p = standard_patch(n).expect("standard patch");
    eprintln!("P_{n}: {} tiles, {} violations", p.len(), p.validate().len());
    print!("{}", serialize(&p));
}
