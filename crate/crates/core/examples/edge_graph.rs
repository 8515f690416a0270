//! Traces the black lines of a standard patch and prints the analysis
//! report: triangles, the "leads to" graph and its structural checks.

use monotile::analysis::{build_edge_graph, report};
use monotile::construct::standard_patch;

fn main() {
    let n: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let p = standard_patch(n).unwrap();
    print!("{}", report(&p).unwrap());

    let g = build_edge_graph(&p).unwrap();
    println!("first arcs:");
    for a in g.arcs.iter().take(8) {
        let (from, to) = (g.edge(a.from), g.edge(a.to));
        println!("  {} (len {}) -{}-> {} (len {})", from.cells[0], from.length(), a.label, to.cells[0], to.length());
    }
}
