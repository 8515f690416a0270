//! Searches every torus up to a given index for a periodic tiling. Under
//! both rules every one is unsatisfiable; the line rule alone admits some.

use monotile::search::{aperiodicity_sweep, SearchConfig};
use monotile::tile::RuleSet;

fn main() {
    let max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12);
    let full = aperiodicity_sweep(max, &SearchConfig::default(), 0);
    print!("{full}");
    let r1 = aperiodicity_sweep(max, &SearchConfig::with_rules(RuleSet::R1Only), 0);
    println!("line rule alone: {} of {} tori admit a tiling", r1.count("SAT"), r1.outcomes.len());
    for o in r1.outcomes.iter().filter(|o| o.result.verdict.is_sat()).take(3) {
        println!("  periodic under {}", o.domain);
    }
}
