//! Fills a disc by backtracking search under both rules, then under the
//! line rule alone, and reports what each found.

use monotile::analysis::report;
use monotile::lattice::Cell;
use monotile::search::{complete_region, Region, SearchConfig};
use monotile::tile::RuleSet;

fn main() {
    let radius: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let region = Region::disc(Cell::ORIGIN, radius);
    for rules in [RuleSet::Full, RuleSet::R1Only] {
        let config = SearchConfig { seed: Some(1), ..SearchConfig::with_rules(rules) };
        let res = complete_region(&region, &config);
        println!("{rules:?}: {} after {} nodes", res.verdict.label(), res.stats.nodes);
        if let monotile::search::Verdict::Sat(p) = res.verdict {
            let r = report(&p).unwrap();
            println!("  {} tiles, triangles by size {:?}", p.len(), r.triangles_by_size);
        }
    }
}
