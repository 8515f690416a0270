//! Windows of the non-standard tilings: a fault line slid by a few cells,
//! cycles of three infinite turning lines, and the forbidden arrangement
//! in which the cycle closes through far arcs.

use monotile::construct::{
    closed_far_cycle_core, closed_far_cycle_region, fault_line_window, n_cycle_core, n_cycle_window,
};
use monotile::search::{complete_region, SearchConfig};

fn main() {
    for shift in 0..3 {
        let p = fault_line_window(24, 12, shift).unwrap();
        println!("fault line, shift {shift}: {} tiles, {} violations", p.len(), p.validate().len());
    }
    for n in 0..3 {
        let p = n_cycle_window(n, 8).unwrap();
        let (components, cyclic) = n_cycle_core(&p, n).unwrap();
        println!(
            "{n}-cycle: {} tiles, {} violations, core components {components}, far cycle {cyclic}",
            p.len(),
            p.validate().len()
        );
    }
    let core = closed_far_cycle_core(1, 4);
    let res = complete_region(&closed_far_cycle_region(1, 6), &SearchConfig::default());
    println!("closed far cycle: {} violations as drawn, search {}", core.validate().len(), res.verdict.label());
}
