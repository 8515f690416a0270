//! Renders a standard patch to SVG on standard output.
//!
//! cargo run --example render_svg -- 3 > p3.svg

use monotile::construct::standard_patch;
use monotile::svg::{render_svg, SvgOptions};

fn main() {
    let n: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let p = standard_patch(n).unwrap();
    print!("{}", render_svg(&p, &SvgOptions::default()));
}
