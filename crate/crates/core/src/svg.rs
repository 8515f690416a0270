//! SVG drawings of patches: pointy-top hexagons, black lines through the
//! offset crossing points, and the charge glyphs of each edge.

use std::fmt::Write as _;

use crate::lattice::{Cell, Direction, VertexIndex};
use crate::patch::{Patch, PoseEntry};
use crate::tile::{world_decoration, ChargeSign, Piece};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Hexagon circumradius, equal to the edge length.
    pub radius: f64,
    pub margin: f64,
    pub show_lines: bool,
    pub show_charges: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { radius: 20.0, margin: 10.0, show_lines: true, show_charges: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Pt {
    x: f64,
    y: f64,
}

impl Pt {
    fn polar(r: f64, deg: f64) -> Pt {
        let a = deg.to_radians();
        // Screen y grows downward.
        Pt { x: r * a.cos(), y: -r * a.sin() }
    }
    fn add(self, o: Pt) -> Pt {
        Pt { x: self.x + o.x, y: self.y + o.y }
    }
    fn lerp(self, o: Pt, t: f64) -> Pt {
        Pt { x: self.x + (o.x - self.x) * t, y: self.y + (o.y - self.y) * t }
    }
}

/// Fixed two-decimal output without negative zero.
fn num(v: f64) -> String {
    format!("{:.2}", v + 0.0).replace("-0.00", "0.00")
}

fn center(c: Cell, r: f64) -> Pt {
    let s3 = 3f64.sqrt();
    Pt { x: r * s3 * (c.q as f64 + c.r as f64 / 2.0), y: -r * 1.5 * c.r as f64 }
}

fn vertex(c: Cell, v: VertexIndex, r: f64) -> Pt {
    center(c, r).add(Pt::polar(r, 30.0 + 60.0 * v.index() as f64))
}

/// Where the black line crosses edge `d` of the tile at `c`: a quarter edge
/// from the midpoint toward the near vertex.
fn crossing(c: Cell, e: PoseEntry, d: Direction, r: f64) -> Pt {
    let [a, b] = d.vertices();
    let mid = vertex(c, a, r).lerp(vertex(c, b, r), 0.5);
    let near = world_decoration(e.r1_pose(), d).r1_near_vertex;
    mid.lerp(vertex(c, near, r), 0.5)
}

pub fn render_svg(p: &Patch, opts: &SvgOptions) -> String {
    let r = opts.radius;
    let mut out = String::new();
    if p.is_empty() {
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"0\" height=\"0\" viewBox=\"0 0 0 0\"></svg>\n");
        return out;
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for c in p.cells() {
        for v in 0..6 {
            let pt = vertex(c, VertexIndex::new(v), r);
            x0 = x0.min(pt.x);
            y0 = y0.min(pt.y);
            x1 = x1.max(pt.x);
            y1 = y1.max(pt.y);
        }
    }
    let (x0, y0) = (x0 - opts.margin, y0 - opts.margin);
    let (w, h) = (x1 - x0 + opts.margin, y1 - y0 + opts.margin);
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(w),
        num(h),
        num(x0),
        num(y0),
        num(w),
        num(h)
    )
    .unwrap();

    out.push_str("<g stroke=\"#888888\" stroke-width=\"0.5\">\n");
    for (c, e) in p.iter() {
        let fill = match e {
            PoseEntry::Full(t) if t.is_mirrored() => "#cccccc",
            _ => "#ffffff",
        };
        let pts: Vec<String> = (0..6)
            .map(|v| {
                let pt = vertex(c, VertexIndex::new(v), r);
                format!("{},{}", num(pt.x), num(pt.y))
            })
            .collect();
        writeln!(out, "<polygon points=\"{}\" fill=\"{fill}\"/>", pts.join(" ")).unwrap();
    }
    out.push_str("</g>\n");

    if opts.show_lines {
        out.push_str("<g stroke=\"#000000\" stroke-width=\"2\" fill=\"none\" stroke-linecap=\"round\">\n");
        for (c, e) in p.iter() {
            for piece in Piece::ALL {
                let (din, dout) = piece.ends(e.k());
                let a = crossing(c, e, din, r);
                let b = crossing(c, e, dout, r);
                if piece.is_turn() {
                    // Both crossings sit a quarter edge from the shared vertex.
                    let v = vertex(c, din.vertices()[0], r);
                    let cross = (a.x - v.x) * (b.y - v.y) - (a.y - v.y) * (b.x - v.x);
                    let sweep = if cross > 0.0 { 1 } else { 0 };
                    writeln!(
                        out,
                        "<path d=\"M {} {} A {} {} 0 0 {sweep} {} {}\"/>",
                        num(a.x),
                        num(a.y),
                        num(r / 4.0),
                        num(r / 4.0),
                        num(b.x),
                        num(b.y)
                    )
                    .unwrap();
                } else {
                    writeln!(
                        out,
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        num(a.x),
                        num(a.y),
                        num(b.x),
                        num(b.y)
                    )
                    .unwrap();
                }
            }
        }
        out.push_str("</g>\n");
    }

    if opts.show_charges {
        let fs = r * 0.35;
        out.push_str(&format!(
            "<g font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\">\n",
            num(fs)
        ));
        for (c, e) in p.iter() {
            let Some(pose) = e.pose() else { continue };
            for d in Direction::ALL {
                let dec = world_decoration(pose, d);
                let [va, vb] = d.vertices();
                let (pa, pb) = (vertex(c, va, r), vertex(c, vb, r));
                let mid = pa.lerp(pb, 0.5);
                let at = center(c, r).lerp(mid, 0.62);
                let glyph = match dec.sign {
                    ChargeSign::Plus => "+",
                    ChargeSign::Minus => "\u{2212}",
                };
                writeln!(out, "<text x=\"{}\" y=\"{}\">{glyph}</text>", num(at.x), num(at.y)).unwrap();
                // Orientation markers: small triangles pointing along the edge,
                // anticlockwise toward its second vertex.
                let len = ((pb.x - pa.x).powi(2) + (pb.y - pa.y).powi(2)).sqrt();
                let (tx, ty) = ((pb.x - pa.x) / len, (pb.y - pa.y) / len);
                let mut marker = |sign: f64| {
                    let base = Pt { x: at.x + sign * tx * fs * 0.75, y: at.y + sign * ty * fs * 0.75 };
                    let tip = Pt { x: base.x + sign * tx * fs * 0.4, y: base.y + sign * ty * fs * 0.4 };
                    let (nx, ny) = (-ty * fs * 0.2, tx * fs * 0.2);
                    writeln!(
                        out,
                        "<polygon points=\"{},{} {},{} {},{}\" fill=\"#b00000\"/>",
                        num(tip.x),
                        num(tip.y),
                        num(base.x + nx),
                        num(base.y + ny),
                        num(base.x - nx),
                        num(base.y - ny)
                    )
                    .unwrap();
                };
                if dec.flags.has_ccw() {
                    marker(1.0);
                }
                if dec.flags.has_cw() {
                    marker(-1.0);
                }
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tile::TilePose;

    #[test]
    fn empty_patch_is_empty_svg() {
        let s = render_svg(&Patch::new(), &SvgOptions::default());
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(!s.contains("<polygon"));
    }

    #[test]
    fn canonical_tile_has_raised_horizontal_straight() {
        let mut p = Patch::new();
        p.set(Cell::ORIGIN, TilePose::new(0, 0));
        let s = render_svg(&p, &SvgOptions::default());
        let line = s.lines().find(|l| l.starts_with("<line")).unwrap();
        let attr = |name: &str| -> f64 {
            let start = line.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
            line[start..].split('"').next().unwrap().parse().unwrap()
        };
        assert_eq!(attr("y1"), attr("y2"));
        // Above the centre means a smaller screen y.
        assert!(attr("y1") < 0.0);
        assert!(attr("x1") < 0.0 && attr("x2") > 0.0);
        assert_eq!(s.matches("<path").count(), 2);
        assert!(!s.contains("#cccccc"));
    }

    #[test]
    fn lines_join_across_edges() {
        let p = crate::construct::standard_patch(2).unwrap();
        for (c, d, n) in p.shared_edges() {
            let a = crossing(c, p.get(c).unwrap(), d, 20.0);
            let b = crossing(n, p.get(n).unwrap(), d.opposite(), 20.0);
            assert!((a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9, "{c} {d}");
        }
    }

    #[test]
    fn mirrored_tiles_are_grey_and_output_is_stable() {
        let mut p = Patch::new();
        p.set(Cell::ORIGIN, TilePose::new(2, 1));
        p.set(Cell::new(1, 0), TilePose::new(0, 0));
        let a = render_svg(&p, &SvgOptions::default());
        assert_eq!(a.matches("#cccccc").count(), 1);
        assert_eq!(a, render_svg(&p, &SvgOptions::default()));
    }
}
