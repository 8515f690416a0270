//! Acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines always reach standard output.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use monotile::analysis::{
    analyze, build_edge_graph, check_charge_transfer, check_length_growth, check_no_fff_cycle, ruler, sizes_along_turn,
};
use monotile::construct::{
    assign_charges, closed_far_cycle_core, closed_far_cycle_region, fault_line_window, n_cycle_core, n_cycle_window,
    standard_patch, standard_skeleton, ChargeChoice, ConstructError,
};
use monotile::lattice::{Cell, Direction};
use monotile::patch::Patch;
use monotile::search::{
    aperiodicity_sweep, complete_region, enumerate_completions, Pin, Region, SearchConfig, Verdict,
};
use monotile::tile::{world_decoration, AdjacencyTable, ChargeSign, OrientationFlags, Piece, RuleSet, TilePose};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Charged patches every structural criterion is checked over.
struct Corpus {
    standard: Vec<Patch>,
    discs: Vec<Patch>,
    exotic: Vec<Patch>,
}

impl Corpus {
    fn build() -> Corpus {
        let standard = (0..=5).map(|n| standard_patch(n).unwrap()).collect();
        let discs = (0..100u64)
            .map(|seed| {
                let config = SearchConfig { seed: Some(seed), ..SearchConfig::default() };
                match complete_region(&Region::disc(Cell::ORIGIN, 4), &config).verdict {
                    Verdict::Sat(p) => p,
                    v => panic!("disc seed {seed}: {}", v.label()),
                }
            })
            .collect();
        let mut exotic: Vec<Patch> = (0..3).map(|s| fault_line_window(24, 12, s).unwrap()).collect();
        exotic.extend((0..3).map(|n| n_cycle_window(n, 8).unwrap()));
        Corpus { standard, discs, exotic }
    }

    fn all(&self) -> impl Iterator<Item = &Patch> {
        self.standard.iter().chain(&self.discs).chain(&self.exotic)
    }
}

fn c1_existence() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=4 {
        if !standard_patch(n).unwrap().validate().is_empty() {
            bad.push(n);
        }
    }
    let t = Instant::now();
    let p5 = standard_patch(5).unwrap();
    let v5 = p5.validate().len();
    let el = t.elapsed();
    let pass = bad.is_empty() && v5 == 0 && p5.len() >= 500 && el < Duration::from_secs(5);
    outcome(
        pass,
        format!("P_0..P_4 failing {bad:?}; P_5 {} tiles, {v5} violations, {:.1} ms", p5.len(), el.as_secs_f64() * 1e3),
    )
}

fn c2_ruler() -> Outcome {
    let sk = standard_skeleton(4).unwrap();
    let t = analyze(&sk).unwrap();
    let k = sk.get(Cell::ORIGIN).unwrap().k();
    let piece = Piece::ALL.into_iter().find(|p| p.is_turn() && p.ends(k).1 == Direction::new(0)).unwrap();
    let (li, pos) = t.locate(Cell::ORIGIN, piece).unwrap();
    let (room, sizes) = sizes_along_turn(&t, li, pos);
    let sizes: Vec<usize> = sizes.into_iter().map(|s| s.unwrap_or(0)).collect();
    let sixteenth = t.triangles.iter().find(|tr| tr.corners.contains(&Cell::new(16, 0))).map(|tr| tr.size);
    let expected = [1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2];
    let pass =
        room == 15 && sizes.len() == 15 && sizes[..14] == expected && sizes[14] == ruler(15) && sixteenth == Some(16);
    outcome(pass, format!("sizes {sizes:?}, 16th {sixteenth:?}"))
}

fn c3_powers(c: &Corpus) -> Outcome {
    let mut sizes = BTreeSet::new();
    let mut count = 0;
    for p in c.all() {
        for tr in analyze(p).unwrap().triangles {
            sizes.insert(tr.size);
            count += 1;
        }
    }
    let allowed: BTreeSet<usize> = [1, 2, 4, 8, 16, 32].into();
    outcome(sizes.is_subset(&allowed), format!("{count} triangles, sizes seen {sizes:?}"))
}

fn c4_charge_transfer(c: &Corpus) -> Outcome {
    let (mut checked, mut failed, mut skipped) = (0, 0, 0);
    for p in c.standard[2..].iter().chain(&c.discs) {
        let g = build_edge_graph(p).unwrap();
        // Only arcs between untruncated runs count toward the criterion.
        let interior = |e: usize| !g.edge(e).boundary_truncated();
        let interior_arcs = g.arcs.iter().filter(|a| interior(a.from) && interior(a.to)).count();
        checked += interior_arcs;
        skipped += g.arcs.len() - interior_arcs;
        // Failures anywhere count, boundary arcs included.
        failed += check_charge_transfer(&g).failures.len();
    }
    outcome(
        failed == 0 && checked > 0,
        format!("{checked} interior arcs checked, {failed} failed, {skipped} touching the boundary"),
    )
}

fn c5_no_fff(c: &Corpus) -> Outcome {
    let bad = c.all().filter(|p| !check_no_fff_cycle(&build_edge_graph(p).unwrap())).count();
    outcome(bad == 0, format!("{} patches, {bad} with a far 3-cycle", c.all().count()))
}

fn c6_length(c: &Corpus) -> Outcome {
    let (mut checked, mut failed, mut skipped) = (0, 0, 0);
    for p in c.all() {
        let r = check_length_growth(&build_edge_graph(p).unwrap());
        checked += r.checked;
        failed += r.failures.len();
        skipped += r.skipped;
    }
    outcome(failed == 0 && checked > 0, format!("{checked} arcs checked, {failed} failed, {skipped} truncated"))
}

fn c7_sweep() -> Outcome {
    let t4 = Instant::now();
    let r4 = aperiodicity_sweep(4, &SearchConfig::default(), 0);
    let e4 = t4.elapsed();
    let t12 = Instant::now();
    let r12 = aperiodicity_sweep(12, &SearchConfig::default(), 0);
    let e12 = t12.elapsed();
    let pass = r4.all_unsat()
        && r12.all_unsat()
        && r12.outcomes.len() == 127
        && e4 < Duration::from_secs(60)
        && e12 < Duration::from_secs(1800);
    outcome(
        pass,
        format!(
            "index<=4: {} domains UNSAT in {:.1} ms; index<=12: {}/{} UNSAT, {} timeouts, {} nodes, {:.1} ms",
            r4.count("UNSAT"),
            e4.as_secs_f64() * 1e3,
            r12.count("UNSAT"),
            r12.outcomes.len(),
            r12.count("TIMEOUT"),
            r12.total_nodes(),
            e12.as_secs_f64() * 1e3
        ),
    )
}

fn c8_charge_lifts() -> Outcome {
    let sk = standard_skeleton(3).unwrap();
    let g = build_edge_graph(&sk).unwrap();
    let ell = g.component_count();
    let total = g.total_component_count();
    // Exhaustive search over chiralities with every rotation pinned.
    let region = Region::from_cells(sk.cells()).with_pins(sk.iter().map(|(c, e)| (c, Pin::Rotation(e.k())))).unwrap();
    let (found, exhausted) = enumerate_completions(&region, &SearchConfig::default(), 1 << 16);
    let found: BTreeSet<String> = found.iter().map(monotile::format::serialize).collect();
    let lifted: BTreeSet<String> = (0..1u64 << total)
        .map(|bits| monotile::format::serialize(&assign_charges(&sk, &ChargeChoice::from_bits(total, bits)).unwrap()))
        .collect();
    let pass = exhausted && ell == total && found.len() == 1 << ell && found == lifted;
    outcome(
        pass,
        format!(
            "components {ell} (interior) / {total} (all); exhaustive search found {}, lifts {}",
            found.len(),
            lifted.len()
        ),
    )
}

/// Finds `j0` with `sizes[i] == ruler(j0 + i)` wherever the size is known.
fn ruler_offset(sizes: &[Option<usize>]) -> Option<usize> {
    (1..=256).find(|&j0| sizes.iter().enumerate().all(|(i, s)| s.is_none_or(|s| s == ruler(j0 + i))))
}

fn c9_exotic() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for shift in 0..3 {
        let p = fault_line_window(24, 12, shift).unwrap();
        let v = p.validate().len();
        let t = analyze(&p).unwrap();
        let side = |pc: Piece| -> Vec<Option<usize>> {
            (0..24).map(|x| t.triangle_through(Cell::new(x, 0), pc).map(|tr| tr.size)).collect()
        };
        let (above, below) = (ruler_offset(&side(Piece::TopTurn)), ruler_offset(&side(Piece::BottomTurn)));
        pass &= v == 0 && above.is_some() && below.is_some();
        notes.push(format!("fault shift {shift}: {v} viol"));
    }
    for n in 0..3 {
        let p = n_cycle_window(n, 8).unwrap();
        let v = p.validate().len();
        let (comps, cyclic) = n_cycle_core(&p, n).unwrap();
        pass &= v == 0 && comps == 3 && cyclic;
        notes.push(format!("{n}-cycle: {v} viol, {comps} core comps"));
    }
    let core = closed_far_cycle_core(1, 4);
    let viol = core.validate().len();
    let g = build_edge_graph(&core).unwrap();
    let lift = assign_charges(&core.strip_charges(), &ChargeChoice::default_for(&g));
    let search = complete_region(&closed_far_cycle_region(1, 6), &SearchConfig::default());
    pass &= viol > 0 && matches!(lift, Err(ConstructError::Contradiction(_))) && search.verdict.is_unsat();
    notes.push(format!("closed far cycle: {viol} viol, search {}", search.verdict.label()));
    outcome(pass, notes.join("; "))
}

// Exact geometry in the basis u = 30°, w = 90° with unit circumradius.
// Tile vertices: (1,0) (0,1) (-1,1) (-1,0) (0,-1) (1,-1).
type V = (i64, i64);
const VERTS: [V; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn add(a: V, b: V) -> V {
    (a.0 + b.0, a.1 + b.1)
}
fn scale(a: V, k: i64) -> V {
    (a.0 * k, a.1 * k)
}
/// Height in units of half the circumradius: y = i/2 + j.
fn height2(a: V) -> i64 {
    a.0 + 2 * a.1
}
fn rot60(a: V) -> V {
    (-a.1, a.0 + a.1)
}
fn mirror(a: V) -> V {
    (-a.0, a.0 + a.1)
}

/// One edge's decoration as geometry: twice its midpoint, the sign, the
/// charge orientations, and four times the black-line crossing point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct GeoEdge {
    mid2: V,
    sign: ChargeSign,
    cw: bool,
    ccw: bool,
    cross4: V,
}

/// The canonical tile described directly: right-hand edges positive, reading
/// top to bottom anticlockwise, both, clockwise; left-hand edges negative,
/// clockwise, both, anticlockwise. The straight crosses the two vertical
/// edges offset upward; the turns hug the top and bottom vertices.
fn canonical_tile() -> Vec<GeoEdge> {
    let top = *VERTS.iter().max_by_key(|v| height2(**v)).unwrap();
    let bottom = *VERTS.iter().min_by_key(|v| height2(**v)).unwrap();
    let mut edges = Vec::new();
    for i in 0..6 {
        let (a, b) = (VERTS[i], VERTS[(i + 1) % 6]);
        let mid2 = add(a, b);
        let near = if a == top || b == top {
            top
        } else if a == bottom || b == bottom {
            bottom
        } else if height2(a) > height2(b) {
            a
        } else {
            b
        };
        edges.push((mid2, near));
    }
    let mut out = Vec::new();
    for right in [true, false] {
        let mut side: Vec<(V, V)> = edges.iter().copied().filter(|(m, _)| (m.0 > 0) == right).collect();
        side.sort_by_key(|(m, _)| -height2(*m));
        let orient: [(bool, bool); 3] = if right {
            [(false, true), (true, true), (true, false)]
        } else {
            [(true, false), (true, true), (false, true)]
        };
        for ((mid2, near), (cw, ccw)) in side.into_iter().zip(orient) {
            let sign = if right { ChargeSign::Plus } else { ChargeSign::Minus };
            out.push(GeoEdge { mid2, sign, cw, ccw, cross4: add(mid2, scale(near, 2)) });
        }
    }
    out
}

fn posed(p: TilePose) -> Vec<GeoEdge> {
    canonical_tile()
        .into_iter()
        .map(|mut e| {
            if p.is_mirrored() {
                e.mid2 = mirror(e.mid2);
                e.cross4 = mirror(e.cross4);
                std::mem::swap(&mut e.cw, &mut e.ccw);
            }
            for _ in 0..p.k() {
                e.mid2 = rot60(e.mid2);
                e.cross4 = rot60(e.cross4);
            }
            e
        })
        .collect()
}

fn axial_to_geo(c: Cell) -> V {
    // Neighbour centres sit at twice an edge midpoint: d0 = (2,-1), d1 = (1,1).
    add(scale((2, -1), c.q as i64), scale((1, 1), c.r as i64))
}

fn oracle(pa: TilePose, pb: TilePose, d: Direction) -> (bool, bool) {
    let off = axial_to_geo(d.step());
    let ea = posed(pa).into_iter().find(|e| e.mid2 == off).unwrap();
    // The same edge seen from b's centre.
    let eb = posed(pb).into_iter().find(|e| e.mid2 == scale(off, -1)).unwrap();
    let r1 = ea.cross4 == add(eb.cross4, scale(off, 4));
    let r2 = !(ea.cw && eb.cw && ea.sign == eb.sign);
    (r1, r1 && r2)
}

fn c10_tables() -> Outcome {
    let table = AdjacencyTable::get();
    let mut entries = 0;
    let mut mismatches = 0;
    for pa in TilePose::all() {
        for pb in TilePose::all() {
            for d in Direction::ALL {
                let (r1, full) = oracle(pa, pb, d);
                entries += 1;
                if table.allows(RuleSet::R1Only, pa, pb, d) != r1 || table.allows(RuleSet::Full, pa, pb, d) != full {
                    mismatches += 1;
                }
            }
        }
    }
    // Decorations themselves against the geometry.
    let mut deco_mismatch = 0;
    for p in TilePose::all() {
        let geo = posed(p);
        for d in Direction::ALL {
            let w = world_decoration(p, d);
            let off = axial_to_geo(d.step());
            let e = geo.iter().find(|e| e.mid2 == off).unwrap();
            let near = VERTS[w.r1_near_vertex.index()];
            let flags_ok = match w.flags {
                OrientationFlags::Cw => e.cw && !e.ccw,
                OrientationFlags::Ccw => !e.cw && e.ccw,
                OrientationFlags::Both => e.cw && e.ccw,
            };
            if w.sign != e.sign || !flags_ok || add(off, scale(near, 2)) != e.cross4 {
                deco_mismatch += 1;
            }
        }
    }
    let table_of = |p: TilePose| Direction::ALL.map(|d| world_decoration(p, d));
    let rotation_order = TilePose::all().all(|p| p.rotated(6) == p && (1..6).all(|n| p.rotated(n) != p));
    let reflect = |p: TilePose| p.with_chirality(1 - p.m());
    let reflection_order = TilePose::all().all(|p| reflect(reflect(p)) == p && reflect(p) != p);
    let distinct: BTreeSet<String> = TilePose::all().map(|p| format!("{:?}", table_of(p))).collect();
    // Rotating a pose rotates its table.
    let equivariant = TilePose::all().all(|p| {
        Direction::ALL.iter().all(|&d| {
            let (a, b) = (world_decoration(p.rotated(1), d.rotate(1)), world_decoration(p, d));
            a.sign == b.sign && a.flags == b.flags && a.r1_near_vertex == b.r1_near_vertex.rotate(1)
        })
    });
    let pass = entries == 864
        && mismatches == 0
        && deco_mismatch == 0
        && rotation_order
        && reflection_order
        && distinct.len() == 12
        && equivariant;
    outcome(
        pass,
        format!(
            "{entries} entries, {mismatches} mismatches, {deco_mismatch} decoration mismatches, {} distinct tables",
            distinct.len()
        ),
    )
}

fn main() {
    let corpus = Corpus::build();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 existence", Box::new(c1_existence)),
        ("2 ruler structure", Box::new(c2_ruler)),
        ("3 power-of-two sizes", Box::new(|| c3_powers(&corpus))),
        ("4 charge transfer", Box::new(|| c4_charge_transfer(&corpus))),
        ("5 no far 3-cycles", Box::new(|| c5_no_fff(&corpus))),
        ("6 length growth", Box::new(|| c6_length(&corpus))),
        ("7 aperiodicity sweep", Box::new(c7_sweep)),
        ("8 charge-lift count", Box::new(c8_charge_lifts)),
        ("9 exotic families", Box::new(c9_exotic)),
        ("10 table integrity", Box::new(c10_tables)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        failed += !o.pass as usize;
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
