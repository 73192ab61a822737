//! End-to-end checks of a compiled tile set, one per acceptance criterion.
//! Each returns whether it held, a short account and the time it took.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::assembly::{
    abstract_solve_in, compatible, filler_needs, verify_assembly, verify_in, AbstractTile,
    SearchConfig, Space, Violation,
};
use crate::blocks::{
    apply_decoration, filler_anchor, level2, level2_vectors, level3_vectors, realize_many,
    tiny_filler, Kind, Level3Spec, SideLabel, ORDER, SIDE,
};
use crate::bn::is_translational_monotile;
use crate::compiler::{
    self, bit_code, compile, glue_one, glue_two, marker, padding_code, selector, CompileError,
    Formulas, TileSet7,
};
use crate::grid::{Cell, CellSet, Polyomino};
use crate::pattern::{self, decode_torus, owned_units, rigid_pattern, Geometry, Role};
use crate::solver::{
    adjacency::{check_filler_adjacency, AdjacencyConfig},
    filler_offset, refine, verify_tiling, Region,
};
use crate::wang::{check_torus, smallest_torus, wang_torus_solve, Assignment, WangSet, WangTile};

pub const COMPILE_BUDGET: Duration = Duration::from_secs(10);
pub const BN_BUDGET: Duration = Duration::from_secs(1);
pub const ADJACENCY_BUDGET: Duration = Duration::from_secs(60);
pub const PATTERN_BUDGET: Duration = Duration::from_secs(60);
pub const TILING_BUDGET: Duration = Duration::from_secs(300);
pub const TORUS_BUDGET: Duration = Duration::from_secs(600);
/// Node limit for the abstract torus search; the negative set needs about a
/// third of it.
pub const TORUS_NODES: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] C{:02} {}: {} ({:.2?} of {:.0?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed,
            self.budget
        )
    }
}

/// A Wang set compiled once, shared by the checks.
pub struct Fixture {
    pub ws: WangSet,
    pub ts: TileSet7,
    pub tiles: Vec<AbstractTile>,
    pub polys: Vec<Polyomino>,
    pub compile_time: Duration,
}

impl Fixture {
    pub fn new(ws: WangSet) -> Result<Self, CompileError> {
        let start = Instant::now();
        let ts = compile(&ws)?;
        let compile_time = start.elapsed();
        let tiles = ts.abstract_tiles();
        let polys = ts.pieces.iter().map(|p| p.polyomino.clone()).collect();
        Ok(Fixture {
            ws,
            ts,
            tiles,
            polys,
            compile_time,
        })
    }

    /// The toroidal tiling of the smallest torus, repeated over the plane.
    fn periodic(&self) -> Assignment {
        smallest_torus(&self.ws, 4)
            .map(|(_, _, a)| a)
            .unwrap_or_default()
    }
}

fn tile_at(a: &Assignment) -> impl Fn(i32, i32) -> usize + '_ {
    move |x, y| {
        let row = &a[y.rem_euclid(a.len() as i32) as usize];
        row[x.rem_euclid(row.len() as i32) as usize]
    }
}

fn timed(
    id: u8,
    title: &'static str,
    budget: Duration,
    f: impl FnOnce() -> (bool, String),
) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    Outcome {
        id,
        title,
        passed: ok && elapsed <= budget,
        detail,
        elapsed,
        budget,
    }
}

pub fn c01_seven_convex(fx: &Fixture) -> Outcome {
    let mut o = timed(
        1,
        "seven orthogonally convex polyominoes",
        COMPILE_BUDGET,
        || {
            let convex = fx
                .ts
                .pieces
                .iter()
                .filter(|p| p.polyomino.is_connected() && p.polyomino.is_orthogonally_convex())
                .count();
            let glued = fx.ts.glued_locator().map(|g| g.is_orthogonally_convex());
            let ok = fx.ts.pieces.len() == 7 && convex == 7 && matches!(glued, Ok(false));
            (
                ok,
                format!(
                    "{} pieces, {convex} connected and convex, glued locator convex: {:?}",
                    fx.ts.pieces.len(),
                    glued
                ),
            )
        },
    );
    // The compile itself ran in the fixture.
    o.elapsed += fx.compile_time;
    o.passed &= o.elapsed <= o.budget;
    o
}

fn dims_match(ws: &WangSet) -> Result<(), String> {
    let f = Formulas::new(ws);
    let tiles = compiler::abstract_tiles(ws);
    let want = [
        (compiler::ENCODER, (f.encoder_len, 3)),
        (compiler::A_LINKER, (1, 3)),
        (compiler::B_LINKER, (1, 3)),
        (compiler::LOCATOR_LOWER, (f.locator_len, 3)),
        (compiler::LOCATOR_MIDDLE, (1, 3)),
        (compiler::LOCATOR_UPPER, (f.locator_len, 3)),
    ];
    for (t, (name, d)) in tiles.iter().zip(want) {
        if t.name != name || t.dims() != d {
            return Err(format!(
                "{} has dims {:?}, wanted {name} {d:?}",
                t.name,
                t.dims()
            ));
        }
    }
    Ok(())
}

pub fn c02_formulas(fx: &Fixture) -> Outcome {
    timed(2, "encoder and locator dimensions", BN_BUDGET, || {
        let f = fx.ts.formulas;
        let mut bad = Vec::new();
        if (f.segment, f.padding, f.encoder_len, f.locator_len) != (10, 7, 27, 15) {
            bad.push(format!("sample formulas {f:?}"));
        }
        if let Err(e) = dims_match(&fx.ws) {
            bad.push(e);
        }
        let enc = &fx.tiles[pattern::ENCODER];
        let padded = (f.segment..f.segment + f.padding).all(|u| {
            enc.code(Cell::new(u, 0), crate::blocks::Side::Se) == Some(padding_code())
                && enc.code(Cell::new(u, 2), crate::blocks::Side::Nw) == Some(padding_code())
        });
        if !padded {
            bad.push("padding units carry other codes".into());
        }
        let gaps: BTreeSet<i32> = (0..f.n)
            .map(|k| f.top_right_block(k) - (f.bottom_left_block(k) + f.t))
            .collect();
        if gaps != BTreeSet::from([f.locator_len]) {
            bad.push(format!("portion gaps {gaps:?}"));
        }
        let tiny = WangSet::new(vec![WangTile::new(0, 0, 0, 0)], 1).expect("one tile");
        let g = Formulas::new(&tiny);
        if (g.segment, g.padding, g.encoder_len, g.locator_len) != (3, 1, 7, 3) {
            bad.push(format!("one-tile formulas {g:?}"));
        }
        if let Err(e) = dims_match(&tiny) {
            bad.push(e);
        }
        let ok = bad.is_empty();
        let detail = if ok {
            format!(
                "N={} L={} padding={} gap={}; one-tile set N={} L={}",
                f.encoder_len,
                f.locator_len,
                f.padding,
                f.locator_len,
                g.encoder_len,
                g.locator_len
            )
        } else {
            bad.join("; ")
        };
        (ok, detail)
    })
}

/// A diamond of order 13 with its SE side decorated by `upper`, and the one
/// below it with its NW side decorated by `lower`, plus their plain union.
fn diamond_pair(upper: Kind, lower: Kind) -> (Polyomino, Polyomino, CellSet) {
    let (_, j) = level2_vectors(ORDER);
    let p = level2(ORDER)
        .expect("order 13")
        .translate(Cell::new(0, ORDER - 1));
    let q = p.translate(-j);
    let foot = p.as_set().union(q.as_set());
    (
        apply_decoration(&p, crate::blocks::Side::Se, upper).expect("decorates"),
        apply_decoration(&q, crate::blocks::Side::Nw, lower).expect("decorates"),
        foot,
    )
}

pub fn c03_fit_suite(_fx: &Fixture) -> Outcome {
    timed(3, "bump and dent fit suite", BN_BUDGET, || {
        let mut bad = Vec::new();
        for (u, l) in [(Kind::Bump, Kind::Dent), (Kind::Dent, Kind::Bump)] {
            let (p, q, foot) = diamond_pair(u, l);
            if p.overlaps(&q) || p.as_set().union(q.as_set()) != foot {
                bad.push(format!("{u:?} over {l:?} does not fit exactly"));
            }
        }
        let (p, q, foot) = diamond_pair(Kind::Dent, Kind::Dent);
        let gap = foot.difference(&p.as_set().union(q.as_set()));
        let filler = tiny_filler().translate(Cell::new(0, ORDER - 1) + filler_anchor());
        if p.overlaps(&q) || &gap != filler.as_set() || gap.len() != 51 {
            bad.push(format!("dent pair leaves a gap of {} cells", gap.len()));
        }
        let (p, q, _) = diamond_pair(Kind::Bump, Kind::Bump);
        if !p.overlaps(&q) {
            bad.push("bump pair does not overlap".into());
        }
        let ok = bad.is_empty();
        (
            ok,
            if ok {
                "bump/dent exact, dent/dent gap is the 51-cell filler, bump/bump overlaps".into()
            } else {
                bad.join("; ")
            },
        )
    })
}

pub fn c04_bn(_fx: &Fixture) -> Outcome {
    timed(4, "boundary word monotile test", BN_BUDGET, || {
        let verdict = |p: &Polyomino| -> Option<bool> {
            let (tiles, f) = is_translational_monotile(p).ok()?;
            let word = p.boundary_word().ok()?;
            Some(tiles && f.is_some_and(|f| f.holds(&word.letters)))
        };
        let filler = verdict(&tiny_filler());
        let diamond = verdict(&level2(ORDER).expect("order 13"));
        let rects = (1..=4)
            .flat_map(|w| (1..=4).map(move |h| (w, h)))
            .filter(|&(w, h)| {
                let r = Polyomino::from_set(CellSet::rect(Cell::ORIGIN, w, h)).expect("rectangle");
                verdict(&r) == Some(true)
            })
            .count();
        let ok = filler == Some(false) && diamond == Some(true) && rects == 16;
        (
            ok,
            format!("filler tiles: {filler:?}, order-13 diamond tiles: {diamond:?}, rectangles tiling {rects}/16"),
        )
    })
}

pub fn c05_pair_table(fx: &Fixture) -> Outcome {
    timed(5, "pairwise code compatibility", TILING_BUDGET, || {
        let codes: Vec<_> = fx.ts.emitted_codes().into_iter().collect();
        let (_, big_j) = level3_vectors(ORDER, SIDE);
        let plain = realize_many(&[
            Level3Spec::plain((ORDER, SIDE), Cell::ORIGIN),
            Level3Spec::plain((ORDER, SIDE), -big_j),
        ])
        .expect("plain squares are disjoint");
        let filler = tiny_filler();
        let mut bad = Vec::new();
        let (mut fits, mut clash) = (0, 0);
        for &s in &codes {
            for &t in &codes {
                let glued = realize_many(&[
                    Level3Spec::coded(Cell::ORIGIN, None, Some(s)),
                    Level3Spec::coded(-big_j, Some(t), None),
                ]);
                let ok = compatible(s, t);
                match (glued, ok) {
                    (Err(_), false) => clash += 1,
                    (Ok(g), true) => {
                        fits += 1;
                        let needs = filler_needs(s, t).unwrap_or_default();
                        let gap = plain.as_set().difference(g.as_set());
                        let want = needs.iter().fold(CellSet::new(), |acc, &k| {
                            acc.union(filler.translate(filler_offset(Cell::ORIGIN, k)).as_set())
                        });
                        if gap != want || gap.components().len() != needs.len() {
                            bad.push(format!("{s} over {t}: gap of {} cells", gap.len()));
                        }
                    }
                    (Err(_), true) => bad.push(format!("{s} over {t} overlaps")),
                    (Ok(_), false) => bad.push(format!("{s} over {t} fits")),
                }
            }
        }
        let ok = bad.is_empty() && !codes.is_empty();
        (
            ok,
            if ok {
                format!(
                    "{} codes, {} pairs: {fits} fit with fillers in every gap, {clash} overlap",
                    codes.len(),
                    codes.len() * codes.len()
                )
            } else {
                bad.join("; ")
            },
        )
    })
}

pub fn c06_filler_adjacency(fx: &Fixture) -> Outcome {
    timed(6, "no two fillers share an edge", ADJACENCY_BUDGET, || {
        let r = check_filler_adjacency(&fx.ts, AdjacencyConfig::default());
        (
            r.holds(),
            format!(
                "{} adjacent placements, {} survive ({} patches, {} nodes)",
                r.pairs.len(),
                r.survivors.len(),
                r.patches,
                r.nodes
            ),
        )
    })
}

pub fn c07_locator_glue(fx: &Fixture) -> Outcome {
    timed(
        7,
        "locator parts glue only to each other",
        BN_BUDGET,
        || {
            let lm = [SideLabel::L, SideLabel::M];
            let glue: BTreeSet<_> = fx
                .ts
                .emitted_codes()
                .into_iter()
                .filter(|c| lm.iter().all(|&l| c.right.contains(l)))
                .collect();
            let ok = glue == BTreeSet::from([glue_one(), glue_two()]);
            let list: Vec<String> = glue.iter().map(|c| c.to_string()).collect();
            (
                ok,
                format!("codes with L and M on the right: {}", list.join(" ")),
            )
        },
    )
}

pub fn c08_rigid_pattern(fx: &Fixture) -> Outcome {
    timed(8, "rigid pattern assembles", PATTERN_BUDGET, || {
        let a = fx.periodic();
        if a.is_empty() {
            return (false, "no periodic tiling to follow".into());
        }
        let pat = rigid_pattern(&fx.ws, -3..4, -3..4, tile_at(&a));
        let inner = |(x, y): (i32, i32)| (-1..=1).contains(&x) && (-1..=1).contains(&y);
        let window = owned_units(&fx.tiles, &pat, inner);
        let report = verify_assembly(&fx.tiles, &pat.placements, &window);
        let count = |f: &dyn Fn(&Role) -> bool| {
            pat.role
                .iter()
                .zip(&pat.owner)
                .filter(|(r, &o)| inner(o) && f(r))
                .count()
        };
        let locators = count(&|r| matches!(r, Role::Locator));
        let encoders = count(&|r| matches!(r, Role::Encoder));
        let linkers = count(&|r| matches!(r, Role::TopLinker(_) | Role::RightLinker(_)));
        // Selectors accept nothing but markers, and markers rest only on
        // locator parts: on a selector or along the locator's edge.
        let locator = |i: usize| {
            matches!(
                pat.placements[i].tile,
                pattern::LOWER | pattern::MIDDLE | pattern::UPPER
            )
        };
        let partners: BTreeSet<_> = fx
            .ts
            .emitted_codes()
            .into_iter()
            .filter(|&c| compatible(c, selector()) || compatible(selector(), c))
            .collect();
        let (mut docked, mut along, mut stray, mut lone) = (0, 0, 0, 0);
        for c in &report.contacts {
            let (up, low) = (c.upper_placement, c.lower_placement);
            if (c.se == Some(selector()) || c.nw == Some(selector()))
                && !(c.se == Some(marker()) || c.nw == Some(marker()))
            {
                lone += 1;
            }
            let other = if c.se == Some(marker()) {
                Some(low)
            } else if c.nw == Some(marker()) {
                Some(up)
            } else {
                None
            };
            match other {
                Some(i) if !locator(i) => stray += 1,
                Some(_) if c.se == Some(selector()) || c.nw == Some(selector()) => docked += 1,
                Some(_) => along += 1,
                None => {}
            }
        }
        let ok = report.is_valid()
            && locators >= 7
            && encoders >= 4
            && linkers > 0
            && !report.filler_positions.is_empty()
            && docked > 0
            && stray == 0
            && lone == 0
            && partners == BTreeSet::from([marker()]);
        (
            ok,
            format!(
                "{} units, {} violations, {locators} locator parts, {encoders} encoders, {linkers} linkers, {} fillers; markers on selectors {docked}, along locator edges {along}, elsewhere {stray}; selectors without a marker {lone}; codes meeting a selector {}",
                window.len(),
                report.violations.len(),
                report.filler_positions.len(),
                partners.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            ),
        )
    })
}

fn plain_units<'a>(units: impl IntoIterator<Item = &'a Cell>) -> Result<CellSet, String> {
    let (i, j) = level3_vectors(ORDER, SIDE);
    let specs: Vec<Level3Spec> = units
        .into_iter()
        .map(|u| Level3Spec::plain((ORDER, SIDE), u.x * i + u.y * j))
        .collect();
    realize_many(&specs)
        .map(|p| p.into_set())
        .map_err(|e| e.to_string())
}

pub fn c09_cell_tiling(fx: &Fixture) -> Outcome {
    timed(9, "cell-level tiling of the pattern", TILING_BUDGET, || {
        let a = fx.periodic();
        if a.is_empty() {
            return (false, "no periodic tiling to follow".into());
        }
        let pat = rigid_pattern(&fx.ws, -2..3, -2..3, tile_at(&a));
        let placements = match refine(&fx.ts, &pat.placements) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let l = fx.ts.formulas.locator_len;
        let contact: Vec<Cell> = (l - 3..=l)
            .flat_map(|u| (2..=5).map(move |v| Cell::new(u, v)))
            .collect();
        let inner = |(x, y): (i32, i32)| (-1..=1).contains(&x) && (-1..=1).contains(&y);
        let owned = owned_units(&fx.tiles, &pat, inner);
        let mut lines = Vec::new();
        let mut ok = true;
        for (name, units) in [
            ("contact zone", contact.iter().collect::<Vec<_>>()),
            ("owned window", owned.iter().collect()),
        ] {
            let cells = match plain_units(units) {
                Ok(c) => c,
                Err(e) => return (false, e),
            };
            let n = cells.len();
            let region = match Region::window(cells) {
                Ok(r) => r,
                Err(e) => return (false, e.to_string()),
            };
            let r = verify_tiling(&fx.polys, &placements, &region, true);
            ok &= r.is_clean();
            lines.push(format!(
                "{name} {n} cells: {} uncovered, {} doubly covered",
                r.uncovered.len(),
                r.double.len()
            ));
        }
        lines.insert(0, format!("{} placements", placements.len()));
        (ok, lines.join(", "))
    })
}

pub fn c10_linker_colors(fx: &Fixture) -> Outcome {
    timed(10, "linkers carry matching colors", PATTERN_BUDGET, || {
        let f = fx.ts.formulas;
        let mut bad = Vec::new();
        if compatible(bit_code(true), bit_code(false))
            || compatible(bit_code(false), bit_code(true))
        {
            bad.push("opposite bits are compatible".into());
        }
        let a = fx.periodic();
        if a.is_empty() {
            return (false, "no periodic tiling to follow".into());
        }
        let base = tile_at(&a);
        let n = f.n as usize;
        let tiles = fx.ws.tiles();
        let mut checked = 0;
        for top in [false, true] {
            for p in 0..n {
                for q in 0..n {
                    let nb = if top { (0, 1) } else { (1, 0) };
                    let pat = rigid_pattern(&fx.ws, -1..3, -1..3, |x, y| match (x, y) {
                        (0, 0) => p,
                        c if c == nb => q,
                        _ => base(x, y),
                    });
                    let units: BTreeSet<Cell> = pat
                        .placements
                        .iter()
                        .zip(&pat.role)
                        .zip(&pat.owner)
                        .filter(|((_, r), &o)| {
                            o == (0, 0)
                                && if top {
                                    matches!(r, Role::TopLinker(_))
                                } else {
                                    matches!(r, Role::RightLinker(_))
                                }
                        })
                        .flat_map(|((pl, _), _)| {
                            fx.tiles[pl.tile].units.iter().map(move |&u| u + pl.offset)
                        })
                        .collect();
                    let report = verify_in(
                        &fx.tiles,
                        &pat.placements,
                        &Space::Window { units, open: true },
                    );
                    let clash = report
                        .violations
                        .iter()
                        .any(|v| matches!(v, Violation::Incompatible { .. }));
                    let differ = if top {
                        tiles[p].top != tiles[q].bottom
                    } else {
                        tiles[p].right != tiles[q].left
                    };
                    checked += 1;
                    if clash != differ {
                        bad.push(format!(
                            "tile {p} {} tile {q}: clash {clash}, colors differ {differ}",
                            if top { "under" } else { "left of" }
                        ));
                    }
                }
            }
        }
        let ok = bad.is_empty();
        (
            ok,
            if ok {
                format!("{checked} neighbour pairs: linkers clash exactly when colors differ")
            } else {
                bad.join("; ")
            },
        )
    })
}

/// The sample set with one tile recolored so that no torus of the same size
/// exists.
pub fn broken_sample() -> WangSet {
    WangSet::new(
        vec![
            WangTile::new(0, 0, 1, 3),
            WangTile::new(2, 2, 3, 0),
            WangTile::new(3, 3, 0, 2),
        ],
        4,
    )
    .expect("fixed set is well formed")
}

fn cyclic_match(a: &Assignment, b: &Assignment) -> bool {
    let (h, w) = (a.len(), a.first().map_or(0, |r| r.len()));
    if b.len() != h || b.iter().any(|r| r.len() != w) {
        return false;
    }
    (0..h).any(|dy| {
        (0..w).any(|dx| (0..h).all(|y| (0..w).all(|x| b[(y + dy) % h][(x + dx) % w] == a[y][x])))
    })
}

pub fn c11_torus(fx: &Fixture) -> Outcome {
    timed(
        11,
        "torus assemblies follow Wang tori",
        TORUS_BUDGET,
        || {
            let config = SearchConfig {
                node_limit: TORUS_NODES,
            };
            let Some((w, h, want)) = smallest_torus(&fx.ws, 4) else {
                return (false, "Wang set has no small torus".into());
            };
            let g = Geometry::new(&fx.ws);
            let lattice = match g.torus(w as i32, h as i32) {
                Ok(l) => l,
                Err(e) => return (false, e.to_string()),
            };
            let space = Space::Torus(lattice);
            let mut lines = vec![format!("smallest Wang torus {w}x{h} {want:?}")];
            let mut ok = true;
            match abstract_solve_in(&fx.tiles, &space, config) {
                Ok(Some(pl)) => {
                    let report = verify_in(&fx.tiles, &pl, &space);
                    let got = decode_torus(&fx.ws, &fx.tiles, &pl, w, h);
                    let same = got
                        .as_ref()
                        .is_some_and(|a| check_torus(&fx.ws, a) && cyclic_match(&want, a));
                    ok &= report.is_valid() && same;
                    lines.push(format!(
                        "assembly of {} pieces, {} violations, reads {got:?}",
                        pl.len(),
                        report.violations.len()
                    ));
                }
                other => {
                    ok = false;
                    lines.push(format!("assembly search gave {other:?}"));
                }
            }
            let broken = broken_sample();
            let has_torus = wang_torus_solve(&broken, w, h).is_some();
            let space = match g.torus(w as i32, h as i32) {
                Ok(l) => Space::Torus(l),
                Err(e) => return (false, e.to_string()),
            };
            let verdict = abstract_solve_in(&compiler::abstract_tiles(&broken), &space, config);
            ok &= !has_torus && matches!(verdict, Ok(None));
            lines.push(format!(
                "recolored set: Wang torus {has_torus}, assembly {}",
                match verdict {
                    Ok(None) => "none".to_string(),
                    Ok(Some(_)) => "found".into(),
                    Err(e) => e.to_string(),
                }
            ));
            (ok, lines.join("; "))
        },
    )
}

pub fn run_all(fx: &Fixture) -> Vec<Outcome> {
    vec![
        c01_seven_convex(fx),
        c02_formulas(fx),
        c03_fit_suite(fx),
        c04_bn(fx),
        c05_pair_table(fx),
        c06_filler_adjacency(fx),
        c07_locator_glue(fx),
        c08_rigid_pattern(fx),
        c09_cell_tiling(fx),
        c10_linker_colors(fx),
        c11_torus(fx),
    ]
}
