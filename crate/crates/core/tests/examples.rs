use polytile_core::assembly::{
    abstract_solve_in, filler_needs, verify_assembly, AbstractPlacement, SearchConfig, Space,
};
use polytile_core::blocks::{
    decoration_delta, level3_vectors, tiny_filler, Kind, Side, ORDER, SIDE,
};
use polytile_core::compiler::{abstract_tiles, compile, padding_code, TileSet7, TINY_FILLER};
use polytile_core::grid::{Cell, CellSet};
use polytile_core::lattice::Lattice;
use polytile_core::pattern::{owned_units, rigid_pattern, Geometry, ENCODER, LOWER, MIDDLE, UPPER};
use polytile_core::solver::{refine, verify_tiling, Region};
use polytile_core::wang::{smallest_torus, WangSet, WangTile};

fn sample_tiling(x: i32, _y: i32) -> usize {
    [0, 1, 2][x.rem_euclid(3) as usize]
}

#[test]
fn unit_vectors_in_cells() {
    let (i, j) = level3_vectors(ORDER, SIDE);
    assert_eq!(i, Cell::new(286, 264));
    assert_eq!(j, Cell::new(-264, 286));
}

#[test]
fn bump_and_dent_change_area_equally() {
    // A bump must fill the dent it faces, so the sizes agree across
    // opposite sides.
    let size = |side, kind| decoration_delta(side, kind).unwrap().len();
    assert_eq!(size(Side::Se, Kind::Bump), size(Side::Nw, Kind::Dent));
    assert_eq!(size(Side::Nw, Kind::Bump), size(Side::Se, Kind::Dent));
}

#[test]
fn padding_against_padding_needs_no_filler() {
    // Each part-one dent of the SE side faces a part-three position of the NW
    // side, which the empty code fills with a bump.
    assert_eq!(
        filler_needs(padding_code(), padding_code()).unwrap(),
        Vec::<usize>::new()
    );
}

#[test]
fn sample_unit_counts() {
    let tiles = abstract_tiles(&WangSet::sample());
    let counts: Vec<usize> = tiles.iter().map(|t| t.len()).collect();
    assert_eq!(counts, vec![81, 3, 3, 45, 3, 45]);
}

#[test]
fn filler_does_not_depend_on_the_set() {
    let one = WangSet::new(vec![WangTile::new(0, 0, 0, 0)], 1).unwrap();
    let ts: TileSet7 = compile(&one).unwrap();
    assert_eq!(ts.piece(TINY_FILLER).polyomino, tiny_filler());
}

#[test]
fn smallest_sample_torus() {
    let (w, h, a) = smallest_torus(&WangSet::sample(), 4).unwrap();
    assert_eq!((w, h, a), (3, 1, vec![vec![0, 1, 2]]));
}

#[test]
fn encoders_cannot_face_markers() {
    let ws = WangSet::sample();
    let tiles = abstract_tiles(&ws);
    // The second encoder's NW marker row sits against the first's SE row.
    let pl = [
        AbstractPlacement {
            tile: ENCODER,
            offset: Cell::new(0, 3),
        },
        AbstractPlacement {
            tile: ENCODER,
            offset: Cell::ORIGIN,
        },
    ];
    let window = pl
        .iter()
        .flat_map(|p| tiles[p.tile].units.iter().map(move |&u| u + p.offset))
        .collect();
    let report = verify_assembly(&tiles, &pl, &window);
    assert!(report.incompatibilities().count() > 0);
}

#[test]
fn window_search_puts_locators_on_the_lattice() {
    let ws = WangSet::sample();
    let tiles = abstract_tiles(&ws);
    let pat = rigid_pattern(&ws, -2..3, -2..3, sample_tiling);
    let units = owned_units(&tiles, &pat, |o| o == (0, 0));
    let space = Space::Window { units, open: true };
    let found = abstract_solve_in(&tiles, &space, SearchConfig::default())
        .unwrap()
        .unwrap();
    let g = Geometry::new(&ws);
    let lattice = Lattice::new(g.right(), g.up()).unwrap();
    let locators: Vec<Cell> = found
        .iter()
        .filter(|p| p.tile == LOWER)
        .map(|p| p.offset)
        .collect();
    assert!(locators.len() >= 2);
    assert!(locators.iter().all(|&l| lattice.contains(l - locators[0])));
    assert!(verify_assembly(
        &tiles,
        &found,
        &found
            .iter()
            .flat_map(|p| tiles[p.tile].units.iter().map(move |&u| u + p.offset))
            .collect()
    )
    .conflicts()
    .next()
    .is_none());
}

#[test]
fn marker_on_selector_refines_cleanly() {
    let ws = WangSet::sample();
    let ts = compile(&ws).unwrap();
    let tiles = ts.abstract_tiles();
    let g = Geometry::new(&ws);
    let pat = rigid_pattern(&ws, -1..2, -1..2, sample_tiling);
    let cells = refine(&ts, &pat.placements).unwrap();
    // The unit where the encoder of cell (0, 0) meets a locator's
    // selector, and its neighbour across the contact.
    let enc = g.encoder(Cell::ORIGIN, sample_tiling(0, 0));
    let report = verify_assembly(
        &tiles,
        &pat.placements,
        &owned_units(&tiles, &pat, |o| o == (0, 0)),
    );
    let contact = report
        .contacts
        .iter()
        .find(|c| {
            let ends = [
                pat.placements[c.upper_placement],
                pat.placements[c.lower_placement],
            ];
            ends.iter().any(|p| p.tile == ENCODER && p.offset == enc)
                && ends
                    .iter()
                    .any(|p| matches!(p.tile, LOWER | MIDDLE | UPPER))
                && c.se.zip(c.nw).is_some_and(|(s, n)| {
                    (s, n)
                        == (
                            polytile_core::compiler::marker(),
                            polytile_core::compiler::selector(),
                        )
                        || (n, s)
                            == (
                                polytile_core::compiler::marker(),
                                polytile_core::compiler::selector(),
                            )
                })
        })
        .expect("encoder docks on a selector");
    let (i, j) = level3_vectors(ORDER, SIDE);
    let squares = [contact.upper, contact.upper - Cell::new(0, 1)];
    let window = squares.iter().fold(CellSet::new(), |acc, u| {
        let sq = polytile_core::blocks::realize_level3(&polytile_core::blocks::Level3Spec::plain(
            (ORDER, SIDE),
            u.x * i + u.y * j,
        ))
        .unwrap();
        acc.union(sq.as_set())
    });
    let polys: Vec<_> = ts.pieces.iter().map(|p| p.polyomino.clone()).collect();
    let r = verify_tiling(&polys, &cells, &Region::window(window).unwrap(), true);
    assert!(r.is_clean(), "{r}");
}
