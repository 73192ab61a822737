use std::collections::BTreeSet;

use polytile_core::assembly::compatible;
use polytile_core::blocks::{LabelSet, SideCode, SideLabel};
use polytile_core::bn::is_translational_monotile;
use polytile_core::compiler::{abstract_tiles, decode_encoder, Formulas};
use polytile_core::grid::{union_disjoint, Cell, CellSet, Polyomino};
use polytile_core::render::{render_svg, Class, Item, Style};
use polytile_core::solver::{solve_exact_cover, verify_tiling, Region, SolveConfig};
use polytile_core::wang::{check_torus, wang_torus_solve, WangSet, WangTile};
use proptest::prelude::*;

/// Connected polyominoes grown cell by cell inside a small box.
fn polyomino(max: usize) -> impl Strategy<Value = Polyomino> {
    prop::collection::vec((0..4usize, any::<prop::sample::Index>()), 0..max).prop_map(|steps| {
        let mut cells = vec![Cell::ORIGIN];
        for (dir, pick) in steps {
            let from = cells[pick.index(cells.len())];
            let next = from.neighbors()[dir];
            if !cells.contains(&next) {
                cells.push(next);
            }
        }
        Polyomino::new(cells).unwrap()
    })
}

fn cell() -> impl Strategy<Value = Cell> {
    (-50..50i32, -50..50i32).prop_map(|(x, y)| Cell::new(x, y))
}

fn label_set() -> impl Strategy<Value = Vec<SideLabel>> {
    use SideLabel::*;
    prop::sample::subsequence(vec![A, B, C, L, M], 0..=5)
}

fn wang_set() -> impl Strategy<Value = WangSet> {
    (1..5u32).prop_flat_map(|m| {
        prop::collection::vec((0..m, 0..m, 0..m, 0..m), 1..5).prop_map(move |ts| {
            let tiles = ts
                .into_iter()
                .map(|(a, b, c, d)| WangTile::new(a, b, c, d))
                .collect();
            WangSet::new(tiles, m).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn translate_is_a_group_action(p in polyomino(12), u in cell(), v in cell()) {
        prop_assert_eq!(p.translate(u).translate(v), p.translate(u + v));
    }

    #[test]
    fn convexity_ignores_translation(p in polyomino(12), u in cell()) {
        prop_assert_eq!(p.is_orthogonally_convex(), p.translate(u).is_orthogonally_convex());
    }

    #[test]
    fn boundary_words_close_and_measure_area(p in polyomino(14)) {
        // Pieces with holes have no single boundary word.
        if let Ok(w) = p.boundary_word() {
            prop_assert!(w.is_closed());
            prop_assert_eq!(w.shoelace_area(), p.len() as i64);
        }
    }

    #[test]
    fn disjoint_union_adds_counts(p in polyomino(10), q in polyomino(10), v in cell()) {
        let q = q.translate(v + Cell::new(40, 0));
        let u = union_disjoint(&[p.clone(), q.clone()]);
        if p.overlaps(&q) {
            prop_assert!(u.is_err());
        } else {
            prop_assert_eq!(u.unwrap().len(), p.len() + q.len());
        }
    }

    #[test]
    fn monotile_witness_is_exact(p in polyomino(8), v in cell()) {
        let Ok((tiles, f)) = is_translational_monotile(&p) else { return Ok(()) };
        let moved = is_translational_monotile(&p.translate(v)).unwrap();
        prop_assert_eq!(tiles, moved.0);
        if tiles {
            let f = f.unwrap();
            let word = p.boundary_word().unwrap();
            prop_assert!(f.holds(&word.letters));
            // Copies of p tile the torus spanned by the witness periods.
            let (a, b) = f.periods(&word.letters);
            let region = Region::torus(a, b).unwrap();
            prop_assert_eq!(region.area(), p.len());
            let found = solve_exact_cover(std::slice::from_ref(&p), &region, &SolveConfig::default()).unwrap();
            prop_assert!(found.is_some());
        }
    }

    #[test]
    fn compatibility_is_the_subset_rule(a in label_set(), b in label_set(), c in label_set(), d in label_set()) {
        let s = SideCode::new(&a, &b);
        let t = SideCode::new(&c, &d);
        let want = a.iter().all(|l| d.contains(l)) && c.iter().all(|l| b.contains(l));
        prop_assert_eq!(compatible(s, t), want);
        prop_assert_eq!(LabelSet::of(&a).is_subset(LabelSet::of(&d)), a.iter().all(|l| d.contains(l)));
    }

    #[test]
    fn formulas_fit_together(ws in wang_set()) {
        let f = Formulas::new(&ws);
        prop_assert_eq!(f.encoder_len, 2 * f.segment + f.padding);
        prop_assert!(f.excavation() < f.segment);
        for k in 0..f.n {
            prop_assert_eq!(f.top_right_block(k) - (f.bottom_left_block(k) + f.t), f.locator_len);
        }
    }

    #[test]
    fn encoder_colors_round_trip(ws in wang_set()) {
        let f = Formulas::new(&ws);
        let enc = &abstract_tiles(&ws)[0];
        let want: Vec<[u32; 4]> = ws.tiles().iter().map(|t| [t.top, t.bottom, t.left, t.right]).collect();
        prop_assert_eq!(decode_encoder(enc, &f), Some(want));
    }

    #[test]
    fn wang_tori_repeat(ws in wang_set(), w in 1..4usize, h in 1..3usize, k in 1..3usize, l in 1..3usize) {
        if let Some(a) = wang_torus_solve(&ws, w, h) {
            prop_assert!(check_torus(&ws, &a));
            let big: Vec<Vec<usize>> = (0..h * l)
                .map(|y| (0..w * k).map(|x| a[y % h][x % w]).collect())
                .collect();
            prop_assert!(check_torus(&ws, &big));
            prop_assert!(wang_torus_solve(&ws, w * k, h * l).is_some());
        }
    }

    #[test]
    fn solutions_verify_and_extra_pieces_help(
        ps in prop::collection::vec(polyomino(3), 1..3),
        extra in polyomino(3),
        w in 1..5i32,
        h in 1..4i32,
    ) {
        let region = Region::window(CellSet::rect(Cell::ORIGIN, w, h)).unwrap();
        let config = SolveConfig { node_limit: 200_000 };
        let first = solve_exact_cover(&ps, &region, &config).unwrap();
        if let Some(pl) = &first {
            prop_assert!(verify_tiling(&ps, pl, &region, false).is_clean());
        }
        let mut more = ps.clone();
        more.push(extra);
        let second = solve_exact_cover(&more, &region, &config).unwrap();
        if let Some(pl) = &second {
            prop_assert!(verify_tiling(&more, pl, &region, false).is_clean());
        }
        prop_assert!(first.is_none() || second.is_some());
    }

    #[test]
    fn rendering_is_a_function(ps in prop::collection::vec((polyomino(8), cell()), 1..4), scale in 1..6u32) {
        let items: Vec<Item> = ps
            .iter()
            .map(|(p, at)| Item { poly: p, offset: *at, class: Class::Other })
            .collect();
        let style = Style { scale, ..Style::default() };
        let svg = render_svg(&items, &style);
        prop_assert_eq!(&svg, &render_svg(&items, &style));
        prop_assert_eq!(svg.matches("<g ").count(), items.len());
    }
}

#[test]
fn side_decorations_are_injective() {
    use polytile_core::blocks::{all_codes, side_decorations, Side};
    for side in [Side::Nw, Side::Se] {
        let seqs: BTreeSet<String> = all_codes()
            .into_iter()
            .map(|c| polytile_core::blocks::bits(&side_decorations(c, side)))
            .collect();
        assert_eq!(seqs.len(), all_codes().len());
    }
}
