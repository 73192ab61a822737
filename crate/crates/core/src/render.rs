//! SVG pictures of polyominoes and assemblies.

use std::collections::HashMap;
use std::fmt::Write;
use std::str::FromStr;

use crate::compiler::{self, CompiledPiece};
use crate::grid::{Cell, Dir, Polyomino};
use crate::solver::Placement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Locator,
    LocatorMiddle,
    Encoder,
    Linker,
    Filler,
    Other,
}

impl Class {
    pub fn of_name(name: &str) -> Class {
        match name {
            compiler::LOCATOR_LOWER | compiler::LOCATOR_UPPER => Class::Locator,
            compiler::LOCATOR_MIDDLE => Class::LocatorMiddle,
            compiler::ENCODER => Class::Encoder,
            compiler::A_LINKER | compiler::B_LINKER => Class::Linker,
            compiler::TINY_FILLER => Class::Filler,
            _ => Class::Other,
        }
    }

    pub fn css(self) -> &'static str {
        match self {
            Class::Locator => "locator",
            Class::LocatorMiddle => "locator-middle",
            Class::Encoder => "encoder",
            Class::Linker => "linker",
            Class::Filler => "filler",
            Class::Other => "piece",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Palette {
    #[default]
    Default,
    /// Pale fills, light grays for locators.
    Paper,
}

impl Palette {
    pub fn fill(self, class: Class) -> &'static str {
        match (self, class) {
            (Palette::Default, Class::Locator) => "#4e79a7",
            (Palette::Default, Class::LocatorMiddle) => "#2c4f75",
            (Palette::Default, Class::Encoder) => "#f28e2b",
            (Palette::Default, Class::Linker) => "#59a14f",
            (Palette::Default, Class::Filler) => "#b07aa1",
            (Palette::Default, Class::Other) => "#bab0ac",
            (Palette::Paper, Class::Locator) => "#e6e6e6",
            (Palette::Paper, Class::LocatorMiddle) => "#b3b3b3",
            (Palette::Paper, Class::Encoder) => "#ffe6cc",
            (Palette::Paper, Class::Linker) => "#e6cce6",
            (Palette::Paper, Class::Filler) => "#b366b3",
            (Palette::Paper, Class::Other) => "#e6e6e6",
        }
    }
}

impl FromStr for Palette {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(Palette::Default),
            "paper" => Ok(Palette::Paper),
            _ => Err(format!("unknown palette {s}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Style {
    /// Pixels per cell.
    pub scale: u32,
    pub palette: Palette,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            scale: 4,
            palette: Palette::Default,
        }
    }
}

/// A polyomino drawn at `offset`.
#[derive(Clone, Copy, Debug)]
pub struct Item<'a> {
    pub poly: &'a Polyomino,
    pub offset: Cell,
    pub class: Class,
}

/// Items for a list of placements of compiled pieces.
pub fn placement_items<'a>(pieces: &'a [CompiledPiece], placements: &[Placement]) -> Vec<Item<'a>> {
    placements
        .iter()
        .filter_map(|p| {
            let piece = pieces.get(p.piece)?;
            Some(Item {
                poly: &piece.polyomino,
                offset: p.offset,
                class: Class::of_name(&piece.name),
            })
        })
        .collect()
}

/// Start corner and maximal straight runs of an outline.
type Outline = (Cell, Vec<(Dir, i32)>);

/// Outline of `p`, or `None` when the piece has a hole or is disconnected.
fn outline(p: &Polyomino) -> Option<Outline> {
    let w = p.boundary_word().ok()?;
    let mut runs: Vec<(Dir, i32)> = Vec::new();
    for &d in &w.letters {
        match runs.last_mut() {
            Some((ld, n)) if *ld == d => *n += 1,
            _ => runs.push((d, 1)),
        }
    }
    Some((w.start, runs))
}

/// One `<g>` per item: a `<rect>` for rectangles, an outline `<path>` for
/// other simply connected pieces and one `<rect>` per row run otherwise.
/// The y axis points up, as in the cell coordinates.
pub fn render_svg(items: &[Item], style: &Style) -> String {
    let s = style.scale.max(1) as i64;
    let mut lo = Cell::new(i32::MAX, i32::MAX);
    let mut hi = Cell::new(i32::MIN, i32::MIN);
    for it in items {
        let (a, b) = it.poly.bounds();
        lo = Cell::new(lo.x.min(a.x + it.offset.x), lo.y.min(a.y + it.offset.y));
        hi = Cell::new(hi.x.max(b.x + it.offset.x), hi.y.max(b.y + it.offset.y));
    }
    if items.is_empty() {
        lo = Cell::ORIGIN;
        hi = Cell::new(-1, -1);
    }
    let width = (hi.x as i64 - lo.x as i64 + 1) * s;
    let height = (hi.y as i64 - lo.y as i64 + 1) * s;
    let px = |x: i32| (x as i64 - lo.x as i64) * s;
    let py = |y: i32| (hi.y as i64 + 1 - y as i64) * s;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let stroke = (s / 8).max(1);
    let mut cache: HashMap<*const Polyomino, Option<Outline>> = HashMap::new();
    for it in items {
        let fill = style.palette.fill(it.class);
        let _ = writeln!(
            out,
            "<g class=\"{}\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"{stroke}\">",
            it.class.css()
        );
        let shape = cache
            .entry(it.poly as *const _)
            .or_insert_with(|| outline(it.poly));
        match shape {
            Some((start, runs)) if runs.len() == 4 => {
                let (a, b) = it.poly.bounds();
                let _ = writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    px(start.x + it.offset.x),
                    py(b.y + it.offset.y + 1),
                    (b.x - a.x + 1) as i64 * s,
                    (b.y - a.y + 1) as i64 * s
                );
            }
            Some((start, runs)) => {
                let at = *start + it.offset;
                let _ = write!(out, "<path d=\"M{} {}", px(at.x), py(at.y));
                for &(d, n) in runs.iter() {
                    let len = n as i64 * s;
                    let _ = match d {
                        Dir::Right => write!(out, "h{len}"),
                        Dir::Left => write!(out, "h-{len}"),
                        Dir::Up => write!(out, "v-{len}"),
                        Dir::Down => write!(out, "v{len}"),
                    };
                }
                out.push_str("z\"/>\n");
            }
            None => {
                for (y, spans) in it.poly.as_set().rows() {
                    for sp in spans {
                        let _ = writeln!(
                            out,
                            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{s}\"/>",
                            px(sp.start + it.offset.x),
                            py(y + it.offset.y + 1),
                            sp.len() as i64 * s
                        );
                    }
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
    use crate::blocks::tiny_filler;

    fn item(p: &Polyomino, class: Class) -> Item<'_> {
        Item {
            poly: p,
            offset: Cell::ORIGIN,
            class,
        }
    }

    #[test]
    fn unit_cell_is_one_square() {
        let p = Polyomino::new([Cell::new(2, 3)]).unwrap();
        let svg = render_svg(&[item(&p, Class::Other)], &Style::default());
        assert_eq!(svg.matches("<rect").count(), 1);
        assert_eq!(svg.matches("<path").count(), 0);
        assert!(svg.contains("<rect x=\"0\" y=\"0\" width=\"4\" height=\"4\"/>"));
    }

    #[test]
    fn filler_outline_follows_boundary_word() {
        let f = tiny_filler();
        let word = f.boundary_word().unwrap();
        let svg = render_svg(
            &[item(&f, Class::Filler)],
            &Style {
                scale: 1,
                ..Style::default()
            },
        );
        let d = svg
            .split("d=\"M")
            .nth(1)
            .unwrap()
            .split('z')
            .next()
            .unwrap();
        let steps: Vec<i64> = d
            .split(['h', 'v'])
            .skip(1)
            .map(|t| t.trim_start_matches('-').parse::<i64>().unwrap())
            .collect();
        assert_eq!(steps.iter().sum::<i64>(), word.len() as i64);
        // Twelve corners, one segment between each pair.
        assert_eq!(steps.len(), 12);
    }

    #[test]
    fn classes_and_determinism() {
        let f = tiny_filler();
        let sq = Polyomino::new([Cell::ORIGIN, Cell::new(1, 0)]).unwrap();
        let items = [
            item(&sq, Class::Locator),
            item(&sq, Class::Encoder),
            item(&sq, Class::Linker),
            item(&f, Class::Filler),
        ];
        let svg = render_svg(&items, &Style::default());
        for c in ["locator", "encoder", "linker", "filler"] {
            assert!(svg.contains(&format!("class=\"{c}\"")));
        }
        assert_eq!(svg, render_svg(&items, &Style::default()));
        assert_ne!(
            svg,
            render_svg(
                &items,
                &Style {
                    palette: Palette::Paper,
                    ..Style::default()
                }
            )
        );
    }

    #[test]
    fn holes_fall_back_to_runs() {
        let ring: Vec<Cell> = (0..3)
            .flat_map(|y| (0..3).map(move |x| Cell::new(x, y)))
            .filter(|&c| c != Cell::new(1, 1))
            .collect();
        let p = Polyomino::new(ring).unwrap();
        let svg = render_svg(&[item(&p, Class::Other)], &Style::default());
        assert_eq!(svg.matches("<rect").count(), 4);
    }
}
