//! SVG rendering of the layer graphs: the three flags as vertical columns
//! with level i at height i, matching edges solid, compatibility-only
//! edges dashed, and witnessed triangles bold.

use std::fmt::Write;

use crate::cover::{AUnit, CycleClassification};
use crate::prism::{Cycle, LayerRef, PrismGraph};

const COLUMN_X: [f64; 3] = [100.0, 280.0, 460.0];
const ROW_STEP: f64 = 48.0;
const MARGIN: f64 = 50.0;

fn position(d: usize, v: LayerRef) -> (f64, f64) {
    let x = COLUMN_X[v.flag];
    let y = MARGIN + (d - v.level) as f64 * ROW_STEP;
    (x, y)
}

fn line(out: &mut String, d: usize, a: LayerRef, b: LayerRef, style: &str) {
    let (x1, y1) = position(d, a);
    let (x2, y2) = position(d, b);
    writeln!(
        out,
        r#"  <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#
    )
    .expect("string write");
}

/// Render the graphs of a triple.  When a classification is supplied, its
/// witnessed triangles are drawn bold.
pub fn render_prism(g: &PrismGraph, cls: Option<&CycleClassification>) -> String {
    let d = g.d();
    let width = COLUMN_X[2] + MARGIN + 50.0;
    let height = MARGIN + (d.max(1) - 1) as f64 * ROW_STEP + 70.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .expect("string write");
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).expect("string write");

    let bold: Vec<&Cycle> = cls
        .map(|c| {
            c.a_units
                .iter()
                .filter_map(|u| match u {
                    AUnit::CompatibleTriangle(t) => Some(t),
                    _ => None,
                })
                .collect()
        })
        .unwrap_or_default();

    for (a, b) in g.gtilde_only_edges() {
        line(
            &mut out,
            d,
            a,
            b,
            r##"stroke="#888" stroke-width="1" stroke-dasharray="6 4""##,
        );
    }
    for (a, b) in g.g_edges() {
        let is_bold = bold.iter().any(|c| c.contains(a) && c.contains(b));
        let style = if is_bold {
            r#"stroke="black" stroke-width="3.5""#
        } else {
            r#"stroke="black" stroke-width="1.4""#
        };
        line(&mut out, d, a, b, style);
    }

    for (flag, &x) in COLUMN_X.iter().enumerate() {
        let name = LayerRef::new(flag, 1).flag_name();
        let y_label = MARGIN + d as f64 * ROW_STEP + 10.0;
        writeln!(
            out,
            r#"  <text x="{x}" y="{y_label}" text-anchor="middle" font-size="16" font-family="serif" font-style="italic">{name}</text>"#
        )
        .expect("string write");
        for level in 1..=d {
            let (x, y) = position(d, LayerRef::new(flag, level));
            writeln!(
                out,
                r#"  <circle cx="{x}" cy="{y}" r="4.5" fill="black"/>"#
            )
            .expect("string write");
            writeln!(
                out,
                r#"  <text x="{}" y="{}" text-anchor="middle" font-size="11" font-family="serif">{}{}</text>"#,
                x - 16.0,
                y + 4.0,
                name,
                level
            )
            .expect("string write");
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::classify;
    use crate::flag::FlagTuple;
    use crate::scalar::FieldSpec;

    #[test]
    fn renders_every_edge_once() {
        let (t, _) = FlagTuple::random_transverse(FieldSpec::Rationals, 3, 3, 7, 10).unwrap();
        let g = PrismGraph::build(&t).unwrap();
        let cls = classify(&g, &t).unwrap();
        let svg = render_prism(&g, Some(&cls));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        let solid = svg.matches("stroke-width=\"1.4\"").count()
            + svg.matches("stroke-width=\"3.5\"").count();
        assert_eq!(solid, 9, "one solid line per matching edge");
        let dashed = svg.matches("stroke-dasharray").count();
        assert_eq!(dashed, g.gtilde_only_edges().len());
        // Deterministic output.
        assert_eq!(svg, render_prism(&g, Some(&cls)));
    }
}
