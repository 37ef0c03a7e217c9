//! SVG picture of a site configuration and its derived bond configurations,
//! one Poincaré-disk panel per graph: G with φ, G⁺ with φ⁺, Ḡ with φ̄ and
//! Ḡ⁺ with η.

use std::fmt::Write;

use hyperperc::clusters::{BondConfig, SiteConfig};
use hyperperc::contours::DerivedConfigs;
use hyperperc::planar_map::{layout, CombinatorialMap, LatticeMaps, SuperVertex};

type Point = (f64, f64);

const PANEL: f64 = 2.2;
const STROKE: f64 = 0.006;

struct Style {
    open: &'static str,
    closed: &'static str,
    dotted: bool,
}

const PHI: Style = Style {
    open: "#2e8b57",
    closed: "#2e8b57",
    dotted: true,
};
const PHI_PLUS: Style = Style {
    open: "#1f5fbf",
    closed: "#1f5fbf",
    dotted: true,
};
const PHI_BAR: Style = Style {
    open: "#000000",
    closed: "#a0a0a0",
    dotted: false,
};
const ETA: Style = Style {
    open: "#d62728",
    closed: "#d62728",
    dotted: true,
};

fn centroid(pts: impl Iterator<Item = Point>) -> Point {
    let (mut x, mut y, mut k) = (0.0, 0.0, 0.0);
    for p in pts {
        x += p.0;
        y += p.1;
        k += 1.0;
    }
    if k == 0.0 {
        (0.0, 0.0)
    } else {
        (x / k, y / k)
    }
}

/// Positions of the dual vertices (faces of `map`); `None` for the outer face.
fn face_points(map: &CombinatorialMap, pos: &[Point]) -> Vec<Option<Point>> {
    (0..map.num_faces())
        .map(|f| {
            map.is_interior_face(f)
                .then(|| centroid(map.face_darts(f).map(|d| pos[map.vertex_of(d)])))
        })
        .collect()
}

/// A point just outside the rim, across the midpoint of primal edge `e`.
fn beyond(map: &CombinatorialMap, pos: &[Point], e: usize) -> Point {
    let (u, v) = map.edge_endpoints(e);
    let m = ((pos[u].0 + pos[v].0) / 2.0, (pos[u].1 + pos[v].1) / 2.0);
    let r = (m.0 * m.0 + m.1 * m.1).sqrt();
    if r < 1e-9 {
        return m;
    }
    let s = (r + 0.06) / r;
    (m.0 * s, m.1 * s)
}

/// Segments of the dual of `map`; edge `e` of the dual crosses edge `e`.
fn dual_segments(map: &CombinatorialMap, pos: &[Point]) -> Vec<(Point, Point)> {
    let faces = face_points(map, pos);
    (0..map.num_edges())
        .map(|e| {
            let (f, g) = map.edge_faces(e);
            let a = faces[f].unwrap_or_else(|| beyond(map, pos, e));
            let b = faces[g].unwrap_or_else(|| beyond(map, pos, e));
            (a, b)
        })
        .collect()
}

fn primal_segments(map: &CombinatorialMap, pos: &[Point]) -> Vec<(Point, Point)> {
    map.edges().map(|(u, v)| (pos[u], pos[v])).collect()
}

fn bar_positions(maps: &LatticeMaps, pos: &[Point]) -> Vec<Point> {
    let faces = face_points(&maps.primal, pos);
    let bar = &maps.sup.bar;
    (0..bar.num_vertices())
        .map(|x| match maps.sup.role(x) {
            SuperVertex::Primal(v) => pos[v],
            SuperVertex::Dual(f) => faces[f].unwrap_or((0.0, 0.0)),
            SuperVertex::Midpoint(e) => {
                let (u, v) = maps.primal.edge_endpoints(e);
                ((pos[u].0 + pos[v].0) / 2.0, (pos[u].1 + pos[v].1) / 2.0)
            }
        })
        .collect()
}

fn svg_bonds(
    out: &mut String,
    id: &str,
    segs: &[(Point, Point)],
    bonds: &BondConfig,
    style: &Style,
) {
    let _ = writeln!(
        out,
        "<g id=\"{id}\" stroke-width=\"{STROKE}\" fill=\"none\">"
    );
    for (&(a, b), &s) in segs.iter().zip(&bonds.states) {
        let color = if s == 1 { style.open } else { style.closed };
        let dash = if s == 0 && style.dotted {
            " stroke-dasharray=\"0.012 0.012\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "<line x1=\"{:.5}\" y1=\"{:.5}\" x2=\"{:.5}\" y2=\"{:.5}\" stroke=\"{color}\"{dash}/>",
            a.0, -a.1, b.0, -b.1
        );
    }
    out.push_str("</g>\n");
}

fn svg_sites(out: &mut String, pos: &[Point], omega: &SiteConfig) {
    out.push_str("<g id=\"sites\" stroke=\"#000000\" stroke-width=\"0.004\">\n");
    for (&p, &s) in pos.iter().zip(&omega.states) {
        let r = 0.006 + 0.012 * (1.0 - (p.0 * p.0 + p.1 * p.1)).max(0.0);
        let fill = if s == 1 { "#000000" } else { "#ffffff" };
        let _ = writeln!(
            out,
            "<circle cx=\"{:.5}\" cy=\"{:.5}\" r=\"{r:.5}\" fill=\"{fill}\"/>",
            p.0, -p.1
        );
    }
    out.push_str("</g>\n");
}

fn panel_open(out: &mut String, id: &str, col: usize, row: usize) {
    let x = PANEL * (col as f64 + 0.5);
    let y = PANEL * (row as f64 + 0.5);
    let _ = writeln!(
        out,
        "<g id=\"{id}\" transform=\"translate({x:.2} {y:.2})\">"
    );
    out.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.004\"/>\n");
}

/// Renders the four panels as a standalone SVG document.
pub fn render_svg(maps: &LatticeMaps, omega: &SiteConfig, cfgs: &DerivedConfigs) -> String {
    let pos = layout(&maps.primal);
    let bar_pos = bar_positions(maps, &pos);
    let size = 2.0 * PANEL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size:.1} {size:.1}\" width=\"800\" height=\"800\">"
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    panel_open(&mut out, "primal", 0, 0);
    svg_bonds(
        &mut out,
        "phi",
        &primal_segments(&maps.primal, &pos),
        &cfgs.phi,
        &PHI,
    );
    svg_sites(&mut out, &pos, omega);
    out.push_str("</g>\n");

    panel_open(&mut out, "dual", 1, 0);
    svg_bonds(
        &mut out,
        "phi_plus",
        &dual_segments(&maps.primal, &pos),
        &cfgs.phi_plus,
        &PHI_PLUS,
    );
    svg_sites(&mut out, &pos, omega);
    out.push_str("</g>\n");

    panel_open(&mut out, "superposition", 0, 1);
    svg_bonds(
        &mut out,
        "phi_bar",
        &primal_segments(&maps.sup.bar, &bar_pos),
        &cfgs.bar_phi,
        &PHI_BAR,
    );
    svg_sites(&mut out, &pos, omega);
    out.push_str("</g>\n");

    panel_open(&mut out, "interface", 1, 1);
    svg_bonds(
        &mut out,
        "eta",
        &dual_segments(&maps.sup.bar, &bar_pos),
        &cfgs.eta,
        &ETA,
    );
    svg_sites(&mut out, &pos, omega);
    out.push_str("</g>\n");

    out.push_str("</svg>\n");
    out
}
