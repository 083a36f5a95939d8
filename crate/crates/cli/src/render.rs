//! SVG rendering of solutions: one file per bin, one user unit per
//! length unit, circles colored by level, grid cells outlined.

use crate::io::BinNodeDto;
use circlepack::rat;

const LEVEL_FILLS: [&str; 5] = ["#a1c5ff", "#ffe699", "#baffb9", "#ffbfe1", "#ff9d90"];

fn f(s: &str) -> f64 {
    rat::parse(s).map(|r| rat::to_f64(&r)).unwrap_or(0.0)
}

fn render_node(
    node: &BinNodeDto,
    ox: f64,
    oy: f64,
    bin_h: f64,
    radii: &dyn Fn(&str) -> f64,
    out: &mut String,
) {
    // flip y so the packing origin sits at the bottom-left of the image
    for cell in &node.cells {
        let x0 = ox + f(&cell.x0);
        let y1 = oy + f(&cell.y1);
        let w = f(&cell.x1) - f(&cell.x0);
        let h = f(&cell.y1) - f(&cell.y0);
        out.push_str(&format!(
            "  <rect x=\"{:.6}\" y=\"{:.6}\" width=\"{:.6}\" height=\"{:.6}\" \
             fill=\"none\" stroke=\"#888\" stroke-width=\"{:.6}\"/>\n",
            x0,
            bin_h - y1,
            w,
            h,
            (w.min(h) / 40.0).max(1e-4),
        ));
        render_node(&cell.child, ox + f(&cell.x0), oy + f(&cell.y0), bin_h, radii, out);
    }
    let fill = LEVEL_FILLS[node.level % LEVEL_FILLS.len()];
    for p in &node.placements {
        let r = radii(&p.id);
        out.push_str(&format!(
            "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"{}\" \
             stroke=\"#333\" stroke-width=\"{:.6}\"/>\n",
            ox + f(&p.x),
            bin_h - (oy + f(&p.y)),
            r,
            fill,
            (r / 20.0).max(1e-4),
        ));
    }
}

/// Renders one bin to a standalone SVG document.
pub fn render_bin(node: &BinNodeDto, radii: &dyn Fn(&str) -> f64) -> String {
    let w = f(&node.w);
    let h = f(&node.h);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" \
         width=\"{w}\" height=\"{h}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#fcfcfc\" \
         stroke=\"#000\" stroke-width=\"{:.6}\"/>\n",
        (w.min(h) / 100.0).max(1e-4),
    ));
    render_node(node, 0.0, 0.0, h, radii, &mut out);
    out.push_str("</svg>\n");
    out
}
