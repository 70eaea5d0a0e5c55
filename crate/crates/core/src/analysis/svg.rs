use super::HilbertGrid;
use crate::persistence::PersistenceDiagram;
use std::fmt::Write as _;

const MARGIN: f64 = 50.0;

fn fmt_tick(v: f64) -> String {
    format!("{:.3}", v)
}

/// Grayscale heatmap of a Hilbert grid, darker for larger values. Radius
/// runs left to right; density increases downward.
pub fn hilbert_svg(grid: &HilbertGrid) -> String {
    let (nr, nk) = (grid.r_values.len(), grid.k_values.len());
    let cw = (600.0 / nr.max(1) as f64).max(1.0);
    let ch = (400.0 / nk.max(1) as f64).max(1.0);
    let (w, h) = (cw * nr as f64, ch * nk as f64);
    let max = grid.max_value().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="sans-serif" font-size="12">"#,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, row) in grid.cells.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let shade = (255.0 * (1.0 - v as f64 / max)).round() as u8;
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{shade})"/>"#,
                MARGIN + i as f64 * cw,
                MARGIN + j as f64 * ch,
                cw,
                ch
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{w:.2}" height="{h:.2}" fill="none" stroke="black"/>"#
    );
    if let (Some(r0), Some(r1)) = (grid.r_values.first(), grid.r_values.last()) {
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.2}">{}</text>"#, MARGIN + h + 15.0, fmt_tick(*r0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN + w,
            MARGIN + h + 15.0,
            fmt_tick(*r1)
        );
    }
    if let (Some(k0), Some(k1)) = (grid.k_values.first(), grid.k_values.last()) {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{k0}</text>"#, MARGIN - 5.0, MARGIN + 12.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{k1}</text>"#, MARGIN - 5.0, MARGIN + h);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">r</text>"#, MARGIN + w / 2.0, MARGIN + h + 35.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">k</text>"#, MARGIN - 35.0, MARGIN + h / 2.0);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">H{} (max {})</text>"#,
        MARGIN + w / 2.0,
        MARGIN - 15.0,
        grid.degree,
        grid.max_value()
    );
    s.push_str("</svg>\n");
    s
}

/// Scatter plot of a persistence diagram; essential bars sit on a dashed
/// line above the finite range.
pub fn diagram_svg(diagram: &PersistenceDiagram) -> String {
    const SIZE: f64 = 400.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let finite_max = diagram
        .pairs
        .iter()
        .flat_map(|p| [p.birth, p.death])
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let top = if finite_max > 0.0 { finite_max * 1.1 } else { 1.0 };
    let inf_y = MARGIN - 10.0;
    let x = |v: f64| MARGIN + v / top * SIZE;
    let y = |v: f64| if v.is_infinite() { inf_y } else { MARGIN + SIZE - v / top * SIZE };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="sans-serif" font-size="12">"#,
        SIZE + 2.0 * MARGIN + 60.0,
        SIZE + 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        x(0.0),
        y(0.0),
        x(top),
        y(top)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{inf_y}" x2="{}" y2="{inf_y}" stroke="gray" stroke-dasharray="4 3"/>"#,
        MARGIN + SIZE
    );
    for p in &diagram.pairs {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.7"/>"#,
            x(p.birth),
            y(p.death),
            COLORS[p.dim % COLORS.len()]
        );
    }
    for d in 0..=diagram.max_dim {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{}">H{d}</text>"#,
            MARGIN + SIZE + 15.0,
            MARGIN + 15.0 * (d + 1) as f64,
            COLORS[d % COLORS.len()]
        );
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">birth</text>"#, MARGIN + SIZE / 2.0, MARGIN + SIZE + 35.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">death</text>"#, MARGIN - 35.0, MARGIN + SIZE / 2.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN + SIZE, MARGIN + SIZE + 15.0, fmt_tick(top));
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">inf</text>"#, MARGIN - 5.0, inf_y + 4.0);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::PersistencePair;

    #[test]
    fn heatmap_shades_scale_with_values() {
        let g = HilbertGrid {
            degree: 0,
            r_values: vec![0.0, 1.0],
            k_values: vec![1, 2],
            cells: vec![vec![4, 2], vec![1, 0]],
        };
        let svg = hilbert_svg(&g);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("rgb(0,0,0)"));
        assert!(svg.contains("rgb(255,255,255)"));
        assert!(svg.contains(">r</text>") && svg.contains(">k</text>"));
        assert_eq!(svg.matches("<rect").count(), 2 + 4);
    }

    #[test]
    fn diagram_plot_has_one_marker_per_pair() {
        let d = PersistenceDiagram::new(
            1,
            vec![
                PersistencePair { dim: 0, birth: 0.0, death: f64::INFINITY },
                PersistencePair { dim: 0, birth: 0.0, death: 0.5 },
                PersistencePair { dim: 1, birth: 0.3, death: 0.9 },
            ],
        );
        let svg = diagram_svg(&d);
        assert_eq!(svg.matches("<circle").count(), 3);
    }
}
