use std::fmt::Write;

use super::layout::WordstreamLayout;
use crate::classify::DisplayCategory;

pub fn category_color(c: DisplayCategory) -> &'static str {
    match c {
        DisplayCategory::InterpretationPositive => "#4e9a6b",
        DisplayCategory::InterpretationNeutral => "#8fb8a0",
        DisplayCategory::InterpretationNegative => "#c9665b",
        DisplayCategory::Inquiry => "#e2a23b",
        DisplayCategory::ExperienceSharing => "#8a6fb3",
        DisplayCategory::ConceptNoting => "#4a7fb5",
        DisplayCategory::SupplementaryKnowledge => "#b5734a",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Static SVG rendering of a layout. SVG y grows downward, so every y is
/// flipped against the viewport height.
pub fn render_svg(layout: &WordstreamLayout) -> String {
    let h = layout.height;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = layout.width
    );
    if !layout.centers.is_empty() {
        for band in &layout.bands {
            let mut pts: Vec<String> = layout.centers.iter().zip(&band.top).map(|(x, y)| format!("{x:.2},{:.2}", h - y)).collect();
            pts.extend(layout.centers.iter().zip(&band.bottom).rev().map(|(x, y)| format!("{x:.2},{:.2}", h - y)));
            let _ = writeln!(
                out,
                r#"  <polygon class="band {slug}" fill="{color}" fill-opacity="0.75" points="{pts}"/>"#,
                slug = band.category.slug(),
                color = category_color(band.category),
                pts = pts.join(" ")
            );
        }
    }
    for k in &layout.keywords {
        // text baseline at the bottom of the box
        let _ = writeln!(
            out,
            r#"  <text class="keyword {slug}" x="{x:.2}" y="{y:.2}" font-size="{f:.2}">{t}</text>"#,
            slug = k.category.slug(),
            x = k.x,
            y = h - k.y,
            f = k.font,
            t = escape(&k.token)
        );
    }
    out.push_str("</svg>\n");
    out
}
