use serde::{Deserialize, Serialize};

use super::stream::{KeywordWeight, StreamBucket};
use super::PresentationError;
use crate::classify::{CategorySet, DisplayCategory};
use crate::text::is_cjk;

const GEOM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutParams {
    pub width: f64,
    pub height: f64,
    /// Keywords per bucket and category.
    pub k: usize,
    pub font_min: f64,
    pub font_max: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams { width: 1200.0, height: 300.0, k: 3, font_min: 10.0, font_max: 28.0 }
    }
}

/// One category's band; `bottom[i]` and `top[i]` are the y values at bucket
/// center `i`. y grows upward from the zero baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub category: DisplayCategory,
    pub bottom: Vec<f64>,
    pub top: Vec<f64>,
}

/// Axis-aligned keyword box; `(x, y)` is the lower-left corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordBox {
    pub token: String,
    pub category: DisplayCategory,
    pub bucket: usize,
    pub weight: usize,
    pub font: f64,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl KeywordBox {
    pub fn overlaps(&self, o: &KeywordBox) -> bool {
        self.x < o.x + o.width - GEOM_EPS
            && o.x < self.x + self.width - GEOM_EPS
            && self.y < o.y + o.height - GEOM_EPS
            && o.y < self.y + self.height - GEOM_EPS
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordstreamLayout {
    pub width: f64,
    pub height: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// `x = x_scale * t + x_offset`.
    pub x_scale: f64,
    pub x_offset: f64,
    /// Largest filtered bucket total (at least 1).
    pub max_total: usize,
    /// x of each bucket center.
    pub centers: Vec<f64>,
    /// Filtered categories in legend order.
    pub bands: Vec<Band>,
    pub keywords: Vec<KeywordBox>,
}

impl WordstreamLayout {
    pub fn x_of(&self, t: f64) -> f64 {
        self.x_scale * t + self.x_offset
    }

    fn edge_at(&self, ys: &[f64], x: f64) -> f64 {
        interpolate(&self.centers, ys, x)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.len() {
        0 => 0.0,
        _ if x <= xs[0] => ys[0],
        n if x >= xs[n - 1] => ys[n - 1],
        _ => {
            let i = xs.partition_point(|&c| c <= x) - 1;
            let f = (x - xs[i]) / (xs[i + 1] - xs[i]);
            ys[i] + f * (ys[i + 1] - ys[i])
        }
    }
}

/// Box width under the fixed glyph model: 0.6 em per non-CJK char, 1 em per CJK char.
pub fn text_width(token: &str, font: f64) -> f64 {
    token.chars().map(|c| if is_cjk(c) { 1.0 } else { 0.6 }).sum::<f64>() * font
}

/// Stack the filtered category bands from zero and place up to `k`
/// keywords per bucket and band, center-outward, skipping any box that
/// would overlap an earlier one or leave its band.
pub fn layout_wordstream(buckets: &[StreamBucket], filter: CategorySet, p: &LayoutParams) -> Result<WordstreamLayout, PresentationError> {
    if !(p.width > 0.0 && p.height > 0.0) || !p.width.is_finite() || !p.height.is_finite() {
        return Err(PresentationError::BadViewport { width: p.width, height: p.height });
    }
    let cats: Vec<DisplayCategory> = filter.iter().collect();
    let (t_start, t_end) = match (buckets.first(), buckets.last()) {
        (Some(f), Some(l)) => (f.t_start, l.t_start + l.width),
        _ => (0.0, 0.0),
    };
    let span = t_end - t_start;
    let x_scale = if span > 0.0 { p.width / span } else { 0.0 };
    let x_offset = -x_scale * t_start;
    let totals: Vec<usize> = buckets.iter().map(|b| cats.iter().map(|&c| b.count(c)).sum()).collect();
    let max_total = totals.iter().copied().max().unwrap_or(0).max(1);
    let unit = p.height / max_total as f64;
    let centers: Vec<f64> = buckets.iter().map(|b| x_scale * b.center() + x_offset).collect();

    let mut base = vec![0.0; buckets.len()];
    let mut bands = Vec::with_capacity(cats.len());
    for &c in &cats {
        let bottom = base.clone();
        let top: Vec<f64> = buckets.iter().zip(&bottom).map(|(b, &y)| y + b.count(c) as f64 * unit).collect();
        base.clone_from(&top);
        bands.push(Band { category: c, bottom, top });
    }

    let mut layout = WordstreamLayout {
        width: p.width,
        height: p.height,
        t_start,
        t_end,
        x_scale,
        x_offset,
        max_total,
        centers,
        bands,
        keywords: Vec::new(),
    };

    let top_k = |b: &StreamBucket, c: DisplayCategory| -> Vec<KeywordWeight> {
        let mut list = b.keywords.get(&c).cloned().unwrap_or_default();
        list.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.token.cmp(&b.token)));
        list.truncate(p.k);
        list
    };
    let max_weight = buckets
        .iter()
        .flat_map(|b| cats.iter().flat_map(move |&c| top_k(b, c)))
        .map(|kw| kw.weight)
        .max()
        .unwrap_or(1)
        .max(1);

    for (bi, bucket) in buckets.iter().enumerate() {
        let x0 = layout.x_of(bucket.t_start);
        let x1 = layout.x_of(bucket.t_start + bucket.width);
        for band_i in 0..layout.bands.len() {
            let cat = layout.bands[band_i].category;
            for kw in top_k(bucket, cat) {
                let font = (p.font_min + (kw.weight as f64 / max_weight as f64) * (p.font_max - p.font_min)).clamp(p.font_min, p.font_max);
                let w = text_width(&kw.token, font);
                let h = font;
                if let Some((x, y)) = place(&layout, band_i, bi, x0, x1, w, h) {
                    layout.keywords.push(KeywordBox { token: kw.token, category: cat, bucket: bi, weight: kw.weight, font, x, y, width: w, height: h });
                }
            }
        }
    }
    Ok(layout)
}

/// First free position for a `w`×`h` box, trying centers in order of
/// distance from the band's middle at the bucket center.
fn place(layout: &WordstreamLayout, band_i: usize, bucket: usize, x0: f64, x1: f64, w: f64, h: f64) -> Option<(f64, f64)> {
    let band = &layout.bands[band_i];
    let cx = layout.centers[bucket];
    let (bot, top) = (band.bottom[bucket], band.top[bucket]);
    if top - bot < h - GEOM_EPS {
        return None;
    }
    let cy = (bot + top) / 2.0;
    let step = (h / 2.0).max(1e-3);
    let nx = ((x1 - x0) / 2.0 / step).floor() as i64;
    let ny = ((top - bot) / 2.0 / step).floor() as i64;
    let mut offsets: Vec<(i64, i64)> = Vec::with_capacity(((2 * nx + 1) * (2 * ny + 1)) as usize);
    for i in -nx..=nx {
        for j in -ny..=ny {
            offsets.push((i, j));
        }
    }
    offsets.sort_by_key(|&(i, j)| (i * i + j * j, j.abs(), -j, i.abs(), -i));
    for (i, j) in offsets {
        let x = cx + i as f64 * step - w / 2.0;
        let y = cy + j as f64 * step - h / 2.0;
        if fits(layout, band, x, y, w, h) {
            return Some((x, y));
        }
    }
    None
}

fn fits(layout: &WordstreamLayout, band: &Band, x: f64, y: f64, w: f64, h: f64) -> bool {
    if x < -GEOM_EPS || y < -GEOM_EPS || x + w > layout.width + GEOM_EPS || y + h > layout.height + GEOM_EPS {
        return false;
    }
    // edges are piecewise linear, so the extremes over [x, x+w] sit at the
    // ends or at interior centers
    let mut xs = vec![x, x + w];
    xs.extend(layout.centers.iter().copied().filter(|&c| c > x && c < x + w));
    for sx in xs {
        if layout.edge_at(&band.bottom, sx) > y + GEOM_EPS || layout.edge_at(&band.top, sx) < y + h - GEOM_EPS {
            return false;
        }
    }
    let candidate = KeywordBox { token: String::new(), category: band.category, bucket: 0, weight: 0, font: h, x, y, width: w, height: h };
    !layout.keywords.iter().any(|k| k.overlaps(&candidate))
}

/// Drop the keywords and compress the bands to `height`.
pub fn simplify_stream(layout: &WordstreamLayout, height: f64) -> Result<WordstreamLayout, PresentationError> {
    if !(height > 0.0) || !height.is_finite() {
        return Err(PresentationError::BadViewport { width: layout.width, height });
    }
    let s = height / layout.height;
    let mut out = layout.clone();
    out.height = height;
    out.keywords.clear();
    for b in &mut out.bands {
        b.bottom.iter_mut().for_each(|y| *y *= s);
        b.top.iter_mut().for_each(|y| *y *= s);
    }
    Ok(out)
}
