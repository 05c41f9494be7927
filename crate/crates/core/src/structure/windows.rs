use serde::{Deserialize, Serialize};

use crate::ingest::TranscriptLine;

pub const DEFAULT_WINDOW_SECS: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KgWindow {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    /// Transcript lines overlapping the window, one per line.
    pub text: String,
}

impl KgWindow {
    pub fn midpoint(&self) -> f64 {
        (self.start + self.end) / 2.0
    }

    pub fn lines(&self) -> impl Iterator<Item = &str> {
        self.text.lines().filter(|l| !l.trim().is_empty())
    }
}

pub fn window_count(duration: f64, width: f64) -> usize {
    ((duration / width).ceil() as usize).max(1)
}

/// `ceil(duration / width)` windows tiling `[0, duration]`; the last may be
/// short.
pub fn make_windows(duration: f64, width: f64, lines: &[TranscriptLine]) -> Vec<KgWindow> {
    let n = window_count(duration, width);
    (0..n)
        .map(|i| {
            let start = i as f64 * width;
            let end = if i + 1 == n { duration } else { (i + 1) as f64 * width };
            let text = lines
                .iter()
                .filter(|l| l.start < end && l.end > start)
                .map(|l| l.text.replace('\n', " "))
                .collect::<Vec<_>>()
                .join("\n");
            KgWindow { index: i, start, end, text }
        })
        .collect()
}

/// Index of the window containing `t` (clamped to the valid range).
pub fn window_index(t: f64, width: f64, count: usize) -> usize {
    ((t.max(0.0) / width).floor() as usize).min(count.saturating_sub(1))
}
