use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Largest number of non-zero differences handled by full enumeration.
pub const EXACT_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Pairs with a non-zero difference.
    pub n_effective: usize,
    pub zeros_dropped: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(W+, W-)`.
    pub w: f64,
    /// Normal-approximation statistic with tie and continuity corrections,
    /// signed like `W+ - W-`. Always reported.
    pub z: f64,
    pub p_two_sided: f64,
    /// Enumeration p-value, present when `n_effective <= 12`.
    pub p_exact: Option<f64>,
    pub p_normal: f64,
    pub method: TestMethod,
    /// Rank-biserial `(W+ - W-) / (W+ + W-)` for the exact method,
    /// `|Z| / sqrt(n)` for the approximation.
    pub effect_size: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WilcoxonError {
    #[error("no pairs given")]
    Empty,
    #[error("pair {0} is not finite")]
    NotFinite(usize),
    #[error("all {0} differences are zero; the test is undefined")]
    Degenerate(usize),
}

/// Average ranks (1-based) of `values`, ties sharing the mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided p by enumerating every sign assignment. Ranks are doubled so
/// tied half-ranks stay integral.
fn exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<i64> = ranks.iter().map(|r| (r * 2.0).round() as i64).collect();
    let total: i64 = doubled.iter().sum();
    let observed = (2 * (w_plus * 2.0).round() as i64 - total).abs();
    let n = doubled.len();
    let mut extreme = 0u64;
    for mask in 0u32..(1u32 << n) {
        let s: i64 = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| doubled[i]).sum();
        if (2 * s - total).abs() >= observed {
            extreme += 1;
        }
    }
    extreme as f64 / (1u64 << n) as f64
}

/// Paired signed-rank test on `a - b`. Zero differences are dropped.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<WilcoxonResult, WilcoxonError> {
    if pairs.is_empty() {
        return Err(WilcoxonError::Empty);
    }
    if let Some(i) = pairs.iter().position(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(WilcoxonError::NotFinite(i));
    }
    let diffs: Vec<f64> = pairs.iter().map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return Err(WilcoxonError::Degenerate(pairs.len()));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);
    let w_plus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum::<f64>() + 0.0;
    let w_minus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d < 0.0).map(|(_, r)| r).sum::<f64>() + 0.0;

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let magnitude = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let z = if w_plus >= w_minus { magnitude } else { -magnitude };
    let std_normal = Normal::new(0.0, 1.0).expect("valid normal");
    let p_normal = (2.0 * (1.0 - std_normal.cdf(magnitude))).min(1.0);

    let (method, p_exact, p, effect_size) = if n <= EXACT_MAX_N {
        let pe = exact_p(&ranks, w_plus);
        (TestMethod::Exact, Some(pe), pe, (w_plus - w_minus) / (w_plus + w_minus))
    } else {
        (TestMethod::NormalApprox, None, p_normal, z.abs() / nf.sqrt())
    };
    Ok(WilcoxonResult {
        n_effective: n,
        zeros_dropped: pairs.len() - n,
        w_plus,
        w_minus,
        w: w_plus.min(w_minus),
        z,
        p_two_sided: p,
        p_exact,
        p_normal,
        method,
        effect_size,
    })
}
