//! Grid binning, streaming moments and rank correlation.

use serde::Serialize;

/// Uniform bin edges over `[0, 1]` for fidelity and concurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub f_edges: Vec<f64>,
    pub c_edges: Vec<f64>,
}

impl GridSpec {
    pub fn uniform(f_bins: usize, c_bins: usize) -> Self {
        assert!(
            f_bins > 0 && c_bins > 0,
            "grid needs at least one bin per axis"
        );
        let edges = |n: usize| (0..=n).map(|k| k as f64 / n as f64).collect();
        Self {
            f_edges: edges(f_bins),
            c_edges: edges(c_bins),
        }
    }

    pub fn f_bins(&self) -> usize {
        self.f_edges.len() - 1
    }

    pub fn c_bins(&self) -> usize {
        self.c_edges.len() - 1
    }

    pub fn f_bin(&self, f: f64) -> Option<usize> {
        bin_of(&self.f_edges, f)
    }

    pub fn c_bin(&self, c: f64) -> Option<usize> {
        bin_of(&self.c_edges, c)
    }

    /// `(f_bin, c_bin)` for a point of `[0, 1]²`.
    pub fn window(&self, f: f64, c: f64) -> Option<(usize, usize)> {
        Some((self.f_bin(f)?, self.c_bin(c)?))
    }

    pub fn c_center(&self, k: usize) -> f64 {
        0.5 * (self.c_edges[k] + self.c_edges[k + 1])
    }
}

/// Half-open bins `[e_k, e_{k+1})`, except that the last one is closed.
fn bin_of(edges: &[f64], v: f64) -> Option<usize> {
    let n = edges.len() - 1;
    if !(edges[0]..=edges[n]).contains(&v) {
        return None;
    }
    let k = edges.partition_point(|&e| e <= v).saturating_sub(1);
    Some(k.min(n - 1))
}

/// Welford accumulator for mean and standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: usize,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl RunningStats {
    pub fn push(&mut self, v: f64) {
        if self.count == 0 {
            self.min = v;
            self.max = v;
        } else {
            self.min = self.min.min(v);
            self.max = self.max.max(v);
        }
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation (zero below two points).
    pub fn std(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).sqrt()
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

/// Aggregate ratio statistics of one `(F, C)` window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowStat {
    pub c_lo: f64,
    pub c_hi: f64,
    pub count: usize,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    /// `count ≥` the threshold the window was built with.
    pub reliable: bool,
}

impl WindowStat {
    pub fn from_stats(c_lo: f64, c_hi: f64, s: &RunningStats, min_count: usize) -> Self {
        Self {
            c_lo,
            c_hi,
            count: s.count(),
            mean_ratio: s.mean(),
            std_ratio: s.std(),
            reliable: s.count() >= min_count,
        }
    }

    pub fn c_center(&self) -> f64 {
        0.5 * (self.c_lo + self.c_hi)
    }
}

/// Ranks starting at 1, ties sharing their average rank.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = 0.5 * (i + j) as f64 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `NaN` for fewer than two points or a constant input.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "paired samples");
    if x.len() < 2 {
        return f64::NAN;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_cover_the_unit_interval() {
        let g = GridSpec::uniform(20, 20);
        assert_eq!(g.c_bin(0.0), Some(0));
        assert_eq!(g.c_bin(0.05), Some(1));
        assert_eq!(g.c_bin(1.0), Some(19));
        assert_eq!(g.c_bin(1.0 + 1e-12), None);
        assert_eq!(g.c_bin(-1e-12), None);
        assert_eq!(g.window(0.5, 0.97), Some((10, 19)));
    }

    #[test]
    fn running_stats_match_two_pass() {
        let v = [1.0, 2.5, 2.5, 7.0, -3.0];
        let mut s = RunningStats::default();
        v.iter().for_each(|&x| s.push(x));
        let mean = v.iter().sum::<f64>() / 5.0;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 4.0;
        assert!((s.mean() - mean).abs() < 1e-15);
        assert!((s.std() - var.sqrt()).abs() < 1e-14);
        assert_eq!((s.min(), s.max(), s.count()), (-3.0, 7.0, 5));
    }

    #[test]
    fn spearman_cases() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&x, &[10.0, 20.0, 30.0, 45.0]) - 1.0).abs() < 1e-15);
        assert!((spearman(&x, &[4.0, 3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
        // textbook example with ties: rho = 0.8
        let r = spearman(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]);
        assert!((r - 0.8).abs() < 1e-12);
        assert_eq!(ranks(&[3.0, 1.0, 3.0]), vec![2.5, 1.0, 2.5]);
        assert!(spearman(&[1.0], &[1.0]).is_nan());
    }
}
