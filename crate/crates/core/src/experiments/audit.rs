//! Statistical self-checks of the samplers against exact laws and
//! independent reference constructions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{par_map_streams, Table};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::sampling::{
    conjugate_spectrum, sample_haar_unitary, sample_mixed_state, sample_pure_state, sample_simplex,
};
use crate::states::{concurrence_pure, PureState2Q};

/// Asymptotic Kolmogorov–Smirnov coefficient at the 1% level.
const KS_C_ALPHA: f64 = 1.628;
const MEAN_TOL: f64 = 1e-3;
const REFERENCE_TOL: f64 = 2e-3;
const CHI2_BINS: usize = 20;
const CHI2_P: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleAuditParams {
    pub seed: u64,
    /// Draws for KS tests.
    pub ks_samples: u64,
    /// Draws for moment and histogram tests.
    pub moment_samples: u64,
}

impl Default for SampleAuditParams {
    fn default() -> Self {
        Self {
            seed: 1,
            ks_samples: 100_000,
            moment_samples: 1_000_000,
        }
    }
}

/// Outcome of one audit: `passed` iff `statistic ≤ threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub samples: u64,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl AuditCheck {
    fn new(name: &'static str, samples: u64, statistic: f64, threshold: f64) -> Self {
        Self {
            name,
            samples,
            statistic,
            threshold,
            passed: statistic <= threshold,
        }
    }

    pub fn table(checks: &[AuditCheck]) -> Table {
        let mut t = Table::new(&["check", "samples", "statistic", "threshold", "passed"]);
        for c in checks {
            t.push(vec![
                c.name.into(),
                (c.samples as usize).into(),
                c.statistic.into(),
                c.threshold.into(),
                if c.passed { "true" } else { "false" }.into(),
            ]);
        }
        t
    }
}

/// `sup |F_n - F|` of a sample against a continuous CDF.
pub fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// `sup |F_a - F_b|` between two empirical CDFs.
pub fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Eigenphases of a unitary from the eigenvectors of its Hermitian part.
/// Both share eigenvectors; ties in `cos θ` have probability zero for Haar draws.
fn eigenphases(u: &ComplexMatrix) -> Vec<f64> {
    let herm = (u + &u.adjoint()).scale(Complex64::new(0.5, 0.0));
    let v = hermitian_eig(&herm)
        .expect("Hermitian part is finite")
        .eigenvectors;
    let d = &(&v.adjoint() * u) * &v;
    (0..u.dim()).map(|k| d[(k, k)].arg()).collect()
}

/// Separate stream ranges per check so that no two checks share draws.
fn block(check: u64) -> u64 {
    check << 40
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn haar_eigenphase_ks(p: &SampleAuditParams) -> AuditCheck {
    let n = p.ks_samples;
    let phases = par_map_streams(p.seed, block(1), n, "audit", |_, rng| {
        let u = sample_haar_unitary(4, rng);
        let k = rng.random_range(0..4);
        eigenphases(&u)[k]
    });
    let d = ks_statistic(phases, |x| (x + PI) / (2.0 * PI));
    AuditCheck::new("haar_eigenphase_ks", n, d, KS_C_ALPHA / (n as f64).sqrt())
}

fn haar_invariance_ks(p: &SampleAuditParams) -> AuditCheck {
    let n = p.ks_samples;
    let v = sample_haar_unitary(4, &mut crate::sampling::RandomStream::new(p.seed, block(2)));
    let plain = par_map_streams(p.seed, block(3), n, "audit", |_, rng| {
        sample_haar_unitary(4, rng)[(0, 0)].norm()
    });
    let rotated = par_map_streams(p.seed, block(4), n, "audit", |_, rng| {
        (&v * &sample_haar_unitary(4, rng))[(0, 0)].norm()
    });
    let d = ks_two_sample(plain, rotated);
    AuditCheck::new(
        "haar_left_invariance_ks",
        n,
        d,
        KS_C_ALPHA * (2.0 / n as f64).sqrt(),
    )
}

fn simplex_checks(p: &SampleAuditParams) -> Vec<AuditCheck> {
    let n = p.moment_samples;
    let draws = par_map_streams(p.seed, block(5), n, "audit", |_, rng| {
        let l = sample_simplex(4, rng).lambdas().to_vec();
        [l[0], l[1], l[2], l[3]]
    });
    let mut out: Vec<AuditCheck> = (0..4)
        .map(|i| {
            let m = draws.iter().map(|l| l[i]).sum::<f64>() / n as f64;
            const NAMES: [&str; 4] = [
                "simplex_mean_l0",
                "simplex_mean_l1",
                "simplex_mean_l2",
                "simplex_mean_l3",
            ];
            AuditCheck::new(NAMES[i], n, (m - 0.25).abs(), MEAN_TOL)
        })
        .collect();

    // reference: spacings of three sorted uniforms on [0, 1]
    let reference = par_map_streams(p.seed, block(6), n, "audit", |_, rng| {
        let mut u: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        u.sort_by(f64::total_cmp);
        [u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2]]
            .into_iter()
            .fold(0.0, f64::max)
    });
    let sampled = draws
        .iter()
        .map(|l| l.iter().copied().fold(0.0, f64::max))
        .collect::<Vec<_>>();
    out.push(AuditCheck::new(
        "simplex_mean_max_vs_spacings",
        n,
        (mean(&sampled) - mean(&reference)).abs(),
        REFERENCE_TOL,
    ));

    // marginal density 3 (1 - λ)², tested in equiprobable bins
    let mut counts = [0u64; CHI2_BINS];
    for l in &draws {
        let u = 1.0 - (1.0 - l[0]).powi(3);
        counts[((u * CHI2_BINS as f64) as usize).min(CHI2_BINS - 1)] += 1;
    }
    let expected = n as f64 / CHI2_BINS as f64;
    let chi2 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((CHI2_BINS - 1) as f64).expect("positive degrees of freedom");
    out.push(AuditCheck::new(
        "simplex_marginal_chi2",
        n,
        chi2,
        dist.inverse_cdf(1.0 - CHI2_P),
    ));
    out
}

fn pure_checks(p: &SampleAuditParams) -> Vec<AuditCheck> {
    let n = p.moment_samples;
    let draws = par_map_streams(p.seed, block(7), n, "audit", |_, rng| {
        let psi = sample_pure_state(rng);
        (psi.populations()[0], concurrence_pure(&psi))
    });
    let (p0, c): (Vec<f64>, Vec<f64>) = draws.into_iter().unzip();
    // reference: first column of a Haar unitary, i.e. U|00⟩
    let reference = par_map_streams(p.seed, block(8), n, "audit", |_, rng| {
        let col = sample_haar_unitary(4, rng).column(0);
        let psi = PureState2Q::normalized([col[0], col[1], col[2], col[3]]).expect("unit column");
        concurrence_pure(&psi)
    });
    vec![
        AuditCheck::new(
            "pure_mean_population0",
            n,
            (mean(&p0) - 0.25).abs(),
            MEAN_TOL,
        ),
        AuditCheck::new(
            "pure_mean_concurrence_vs_haar_column",
            n,
            (mean(&c) - mean(&reference)).abs(),
            REFERENCE_TOL,
        ),
    ]
}

fn purity_ks(p: &SampleAuditParams) -> AuditCheck {
    let n = p.ks_samples;
    let purity = |m: &ComplexMatrix| (m * m).trace().re;
    let sampled = par_map_streams(p.seed, block(9), n, "audit", |_, rng| {
        purity(sample_mixed_state(rng).matrix())
    });
    // reference: spectrum and unitary drawn from unrelated streams
    let reference = par_map_streams(p.seed, block(10), n, "audit", |i, rng| {
        let spectrum = sample_simplex(4, rng);
        let u = sample_haar_unitary(
            4,
            &mut crate::sampling::RandomStream::new(p.seed, block(11) + i),
        );
        purity(&conjugate_spectrum(&u, &spectrum))
    });
    let d = ks_two_sample(sampled, reference);
    AuditCheck::new(
        "mixed_purity_two_sample_ks",
        n,
        d,
        KS_C_ALPHA * (2.0 / n as f64).sqrt(),
    )
}

/// Runs every sampler check; each draws from its own block of streams.
pub fn run_sample_audit(p: &SampleAuditParams) -> Vec<AuditCheck> {
    let mut checks = vec![haar_eigenphase_ks(p), haar_invariance_ks(p)];
    checks.extend(simplex_checks(p));
    checks.extend(pure_checks(p));
    checks.push(purity_ks(p));
    checks
}
