//! Estimators for the laydown descriptors.

use super::{BacktrackedPoint, CutPolicy, LaydownError, LaydownSample, LaydownStats};

/// Minimum number of points the stochasticity estimator accepts.
pub const MIN_POINTS_FOR_A: usize = 100;

/// Subtract the belt transport from each event, reconstructing the laydown
/// distribution below the spinneret. CD coordinates are unchanged.
pub fn backtrack(sample: &LaydownSample) -> Vec<BacktrackedPoint> {
    sample
        .events
        .iter()
        .map(|e| BacktrackedPoint {
            s: e.s,
            md: e.position.x - sample.belt_speed * e.time,
            cd: e.position.y,
        })
        .collect()
}

/// Remove the spin-up transient at the head of the laydown.
pub fn cut_tail(
    points: &[BacktrackedPoint],
    policy: CutPolicy,
    times: Option<&[f64]>,
) -> Result<Vec<BacktrackedPoint>, LaydownError> {
    if points.is_empty() {
        return Err(LaydownError::TooFewPoints { needed: 1, got: 0 });
    }
    let kept: Vec<BacktrackedPoint> = match policy {
        CutPolicy::ArcLengthFraction(fraction) => {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(LaydownError::Validation {
                    field: "fraction",
                    message: format!("must be within [0, 1], got {fraction}"),
                });
            }
            if fraction >= 1.0 {
                return Err(LaydownError::EmptyAfterCut);
            }
            let s_first = points.first().unwrap().s;
            let s_last = points.last().unwrap().s;
            let cutoff = s_first + fraction * (s_last - s_first);
            points.iter().copied().filter(|p| p.s >= cutoff).collect()
        }
        CutPolicy::BurnInTime(burn_in) => {
            let times = times.ok_or(LaydownError::Validation {
                field: "times",
                message: "burn-in policy needs deposition times".into(),
            })?;
            points
                .iter()
                .zip(times)
                .filter(|(_, t)| **t >= burn_in)
                .map(|(p, _)| *p)
                .collect()
        }
    };
    if kept.is_empty() {
        return Err(LaydownError::EmptyAfterCut);
    }
    Ok(kept)
}

/// Unbiased sample standard deviations of the MD and CD coordinates.
pub fn estimate_sigmas(points: &[BacktrackedPoint]) -> Result<(f64, f64), LaydownError> {
    if points.len() < 2 {
        return Err(LaydownError::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let (mut mean_md, mut mean_cd) = (0.0, 0.0);
    for p in points {
        mean_md += p.md;
        mean_cd += p.cd;
    }
    mean_md /= n;
    mean_cd /= n;
    let (mut ss_md, mut ss_cd) = (0.0, 0.0);
    for p in points {
        ss_md += (p.md - mean_md).powi(2);
        ss_cd += (p.cd - mean_cd).powi(2);
    }
    Ok((
        (ss_md / (n - 1.0)).sqrt(),
        (ss_cd / (n - 1.0)).sqrt(),
    ))
}

/// Estimate the stochasticity parameter A.
///
/// Each normalized coordinate trace `xi(s) = (x(s) - mean) / sigma` is
/// modeled as a stationary unit-variance Ornstein-Uhlenbeck process in arc
/// length with reversion rate A, `d xi = -A xi ds + sqrt(2 A) dW`, whose
/// autocorrelation over a gap `h` is `exp(-A h)`. The discrete maximum
/// likelihood estimate of the autoregression factor over lag-1 pairs gives
/// `A = -ln(phi) / h`. A -> 0 reproduces a frozen (deterministic) trace,
/// large A approaches uncorrelated noise. The MD and CD estimates are
/// averaged.
pub fn estimate_a(points: &[BacktrackedPoint]) -> Result<f64, LaydownError> {
    if points.len() < MIN_POINTS_FOR_A {
        return Err(LaydownError::TooFewPoints {
            needed: MIN_POINTS_FOR_A,
            got: points.len(),
        });
    }
    let md: Vec<f64> = points.iter().map(|p| p.md).collect();
    let cd: Vec<f64> = points.iter().map(|p| p.cd).collect();
    let gaps: Vec<f64> = points.windows(2).map(|w| w[1].s - w[0].s).collect();
    let a_md = estimate_a_axis(&md, &gaps, "MD")?;
    let a_cd = estimate_a_axis(&cd, &gaps, "CD")?;
    Ok(0.5 * (a_md + a_cd))
}

fn estimate_a_axis(values: &[f64], gaps: &[f64], axis: &'static str) -> Result<f64, LaydownError> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 || !var.is_finite() {
        return Err(LaydownError::ZeroVariance { axis });
    }
    let sigma = var.sqrt();

    // Robust lag: pairs separated by roughly the modal arc-length step. Use
    // the median gap and accept pairs up to 1.5x of it, which skips holes
    // left by nodes that never landed.
    let mut sorted = gaps.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median_gap = sorted[sorted.len() / 2];
    if !(median_gap > 0.0) {
        return Err(LaydownError::Validation {
            field: "points",
            message: "arc-length gaps must be positive".into(),
        });
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for (w, gap) in values.windows(2).zip(gaps) {
        if *gap <= 1.5 * median_gap {
            let a = (w[0] - mean) / sigma;
            let b = (w[1] - mean) / sigma;
            num += a * b;
            den += a * a;
        }
    }
    if den == 0.0 {
        return Err(LaydownError::ZeroVariance { axis });
    }
    let phi = (num / den).clamp(1e-8, 1.0);
    Ok(-phi.ln() / median_gap)
}

/// Full post-processing pipeline: backtrack, cut the spin-up tail, estimate
/// the throwing ranges and the stochasticity parameter.
pub fn characterize(
    sample: &LaydownSample,
    policy: CutPolicy,
) -> Result<LaydownStats, LaydownError> {
    let backtracked = backtrack(sample);
    let times: Vec<f64> = sample.events.iter().map(|e| e.time).collect();
    let kept = cut_tail(&backtracked, policy, Some(&times))?;
    let (sigma1, sigma2) = estimate_sigmas(&kept)?;
    let a_param = estimate_a(&kept)?;
    Ok(LaydownStats {
        sigma1,
        sigma2,
        a_param,
        n_points: kept.len(),
        tail_cut: backtracked.len() - kept.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::Vector3;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn sample_from(points: Vec<(f64, f64, Vector3<f64>)>, belt_speed: f64) -> LaydownSample {
        LaydownSample::new(
            points
                .into_iter()
                .map(|(s, time, position)| super::super::DepositionEvent { s, time, position })
                .collect(),
            belt_speed,
        )
    }

    fn trace(points: &[(f64, f64, f64)]) -> Vec<BacktrackedPoint> {
        points
            .iter()
            .map(|(s, md, cd)| BacktrackedPoint {
                s: *s,
                md: *md,
                cd: *cd,
            })
            .collect()
    }

    #[test]
    fn backtrack_with_zero_belt_speed_is_identity() {
        let sample = sample_from(
            vec![
                (0.0, 0.1, Vector3::new(0.3, -0.2, 0.0)),
                (0.1, 0.2, Vector3::new(-0.4, 0.5, 0.0)),
            ],
            0.0,
        );
        let points = backtrack(&sample);
        assert_eq!(points[0].md, 0.3);
        assert_eq!(points[1].md, -0.4);
        assert_eq!(points[0].cd, -0.2);
    }

    #[test]
    fn backtrack_subtracts_belt_transport() {
        let sample = sample_from(vec![(0.0, 2.0, Vector3::new(1.0, 0.7, 0.0))], 0.5);
        let points = backtrack(&sample);
        assert_abs_diff_eq!(points[0].md, 0.0, epsilon = 1e-15);
        assert_eq!(points[0].cd, 0.7);
    }

    #[test]
    fn cut_tail_fraction_zero_is_identity() {
        let pts = trace(&[(0.0, 1.0, 0.0), (1.0, 2.0, 0.0), (2.0, 3.0, 0.0)]);
        let kept = cut_tail(&pts, CutPolicy::ArcLengthFraction(0.0), None).unwrap();
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn cut_tail_drops_leading_arc_length() {
        let pts: Vec<BacktrackedPoint> = (0..100)
            .map(|k| BacktrackedPoint {
                s: k as f64,
                md: 0.0,
                cd: 0.0,
            })
            .collect();
        let kept = cut_tail(&pts, CutPolicy::ArcLengthFraction(0.1), None).unwrap();
        assert_eq!(kept.len(), 90);
    }

    #[test]
    fn cut_tail_full_fraction_errors() {
        let pts = trace(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]);
        assert!(matches!(
            cut_tail(&pts, CutPolicy::ArcLengthFraction(1.0), None),
            Err(LaydownError::EmptyAfterCut)
        ));
    }

    #[test]
    fn cut_tail_burn_in_uses_times() {
        let pts = trace(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (2.0, 0.0, 0.0)]);
        let times = [0.1, 0.5, 0.9];
        let kept = cut_tail(&pts, CutPolicy::BurnInTime(0.4), Some(&times)).unwrap();
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn sigmas_of_identical_points_are_zero() {
        let pts = trace(&[(0.0, 1.0, 2.0), (1.0, 1.0, 2.0), (2.0, 1.0, 2.0)]);
        let (s1, s2) = estimate_sigmas(&pts).unwrap();
        assert_eq!(s1, 0.0);
        assert_eq!(s2, 0.0);
    }

    #[test]
    fn sigmas_on_md_segment_have_zero_cd() {
        let pts: Vec<BacktrackedPoint> = (0..50)
            .map(|k| BacktrackedPoint {
                s: k as f64,
                md: k as f64 * 0.01,
                cd: 0.0,
            })
            .collect();
        let (s1, s2) = estimate_sigmas(&pts).unwrap();
        assert!(s1 > 0.0);
        assert_eq!(s2, 0.0);
    }

    #[test]
    fn sigmas_recover_known_gaussian_cloud() {
        // Monte-Carlo oracle: 1e5 draws from a known 2D normal.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let (true_s1, true_s2) = (0.05, 0.02);
        let pts: Vec<BacktrackedPoint> = (0..100_000)
            .map(|k| BacktrackedPoint {
                s: k as f64 * 1e-3,
                md: true_s1 * rng.sample::<f64, _>(StandardNormal),
                cd: true_s2 * rng.sample::<f64, _>(StandardNormal),
            })
            .collect();
        let (s1, s2) = estimate_sigmas(&pts).unwrap();
        assert_relative_eq!(s1, true_s1, max_relative = 0.01);
        assert_relative_eq!(s2, true_s2, max_relative = 0.01);
    }

    #[test]
    fn too_few_points_error() {
        let pts = trace(&[(0.0, 0.0, 0.0)]);
        assert!(matches!(
            estimate_sigmas(&pts),
            Err(LaydownError::TooFewPoints { needed: 2, .. })
        ));
    }

    #[test]
    fn smooth_sinusoid_has_near_zero_stochasticity() {
        // Analytic trace oracle: a noise-free sinusoid decorrelates only
        // through its curvature, so the estimate must be close to zero.
        let ds = 0.01;
        let period = 10.0;
        let pts: Vec<BacktrackedPoint> = (0..10_000)
            .map(|k| {
                let s = k as f64 * ds;
                let angle = 2.0 * std::f64::consts::PI * s / period;
                BacktrackedPoint {
                    s,
                    md: angle.sin(),
                    cd: angle.cos(),
                }
            })
            .collect();
        let a = estimate_a(&pts).unwrap();
        assert!(a >= 0.0);
        assert!(a < 0.05, "a = {a}");
    }

    #[test]
    fn recovers_known_ou_rate_from_euler_maruyama_trace() {
        // Euler-Maruyama simulation oracle with A = 0.5.
        let a_true = 0.5;
        let ds = 0.05;
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut x: f64 = rng.sample(StandardNormal);
        let mut y: f64 = rng.sample(StandardNormal);
        let noise = (2.0 * a_true * ds).sqrt();
        let pts: Vec<BacktrackedPoint> = (0..n)
            .map(|k| {
                let p = BacktrackedPoint {
                    s: k as f64 * ds,
                    md: x,
                    cd: y,
                };
                x += -a_true * x * ds + noise * rng.sample::<f64, _>(StandardNormal);
                y += -a_true * y * ds + noise * rng.sample::<f64, _>(StandardNormal);
                p
            })
            .collect();
        let a = estimate_a(&pts).unwrap();
        assert_relative_eq!(a, a_true, max_relative = 0.10);
    }

    #[test]
    fn constant_trace_is_zero_variance_error() {
        let pts: Vec<BacktrackedPoint> = (0..200)
            .map(|k| BacktrackedPoint {
                s: k as f64,
                md: 1.0,
                cd: 1.0,
            })
            .collect();
        assert!(matches!(
            estimate_a(&pts),
            Err(LaydownError::ZeroVariance { .. })
        ));
    }

    #[test]
    fn characterize_composes_the_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let belt = 0.3;
        let events: Vec<(f64, f64, Vector3<f64>)> = (0..2_000)
            .map(|k| {
                let s = k as f64 * 0.01;
                let t = k as f64 * 1e-3;
                let md = 0.04 * rng.sample::<f64, _>(StandardNormal) + belt * t;
                let cd = 0.02 * rng.sample::<f64, _>(StandardNormal);
                (s, t, Vector3::new(md, cd, 0.0))
            })
            .collect();
        let sample = sample_from(events, belt);
        let stats = characterize(&sample, CutPolicy::default()).unwrap();
        assert_eq!(stats.n_points + stats.tail_cut, 2_000);
        assert!(stats.sigma1 > 0.0 && stats.sigma2 > 0.0);
        // White-noise-like trace: large stochasticity.
        assert!(stats.a_param > 10.0, "a = {}", stats.a_param);
        // Determinism for a fixed sample and policy.
        let again = characterize(&sample, CutPolicy::default()).unwrap();
        assert_eq!(stats, again);
    }

    proptest! {
        #[test]
        fn backtrack_preserves_cd_and_count(
            belt in 0.0f64..2.0,
            md in proptest::collection::vec(-1.0f64..1.0, 2..40),
        ) {
            let events: Vec<(f64, f64, Vector3<f64>)> = md
                .iter()
                .enumerate()
                .map(|(k, m)| (k as f64, k as f64 * 0.1, Vector3::new(*m, -*m, 0.0)))
                .collect();
            let sample = sample_from(events, belt);
            let pts = backtrack(&sample);
            prop_assert_eq!(pts.len(), sample.len());
            for (p, e) in pts.iter().zip(&sample.events) {
                prop_assert_eq!(p.cd, e.position.y);
            }
        }

        #[test]
        fn sigma_estimation_is_translation_invariant_and_scale_equivariant(
            shift in -5.0f64..5.0,
            scale in 0.1f64..10.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let pts: Vec<BacktrackedPoint> = (0..500)
                .map(|k| BacktrackedPoint {
                    s: k as f64,
                    md: rng.sample::<f64, _>(StandardNormal),
                    cd: rng.sample::<f64, _>(StandardNormal),
                })
                .collect();
            let (s1, s2) = estimate_sigmas(&pts).unwrap();
            let mapped: Vec<BacktrackedPoint> = pts
                .iter()
                .map(|p| BacktrackedPoint { s: p.s, md: scale * p.md + shift, cd: scale * p.cd + shift })
                .collect();
            let (m1, m2) = estimate_sigmas(&mapped).unwrap();
            prop_assert!((m1 - scale * s1).abs() < 1e-9 * scale.max(1.0));
            prop_assert!((m2 - scale * s2).abs() < 1e-9 * scale.max(1.0));
        }

        #[test]
        fn a_estimate_is_affine_invariant(
            shift in -5.0f64..5.0,
            scale in 0.1f64..10.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            let mut x = 0.0f64;
            let pts: Vec<BacktrackedPoint> = (0..500)
                .map(|k| {
                    x = 0.9 * x + 0.1 * rng.sample::<f64, _>(StandardNormal);
                    BacktrackedPoint { s: k as f64 * 0.01, md: x, cd: -x }
                })
                .collect();
            let a = estimate_a(&pts).unwrap();
            let mapped: Vec<BacktrackedPoint> = pts
                .iter()
                .map(|p| BacktrackedPoint { s: p.s, md: scale * p.md + shift, cd: scale * p.cd + shift })
                .collect();
            let a_mapped = estimate_a(&mapped).unwrap();
            prop_assert!((a - a_mapped).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}
