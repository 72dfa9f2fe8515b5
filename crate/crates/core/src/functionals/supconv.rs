//! The sup-convolution `(f ⋆_λ g)(v) = sup{f(x)^λ g(y)^{1-λ} : v = λx + (1-λ)y}`.

use rayon::prelude::*;

use super::optimize::{ccw_ring, clip_convex, maximize_1d, maximize_2d};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{minkowski_combine, upper_envelope, UpperEnvelope};
use crate::logconcave::LogConcaveFunction;

/// Output nodes of the tabulated sup-convolution of non-polytopal inputs.
pub const SUPCONV_NODES_1D: usize = 2048;
pub const SUPCONV_NODES_2D: usize = 64;
/// Grid resolution of the oracle before golden-section refinement.
pub const ORACLE_RESOLUTION: usize = 64;

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("λ = {lambda} not in (0, 1)")))
    }
}

/// Where `f` may be positive: an interval (n = 1) or a convex ring (n = 2).
#[derive(Clone, Debug)]
pub(crate) enum Region {
    Interval(f64, f64),
    Polygon(Vec<[f64; 2]>),
}

impl Region {
    pub(crate) fn from_box(lo: &[f64], hi: &[f64]) -> Self {
        match lo.len() {
            1 => Self::Interval(lo[0], hi[0]),
            _ => Self::Polygon(vec![[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]),
        }
    }

    pub(crate) fn of(f: &LogConcaveFunction) -> Self {
        match f {
            LogConcaveFunction::Envelope(e) if e.dim() == 2 => {
                Self::Polygon(ccw_ring(e.support().vertices()))
            }
            _ => {
                let b = f.effective_box();
                Self::from_box(&b.lo, &b.hi)
            }
        }
    }

    /// Image under `q ↦ (v - μ q) / λ`, a point reflection and scaling, which
    /// keeps rings counter-clockwise.
    pub(crate) fn reflect(&self, v: &[f64], mu: f64, lambda: f64) -> Self {
        match self {
            Self::Interval(a, b) => Self::Interval((v[0] - mu * b) / lambda, (v[0] - mu * a) / lambda),
            Self::Polygon(ring) => Self::Polygon(
                ring.iter()
                    .map(|q| [(v[0] - mu * q[0]) / lambda, (v[1] - mu * q[1]) / lambda])
                    .collect(),
            ),
        }
    }

    pub(crate) fn intersect(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (Self::Interval(a, b), Self::Interval(c, d)) => {
                let (lo, hi) = (a.max(*c), b.min(*d));
                // touching intervals can cross by rounding
                let tol = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
                if lo <= hi {
                    Some(Self::Interval(lo, hi))
                } else if lo - hi <= tol {
                    let m = 0.5 * (lo + hi);
                    Some(Self::Interval(m, m))
                } else {
                    None
                }
            }
            (Self::Polygon(p), Self::Polygon(q)) => {
                let clip = if q.len() >= 3 { clip_convex(p, q) } else { clip_convex(q, p) };
                (!clip.is_empty()).then_some(Self::Polygon(clip))
            }
            _ => None,
        }
    }

    /// Maximises `phi` over the region.
    pub(crate) fn maximize(&self, phi: impl Fn(&[f64]) -> f64, res: usize) -> (Vec<f64>, f64) {
        match self {
            Self::Interval(a, b) => {
                let (x, v) = maximize_1d(|x| phi(&[x]), *a, *b, res);
                (vec![x], v)
            }
            Self::Polygon(ring) => {
                let (p, v) = maximize_2d(|p| phi(&p), ring, res);
                (p.to_vec(), v)
            }
        }
    }
}

/// The log-hypograph generators of a polytopal function, if it is one.
pub fn polytopal_envelope(f: &LogConcaveFunction) -> Option<UpperEnvelope> {
    match f {
        LogConcaveFunction::Envelope(e) => Some(e.clone()),
        LogConcaveFunction::IndicatorBox { lo, hi, height } => {
            let h = height.ln();
            let corners: Vec<Vec<f64>> = match lo.len() {
                1 => vec![vec![lo[0], h], vec![hi[0], h]],
                _ => vec![
                    vec![lo[0], lo[1], h],
                    vec![hi[0], lo[1], h],
                    vec![hi[0], hi[1], h],
                    vec![lo[0], hi[1], h],
                ],
            };
            upper_envelope(&corners, lo.len()).ok()
        }
        _ => None,
    }
}

/// `f ⋆_λ g`. Exact for polytopal inputs (envelopes and boxes), via the
/// Minkowski combination of log-hypographs. Otherwise the oracle is tabulated
/// on a grid over `λ·box(f) + (1-λ)·box(g)` and the log-values are fitted by
/// their upper envelope.
pub fn sup_convolution(f: &LogConcaveFunction, g: &LogConcaveFunction, lambda: f64) -> Result<LogConcaveFunction> {
    check_dim(f.dim(), g.dim())?;
    check_lambda(lambda)?;
    if let (Some(a), Some(b)) = (polytopal_envelope(f), polytopal_envelope(g)) {
        return LogConcaveFunction::envelope(minkowski_combine(&a, &b, lambda)?);
    }
    let n = f.dim();
    let out = f.effective_box().combine(&g.effective_box(), lambda);
    let nodes: Vec<Vec<f64>> = match n {
        1 => (0..=SUPCONV_NODES_1D)
            .map(|k| vec![out.lo[0] + (out.hi[0] - out.lo[0]) * k as f64 / SUPCONV_NODES_1D as f64])
            .collect(),
        _ => {
            let m = SUPCONV_NODES_2D;
            (0..=m)
                .flat_map(|i| (0..=m).map(move |j| (i, j)))
                .map(|(i, j)| {
                    vec![
                        out.lo[0] + (out.hi[0] - out.lo[0]) * i as f64 / m as f64,
                        out.lo[1] + (out.hi[1] - out.lo[1]) * j as f64 / m as f64,
                    ]
                })
                .collect()
        }
    };
    let lifted: Vec<Vec<f64>> = nodes
        .into_par_iter()
        .filter_map(|v| {
            let log = log_oracle(f, g, lambda, &v, ORACLE_RESOLUTION);
            log.is_finite().then(|| {
                let mut p = v;
                p.push(log);
                p
            })
        })
        .collect();
    if lifted.is_empty() {
        return Err(Error::EmptySupport("sup-convolution vanishes on the grid".into()));
    }
    LogConcaveFunction::envelope(upper_envelope(&lifted, n)?)
}

fn log_oracle(f: &LogConcaveFunction, g: &LogConcaveFunction, lambda: f64, v: &[f64], res: usize) -> f64 {
    let mu = 1.0 - lambda;
    let feasible = Region::of(f).intersect(&Region::of(g).reflect(v, mu, lambda));
    let Some(region) = feasible else {
        return f64::NEG_INFINITY;
    };
    let phi = |x: &[f64]| {
        let lf = f.log_value(x);
        if lf == f64::NEG_INFINITY {
            return lf;
        }
        let y: Vec<f64> = v.iter().zip(x).map(|(vk, xk)| (vk - lambda * xk) / mu).collect();
        lambda * lf + mu * g.log_value(&y)
    };
    region.maximize(phi, res).1
}

/// Brute-force `(f ⋆_λ g)(v)`: the best `f(x)^λ g((v - λx)/(1-λ))^{1-λ}` over
/// a `resolution`-point grid of the feasible `x`, refined by golden-section
/// search (nested over a polygon when `n = 2`). Every candidate is feasible,
/// so the result underestimates the true supremum.
pub fn sup_convolution_oracle(
    f: &LogConcaveFunction,
    g: &LogConcaveFunction,
    lambda: f64,
    v: &[f64],
    resolution: usize,
) -> Result<f64> {
    check_dim(f.dim(), g.dim())?;
    check_dim(f.dim(), v.len())?;
    check_lambda(lambda)?;
    Ok(log_oracle(f, g, lambda, v, resolution).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logconcave::Density;
    use rand::{Rng, SeedableRng};

    fn boxed(lo: f64, hi: f64) -> LogConcaveFunction {
        LogConcaveFunction::indicator_box(vec![lo], vec![hi], 1.0).unwrap()
    }

    #[test]
    fn interval_sum() {
        let h = sup_convolution(&boxed(0.0, 2.0), &boxed(0.0, 1.0), 0.5).unwrap();
        assert!((h.integral() - 1.5).abs() < 1e-14);
        assert!(h.integral() >= 2f64.sqrt());
        assert_eq!(h.evaluate(&[1.5]).unwrap(), 1.0);
        assert_eq!(h.evaluate(&[1.6]).unwrap(), 0.0);
        let o = |v: f64| sup_convolution_oracle(&boxed(0.0, 2.0), &boxed(0.0, 1.0), 0.5, &[v], 64).unwrap();
        assert_eq!(o(0.7), 1.0);
        assert_eq!(o(1.5 + 1e-3), 0.0);
        assert_eq!(o(-1e-3), 0.0);
    }

    #[test]
    fn self_convolution_is_identity() {
        let e = upper_envelope(&[vec![0.0, 0.0], vec![1.0, 0.5], vec![3.0, -1.0]], 1).unwrap();
        let f = LogConcaveFunction::envelope(e).unwrap();
        let h = sup_convolution(&f, &f, 0.3).unwrap();
        for x in [0.0, 0.5, 1.0, 2.2, 3.0] {
            assert!((h.value(&[x]) - f.value(&[x])).abs() < 1e-12);
            let o = sup_convolution_oracle(&f, &f, 0.3, &[x], 32).unwrap();
            assert!((o - f.value(&[x])).abs() < 1e-9, "{x}: {o} vs {}", f.value(&[x]));
        }
    }

    #[test]
    fn offset_gaussians_match_oracle() {
        // e^{-x^2} ⋆_λ e^{-(y-2)^2} = e^{-(v - 2(1-λ))^2}
        let f = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        let g = LogConcaveFunction::gaussian(vec![2.0], 1.0).unwrap();
        let lambda = 0.4;
        let h = sup_convolution(&f, &g, lambda).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let v = rng.gen_range(-2.0..4.0);
            let exact = (-(v - 1.2f64).powi(2)).exp();
            let o = sup_convolution_oracle(&f, &g, lambda, &[v], 64).unwrap();
            assert!((o - exact).abs() < 1e-9, "oracle at {v}");
            assert!((h.value(&[v]) - o).abs() < 1e-4, "table at {v}");
        }
    }

    #[test]
    fn planar_envelope_pair_matches_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut env = || {
            let pts: Vec<Vec<f64>> = (0..6)
                .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..0.0)])
                .collect();
            LogConcaveFunction::envelope(upper_envelope(&pts, 2).unwrap()).unwrap()
        };
        let (f, g) = (env(), env());
        let h = sup_convolution(&f, &g, 0.5).unwrap();
        let LogConcaveFunction::Envelope(e) = &h else { panic!() };
        let (lo, hi) = e.support().bounding_box();
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let v = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
            let o = sup_convolution_oracle(&f, &g, 0.5, &v, 24).unwrap();
            worst = worst.max((o - h.value(&v)).abs());
        }
        assert!(worst < 1e-6, "{worst}");
    }
}
