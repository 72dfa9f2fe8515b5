use super::GraphSample;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{ball_hull_volume, upper_envelope, BallHullBody, UpperEnvelope};
use crate::logconcave::{BoundingBox, Density, LogConcaveFunction};

fn base_dim(samples: &[GraphSample]) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidParameter("random envelope of no samples".into()))?;
    let n = first.x.len();
    for s in samples {
        check_dim(n, s.x.len())?;
        if !(s.z > 0.0) {
            return Err(Error::InvalidParameter(format!("sample height {} is not positive", s.z)));
        }
    }
    Ok(n)
}

/// `[f]_N = exp(sup{z : (x, z) ∈ conv{(X_i, log Z_i)}})`, the least
/// log-concave function with `[f]_N(X_i) ≥ Z_i`, supported on `conv{X_i}`.
pub fn random_envelope(samples: &[GraphSample]) -> Result<LogConcaveFunction> {
    let n = base_dim(samples)?;
    let lifted: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let mut p = s.x.clone();
            p.push(s.z.ln());
            p
        })
        .collect();
    LogConcaveFunction::envelope(upper_envelope(&lifted, n)?)
}

/// The `s`-concave envelope `[f]_{N,s} = R^s` where `R` is the least concave
/// function with `R(x_i) ≥ R_i = 1 + log(z_i)/s`.
#[derive(Clone, Debug)]
pub struct SEnvelope {
    radius: UpperEnvelope,
    s: f64,
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
}

impl SEnvelope {
    pub fn s(&self) -> f64 {
        self.s
    }

    /// The concave radius function `T^{1/s}`.
    pub fn radius_envelope(&self) -> &UpperEnvelope {
        &self.radius
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    /// `∫ R^s` over the support, exact for integer `s`.
    pub fn integral(&self) -> Result<f64> {
        if self.s.fract() != 0.0 {
            return Err(Error::Unsupported(format!("closed-form integral for s = {}", self.s)));
        }
        Ok(self.radius.integral_power(self.s as u32))
    }

    /// `R(x)`, `-∞` off the support.
    pub fn radius_at(&self, x: &[f64]) -> f64 {
        self.radius.eval(x)
    }

    /// `conv{B^s_{R_i}(x_i)} ⊆ R^{n+s}`, which equals `K^s` of the envelope.
    /// Needs integer `s`.
    pub fn body(&self) -> Result<BallHullBody> {
        if self.s.fract() != 0.0 || self.s < 1.0 {
            return Err(Error::Unsupported(format!("ball hull with fiber dimension {}", self.s)));
        }
        BallHullBody::hull_of_balls(self.centers.clone(), self.radii.clone(), self.s as usize)
    }

    /// `(x, y) ∈ K^s_T` iff `|y| ≤ T(x)^{1/s}`.
    pub fn body_contains(&self, p: &[f64], tol: f64) -> bool {
        let n = self.radius.dim();
        let y = p[n..].iter().map(|v| v * v).sum::<f64>().sqrt();
        y <= self.radius_at(&p[..n]) + tol
    }
}

impl Density for SEnvelope {
    fn dim(&self) -> usize {
        self.radius.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = self.radius_at(x);
        if r > 0.0 {
            r.powf(self.s)
        } else {
            0.0
        }
    }

    fn support_box(&self) -> BoundingBox {
        let (lo, hi) = self.radius.support().bounding_box();
        BoundingBox::new(lo, hi)
    }

    fn peak(&self) -> f64 {
        self.radius.max_height().max(0.0).powf(self.s)
    }

    fn exact_revolution_volume(&self, s: usize) -> Option<f64> {
        if s as f64 != self.s || self.dim() + s > 3 {
            return None;
        }
        ball_hull_volume(&self.body().ok()?).ok()
    }
}

/// `[f_ε]_{N,s}` from samples of `f_ε`. Requires `s > -log ε` and every
/// `z_i ≥ ε`, which makes all radii `R_i` positive.
pub fn random_envelope_s(samples: &[GraphSample], s: f64, eps: f64) -> Result<SEnvelope> {
    let n = base_dim(samples)?;
    if !(eps > 0.0) || !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("need s > 0 and ε > 0, got s = {s}, ε = {eps}")));
    }
    if s <= -eps.ln() {
        return Err(Error::Precondition(format!("s = {s} must exceed -log ε = {}", -eps.ln())));
    }
    if let Some(p) = samples.iter().find(|p| p.z < eps) {
        return Err(Error::Precondition(format!("sample height {} is below ε = {eps}", p.z)));
    }
    let radii: Vec<f64> = samples.iter().map(|p| 1.0 + p.z.ln() / s).collect();
    let centers: Vec<Vec<f64>> = samples.iter().map(|p| p.x.clone()).collect();
    let lifted: Vec<Vec<f64>> = centers
        .iter()
        .zip(&radii)
        .map(|(x, r)| {
            let mut p = x.clone();
            p.push(*r);
            p
        })
        .collect();
    let radius = upper_envelope(&lifted, n)?;
    Ok(SEnvelope { radius, s, centers, radii })
}
