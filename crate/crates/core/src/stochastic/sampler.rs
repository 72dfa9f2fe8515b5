use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logconcave::{BoundingBox, Density};

/// Smallest tolerated acceptance rate of the rejection sampler.
pub const MIN_ACCEPTANCE: f64 = 1e-6;
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1 << 32;
/// Attempts made before the acceptance rate is judged.
const ACCEPTANCE_WARMUP: u64 = 10_000_000;

/// A point `(x, z)` with `0 < z ≤ f(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSample {
    pub x: Vec<f64>,
    pub z: f64,
}

/// Independent random streams used by the experiments. Each lane gets its own
/// block of ChaCha stream ids so that trial `i` of one lane never shares a
/// stream with trial `i` of another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lane {
    F = 0,
    G = 1,
    FStar = 2,
    GStar = 3,
    Aux = 4,
}

/// ChaCha20 seeded from `seed`, positioned on stream `lane · 2^40 + index`.
pub fn stream_rng(seed: u64, lane: Lane, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(((lane as u64) << 40) | (index & ((1 << 40) - 1)));
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    /// Number of samples `N`.
    pub count: usize,
    /// Rejection box; the function's effective support box when absent.
    #[serde(default)]
    pub bounding_box: Option<BoundingBox>,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
}

fn default_max_attempts() -> u64 {
    DEFAULT_MAX_ATTEMPTS
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        Self { seed, count, bounding_box: None, max_attempts: DEFAULT_MAX_ATTEMPTS }
    }
}

/// `cfg.count` i.i.d. uniform points of `{(x, z) : 0 < z ≤ f(x)}` by rejection
/// from `box × (0, max f]`, using stream 0 of `cfg.seed`.
pub fn sample_under_graph<D: Density + ?Sized>(f: &D, cfg: &SampleConfig) -> Result<Vec<GraphSample>> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    sample_with_rng(f, cfg.count, cfg.bounding_box.as_ref(), cfg.max_attempts, &mut rng)
}

pub(crate) fn sample_with_rng<D: Density + ?Sized, R: Rng>(
    f: &D,
    count: usize,
    bounding_box: Option<&BoundingBox>,
    max_attempts: u64,
    rng: &mut R,
) -> Result<Vec<GraphSample>> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let owned;
    let b = match bounding_box {
        Some(b) => b,
        None => {
            owned = f.support_box();
            &owned
        }
    };
    crate::error::check_dim(f.dim(), b.dim())?;
    let top = f.peak();
    if !(top > 0.0) || !top.is_finite() || !(b.volume() > 0.0) {
        return Err(Error::EmptySupport("nothing to sample under the graph".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut x = vec![0.0; f.dim()];
    let mut attempts: u64 = 0;
    while out.len() < count {
        if attempts >= max_attempts {
            return Err(Error::SamplerExhausted { attempts, accepted: out.len(), wanted: count });
        }
        if attempts == ACCEPTANCE_WARMUP {
            let rate = out.len() as f64 / attempts as f64;
            if rate < MIN_ACCEPTANCE {
                return Err(Error::AcceptanceTooLow { rate, attempts });
            }
        }
        attempts += 1;
        for (k, xk) in x.iter_mut().enumerate() {
            *xk = b.lo[k] + (b.hi[k] - b.lo[k]) * rng.gen::<f64>();
        }
        // (0, top]: z = 0 would break the log lift
        let z = top * (1.0 - rng.gen::<f64>());
        if z > 0.0 && z <= f.value(&x) {
            out.push(GraphSample { x: x.clone(), z });
        }
    }
    Ok(out)
}

/// CSV with columns `x1, …, xn, z`.
pub fn write_samples_csv<W: Write>(samples: &[GraphSample], w: W) -> Result<()> {
    let n = samples.first().map_or(0, |s| s.x.len());
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    header.push("z".into());
    out.write_record(&header)?;
    for s in samples {
        let mut row: Vec<String> = s.x.iter().map(|v| format!("{v:e}")).collect();
        row.push(format!("{:e}", s.z));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_samples_csv<R: Read>(r: R) -> Result<Vec<GraphSample>> {
    let mut reader = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        let vals: Vec<f64> = row
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("sample row {}: {e}", line + 2)))?;
        if vals.len() < 2 {
            return Err(Error::Parse(format!("sample row {} has fewer than 2 columns", line + 2)));
        }
        let z = vals[vals.len() - 1];
        if !(z > 0.0) {
            return Err(Error::Parse(format!("sample row {}: z must be positive", line + 2)));
        }
        out.push(GraphSample { x: vals[..vals.len() - 1].to_vec(), z });
    }
    Ok(out)
}
