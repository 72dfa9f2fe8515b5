//! Grid-then-golden-section maximisation over intervals and convex polygons,
//! used by the brute-force oracles. Every returned value is attained at an
//! evaluated feasible point, so the result never exceeds the true supremum.

const GOLDEN_ITERS: usize = 90;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximises a quasi-concave `phi` on `[a, b]`: best of `res` grid nodes, then
/// golden section on the bracket around it. `-∞` marks infeasible points; the
/// feasible set is assumed to be an interval.
pub(crate) fn maximize_1d(phi: impl Fn(f64) -> f64, a: f64, b: f64, res: usize) -> (f64, f64) {
    if !(b > a) {
        return (a, phi(a));
    }
    let res = res.max(2);
    let h = (b - a) / (res - 1) as f64;
    let mut best = (a, f64::NEG_INFINITY);
    let mut best_k = 0;
    for k in 0..res {
        let x = if k + 1 == res { b } else { a + h * k as f64 };
        let v = phi(x);
        if v > best.1 {
            best = (x, v);
            best_k = k;
        }
    }
    if best.1 == f64::NEG_INFINITY {
        return best;
    }
    let mut lo = if best_k == 0 { a } else { a + h * (best_k - 1) as f64 };
    let mut hi = if best_k + 1 >= res { b } else { (a + h * (best_k + 1) as f64).min(b) };
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (phi(c), phi(d));
    for _ in 0..GOLDEN_ITERS {
        for (x, v) in [(c, fc), (d, fd)] {
            if v > best.1 {
                best = (x, v);
            }
        }
        let go_left = if fc == f64::NEG_INFINITY && fd == f64::NEG_INFINITY {
            // both infeasible: the feasible interval lies on the side of the
            // best point found so far
            best.0 < c
        } else {
            fc >= fd
        };
        if go_left {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = phi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = phi(d);
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Range of `y` over the vertical line `x₀ = x` through a convex polygon given
/// as a vertex ring (any orientation; segments and points allowed).
pub(crate) fn vertical_chord(poly: &[[f64; 2]], x: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let m = poly.len();
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        if p[0] == x {
            lo = lo.min(p[1]);
            hi = hi.max(p[1]);
        }
        let (a, b) = if p[0] <= q[0] { (p, q) } else { (q, p) };
        if a[0] < x && x < b[0] {
            let y = a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]);
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Nested maximisation over a convex polygon: the outer variable `x₀` runs
/// over the polygon's `x`-range, the inner over the vertical chord. For a
/// concave objective the inner maximum is concave in `x₀`.
pub(crate) fn maximize_2d(phi: impl Fn([f64; 2]) -> f64, poly: &[[f64; 2]], res: usize) -> ([f64; 2], f64) {
    if poly.is_empty() {
        return ([0.0; 2], f64::NEG_INFINITY);
    }
    let xmin = poly.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let xmax = poly.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let inner = |x: f64| -> (f64, f64) {
        match vertical_chord(poly, x) {
            Some((lo, hi)) => maximize_1d(|y| phi([x, y]), lo, hi, res),
            None => (0.0, f64::NEG_INFINITY),
        }
    };
    let (x, v) = maximize_1d(|x| inner(x).1, xmin, xmax, res);
    let (y, _) = inner(x);
    ([x, y], v)
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise ring of a convex point set (given in any order).
pub(crate) fn ccw_ring(points: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let n = points.len() as f64;
    let c = [
        points.iter().map(|p| p[0]).sum::<f64>() / n,
        points.iter().map(|p| p[1]).sum::<f64>() / n,
    ];
    let mut ring: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    ring.sort_by(|a, b| {
        let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
        let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
        ta.total_cmp(&tb)
    });
    ring
}

/// Sutherland–Hodgman intersection of a polygon with a convex CCW polygon.
pub(crate) fn clip_convex(subject: &[[f64; 2]], clip: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out = subject.to_vec();
    let m = clip.len();
    if m < 3 {
        return out;
    }
    for i in 0..m {
        let (a, b) = (clip[i], clip[(i + 1) % m]);
        let input = std::mem::take(&mut out);
        if input.is_empty() {
            break;
        }
        let scale = ((b[0] - a[0]).hypot(b[1] - a[1])).max(f64::MIN_POSITIVE);
        // points within 1e-12 of an edge count as inside
        let side = |p: [f64; 2]| cross(a, b, p) / scale + 1e-12 * (1.0 + a[0].abs().max(a[1].abs()));
        for k in 0..input.len() {
            let p = input[k];
            let q = input[(k + 1) % input.len()];
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_maximum() {
        let (x, v) = maximize_1d(|x| -(x - 0.3141).powi(2), -2.0, 5.0, 8);
        assert!((x - 0.3141).abs() < 1e-7 && v <= 0.0);
    }

    #[test]
    fn golden_respects_infeasible_region() {
        let phi = |x: f64| if (0.4..=0.45).contains(&x) { x } else { f64::NEG_INFINITY };
        let (x, v) = maximize_1d(phi, 0.0, 1.0, 64);
        assert!((x - 0.45).abs() < 1e-9 && v == x);
    }

    #[test]
    fn nested_search_on_triangle() {
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let (p, v) = maximize_2d(|p| -(p[0] - 0.6).powi(2) - (p[1] - 0.6).powi(2), &tri, 16);
        assert!((p[0] - 0.5).abs() < 1e-6 && (p[1] - 0.5).abs() < 1e-6, "{p:?}");
        assert!((v + 0.02).abs() < 1e-10);
    }

    #[test]
    fn clipping_two_squares() {
        let a = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let b = [[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0]];
        let c = clip_convex(&a, &b);
        let area: f64 = (0..c.len())
            .map(|i| {
                let (p, q) = (c[i], c[(i + 1) % c.len()]);
                p[0] * q[1] - p[1] * q[0]
            })
            .sum::<f64>()
            / 2.0;
        assert!((area - 1.0).abs() < 1e-10);
        let (lo, hi) = vertical_chord(&c, 1.5).unwrap();
        assert!((lo - 1.0).abs() < 1e-10 && (hi - 2.0).abs() < 1e-10);
    }
}
