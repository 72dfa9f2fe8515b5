//! Closed-form integrals of exponentials of affine functions over segments and
//! triangles, plus a small Gauss-Legendre rule for the few places that need
//! quadrature.

/// Below this `|slope| * length` the first divided difference switches to its
/// second-order series.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// First divided difference of `exp` at `a`, `b`: `(e^b - e^a) / (b - a)`.
pub fn exp_divided_difference1(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let d = hi - lo;
    if d < SERIES_THRESHOLD {
        hi.exp() * (1.0 - d / 2.0 + d * d / 6.0)
    } else {
        // e^hi * (1 - e^-d) / d keeps the exponent bounded by the max
        hi.exp() * (-(-d).exp_m1()) / d
    }
}

/// Second divided difference of `exp` at three points. Equals twice the
/// average of `e^L` over a triangle whose vertex values of `L` are `a, b, c`.
pub fn exp_divided_difference2(a: f64, b: f64, c: f64) -> f64 {
    let mut v = [a, b, c];
    v.sort_by(f64::total_cmp);
    let spread = v[2] - v[0];
    if spread <= 1.0 {
        // e^m * sum_k h_{k-2}(x - m) / k!  with complete homogeneous polynomials
        let m = (v[0] + v[1] + v[2]) / 3.0;
        let x = [v[0] - m, v[1] - m, v[2] - m];
        let mut h1 = 1.0; // h_j(x0)
        let mut h2 = 1.0; // h_j(x0, x1)
        let mut h3 = 1.0; // h_j(x0, x1, x2)
        let mut fact = 2.0; // (j + 2)!
        let mut sum = h3 / fact;
        for j in 1..60 {
            h1 *= x[0];
            h2 = h1 + x[1] * h2;
            h3 = h2 + x[2] * h3;
            fact *= (j + 2) as f64;
            let term = h3 / fact;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        m.exp() * sum
    } else {
        (exp_divided_difference1(v[1], v[2]) - exp_divided_difference1(v[0], v[1])) / spread
    }
}

/// `∫_x0^x1 exp(slope * x + intercept) dx` for `x0 <= x1`.
pub fn integrate_exp_affine_segment(x0: f64, x1: f64, slope: f64, intercept: f64) -> f64 {
    let len = x1 - x0;
    if len <= 0.0 {
        return 0.0;
    }
    len * exp_divided_difference1(slope * x0 + intercept, slope * x1 + intercept)
}

/// `∫_T exp(L)` over a triangle of area `area` with vertex values `l`.
pub fn integrate_exp_affine_triangle(area: f64, l: [f64; 3]) -> f64 {
    2.0 * area * exp_divided_difference2(l[0], l[1], l[2])
}

/// `∫_0^len (r0 + (r1 - r0) t / len)^k dt` for a nonnegative affine profile.
pub fn integrate_affine_power_segment(len: f64, r0: f64, r1: f64, k: u32) -> f64 {
    // (r1^{k+1} - r0^{k+1}) / ((k+1)(r1 - r0)) written without cancellation
    let mut acc = 0.0;
    for j in 0..=k {
        acc += r0.powi(j as i32) * r1.powi((k - j) as i32);
    }
    len * acc / (k + 1) as f64
}

/// Integral of `(affine)^k` over a triangle with vertex values `r`:
/// `2 area k! / (k+2)! * h_k(r0, r1, r2)`.
pub fn integrate_affine_power_triangle(area: f64, r: [f64; 3], k: u32) -> f64 {
    let mut h1 = 1.0;
    let mut h2 = 1.0;
    let mut h3 = 1.0;
    for _ in 0..k {
        h1 *= r[0];
        h2 = h1 + r[1] * h2;
        h3 = h2 + r[2] * h3;
    }
    let k = k as f64;
    2.0 * area * h3 / ((k + 1.0) * (k + 2.0))
}

/// 16-point Gauss-Legendre nodes and weights on `[-1, 1]`.
pub const GAUSS_LEGENDRE_16: [(f64, f64); 16] = [
    (-0.989_400_934_991_649_9, 0.027_152_459_411_754_095),
    (-0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (-0.865_631_202_387_831_7, 0.095_158_511_682_492_78),
    (-0.755_404_408_355_003, 0.124_628_971_255_533_88),
    (-0.617_876_244_402_643_7, 0.149_595_988_816_576_73),
    (-0.458_016_777_657_227_4, 0.169_156_519_395_002_54),
    (-0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (-0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (0.458_016_777_657_227_4, 0.169_156_519_395_002_54),
    (0.617_876_244_402_643_7, 0.149_595_988_816_576_73),
    (0.755_404_408_355_003, 0.124_628_971_255_533_88),
    (0.865_631_202_387_831_7, 0.095_158_511_682_492_78),
    (0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (0.989_400_934_991_649_9, 0.027_152_459_411_754_095),
];

/// Composite Gauss-Legendre rule with `panels` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        total += GAUSS_LEGENDRE_16
            .iter()
            .map(|&(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd2_direct(a: f64, b: f64, c: f64) -> f64 {
        a.exp() / ((a - b) * (a - c)) + b.exp() / ((b - a) * (b - c)) + c.exp() / ((c - a) * (c - b))
    }

    #[test]
    fn segment_integral_of_exp() {
        let v = integrate_exp_affine_segment(0.0, 1.0, 1.0, 0.0);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn flat_segment_uses_series() {
        let v = integrate_exp_affine_segment(0.0, 2.0, 1e-12, 0.5);
        assert!((v - 2.0 * 0.5f64.exp() * (1.0 + 1e-12)).abs() < 1e-14);
    }

    #[test]
    fn second_difference_matches_direct_formula_when_well_separated() {
        for &(a, b, c) in &[(0.0, 1.0, 3.0), (-2.0, 0.3, 0.9), (-10.0, -4.0, 1.0), (0.1, 0.5, 0.2)] {
            let got = exp_divided_difference2(a, b, c);
            let want = dd2_direct(a, b, c);
            assert!((got - want).abs() <= 1e-12 * want, "{a} {b} {c}: {got} vs {want}");
        }
    }

    #[test]
    fn second_difference_at_coincident_points() {
        // e[x,x,x] = e^x / 2
        let got = exp_divided_difference2(0.7, 0.7, 0.7);
        assert!((got - 0.7f64.exp() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_integral_against_quadrature() {
        // triangle (0,0),(1,0),(0,1) and L = x + 2y - 1
        let exact = integrate_exp_affine_triangle(0.5, [-1.0, 0.0, 1.0]);
        let quad = gauss_legendre(
            |x| gauss_legendre(|y| (x + 2.0 * y - 1.0).exp(), 0.0, 1.0 - x, 4),
            0.0,
            1.0,
            4,
        );
        assert!((exact - quad).abs() < 1e-13, "{exact} vs {quad}");
    }

    #[test]
    fn affine_power_integrals() {
        assert!((integrate_affine_power_segment(2.0, 1.0, 3.0, 1) - 4.0).abs() < 1e-15);
        // ∫_0^1 (1+t)^2 dt = 7/3
        assert!((integrate_affine_power_segment(1.0, 1.0, 2.0, 2) - 7.0 / 3.0).abs() < 1e-15);
        // constant 2 over unit right triangle, squared: 4 * 0.5
        assert!((integrate_affine_power_triangle(0.5, [2.0, 2.0, 2.0], 2) - 2.0).abs() < 1e-15);
        // linear L = x over the unit right triangle: ∫ x = 1/6
        assert!((integrate_affine_power_triangle(0.5, [0.0, 1.0, 0.0], 1) - 1.0 / 6.0).abs() < 1e-15);
    }
}
