//! Complex dilogarithm `Li₂(z) = Σ_{k≥1} z^k / k²` and its analytic continuation
//! with the cut `[1, ∞)`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `B_{2k} / (2k + 1)!` for `k = 1, 2, ...`.
const BERNOULLI: [f64; 18] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
    -1.740845657234001e-27,
    4.1576356446139e-29,
    -9.962148488284622e-31,
];

/// Series in `w = -ln(1 - z)`, valid for `|z| ≤ 1`, `Re z ≤ 1/2`.
fn bernoulli_series(z: Complex64) -> Complex64 {
    let w = -(Complex64::new(1.0, 0.0) - z).ln();
    let w2 = w * w;
    let mut acc = w - 0.25 * w2;
    let mut p = w * w2;
    for c in BERNOULLI {
        let term = p * c;
        acc += term;
        if term.norm() <= 1e-17 * acc.norm() {
            break;
        }
        p *= w2;
    }
    acc
}

pub fn li2(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let zeta2 = PI * PI / 6.0;
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z == one {
        return Complex64::new(zeta2, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        let l = (-z).ln();
        return -zeta2 - 0.5 * l * l - li2(one / z);
    }
    if z.re > 0.5 {
        return zeta2 - z.ln() * (one - z).ln() - bernoulli_series(one - z);
    }
    bernoulli_series(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power_series(z: Complex64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        let mut p = z;
        for k in 1..20000 {
            acc += p / (k as f64 * k as f64);
            p *= z;
        }
        acc
    }

    #[test]
    fn special_values() {
        assert!((li2(c(-1.0, 0.0)) - c(-PI * PI / 12.0, 0.0)).norm() < 1e-15);
        let ln2 = 2f64.ln();
        let half = PI * PI / 12.0 - 0.5 * ln2 * ln2;
        assert!((li2(c(0.5, 0.0)) - c(half, 0.0)).norm() < 1e-15);
        assert!((li2(c(1.0, 0.0)) - c(PI * PI / 6.0, 0.0)).norm() < 1e-15);
        // Li₂(e^{iθ}) has real part π²/6 - θ(2π - θ)/4
        let th = 1.1f64;
        let v = li2(Complex64::from_polar(1.0, th));
        assert!((v.re - (PI * PI / 6.0 - th * (2.0 * PI - th) / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_power_series_inside_disk() {
        for z in [c(0.3, 0.2), c(-0.7, 0.5), c(0.8, -0.1), c(0.1, 0.9), c(-0.5, -0.5)] {
            assert!((li2(z) - power_series(z)).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn derivative_outside_disk() {
        // d/dz Li₂(z) = -ln(1 - z)/z
        for z in [c(-2.5, 0.3), c(0.4, 1.7), c(-1.2, -3.0)] {
            let h = 1e-6;
            let fd = (li2(z + h) - li2(z - h)) / (2.0 * h);
            let exact = -(c(1.0, 0.0) - z).ln() / z;
            assert!((fd - exact).norm() < 1e-8, "{z}");
        }
    }
}
