use crate::error::{LabError, Result};
use crate::normal;

// 15-point Kronrod rule with its embedded 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Standardised lower cut-off: the mass of φ below it is ~6e-16.
const TAIL_CUT: f64 = 8.0;
const ABS_TOL: f64 = 1e-10;
const MAX_SPLITS: usize = 4000;

/// Kronrod estimate and |Kronrod - Gauss| on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod: bisect the interval with the largest
/// error estimate until the total estimate is below `tol`.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    for _ in 0..MAX_SPLITS {
        let total_err: f64 = pieces.iter().map(|p| p.3).sum();
        if total_err <= tol {
            break;
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    pieces.iter().map(|p| p.2).sum()
}

/// `P(X ≤ 0, Y ≤ 0)` for `(X, Y)` jointly Gaussian with means `(m1, m2)`,
/// variances `(v1, v2)` and covariance `c`.
///
/// Conditions on `X`: with `u = (X - m1)/√v1`,
/// `P = ∫ φ(u) Φ((-m2 - c·u/√v1) / sqrt(v2 - c²/v1)) du` over
/// `u ∈ [-8, -m1/√v1]`, integrated adaptively to 1e-10.
pub fn bivariate_orthant_neg(m1: f64, m2: f64, v1: f64, v2: f64, c: f64) -> Result<f64> {
    if !(v1 > 0.0 && v2 > 0.0) || !v1.is_finite() || !v2.is_finite() {
        return Err(LabError::InvalidParam(format!(
            "variances must be positive, got ({v1}, {v2})"
        )));
    }
    let corr = c / (v1 * v2).sqrt();
    if !(corr.abs() < 1.0) {
        return Err(LabError::InvalidCovariance { corr });
    }
    let s1 = v1.sqrt();
    let cond_sd = (v2 - c * c / v1).sqrt();
    let upper = (-m1 / s1).min(TAIL_CUT + 1.0);
    if upper <= -TAIL_CUT {
        return Ok(0.0);
    }
    let slope = c / s1;
    let p = integrate(
        |u| normal::pdf(u) * normal::cdf((-m2 - slope * u) / cond_sd),
        -TAIL_CUT,
        upper,
        ABS_TOL,
    );
    Ok(p.clamp(0.0, 1.0))
}
