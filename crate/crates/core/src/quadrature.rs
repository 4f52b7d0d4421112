//! Globally adaptive 7/15-point Gauss–Kronrod quadrature, and the numerical
//! oracle for the half-normal `t·Q(t/σ_v)` integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quantizer::q_function;

// Kronrod abscissae on [-1, 1] (non-negative half) and their weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 4000;
const REL_FLOOR: f64 = 50.0 * f64::EPSILON;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]`, bisecting the segment
/// with the largest error estimate until the summed estimate drops below
/// `max(abs_tol, 50ε·|I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    gauss_kronrod_with_breaks(f, &[a, b], abs_tol)
}

/// Like [`gauss_kronrod`], starting from the segments between consecutive
/// `breaks` (ascending). Breaks placed at the integrand's length scales keep
/// narrow features on a wide interval from being missed by the first rule.
pub fn gauss_kronrod_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
) -> Result<f64> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Quadrature("breaks must be strictly ascending".into()));
    }
    if breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::Quadrature(format!("interval {breaks:?} is not finite")));
    }
    let mut heap: BinaryHeap<Segment> = breaks
        .windows(2)
        .map(|w| kronrod_segment(&f, w[0], w[1]))
        .collect();
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() {
            return Err(Error::Quadrature("integrand produced a non-finite value".into()));
        }
        if error <= abs_tol.max(REL_FLOOR * value.abs()) {
            return Ok(value);
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "error estimate {error:e} above tolerance {abs_tol:e} after {MAX_INTERVALS} segments"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod_segment(&f, worst.a, mid));
        heap.push(kronrod_segment(&f, mid, worst.b));
    }
}

/// Numerical value of `∫₀^∞ t·Q(t/σ_v)·(2/√(2πσ²))·exp(-t²/(2σ²)) dt`,
/// truncated to `[0, 10·max(σ, σ_v)]` and integrated to absolute tolerance
/// `1e-11`.
pub fn flip_weighted_magnitude_quadrature(sigma: f64, sigma_v: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma_v > 0.0) {
        return Err(Error::param(format!(
            "sigma and sigma_v must be positive, got {sigma}, {sigma_v}"
        )));
    }
    let norm = 2.0 / (2.0 * PI * sigma * sigma).sqrt();
    let integrand =
        |t: f64| t * q_function(t / sigma_v) * norm * (-t * t / (2.0 * sigma * sigma)).exp();
    let upper = 10.0 * sigma.max(sigma_v);
    let mut breaks: Vec<f64> = (0..=10)
        .flat_map(|k| [k as f64 * sigma, k as f64 * sigma_v])
        .filter(|x| *x < upper)
        .collect();
    breaks.push(upper);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    gauss_kronrod_with_breaks(integrand, &breaks, 1e-11)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::flip_weighted_magnitude;

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // A single 15-point Kronrod segment is exact through degree 22.
        for p in 0..=22 {
            let s = kronrod_segment(&|x: f64| x.powi(p), 0.0, 1.0);
            assert!((s.value - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}");
        }
    }

    #[test]
    fn adaptive_handles_sharp_integrands() {
        let v = gauss_kronrod(|x: f64| (-1000.0 * x * x).exp(), -1.0, 1.0, 1e-13).unwrap();
        assert!((v - (PI / 1000.0).sqrt()).abs() < 1e-12);
        let v = gauss_kronrod(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn reports_failures() {
        assert!(gauss_kronrod(|x: f64| 1.0 / x, -1.0, 1.0, 1e-12).is_err());
        assert!(gauss_kronrod(|x: f64| x, 0.0, f64::INFINITY, 1e-12).is_err());
        assert!(gauss_kronrod_with_breaks(|x: f64| x, &[0.0, 0.0, 1.0], 1e-12).is_err());
        assert!(flip_weighted_magnitude_quadrature(0.0, 1.0).is_err());
    }

    #[test]
    fn oracle_reference_point() {
        let v = flip_weighted_magnitude_quadrature(0.1, 0.031_622_8).unwrap();
        assert!((v - 0.001_856_576_635_653_981_4).abs() < 1e-11);
        assert!((v - flip_weighted_magnitude(0.1, 0.031_622_8)).abs() < 1e-9);
    }

    #[test]
    fn oracle_limits() {
        let sigma: f64 = 0.4;
        assert!(flip_weighted_magnitude_quadrature(sigma, 1e-6 * sigma).unwrap().abs() < 1e-9);
        let far = flip_weighted_magnitude_quadrature(sigma, 1e6 * sigma).unwrap();
        assert!((far - (sigma * sigma / (2.0 * PI)).sqrt()).abs() < 1e-6);
    }
}
