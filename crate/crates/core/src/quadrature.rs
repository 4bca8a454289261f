//! Globally adaptive Gauss–Kronrod (7/15) integration on a finite interval.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate falls below `rel_tol` times the integral of `|f|`. Measuring the
//! error against the L1 norm keeps integrals whose true value is zero (odd
//! integrands, central order statistics) from refining forever.

#![allow(clippy::excessive_precision)]

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of one 15-point rule on `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct RuleEstimate {
    pub kronrod: f64,
    pub gauss: f64,
    pub abs_integral: f64,
}

impl RuleEstimate {
    pub fn error(&self) -> f64 {
        (self.kronrod - self.gauss).abs()
    }
}

/// Apply the paired 7-point Gauss / 15-point Kronrod rule.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> RuleEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_integral = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_integral += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    RuleEstimate {
        kronrod: kronrod * half,
        gauss: gauss * half,
        abs_integral: abs_integral * half.abs(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    est: RuleEstimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error() == other.est.error()
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error().total_cmp(&other.est.error())
    }
}

/// Outcome of [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub abs_integral: f64,
    pub segments: usize,
}

/// Integrate `f` over `[a, b]` starting from `initial_segments` equal pieces.
///
/// Fails with [`Error::NonConvergence`] when more than `max_segments`
/// pieces would be needed.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    initial_segments: usize,
    rel_tol: f64,
    max_segments: usize,
) -> Result<Integral> {
    let initial = initial_segments.max(1);
    let width = (b - a) / initial as f64;
    let mut heap: BinaryHeap<Segment> = (0..initial)
        .map(|k| {
            let lo = a + width * k as f64;
            let hi = if k + 1 == initial { b } else { lo + width };
            Segment {
                a: lo,
                b: hi,
                est: gauss_kronrod_15(&f, lo, hi),
            }
        })
        .collect();

    loop {
        let (value, error, abs_integral) = heap.iter().fold((0.0, 0.0, 0.0), |acc, s| {
            (
                acc.0 + s.est.kronrod,
                acc.1 + s.est.error(),
                acc.2 + s.est.abs_integral,
            )
        });
        if error <= rel_tol * abs_integral || abs_integral == 0.0 {
            // re-sum in interval order so the result does not depend on heap layout
            let mut segs: Vec<Segment> = heap.into_vec();
            segs.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = segs.iter().map(|s| s.est.kronrod).sum();
            return Ok(Integral {
                value,
                error_estimate: error,
                abs_integral,
                segments: segs.len(),
            });
        }
        if heap.len() >= max_segments {
            return Err(Error::NonConvergence {
                segments: heap.len(),
                error_estimate: error,
                value,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            heap.push(Segment {
                a: lo,
                b: hi,
                est: gauss_kronrod_15(&f, lo, hi),
            });
        }
    }
}
