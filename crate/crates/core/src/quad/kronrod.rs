//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{QuadConfig, QuadResult};

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

/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) const RULE_POINTS: usize = 15;

/// One application of the 15-point Kronrod rule with the QUADPACK error
/// estimate. Returns `(value, error, roundoff_limited)`.
pub(crate) fn qk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut f1 = [0.0; 7];
    let mut f2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (lo, hi) = (f(center - dx), f(center + dx));
        f1[j] = lo;
        f2[j] = hi;
        res_k += WGK[j] * (lo + hi);
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;

    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let mut floor = false;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let eps_floor = 50.0 * f64::EPSILON * res_abs;
        floor = eps_floor >= err;
        err = err.max(eps_floor);
    }
    (value, err, floor)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    floor: bool,
    depth: u32,
    seq: u64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Adaptive integration of `f` over the consecutive intervals delimited by
/// `points` (sorted, at least two entries).
pub(crate) fn adaptive<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    points: &[f64],
    cfg: &QuadConfig,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut evals = 0usize;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err, floor) = qk15(f, w[0], w[1]);
        evals += RULE_POINTS;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            err,
            floor,
            depth: 0,
            seq,
        });
        seq += 1;
    }
    let mut frozen: Vec<Segment> = Vec::new();
    let mut converged = false;

    let resum = |heap: &BinaryHeap<Segment>, frozen: &[Segment]| -> (f64, f64) {
        heap.iter()
            .chain(frozen.iter())
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err))
    };
    let (mut total, mut err) = resum(&heap, &frozen);
    let mut iter = 0u64;
    loop {
        // running sums drift; refresh them periodically and before stopping
        iter += 1;
        if iter % 64 == 0 {
            (total, err) = resum(&heap, &frozen);
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            (total, err) = resum(&heap, &frozen);
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            converged = true;
            break;
        }
        if heap.len() + frozen.len() >= cfg.max_segments {
            break;
        }
        // the largest error is already at the roundoff floor of its segment:
        // bisection cannot improve the result any further
        if heap.peek().is_some_and(|s| s.floor) {
            converged = true;
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= cfg.max_depth {
            frozen.push(worst);
            continue;
        }
        total -= worst.value;
        err -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, e, floor) = qk15(f, a, b);
            total += value;
            err += e;
            evals += RULE_POINTS;
            heap.push(Segment {
                a,
                b,
                value,
                err: e,
                floor,
                depth: worst.depth + 1,
                seq,
            });
            seq += 1;
        }
    }

    let mut segs: Vec<Segment> = heap.into_vec();
    segs.extend(frozen);
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum();
    let error_estimate = segs.iter().map(|s| s.err).sum();
    QuadResult {
        value,
        error_estimate,
        nodes_used: evals,
        converged,
        truncation: None,
    }
}
