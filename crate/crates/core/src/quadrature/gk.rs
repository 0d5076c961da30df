use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One application of the 21-point Kronrod rule on `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub err: f64,
    pub res_abs: f64,
}

fn checked<F>(f: &mut F, t: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = f(t)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Integrand { t })
    }
}

pub(crate) fn qk21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = checked(f, center)?;

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_gauss = 0.0;
    let mut res_kronrod = WGK[10] * f_center;
    let mut res_abs = res_kronrod.abs();

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    Ok(Segment {
        a,
        b,
        value: res_kronrod * half,
        err: rescale_error(err, res_abs, res_asc),
        res_abs,
    })
}

struct ByError(Segment);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .err
            .total_cmp(&other.0.err)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

const ROUNDOFF_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Globally adaptive bisection on `[a, b]` until the summed error estimate is
/// below `max(abs_tol, rel_tol |I|)`. `budget` counts remaining subintervals.
pub(crate) fn adaptive<F>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let first = qk21(f, a, b)?;
    *budget = budget.saturating_sub(1);
    let mut total = first.value;
    let mut total_err = first.err;
    let mut total_abs = first.res_abs;
    let mut heap = BinaryHeap::new();
    heap.push(ByError(first));

    // errors below the round-off floor of the Kronrod estimate cannot be
    // reduced by splitting
    while total_err > abs_tol.max(rel_tol * total.abs()).max(ROUNDOFF_FLOOR * total_abs) {
        let Some(ByError(worst)) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        // interval too small to split further: keep it and give up refining
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs() {
            heap.push(ByError(worst));
            break;
        }
        if *budget < 2 {
            return Err(Error::Convergence {
                message: format!("subinterval budget exhausted on [{a}, {b}]"),
                partial: total,
                err_estimate: total_err,
            });
        }
        let left = qk21(f, worst.a, mid)?;
        let right = qk21(f, mid, worst.b)?;
        *budget -= 2;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        total_abs += left.res_abs + right.res_abs - worst.res_abs;
        heap.push(ByError(left));
        heap.push(ByError(right));
    }

    // resum in position order so the value does not depend on the refinement history
    let mut segs: Vec<Segment> = heap.into_iter().map(|s| s.0).collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum();
    let err = segs.iter().map(|s| s.err).sum::<f64>();
    let res_abs = segs.iter().map(|s| s.res_abs).sum::<f64>();
    debug_assert!(res_abs.is_finite() && total_abs.is_finite());
    Ok(Segment {
        a,
        b,
        value,
        err,
        res_abs,
    })
}
