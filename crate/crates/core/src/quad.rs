//! Globally adaptive Gauss–Kronrod (7/15) quadrature for small vector
//! integrands. The rule is open, so integrable endpoint singularities are
//! never evaluated.

use crate::error::{CapacityError, Result};

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-11, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadOutput<const M: usize> {
    pub value: [f64; M],
}

#[derive(Debug, Clone, Copy)]
struct Segment<const M: usize> {
    a: f64,
    b: f64,
    value: [f64; M],
    error: [f64; M],
}

fn gk15<const M: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<M>>
where
    F: FnMut(f64) -> Result<[f64; M]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;

    let mut kronrod = [0.0; M];
    let mut gauss = [0.0; M];
    let mut abs_k = [0.0; M];
    let mut fv1 = [[0.0; M]; 7];
    let mut fv2 = [[0.0; M]; 7];

    for k in 0..M {
        kronrod[k] = fc[k] * WGK[7];
        gauss[k] = fc[k] * WG[3];
        abs_k[k] = (fc[k] * WGK[7]).abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        for k in 0..M {
            kronrod[k] += WGK[j] * (f1[k] + f2[k]);
            abs_k[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }

    let mut value = [0.0; M];
    let mut error = [0.0; M];
    for k in 0..M {
        let mean = 0.5 * kronrod[k];
        let mut asc = WGK[7] * (fc[k] - mean).abs();
        for j in 0..7 {
            asc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
        }
        let asc = asc * half.abs();
        let mut err = ((kronrod[k] - gauss[k]) * half).abs();
        if asc != 0.0 && err != 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        let resabs = abs_k[k] * half.abs();
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        value[k] = kronrod[k] * half;
        error[k] = err;
    }
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[points[0], points[last]]`, with the interior
/// entries of `points` used as initial breakpoints.
pub(crate) fn integrate<const M: usize, F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<QuadOutput<M>>
where
    F: FnMut(f64) -> Result<[f64; M]>,
{
    if points.len() < 2 {
        return Err(CapacityError::domain("integrate", "need at least two points"));
    }
    let mut segments: Vec<Segment<M>> = Vec::with_capacity(64);
    for w in points.windows(2) {
        if w[1] > w[0] {
            segments.push(gk15(&mut f, w[0], w[1])?);
        } else if w[1] < w[0] {
            return Err(CapacityError::domain("integrate", "breakpoints must be non-decreasing"));
        }
    }
    if segments.is_empty() {
        return Ok(QuadOutput { value: [0.0; M] });
    }

    loop {
        let mut total = [0.0; M];
        let mut err = [0.0; M];
        for s in &segments {
            for k in 0..M {
                total[k] += s.value[k];
                err[k] += s.error[k];
            }
        }
        let tol: [f64; M] = std::array::from_fn(|k| opts.abs_tol.max(opts.rel_tol * total[k].abs()));
        if (0..M).all(|k| err[k] <= tol[k]) {
            return Ok(QuadOutput { value: total });
        }
        if segments.len() >= opts.max_intervals {
            return Err(CapacityError::no_convergence(
                "integrate",
                format!("{} intervals, value {:?}, error {:?}", segments.len(), total, err),
            ));
        }

        let worst = segments
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let score = (0..M).map(|k| s.error[k] / tol[k]).fold(0.0, f64::max);
                (i, score)
            })
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(i, _)| i)
            .expect("non-empty");

        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if !(mid > s.a && mid < s.b) {
            return Err(CapacityError::no_convergence(
                "integrate",
                format!("interval [{}, {}] cannot be bisected further", s.a, s.b),
            ));
        }
        segments.push(gk15(&mut f, s.a, mid)?);
        segments.push(gk15(&mut f, mid, s.b)?);
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub(crate) fn integrate_scalar<F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate::<1, _>(|x| Ok([f(x)]), points, opts).map(|o| o.value[0])
}
