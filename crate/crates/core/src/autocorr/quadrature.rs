//! Globally adaptive Gauss–Kronrod (7/15) quadrature on a growing interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

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

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = kron.abs();
    let mut fv = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        fv[j] = (f1, f2);
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let (resasc, resabs) = (resasc * h.abs(), resabs * h.abs());
    let mut error = ((kron - gauss) * h).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        value: kron * h,
        error,
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive integrator that keeps its panel set so the interval can be
/// extended without redoing work.
pub(crate) struct Integrator<F> {
    f: F,
    heap: BinaryHeap<Panel>,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Integrator<F> {
    pub fn new(f: F) -> Self {
        Integrator {
            f,
            heap: BinaryHeap::new(),
            evaluations: 0,
        }
    }

    /// Adds `[a, b]` split into uniform panels no wider than `width`.
    pub fn add_interval(&mut self, a: f64, b: f64, width: f64) {
        let n = ((b - a) / width).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        for k in 0..n {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == n { b } else { lo + h };
            self.heap.push(gk15(&self.f, lo, hi));
            self.evaluations += 15;
        }
    }

    pub fn error(&self) -> f64 {
        self.heap.iter().map(|p| p.error).sum()
    }

    /// Bisects the worst panels until the summed error estimate is at most
    /// `tol`. Returns `false` when the evaluation budget runs out first.
    pub fn refine(&mut self, tol: f64, max_evaluations: usize) -> bool {
        let mut err = self.error();
        while err > tol {
            if self.evaluations >= max_evaluations {
                return false;
            }
            let worst = self.heap.pop().expect("non-empty panel set");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Panel cannot be split further in floating point.
                self.heap.push(Panel { error: 0.0, ..worst });
                err -= worst.error;
                continue;
            }
            let left = gk15(&self.f, worst.a, mid);
            let right = gk15(&self.f, mid, worst.b);
            self.evaluations += 30;
            err += left.error + right.error - worst.error;
            self.heap.push(left);
            self.heap.push(right);
            if err <= tol {
                err = self.error();
            }
        }
        true
    }

    /// Value summed in order of position, so the result does not depend on
    /// the refinement history.
    pub fn result(&self) -> QuadResult {
        let mut panels: Vec<Panel> = self.heap.iter().copied().collect();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        QuadResult {
            value: panels.iter().map(|p| p.value).sum(),
            error: panels.iter().map(|p| p.error).sum(),
            evaluations: self.evaluations,
        }
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_evaluations: usize,
) -> Option<QuadResult> {
    let mut q = Integrator::new(f);
    q.add_interval(a, b, b - a);
    q.refine(tol, max_evaluations).then(|| q.result())
}
