//! Gauss–Kronrod (7, 15) quadrature for complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

/// Kronrod abscissae on `[0, 1]`, descending; the negative half is mirrored.
pub const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching `XGK`.
pub const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
pub const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod nodes on `[-1, 1]` in ascending order with Kronrod and
/// Gauss weights (Gauss weight 0 on nodes not in the 7-point rule).
pub fn gk15_nodes() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for j in 0..8 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[j] = (-XGK[j], WGK[j], wg);
        out[14 - j] = (XGK[j], WGK[j], wg);
    }
    out
}

/// Kronrod estimate and |K15 − G7| on `[a, b]`.
pub fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for (x, wk, wg) in gk15_nodes() {
        let v = f(c + r * x);
        k += v * wk;
        g += v * wg;
    }
    (k * r, ((k - g) * r).norm())
}

#[derive(Debug, Clone)]
pub struct QuadOutcome {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub converged: bool,
    /// Final panels `(a, b)` in ascending order.
    pub panels: Vec<(f64, f64)>,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

/// Neumaier-compensated complex sum.
#[derive(Default, Clone, Copy)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add1(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        if acc.0.abs() >= x.abs() {
            acc.1 += (acc.0 - t) + x;
        } else {
            acc.1 += (x - t) + acc.0;
        }
        acc.0 = t;
    }

    pub fn add(&mut self, z: Complex64) {
        Self::add1(&mut self.re, z.re);
        Self::add1(&mut self.im, z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Globally adaptive G7–K15 on `[a, b]`, bisecting the panel with the
/// largest error until `error ≤ max(abs_tol, rel_tol·|value|)`.
///
/// `max_subdivisions` bounds the number of bisections. The final sum runs
/// over panels in ascending order of their left endpoint, so the result is
/// independent of heap tie-breaking.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> QuadOutcome {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    let mut value = v;
    let mut error = e;
    let mut evaluations = 15;
    let mut subdivisions = 0;
    while error > abs_tol.max(rel_tol * value.norm()) && subdivisions < max_subdivisions {
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        evaluations += 30;
        subdivisions += 1;
        value += v1 + v2 - p.value;
        error += e1 + e2 - p.error;
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut sum = CompensatedSum::default();
    let mut err = 0.0;
    for p in &panels {
        sum.add(p.value);
        err += p.error;
    }
    let value = sum.total();
    QuadOutcome {
        value,
        error: err,
        evaluations,
        subdivisions,
        converged: err <= abs_tol.max(rel_tol * value.norm()),
        panels: panels.iter().map(|p| (p.a, p.b)).collect(),
    }
}

/// G7–K15 summed over a fixed list of panels. Reusing the panels chosen by
/// [`integrate`] makes the result a smooth function of integrand parameters.
pub fn integrate_fixed<F: FnMut(f64) -> Complex64>(mut f: F, panels: &[(f64, f64)]) -> QuadOutcome {
    let mut sum = CompensatedSum::default();
    let mut err = 0.0;
    for &(a, b) in panels {
        let (v, e) = gk15(&mut f, a, b);
        sum.add(v);
        err += e;
    }
    QuadOutcome {
        value: sum.total(),
        error: err,
        evaluations: 15 * panels.len(),
        subdivisions: panels.len().saturating_sub(1),
        converged: true,
        panels: panels.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let nodes = gk15_nodes();
        let sk: f64 = nodes.iter().map(|n| n.1).sum();
        let sg: f64 = nodes.iter().map(|n| n.2).sum();
        assert!((sk - 2.0).abs() < 1e-14);
        assert!((sg - 2.0).abs() < 1e-14);
        assert_eq!(nodes.iter().filter(|n| n.2 != 0.0).count(), 7);
    }

    #[test]
    fn integrates_gaussian() {
        let out = integrate(|x| Complex64::new((-x * x).exp(), 0.0), -10.0, 10.0, 1e-13, 0.0, 100);
        assert!(out.converged);
        assert!((out.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn integrates_oscillatory_complex() {
        // ∫_0^1 e^{ix} dx = (e^i − 1)/i
        let out = integrate(|x| Complex64::new(0.0, x).exp(), 0.0, 1.0, 1e-14, 0.0, 50);
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((out.value - exact).norm() < 1e-14);
    }

    #[test]
    fn fixed_panels_reproduce_adaptive_result() {
        let f = |x: f64| Complex64::new((-(x - 0.3).powi(2)).exp(), x.sin());
        let a = integrate(f, -6.0, 6.0, 1e-12, 0.0, 100);
        let b = integrate_fixed(f, &a.panels);
        assert_eq!(a.value, b.value);
        assert!(a.panels.windows(2).all(|w| w[0].1 == w[1].0));
    }

    #[test]
    fn respects_subdivision_cap() {
        let out = integrate(|x| Complex64::new(x.abs().sqrt(), 0.0), -1.0, 1.0, 1e-16, 0.0, 3);
        assert!(out.subdivisions <= 3);
    }
}
