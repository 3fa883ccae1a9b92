//! Gauss–Legendre rules and adaptive Gauss–Kronrod (G7/K15) integration.

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Fixed Gauss–Legendre rule mapped onto arbitrary intervals.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `(x, w)` pairs for the interval `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One K15 panel for an `N`-channel integrand: (Kronrod estimate, error estimate per channel).
fn kronrod_panel<const N: usize>(f: &impl Fn(f64) -> [f64; N], a: f64, b: f64) -> ([f64; N], [f64; N]) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = fc.map(|v| v * WGK[7]);
    let mut g = fc.map(|v| v * WG[3]);
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(mid - dx);
        let f2 = f(mid + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            k[c] += WGK[j] * s;
            if j % 2 == 1 {
                g[c] += WG[j / 2] * s;
            }
        }
    }
    let est = k.map(|v| v * half);
    let mut err = [0.0; N];
    for c in 0..N {
        err[c] = ((k[c] - g[c]) * half).abs();
    }
    (est, err)
}

/// Adaptive G7/K15 integration of a vector-valued integrand over `[a, b]`.
///
/// Panels are bisected until the summed error estimate, measured by the largest
/// channel, is below `max(abs_tol, rel_tol * |integral|)`.
pub fn gauss_kronrod<const N: usize>(
    f: impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<[f64; N]> {
    const MAX_PANELS: usize = 4000;
    let mut panels = vec![(a, b, kronrod_panel(&f, a, b))];
    loop {
        let mut total = [0.0; N];
        let mut err = [0.0; N];
        for (_, _, (est, e)) in &panels {
            for c in 0..N {
                total[c] += est[c];
                err[c] += e[c];
            }
        }
        if total.iter().chain(err.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("integrand".into()));
        }
        let magnitude = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let worst_total = err.iter().fold(0.0f64, |m, v| m.max(*v));
        if worst_total <= abs_tol.max(rel_tol * magnitude) {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Resolution(format!(
                "adaptive quadrature did not converge: error {worst_total:.3e} for integral {magnitude:.3e}"
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .map(|(i, (_, _, (_, e)))| (i, e.iter().fold(0.0f64, |m, v| m.max(*v))))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let (lo, hi, _) = panels.swap_remove(worst);
        let m = 0.5 * (lo + hi);
        panels.push((lo, m, kronrod_panel(&f, lo, m)));
        panels.push((m, hi, kronrod_panel(&f, m, hi)));
    }
}
