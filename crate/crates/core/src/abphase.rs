//! Pure-gauge phase algebra around a thin flux line on the z-axis, a
//! two-slit fringe model, and extraction of the flux period from a scan.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldcore::field::{PathPolyline, Vec3};
use crate::fieldcore::quadrature::GaussLegendre;
use crate::units::Constants;

/// The multivalued gauge function `g = Φ(n + θ/2π)` with `θ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureGaugeField {
    pub flux: f64,
}

impl PureGaugeField {
    pub fn new(flux: f64) -> Self {
        Self { flux }
    }

    /// Branch angle of `p` about the z-axis, in `[0, 2π)`.
    pub fn branch_angle(p: Vec3) -> f64 {
        let t = p[1].atan2(p[0]);
        if t < 0.0 {
            let w = t + TAU;
            if w >= TAU {
                0.0
            } else {
                w
            }
        } else {
            t
        }
    }

    /// `g` on winding sheet `n`.
    pub fn value(&self, theta: f64, winding: i64) -> f64 {
        self.flux * (winding as f64 + theta / TAU)
    }

    /// Single-branch value at a point, in `[0, Φ)` for positive flux.
    pub fn branch_value(&self, p: Vec3) -> f64 {
        self.value(Self::branch_angle(p), 0)
    }

    /// `∇g = Φ θ̂ / (2πρ)`, the field of an ideal flux line.
    pub fn gradient(&self, p: Vec3) -> Vec3 {
        let rho2 = p[0] * p[0] + p[1] * p[1];
        let s = self.flux / (TAU * rho2);
        [-p[1] * s, p[0] * s, 0.0]
    }
}

/// Signed increment of the azimuth from `a` to `b` along a straight segment.
fn segment_winding(a: Vec3, b: Vec3) -> Result<f64> {
    let (ax, ay, bx, by) = (a[0], a[1], b[0], b[1]);
    let dx = bx - ax;
    let dy = by - ay;
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (-(ax * dx + ay * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let cx = ax + t * dx;
    let cy = ay + t * dy;
    let scale = (ax.hypot(ay)).max(bx.hypot(by));
    if cx.hypot(cy) <= 1e-12 * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
        return Err(Error::Singularity("path touches the flux axis".into()));
    }
    Ok((ax * by - ay * bx).atan2(ax * bx + ay * by))
}

/// Total continuous change of θ along the path.
///
/// The winding sheet is found from the accumulated increments; the result
/// is then formed from the endpoint branch angles so that canonical paths
/// give exact multiples of π.
pub fn winding_angle(path: &PathPolyline) -> Result<f64> {
    let mut accumulated = 0.0;
    for (a, b) in path.segments() {
        accumulated += segment_winding(a, b)?;
    }
    let pts = path.points();
    let start = PureGaugeField::branch_angle(pts[0]);
    let end = if path.is_closed() { start } else { PureGaugeField::branch_angle(pts[pts.len() - 1]) };
    let sheets = ((accumulated - (end - start)) / TAU).round();
    Ok(end - start + TAU * sheets)
}

/// Integer number of turns of a closed path about the axis.
pub fn winding_number(path: &PathPolyline) -> Result<i64> {
    Ok((winding_angle(path)? / TAU).round() as i64)
}

/// Phase `(q/ħ) Δg` gained along the path in the pure-gauge region.
pub fn path_phase(path: &PathPolyline, gauge: &PureGaugeField, units: &Constants) -> Result<f64> {
    let dg = gauge.flux * (winding_angle(path)? / TAU);
    Ok(units.q * dg / units.hbar)
}

/// Segments per half circle of the canonical paths.
const CANONICAL_SEGMENTS: usize = 64;

/// Upper half circle from A = (−1, 0) through B = (0, 1) to D = (1, 0).
pub fn path_abd() -> PathPolyline {
    PathPolyline::arc(1.0, PI, 0.0, 0.0, CANONICAL_SEGMENTS).expect("canonical path")
}

/// Lower half circle from A = (−1, 0) through C = (0, −1) to D = (1, 0).
pub fn path_acd() -> PathPolyline {
    PathPolyline::arc(1.0, PI, TAU, 0.0, CANONICAL_SEGMENTS).expect("canonical path")
}

/// Phase difference between the two slit paths, `phase(ACD) − phase(ABD) = qΦ/ħ`.
pub fn two_slit_phase_difference(flux: f64, units: &Constants) -> Result<f64> {
    let gauge = PureGaugeField::new(flux);
    let diff = path_phase(&path_acd(), &gauge, units)? - path_phase(&path_abd(), &gauge, units)?;
    let closed_form = units.q * flux / units.hbar;
    let tol = 1e-12 * closed_form.abs().max(1e-300);
    if (diff - closed_form).abs() > tol {
        return Err(Error::Invariant(format!("path phases give {diff}, closed form {closed_form}")));
    }
    Ok(diff)
}

/// Scalar gauge function with a gradient; the default gradient is a
/// fourth-order central difference.
pub trait GaugeFunction {
    fn value(&self, p: Vec3) -> f64;

    fn gradient(&self, p: Vec3) -> Vec3 {
        let scale = 1.0 + p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let h = 1e-3 * scale;
        let mut g = [0.0; 3];
        for a in 0..3 {
            let at = |s: f64| {
                let mut q = p;
                q[a] += s;
                self.value(q)
            };
            g[a] = (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
        }
        g
    }
}

impl GaugeFunction for PureGaugeField {
    fn value(&self, p: Vec3) -> f64 {
        self.branch_value(p)
    }

    fn gradient(&self, p: Vec3) -> Vec3 {
        PureGaugeField::gradient(self, p)
    }
}

/// Closed-loop integral of `∇χ` and whether `χ` was found to be multivalued.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeLoopCheck {
    pub integral: f64,
    pub multivalued: bool,
}

/// `∮ ∇χ · dl` around a closed path.
///
/// Each segment's quadrature is compared with `χ(end) − χ(start)`; a mismatch
/// means `χ` jumps inside the segment and the result is flagged.
pub fn gauge_addition_invariance(path: &PathPolyline, chi: &dyn GaugeFunction) -> Result<GaugeLoopCheck> {
    if !path.is_closed() {
        return Err(Error::Parameter("gauge invariance is checked on closed paths".into()));
    }
    let rule = GaussLegendre::new(12);
    let panels = 16;
    let mut integral = 0.0;
    let mut multivalued = false;
    for (a, b) in path.segments() {
        let t = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let mut seg = 0.0;
        for k in 0..panels {
            let lo = k as f64 / panels as f64;
            let hi = (k + 1) as f64 / panels as f64;
            for (u, w) in rule.mapped(lo, hi) {
                let g = chi.gradient([a[0] + u * t[0], a[1] + u * t[1], a[2] + u * t[2]]);
                seg += w * (g[0] * t[0] + g[1] * t[1] + g[2] * t[2]);
            }
        }
        let jump = chi.value(b) - chi.value(a);
        let scale = seg.abs().max(jump.abs()).max(1.0);
        if (seg - jump).abs() > 1e-6 * scale {
            multivalued = true;
        }
        integral += seg;
    }
    Ok(GaugeLoopCheck { integral, multivalued })
}

/// Geometry of the two-slit experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeParams {
    pub slit_separation: f64,
    pub wavelength: f64,
    pub screen_distance: f64,
}

impl Default for FringeParams {
    fn default() -> Self {
        Self { slit_separation: 1e-3, wavelength: 5e-7, screen_distance: 1.0 }
    }
}

impl FringeParams {
    fn validate(&self) -> Result<()> {
        if [self.slit_separation, self.wavelength, self.screen_distance].iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Parameter("slit separation, wavelength and screen distance must be positive".into()));
        }
        Ok(())
    }

    /// Angular wavenumber of the fringes on the screen, `2πd/(λL)`.
    pub fn fringe_wavenumber(&self) -> f64 {
        TAU * self.slit_separation / (self.wavelength * self.screen_distance)
    }

    /// Distance between adjacent maxima.
    pub fn fringe_spacing(&self) -> f64 {
        self.wavelength * self.screen_distance / self.slit_separation
    }
}

/// `I(x) ∝ cos²(πdx/(λL) + qΦ/2ħ)`, normalised to a maximum of 1.
pub fn fringe_pattern(params: &FringeParams, flux: f64, positions: &[f64], units: &Constants) -> Result<Vec<f64>> {
    params.validate()?;
    let k = 0.5 * params.fringe_wavenumber();
    let offset = units.q * flux / (2.0 * units.hbar);
    let row: Vec<f64> = positions.iter().map(|x| (k * x + offset).cos().powi(2)).collect();
    let peak = row.iter().copied().fold(0.0, f64::max);
    if peak > 0.0 {
        Ok(row.into_iter().map(|v| v / peak).collect())
    } else {
        Ok(row)
    }
}

/// Intensities over a flux sweep, one row per flux value.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub flux: Vec<f64>,
    pub positions: Vec<f64>,
    pub intensities: Vec<Vec<f64>>,
    pub params: FringeParams,
}

impl FringeScan {
    /// Noiseless scan over evenly spaced flux values.
    pub fn synthesize(params: FringeParams, flux: Vec<f64>, positions: Vec<f64>, units: &Constants) -> Result<Self> {
        let intensities =
            flux.iter().map(|&f| fringe_pattern(&params, f, &positions, units)).collect::<Result<Vec<_>>>()?;
        Ok(Self { flux, positions, intensities, params })
    }

    /// Adds Gaussian noise of standard deviation `sigma` (relative to the unit peak),
    /// clamps at zero and renormalises each row.
    pub fn with_noise(mut self, sigma: f64, seed: u64) -> Result<Self> {
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::Parameter(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for row in &mut self.intensities {
            for v in row.iter_mut() {
                *v = (*v + normal.sample(&mut rng)).max(0.0);
            }
            let peak = row.iter().copied().fold(0.0, f64::max);
            if peak > 0.0 {
                row.iter_mut().for_each(|v| *v /= peak);
            }
        }
        Ok(self)
    }

    pub fn to_csv(&self) -> String {
        use crate::fieldcore::io::{csv_to_string, Cell};
        let names: Vec<String> = std::iter::once("flux".to_string())
            .chain(self.positions.iter().map(|x| format!("x={}", crate::fieldcore::io::fmt_g17(*x))))
            .collect();
        let headers: Vec<&str> = names.iter().map(String::as_str).collect();
        let rows: Vec<Vec<Cell>> = self
            .flux
            .iter()
            .zip(&self.intensities)
            .map(|(f, row)| std::iter::once(Cell::Num(*f)).chain(row.iter().map(|v| Cell::Num(*v))).collect())
            .collect();
        csv_to_string(&headers, &rows)
    }
}

/// Fringe phase of one row: the least-squares fit `a + b cos Kx + c sin Kx`
/// gives `atan2(c, b)`, which equals `−qΦ/ħ` modulo 2π for the model above.
pub fn row_phase(positions: &[f64], row: &[f64], wavenumber: f64) -> Result<f64> {
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (x, y) in positions.iter().zip(row) {
        let basis = [1.0, (wavenumber * x).cos(), (wavenumber * x).sin()];
        for i in 0..3 {
            rhs[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let [_, b, c] = solve3(m, rhs)?;
    Ok(c.atan2(b))
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Result<[f64; 3]> {
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(&m);
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).powi(3);
    if !(d.abs() > 1e-12 * scale) {
        return Err(Error::Resolution("detector positions do not resolve a fringe".into()));
    }
    let mut out = [0.0; 3];
    for col in 0..3 {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        out[col] = det(&mc) / d;
    }
    Ok(out)
}

/// Fitted flux period and the quantities behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodFit {
    pub period: f64,
    pub slope: f64,
    pub periods_covered: f64,
    pub samples_per_period: f64,
}

/// Minimum number of periods a scan must span.
pub const MIN_PERIODS: f64 = 2.0;
/// Minimum number of flux samples per period.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 16.0;

/// Period of the fringe shift versus flux.
///
/// Row phases are unwrapped along the flux axis and fitted with a line; the
/// period is `2π / |slope|`. The fit is rejected when the scan spans fewer
/// than two periods or has fewer than 16 samples per period.
pub fn flux_period_fit(scan: &FringeScan) -> Result<PeriodFit> {
    scan.params.validate()?;
    let n = scan.flux.len();
    if n < 3 || scan.intensities.len() != n {
        return Err(Error::Resolution("a scan needs at least three flux rows".into()));
    }
    let k = scan.params.fringe_wavenumber();
    let mut phases = Vec::with_capacity(n);
    for row in &scan.intensities {
        phases.push(row_phase(&scan.positions, row, k)?);
    }
    for i in 1..n {
        let mut d = phases[i] - phases[i - 1];
        d -= TAU * (d / TAU).round();
        phases[i] = phases[i - 1] + d;
    }
    let mean_f = scan.flux.iter().sum::<f64>() / n as f64;
    let mean_p = phases.iter().sum::<f64>() / n as f64;
    let sxy: f64 = scan.flux.iter().zip(&phases).map(|(f, p)| (f - mean_f) * (p - mean_p)).sum();
    let sxx: f64 = scan.flux.iter().map(|f| (f - mean_f).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Resolution("flux values must not all coincide".into()));
    }
    let slope = sxy / sxx;
    if slope == 0.0 {
        return Err(Error::Resolution("fringes do not move with flux".into()));
    }
    let period = TAU / slope.abs();
    let span = scan.flux.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - scan.flux.iter().copied().fold(f64::INFINITY, f64::min);
    let periods_covered = span / period;
    let samples_per_period = (n - 1) as f64 / periods_covered;
    if periods_covered < MIN_PERIODS - 1e-9 {
        return Err(Error::Resolution(format!("scan covers {periods_covered:.3} periods, at least 2 required")));
    }
    if samples_per_period < MIN_SAMPLES_PER_PERIOD - 1e-9 {
        return Err(Error::Resolution(format!(
            "scan has {samples_per_period:.2} samples per period, at least 16 required"
        )));
    }
    Ok(PeriodFit { period, slope, periods_covered, samples_per_period })
}

/// Flux period estimated from a scan.
pub fn flux_period(scan: &FringeScan) -> Result<f64> {
    flux_period_fit(scan).map(|f| f.period)
}

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
