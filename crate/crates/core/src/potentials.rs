//! Coulomb-gauge potentials from fields, `φ = ∇·N[E]` and `A = ∇×N[B]`,
//! with the checks that tie them to the fields they came from.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldcore::convolve::convolve_channels;
use crate::fieldcore::field::{dot3, norm3, sub3, Vec3};
use crate::fieldcore::{
    curl, divergence, gradient, gradient_kernel_convolve, newtonian_convolve_vector, newtonian_convolve_vector_onto,
    Grid3, ScalarField, VectorField3,
};
use crate::helmholtz::support_touches_boundary;
use crate::units::Constants;

/// Non-fatal conditions attached to a computed potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Warning {
    /// Input support reaches the two-cell boundary window.
    SupportTouchesBoundary,
    /// `max|∇·B| h / max|B|` exceeded [`SOLENOIDAL_TOLERANCE`].
    NonSolenoidal { ratio: f64 },
    /// A point charge sits on this cell centre; the cell was skipped.
    ChargeOnCellCenter { cell: usize },
}

/// A potential together with any warnings raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    pub field: T,
    pub warnings: Vec<Warning>,
}

/// Largest accepted `max|∇·B| h / max|B|` before a field counts as non-solenoidal.
pub const SOLENOIDAL_TOLERANCE: f64 = 0.02;

/// Interior margin used for every residual in this module.
pub const INTERIOR_MARGIN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointCharge {
    pub position: Vec3,
    pub charge: f64,
}

/// `φ = ∇·N[E]`.
#[allow(non_snake_case)]
pub fn scalar_potential_from_E(e: &VectorField3) -> Result<Potential<ScalarField>> {
    scalar_potential_from_e(e)
}

pub fn scalar_potential_from_e(e: &VectorField3) -> Result<Potential<ScalarField>> {
    let field = divergence(&newtonian_convolve_vector(e)?)?;
    let mut warnings = Vec::new();
    if support_touches_boundary(e) {
        warnings.push(Warning::SupportTouchesBoundary);
    }
    Ok(Potential { field, warnings })
}

/// `φ = Σ q_i / (4πε₀|r − r_i|)` sampled on cell centres.
pub fn scalar_potential_from_charges(
    charges: &[PointCharge],
    grid: &Grid3,
    units: &Constants,
) -> Result<Potential<ScalarField>> {
    let tiny = 1e-12 * grid.min_spacing();
    let mut warnings = Vec::new();
    let mut values = vec![0.0; grid.len()];
    for (idx, v) in values.iter_mut().enumerate() {
        let p = grid.center_of(idx);
        for c in charges {
            let r = norm3(sub3(p, c.position));
            if r <= tiny {
                warnings.push(Warning::ChargeOnCellCenter { cell: idx });
                continue;
            }
            *v += c.charge / (4.0 * PI * units.eps0 * r);
        }
    }
    Ok(Potential { field: ScalarField::new(*grid, values)?, warnings })
}

/// Point-charge potential at one point.
pub fn potential_at(charges: &[PointCharge], p: Vec3, units: &Constants) -> f64 {
    charges.iter().map(|c| c.charge / (4.0 * PI * units.eps0 * norm3(sub3(p, c.position)))).sum()
}

/// `max|∇·B| h / max|B|` over interior cells.
pub fn solenoidal_ratio(b: &VectorField3) -> Result<f64> {
    let peak = b.max_norm();
    if peak == 0.0 {
        return Ok(0.0);
    }
    Ok(divergence(b)?.max_abs_interior(INTERIOR_MARGIN) * b.grid().min_spacing() / peak)
}

fn input_warnings(b: &VectorField3) -> Result<Vec<Warning>> {
    let mut warnings = Vec::new();
    let ratio = solenoidal_ratio(b)?;
    if ratio > SOLENOIDAL_TOLERANCE {
        warnings.push(Warning::NonSolenoidal { ratio });
    }
    if support_touches_boundary(b) {
        warnings.push(Warning::SupportTouchesBoundary);
    }
    Ok(warnings)
}

/// `A = ∇×N[B]`.
#[allow(non_snake_case)]
pub fn vector_potential_from_B(b: &VectorField3) -> Result<Potential<VectorField3>> {
    vector_potential_from_b(b)
}

pub fn vector_potential_from_b(b: &VectorField3) -> Result<Potential<VectorField3>> {
    let w = newtonian_convolve_vector(b)?;
    Ok(Potential { field: curl(&w)?, warnings: input_warnings(b)? })
}

/// `A = ∇×N[B]` evaluated on a lattice-aligned `target`, which may be a thin
/// slab of the source grid; cells away from the target faces equal the
/// full-grid result.
pub fn vector_potential_from_b_onto(b: &VectorField3, target: &Grid3) -> Result<Potential<VectorField3>> {
    target.require_min_dims(3)?;
    let w = newtonian_convolve_vector_onto(b, target)?;
    Ok(Potential { field: curl(&w)?, warnings: input_warnings(b)? })
}

/// Interior max-norm residuals of the defining relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationResiduals {
    /// `max|∇×A − B|` over both snapshots.
    pub curl_residual: f64,
    /// `curl_residual / max|B|`.
    pub curl_relative: f64,
    /// `max|−∇φ − (A_next − A_t)/dt − E_mid|`.
    pub electric_residual: f64,
    /// `electric_residual / max|E_mid|`.
    pub electric_relative: f64,
    pub interior_margin: usize,
}

fn relative(value: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        value / scale
    } else {
        value
    }
}

/// Checks `B = ∇×A` and `E = −∇φ − ∂A/∂t` for potentials built from two snapshots.
///
/// `A` is formed at both times, `φ` from the midpoint field
/// `E_mid = (E_t + E_next)/2`, and `∂A/∂t` by the forward difference.
pub fn verify_defining_relations(
    e_t: &VectorField3,
    b_t: &VectorField3,
    e_next: &VectorField3,
    b_next: &VectorField3,
    dt: f64,
) -> Result<RelationResiduals> {
    verify_defining_relations_with_margin(e_t, b_t, e_next, b_next, dt, INTERIOR_MARGIN)
}

/// [`verify_defining_relations`] with residuals taken over cells at least
/// `margin` cells from every face.
pub fn verify_defining_relations_with_margin(
    e_t: &VectorField3,
    b_t: &VectorField3,
    e_next: &VectorField3,
    b_next: &VectorField3,
    dt: f64,
    margin: usize,
) -> Result<RelationResiduals> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter("dt must be positive".into()));
    }
    let grid = e_t.grid();
    for f in [b_t, e_next, b_next] {
        grid.ensure_same(f.grid())?;
    }
    let a_t = vector_potential_from_b(b_t)?.field;
    let a_next = vector_potential_from_b(b_next)?.field;
    let e_mid = e_t.combine(0.5, e_next, 0.5)?;
    let phi = scalar_potential_from_e(&e_mid)?.field;

    let curl_t = curl(&a_t)?.sub(b_t)?.max_norm_interior(margin);
    let curl_next = curl(&a_next)?.sub(b_next)?.max_norm_interior(margin);
    let curl_residual = curl_t.max(curl_next);
    let b_scale = b_t.max_norm().max(b_next.max_norm());

    let da_dt = a_next.combine(1.0 / dt, &a_t, -1.0 / dt)?;
    let grad_phi = gradient(&phi)?;
    let electric = grad_phi.combine(-1.0, &da_dt, -1.0)?.sub(&e_mid)?;
    let electric_residual = electric.max_norm_interior(margin);

    Ok(RelationResiduals {
        curl_residual,
        curl_relative: relative(curl_residual, b_scale),
        electric_residual,
        electric_relative: relative(electric_residual, e_mid.max_norm()),
        interior_margin: margin,
    })
}

/// Largest grid accepted by [`a_squared_identity`].
pub const A_SQUARED_MAX_CELLS: usize = 32 * 32 * 32;

/// Default relative tolerance for the `∫A²` balance.
pub const A_SQUARED_TOLERANCE: f64 = 0.03;

/// Terms of `∫A² = ∫∫ B·B′/4π|r−r′| + ∫|∇χ|²` and the cross integral that must vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ASquaredReport {
    /// `Σ |A|² vol` with `A = ∇×N[B] + ∇χ`.
    pub lhs: f64,
    /// `Σ B · N[B] vol`.
    pub rhs_bb: f64,
    /// `Σ |∇χ|² vol`.
    pub gauge_term: f64,
    /// `−Σ_r Σ_ij M_ij M_ji vol` with `M_ij = Σ_{r′} B_i(r′) ∂_j G(r − r′) vol`.
    pub i2_cross: f64,
    pub grid: Grid3,
    pub tolerance: f64,
    pub warnings: Vec<Warning>,
}

impl ASquaredReport {
    /// `(lhs − rhs_bb − gauge_term) / lhs`.
    pub fn balance_error(&self) -> f64 {
        relative(self.lhs - self.rhs_bb - self.gauge_term, self.lhs)
    }

    /// `(lhs − rhs_bb) / rhs_bb`.
    pub fn coulomb_error(&self) -> f64 {
        relative(self.lhs - self.rhs_bb, self.rhs_bb)
    }

    /// `i2_cross / rhs_bb`.
    pub fn cross_ratio(&self) -> f64 {
        relative(self.i2_cross, self.rhs_bb)
    }

    /// The input was flagged non-solenoidal, so the identity does not apply.
    pub fn inconclusive(&self) -> bool {
        self.warnings.iter().any(|w| matches!(w, Warning::NonSolenoidal { .. }))
    }
}

/// Evaluates every term of the `∫A²` identity for `B` and an optional gauge function.
pub fn a_squared_identity(b: &VectorField3, chi: Option<&ScalarField>) -> Result<ASquaredReport> {
    let grid = *b.grid();
    if grid.len() > A_SQUARED_MAX_CELLS {
        return Err(Error::SizeGuard { cells: grid.len(), limit: A_SQUARED_MAX_CELLS });
    }
    let vol = grid.cell_volume();
    let w = newtonian_convolve_vector(b)?;
    let coulomb = curl(&w)?;
    let rhs_bb = b.values().iter().zip(w.values()).map(|(x, y)| dot3(*x, *y)).sum::<f64>() * vol;

    let (a, gauge_term) = match chi {
        Some(chi) => {
            grid.ensure_same(chi.grid())?;
            let g = gradient(chi)?;
            (coulomb.add(&g)?, g.energy())
        }
        None => (coulomb, 0.0),
    };
    let lhs = a.energy();

    let m = gradient_kernel_convolve(b);
    let i2_cross = -m
        .iter()
        .map(|mm| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += mm[i][j] * mm[j][i];
                }
            }
            s
        })
        .sum::<f64>()
        * vol;

    Ok(ASquaredReport {
        lhs,
        rhs_bb,
        gauge_term,
        i2_cross,
        grid,
        tolerance: A_SQUARED_TOLERANCE,
        warnings: input_warnings(b)?,
    })
}

/// Levi-Civita symbol on indices 0..3.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Per-cell antisymmetric tensor `F^{μν}`, index 0 temporal.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTensor {
    grid: Grid3,
    values: Vec<[[f64; 4]; 4]>,
}

impl FieldTensor {
    /// Builds a tensor from raw entries, rejecting anything not exactly antisymmetric.
    pub fn from_entries(grid: Grid3, values: Vec<[[f64; 4]; 4]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("tensor count does not match the grid".into()));
        }
        let t = Self { grid, values };
        t.check_antisymmetry()?;
        Ok(t)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn values(&self) -> &[[[f64; 4]; 4]] {
        &self.values
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        for (idx, f) in self.values.iter().enumerate() {
            for mu in 0..4 {
                for nu in 0..4 {
                    if f[mu][nu] != -f[nu][mu] {
                        return Err(Error::Invariant(format!(
                            "F^{mu}{nu} = {} but F^{nu}{mu} = {} at cell {idx}",
                            f[mu][nu], f[nu][mu]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Recovers `(E, B)` with `E^i = c F^{i0}` and `B^j = ½ ε^{kji} F^{ki}`.
    pub fn to_fields(&self, units: &Constants) -> Result<(VectorField3, VectorField3)> {
        let mut e = Vec::with_capacity(self.values.len());
        let mut b = Vec::with_capacity(self.values.len());
        for f in &self.values {
            e.push([0, 1, 2].map(|i| units.c * f[i + 1][0]));
            let mut bj = [0.0; 3];
            for (j, out) in bj.iter_mut().enumerate() {
                for k in 0..3 {
                    for i in 0..3 {
                        *out += 0.5 * levi_civita(k, j, i) * f[k + 1][i + 1];
                    }
                }
            }
            b.push(bj);
        }
        Ok((VectorField3::new(self.grid, e)?, VectorField3::new(self.grid, b)?))
    }
}

/// `F^{i0} = E^i/c`, `F^{0i} = −E^i/c`, `F^{ki} = ε^{kji} B^j`.
pub fn field_tensor(e: &VectorField3, b: &VectorField3, units: &Constants) -> Result<FieldTensor> {
    e.grid().ensure_same(b.grid())?;
    let values = e
        .values()
        .iter()
        .zip(b.values())
        .map(|(ev, bv)| {
            let mut f = [[0.0; 4]; 4];
            for i in 0..3 {
                f[i + 1][0] = ev[i] / units.c;
                f[0][i + 1] = -f[i + 1][0];
            }
            for k in 0..3 {
                for i in 0..3 {
                    if k == i {
                        continue;
                    }
                    let mut s = 0.0;
                    for (j, bj) in bv.iter().enumerate() {
                        let eps = levi_civita(k, j, i);
                        if eps != 0.0 {
                            s += eps * bj;
                        }
                    }
                    f[k + 1][i + 1] = s;
                }
            }
            f
        })
        .collect();
    FieldTensor::from_entries(*e.grid(), values)
}

/// Upper-triangle index pairs in storage order.
const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Equal-time four-potential `A^μ = Σ_ν ∂_ν N[F^{νμ}]` over spatial `ν`.
///
/// The six independent entries are convolved together and the rest filled
/// by antisymmetry; the temporal `ν = 0` term drops out. Returns `(A⁰, A)`
/// with `A⁰ = φ/c`.
pub fn four_potential_equal_time(f: &FieldTensor) -> Result<(ScalarField, VectorField3)> {
    f.check_antisymmetry()?;
    let grid = *f.grid();
    grid.require_min_dims(3)?;
    let upper: Vec<[f64; 6]> = f.values().iter().map(|t| UPPER.map(|(m, n)| t[m][n])).collect();
    let conv = convolve_channels(&grid, &upper, &grid)?;
    let mut w = vec![vec![vec![0.0; grid.len()]; 4]; 4];
    for (cell, entries) in conv.iter().enumerate() {
        for (slot, &(m, n)) in UPPER.iter().enumerate() {
            w[m][n][cell] = entries[slot];
            w[n][m][cell] = -entries[slot];
        }
    }
    let mut a = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for (mu, out) in a.iter_mut().enumerate() {
        let mut terms = Vec::new();
        for nu in 1..4 {
            if nu == mu {
                continue;
            }
            terms.push(crate::fieldcore::ops::partial(&grid, &w[nu][mu], nu - 1));
        }
        for (cell, v) in out.iter_mut().enumerate() {
            let mut s = terms[0][cell];
            for t in &terms[1..] {
                s += t[cell];
            }
            *v = s;
        }
    }
    let [a0, ax, ay, az] = a;
    Ok((ScalarField::new(grid, a0)?, VectorField3::from_components(grid, &ax, &ay, &az)?))
}
