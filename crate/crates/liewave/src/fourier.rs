//! Group Fourier transform: forward and inverse transforms between Haar
//! quadrature samples and matrix-valued coefficients, plus the Plancherel
//! norm `(sum_xi d_xi |fhat(xi)|_HS^2)^(1/2)`.
//!
//! Coefficients follow the convention `fhat(xi) = integral f(x) xi(x)^* dx`,
//! so for `f = xi_{mn}` the (n, m) entry of `fhat(xi)` equals `1/d_xi` and
//! row `j` of a coefficient matrix carries the sub-Laplacian eigenvalue
//! `l(l+1) - (j - l)^2`.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group_harmonics::{
    apply_to_wigner_entry, haar_quadrature, torus_character, wigner_d_matrix, wigner_matrix,
    EulerAngles, GridAxes, GroupConfig, GroupPoint, InvariantOp, QuadratureGrid, RepIndex,
};
use crate::numeric::KahanSum;
use crate::{Error, Result};

/// Sparse spectral state: one square matrix per representation up to the
/// band limit. Entries are kept in a sorted map so every reduction over them
/// is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    pub group: GroupConfig,
    pub lmax: u32,
    pub entries: BTreeMap<RepIndex, Array2<Complex64>>,
}

impl FourierCoefficients {
    pub fn zeros(group: GroupConfig, lmax: u32) -> Self {
        let entries = group
            .reps(lmax)
            .into_iter()
            .map(|rep| {
                let d = rep.dim();
                (rep, Array2::zeros((d, d)))
            })
            .collect();
        Self {
            group,
            lmax,
            entries,
        }
    }

    pub fn set(&mut self, rep: RepIndex, matrix: Array2<Complex64>) -> Result<()> {
        let d = rep.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::GridMismatch {
                expected: d,
                got: matrix.nrows(),
            });
        }
        if let RepIndex::Su2 { two_ell } = rep {
            if two_ell > 2 * self.lmax {
                return Err(Error::BandLimit {
                    context: "coefficient beyond the band limit",
                    supported: 2 * self.lmax,
                    requested: two_ell,
                });
            }
        }
        self.entries.insert(rep, matrix);
        Ok(())
    }

    pub fn get(&self, rep: &RepIndex) -> Option<&Array2<Complex64>> {
        self.entries.get(rep)
    }

    /// Linear combination self + c * other.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Self {
        let mut out = self.clone();
        for (rep, m) in &other.entries {
            let scaled = m.mapv(|z| c * z);
            out.entries
                .entry(rep.clone())
                .and_modify(|e| *e = &*e + &scaled)
                .or_insert(scaled);
        }
        out
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            group: self.group.clone(),
            lmax: self.lmax,
            entries: self
                .entries
                .iter()
                .map(|(r, m)| (r.clone(), m.mapv(|z| c * z)))
                .collect(),
        }
    }

    /// Largest entry-wise difference against another coefficient set.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (rep, m) in &self.entries {
            match other.entries.get(rep) {
                Some(o) => {
                    for (a, b) in m.iter().zip(o.iter()) {
                        worst = worst.max((a - b).norm());
                    }
                }
                None => {
                    for a in m.iter() {
                        worst = worst.max(a.norm());
                    }
                }
            }
        }
        for (rep, o) in &other.entries {
            if !self.entries.contains_key(rep) {
                for b in o.iter() {
                    worst = worst.max(b.norm());
                }
            }
        }
        worst
    }
}

/// Function values on a Haar quadrature grid.
#[derive(Clone, Debug)]
pub struct FunctionSamples {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<Complex64>,
}

impl FunctionSamples {
    pub fn from_fn<F: FnMut(&GroupPoint) -> Complex64>(
        grid: Arc<QuadratureGrid>,
        mut f: F,
    ) -> Self {
        let values = grid.nodes.iter().map(|p| f(p)).collect();
        Self { grid, values }
    }

    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.nodes.len() {
            return Err(Error::GridMismatch {
                expected: grid.nodes.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Quadrature L^2 norm, the sampled side of the Plancherel identity.
    pub fn l2_norm(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (v, w) in self.values.iter().zip(&self.grid.weights) {
            acc.add(w * v.norm_sqr());
        }
        acc.value().max(0.0).sqrt()
    }
}

fn su2_axes(grid: &QuadratureGrid) -> (&[f64], &[f64], &[f64], &[f64]) {
    match &grid.axes {
        GridAxes::Su2 {
            phi,
            psi,
            theta,
            theta_w,
        } => (phi, psi, theta, theta_w),
        GridAxes::Torus { .. } => unreachable!("SU(2) path on a torus grid"),
    }
}

/// Phase table exp(i sign (t/2) angle) for half-integer frequencies
/// t = -two_lmax ..= two_lmax, indexed [t + two_lmax][angle index].
fn phase_table(angles: &[f64], two_lmax: i64, sign: f64) -> Vec<Vec<Complex64>> {
    (-two_lmax..=two_lmax)
        .map(|t| {
            angles
                .iter()
                .map(|&x| Complex64::from_polar(1.0, sign * t as f64 / 2.0 * x))
                .collect()
        })
        .collect()
}

/// Forward transform `fhat(xi) = integral f(x) xi(x)^* dx` over the grid.
///
/// The grid must have been built for at least the requested band limit; for
/// band-limited input the coefficients are then exact to round-off. The sums
/// factor over the Euler-angle axes, so the cost is a small multiple of the
/// node count rather than nodes times matrix entries.
pub fn forward_transform(f: &FunctionSamples, lmax: u32) -> Result<FourierCoefficients> {
    let grid = &*f.grid;
    if grid.lmax < lmax {
        return Err(Error::BandLimit {
            context: "grid too coarse for the requested transform",
            supported: grid.lmax,
            requested: lmax,
        });
    }
    if f.values.len() != grid.nodes.len() {
        return Err(Error::GridMismatch {
            expected: grid.nodes.len(),
            got: f.values.len(),
        });
    }
    match &grid.group {
        GroupConfig::Su2 { .. } => {
            let (phi, psi, theta, theta_w) = su2_axes(grid);
            let (n_phi, n_psi, n_theta) = (phi.len(), psi.len(), theta.len());
            let two_lmax = 2 * lmax as i64;
            let nt = (2 * two_lmax + 1) as usize;
            let psi_phases = phase_table(psi, two_lmax, 1.0);
            let phi_phases = phase_table(phi, two_lmax, 1.0);

            // Stage 1: psi sums per (theta, phi, tn).
            let mut s1 = vec![Complex64::default(); n_theta * n_phi * nt];
            for c in 0..n_theta {
                for a in 0..n_phi {
                    let base = (c * n_phi + a) * n_psi;
                    for (tni, phases) in psi_phases.iter().enumerate() {
                        let mut acc = Complex64::default();
                        for b in 0..n_psi {
                            acc += f.values[base + b] * phases[b];
                        }
                        s1[(c * n_phi + a) * nt + tni] = acc;
                    }
                }
            }
            // Stage 2: phi sums per (theta, tm, tn).
            let mut s2 = vec![Complex64::default(); n_theta * nt * nt];
            for c in 0..n_theta {
                for (tmi, phases) in phi_phases.iter().enumerate() {
                    for tni in 0..nt {
                        let mut acc = Complex64::default();
                        for a in 0..n_phi {
                            acc += s1[(c * n_phi + a) * nt + tni] * phases[a];
                        }
                        s2[(c * nt + tmi) * nt + tni] = acc;
                    }
                }
            }
            // Stage 3: theta quadrature against little-d entries, per rep.
            let base_w = 1.0 / (2.0 * n_phi as f64 * n_psi as f64);
            let reps = grid.group.reps(lmax);
            let computed: Vec<(RepIndex, Array2<Complex64>)> = reps
                .into_par_iter()
                .map(|rep| {
                    let RepIndex::Su2 { two_ell } = rep else {
                        unreachable!()
                    };
                    let d = two_ell as usize + 1;
                    let mut m = Array2::<Complex64>::zeros((d, d));
                    for c in 0..n_theta {
                        let dmat = wigner_d_matrix(two_ell, theta[c]);
                        let w = theta_w[c] * base_w;
                        for p in 0..d {
                            // Row p of fhat pairs with column p (frequency
                            // n_p) of the Wigner entries, column q with the
                            // entry row (frequency m_q).
                            let tni = (2 * p as i64 - two_ell as i64 + two_lmax) as usize;
                            for q in 0..d {
                                let tmi = (2 * q as i64 - two_ell as i64 + two_lmax) as usize;
                                m[(p, q)] += w * dmat[(q, p)] * s2[(c * nt + tmi) * nt + tni];
                            }
                        }
                    }
                    (rep, m)
                })
                .collect();
            let mut out = FourierCoefficients {
                group: grid.group.clone(),
                lmax,
                entries: BTreeMap::new(),
            };
            out.entries.extend(computed);
            Ok(out)
        }
        GroupConfig::Torus { .. } => {
            let reps = grid.group.reps(lmax);
            let computed: Vec<(RepIndex, Array2<Complex64>)> = reps
                .into_par_iter()
                .map(|rep| {
                    let RepIndex::Torus { k } = &rep else {
                        unreachable!()
                    };
                    let mut acc = Complex64::default();
                    for (n, w) in grid.weights.iter().enumerate() {
                        let GroupPoint::Torus(x) = &grid.nodes[n] else {
                            unreachable!()
                        };
                        acc += *w * f.values[n] * torus_character(k, x).conj();
                    }
                    (rep, Array2::from_elem((1, 1), acc))
                })
                .collect();
            let mut out = FourierCoefficients {
                group: grid.group.clone(),
                lmax,
                entries: BTreeMap::new(),
            };
            out.entries.extend(computed);
            Ok(out)
        }
    }
}

/// Evaluate the finite Fourier series at arbitrary group points:
/// `f(x) = sum_xi d_xi Tr(xi(x) fhat(xi))`.
pub fn inverse_transform(coeffs: &FourierCoefficients, points: &[GroupPoint]) -> Vec<Complex64> {
    points
        .iter()
        .map(|point| {
            let mut acc = Complex64::default();
            for (rep, fhat) in &coeffs.entries {
                match (rep, point) {
                    (RepIndex::Su2 { .. }, GroupPoint::Su2(g)) => {
                        let u = wigner_matrix(rep, *g).expect("su2 rep");
                        let d = rep.dim();
                        let mut tr = Complex64::default();
                        for r in 0..d {
                            for s in 0..d {
                                tr += u[(r, s)] * fhat[(s, r)];
                            }
                        }
                        acc += tr * d as f64;
                    }
                    (RepIndex::Torus { k }, GroupPoint::Torus(x)) => {
                        acc += torus_character(k, x) * fhat[(0, 0)];
                    }
                    _ => unreachable!("mixed group backends"),
                }
            }
            acc
        })
        .collect()
}

/// Inverse transform on a full quadrature grid, factored over the
/// Euler-angle axes — the fast path used by round trips and Plancherel
/// checks.
pub fn inverse_on_grid(
    coeffs: &FourierCoefficients,
    grid: Arc<QuadratureGrid>,
) -> Result<FunctionSamples> {
    if grid.group != coeffs.group {
        return Err(Error::GridMismatch {
            expected: grid.nodes.len(),
            got: 0,
        });
    }
    match &grid.axes {
        GridAxes::Su2 { .. } => {
            let (phi, psi, theta, _) = su2_axes(&grid);
            let (n_phi, n_psi, n_theta) = (phi.len(), psi.len(), theta.len());
            let two_lmax = 2 * grid.lmax.max(coeffs.lmax) as i64;
            let nt = (2 * two_lmax + 1) as usize;
            // Stage 1: d-weighted coefficients per (theta, tm, tn).
            let mut c1 = vec![Complex64::default(); n_theta * nt * nt];
            for (rep, fhat) in &coeffs.entries {
                let RepIndex::Su2 { two_ell } = rep else {
                    unreachable!()
                };
                let d = rep.dim();
                for c in 0..n_theta {
                    let dmat = wigner_d_matrix(*two_ell, theta[c]);
                    for r in 0..d {
                        let tmi = (2 * r as i64 - *two_ell as i64 + two_lmax) as usize;
                        for s in 0..d {
                            let tni = (2 * s as i64 - *two_ell as i64 + two_lmax) as usize;
                            c1[(c * nt + tmi) * nt + tni] +=
                                d as f64 * dmat[(r, s)] * fhat[(s, r)];
                        }
                    }
                }
            }
            // Stage 2: psi phases.
            let psi_phases = phase_table(psi, two_lmax, -1.0);
            let phi_phases = phase_table(phi, two_lmax, -1.0);
            let mut c2 = vec![Complex64::default(); n_theta * nt * n_psi];
            for c in 0..n_theta {
                for tmi in 0..nt {
                    for b in 0..n_psi {
                        let mut acc = Complex64::default();
                        for (tni, phases) in psi_phases.iter().enumerate() {
                            acc += c1[(c * nt + tmi) * nt + tni] * phases[b];
                        }
                        c2[(c * nt + tmi) * n_psi + b] = acc;
                    }
                }
            }
            // Stage 3: phi phases, written out in node order.
            let mut values = vec![Complex64::default(); grid.nodes.len()];
            for c in 0..n_theta {
                for a in 0..n_phi {
                    for b in 0..n_psi {
                        let mut acc = Complex64::default();
                        for (tmi, phases) in phi_phases.iter().enumerate() {
                            acc += c2[(c * nt + tmi) * n_psi + b] * phases[a];
                        }
                        values[(c * n_phi + a) * n_psi + b] = acc;
                    }
                }
            }
            FunctionSamples::new(grid, values)
        }
        GridAxes::Torus { .. } => {
            let values = inverse_transform(coeffs, &grid.nodes);
            FunctionSamples::new(grid, values)
        }
    }
}

/// Plancherel norm `(sum_xi d_xi |fhat(xi)|_HS^2)^(1/2)`, accumulated with
/// compensated summation in canonical representation order.
pub fn plancherel_norm(coeffs: &FourierCoefficients) -> f64 {
    let mut acc = KahanSum::new();
    for (rep, m) in &coeffs.entries {
        let d = rep.dim() as f64;
        for z in m.iter() {
            acc.add(d * z.norm_sqr());
        }
    }
    acc.value().max(0.0).sqrt()
}

/// Apply an invariant operator to a band-limited function given by its
/// coefficients, evaluated pointwise through exact differentiation of the
/// Wigner entries: `(Tf)(x) = sum_xi d_xi sum_{mn} (T xi_{mn})(x) fhat_{nm}`.
pub fn apply_invariant_op_pointwise(
    op: InvariantOp,
    coeffs: &FourierCoefficients,
    points: &[EulerAngles],
) -> Result<Vec<Complex64>> {
    points
        .iter()
        .map(|&g| {
            let mut acc = Complex64::default();
            for (rep, fhat) in &coeffs.entries {
                let RepIndex::Su2 { two_ell } = rep else {
                    return Err(Error::NotSu2Backend);
                };
                let d = rep.dim();
                for r in 0..d {
                    for s in 0..d {
                        let tw = apply_to_wigner_entry(op, *two_ell, r, s, g)?;
                        acc += d as f64 * tw * fhat[(s, r)];
                    }
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Independent standard complex Gaussian entries on every representation up
/// to the band limit.
pub fn random_band_limited<R: Rng>(
    group: &GroupConfig,
    lmax: u32,
    rng: &mut R,
) -> FourierCoefficients {
    use rand_distr::StandardNormal;
    let mut out = FourierCoefficients::zeros(group.clone(), lmax);
    for m in out.entries.values_mut() {
        for z in m.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex64::new(re, im);
        }
    }
    out
}

/// Build the Haar quadrature behind an `Arc`; every transform consumer wants
/// it shared.
pub fn shared_grid(group: &GroupConfig, lmax: u32) -> Arc<QuadratureGrid> {
    Arc::new(haar_quadrature(group, lmax))
}

// ---------------------------------------------------------------------------
// JSON serialization: list of records {two_ell | k, matrix as [re, im] pairs}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CoeffRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    two_ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<Vec<i64>>,
    /// Row-major complex matrix as nested [re, im] pairs.
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct CoeffDocument {
    group: GroupConfig,
    lmax: u32,
    records: Vec<CoeffRecord>,
}

pub fn coefficients_to_json(coeffs: &FourierCoefficients) -> serde_json::Value {
    let records = coeffs
        .entries
        .iter()
        .map(|(rep, m)| {
            let matrix = (0..m.nrows())
                .map(|r| {
                    (0..m.ncols())
                        .map(|c| [m[(r, c)].re, m[(r, c)].im])
                        .collect()
                })
                .collect();
            match rep {
                RepIndex::Su2 { two_ell } => CoeffRecord {
                    two_ell: Some(*two_ell),
                    k: None,
                    matrix,
                },
                RepIndex::Torus { k } => CoeffRecord {
                    two_ell: None,
                    k: Some(k.clone()),
                    matrix,
                },
            }
        })
        .collect();
    serde_json::to_value(CoeffDocument {
        group: coeffs.group.clone(),
        lmax: coeffs.lmax,
        records,
    })
    .expect("coefficient document serializes")
}

pub fn coefficients_from_json(value: &serde_json::Value) -> Result<FourierCoefficients> {
    let doc: CoeffDocument = serde_json::from_value(value.clone())?;
    let mut out = FourierCoefficients {
        group: doc.group,
        lmax: doc.lmax,
        entries: BTreeMap::new(),
    };
    for rec in doc.records {
        let rep = match (rec.two_ell, rec.k) {
            (Some(two_ell), None) => RepIndex::Su2 { two_ell },
            (None, Some(k)) => RepIndex::Torus { k },
            _ => {
                return Err(Error::Serde(serde::de::Error::custom(
                    "record must carry exactly one of two_ell or k",
                )))
            }
        };
        let d = rep.dim();
        if rec.matrix.len() != d {
            return Err(Error::GridMismatch {
                expected: d,
                got: rec.matrix.len(),
            });
        }
        let mut m = Array2::zeros((d, d));
        for (r, row) in rec.matrix.iter().enumerate() {
            if row.len() != d {
                return Err(Error::GridMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            for (c, z) in row.iter().enumerate() {
                m[(r, c)] = Complex64::new(z[0], z[1]);
            }
        }
        out.entries.insert(rep, m);
    }
    Ok(out)
}
