//! Representation theory backends.
//!
//! SU(2) is handled through Wigner matrices in z-y-z Euler angles,
//! `D^l_{mn}(phi, theta, psi) = exp(-i m phi) d^l_{mn}(theta) exp(-i n psi)`,
//! with rows and columns in increasing-m order (`m = row - l`). The little-d
//! entries are kept as exact polynomials in `cos(theta/2)`, `sin(theta/2)`,
//! which makes second-order invariant differential operators applicable
//! entry-wise without finite differences. The torus backend is the classical
//! character basis `exp(i k.x)`.
//!
//! Under this convention the sub-Laplacian `X^2 + Y^2` acts on a Wigner entry
//! as multiplication by `-(l(l+1) - n^2)` where `n` is the *column* m-value;
//! equivalently, row `j` of a Fourier coefficient matrix carries the
//! eigenvalue `l(l+1) - mu_j^2`, `mu_j = j - l`. The unit tests pin this down
//! against the Euler-angle operator so the tabulated symbols elsewhere in the
//! crate cannot silently drift from the convention.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::{gauss_legendre, ln_factorial};
use crate::{Error, Result};

const TAU: f64 = 2.0 * PI;

/// Angles below this distance from the poles are rejected by the pointwise
/// differential operators (the Euler chart degenerates at sin(theta) = 0).
pub const POLAR_GUARD: f64 = 1e-9;

/// z-y-z Euler angles. The almost injective chart of SU(2) uses
/// `phi in [0, 2pi)`, `theta in (0, pi)`, `psi in [-2pi, 2pi)`; `theta` is
/// kept strictly interior by `new` to stay clear of the coordinate
/// singularity, while `identity` uses the boundary representative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub fn new(phi: f64, theta: f64, psi: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::AngleRange(format!("phi = {phi} not in [0, 2pi)")));
        }
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::AngleRange(format!("theta = {theta} not in (0, pi)")));
        }
        if !(-TAU..TAU).contains(&psi) {
            return Err(Error::AngleRange(format!("psi = {psi} not in [-2pi, 2pi)")));
        }
        Ok(Self { phi, theta, psi })
    }

    /// The identity element, represented on the chart boundary theta = 0.
    pub fn identity() -> Self {
        Self {
            phi: 0.0,
            theta: 0.0,
            psi: 0.0,
        }
    }

    /// Haar-distributed sample, kept away from the poles.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let phi = rng.gen_range(0.0..TAU);
        let psi = rng.gen_range(-TAU..TAU);
        let theta = loop {
            let c: f64 = rng.gen_range(-1.0..1.0);
            let theta = c.acos();
            if theta > 1e-3 && theta < PI - 1e-3 {
                break theta;
            }
        };
        Self { phi, theta, psi }
    }

    /// Group product in Euler angles, computed through the fundamental
    /// (spin-1/2) representation. The result evaluates identically under
    /// every `wigner_matrix`.
    pub fn compose(self, other: EulerAngles) -> EulerAngles {
        let u = fundamental(self);
        let v = fundamental(other);
        // w = u * v, still of the SU(2) shape [[a, b], [-conj b, conj a]]
        // in the increasing-m basis (a = w00, b = w01).
        let a = u[0] * v[0] + u[1] * v[2];
        let b = u[0] * v[1] + u[1] * v[3];
        angles_from_fundamental(a, b)
    }
}

/// Spin-1/2 Wigner matrix as a flat [w00, w01, w10, w11] array,
/// increasing-m basis.
fn fundamental(g: EulerAngles) -> [Complex64; 4] {
    let c = (g.theta / 2.0).cos();
    let s = (g.theta / 2.0).sin();
    let ep = Complex64::from_polar(1.0, (g.phi + g.psi) / 2.0);
    let em = Complex64::from_polar(1.0, (g.phi - g.psi) / 2.0);
    [ep * c, em * s, -em.conj() * s, ep.conj() * c]
}

/// Recover Euler angles from the first row (a, b) of a spin-1/2 matrix.
/// The half-sums (phi+psi)/2 and (phi-psi)/2 are each fixed mod 2pi, which
/// determines all Wigner matrices; representatives are normalised into the
/// chart ranges.
fn angles_from_fundamental(a: Complex64, b: Complex64) -> EulerAngles {
    let theta = 2.0 * b.norm().atan2(a.norm());
    let half_sum = if a.norm() > 1e-14 { a.arg() } else { 0.0 };
    let half_diff = if b.norm() > 1e-14 { b.arg() } else { 0.0 };
    let mut phi = half_sum + half_diff;
    let mut psi = half_sum - half_diff;
    if phi < 0.0 {
        phi += TAU;
        psi -= TAU;
    } else if phi >= TAU {
        phi -= TAU;
        psi += TAU;
    }
    while psi < -TAU {
        psi += 2.0 * TAU;
    }
    while psi >= TAU {
        psi -= 2.0 * TAU;
    }
    EulerAngles { phi, theta, psi }
}

/// A point of the unitary dual: spin `l = two_ell / 2` for SU(2), a frequency
/// vector for the torus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RepIndex {
    Su2 { two_ell: u32 },
    Torus { k: Vec<i64> },
}

impl RepIndex {
    pub fn su2(two_ell: u32) -> Self {
        RepIndex::Su2 { two_ell }
    }

    pub fn torus1(k: i64) -> Self {
        RepIndex::Torus { k: vec![k] }
    }

    /// Matrix dimension d_xi of the representation.
    pub fn dim(&self) -> usize {
        match self {
            RepIndex::Su2 { two_ell } => *two_ell as usize + 1,
            RepIndex::Torus { .. } => 1,
        }
    }

    pub fn ell(&self) -> f64 {
        match self {
            RepIndex::Su2 { two_ell } => *two_ell as f64 / 2.0,
            RepIndex::Torus { .. } => 0.0,
        }
    }

    /// Eigenvalue |xi|^2 of minus the Laplacian on the entries of this
    /// representation: l(l+1) for SU(2), |k|^2 for the torus.
    pub fn laplacian_eigenvalue(&self) -> f64 {
        match self {
            RepIndex::Su2 { two_ell } => {
                let l = *two_ell as f64 / 2.0;
                l * (l + 1.0)
            }
            RepIndex::Torus { k } => k.iter().map(|&ki| (ki * ki) as f64).sum(),
        }
    }

    /// <xi> = (1 + |xi|^2)^(1/2).
    pub fn jap(&self) -> f64 {
        (1.0 + self.laplacian_eigenvalue()).sqrt()
    }

    /// m-value carried by a row/column index, increasing order.
    pub fn m_value(&self, index: usize) -> f64 {
        match self {
            RepIndex::Su2 { two_ell } => index as f64 - *two_ell as f64 / 2.0,
            RepIndex::Torus { .. } => 0.0,
        }
    }
}

/// Which group backend a computation runs on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupConfig {
    Su2 { half_integers: bool },
    Torus { dim: usize },
}

impl GroupConfig {
    pub fn su2() -> Self {
        GroupConfig::Su2 {
            half_integers: true,
        }
    }

    pub fn torus() -> Self {
        GroupConfig::Torus { dim: 1 }
    }

    /// All representations up to the band limit, in canonical order.
    pub fn reps(&self, lmax: u32) -> Vec<RepIndex> {
        match self {
            GroupConfig::Su2 { half_integers } => {
                let step = if *half_integers { 1 } else { 2 };
                (0..=2 * lmax)
                    .step_by(step)
                    .map(|two_ell| RepIndex::Su2 { two_ell })
                    .collect()
            }
            GroupConfig::Torus { dim } => {
                let range = -(lmax as i64)..=lmax as i64;
                let mut out: Vec<RepIndex> = vec![RepIndex::Torus { k: vec![] }];
                for _ in 0..*dim {
                    out = out
                        .into_iter()
                        .flat_map(|rep| {
                            let RepIndex::Torus { k } = rep else {
                                unreachable!()
                            };
                            range.clone().map(move |ki| {
                                let mut k = k.clone();
                                k.push(ki);
                                RepIndex::Torus { k }
                            })
                        })
                        .collect();
                }
                out.sort();
                out
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Wigner little-d entries as half-angle trigonometric polynomials
// ---------------------------------------------------------------------------

/// Polynomial in c = cos(theta/2), s = sin(theta/2): sum of coeff * c^a * s^b.
/// Closed under d/d(theta), which is what makes differentiation of Wigner
/// entries exact.
#[derive(Clone, Debug)]
pub(crate) struct HalfAnglePoly {
    terms: Vec<(f64, u32, u32)>,
}

impl HalfAnglePoly {
    /// The Wigner little-d entry d^l_{m n}(theta) for row = m + l,
    /// col = n + l (increasing-m order), via the factorial sum.
    pub(crate) fn d_entry(two_ell: u32, row: usize, col: usize) -> Self {
        let tl = two_ell as usize;
        assert!(row <= tl && col <= tl);
        let t_min = row.saturating_sub(col);
        let t_max = row.min(tl - col);
        let ln_num = 0.5
            * (ln_factorial(row)
                + ln_factorial(tl - row)
                + ln_factorial(col)
                + ln_factorial(tl - col));
        let mut terms = Vec::with_capacity(t_max + 1 - t_min);
        for t in t_min..=t_max {
            let ln_den = ln_factorial(row - t)
                + ln_factorial(tl - col - t)
                + ln_factorial(t)
                + ln_factorial(t + col - row);
            let mut coeff = (ln_num - ln_den).exp();
            if t % 2 == 1 {
                coeff = -coeff;
            }
            let cos_pow = (tl + row - col - 2 * t) as u32;
            let sin_pow = (2 * t + col - row) as u32;
            terms.push((coeff, cos_pow, sin_pow));
        }
        Self { terms }
    }

    pub(crate) fn eval(&self, theta: f64) -> f64 {
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        self.terms
            .iter()
            .map(|&(coeff, a, b)| coeff * c.powi(a as i32) * s.powi(b as i32))
            .sum()
    }

    /// Exact derivative in theta:
    /// d/dtheta [c^a s^b] = -(a/2) c^(a-1) s^(b+1) + (b/2) c^(a+1) s^(b-1).
    pub(crate) fn deriv(&self) -> Self {
        use std::collections::BTreeMap;
        let mut acc: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for &(coeff, a, b) in &self.terms {
            if a > 0 {
                *acc.entry((a - 1, b + 1)).or_insert(0.0) += -coeff * a as f64 / 2.0;
            }
            if b > 0 {
                *acc.entry((a + 1, b - 1)).or_insert(0.0) += coeff * b as f64 / 2.0;
            }
        }
        Self {
            terms: acc.into_iter().map(|((a, b), c)| (c, a, b)).collect(),
        }
    }
}

/// The real little-d matrix d^l(theta), increasing-m order.
pub fn wigner_d_matrix(two_ell: u32, theta: f64) -> Array2<f64> {
    let d = two_ell as usize + 1;
    let mut out = Array2::zeros((d, d));
    for row in 0..d {
        for col in 0..d {
            out[(row, col)] = HalfAnglePoly::d_entry(two_ell, row, col).eval(theta);
        }
    }
    out
}

/// Full Wigner matrix from a precomputed little-d block.
pub fn wigner_from_d(two_ell: u32, d: &Array2<f64>, phi: f64, psi: f64) -> Array2<Complex64> {
    let n = two_ell as usize + 1;
    let ell = two_ell as f64 / 2.0;
    let mut out = Array2::zeros((n, n));
    for row in 0..n {
        let m = row as f64 - ell;
        for col in 0..n {
            let nv = col as f64 - ell;
            let phase = Complex64::from_polar(1.0, -(m * phi + nv * psi));
            out[(row, col)] = phase * d[(row, col)];
        }
    }
    out
}

/// The unitary Wigner matrix of an SU(2) representation at a group point.
pub fn wigner_matrix(rep: &RepIndex, g: EulerAngles) -> Result<Array2<Complex64>> {
    let RepIndex::Su2 { two_ell } = rep else {
        return Err(Error::NotSu2Rep);
    };
    let d = wigner_d_matrix(*two_ell, g.theta);
    Ok(wigner_from_d(*two_ell, &d, g.phi, g.psi))
}

/// Torus character exp(i k.x).
pub fn torus_character(k: &[i64], x: &[f64]) -> Complex64 {
    let phase: f64 = k.iter().zip(x).map(|(&ki, &xi)| ki as f64 * xi).sum();
    Complex64::from_polar(1.0, phase)
}

/// Skew-Hermitian generator symbols (-i Jx, -i Jy, -i Jz) of the spin-l
/// representation in the increasing-m basis. They satisfy [X, Y] = Z
/// cyclically, and X^2 + Y^2 = sigma_L for the sub-Laplacian built from the
/// first two fields; the unit tests tie them to the Euler-angle operators.
pub fn su2_generators(two_ell: u32) -> [Array2<Complex64>; 3] {
    let n = two_ell as usize + 1;
    let ell = two_ell as f64 / 2.0;
    let mut jp = Array2::<Complex64>::zeros((n, n));
    let mut jz = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        let m = i as f64 - ell;
        jz[(i, i)] = Complex64::new(m, 0.0);
        if i + 1 < n {
            // J+ |l m> = sqrt((l - m)(l + m + 1)) |l m+1>
            jp[(i + 1, i)] = Complex64::new(((ell - m) * (ell + m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.t().to_owned();
    let i = Complex64::i();
    let jx = (&jp + &jm).mapv(|z| z * 0.5);
    let jy = (&jp - &jm).mapv(|z| z * -0.5 * i);
    [
        jx.mapv(|z| -i * z),
        jy.mapv(|z| -i * z),
        jz.mapv(|z| -i * z),
    ]
}

// ---------------------------------------------------------------------------
// Pointwise invariant differential operators in Euler angles
// ---------------------------------------------------------------------------

/// Left-invariant operators applicable to Wigner entries through the Euler
/// chart. `SubLaplacian` is the displayed second-order operator
/// `1/sin^2 th d_phi^2 - 2 cos th/sin^2 th d_phi d_psi
///  + (1/sin^2 th - 1) d_psi^2 + d_th^2 + cot th d_th`,
/// `Laplacian` adds the third rotation field d_psi^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantOp {
    Identity,
    SubLaplacian,
    Laplacian,
    PsiDerivative,
}

/// Apply an invariant operator to a single Wigner entry at a point, using
/// exact phase factors and exact half-angle differentiation of the little-d
/// entry. Rejects points too close to the poles.
pub fn apply_to_wigner_entry(
    op: InvariantOp,
    two_ell: u32,
    row: usize,
    col: usize,
    g: EulerAngles,
) -> Result<Complex64> {
    let ell = two_ell as f64 / 2.0;
    let m = row as f64 - ell;
    let nv = col as f64 - ell;
    let phase = Complex64::from_polar(1.0, -(m * g.phi + nv * g.psi));
    let poly = HalfAnglePoly::d_entry(two_ell, row, col);
    match op {
        InvariantOp::Identity => Ok(phase * poly.eval(g.theta)),
        InvariantOp::PsiDerivative => {
            Ok(phase * poly.eval(g.theta) * Complex64::new(0.0, -nv))
        }
        InvariantOp::SubLaplacian | InvariantOp::Laplacian => {
            let sin = g.theta.sin();
            if sin.abs() < POLAR_GUARD {
                return Err(Error::PolarSingularity { theta: g.theta });
            }
            let cos = g.theta.cos();
            let d0 = poly.eval(g.theta);
            let d1p = poly.deriv();
            let d1 = d1p.eval(g.theta);
            let d2 = d1p.deriv().eval(g.theta);
            // Zonal part: -(m^2 - 2 m n cos + n^2)/sin^2 acting through the
            // phases; the sub-Laplacian additionally carries +n^2 (it lacks
            // the d_psi^2 completing field).
            let mut zonal = -(m * m - 2.0 * m * nv * cos + nv * nv) / (sin * sin);
            if op == InvariantOp::SubLaplacian {
                zonal += nv * nv;
            }
            Ok(phase * (d2 + cos / sin * d1 + zonal * d0))
        }
    }
}

// ---------------------------------------------------------------------------
// Haar quadrature
// ---------------------------------------------------------------------------

/// A sampling point of the configured group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupPoint {
    Su2(EulerAngles),
    Torus(Vec<f64>),
}

#[derive(Clone, Debug)]
pub(crate) enum GridAxes {
    Su2 {
        phi: Vec<f64>,
        psi: Vec<f64>,
        theta: Vec<f64>,
        theta_w: Vec<f64>,
    },
    Torus {
        axis: Vec<f64>,
        dim: usize,
    },
}

/// Tensor-product quadrature exact for products of matrix entries of any two
/// representations up to the band limit (Schur orthogonality holds to
/// round-off). Nodes are ordered (theta, phi, psi) outer to inner on SU(2)
/// and row-major over axes on the torus; weights sum to one.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub group: GroupConfig,
    pub lmax: u32,
    pub nodes: Vec<GroupPoint>,
    pub weights: Vec<f64>,
    pub(crate) axes: GridAxes,
}

/// Build the Haar quadrature for a band limit.
///
/// SU(2): uniform (rectangle) rules in phi over [0, 2pi) and psi over
/// [-2pi, 2pi) — exact for the surviving integer and half-integer frequency
/// differences — with Gauss-Legendre in cos(theta). The psi range of length
/// 4pi is what kills the mixed integer/half-integer cross terms.
pub fn haar_quadrature(group: &GroupConfig, lmax: u32) -> QuadratureGrid {
    match group {
        GroupConfig::Su2 { .. } => {
            let two_lmax = 2 * lmax as usize;
            let n_phi = two_lmax + 1;
            let n_psi = 2 * two_lmax + 1;
            let n_theta = two_lmax + 1;
            let phi: Vec<f64> = (0..n_phi).map(|a| TAU * a as f64 / n_phi as f64).collect();
            let psi: Vec<f64> = (0..n_psi)
                .map(|b| -TAU + 2.0 * TAU * b as f64 / n_psi as f64)
                .collect();
            let (x, glw) = gauss_legendre(n_theta);
            let theta: Vec<f64> = x.iter().map(|&xi| xi.acos()).collect();
            let mut nodes = Vec::with_capacity(n_theta * n_phi * n_psi);
            let mut weights = Vec::with_capacity(nodes.capacity());
            let base = 1.0 / (2.0 * n_phi as f64 * n_psi as f64);
            for c in 0..n_theta {
                for &p in &phi {
                    for &q in &psi {
                        nodes.push(GroupPoint::Su2(EulerAngles {
                            phi: p,
                            theta: theta[c],
                            psi: q,
                        }));
                        weights.push(glw[c] * base);
                    }
                }
            }
            QuadratureGrid {
                group: group.clone(),
                lmax,
                nodes,
                weights,
                axes: GridAxes::Su2 {
                    phi,
                    psi,
                    theta,
                    theta_w: glw,
                },
            }
        }
        GroupConfig::Torus { dim } => {
            let n = 2 * lmax as usize + 1;
            let axis: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
            let total = n.pow(*dim as u32);
            let mut nodes = Vec::with_capacity(total);
            for flat in 0..total {
                let mut x = Vec::with_capacity(*dim);
                let mut rem = flat;
                for _ in 0..*dim {
                    x.push(axis[rem % n]);
                    rem /= n;
                }
                x.reverse();
                nodes.push(GroupPoint::Torus(x));
            }
            let w = 1.0 / total as f64;
            QuadratureGrid {
                group: group.clone(),
                lmax,
                nodes,
                weights: vec![w; total],
                axes: GridAxes::Torus {
                    axis,
                    dim: *dim,
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hs_norm(m: &Array2<Complex64>) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Test-only matrix exponential (scaling and squaring + Taylor), used as
    /// an independent route to the spin-1/2 matrix.
    fn expm(m: &Array2<Complex64>) -> Array2<Complex64> {
        let n = m.nrows();
        let norm = hs_norm(m);
        let k = norm.log2().ceil().max(0.0) as u32 + 2;
        let scaled = m.mapv(|z| z / 2f64.powi(k as i32));
        let mut term = Array2::<Complex64>::eye(n);
        let mut sum = Array2::<Complex64>::eye(n);
        for j in 1..=16 {
            term = term.dot(&scaled).mapv(|z| z / j as f64);
            sum = &sum + &term;
        }
        for _ in 0..k {
            sum = sum.dot(&sum);
        }
        sum
    }

    #[test]
    fn identity_angles_give_identity_matrix() {
        for two_ell in [0u32, 1, 2, 5, 8] {
            let rep = RepIndex::su2(two_ell);
            let u = wigner_matrix(&rep, EulerAngles::identity()).unwrap();
            let eye = Array2::<Complex64>::eye(rep.dim());
            assert!(hs_norm(&(&u - &eye)) < 1e-13);
        }
    }

    #[test]
    fn spin_half_matches_zyz_exponential_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let [gx, gy, gz] = su2_generators(1);
        // D(phi, theta, psi) = exp(phi * (-i Jz)) exp(theta * (-i Jy)) exp(psi * (-i Jz)).
        let _ = gx;
        for _ in 0..25 {
            let g = EulerAngles::random(&mut rng);
            let direct = wigner_matrix(&RepIndex::su2(1), g).unwrap();
            let e1 = expm(&gz.mapv(|z| z * g.phi));
            let e2 = expm(&gy.mapv(|z| z * g.theta));
            let e3 = expm(&gz.mapv(|z| z * g.psi));
            let product = e1.dot(&e2).dot(&e3);
            assert!(
                hs_norm(&(&direct - &product)) < 1e-12,
                "convention drift at {g:?}"
            );
            // Special unitary: det = 1.
            let det = direct[(0, 0)] * direct[(1, 1)] - direct[(0, 1)] * direct[(1, 0)];
            assert_abs_diff_eq!(det.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(det.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unitarity_holds_for_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_ell in 0..=10u32 {
            let rep = RepIndex::su2(two_ell);
            let eye = Array2::<Complex64>::eye(rep.dim());
            let samples = if two_ell == 6 { 100 } else { 20 };
            for _ in 0..samples {
                let g = EulerAngles::random(&mut rng);
                let u = wigner_matrix(&rep, g).unwrap();
                let uh = u.t().mapv(|z| z.conj());
                let resid = hs_norm(&(&u.dot(&uh) - &eye));
                assert!(resid < 1e-10, "unitarity {resid:.2e} at two_ell={two_ell}");
            }
        }
    }

    #[test]
    fn homomorphism_property_under_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let g1 = EulerAngles::random(&mut rng);
            let g2 = EulerAngles::random(&mut rng);
            let g12 = g1.compose(g2);
            for two_ell in [1u32, 2, 3, 7, 10] {
                let rep = RepIndex::su2(two_ell);
                let lhs = wigner_matrix(&rep, g12).unwrap();
                let rhs = wigner_matrix(&rep, g1)
                    .unwrap()
                    .dot(&wigner_matrix(&rep, g2).unwrap());
                assert!(
                    hs_norm(&(&lhs - &rhs)) < 1e-9,
                    "homomorphism residual at two_ell={two_ell}"
                );
            }
        }
    }

    #[test]
    fn wigner_rejects_torus_indices() {
        let err = wigner_matrix(&RepIndex::torus1(3), EulerAngles::identity());
        assert!(matches!(err, Err(Error::NotSu2Rep)));
    }

    #[test]
    fn quadrature_weights_are_normalised() {
        for lmax in [0u32, 1, 3, 8] {
            let grid = haar_quadrature(&GroupConfig::su2(), lmax);
            let total: f64 = grid.weights.iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
        let grid = haar_quadrature(&GroupConfig::torus(), 16);
        assert_abs_diff_eq!(grid.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    /// Schur orthogonality, exhaustively over all entry pairs for l, l' <= 3/2
    /// and spot-checked at l = l' = 3: integral of xi_ij conj(xi'_i'j') is
    /// delta_{xi xi'} delta_{ii'} delta_{jj'} / d_xi.
    #[test]
    fn quadrature_reproduces_schur_orthogonality() {
        let lmax = 3u32;
        let grid = haar_quadrature(&GroupConfig::su2(), lmax);
        let reps: Vec<u32> = vec![0, 1, 2, 3];
        // Precompute all Wigner matrices on the grid.
        let mats: Vec<Vec<Array2<Complex64>>> = reps
            .iter()
            .map(|&tl| {
                grid.nodes
                    .iter()
                    .map(|p| {
                        let GroupPoint::Su2(g) = p else { unreachable!() };
                        wigner_matrix(&RepIndex::su2(tl), *g).unwrap()
                    })
                    .collect()
            })
            .collect();
        for (ri, &tl1) in reps.iter().enumerate() {
            for (rj, &tl2) in reps.iter().enumerate() {
                let d1 = tl1 as usize + 1;
                let d2 = tl2 as usize + 1;
                for i in 0..d1 {
                    for j in 0..d1 {
                        for ip in 0..d2 {
                            for jp in 0..d2 {
                                let mut acc = Complex64::default();
                                for (n, w) in grid.weights.iter().enumerate() {
                                    acc += *w * mats[ri][n][(i, j)] * mats[rj][n][(ip, jp)].conj();
                                }
                                let expected =
                                    if ri == rj && i == ip && j == jp { 1.0 / d1 as f64 } else { 0.0 };
                                assert!(
                                    (acc - expected).norm() < 1e-10,
                                    "schur failure l={tl1}/2 l'={tl2}/2 ({i}{j})({ip}{jp}): {acc}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn schur_diagonal_value_at_ell_one() {
        // integral |xi_11|^2 = 1/3 at l = 1 and the swapped off-diagonal pair
        // integrates to zero.
        let grid = haar_quadrature(&GroupConfig::su2(), 1);
        let rep = RepIndex::su2(2);
        let mut diag = Complex64::default();
        let mut cross = Complex64::default();
        for (n, w) in grid.weights.iter().enumerate() {
            let GroupPoint::Su2(g) = grid.nodes[n] else {
                unreachable!()
            };
            let u = wigner_matrix(&rep, g).unwrap();
            diag += *w * u[(0, 0)] * u[(0, 0)].conj();
            cross += *w * u[(0, 1)] * u[(1, 0)].conj();
        }
        assert_abs_diff_eq!(diag.re, 1.0 / 3.0, epsilon = 1e-12);
        assert!(diag.im.abs() < 1e-14 && cross.norm() < 1e-12);
    }

    #[test]
    fn sublaplacian_annihilates_constants() {
        // The constant function is the trivial representation entry.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = EulerAngles::random(&mut rng);
            let v = apply_to_wigner_entry(InvariantOp::SubLaplacian, 0, 0, 0, g).unwrap();
            assert!(v.norm() < 1e-13);
        }
    }

    /// The oracle itself: the Euler-angle operator applied to every Wigner
    /// entry at l = 1 returns -(l(l+1) - n^2) with n the column m-value. This
    /// regression pins the convention used by the tabulated symbols.
    #[test]
    fn sublaplacian_eigenvalues_at_ell_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let two_ell = 2u32;
        for _ in 0..5 {
            let g = EulerAngles::random(&mut rng);
            for row in 0..3 {
                for col in 0..3 {
                    let f = apply_to_wigner_entry(InvariantOp::Identity, two_ell, row, col, g)
                        .unwrap();
                    let lf = apply_to_wigner_entry(InvariantOp::SubLaplacian, two_ell, row, col, g)
                        .unwrap();
                    let mu = col as f64 - 1.0;
                    let expected = -(2.0 - mu * mu);
                    assert!(
                        (lf - expected * f).norm() < 1e-10,
                        "row {row} col {col}: got {lf}, f = {f}"
                    );
                }
            }
        }
    }

    #[test]
    fn laplacian_variant_gives_casimir_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for two_ell in [1u32, 2, 3, 4] {
            let ell = two_ell as f64 / 2.0;
            let g = EulerAngles::random(&mut rng);
            for row in 0..=two_ell as usize {
                for col in 0..=two_ell as usize {
                    let f = apply_to_wigner_entry(InvariantOp::Identity, two_ell, row, col, g)
                        .unwrap();
                    let lf = apply_to_wigner_entry(InvariantOp::Laplacian, two_ell, row, col, g)
                        .unwrap();
                    let expected = -(ell * (ell + 1.0));
                    assert!((lf - expected * f).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn polar_evaluation_is_rejected() {
        let g = EulerAngles {
            phi: 0.3,
            theta: 0.0,
            psi: 0.1,
        };
        let err = apply_to_wigner_entry(InvariantOp::SubLaplacian, 2, 0, 0, g);
        assert!(matches!(err, Err(Error::PolarSingularity { .. })));
    }

    #[test]
    fn generators_satisfy_bracket_and_sum_of_squares() {
        for two_ell in [1u32, 2, 4, 7] {
            let [x, y, z] = su2_generators(two_ell);
            let bracket = &x.dot(&y) - &y.dot(&x);
            assert!(hs_norm(&(&bracket - &z)) < 1e-12, "[X,Y] != Z");
            // X^2 + Y^2 acts diagonally with entries -(l(l+1) - m^2): the
            // matching of m here with the Euler-angle column index is checked
            // in sublaplacian_eigenvalues_at_ell_one.
            let sum = &x.dot(&x) + &y.dot(&y);
            let ell = two_ell as f64 / 2.0;
            for i in 0..=two_ell as usize {
                for j in 0..=two_ell as usize {
                    let expected = if i == j {
                        let m = i as f64 - ell;
                        -(ell * (ell + 1.0) - m * m)
                    } else {
                        0.0
                    };
                    assert!((sum[(i, j)] - expected).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn torus_character_is_a_character() {
        let k = [3i64, -2];
        let x = [0.7, 1.9];
        let y = [2.1, 0.4];
        let xy = [x[0] + y[0], x[1] + y[1]];
        let lhs = torus_character(&k, &xy);
        let rhs = torus_character(&k, &x) * torus_character(&k, &y);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn euler_angle_validation() {
        assert!(EulerAngles::new(0.0, 1.0, 0.0).is_ok());
        assert!(EulerAngles::new(-0.1, 1.0, 0.0).is_err());
        assert!(EulerAngles::new(0.0, 0.0, 0.0).is_err());
        assert!(EulerAngles::new(0.0, 1.0, 7.0).is_err());
    }
}
