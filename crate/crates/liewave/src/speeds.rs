//! Propagation-speed profiles a(t) for the four coefficient classes, a grid
//! Hölder-seminorm estimator, and the mollified characteristic roots used by
//! the low-regularity cases.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::numeric::gauss_legendre;
use crate::{Error, Result};

/// Coefficient class of a speed profile:
/// 1 — `a >= a0 > 0`, `C^1`; 2 — `a >= a0 > 0`, `C^alpha`, `0 < alpha < 1`;
/// 3 — `a >= 0`, `C^l`, `l >= 2`; 4 — `a >= 0`, `C^alpha`, `0 < alpha < 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl CaseTag {
    pub fn number(self) -> u8 {
        match self {
            CaseTag::Case1 => 1,
            CaseTag::Case2 => 2,
            CaseTag::Case3 => 3,
            CaseTag::Case4 => 4,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// a(t) = value
    Constant { value: f64 },
    /// a(t) = 2 + sin t
    TwoPlusSine,
    /// a(t) = 1 + |t - center|^alpha
    HolderAboveOne { alpha: f64, center: f64 },
    /// a(t) = t^2
    Quadratic,
    /// a(t) = sin^4 t
    SinFourth,
    /// a(t) = |t - center|^alpha
    HolderDegenerate { alpha: f64, center: f64 },
}

/// A propagation speed with its declared regularity class. Evaluation
/// extends constantly beyond [0, horizon], which preserves both the infimum
/// and the Hölder class when the mollified roots need values outside the
/// time interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedProfile {
    pub kind: ProfileKind,
    pub case_tag: CaseTag,
    /// Infimum of a over [0, horizon] (positive for cases 1-2).
    pub a0: f64,
    /// Hölder exponent in the paper's scale (cases 2 and 4).
    pub alpha: Option<f64>,
    /// Smoothness order l (case 3).
    pub smoothness: Option<u32>,
    /// Horizon T.
    pub horizon: f64,
}

impl SpeedProfile {
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.horizon);
        match &self.kind {
            ProfileKind::Constant { value } => *value,
            ProfileKind::TwoPlusSine => 2.0 + t.sin(),
            ProfileKind::HolderAboveOne { alpha, center } => 1.0 + (t - center).abs().powf(*alpha),
            ProfileKind::Quadratic => t * t,
            ProfileKind::SinFourth => t.sin().powi(4),
            ProfileKind::HolderDegenerate { alpha, center } => (t - center).abs().powf(*alpha),
        }
    }

    pub fn sqrt_eval(&self, t: f64) -> f64 {
        self.eval(t).max(0.0).sqrt()
    }

    /// Analytic maximum of a over [0, horizon].
    pub fn sup_a(&self) -> f64 {
        let t1 = self.horizon;
        match &self.kind {
            ProfileKind::Constant { value } => *value,
            ProfileKind::TwoPlusSine => {
                if t1 >= std::f64::consts::FRAC_PI_2 {
                    3.0
                } else {
                    2.0 + t1.sin()
                }
            }
            ProfileKind::HolderAboveOne { alpha, center } => {
                1.0 + center.max(t1 - center).powf(*alpha)
            }
            ProfileKind::Quadratic => t1 * t1,
            ProfileKind::SinFourth => {
                if t1 >= std::f64::consts::FRAC_PI_2 {
                    1.0
                } else {
                    t1.sin().powi(4)
                }
            }
            ProfileKind::HolderDegenerate { alpha, center } => {
                center.max(t1 - center).powf(*alpha)
            }
        }
    }

    /// Analytic sup of |a'| over [0, horizon] for the differentiable kinds.
    pub fn sup_da(&self) -> Option<f64> {
        match &self.kind {
            ProfileKind::Constant { .. } => Some(0.0),
            ProfileKind::TwoPlusSine => Some(1.0),
            ProfileKind::Quadratic => Some(2.0 * self.horizon),
            // d/dt sin^4 = 4 sin^3 cos, maximised at sin^2 = 3/4.
            ProfileKind::SinFourth => Some(4.0 * 0.75_f64.powf(1.5) * 0.5),
            _ => None,
        }
    }

    /// Interior points where a fails to be smooth, plus the endpoints where
    /// the constant extension introduces derivative jumps. Quadrature for
    /// the mollifying convolution splits at these.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0, self.horizon];
        match &self.kind {
            ProfileKind::HolderAboveOne { center, .. }
            | ProfileKind::HolderDegenerate { center, .. } => pts.push(*center),
            _ => {}
        }
        pts
    }
}

pub fn constant(value: f64, horizon: f64) -> SpeedProfile {
    SpeedProfile {
        kind: ProfileKind::Constant { value },
        case_tag: CaseTag::Case1,
        a0: value,
        alpha: None,
        smoothness: None,
        horizon,
    }
}

pub fn two_plus_sine(horizon: f64) -> SpeedProfile {
    let min_sin = if horizon >= 1.5 * std::f64::consts::PI {
        -1.0
    } else {
        horizon.sin().min(0.0)
    };
    SpeedProfile {
        kind: ProfileKind::TwoPlusSine,
        case_tag: CaseTag::Case1,
        a0: 2.0 + min_sin,
        alpha: None,
        smoothness: None,
        horizon,
    }
}

/// a(t) = 1 + |t - T/2|^alpha, the non-degenerate Hölder profile of case 2.
pub fn holder_above_one(alpha: f64, horizon: f64) -> SpeedProfile {
    SpeedProfile {
        kind: ProfileKind::HolderAboveOne {
            alpha,
            center: horizon / 2.0,
        },
        case_tag: CaseTag::Case2,
        a0: 1.0,
        alpha: Some(alpha),
        smoothness: None,
        horizon,
    }
}

pub fn quadratic(horizon: f64) -> SpeedProfile {
    SpeedProfile {
        kind: ProfileKind::Quadratic,
        case_tag: CaseTag::Case3,
        a0: 0.0,
        alpha: None,
        smoothness: Some(2),
        horizon,
    }
}

pub fn sin_fourth(horizon: f64) -> SpeedProfile {
    SpeedProfile {
        kind: ProfileKind::SinFourth,
        case_tag: CaseTag::Case3,
        a0: 0.0,
        alpha: None,
        smoothness: Some(2),
        horizon,
    }
}

/// a(t) = |t - T/2|^alpha, degenerate and Hölder: case 4 in the paper scale
/// alpha in (0, 2).
pub fn holder_degenerate(alpha: f64, horizon: f64) -> SpeedProfile {
    SpeedProfile {
        kind: ProfileKind::HolderDegenerate {
            alpha,
            center: horizon / 2.0,
        },
        case_tag: CaseTag::Case4,
        a0: 0.0,
        alpha: Some(alpha),
        smoothness: None,
        horizon,
    }
}

/// The catalogue of shipped profiles with their default horizons.
pub fn builtin_profiles() -> Vec<SpeedProfile> {
    vec![
        constant(1.0, 2.0 * std::f64::consts::PI),
        two_plus_sine(2.0 * std::f64::consts::PI),
        holder_above_one(0.5, 2.0),
        quadratic(1.0),
        sin_fourth(std::f64::consts::PI),
        holder_degenerate(0.5, 2.0),
    ]
}

/// Lookup used by experiment configs: string key plus numeric parameters.
pub fn profile_by_key(key: &str, alpha: Option<f64>, horizon: Option<f64>) -> Result<SpeedProfile> {
    let need_alpha = |lo: f64, hi: f64| -> Result<f64> {
        let a = alpha.ok_or_else(|| {
            Error::ProfileParam(format!("profile '{key}' requires an alpha parameter"))
        })?;
        if a <= lo || a >= hi {
            return Err(Error::ProfileParam(format!(
                "profile '{key}' needs alpha in ({lo}, {hi}), got {a}"
            )));
        }
        Ok(a)
    };
    match key {
        "constant" => Ok(constant(1.0, horizon.unwrap_or(2.0 * std::f64::consts::PI))),
        "two_plus_sine" => Ok(two_plus_sine(horizon.unwrap_or(2.0 * std::f64::consts::PI))),
        "holder" => Ok(holder_above_one(need_alpha(0.0, 1.0)?, horizon.unwrap_or(2.0))),
        "quadratic" => Ok(quadratic(horizon.unwrap_or(1.0))),
        "sin_fourth" => Ok(sin_fourth(horizon.unwrap_or(std::f64::consts::PI))),
        "degenerate_holder" => Ok(holder_degenerate(
            need_alpha(0.0, 2.0)?,
            horizon.unwrap_or(2.0),
        )),
        other => Err(Error::ProfileKey(other.to_string())),
    }
}

/// Grid estimate of the Hölder-alpha seminorm: max over pairs with
/// |t - s| <= 0.1 of |a(t) - a(s)| / |t - s|^alpha on an n-point grid.
/// Finite and grid-stable when the declared class is correct; grows without
/// bound under refinement when alpha overstates the regularity.
pub fn holder_estimate(p: &SpeedProfile, alpha: f64, n: usize) -> f64 {
    assert!(alpha > 0.0 && alpha <= 2.0);
    let h = p.horizon / (n - 1) as f64;
    let values: Vec<f64> = (0..n).map(|i| p.eval(i as f64 * h)).collect();
    let window = (0.1 / h).floor() as usize;
    let mut best: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..(i + 1 + window).min(n) {
            let dt = (j - i) as f64 * h;
            let ratio = (values[j] - values[i]).abs() / dt.powf(alpha);
            best = best.max(ratio);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Mollifier and mollified characteristic roots
// ---------------------------------------------------------------------------

/// Unnormalised bump exp(-1/(1 - u^2)) on (-1, 1).
fn bump_raw(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn bump_normaliser() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| {
        // Composite Gauss-Legendre; the integrand is smooth and flat at the
        // endpoints so this converges to round-off quickly.
        let (x, w) = gauss_legendre(32);
        let panels = 16;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = -1.0 + 2.0 * p as f64 / panels as f64;
            let hi = lo + 2.0 / panels as f64;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (&xi, &wi) in x.iter().zip(&w) {
                total += wi * half * bump_raw(mid + half * xi);
            }
        }
        total
    })
}

/// The standard normalised mollifier: phi in C_c^inf, phi >= 0, integral 1,
/// support [-1, 1].
pub fn mollifier(u: f64) -> f64 {
    bump_raw(u) / bump_normaliser()
}

/// phi'(u) = phi(u) * (-2u / (1 - u^2)^2).
pub fn mollifier_deriv(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - u * u;
        mollifier(u) * (-2.0 * u / (q * q))
    }
}

/// Whether the roots carry the case-4 shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftMode {
    /// Case 2: lambda_{1,2} = -/+ (sqrt(a) * phi_eps).
    None,
    /// Case 4: lambda_1 = -(sqrt(a) * phi_eps) + eps^alpha,
    ///         lambda_2 = +(sqrt(a) * phi_eps) + 2 eps^alpha,
    /// with alpha the Hölder order of the *roots* (the paper's alpha halved).
    AlphaShift,
}

/// Smoothed characteristic roots lambda_1 <= lambda_2 obtained by mollifying
/// sqrt(a) at scale epsilon. Derivatives are exact convolutions against the
/// mollifier derivative, so the roots are genuinely smooth callables.
#[derive(Clone, Debug)]
pub struct MollifiedRoots {
    profile: SpeedProfile,
    pub epsilon: f64,
    pub shift_mode: ShiftMode,
    /// Hölder order of sqrt(a): alpha for case 2, alpha/2 for case 4.
    pub root_alpha: f64,
    breakpoints: Vec<f64>,
}

impl MollifiedRoots {
    pub fn new(profile: &SpeedProfile, epsilon: f64, shift_mode: ShiftMode) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::EpsilonRange { epsilon });
        }
        let alpha = profile.alpha.unwrap_or(1.0);
        let root_alpha = match shift_mode {
            ShiftMode::None => alpha,
            ShiftMode::AlphaShift => alpha / 2.0,
        };
        Ok(Self {
            profile: profile.clone(),
            epsilon,
            shift_mode,
            root_alpha,
            breakpoints: profile.breakpoints(),
        })
    }

    pub fn profile(&self) -> &SpeedProfile {
        &self.profile
    }

    fn shifts(&self) -> (f64, f64) {
        match self.shift_mode {
            ShiftMode::None => (0.0, 0.0),
            ShiftMode::AlphaShift => {
                let s = self.epsilon.powf(self.root_alpha);
                (s, 2.0 * s)
            }
        }
    }

    pub fn lambda1(&self, t: f64) -> f64 {
        -self.conv(t) + self.shifts().0
    }

    pub fn lambda2(&self, t: f64) -> f64 {
        self.conv(t) + self.shifts().1
    }

    pub fn dlambda1(&self, t: f64) -> f64 {
        -self.dconv(t)
    }

    pub fn dlambda2(&self, t: f64) -> f64 {
        self.dconv(t)
    }

    /// det H = lambda_2 - lambda_1.
    pub fn det_h(&self, t: f64) -> f64 {
        self.lambda2(t) - self.lambda1(t)
    }

    /// (sqrt(a) * phi_eps)(t) = integral of sqrt(a)(t - eps u) phi(u) du.
    pub fn conv(&self, t: f64) -> f64 {
        self.convolve(t, mollifier, 1.0)
    }

    /// d/dt of the convolution, pushed onto the mollifier:
    /// (1/eps) integral sqrt(a)(t - eps u) phi'(u) du.
    pub fn dconv(&self, t: f64) -> f64 {
        self.convolve(t, mollifier_deriv, 1.0 / self.epsilon)
    }

    fn convolve(&self, t: f64, kernel: fn(f64) -> f64, scale: f64) -> f64 {
        // Fixed panels over [-1, 1], additionally split wherever
        // sqrt(a)(t - eps u) loses smoothness, then Gauss-Legendre on each
        // smooth piece. Fixed panel boundaries keep the quadrature value a
        // smooth function of t.
        const PANELS: usize = 16;
        let mut cuts: Vec<f64> = (0..=PANELS)
            .map(|p| -1.0 + 2.0 * p as f64 / PANELS as f64)
            .collect();
        for &b in &self.breakpoints {
            let u = (t - b) / self.epsilon;
            if u > -1.0 && u < 1.0 {
                cuts.push(u);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let (x, w) = gl_24();
        let mut total = 0.0;
        for seg in cuts.windows(2) {
            let (lo, hi) = (seg[0], seg[1]);
            if hi - lo < 1e-300 {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (&xi, &wi) in x.iter().zip(w.iter()) {
                let u = mid + half * xi;
                total += wi * half * kernel(u) * self.profile.sqrt_eval(t - self.epsilon * u);
            }
        }
        total * scale
    }
}

fn gl_24() -> (&'static [f64], &'static [f64]) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (x, w) = RULE.get_or_init(|| gauss_legendre(24));
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::log_log_slope;
    use approx::assert_abs_diff_eq;

    #[test]
    fn builtin_catalogue_covers_all_cases() {
        let cat = builtin_profiles();
        assert!(cat.len() >= 6);
        let tags: Vec<u8> = cat.iter().map(|p| p.case_tag.number()).collect();
        for case in 1..=4u8 {
            assert!(tags.contains(&case), "missing case {case}");
        }
        // a == 1: case 1 with a0 = 1.
        assert_eq!(cat[0].case_tag, CaseTag::Case1);
        assert_eq!(cat[0].a0, 1.0);
        // a = t^2 on [0, 1]: degenerate smooth, case 3.
        let quad = &cat[3];
        assert_eq!(quad.case_tag, CaseTag::Case3);
        assert_eq!(quad.eval(0.0), 0.0);
        assert_eq!(quad.a0, 0.0);
    }

    #[test]
    fn mollifier_is_normalised() {
        // Reference value of the bump integral.
        assert_abs_diff_eq!(bump_normaliser(), 0.443993816168807, epsilon = 1e-9);
        let (x, w) = gauss_legendre(64);
        let total: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * mollifier(xi)).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        assert!(mollifier(0.999999) >= 0.0 && mollifier(1.2) == 0.0);
    }

    #[test]
    fn holder_estimate_on_constant_is_zero() {
        let p = constant(3.0, 1.0);
        assert_eq!(holder_estimate(&p, 0.5, 400), 0.0);
    }

    #[test]
    fn holder_estimate_recovers_sqrt_exponent() {
        // a(t) = |t - 0|^(1/2) near 0 realises ratio 1 against alpha = 1/2.
        let p = SpeedProfile {
            kind: ProfileKind::HolderDegenerate {
                alpha: 0.5,
                center: 0.0,
            },
            case_tag: CaseTag::Case4,
            a0: 0.0,
            alpha: Some(0.5),
            smoothness: None,
            horizon: 1.0,
        };
        let est = holder_estimate(&p, 0.5, 2000);
        assert!((est - 1.0).abs() < 0.05, "estimate {est}");
        // Testing with an overstated exponent diverges under refinement.
        let coarse = holder_estimate(&p, 0.9, 1000);
        let fine = holder_estimate(&p, 0.9, 4000);
        assert!(
            fine > 1.2 * coarse,
            "expected divergence: coarse {coarse}, fine {fine}"
        );
    }

    #[test]
    fn constant_profile_roots_are_constant() {
        let p = constant(1.0, 2.0);
        let roots = MollifiedRoots::new(&p, 0.25, ShiftMode::None).unwrap();
        for t in [0.0, 0.5, 1.3, 2.0] {
            assert_abs_diff_eq!(roots.lambda1(t), -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(roots.lambda2(t), 1.0, epsilon = 1e-12);
            assert!(roots.dlambda2(t).abs() < 1e-11);
        }
        // Case-4 shifts on the same constant profile (alpha fixed by hand).
        let mut p4 = holder_degenerate(0.5, 2.0);
        p4.kind = ProfileKind::Constant { value: 1.0 };
        p4.a0 = 1.0;
        let eps = 0.1;
        let roots4 = MollifiedRoots::new(&p4, eps, ShiftMode::AlphaShift).unwrap();
        let shift = eps.powf(0.25); // internal alpha = paper alpha / 2
        assert_abs_diff_eq!(roots4.lambda1(1.0), -1.0 + shift, epsilon = 1e-12);
        assert_abs_diff_eq!(roots4.lambda2(1.0), 1.0 + 2.0 * shift, epsilon = 1e-12);
    }

    #[test]
    fn epsilon_outside_unit_interval_is_rejected() {
        let p = constant(1.0, 1.0);
        assert!(matches!(
            MollifiedRoots::new(&p, 0.0, ShiftMode::None),
            Err(Error::EpsilonRange { .. })
        ));
        assert!(matches!(
            MollifiedRoots::new(&p, 1.5, ShiftMode::None),
            Err(Error::EpsilonRange { .. })
        ));
    }

    /// Case-2 separation lambda_2 - lambda_1 >= 2 sqrt(a0) and case-4
    /// separation >= 2 eps^alpha, on a dense grid across a ladder of scales.
    #[test]
    fn root_separation_invariants() {
        let n = 10_000;
        let p2 = holder_above_one(0.5, 2.0);
        let p4 = holder_degenerate(0.5, 2.0);
        for k in 1..=10u32 {
            let eps = 0.5f64.powi(k as i32);
            let r2 = MollifiedRoots::new(&p2, eps, ShiftMode::None).unwrap();
            let r4 = MollifiedRoots::new(&p4, eps, ShiftMode::AlphaShift).unwrap();
            let floor2 = 2.0 * p2.a0.sqrt();
            let floor4 = 2.0 * eps.powf(r4.root_alpha);
            let mut min2 = f64::INFINITY;
            let mut min4 = f64::INFINITY;
            for i in 0..n {
                let t = 2.0 * i as f64 / (n - 1) as f64;
                min2 = min2.min(r2.det_h(t));
                min4 = min4.min(r4.det_h(t));
            }
            assert!(
                min2 >= floor2 - 1e-10,
                "case 2 separation {min2} < {floor2} at eps = {eps}"
            );
            assert!(
                min4 >= floor4 - 1e-10,
                "case 4 separation {min4} < {floor4} at eps = {eps}"
            );
        }
    }

    /// Evaluation grid for sup norms: uniform plus refinement around the
    /// central kink, where the mollification error peaks on a width-eps set.
    fn sup_grid(horizon: f64, kink: f64, eps: f64) -> Vec<f64> {
        let mut ts: Vec<f64> = (0..4000).map(|i| horizon * i as f64 / 3999.0).collect();
        for j in -32..=32 {
            let t = kink + j as f64 * eps / 16.0;
            if (0.0..=horizon).contains(&t) {
                ts.push(t);
            }
        }
        ts
    }

    /// sup |lambda_2 - sqrt(a)| ~ C eps^alpha: the fitted log-log slope over
    /// a dyadic ladder matches the Hölder order within the stated band.
    #[test]
    fn root_approximation_rate() {
        let p = holder_above_one(0.5, 2.0);
        let mut epss = Vec::new();
        let mut sups = Vec::new();
        for k in 3..=8u32 {
            let eps = 0.5f64.powi(k as i32);
            let roots = MollifiedRoots::new(&p, eps, ShiftMode::None).unwrap();
            let mut sup: f64 = 0.0;
            for t in sup_grid(2.0, 1.0, eps) {
                sup = sup.max((roots.lambda2(t) - p.sqrt_eval(t)).abs());
            }
            epss.push(eps);
            sups.push(sup);
        }
        let slope = log_log_slope(&epss, &sups);
        assert!(
            (slope - 0.5).abs() <= 0.1,
            "approximation rate slope {slope}, expected 0.5 +/- 0.1"
        );
        // Shifted roots obey the same rate up to the explicit eps^alpha shift
        // (internal order 1/4 for the paper-alpha = 1/2 degenerate profile).
        let p4 = holder_degenerate(0.5, 2.0);
        let mut sups4 = Vec::new();
        for &eps in &epss {
            let roots = MollifiedRoots::new(&p4, eps, ShiftMode::AlphaShift).unwrap();
            let mut sup: f64 = 0.0;
            for t in sup_grid(2.0, 1.0, eps) {
                sup = sup.max((roots.lambda2(t) - p4.sqrt_eval(t)).abs());
            }
            sups4.push(sup);
        }
        let slope4 = log_log_slope(&epss, &sups4);
        assert!(
            (slope4 - 0.25).abs() <= 0.15,
            "case-4 rate slope {slope4}, expected 0.25 +/- 0.15"
        );
    }

    /// The mollified roots are smooth: centred differences of lambda_2
    /// converge to the exact derivative at second order (Richardson).
    #[test]
    fn roots_are_smooth_in_time() {
        let p = holder_above_one(0.5, 2.0);
        let roots = MollifiedRoots::new(&p, 0.125, ShiftMode::None).unwrap();
        for &t in &[0.31, 0.97, 1.43] {
            let exact = roots.dlambda2(t);
            let fd = |h: f64| (roots.lambda2(t + h) - roots.lambda2(t - h)) / (2.0 * h);
            let e1 = (fd(1e-3) - exact).abs();
            let e2 = (fd(5e-4) - exact).abs();
            assert!(
                e2 <= e1 / 2.5 + 1e-12,
                "no second-order convergence at t = {t}: {e1:.3e} -> {e2:.3e}"
            );
        }
    }

    #[test]
    fn profile_lookup_by_key() {
        assert!(profile_by_key("holder", Some(0.5), Some(2.0)).is_ok());
        assert!(matches!(
            profile_by_key("holder", None, None),
            Err(Error::ProfileParam(_))
        ));
        assert!(matches!(
            profile_by_key("nope", None, None),
            Err(Error::ProfileKey(_))
        ));
    }
}
