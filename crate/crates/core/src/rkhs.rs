//! Reproducing kernels: Zaremba sums over a basis, closed forms, and the
//! integrability diagnostics for rotation-invariant kernels.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::arg;
use crate::hermite::{AlphaParam, Arity, BasisSpec, Point};
use crate::{Error, Result, C64};

/// Cauchy window for the Zaremba divergence detector.
pub const CAUCHY_WINDOW: usize = 10;
/// Largest accepted share of `sum |Phi_n|^2` carried by the last window.
pub const CAUCHY_THRESHOLD: f64 = 1e-13;
/// Relative tail at which the 3F2 series stops.
pub const SERIES_TOL: f64 = 1e-14;
/// Term budget for the 3F2 series.
pub const SERIES_CAP: usize = 100_000;

/// Closed-form kernel selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    Bargmann1D,
    Bargmann2D,
    VanEM1D(AlphaParam),
    VanEM2D(AlphaParam),
    Szego,
    Bergman,
    FactorialRatio3F2,
}

impl KernelSpec {
    pub fn arity(&self) -> Arity {
        match self {
            KernelSpec::Bargmann2D | KernelSpec::VanEM2D(_) => Arity::Two,
            _ => Arity::One,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Bargmann1D => "Bargmann1D",
            KernelSpec::Bargmann2D => "Bargmann2D",
            KernelSpec::VanEM1D(_) => "VanEM1D",
            KernelSpec::VanEM2D(_) => "VanEM2D",
            KernelSpec::Szego => "Szego",
            KernelSpec::Bergman => "Bergman",
            KernelSpec::FactorialRatio3F2 => "FactorialRatio3F2",
        }
    }

    /// The basis whose Zaremba sum gives this kernel.
    pub fn basis(&self) -> BasisSpec {
        match *self {
            KernelSpec::Bargmann1D => BasisSpec::Monomial1D,
            KernelSpec::Bargmann2D => BasisSpec::Monomial2D,
            KernelSpec::VanEM1D(a) => BasisSpec::HolHermiteH1D(a),
            KernelSpec::VanEM2D(a) => BasisSpec::HolHermiteH2D(a),
            KernelSpec::Szego => BasisSpec::SzegoDisk,
            KernelSpec::Bergman => BasisSpec::BergmanDisk,
            KernelSpec::FactorialRatio3F2 => BasisSpec::FactorialRatio,
        }
    }
}

/// Positive sequence, read either as moments `a_n` or as `k_n^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return arg(format!("need at least 3 entries, got {}", values.len()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return arg(format!("entry {i} is not a positive finite number: {v}"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Partial Zaremba sum with the share of its last window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZarembaSum {
    pub value: C64,
    /// max over both points of (last-window part of sum |Phi_n|^2) / (whole sum)
    pub tail_ratio: f64,
}

/// `sum_{n<N} Phi_n(x) conj(Phi_n(y))` (all `m, n < N` for two variables),
/// without the divergence check.
pub fn zaremba_partial(spec: &BasisSpec, x: Point, y: Point, n: usize) -> Result<ZarembaSum> {
    if n == 0 {
        return arg("Zaremba sum needs N >= 1");
    }
    let vx = spec.values(n, x)?.values();
    let vy = spec.values(n, y)?.values();
    let arity = spec.arity();
    let window = CAUCHY_WINDOW.min(n - 1);
    let in_tail = |i: usize| match arity {
        Arity::One => i + window >= n,
        Arity::Two => (i / n).max(i % n) + window >= n,
    };
    let mut value = C64::new(0.0, 0.0);
    let (mut sx, mut sy, mut tx, mut ty) = (0.0, 0.0, 0.0, 0.0);
    for (i, (a, b)) in vx.iter().zip(vy.iter()).enumerate() {
        value += a * b.conj();
        sx += a.norm_sqr();
        sy += b.norm_sqr();
        if window > 0 && in_tail(i) {
            tx += a.norm_sqr();
            ty += b.norm_sqr();
        }
    }
    let ratio = |t: f64, s: f64| if s > 0.0 { t / s } else { 0.0 };
    let tail_ratio = ratio(tx, sx).max(ratio(ty, sy));
    if !value.is_finite() {
        return Err(Error::NumericRange(format!("Zaremba sum of {}", spec.name())));
    }
    Ok(ZarembaSum { value, tail_ratio })
}

/// Zaremba partial sum; fails with [`Error::Divergence`] when the last
/// [`CAUCHY_WINDOW`] terms of `sum |Phi_n|^2` exceed [`CAUCHY_THRESHOLD`] of
/// the total at either point.
pub fn zaremba_kernel(spec: &BasisSpec, x: Point, y: Point, n: usize) -> Result<C64> {
    let s = zaremba_partial(spec, x, y, n)?;
    if s.tail_ratio > CAUCHY_THRESHOLD {
        return Err(Error::Divergence { tail_ratio: s.tail_ratio });
    }
    Ok(s.value)
}

fn one_point(spec: &KernelSpec, p: Point) -> Result<C64> {
    match p {
        Point::One(z) => Ok(z),
        Point::Two(..) => arg(format!("{} takes one complex variable", spec.name())),
    }
}

fn two_points(spec: &KernelSpec, p: Point) -> Result<(C64, C64)> {
    match p {
        Point::Two(a, b) => Ok((a, b)),
        Point::One(_) => arg(format!("{} takes two complex variables", spec.name())),
    }
}

/// Closed-form `K(x, y)`; `y` is passed unconjugated.
pub fn closed_kernel(spec: &KernelSpec, x: Point, y: Point) -> Result<C64> {
    match *spec {
        KernelSpec::Bargmann1D => {
            let (z, w) = (one_point(spec, x)?, one_point(spec, y)?);
            Ok((z * w.conj()).exp())
        }
        KernelSpec::Bargmann2D => {
            let ((z1, z2), (w1, w2)) = (two_points(spec, x)?, two_points(spec, y)?);
            Ok((z1 * w1.conj() + z2 * w2.conj()).exp())
        }
        KernelSpec::VanEM1D(p) => {
            let (z, w) = (one_point(spec, x)?, one_point(spec, y)?.conj());
            let al = p.alpha();
            let sq = z * z + w * w;
            let e = -0.5 * sq - (1.0 - al).powi(2) / (4.0 * al) * sq + (1.0 - al * al) / (2.0 * al) * z * w;
            Ok((1.0 - al * al) / (2.0 * PI * al) * e.exp())
        }
        KernelSpec::VanEM2D(p) => {
            let ((z1, z2), (w1, w2)) = (two_points(spec, x)?, two_points(spec, y)?);
            let (w1, w2) = (w1.conj(), w2.conj());
            let al = p.alpha();
            let pre = (1.0 - al * al).powi(2) / (4.0 * PI * PI * al * al);
            let e = (1.0 - al * al) / (4.0 * al) * (z1 * w1 + z2 * w2) - (1.0 + al * al) / (4.0 * al) * (z1 * z2 + w1 * w2);
            Ok(pre * e.exp())
        }
        KernelSpec::Szego | KernelSpec::Bergman => {
            let (z, w) = (one_point(spec, x)?, one_point(spec, y)?);
            if z.norm() >= 1.0 || w.norm() >= 1.0 {
                return Err(Error::Domain(format!("{} kernel needs points in the unit disk", spec.name())));
            }
            let d = 1.0 - z * w.conj();
            let p = if *spec == KernelSpec::Szego { 1 } else { 2 };
            Ok(1.0 / (2.0 * PI * d.powi(p)))
        }
        KernelSpec::FactorialRatio3F2 => {
            let (z, w) = (one_point(spec, x)?, one_point(spec, y)?);
            factorial_ratio_kernel(z, w.conj())
        }
    }
}

/// `sum_n (n!)^2 / ((z)_{n+1} (wb)_{n+1})`, i.e. `3F2(1,1,1; z+1, wb+1; 1)/(z wb)`.
///
/// The terms decay like `n^{-(z+wb)}`. The tail beyond the current term is
/// estimated from the telescoping comparison series
/// `v_n = Gamma(n+c)/Gamma(n+c+p)`, `p = z + wb`, with `c` chosen so that
/// `v_{n+1}/v_n` matches the term ratio through order `1/n^2`; the sum of
/// `v_n` from `N` on is `v_N (N + c + p - 1)/(p - 1)` exactly.
fn factorial_ratio_kernel(z: C64, wb: C64) -> Result<C64> {
    if !(z.re > 0.5 && wb.re > 0.5) {
        return Err(Error::Domain("3F2 kernel needs Re z > 1/2 and Re w > 1/2".into()));
    }
    let p = z + wb;
    let c = ((z * z + wb * wb + z + wb) / p - p + 1.0) / 2.0;
    let mut term = 1.0 / (z * wb);
    let mut partial = C64::new(0.0, 0.0);
    let mut prev: Option<C64> = None;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        let est = partial + term * (nf + c + p - 1.0) / (p - 1.0);
        if let Some(pv) = prev {
            if n > 8 && (est - pv).norm() <= SERIES_TOL * est.norm() {
                return Ok(est);
            }
        }
        prev = Some(est);
        partial += term;
        term *= (nf + 1.0) * (nf + 1.0) / ((z + nf + 1.0) * (wb + nf + 1.0));
    }
    Err(Error::NonConvergence { terms: SERIES_CAP })
}

/// Hermitian-symmetry defect and smallest eigenvalue of a sample Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PdReport {
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Builds `K(x_i, x_j)` and checks Hermitian symmetry and positive semidefiniteness.
pub fn hermitian_pd_check(spec: &KernelSpec, points: &[Point], tol: f64) -> Result<PdReport> {
    let n = points.len();
    if n == 0 {
        return arg("need at least one sample point");
    }
    let mut g = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = closed_kernel(spec, points[i], points[j])?;
        }
    }
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            defect = defect.max((g[(i, j)] - g[(j, i)].conj()).norm());
        }
    }
    let herm = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PdReport {
        hermitian_defect: defect,
        min_eigenvalue,
        tol,
        pass: defect < tol && min_eigenvalue > -tol,
    })
}

/// One failure of `k_{m+n}^{-2} <= k_{2m}^{-1} k_{2n}^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvexityViolation {
    pub m: usize,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogConvexityReport {
    pub pairs_checked: usize,
    pub violations: Vec<ConvexityViolation>,
    pub pass: bool,
    pub note: &'static str,
}

pub const LOG_CONVEXITY_NOTE: &str =
    "log-convexity of k_n^{-1} is necessary for an integrating measure to exist, not sufficient";

/// Checks `k_{m+n}^{-2} <= k_{2m}^{-1} k_{2n}^{-1}` for all `m <= n` with `2n < L`.
pub fn log_convexity_check(k_inv: &MomentSequence) -> LogConvexityReport {
    let a = k_inv.values();
    let mut violations = Vec::new();
    let mut pairs = 0;
    for n in 0..a.len().div_ceil(2) {
        for m in 0..=n {
            pairs += 1;
            let (ln_l, ln_r) = (2.0 * a[m + n].ln(), a[2 * m].ln() + a[2 * n].ln());
            if ln_l > ln_r + 1e-12 * ln_r.abs().max(1.0) {
                violations.push(ConvexityViolation { m, n, lhs: a[m + n] * a[m + n], rhs: a[2 * m] * a[2 * n] });
            }
        }
    }
    LogConvexityReport { pairs_checked: pairs, pass: violations.is_empty(), violations, note: LOG_CONVEXITY_NOTE }
}

/// `k_n = 2 pi / a_{2n}` for `n <= n_max`.
pub fn radial_measure_norms(moments: &MomentSequence, n_max: usize) -> Result<Vec<f64>> {
    let a = moments.values();
    if 2 * n_max >= a.len() {
        return arg(format!("moment a_{} is missing (have {} entries)", 2 * n_max, a.len()));
    }
    Ok((0..=n_max).map(|n| 2.0 * PI / a[2 * n]).collect())
}

/// Index convention for the weighted shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShiftConvention {
    /// `sigma_n = k_n / k_{n+1}`, `sigma_0 = k_0^{-1/2}`
    #[default]
    AsPrinted,
    /// `sigma_n = k_{n-1} / k_n`, which gives the canonical `sqrt(n)` for `k_n = 1/n!`
    Shifted,
}

/// `sigma_0 .. sigma_{N-1}` under the chosen convention; needs `k_0 .. k_N`.
pub fn shift_weights(k: &[f64], n: usize, convention: ShiftConvention) -> Result<Vec<f64>> {
    if k.len() < n + 1 {
        return arg(format!("need {} weights k_n, got {}", n + 1, k.len()));
    }
    if let Some((i, v)) = k.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
        return arg(format!("k_{i} = {v} is not positive"));
    }
    let mut s = vec![1.0 / k[0].sqrt()];
    for j in 1..n {
        s.push(match convention {
            ShiftConvention::AsPrinted => k[j] / k[j + 1],
            ShiftConvention::Shifted => k[j - 1] / k[j],
        });
    }
    Ok(s)
}

/// `(a_+, a_-)` in the basis `Phi_0 .. Phi_{N-1}`:
/// `a_- Phi_n = sqrt(sigma_n) Phi_{n-1}`, `a_- Phi_0 = 0`,
/// `a_+ Phi_n = sqrt(sigma_{n+1}) Phi_{n+1}`. Column `n` holds the image of `Phi_n`.
pub fn weighted_shift_matrices(
    k: &[f64],
    n: usize,
    convention: ShiftConvention,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if n == 0 {
        return arg("N must be at least 1");
    }
    let sigma = shift_weights(k, n, convention)?;
    let mut plus = DMatrix::zeros(n, n);
    let mut minus = DMatrix::zeros(n, n);
    for j in 1..n {
        let s = sigma[j].sqrt();
        minus[(j - 1, j)] = s;
        plus[(j, j - 1)] = s;
    }
    Ok((plus, minus))
}
