//! Hermite polynomials in one and two complex variables and the normalized
//! basis families built from them.

use std::f64::consts::PI;

use crate::error::arg;
use crate::{Error, Result, C64};

/// Largest total index accepted by [`basis_eval`].
pub const DEFAULT_INDEX_CAP: usize = 200;

/// Squeezing parameter `alpha` in (0, 1) together with `eps = (1 - alpha)/(1 + alpha)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaParam {
    alpha: f64,
    epsilon: f64,
}

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(Self { alpha, epsilon: (1.0 - alpha) / (1.0 + alpha) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Quadrature tolerances degrade outside [0.05, 0.95].
    pub fn is_well_conditioned(&self) -> bool {
        (0.05..=0.95).contains(&self.alpha)
    }

    /// `((1 + alpha)/(2 sqrt(alpha)), (1 - alpha)/(2 sqrt(alpha)))`, the Bogoliubov pair.
    pub fn bogoliubov_pair(&self) -> (f64, f64) {
        let d = 2.0 * self.alpha.sqrt();
        ((1.0 + self.alpha) / d, (1.0 - self.alpha) / d)
    }
}

/// Number of variables a family or operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    One,
    Two,
}

impl Arity {
    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Arity::One),
            2 => Ok(Arity::Two),
            _ => arg(format!("arity must be 1 or 2, got {k}")),
        }
    }
}

/// `H_n(z)` by the three-term recurrence.
pub fn hermite_poly(n: usize, z: C64) -> C64 {
    let mut h0 = C64::new(1.0, 0.0);
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * z;
    for k in 1..n {
        let h2 = 2.0 * z * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `H_{m,n}(z1, z2)` by the two-index recurrences.
pub fn hermite_poly_2d(m: usize, n: usize, z1: C64, z2: C64) -> C64 {
    // row 0 is z2^j; each later row comes from the first recurrence
    let mut row = vec![C64::new(1.0, 0.0); n + 1];
    for j in 0..n {
        row[j + 1] = z2 * row[j];
    }
    for _ in 0..m {
        let mut next = vec![C64::new(0.0, 0.0); n + 1];
        for j in 0..=n {
            next[j] = z1 * row[j];
            if j > 0 {
                next[j] -= j as f64 * row[j - 1];
            }
        }
        row = next;
    }
    row[n]
}

/// `sum_{m,n <= M} s^m t^n/(m! n!) H_{m,n}(z1, z2)`.
pub fn generating_partial_sum(mmax: usize, s: C64, t: C64, z1: C64, z2: C64) -> C64 {
    let count = mmax + 1;
    let q = scaled_hermite_2d(z1, z2, C64::new(1.0, 0.0), count);
    let mut ps = vec![C64::new(1.0, 0.0); count];
    let mut pt = vec![C64::new(1.0, 0.0); count];
    for k in 1..count {
        ps[k] = ps[k - 1] * s / (k as f64).sqrt();
        pt[k] = pt[k - 1] * t / (k as f64).sqrt();
    }
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..count {
        for n in 0..count {
            acc += ps[m] * pt[n] * q[m * count + n];
        }
    }
    acc
}

/// `G_k(y; t) = t^{k/2} H_k(y/sqrt(t)) / sqrt(2^k k!)` for `k < count`.
///
/// The recurrence never divides by `t`, so `t -> 0` gives `(sqrt(2) y)^k/sqrt(k!)`.
pub(crate) fn scaled_hermite(y: C64, t: C64, count: usize) -> Vec<C64> {
    let mut g = Vec::with_capacity(count);
    if count == 0 {
        return g;
    }
    g.push(C64::new(1.0, 0.0));
    if count == 1 {
        return g;
    }
    g.push(std::f64::consts::SQRT_2 * y);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = y * (2.0 / (kf + 1.0)).sqrt() * g[k] - t * (kf / (kf + 1.0)).sqrt() * g[k - 1];
        g.push(next);
    }
    g
}

/// `G_{m,n}(y1, y2; t) = t^{(m+n)/2} H_{m,n}(y1/sqrt(t), y2/sqrt(t)) / sqrt(m! n!)`,
/// row-major over `(m, n)`, `m, n < count`.
pub(crate) fn scaled_hermite_2d(y1: C64, y2: C64, t: C64, count: usize) -> Vec<C64> {
    let mut g = vec![C64::new(0.0, 0.0); count * count];
    if count == 0 {
        return g;
    }
    g[0] = C64::new(1.0, 0.0);
    for n in 1..count {
        g[n] = y2 * g[n - 1] / (n as f64).sqrt();
    }
    for m in 0..count - 1 {
        let inv = 1.0 / ((m + 1) as f64).sqrt();
        for n in 0..count {
            let mut v = y1 * g[m * count + n];
            if n > 0 {
                v -= t * (n as f64).sqrt() * g[m * count + n - 1];
            }
            g[(m + 1) * count + n] = v * inv;
        }
    }
    g
}

/// Basis family selector with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisSpec {
    /// `z^n/sqrt(n!)`
    Monomial1D,
    /// `z1^m z2^n/sqrt(m! n!)`
    Monomial2D,
    /// `h_n`, orthonormal under `exp(alpha x^2 - y^2/alpha) dx dy`
    HolHermiteH1D(AlphaParam),
    /// `k_n`, orthonormal under `exp(-|z|^2) dz/pi`
    HolHermiteK1D(AlphaParam),
    /// `h_{m,n}`, orthonormal under the two-variable weight (see [`crate::quadrature::Weight`])
    HolHermiteH2D(AlphaParam),
    /// `k_{m,n}`, orthonormal under `exp(-|z1|^2 - |z2|^2) dz1 dz2/pi^2`
    HolHermiteK2D(AlphaParam),
    /// oscillator eigenfunctions `psi_n(q)` with scale `a`
    OscillatorPsi1D { a: f64 },
    /// `psi_m(q1; a) psi_n(q2; b)`
    OscillatorPsi2D { a: f64, b: f64 },
    /// `z^n/sqrt(2 pi)` on the unit disk
    SzegoDisk,
    /// `sqrt((n+1)/(2 pi)) z^n` on the unit disk
    BergmanDisk,
    /// `n!/(z (z+1) ... (z+n))` on `Re z > 1/2`
    FactorialRatio,
}

/// A point of the family's domain: one or two complex numbers.
///
/// Oscillator families read the real part only when the point is real;
/// complex arguments are accepted as the analytic continuation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    One(C64),
    Two(C64, C64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    One(usize),
    Two(usize, usize),
}

impl Index {
    pub fn total(&self) -> usize {
        match *self {
            Index::One(n) => n,
            Index::Two(m, n) => m + n,
        }
    }
}

/// Values of all members with index below `count` (per variable), stored as
/// `mantissa * exp(log_scale)` so that Gaussian factors can be combined with
/// weights before exponentiating.
#[derive(Clone, Debug)]
pub struct BasisValues {
    pub count: usize,
    pub arity: Arity,
    /// row-major over `(m, n)` for two-variable families
    pub mantissa: Vec<C64>,
    pub log_scale: C64,
}

impl BasisValues {
    pub fn get(&self, index: Index) -> C64 {
        self.mantissa[self.flat(index)] * self.log_scale.exp()
    }

    pub fn flat(&self, index: Index) -> usize {
        match index {
            Index::One(n) => n,
            Index::Two(m, n) => m * self.count + n,
        }
    }

    /// All values with the scale applied.
    pub fn values(&self) -> Vec<C64> {
        let s = self.log_scale.exp();
        self.mantissa.iter().map(|v| v * s).collect()
    }
}

impl BasisSpec {
    pub fn oscillator_1d(a: f64) -> Result<Self> {
        let s = BasisSpec::OscillatorPsi1D { a };
        s.validate()?;
        Ok(s)
    }

    pub fn oscillator_2d(a: f64, b: f64) -> Result<Self> {
        let s = BasisSpec::OscillatorPsi2D { a, b };
        s.validate()?;
        Ok(s)
    }

    pub fn arity(&self) -> Arity {
        match self {
            BasisSpec::Monomial2D
            | BasisSpec::HolHermiteH2D(_)
            | BasisSpec::HolHermiteK2D(_)
            | BasisSpec::OscillatorPsi2D { .. } => Arity::Two,
            _ => Arity::One,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisSpec::Monomial1D => "Monomial1D",
            BasisSpec::Monomial2D => "Monomial2D",
            BasisSpec::HolHermiteH1D(_) => "HolHermiteH1D",
            BasisSpec::HolHermiteK1D(_) => "HolHermiteK1D",
            BasisSpec::HolHermiteH2D(_) => "HolHermiteH2D",
            BasisSpec::HolHermiteK2D(_) => "HolHermiteK2D",
            BasisSpec::OscillatorPsi1D { .. } => "OscillatorPsi1D",
            BasisSpec::OscillatorPsi2D { .. } => "OscillatorPsi2D",
            BasisSpec::SzegoDisk => "SzegoDisk",
            BasisSpec::BergmanDisk => "BergmanDisk",
            BasisSpec::FactorialRatio => "FactorialRatio",
        }
    }

    /// True for the oscillator families, whose variables are real.
    pub fn is_physical(&self) -> bool {
        matches!(self, BasisSpec::OscillatorPsi1D { .. } | BasisSpec::OscillatorPsi2D { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BasisSpec::OscillatorPsi1D { a } if !(a > 0.0 && a.is_finite()) => {
                arg(format!("oscillator scale a must be positive, got {a}"))
            }
            BasisSpec::OscillatorPsi2D { a, b } if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) => {
                arg(format!("oscillator scales must be positive, got a={a}, b={b}"))
            }
            _ => Ok(()),
        }
    }

    /// Members with index below `count` per variable at `point`.
    pub fn values(&self, count: usize, point: Point) -> Result<BasisValues> {
        self.validate()?;
        let arity = self.arity();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let (mantissa, log_scale) = match (*self, point) {
            (BasisSpec::Monomial1D, Point::One(z)) => (monomials(z, count), zero),
            (BasisSpec::HolHermiteH1D(p), Point::One(z)) => {
                let e = p.epsilon();
                let pre = 0.5 * ((1.0 - p.alpha()) / (PI * p.alpha().sqrt())).ln();
                (scaled_hermite(e.sqrt() * z, C64::new(e, 0.0), count), pre - 0.5 * z * z)
            }
            (BasisSpec::HolHermiteK1D(p), Point::One(z)) => {
                let (al, e) = (p.alpha(), p.epsilon());
                let s = (2.0 * al / (1.0 - al * al)).sqrt();
                let pre = 0.5 * (2.0 * al.sqrt() / (1.0 + al)).ln();
                (scaled_hermite(e.sqrt() * s * z, C64::new(e, 0.0), count), pre + 0.5 * e * z * z)
            }
            (BasisSpec::OscillatorPsi1D { a }, Point::One(q)) => oscillator(q, a, count),
            (BasisSpec::SzegoDisk, Point::One(z)) => {
                check_disk(z)?;
                let mut v = vec![one; count];
                for k in 1..count {
                    v[k] = v[k - 1] * z;
                }
                (v, C64::new(-0.5 * (2.0 * PI).ln(), 0.0))
            }
            (BasisSpec::BergmanDisk, Point::One(z)) => {
                check_disk(z)?;
                let mut v = vec![one; count];
                for k in 1..count {
                    v[k] = v[k - 1] * z;
                }
                for (k, x) in v.iter_mut().enumerate() {
                    *x *= ((k + 1) as f64).sqrt();
                }
                (v, C64::new(-0.5 * (2.0 * PI).ln(), 0.0))
            }
            (BasisSpec::FactorialRatio, Point::One(z)) => {
                if !(z.re > 0.5) {
                    return Err(Error::Domain(format!("FactorialRatio needs Re z > 1/2, got {z}")));
                }
                let mut v = Vec::with_capacity(count);
                let mut cur = one / z;
                for k in 0..count {
                    if k > 0 {
                        cur = cur * k as f64 / (z + k as f64);
                    }
                    v.push(cur);
                }
                (v, zero)
            }
            (BasisSpec::Monomial2D, Point::Two(z1, z2)) => {
                let (a, b) = (monomials(z1, count), monomials(z2, count));
                (outer(&a, &b), zero)
            }
            (BasisSpec::HolHermiteH2D(p), Point::Two(z1, z2)) => {
                let e = p.epsilon();
                let se = e.sqrt();
                let pre = ((1.0 - p.alpha()) / (PI * p.alpha().sqrt())).ln();
                (scaled_hermite_2d(se * z1, se * z2, C64::new(e, 0.0), count), pre - 0.5 * z1 * z2)
            }
            (BasisSpec::HolHermiteK2D(p), Point::Two(z1, z2)) => {
                let (al, e) = (p.alpha(), p.epsilon());
                let s = e.sqrt() * 2.0 * al.sqrt() / (1.0 - al * al).sqrt();
                let pre = (2.0 * al.sqrt() / (1.0 + al)).ln();
                (scaled_hermite_2d(s * z1, s * z2, C64::new(e, 0.0), count), pre + e * z1 * z2)
            }
            (BasisSpec::OscillatorPsi2D { a, b }, Point::Two(q1, q2)) => {
                let (m1, l1) = oscillator(q1, a, count);
                let (m2, l2) = oscillator(q2, b, count);
                (outer(&m1, &m2), l1 + l2)
            }
            (spec, _) => {
                return arg(format!("point arity does not match family {}", spec.name()));
            }
        };
        if mantissa.iter().any(|v| !v.is_finite()) || !log_scale.is_finite() {
            return Err(Error::NumericRange(format!("{} at {:?}", self.name(), point)));
        }
        Ok(BasisValues { count, arity, mantissa, log_scale })
    }

    /// Single member with the default index cap.
    pub fn eval(&self, index: Index, point: Point) -> Result<C64> {
        basis_eval_capped(self, index, point, DEFAULT_INDEX_CAP)
    }
}

fn monomials(z: C64, count: usize) -> Vec<C64> {
    let mut v = vec![C64::new(1.0, 0.0); count];
    for k in 1..count {
        v[k] = v[k - 1] * z / (k as f64).sqrt();
    }
    v
}

fn oscillator(q: C64, a: f64, count: usize) -> (Vec<C64>, C64) {
    let pre = 0.5 * a.ln() - 0.25 * PI.ln();
    (scaled_hermite(a * q, C64::new(1.0, 0.0), count), pre - 0.5 * a * a * q * q)
}

fn outer(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn check_disk(z: C64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("disk family needs |z| < 1, got |z| = {}", z.norm())))
    }
}

/// Value of one basis member, with the default cap on the total index.
pub fn basis_eval(spec: &BasisSpec, index: Index, point: Point) -> Result<C64> {
    basis_eval_capped(spec, index, point, DEFAULT_INDEX_CAP)
}

/// Value of one basis member; `cap` bounds `n` (or `m + n`).
pub fn basis_eval_capped(spec: &BasisSpec, index: Index, point: Point, cap: usize) -> Result<C64> {
    if index.total() > cap {
        return arg(format!("index total {} exceeds the cap {cap}", index.total()));
    }
    let count = match (spec.arity(), index) {
        (Arity::One, Index::One(n)) => n + 1,
        (Arity::Two, Index::Two(m, n)) => m.max(n) + 1,
        _ => return arg(format!("index arity does not match family {}", spec.name())),
    };
    let vals = spec.values(count, point)?;
    let v = vals.get(index);
    if !v.is_finite() {
        return Err(Error::NumericRange(format!("{} at index {:?}", spec.name(), index)));
    }
    Ok(v)
}
