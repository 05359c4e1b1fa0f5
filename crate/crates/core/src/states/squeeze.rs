//! su(1,1) generators, the squeeze operator and the squeezed basis.

use nalgebra::DMatrix;

use super::{OpLabel, OperatorMatrix};
use crate::error::arg;
use crate::hermite::{scaled_hermite, scaled_hermite_2d, AlphaParam, Arity, BasisSpec, Index, Point};
use crate::{Error, Result, C64};

/// Largest `|xi|` accepted by [`squeeze_matrix`].
pub const XI_LIMIT: f64 = 5.0;
/// Block change below which the padded exponential counts as converged;
/// just above the rounding noise of the exponential itself.
pub const PAD_TOL: f64 = 1e-13;
/// Largest padded chain length tried by the exact squeeze method.
pub const PAD_CAP: usize = 2048;

/// `(K+, K-, K0)` in the monomial basis: `z^2/2, d^2/2, (1/2 + z d)/2` for one
/// mode and `z1 z2, d1 d2, (1 + z1 d1 + z2 d2)/2` for two.
pub fn su11_generators(arity: Arity, n: usize) -> Result<(OperatorMatrix, OperatorMatrix, OperatorMatrix)> {
    if n < 4 {
        return arg("su(1,1) generators need N >= 4");
    }
    let dim = match arity {
        Arity::One => n,
        Arity::Two => n * n,
    };
    let mut kp = DMatrix::<C64>::zeros(dim, dim);
    let mut k0 = DMatrix::<C64>::zeros(dim, dim);
    for ch in chains(arity, n) {
        let len = ch.len_in(n);
        for j in 0..len {
            let f = ch.flat(j, n);
            k0[(f, f)] = C64::new(ch.k0(j), 0.0);
            if j + 1 < len {
                kp[(ch.flat(j + 1, n), f)] = C64::new(ch.raise(j), 0.0);
            }
        }
    }
    let km = kp.adjoint();
    Ok((
        OperatorMatrix::new(OpLabel::KPlus, arity, n, kp),
        OperatorMatrix::new(OpLabel::KMinus, arity, n, km),
        OperatorMatrix::new(OpLabel::K0, arity, n, k0),
    ))
}

/// Orbit of `K+` through the Fock basis: even or odd `n` for one mode,
/// fixed `m - n` for two.
#[derive(Clone, Copy, Debug)]
enum Chain {
    Parity(usize),
    Diagonal(isize),
}

fn chains(arity: Arity, n: usize) -> Vec<Chain> {
    match arity {
        Arity::One => vec![Chain::Parity(0), Chain::Parity(1)],
        Arity::Two => {
            let r = n as isize - 1;
            (-r..=r).map(Chain::Diagonal).collect()
        }
    }
}

impl Chain {
    /// Fock index (or index pair) of chain element `j`.
    fn index(&self, j: usize) -> (usize, usize) {
        match *self {
            Chain::Parity(s) => (s + 2 * j, 0),
            Chain::Diagonal(d) => (j + d.max(0) as usize, j + (-d).max(0) as usize),
        }
    }

    fn len_in(&self, n: usize) -> usize {
        match *self {
            Chain::Parity(s) => (n - s).div_ceil(2),
            Chain::Diagonal(d) => n - d.unsigned_abs(),
        }
    }

    fn flat(&self, j: usize, n: usize) -> usize {
        match *self {
            Chain::Parity(_) => self.index(j).0,
            Chain::Diagonal(_) => {
                let (a, b) = self.index(j);
                a * n + b
            }
        }
    }

    /// `<j+1| K+ |j>`.
    fn raise(&self, j: usize) -> f64 {
        let (a, b) = self.index(j);
        match self {
            Chain::Parity(_) => (((a + 1) * (a + 2)) as f64).sqrt() / 2.0,
            Chain::Diagonal(_) => (((a + 1) * (b + 1)) as f64).sqrt(),
        }
    }

    fn k0(&self, j: usize) -> f64 {
        let (a, b) = self.index(j);
        match self {
            Chain::Parity(_) => (a as f64 + 0.5) / 2.0,
            Chain::Diagonal(_) => (1 + a + b) as f64 / 2.0,
        }
    }

    /// `xi K+ - conj(xi) K-` on the first `len` chain elements.
    fn generator(&self, xi: C64, len: usize) -> DMatrix<C64> {
        let mut g = DMatrix::zeros(len, len);
        for j in 0..len.saturating_sub(1) {
            let w = self.raise(j);
            g[(j + 1, j)] = xi * w;
            g[(j, j + 1)] = -xi.conj() * w;
        }
        g
    }
}

/// `zeta = xi tanh|xi| / |xi|`.
pub fn zeta_from_xi(xi: C64) -> C64 {
    let r = xi.norm();
    if r == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        xi * (r.tanh() / r)
    }
}

/// Middle factor of the disentangled squeeze operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MiddleFactor {
    /// `exp(ln(1 - |zeta|^2) K0)`, which agrees with the matrix exponential
    #[default]
    Standard,
    /// `exp(ln(1 + |zeta|^2) K0)` as printed in the source formula
    AsPrinted,
}

/// How [`squeeze_matrix`] builds `S(xi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqueezeMethod {
    /// `N x N` block of the exponential on a padded space, enlarged until the
    /// block stops changing: the truncation of the true operator
    Exact,
    /// `exp(zeta K+) exp(c K0) exp(-conj(zeta) K-)` with terminating series;
    /// with the standard middle factor this is also the truncation of the
    /// true operator
    Zassenhaus(MiddleFactor),
    /// exponential of the truncated generator: exactly unitary, but not the
    /// truncation of `S(xi)` near the corner
    TruncatedGenerator,
}

/// `S(xi) = exp(xi K+ - conj(xi) K-)` on `N` levels per mode.
pub fn squeeze_matrix(xi: C64, n: usize, arity: Arity, method: SqueezeMethod) -> Result<OperatorMatrix> {
    if !(xi.norm() < XI_LIMIT) {
        return Err(Error::Conditioning(format!("|xi| = {} must stay below {XI_LIMIT}", xi.norm())));
    }
    if n < 8 {
        return arg("squeeze matrix needs N >= 8");
    }
    let dim = match arity {
        Arity::One => n,
        Arity::Two => n * n,
    };
    let zeta = zeta_from_xi(xi);
    let mut s = DMatrix::<C64>::zeros(dim, dim);
    for ch in chains(arity, n) {
        let len = ch.len_in(n);
        let block = match method {
            SqueezeMethod::TruncatedGenerator => ch.generator(xi, len).exp(),
            SqueezeMethod::Exact => padded_exp(&ch, xi, len)?,
            SqueezeMethod::Zassenhaus(mid) => disentangled(&ch, zeta, len, mid),
        };
        for i in 0..len {
            for j in 0..len {
                s[(ch.flat(i, n), ch.flat(j, n))] = block[(i, j)];
            }
        }
    }
    Ok(OperatorMatrix::new(OpLabel::Squeeze, arity, n, s))
}

fn padded_exp(ch: &Chain, xi: C64, len: usize) -> Result<DMatrix<C64>> {
    let mut pad = len + 24;
    let mut prev = ch.generator(xi, pad).exp().view((0, 0), (len, len)).into_owned();
    loop {
        pad += pad / 2;
        if pad > PAD_CAP {
            return Err(Error::Conditioning(format!(
                "padded squeeze exponential unresolved at {PAD_CAP} levels; |xi| = {}",
                xi.norm()
            )));
        }
        let next = ch.generator(xi, pad).exp().view((0, 0), (len, len)).into_owned();
        let change = (&next - &prev).iter().map(|c| c.norm()).fold(0.0, f64::max);
        prev = next;
        if change <= PAD_TOL {
            return Ok(prev);
        }
    }
}

/// `exp(t N)` for nilpotent `N` by its terminating series.
fn nilpotent_exp(m: &DMatrix<C64>) -> DMatrix<C64> {
    let len = m.nrows();
    let mut acc = DMatrix::<C64>::identity(len, len);
    let mut term = acc.clone();
    for k in 1..len {
        term = &term * m / C64::new(k as f64, 0.0);
        acc += &term;
    }
    acc
}

fn disentangled(ch: &Chain, zeta: C64, len: usize, mid: MiddleFactor) -> DMatrix<C64> {
    let mut kp = DMatrix::<C64>::zeros(len, len);
    for j in 0..len.saturating_sub(1) {
        kp[(j + 1, j)] = C64::new(ch.raise(j), 0.0);
    }
    let up = nilpotent_exp(&(&kp * zeta));
    let down = nilpotent_exp(&(kp.adjoint() * -zeta.conj()));
    let lam = match mid {
        MiddleFactor::Standard => (1.0 - zeta.norm_sqr()).ln(),
        MiddleFactor::AsPrinted => (1.0 + zeta.norm_sqr()).ln(),
    };
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(len, |j, _| C64::new((lam * ch.k0(j)).exp(), 0.0)));
    up * d * down
}

/// `exp(zeta K+) exp(c K0) exp(-conj(zeta) K-)` for arbitrary matrices
/// representing the generators, with `c` set by `mid`.
pub fn zassenhaus_product(
    kplus: &DMatrix<C64>,
    kminus: &DMatrix<C64>,
    k0: &DMatrix<C64>,
    zeta: C64,
    mid: MiddleFactor,
) -> DMatrix<C64> {
    let lam = match mid {
        MiddleFactor::Standard => (1.0 - zeta.norm_sqr()).ln(),
        MiddleFactor::AsPrinted => (1.0 + zeta.norm_sqr()).ln(),
    };
    (kplus * zeta).exp() * (k0 * C64::new(lam, 0.0)).exp() * (kminus * -zeta.conj()).exp()
}

/// Squeezed basis `Phi^xi_n` (one variable) or `Phi^xi_{m,n}` (two) at
/// `point`, all members with index below `count` per variable, row-major.
///
/// The Hermite argument is rescaled so that no division by `zeta` occurs;
/// `zeta = 0` gives the monomial basis directly.
pub fn squeezed_values(count: usize, point: Point, zeta: C64) -> Result<Vec<C64>> {
    let r = 1.0 - zeta.norm_sqr();
    if !(r > 0.0) {
        return Err(Error::Domain(format!("squeezed basis needs |zeta| < 1, got {}", zeta.norm())));
    }
    let v = match point {
        Point::One(z) => {
            let pre = (0.25 * r.ln() + 0.5 * zeta * z * z).exp();
            scaled_hermite((r / 2.0).sqrt() * z, zeta.conj(), count).into_iter().map(|g| g * pre).collect()
        }
        Point::Two(z1, z2) => {
            let pre = (0.5 * r.ln() + zeta * z1 * z2).exp();
            let s = r.sqrt();
            scaled_hermite_2d(s * z1, s * z2, zeta.conj(), count).into_iter().map(|g| g * pre).collect()
        }
    };
    Ok(v)
}

/// One member of the squeezed basis.
pub fn squeezed_basis(index: Index, point: Point, zeta: C64) -> Result<C64> {
    let (count, flat) = match (index, point) {
        (Index::One(n), Point::One(_)) => (n + 1, n),
        (Index::Two(m, n), Point::Two(..)) => {
            let c = m.max(n) + 1;
            (c, m * c + n)
        }
        _ => return arg("index and point arity differ"),
    };
    Ok(squeezed_values(count, point, zeta)?[flat])
}

/// Values and holomorphic partial derivatives (central differences, step `h`).
fn with_partials<F>(f: &F, p: Point, h: f64) -> Result<(Vec<C64>, Vec<Vec<C64>>)>
where
    F: Fn(Point) -> Result<Vec<C64>>,
{
    let h = C64::new(h, 0.0);
    let diff = |a: Vec<C64>, b: Vec<C64>| a.iter().zip(&b).map(|(x, y)| (x - y) / (h * 2.0)).collect::<Vec<_>>();
    let v = f(p)?;
    let d = match p {
        Point::One(z) => vec![diff(f(Point::One(z + h))?, f(Point::One(z - h))?)],
        Point::Two(z1, z2) => vec![
            diff(f(Point::Two(z1 + h, z2))?, f(Point::Two(z1 - h, z2))?),
            diff(f(Point::Two(z1, z2 + h))?, f(Point::Two(z1, z2 - h))?),
        ],
    };
    Ok((v, d))
}

/// Largest ladder defects found by [`squeezed_ladder_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderReport {
    /// `max |A+ Phi_n - sqrt(n+1) Phi_{n+1}|`
    pub raise: f64,
    /// `max |A- Phi_n - sqrt(n) Phi_{n-1}|`
    pub lower: f64,
}

impl LadderReport {
    pub fn max(&self) -> f64 {
        self.raise.max(self.lower)
    }
}

/// Checks `A+- Phi^xi` against the ladder actions for indices up to `n_max`
/// per mode at each point, with `A+ = (z - conj(zeta) d)/sqrt(1 - |zeta|^2)`,
/// `A- = (d - zeta z)/sqrt(1 - |zeta|^2)` and the mode-mixing two-mode forms
/// `A1+ = (z1 - conj(zeta) d2)/..`, `A1- = (d1 - zeta z2)/..` and so on.
pub fn squeezed_ladder_check(zeta: C64, n_max: usize, points: &[Point], h: f64) -> Result<LadderReport> {
    let count = n_max + 2;
    let s = 1.0 / (1.0 - zeta.norm_sqr()).sqrt();
    let f = |p: Point| squeezed_values(count, p, zeta);
    let mut rep = LadderReport { raise: 0.0, lower: 0.0 };
    for &p in points {
        let (v, d) = with_partials(&f, p, h)?;
        match p {
            Point::One(z) => {
                for n in 0..=n_max {
                    let up = (z * v[n] - zeta.conj() * d[0][n]) * s;
                    let dn = (d[0][n] - zeta * z * v[n]) * s;
                    let below = if n > 0 { (n as f64).sqrt() * v[n - 1] } else { C64::new(0.0, 0.0) };
                    rep.raise = rep.raise.max((up - ((n + 1) as f64).sqrt() * v[n + 1]).norm());
                    rep.lower = rep.lower.max((dn - below).norm());
                }
            }
            Point::Two(z1, z2) => {
                let at = |m: usize, n: usize| v[m * count + n];
                for m in 0..=n_max {
                    for n in 0..=n_max {
                        let k = m * count + n;
                        let up1 = (z1 * v[k] - zeta.conj() * d[1][k]) * s;
                        let up2 = (z2 * v[k] - zeta.conj() * d[0][k]) * s;
                        let dn1 = (d[0][k] - zeta * z2 * v[k]) * s;
                        let dn2 = (d[1][k] - zeta * z1 * v[k]) * s;
                        let zero = C64::new(0.0, 0.0);
                        let b1 = if m > 0 { (m as f64).sqrt() * at(m - 1, n) } else { zero };
                        let b2 = if n > 0 { (n as f64).sqrt() * at(m, n - 1) } else { zero };
                        rep.raise = rep
                            .raise
                            .max((up1 - ((m + 1) as f64).sqrt() * at(m + 1, n)).norm())
                            .max((up2 - ((n + 1) as f64).sqrt() * at(m, n + 1)).norm());
                        rep.lower = rep.lower.max((dn1 - b1).norm()).max((dn2 - b2).norm());
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Which coefficient pair represents `b`, `b^dag` on the `k_n` space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RepConvention {
    /// `((1 + alpha^2)/(2 alpha), (1 - alpha^2)/(2 alpha))` as printed
    #[default]
    AsPrinted,
    /// `((1 + alpha)/(2 sqrt(alpha)), (1 - alpha)/(2 sqrt(alpha)))`, the pair that
    /// makes `b k_n = sqrt(n) k_{n-1}` hold
    LadderConsistent,
}

/// `sum_i mult[i] z_i + deriv[i] d/dz_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderOp {
    pub mult: Vec<f64>,
    pub deriv: Vec<f64>,
}

/// Differential-operator form of `b` and `b^dag` (one per mode).
#[derive(Clone, Debug, PartialEq)]
pub struct BargmannRep {
    pub convention: RepConvention,
    pub arity: Arity,
    pub b: Vec<FirstOrderOp>,
    pub bdag: Vec<FirstOrderOp>,
}

pub fn bargmann_rep_bdag_b(alpha: AlphaParam, arity: Arity, convention: RepConvention) -> BargmannRep {
    let al = alpha.alpha();
    let (p, m) = match convention {
        RepConvention::AsPrinted => ((1.0 + al * al) / (2.0 * al), (1.0 - al * al) / (2.0 * al)),
        RepConvention::LadderConsistent => alpha.bogoliubov_pair(),
    };
    let op = |mult: Vec<f64>, deriv: Vec<f64>| FirstOrderOp { mult, deriv };
    let (b, bdag) = match arity {
        Arity::One => (vec![op(vec![-m], vec![p])], vec![op(vec![p], vec![-m])]),
        Arity::Two => (
            vec![op(vec![0.0, -m], vec![p, 0.0]), op(vec![-m, 0.0], vec![0.0, p])],
            vec![op(vec![p, 0.0], vec![0.0, -m]), op(vec![0.0, p], vec![-m, 0.0])],
        ),
    };
    BargmannRep { convention, arity, b, bdag }
}

/// Largest defect of `b k = sqrt(n) k_{n-1}` and `b^dag k = sqrt(n+1) k_{n+1}`
/// (mode by mode) over indices up to `n_max` and the given points.
pub fn rep_ladder_defect(
    rep: &BargmannRep,
    alpha: AlphaParam,
    n_max: usize,
    points: &[Point],
    h: f64,
) -> Result<f64> {
    let count = n_max + 2;
    let spec = match rep.arity {
        Arity::One => BasisSpec::HolHermiteK1D(alpha),
        Arity::Two => BasisSpec::HolHermiteK2D(alpha),
    };
    let f = |p: Point| spec.values(count, p).map(|v| v.values());
    let mut worst = 0.0f64;
    for &p in points {
        let zs: Vec<C64> = match p {
            Point::One(z) => vec![z],
            Point::Two(a, b) => vec![a, b],
        };
        if zs.len() != rep.b[0].mult.len() {
            return arg("point arity does not match the representation");
        }
        let (v, d) = with_partials(&f, p, h)?;
        let apply = |op: &FirstOrderOp, k: usize| -> C64 {
            (0..zs.len()).map(|i| op.mult[i] * zs[i] * v[k] + op.deriv[i] * d[i][k]).sum()
        };
        let indices: Vec<Vec<usize>> = match rep.arity {
            Arity::One => (0..=n_max).map(|n| vec![n]).collect(),
            Arity::Two => (0..=n_max).flat_map(|m| (0..=n_max).map(move |n| vec![m, n])).collect(),
        };
        for idx in indices {
            let flat = |ix: &[usize]| ix.iter().fold(0, |acc, &x| acc * count + x);
            let k = flat(&idx);
            for mode in 0..zs.len() {
                let nm = idx[mode];
                let mut up = idx.clone();
                up[mode] += 1;
                let lowered = if nm > 0 {
                    let mut dn = idx.clone();
                    dn[mode] -= 1;
                    (nm as f64).sqrt() * v[flat(&dn)]
                } else {
                    C64::new(0.0, 0.0)
                };
                worst = worst.max((apply(&rep.b[mode], k) - lowered).norm());
                worst = worst.max((apply(&rep.bdag[mode], k) - ((nm + 1) as f64).sqrt() * v[flat(&up)]).norm());
            }
        }
    }
    Ok(worst)
}
