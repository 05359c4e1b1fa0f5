//! Gauss-Hermite rules on the line, the plane and their products.
//!
//! Every rule integrates against a Gaussian. [`QuadratureGrid`] is the
//! axis-aligned plane rule for `exp(-sx x^2 - sy y^2)`. [`GaussianRule`]
//! handles an arbitrary positive definite quadratic form in any dimension by
//! rotating onto its principal axes; the two-variable orthogonality weight,
//! whose exponent couples `z1` with `conj(z2)`, is diagonalized this way.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::arg;
use crate::hermite::{AlphaParam, Arity, BasisSpec, Point};
use crate::{Error, Result, C64};

/// Default points per axis for one-variable families.
pub const DEFAULT_ORDER_1D: usize = 80;
/// Default points per axis for two-variable families.
pub const DEFAULT_ORDER_2D: usize = 40;

/// Nodes per parallel work item; fixed so sums do not depend on the pool size.
const CHUNK: usize = 512;

/// Nodes and weights of the `order`-point rule for `exp(-t^2)` on the line.
///
/// Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi matrix,
/// are polished by Newton steps on the orthonormal recurrence, and weights
/// are the Christoffel numbers `1/sum_k p_k(x)^2`.
pub fn gauss_hermite(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order < 2 {
        return arg(format!("quadrature order must be at least 2, got {order}"));
    }
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pn, pn1) = orthonormal_pair(order, *x);
            // p_n' = sqrt(2n) p_{n-1}
            let step = pn / ((2.0 * order as f64).sqrt() * pn1);
            *x -= step;
            if step.abs() < 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    // exact mirror symmetry
    for i in 0..order / 2 {
        let s = 0.5 * (nodes[order - 1 - i] - nodes[i]);
        nodes[i] = -s;
        nodes[order - 1 - i] = s;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    let weights = nodes.iter().map(|&x| christoffel(order, x)).collect();
    Ok((nodes, weights))
}

/// `(p_n(x), p_{n-1}(x))` for the polynomials orthonormal under `exp(-t^2)`.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = std::f64::consts::PI.powf(-0.25);
    let mut p1 = std::f64::consts::SQRT_2 * x * p0;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 / (kf + 1.0)).sqrt() * x * p1) - (kf / (kf + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn christoffel(n: usize, x: f64) -> f64 {
    let mut p0 = std::f64::consts::PI.powf(-0.25);
    let mut p1 = std::f64::consts::SQRT_2 * x * p0;
    let mut s = p0 * p0 + p1 * p1;
    for k in 1..n - 1 {
        let kf = k as f64;
        let p2 = ((2.0 / (kf + 1.0)).sqrt() * x * p1) - (kf / (kf + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
        s += p1 * p1;
    }
    1.0 / s
}

/// Tensor-product rule on the plane for the weight `exp(-sx x^2 - sy y^2)`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub order: usize,
    pub scale: (f64, f64),
}

/// Builds the `order x order` plane rule for `exp(-sx x^2 - sy y^2)`.
pub fn build_grid(order: usize, sx: f64, sy: f64) -> Result<QuadratureGrid> {
    if !(sx > 0.0 && sy > 0.0 && sx.is_finite() && sy.is_finite()) {
        return arg(format!("grid scales must be positive, got ({sx}, {sy})"));
    }
    let (t, w) = gauss_hermite(order)?;
    let (rx, ry) = (1.0 / sx.sqrt(), 1.0 / sy.sqrt());
    let mut nodes = Vec::with_capacity(order * order);
    let mut weights = Vec::with_capacity(order * order);
    for i in 0..order {
        for j in 0..order {
            nodes.push((t[i] * rx, t[j] * ry));
            weights.push(w[i] * w[j] * rx * ry);
        }
    }
    Ok(QuadratureGrid { nodes, weights, order, scale: (sx, sy) })
}

impl QuadratureGrid {
    /// `exp(sx x^2 + sy y^2)` at node `i`: multiply an integrand by this when
    /// it already contains its full weight.
    pub fn compensation(&self, i: usize) -> f64 {
        let (x, y) = self.nodes[i];
        (self.scale.0 * x * x + self.scale.1 * y * y).exp()
    }

    pub fn point(&self, i: usize) -> C64 {
        C64::new(self.nodes[i].0, self.nodes[i].1)
    }
}

/// `sum_i w_i f(z_i)`, approximating `integral f(z) exp(-sx x^2 - sy y^2) dx dy`.
///
/// The Gaussian of the target integral must either match the grid scale or be
/// folded into `f` with [`QuadratureGrid::compensation`].
pub fn integrate_plane<F>(f: F, grid: &QuadratureGrid) -> Result<C64>
where
    F: Fn(C64) -> C64 + Sync,
{
    let terms: Vec<C64> = (0..grid.nodes.len())
        .map(|i| {
            let v = f(grid.point(i));
            if v.is_finite() {
                Ok(grid.weights[i] * v)
            } else {
                Err(Error::NonFiniteIntegrand { node: i, x: grid.nodes[i].0, y: grid.nodes[i].1 })
            }
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// Product rule over two independent plane grids.
pub fn integrate_plane2<F>(f: F, grid1: &QuadratureGrid, grid2: &QuadratureGrid) -> Result<C64>
where
    F: Fn(C64, C64) -> C64 + Sync,
{
    let n2 = grid2.nodes.len();
    let rows: Vec<C64> = (0..grid1.nodes.len())
        .into_par_iter()
        .map(|i| {
            let z1 = grid1.point(i);
            let mut row = Vec::with_capacity(n2);
            for j in 0..n2 {
                let v = f(z1, grid2.point(j));
                if !v.is_finite() {
                    return Err(Error::NonFiniteIntegrand {
                        node: i * n2 + j,
                        x: grid1.nodes[i].0,
                        y: grid1.nodes[i].1,
                    });
                }
                row.push(grid2.weights[j] * v);
            }
            Ok(grid1.weights[i] * pairwise_sum(&row))
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&rows))
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    if v.len() <= 16 {
        v.iter().fold(C64::new(0.0, 0.0), |a, b| a + b)
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// Product Gauss-Hermite rule for `exp(-(t - c)^T A (t - c))` on `R^d`.
#[derive(Clone, Debug)]
pub struct GaussianRule {
    pub dim: usize,
    /// node coordinates, `dim` numbers per node
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `(t - c)^T A (t - c)` at each node; adding it to the log of an
    /// integrand removes the Gaussian the rule already carries
    pub compensation: Vec<f64>,
}

impl GaussianRule {
    pub fn new(a: &DMatrix<f64>, center: &[f64], order: usize) -> Result<Self> {
        let dim = a.nrows();
        if a.ncols() != dim || center.len() != dim || dim == 0 {
            return arg("quadratic form and center must agree in dimension");
        }
        let eig = SymmetricEigen::new(a.clone());
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return arg("integrand is not Gaussian-decaying in every direction");
        }
        let (t, w) = gauss_hermite(order)?;
        let axes: Vec<DVector<f64>> = (0..dim)
            .map(|k| eig.eigenvectors.column(k) / eig.eigenvalues[k].sqrt())
            .collect();
        let jac = 1.0 / eig.eigenvalues.iter().product::<f64>().sqrt();
        let total = order.pow(dim as u32);
        let mut nodes = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut compensation = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut wt = jac;
            let mut r2 = 0.0;
            let mut pt = center.to_vec();
            for (k, &i) in idx.iter().enumerate() {
                wt *= w[i];
                r2 += t[i] * t[i];
                for (p, ax) in pt.iter_mut().zip(axes[k].iter()) {
                    *p += t[i] * ax;
                }
            }
            nodes.extend_from_slice(&pt);
            weights.push(wt);
            compensation.push(r2);
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < order {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(Self { dim, nodes, weights, compensation })
    }

    /// Rule matched to `exp(q(t))`, where `q` is a real quadratic polynomial.
    ///
    /// The form is recovered from `q` by polarization. With `center` the
    /// linear part of `q` shifts the nodes onto the maximum; without it the
    /// linear part stays in the integrand.
    pub fn adapted<Q>(dim: usize, order: usize, q: Q, center: bool) -> Result<Self>
    where
        Q: Fn(&[f64]) -> f64,
    {
        let (a, b) = quadratic_part(dim, &q);
        let c = if center {
            let chol = a
                .clone()
                .cholesky()
                .ok_or_else(|| Error::Argument("integrand is not Gaussian-decaying".into()))?;
            (chol.solve(&b) * 0.5).iter().copied().collect()
        } else {
            vec![0.0; dim]
        };
        Self::new(&a, &c, order)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    /// Fixed-size node ranges for parallel accumulation.
    pub(crate) fn chunks(&self) -> Vec<Range<usize>> {
        (0..self.len()).step_by(CHUNK).map(|s| s..(s + CHUNK).min(self.len())).collect()
    }
}

/// `(A, b)` with `q(t) = -t^T A t + b^T t + q(0)`.
fn quadratic_part<Q: Fn(&[f64]) -> f64>(dim: usize, q: &Q) -> (DMatrix<f64>, DVector<f64>) {
    let (a, b) = complex_quadratic_part(dim, &|t: &[f64]| C64::new(q(t), 0.0));
    (a.map(|c| c.re), b.map(|c| c.re))
}

/// Polarization of a complex quadratic polynomial sampled at real points.
pub(crate) fn complex_quadratic_part<Q: Fn(&[f64]) -> C64>(dim: usize, q: &Q) -> (DMatrix<C64>, DVector<C64>) {
    let zero = vec![0.0; dim];
    let q0 = q(&zero);
    let mut a = DMatrix::zeros(dim, dim);
    let mut b = DVector::zeros(dim);
    let unit = |k: usize, s: f64| {
        let mut e = zero.clone();
        e[k] = s;
        e
    };
    for k in 0..dim {
        let (qp, qm) = (q(&unit(k, 1.0)), q(&unit(k, -1.0)));
        a[(k, k)] = -(qp + qm - 2.0 * q0) / 2.0;
        b[k] = (qp - qm) / 2.0;
    }
    for k in 0..dim {
        for l in k + 1..dim {
            let mut e = zero.clone();
            e[k] = 1.0;
            e[l] = 1.0;
            let v = -(q(&e) - q0 - b[k] - b[l] + a[(k, k)] + a[(l, l)]) / 2.0;
            a[(k, l)] = v;
            a[(l, k)] = v;
        }
    }
    (a, b)
}

/// Gauss-Hermite rule for `exp(-t^T A t + b^T t)` with complex symmetric `A`
/// whose real part is positive definite.
///
/// The integrand is continued to complex `t` and the contour moved to
/// `t = c + L^{-T} u`, `A = L L^T`, `c = A^{-1} b / 2`, where the exponent
/// becomes `-u^T u` plus a constant. Polynomial factors of degree below
/// `2 * order` per axis are then integrated exactly.
#[derive(Clone, Debug)]
pub struct ContourRule {
    pub dim: usize,
    base: GaussianRule,
    a_inv: DMatrix<C64>,
    map: DMatrix<C64>,
    /// `ln(weight) + u^T u - ln det L` per node
    pub ln_weight: Vec<C64>,
}

impl ContourRule {
    pub fn new(a: &DMatrix<C64>, order: usize) -> Result<Self> {
        let dim = a.nrows();
        let re = a.map(|c| c.re);
        if SymmetricEigen::new(re).eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return arg("integrand is not Gaussian-decaying in every direction");
        }
        let l = symmetric_cholesky(a).ok_or_else(|| Error::Argument("singular quadratic form".into()))?;
        let l_inv = l.clone().try_inverse().ok_or_else(|| Error::Argument("singular quadratic form".into()))?;
        let a_inv = a.clone().try_inverse().ok_or_else(|| Error::Argument("singular quadratic form".into()))?;
        let ln_det: C64 = (0..dim).map(|k| l[(k, k)].ln()).sum();
        let base = GaussianRule::new(&DMatrix::identity(dim, dim), &vec![0.0; dim], order)?;
        let ln_weight = (0..base.len())
            .map(|k| C64::new(base.weights[k].ln() + base.compensation[k], 0.0) - ln_det)
            .collect();
        Ok(Self { dim, base, a_inv, map: l_inv.transpose(), ln_weight })
    }

    /// Rule matched to the quadratic part of `q`, sampled at real points.
    pub fn adapted<Q: Fn(&[f64]) -> C64>(dim: usize, order: usize, q: Q) -> Result<(Self, DVector<C64>)> {
        let (a, b) = complex_quadratic_part(dim, &q);
        Ok((Self::new(&a, order)?, b))
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Stationary point `A^{-1} b / 2` for the linear coefficient `b`.
    pub fn center(&self, b: &DVector<C64>) -> DVector<C64> {
        &self.a_inv * b * C64::new(0.5, 0.0)
    }

    /// Complex node `k` around `center`.
    pub fn node(&self, center: &DVector<C64>, k: usize) -> Vec<C64> {
        let u = self.base.node(k);
        (0..self.dim)
            .map(|r| center[r] + (0..self.dim).map(|c| self.map[(r, c)] * u[c]).sum::<C64>())
            .collect()
    }

    /// Linear coefficient of `q` at real points, by central differences of
    /// an exact quadratic.
    pub fn linear_part<Q: Fn(&[f64]) -> C64>(&self, q: Q) -> DVector<C64> {
        let mut b = DVector::zeros(self.dim);
        let mut e = vec![0.0; self.dim];
        for k in 0..self.dim {
            e[k] = 1.0;
            let qp = q(&e);
            e[k] = -1.0;
            let qm = q(&e);
            e[k] = 0.0;
            b[k] = (qp - qm) / 2.0;
        }
        b
    }
}

/// `A = L L^T` for complex symmetric `A` with principal square roots on the diagonal.
fn symmetric_cholesky(a: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    let n = a.nrows();
    let mut l = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.norm() == 0.0 {
            return None;
        }
        l[(j, j)] = d.sqrt();
        for i in j + 1..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / l[(j, j)];
        }
    }
    Some(l)
}

/// Family point and its formal conjugate at complex coordinates.
///
/// For real coordinates the second point is the complex conjugate of the
/// first; for complex ones it is the analytic continuation of that map.
pub(crate) fn complex_points(spec: &BasisSpec, t: &[C64]) -> (Point, Point) {
    let i = C64::i();
    match (spec.is_physical(), t.len()) {
        (true, 1) => (Point::One(t[0]), Point::One(t[0])),
        (true, _) => (Point::Two(t[0], t[1]), Point::Two(t[0], t[1])),
        (false, 2) => (Point::One(t[0] + i * t[1]), Point::One(t[0] - i * t[1])),
        _ => (
            Point::Two(t[0] + i * t[1], t[2] + i * t[3]),
            Point::Two(t[0] - i * t[1], t[2] - i * t[3]),
        ),
    }
}

pub(crate) fn real_coords(t: &[f64]) -> Vec<C64> {
    t.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Sums per-chunk partial results in chunk order.
pub(crate) fn reduce_chunks<T, F, G>(chunks: Vec<Range<usize>>, map: F, combine: G) -> Result<T>
where
    T: Send,
    F: Fn(Range<usize>) -> Result<T> + Sync,
    G: Fn(T, T) -> T,
{
    let parts: Vec<T> = chunks.into_par_iter().map(|r| map(r)).collect::<Result<_>>()?;
    pairwise_reduce(parts, &combine).ok_or_else(|| Error::Argument("empty quadrature rule".into()))
}

fn pairwise_reduce<T, G: Fn(T, T) -> T>(mut v: Vec<T>, combine: &G) -> Option<T> {
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(combine(a, b)),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop()
}

/// Measure against which a family is orthonormal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    /// `exp(alpha x^2 - y^2/alpha) dx dy` on the plane
    VanEijndhovenMeyers(AlphaParam),
    /// `exp(-|z|^2) dx dy / pi`
    Bargmann,
    /// weight of `h_{m,n}` on `C^2`: the exponent
    /// `-(1-alpha)/4 |conj z2 + z1|^2 - (1-alpha)/(4 alpha) |conj z2 - z1|^2 + Re(z1 z2)`
    /// with the measure `du dv`, `u = (conj z2 + z1)/2`, `v = (conj z2 - z1)/2`
    /// (one quarter of Lebesgue measure on `C^2`)
    VanEijndhovenMeyers2D(AlphaParam),
    /// `exp(-|z1|^2 - |z2|^2) dz1 dz2 / pi^2`
    Bargmann2D,
    /// Lebesgue measure on `R` or `R^2`, for the oscillator families
    Lebesgue,
}

impl Weight {
    /// Logarithm of the weight density with respect to Lebesgue measure.
    pub fn ln_density(&self, p: Point) -> f64 {
        use std::f64::consts::PI;
        match (*self, p) {
            (Weight::VanEijndhovenMeyers(a), Point::One(z)) => {
                a.alpha() * z.re * z.re - z.im * z.im / a.alpha()
            }
            (Weight::Bargmann, Point::One(z)) => -z.norm_sqr() - PI.ln(),
            (Weight::VanEijndhovenMeyers2D(a), Point::Two(z1, z2)) => {
                let al = a.alpha();
                let u = (z2.conj() + z1).norm_sqr();
                let v = (z2.conj() - z1).norm_sqr();
                -(1.0 - al) / 4.0 * u - (1.0 - al) / (4.0 * al) * v + (z1 * z2).re - 4f64.ln()
            }
            (Weight::Bargmann2D, Point::Two(z1, z2)) => {
                -z1.norm_sqr() - z2.norm_sqr() - 2.0 * PI.ln()
            }
            _ => 0.0,
        }
    }

    /// [`Weight::ln_density`] written in `z` and `conj z` separately, so that
    /// it continues analytically off the real domain.
    pub(crate) fn ln_density_split(&self, hol: Point, anti: Point) -> C64 {
        use std::f64::consts::PI;
        let half = C64::new(0.5, 0.0);
        match (*self, hol, anti) {
            (Weight::VanEijndhovenMeyers(a), Point::One(z), Point::One(zb)) => {
                let x = (z + zb) * half;
                let y = (z - zb) / C64::new(0.0, 2.0);
                a.alpha() * x * x - y * y / a.alpha()
            }
            (Weight::Bargmann, Point::One(z), Point::One(zb)) => -z * zb - PI.ln(),
            (Weight::VanEijndhovenMeyers2D(a), Point::Two(z1, z2), Point::Two(b1, b2)) => {
                let al = a.alpha();
                -(1.0 - al) / 4.0 * (b2 + z1) * (z2 + b1) - (1.0 - al) / (4.0 * al) * (b2 - z1) * (z2 - b1)
                    + (z1 * z2 + b1 * b2) * half
                    - 4f64.ln()
            }
            (Weight::Bargmann2D, Point::Two(z1, z2), Point::Two(b1, b2)) => {
                -z1 * b1 - z2 * b2 - 2.0 * PI.ln()
            }
            _ => C64::new(0.0, 0.0),
        }
    }

    /// Real dimension of the integration domain for `spec` under this weight,
    /// or an error if the pair is not one of the orthonormality settings.
    pub fn domain_dim(&self, spec: &BasisSpec) -> Result<usize> {
        match (self, spec) {
            (Weight::VanEijndhovenMeyers(_), BasisSpec::HolHermiteH1D(_)) => Ok(2),
            (Weight::Bargmann, BasisSpec::Monomial1D | BasisSpec::HolHermiteK1D(_)) => Ok(2),
            (Weight::VanEijndhovenMeyers2D(_), BasisSpec::HolHermiteH2D(_)) => Ok(4),
            (Weight::Bargmann2D, BasisSpec::Monomial2D | BasisSpec::HolHermiteK2D(_)) => Ok(4),
            (Weight::Lebesgue, BasisSpec::OscillatorPsi1D { .. }) => Ok(1),
            (Weight::Lebesgue, BasisSpec::OscillatorPsi2D { .. }) => Ok(2),
            _ => arg(format!("weight {self:?} does not match family {}", spec.name())),
        }
    }

    /// The weight under which `spec` is orthonormal, if it has one here.
    pub fn natural_for(spec: &BasisSpec) -> Result<Weight> {
        match *spec {
            BasisSpec::Monomial1D | BasisSpec::HolHermiteK1D(_) => Ok(Weight::Bargmann),
            BasisSpec::HolHermiteH1D(a) => Ok(Weight::VanEijndhovenMeyers(a)),
            BasisSpec::Monomial2D | BasisSpec::HolHermiteK2D(_) => Ok(Weight::Bargmann2D),
            BasisSpec::HolHermiteH2D(a) => Ok(Weight::VanEijndhovenMeyers2D(a)),
            BasisSpec::OscillatorPsi1D { .. } | BasisSpec::OscillatorPsi2D { .. } => Ok(Weight::Lebesgue),
            _ => arg(format!("{} has no Gaussian orthogonality weight", spec.name())),
        }
    }
}

/// Maps real coordinates of a `dim`-dimensional domain to a family point.
pub(crate) fn coords_to_point(t: &[f64]) -> Point {
    match t.len() {
        1 => Point::One(C64::new(t[0], 0.0)),
        2 => Point::One(C64::new(t[0], t[1])),
        _ => Point::Two(C64::new(t[0], t[1]), C64::new(t[2], t[3])),
    }
}

/// Maps coordinates for a given family: oscillator families on `R^2` take
/// `(q1, q2)`, everything else reads pairs as complex numbers.
pub(crate) fn family_point(spec: &BasisSpec, t: &[f64]) -> Point {
    if spec.is_physical() && t.len() == 2 {
        Point::Two(C64::new(t[0], 0.0), C64::new(t[1], 0.0))
    } else {
        coords_to_point(t)
    }
}

/// Rule matched to `|Phi|^2 * weight` for a family's common Gaussian factor.
pub fn family_rule(spec: &BasisSpec, weight: &Weight, order: usize) -> Result<GaussianRule> {
    let dim = weight.domain_dim(spec)?;
    let spec = *spec;
    let weight = *weight;
    GaussianRule::adapted(
        dim,
        order,
        move |t| {
            let p = family_point(&spec, t);
            2.0 * log_scale(&spec, p).re + weight.ln_density(p)
        },
        true,
    )
}

pub(crate) fn log_scale(spec: &BasisSpec, p: Point) -> C64 {
    spec.values(1, p).map(|v| v.log_scale).unwrap_or(C64::new(f64::NAN, 0.0))
}

/// Quadrature inner products `G[j][k] = integral Phi_j conj(Phi_k) weight`.
///
/// For two-variable families `N^2 x N^2`, row-major over `(m, n)`.
pub fn gram_matrix(spec: &BasisSpec, weight: &Weight, n: usize, order: usize) -> Result<DMatrix<C64>> {
    if n == 0 {
        return arg("gram matrix needs N >= 1");
    }
    let rule = family_rule(spec, weight, order)?;
    gram_matrix_on(spec, weight, n, &rule)
}

/// [`gram_matrix`] on a caller-supplied rule.
pub fn gram_matrix_on(
    spec: &BasisSpec,
    weight: &Weight,
    n: usize,
    rule: &GaussianRule,
) -> Result<DMatrix<C64>> {
    let dim = weight.domain_dim(spec)?;
    if rule.dim != dim {
        return arg(format!("rule dimension {} does not match domain dimension {dim}", rule.dim));
    }
    let size = match spec.arity() {
        Arity::One => n,
        Arity::Two => n * n,
    };
    reduce_chunks(
        rule.chunks(),
        |range| {
            let mut g = DMatrix::<C64>::zeros(size, size);
            for i in range {
                let t = rule.node(i);
                let p = family_point(spec, t);
                let vals = spec.values(n, p)?;
                let s = rule.weights[i]
                    * (2.0 * vals.log_scale.re + weight.ln_density(p) + rule.compensation[i]).exp();
                if !s.is_finite() {
                    return Err(Error::NonFiniteIntegrand { node: i, x: t[0], y: t[1 % t.len()] });
                }
                let f = &vals.mantissa;
                for j in 0..size {
                    let fj = f[j] * s;
                    for k in 0..size {
                        g[(j, k)] += fj * f[k].conj();
                    }
                }
            }
            Ok(g)
        },
        |a, b| a + b,
    )
}

/// Largest off-diagonal modulus and largest diagonal deviation from 1.
pub fn identity_defect(m: &DMatrix<C64>) -> (f64, f64) {
    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            if j == k {
                diag = diag.max((m[(j, k)] - 1.0).norm());
            } else {
                off = off.max(m[(j, k)].norm());
            }
        }
    }
    (off, diag)
}
