//! Truncated Fock-space states and operators.
//!
//! Two-mode indices are flattened row-major: `(m, n) -> m * N + n`, with `N`
//! the truncation per mode. Operators, coefficient matrices and the Schmidt
//! analysis all use this order.

mod squeeze;

pub use squeeze::*;

use nalgebra::{DMatrix, DVector};

use crate::error::arg;
use crate::hermite::{AlphaParam, Arity, BasisSpec, Point};
use crate::quadrature::{gram_matrix, Weight};
use crate::{Error, Result, C64};

/// Tail estimate above which a coherent state carries a truncation warning.
pub const TAIL_WARNING: f64 = 1e-6;

/// Amplitudes `c_0 .. c_{N-1}` in an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub coeffs: DVector<C64>,
}

impl FockVector {
    pub fn new(coeffs: DVector<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return arg("Fock vector needs at least one coefficient");
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NumericRange("non-finite Fock coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn overlap(&self, other: &FockVector) -> C64 {
        self.coeffs.dotc(&other.coeffs)
    }
}

/// Two-mode amplitudes `c_{m,n}`, `m, n < N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffMatrix {
    pub coeffs: DMatrix<C64>,
}

impl CoeffMatrix {
    pub fn new(coeffs: DMatrix<C64>) -> Result<Self> {
        if coeffs.nrows() != coeffs.ncols() || coeffs.is_empty() {
            return arg("coefficient matrix must be square and nonempty");
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NumericRange("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// Outer product `u v^T`.
    pub fn product(u: &FockVector, v: &FockVector) -> Result<Self> {
        Self::new(&u.coeffs * v.coeffs.transpose())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn flatten(&self) -> DVector<C64> {
        let n = self.dim();
        DVector::from_fn(n * n, |k, _| self.coeffs[(k / n, k % n)])
    }

    pub fn from_flat(n: usize, v: &DVector<C64>) -> Result<Self> {
        if v.len() != n * n {
            return arg(format!("expected {} entries, got {}", n * n, v.len()));
        }
        Self::new(DMatrix::from_fn(n, n, |m, k| v[m * n + k]))
    }
}

/// A one- or two-mode state.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Single(FockVector),
    Bipartite(CoeffMatrix),
}

impl State {
    pub fn arity(&self) -> Arity {
        match self {
            State::Single(_) => Arity::One,
            State::Bipartite(_) => Arity::Two,
        }
    }

    /// Truncation per mode.
    pub fn modes_dim(&self) -> usize {
        match self {
            State::Single(v) => v.dim(),
            State::Bipartite(c) => c.dim(),
        }
    }

    pub fn flat(&self) -> DVector<C64> {
        match self {
            State::Single(v) => v.coeffs.clone(),
            State::Bipartite(c) => c.flatten(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.flat().norm()
    }
}

/// Coherent state with its truncation diagnostics.
#[derive(Clone, Debug)]
pub struct CoherentState {
    pub state: State,
    /// largest modulus among the last two indices (per mode) over the largest modulus overall
    pub tail: f64,
    pub warnings: Vec<String>,
}

/// `c_z = sum k_n(z) e_n` (one point) or `sum k_{m,n}(z1, z2) e_m (x) f_n`
/// (two points), truncated at `N` per mode.
///
/// Left unnormalized unless `normalize` is set.
pub fn coherent_state(point: Point, alpha: AlphaParam, n: usize, normalize: bool) -> Result<CoherentState> {
    if n < 2 {
        return arg("coherent state needs N >= 2");
    }
    let (state, tail) = match point {
        Point::One(_) => {
            let v = DVector::from_vec(BasisSpec::HolHermiteK1D(alpha).values(n, point)?.values());
            let tail = tail_ratio(v.iter().copied(), v.iter().skip(n - 2).copied());
            (State::Single(FockVector::new(v)?), tail)
        }
        Point::Two(..) => {
            let vals = BasisSpec::HolHermiteK2D(alpha).values(n, point)?.values();
            let m = DMatrix::from_fn(n, n, |i, j| vals[i * n + j]);
            let edge = (0..n * n).filter(|k| k / n >= n - 2 || k % n >= n - 2).map(|k| vals[k]);
            let tail = tail_ratio(vals.iter().copied(), edge);
            (State::Bipartite(CoeffMatrix::new(m)?), tail)
        }
    };
    let state = if normalize { normalized(state)? } else { state };
    let mut warnings = Vec::new();
    if tail > TAIL_WARNING {
        warnings.push(format!("truncation tail estimate {tail:.3e} exceeds {TAIL_WARNING:e}; raise N"));
    }
    Ok(CoherentState { state, tail, warnings })
}

fn tail_ratio(all: impl Iterator<Item = C64>, edge: impl Iterator<Item = C64>) -> f64 {
    let top = all.map(|c| c.norm()).fold(0.0, f64::max);
    let last = edge.map(|c| c.norm()).fold(0.0, f64::max);
    if top > 0.0 {
        last / top
    } else {
        0.0
    }
}

fn normalized(state: State) -> Result<State> {
    let s = state.norm();
    if !(s > 0.0) {
        return arg("cannot normalize a zero state");
    }
    let k = C64::new(1.0 / s, 0.0);
    Ok(match state {
        State::Single(v) => State::Single(FockVector::new(v.coeffs * k)?),
        State::Bipartite(c) => State::Bipartite(CoeffMatrix::new(c.coeffs * k)?),
    })
}

/// `e^{-|z|^2/2} z^n / sqrt(n!)`.
pub fn standard_cs(z: C64, n: usize) -> Result<FockVector> {
    if n < 2 {
        return arg("coherent state needs N >= 2");
    }
    let mut v = DVector::from_element(n, C64::new((-z.norm_sqr() / 2.0).exp(), 0.0));
    for k in 1..n {
        v[k] = v[k - 1] * z / (k as f64).sqrt();
    }
    FockVector::new(v)
}

/// Operator names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpLabel {
    B,
    Bdag,
    BMinus,
    BPlus,
    B1Minus,
    B2Minus,
    B1Plus,
    B2Plus,
    KPlus,
    KMinus,
    K0,
    Squeeze,
    /// product of two labelled operators
    Product,
}

/// Truncated operator: `N x N` for one mode, `N^2 x N^2` for two.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub label: OpLabel,
    pub arity: Arity,
    /// truncation per mode
    pub n: usize,
    pub matrix: DMatrix<C64>,
}

impl OperatorMatrix {
    pub(crate) fn new(label: OpLabel, arity: Arity, n: usize, matrix: DMatrix<C64>) -> Self {
        Self { label, arity, n, matrix }
    }

    pub fn product(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.arity != other.arity || self.n != other.n {
            return arg("operators act on different spaces");
        }
        Ok(Self::new(OpLabel::Product, self.arity, self.n, &self.matrix * &other.matrix))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<DMatrix<C64>> {
        if self.matrix.shape() != other.matrix.shape() {
            return arg("operators act on different spaces");
        }
        Ok(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }
}

fn real(m: DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Annihilator with `b e_n = sqrt(n) e_{n-1}`, and its adjoint.
pub fn ladder_ops(n: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if n < 2 {
        return arg("ladder operators need N >= 2");
    }
    let b = real(DMatrix::from_fn(n, n, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 }));
    let bd = b.adjoint();
    Ok((
        OperatorMatrix::new(OpLabel::B, Arity::One, n, b),
        OperatorMatrix::new(OpLabel::Bdag, Arity::One, n, bd),
    ))
}

/// Bogoliubov pairs. One mode: `[B-, B+]`. Two modes:
/// `[B1-, B2-, B1+, B2+]` built on `b (x) I` and `I (x) b`.
pub fn bogoliubov_ops(alpha: AlphaParam, n: usize, arity: Arity) -> Result<Vec<OperatorMatrix>> {
    if n < 4 {
        return arg("Bogoliubov operators need N >= 4");
    }
    let (cp, cm) = alpha.bogoliubov_pair();
    let (cp, cm) = (C64::new(cp, 0.0), C64::new(cm, 0.0));
    let (b, bd) = ladder_ops(n)?;
    match arity {
        Arity::One => {
            let minus = &b.matrix * cp + &bd.matrix * cm;
            let plus = minus.adjoint();
            Ok(vec![
                OperatorMatrix::new(OpLabel::BMinus, arity, n, minus),
                OperatorMatrix::new(OpLabel::BPlus, arity, n, plus),
            ])
        }
        Arity::Two => {
            let id = DMatrix::<C64>::identity(n, n);
            let (b1, b2) = (b.matrix.kronecker(&id), id.kronecker(&b.matrix));
            let (b1d, b2d) = (b1.adjoint(), b2.adjoint());
            let m1 = &b1 * cp + &b2d * cm;
            let m2 = &b1d * cm + &b2 * cp;
            let (p1, p2) = (m1.adjoint(), m2.adjoint());
            Ok(vec![
                OperatorMatrix::new(OpLabel::B1Minus, arity, n, m1),
                OperatorMatrix::new(OpLabel::B2Minus, arity, n, m2),
                OperatorMatrix::new(OpLabel::B1Plus, arity, n, p1),
                OperatorMatrix::new(OpLabel::B2Plus, arity, n, p2),
            ])
        }
    }
}

/// Which rows enter a residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ResidualRows {
    /// all but the last two indices (per mode), where truncation corrupts
    /// every ladder identity
    #[default]
    Interior,
    All,
}

/// Flat indices kept by `rows` for truncation `n` per mode.
pub fn kept_indices(arity: Arity, n: usize, rows: ResidualRows) -> Vec<usize> {
    let keep = |k: usize| rows == ResidualRows::All || k + 2 < n;
    match arity {
        Arity::One => (0..n).filter(|&k| keep(k)).collect(),
        Arity::Two => (0..n * n).filter(|&k| keep(k / n) && keep(k % n)).collect(),
    }
}

/// `||(op s - lambda s)|_rows|| / ||s||`.
pub fn annihilation_residual(
    state: &State,
    op: &OperatorMatrix,
    eigenvalue: C64,
    rows: ResidualRows,
) -> Result<f64> {
    let s = state.flat();
    if op.arity != state.arity() || op.matrix.ncols() != s.len() {
        return arg("operator and state dimensions differ");
    }
    let norm = s.norm();
    if !(norm > 0.0) {
        return arg("residual of a zero state");
    }
    let r = &op.matrix * &s - &s * eigenvalue;
    let kept = kept_indices(op.arity, op.n, rows);
    let sq: f64 = kept.iter().map(|&k| r[k].norm_sqr()).sum();
    Ok(sq.sqrt() / norm)
}

/// Largest `|m - target|` over the kept rows and columns.
pub fn block_defect(m: &DMatrix<C64>, target: &DMatrix<C64>, arity: Arity, n: usize, rows: ResidualRows) -> f64 {
    let kept = kept_indices(arity, n, rows);
    let mut d = 0.0f64;
    for &i in &kept {
        for &j in &kept {
            d = d.max((m[(i, j)] - target[(i, j)]).norm());
        }
    }
    d
}

/// `max |M - I|` with `M = integral conj(c(z)) c(z)^T dmu(z)` over the
/// Bargmann measure, `c(z)` the coherent-state coefficient vector.
pub fn resolution_identity_residual(alpha: AlphaParam, n: usize, order: usize, arity: Arity) -> Result<f64> {
    let (spec, weight) = match arity {
        Arity::One => (BasisSpec::HolHermiteK1D(alpha), Weight::Bargmann),
        Arity::Two => (BasisSpec::HolHermiteK2D(alpha), Weight::Bargmann2D),
    };
    // G[j][k] = integral k_j conj(k_k), so M = conj(G)
    let m = gram_matrix(&spec, &weight, n, order)?.map(|c| c.conj());
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    Ok(block_defect(&m, &id, arity, n, ResidualRows::All))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ladder_basics() {
        let (b, bd) = ladder_ops(6).unwrap();
        let e0 = DVector::from_fn(6, |k, _| c(if k == 0 { 1.0 } else { 0.0 }, 0.0));
        assert!((&b.matrix * &e0).norm() == 0.0);
        let e1 = &bd.matrix * &e0;
        assert!((e1[1] - 1.0).norm() < 1e-15 && e1.norm() - 1.0 < 1e-15);
        let comm = b.commutator(&bd).unwrap();
        for k in 0..5 {
            assert!((comm[(k, k)] - 1.0).norm() < 1e-14);
        }
        assert!((comm[(5, 5)] + 5.0).norm() < 1e-14);
    }

    #[test]
    fn coherent_state_at_origin_has_even_support() {
        let a = AlphaParam::new(0.4).unwrap();
        let cs = coherent_state(Point::One(c(0.0, 0.0)), a, 10, false).unwrap();
        let State::Single(v) = cs.state else { panic!() };
        for k in (1..10).step_by(2) {
            assert_eq!(v.coeffs[k].norm(), 0.0);
        }
        assert!(v.coeffs[2].norm() > 0.0);
    }

    #[test]
    fn tail_warning_fires() {
        let a = AlphaParam::new(0.5).unwrap();
        let cs = coherent_state(Point::One(c(3.0, 0.0)), a, 4, false).unwrap();
        assert!(!cs.warnings.is_empty());
        let cs = coherent_state(Point::One(c(0.1, 0.0)), a, 30, true).unwrap();
        assert!(cs.warnings.is_empty());
        assert!((cs.state.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residual_rejects_mismatch_and_zero() {
        let a = AlphaParam::new(0.5).unwrap();
        let ops = bogoliubov_ops(a, 6, Arity::One).unwrap();
        let z = State::Single(FockVector::new(DVector::zeros(6)).unwrap());
        assert!(annihilation_residual(&z, &ops[0], c(0.0, 0.0), ResidualRows::Interior).is_err());
        let s = State::Single(standard_cs(c(0.1, 0.0), 5).unwrap());
        assert!(annihilation_residual(&s, &ops[0], c(0.0, 0.0), ResidualRows::Interior).is_err());
    }

    #[test]
    fn kept_indices_drop_corner() {
        assert_eq!(kept_indices(Arity::One, 5, ResidualRows::Interior), vec![0, 1, 2]);
        assert_eq!(kept_indices(Arity::Two, 3, ResidualRows::Interior), vec![0]);
        assert_eq!(kept_indices(Arity::Two, 3, ResidualRows::All).len(), 9);
    }
}
