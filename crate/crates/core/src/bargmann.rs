//! Segal-Bargmann transform kernels and their action on basis families.
//!
//! Every kernel takes its second argument unconjugated; `K(x, w)` below means
//! the printed kernel evaluated at `(x, conj w)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::arg;
use crate::hermite::{AlphaParam, Arity, BasisSpec, Point};
use crate::quadrature::{
    complex_points, family_point, family_rule, pairwise_sum, real_coords, reduce_chunks, ContourRule, Weight,
};
use crate::{Error, Result, C64};

/// Transform kernel selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransformSpec {
    /// physical line to Bargmann space
    A1 { a: f64 },
    /// `h_n` to `z^n/sqrt(n!)`
    B1(AlphaParam),
    /// physical line to the `h_n` space
    C1 { a: f64, alpha: AlphaParam },
    /// physical line to the `k_n` space
    C1Hat { a: f64, alpha: AlphaParam },
    A2 { a: f64, b: f64 },
    B2(AlphaParam),
    C2 { a: f64, b: f64, alpha: AlphaParam },
    C2Hat { a: f64, b: f64, alpha: AlphaParam },
}

impl TransformSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TransformSpec::A1 { .. } => "A1",
            TransformSpec::B1(_) => "B1",
            TransformSpec::C1 { .. } => "C1",
            TransformSpec::C1Hat { .. } => "C1hat",
            TransformSpec::A2 { .. } => "A2",
            TransformSpec::B2(_) => "B2",
            TransformSpec::C2 { .. } => "C2",
            TransformSpec::C2Hat { .. } => "C2hat",
        }
    }

    pub fn arity(&self) -> Arity {
        match self {
            TransformSpec::A1 { .. }
            | TransformSpec::B1(_)
            | TransformSpec::C1 { .. }
            | TransformSpec::C1Hat { .. } => Arity::One,
            _ => Arity::Two,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |s: f64| s > 0.0 && s.is_finite();
        let good = match *self {
            TransformSpec::A1 { a } | TransformSpec::C1 { a, .. } | TransformSpec::C1Hat { a, .. } => ok(a),
            TransformSpec::A2 { a, b } | TransformSpec::C2 { a, b, .. } | TransformSpec::C2Hat { a, b, .. } => {
                ok(a) && ok(b)
            }
            TransformSpec::B1(_) | TransformSpec::B2(_) => true,
        };
        if good {
            Ok(())
        } else {
            arg(format!("{}: oscillator scales must be positive", self.name()))
        }
    }

    /// Family of the first kernel slot (the variable that is not conjugated).
    pub fn first_family(&self) -> BasisSpec {
        match *self {
            TransformSpec::A1 { a } | TransformSpec::C1 { a, .. } | TransformSpec::C1Hat { a, .. } => {
                BasisSpec::OscillatorPsi1D { a }
            }
            TransformSpec::B1(_) => BasisSpec::Monomial1D,
            TransformSpec::A2 { a, b } | TransformSpec::C2 { a, b, .. } | TransformSpec::C2Hat { a, b, .. } => {
                BasisSpec::OscillatorPsi2D { a, b }
            }
            TransformSpec::B2(_) => BasisSpec::Monomial2D,
        }
    }

    /// Family of the second kernel slot.
    pub fn second_family(&self) -> BasisSpec {
        match *self {
            TransformSpec::A1 { .. } => BasisSpec::Monomial1D,
            TransformSpec::B1(p) | TransformSpec::C1 { alpha: p, .. } => BasisSpec::HolHermiteH1D(p),
            TransformSpec::C1Hat { alpha, .. } => BasisSpec::HolHermiteK1D(alpha),
            TransformSpec::A2 { .. } => BasisSpec::Monomial2D,
            TransformSpec::B2(p) | TransformSpec::C2 { alpha: p, .. } => BasisSpec::HolHermiteH2D(p),
            TransformSpec::C2Hat { alpha, .. } => BasisSpec::HolHermiteK2D(alpha),
        }
    }
}

fn one(p: Point, what: &str) -> Result<C64> {
    match p {
        Point::One(z) => Ok(z),
        _ => arg(format!("{what} takes one variable per slot")),
    }
}

fn two(p: Point, what: &str) -> Result<(C64, C64)> {
    match p {
        Point::Two(a, b) => Ok((a, b)),
        _ => arg(format!("{what} takes two variables per slot")),
    }
}

fn conj_point(p: Point) -> Point {
    match p {
        Point::One(z) => Point::One(z.conj()),
        Point::Two(a, b) => Point::Two(a.conj(), b.conj()),
    }
}

/// Logarithm of the kernel at `(x, conj w)`.
pub fn sb_kernel_ln(spec: &TransformSpec, x: Point, w: Point) -> Result<C64> {
    spec.validate()?;
    kernel_ln_raw(spec, x, conj_point(w))
}

/// Logarithm of the printed kernel with the second slot supplied already
/// conjugated. Every coefficient is real, so `conj K(x, y) = K(conj x, conj y)`.
fn kernel_ln_raw(spec: &TransformSpec, x: Point, w: Point) -> Result<C64> {
    let name = spec.name();
    let v = match *spec {
        TransformSpec::A1 { a } => {
            let (q, zb) = (one(x, name)?, one(w, name)?);
            0.5 * a.ln() - 0.25 * PI.ln() + 2f64.sqrt() * a * q * zb - 0.5 * (zb * zb + a * a * q * q)
        }
        TransformSpec::B1(p) => {
            let (z, wb) = (one(x, name)?, one(w, name)?);
            let (al, e) = (p.alpha(), p.epsilon());
            0.5 * ((1.0 - al) / (PI * al.sqrt())).ln() + (2.0 * e).sqrt() * z * wb - 0.5 * (e * z * z + wb * wb)
        }
        TransformSpec::C1 { a, alpha } => {
            let (q, wb) = (one(x, name)?, one(w, name)?);
            let al = alpha.alpha();
            let aq = a * q;
            0.5 * a.ln() - 0.25 * PI.ln() + 0.5 * ((1.0 - al * al) / (2.0 * PI * al * al.sqrt())).ln()
                - (aq * aq + wb * wb) / (2.0 * al)
                + (1.0 - al * al).sqrt() / al * aq * wb
        }
        TransformSpec::C1Hat { a, alpha } => {
            let (q, zb) = (one(x, name)?, one(w, name)?);
            let al = alpha.alpha();
            let aq = a * q;
            0.5 * a.ln() - 0.25 * (PI * al).ln() - (aq * aq + al * zb * zb) / (2.0 * al)
                + (2.0 / al).sqrt() * aq * zb
        }
        TransformSpec::A2 { a, b } => {
            let ((q1, q2), (w1, w2)) = (two(x, name)?, two(w, name)?);
            let (z1, z2) = (w1, w2);
            let (aq, bq) = (a * q1, b * q2);
            0.5 * (a * b / PI).ln() - 0.5 * (z1 * z1 + z2 * z2) - 0.5 * (aq * aq + bq * bq)
                + 2f64.sqrt() * (aq * z1 + bq * z2)
        }
        TransformSpec::B2(p) => {
            let ((z1, z2), (w1, w2)) = (two(x, name)?, two(w, name)?);
            let (al, e) = (p.alpha(), p.epsilon());
            ((1.0 - al) / (PI * al.sqrt())).ln() - 0.5 * w1 * w2 + e.sqrt() * (z1 * w1 + z2 * w2) - e * z1 * z2
        }
        TransformSpec::C2 { a, b, alpha } => {
            let ((q1, q2), (w1, w2)) = (two(x, name)?, two(w, name)?);
            let al = alpha.alpha();
            let (aq, bq) = (a * q1, b * q2);
            let (p, m) = (1.0 + al * al, 1.0 - al * al);
            0.5 * (a * b / PI).ln() + (m / (2.0 * PI * al)).ln()
                - p / (4.0 * al) * (aq * aq + bq * bq)
                - m / (2.0 * al) * aq * bq
                - m / (8.0 * al) * (w1 * w1 + w2 * w2)
                - p / (4.0 * al) * w1 * w2
                + (2.0 * m).sqrt() / (4.0 * al)
                    * ((1.0 + al) * (aq * w1 + bq * w2) + (1.0 - al) * (aq * w2 + bq * w1))
        }
        TransformSpec::C2Hat { a, b, alpha } => {
            let ((q1, q2), (w1, w2)) = (two(x, name)?, two(w, name)?);
            let al = alpha.alpha();
            let (aq, bq) = (a * q1, b * q2);
            let s = (2.0 * al).sqrt();
            0.5 * (a * b / PI).ln()
                - (1.0 + al * al) / (4.0 * al) * (aq * aq + bq * bq)
                - 0.5 * (w1 * w1 + w2 * w2)
                - (1.0 - al * al) / (2.0 * al) * aq * bq
                + (1.0 + al) / s * (aq * w1 + bq * w2)
                + (1.0 - al) / s * (aq * w2 + bq * w1)
        }
    };
    Ok(v)
}

/// Kernel value at `(x, conj w)`.
pub fn sb_kernel(spec: &TransformSpec, x: Point, w: Point) -> Result<C64> {
    let v = sb_kernel_ln(spec, x, w)?.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericRange(format!("{} kernel at {x:?}, {w:?}", spec.name())))
    }
}

/// Largest `|K1 - K2|` over the given argument pairs.
pub fn kernel_distance(k1: &TransformSpec, k2: &TransformSpec, args: &[(Point, Point)]) -> Result<f64> {
    let mut d = 0.0f64;
    for &(x, w) in args {
        d = d.max((sb_kernel(k1, x, w)? - sb_kernel(k2, x, w)?).norm());
    }
    Ok(d)
}

/// Matrix of `<target_m, T source_n>` by quadrature, with `N` members per
/// variable (`N^2` rows and columns, row-major over `(m, n)`, in two variables).
///
/// The source must be one slot family of `spec` and the target the other.
/// Moving from the second slot to the first uses the kernel as printed; the
/// opposite direction uses its conjugate (the adjoint transform).
///
/// `T source_n` is evaluated at each node of the target family's rule by a
/// Gauss-Hermite sum against the source weight on a shifted complex contour
/// (see [`ContourRule`]); its order is the smaller of `order` and what makes
/// the source polynomials exact.
pub fn transform_matrix(
    spec: &TransformSpec,
    source: &BasisSpec,
    target: &BasisSpec,
    n: usize,
    order: usize,
) -> Result<DMatrix<C64>> {
    spec.validate()?;
    if n == 0 {
        return arg("transform matrix needs N >= 1");
    }
    let (first, second) = (spec.first_family(), spec.second_family());
    let forward = if *source == second && *target == first {
        true
    } else if *source == first && *target == second {
        false
    } else {
        return arg(format!(
            "{} pairs {} with {}; got {} -> {}",
            spec.name(),
            first.name(),
            second.name(),
            source.name(),
            target.name()
        ));
    };
    let spec = *spec;
    let (sw, tw) = (Weight::natural_for(source)?, Weight::natural_for(target)?);
    let sdim = sw.domain_dim(source)?;

    // log of kernel, source Gaussian factor and source weight; `ls` is the
    // source log-scale at `hol`
    let src_ln = move |xt: Point, hol: Point, anti: Point, ls: C64| -> Result<C64> {
        let k = if forward {
            kernel_ln_raw(&spec, xt, anti)?
        } else {
            kernel_ln_raw(&spec, anti, xt)?
        };
        Ok(k + ls + sw.ln_density_split(hol, anti))
    };
    let src_ln_real = |xt: Point, t: &[f64]| -> C64 {
        let (hol, anti) = complex_points(source, &real_coords(t));
        source
            .values(1, hol)
            .and_then(|v| src_ln(xt, hol, anti, v.log_scale))
            .unwrap_or(C64::new(f64::NAN, 0.0))
    };

    let degree = match source.arity() {
        Arity::One => n - 1,
        Arity::Two => 2 * (n - 1),
    };
    let s_order = order.min(degree / 2 + 2).max(2);
    let t_rule = family_rule(target, &tw, order)?;
    let (s_rule, _) = ContourRule::adapted(sdim, s_order, |t| src_ln_real(zero_point(target), t))?;
    let size = match target.arity() {
        Arity::One => n,
        Arity::Two => n * n,
    };

    reduce_chunks(
        t_rule.chunks(),
        |range| {
            let mut acc = DMatrix::<C64>::zeros(size, size);
            let mut row = vec![C64::new(0.0, 0.0); size];
            for i in range {
                let tc = t_rule.node(i);
                let xt = family_point(target, tc);
                let tv = target.values(n, xt)?;
                let t_ln = tv.log_scale.conj()
                    + (t_rule.weights[i].ln() + tw.ln_density(xt) + t_rule.compensation[i]);
                let beta = s_rule.linear_part(|t| src_ln_real(xt, t));
                let center = s_rule.center(&beta);
                row.iter_mut().for_each(|r| *r = C64::new(0.0, 0.0));
                for k in 0..s_rule.len() {
                    let (hol, anti) = complex_points(source, &s_rule.node(&center, k));
                    let sv = source.values(n, hol)?;
                    let e = t_ln + s_rule.ln_weight[k] + src_ln(xt, hol, anti, sv.log_scale)?;
                    let kv = e.exp();
                    if !kv.is_finite() {
                        return Err(Error::NonFiniteIntegrand { node: i, x: tc[0], y: tc[1 % tc.len()] });
                    }
                    for (r, s) in row.iter_mut().zip(&sv.mantissa) {
                        *r += kv * s;
                    }
                }
                for m in 0..size {
                    let t = tv.mantissa[m].conj();
                    for k in 0..size {
                        acc[(m, k)] += t * row[k];
                    }
                }
            }
            Ok(acc)
        },
        |a, b| a + b,
    )
}

fn zero_point(spec: &BasisSpec) -> Point {
    let z = C64::new(0.0, 0.0);
    match spec.arity() {
        Arity::One => Point::One(z),
        Arity::Two => Point::Two(z, z),
    }
}

/// `max |M^H M - I|`.
pub fn unitarity_defect(m: &DMatrix<C64>) -> f64 {
    let g = m.adjoint() * m;
    let mut d = 0.0f64;
    for j in 0..g.nrows() {
        for k in 0..g.ncols() {
            let want = if j == k { 1.0 } else { 0.0 };
            d = d.max((g[(j, k)] - want).norm());
        }
    }
    d
}

/// Quadrature value of `integral K1(x, conj z) K2(z, conj w) dmu(z)` over the
/// Bargmann measure, for the pairs `A1, B1` and `A2, B2`.
///
/// The integrand is a pure Gaussian, so the contour rule of any order is exact.
pub fn compose_kernels(k1: &TransformSpec, k2: &TransformSpec, x: Point, w: Point, order: usize) -> Result<C64> {
    k1.validate()?;
    k2.validate()?;
    let (family, weight) = match (k1, k2) {
        (TransformSpec::A1 { .. }, TransformSpec::B1(_)) => (BasisSpec::Monomial1D, Weight::Bargmann),
        (TransformSpec::A2 { .. }, TransformSpec::B2(_)) => (BasisSpec::Monomial2D, Weight::Bargmann2D),
        _ => return arg(format!("{} and {} do not compose", k1.name(), k2.name())),
    };
    let wb = conj_point(w);
    let ln_f = |t: &[C64]| -> Result<C64> {
        let (hol, anti) = complex_points(&family, t);
        Ok(kernel_ln_raw(k1, x, anti)? + kernel_ln_raw(k2, hol, wb)? + weight.ln_density_split(hol, anti))
    };
    let dim = weight.domain_dim(&family)?;
    let (rule, beta) =
        ContourRule::adapted(dim, order, |t| ln_f(&real_coords(t)).unwrap_or(C64::new(f64::NAN, 0.0)))?;
    let center = rule.center(&beta);
    let terms = (0..rule.len())
        .map(|k| Ok((rule.ln_weight[k] + ln_f(&rule.node(&center, k))?).exp()))
        .collect::<Result<Vec<_>>>()?;
    let v = pairwise_sum(&terms);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericRange("composition integral".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kernel_values_at_origin() {
        let o = Point::One(c(0.0, 0.0));
        let v = sb_kernel(&TransformSpec::A1 { a: 1.0 }, o, o).unwrap();
        assert!((v.re - PI.powf(-0.25)).abs() < 1e-15);
        let p = AlphaParam::new(0.5).unwrap();
        let v = sb_kernel(&TransformSpec::B1(p), o, o).unwrap();
        assert!((v.re - (0.5 / (PI * 0.5f64.sqrt())).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn arity_mismatch_is_argument_error() {
        let o = Point::One(c(0.0, 0.0));
        let t = Point::Two(c(0.0, 0.0), c(0.0, 0.0));
        let p = AlphaParam::new(0.5).unwrap();
        assert!(matches!(sb_kernel(&TransformSpec::B2(p), o, o), Err(Error::Argument(_))));
        assert!(matches!(sb_kernel(&TransformSpec::A1 { a: 1.0 }, t, o), Err(Error::Argument(_))));
        assert!(sb_kernel(&TransformSpec::A1 { a: -1.0 }, o, o).is_err());
    }

    #[test]
    fn second_slot_is_conjugated() {
        let k = TransformSpec::A1 { a: 1.0 };
        let q = Point::One(c(0.4, 0.0));
        let v1 = sb_kernel(&k, q, Point::One(c(0.2, 0.3))).unwrap();
        let lit = PI.powf(-0.25)
            * (2f64.sqrt() * 0.4 * c(0.2, -0.3) - 0.5 * (c(0.2, -0.3) * c(0.2, -0.3) + 0.16)).exp();
        assert!((v1 - lit).norm() < 1e-15);
    }

    #[test]
    fn unsupported_pairing_rejected() {
        let p = AlphaParam::new(0.5).unwrap();
        let e = transform_matrix(
            &TransformSpec::B1(p),
            &BasisSpec::OscillatorPsi1D { a: 1.0 },
            &BasisSpec::Monomial1D,
            2,
            10,
        );
        assert!(matches!(e, Err(Error::Argument(_))));
        let o = Point::One(c(0.0, 0.0));
        assert!(compose_kernels(&TransformSpec::B1(p), &TransformSpec::A1 { a: 1.0 }, o, o, 10).is_err());
    }

    #[test]
    fn a1_maps_oscillator_to_monomials() {
        let k = TransformSpec::A1 { a: 1.0 };
        let m = transform_matrix(&k, &BasisSpec::OscillatorPsi1D { a: 1.0 }, &BasisSpec::Monomial1D, 6, 40)
            .unwrap();
        let (off, diag) = crate::quadrature::identity_defect(&m);
        assert!(off < 1e-10 && diag < 1e-10, "{off} {diag}");
    }
}
