mod common;

use std::f64::consts::PI;

use common::*;
use hermite_cs::hermite::*;
use hermite_cs::quadrature::*;
use hermite_cs::C64;

/// `integral x^a exp(-s x^2) dx` over the line.
fn moment(a: u32, s: f64) -> f64 {
    if a % 2 == 1 {
        return 0.0;
    }
    let k = a / 2;
    let double_fact: f64 = (1..=k).map(|j| (2 * j - 1) as f64).product();
    double_fact / (2.0 * s).powi(k as i32) * (PI / s).sqrt()
}

#[test]
fn plane_rule_is_exact_for_monomials() {
    for &(order, sx, sy) in &[(6, 1.0, 1.0), (10, 0.5, 2.0), (12, 0.3, 1.7)] {
        let g = build_grid(order, sx, sy).unwrap();
        assert_eq!(g.nodes.len(), order * order);
        assert!(g.weights.iter().all(|&w| w > 0.0));
        for a in 0..2 * order as u32 {
            for b in (0..2 * order as u32).step_by(3) {
                let v = integrate_plane(|z| c(z.re.powi(a as i32) * z.im.powi(b as i32), 0.0), &g).unwrap();
                let want = moment(a, sx) * moment(b, sy);
                let scale = moment(a + a % 2, sx) * moment(b + b % 2, sy);
                assert!((v.re - want).abs() <= 1e-11 * scale, "order {order} x^{a} y^{b}: {} vs {want}", v.re);
            }
        }
    }
}

#[test]
fn bargmann_measure_moments() {
    let g = build_grid(3, 1.0, 1.0).unwrap();
    let v = integrate_plane(|z| c(z.norm_sqr() / PI, 0.0), &g).unwrap();
    assert!((v.re - 1.0).abs() < 1e-14);
    let v = integrate_plane(|z| c(z.re.powi(4), 0.0), &g).unwrap();
    assert!((v.re - 3.0 * PI / 4.0).abs() < 1e-13);
    let g1 = build_grid(8, 1.0, 1.0).unwrap();
    let v = integrate_plane2(|_, _| c(1.0 / (PI * PI), 0.0), &g1, &g1).unwrap();
    assert!((v.re - 1.0).abs() < 1e-13);
}

#[test]
fn scale_covariance() {
    // integral of f(x, y) exp(-x^2 - y^2) computed on a grid of scale c by
    // compensating the Gaussian inside the integrand
    let f = |z: C64| c((z.re * 0.7).cos() * (1.0 + z.im * z.im), 0.0);
    let base = integrate_plane(f, &build_grid(40, 1.0, 1.0).unwrap()).unwrap();
    for s in [0.6, 1.5, 2.5] {
        let g = build_grid(40, s, s).unwrap();
        let v = integrate_plane(|z| f(z) * ((s - 1.0) * z.norm_sqr()).exp(), &g).unwrap();
        assert!((v - base).norm() < 1e-12, "scale {s}: {v} vs {base}");
    }
}

#[test]
fn h0_normalization() {
    let a = AlphaParam::new(0.5).unwrap();
    let (sx, sy) = (0.5, 1.0);
    let g = build_grid(60, sx, sy).unwrap();
    let spec = BasisSpec::HolHermiteH1D(a);
    let v = integrate_plane(
        |z| {
            let h = basis_eval(&spec, Index::One(0), Point::One(z)).unwrap();
            h * h.conj() * (0.5 * z.re * z.re - 2.0 * z.im * z.im + sx * z.re * z.re + sy * z.im * z.im).exp()
        },
        &g,
    )
    .unwrap();
    assert!((v.re - 1.0).abs() < 1e-8, "{v}");
}

/// Raw two-variable Hermite products against the paper's orthogonality
/// weight, in the coordinates `u = (conj z2 + z1)/2`, `v = (conj z2 - z1)/2`.
fn raw_2d_gram(alpha: f64, n: usize, order: usize) -> nalgebra::DMatrix<C64> {
    let gu = build_grid(order, 1.0 - alpha, 1.0 - alpha).unwrap();
    let gv = build_grid(order, (1.0 - alpha) / alpha, (1.0 - alpha) / alpha).unwrap();
    let size = n * n;
    let mut g = nalgebra::DMatrix::<C64>::zeros(size, size);
    for j in 0..size {
        for k in 0..size {
            let (m, nn, p, q) = (j / n, j % n, k / n, k % n);
            g[(j, k)] = integrate_plane2(
                |u, v| {
                    let z1 = u - v;
                    let z2 = (u + v).conj();
                    hermite_poly_2d(m, nn, z1, z2) * hermite_poly_2d(p, q, z1, z2).conj()
                },
                &gu,
                &gv,
            )
            .unwrap();
        }
    }
    g
}

#[test]
fn two_variable_orthogonality_constant() {
    let g = raw_2d_gram(0.5, 2, 12);
    assert!((g[(0, 0)].re - 2.0 * PI * PI).abs() < 1e-10 * 2.0 * PI * PI);
    let diag = |m: usize, n: usize| PI * PI * 0.5 / 0.25 * 3f64.powi((m + n) as i32) * fact(m) * fact(n);
    for j in 0..4 {
        for k in 0..4 {
            let want = if j == k { diag(j / 2, j % 2) } else { 0.0 };
            assert!((g[(j, k)] - want).norm() <= 1e-8 * g[(0, 0)].norm(), "({j},{k})");
        }
    }
}

#[test]
fn gram_examples() {
    let g = gram_matrix(&BasisSpec::Monomial1D, &Weight::Bargmann, 8, 40).unwrap();
    let (off, diag) = identity_defect(&g);
    assert!(off < 1e-10 && diag < 1e-10);
    let a = AlphaParam::new(0.5).unwrap();
    let g = gram_matrix(&BasisSpec::HolHermiteK1D(a), &Weight::Bargmann, 10, 80).unwrap();
    let (off, diag) = identity_defect(&g);
    assert!(off < 1e-8 && diag < 1e-8);
    let g = gram_matrix(&BasisSpec::HolHermiteH2D(a), &Weight::VanEijndhovenMeyers2D(a), 4, 40).unwrap();
    let (off, diag) = identity_defect(&g);
    assert!(off < 1e-6 && diag < 1e-6, "{off} {diag}");
    assert!(gram_matrix(&BasisSpec::HolHermiteH1D(a), &Weight::Bargmann, 4, 20).is_err());
}

#[test]
fn gram_converges_as_order_doubles() {
    for alpha in [0.3, 0.5, 0.7] {
        let a = AlphaParam::new(alpha).unwrap();
        for (spec, w) in [
            (BasisSpec::HolHermiteH1D(a), Weight::VanEijndhovenMeyers(a)),
            (BasisSpec::HolHermiteK1D(a), Weight::Bargmann),
        ] {
            let defect = |o: usize| {
                let (off, diag) = identity_defect(&gram_matrix(&spec, &w, 12, o).unwrap());
                off.max(diag)
            };
            // the rules are exact once the order covers the polynomial degree, so
            // at the spec's orders the defect sits on rounding noise
            let floor = 1e-13;
            let worst: Vec<f64> = [20, 40, 80].iter().map(|&o| defect(o)).collect();
            for w2 in worst.windows(2) {
                assert!(w2[1] <= w2[0] || w2[1] < floor, "{} {alpha}: {worst:?}", spec.name());
            }
            let early: Vec<f64> = [3, 5, 7].iter().map(|&o| defect(o)).collect();
            assert!(early[0] > early[1] && early[1] > early[2], "{} {alpha}: {early:?}", spec.name());
            let (off, diag) = identity_defect(&gram_matrix(&spec, &w, 12, 80).unwrap());
            assert!(off.max(diag) < 1e-8);
        }
    }
}
