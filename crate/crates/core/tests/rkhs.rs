mod common;

use std::f64::consts::PI;

use common::*;
use hermite_cs::hermite::*;
use hermite_cs::quadrature::{build_grid, integrate_plane};
use hermite_cs::rkhs::*;
use hermite_cs::C64;

fn ring(r: f64) -> Vec<C64> {
    vec![c(r, 0.0), c(0.0, r), c(-0.6 * r, 0.8 * r), c(0.3 * r, -0.2 * r), c(0.0, 0.0)]
}

#[test]
fn series_matches_closed_form() {
    let check = |spec: KernelSpec, pts: &[Point], qts: &[Point], n: usize| {
        for &x in pts {
            for &y in qts {
                let s = zaremba_partial(&spec.basis(), x, y, n).unwrap().value;
                let k = closed_kernel(&spec, x, y).unwrap();
                assert!((s - k).norm() <= 1e-9, "{} at {x:?} {y:?}: {s} vs {k}", spec.name());
            }
        }
    };
    let one = |v: Vec<C64>| v.into_iter().map(Point::One).collect::<Vec<_>>();
    let big = one(ring(1.5));
    let disk = one(ring(0.8));
    check(KernelSpec::Bargmann1D, &big, &big, 80);
    check(KernelSpec::Szego, &disk, &disk, 80);
    check(KernelSpec::Bergman, &disk, &disk, 80);
    let pairs: Vec<Point> = ring(1.5).iter().zip(ring(1.0).iter().rev()).map(|(&a, &b)| Point::Two(a, b)).collect();
    check(KernelSpec::Bargmann2D, &pairs, &pairs, 80);
    for alpha in [0.3, 0.5, 0.7] {
        let a = AlphaParam::new(alpha).unwrap();
        // at alpha = 0.3 the 80-term tail is still ~1e-7 at |z| = 1.5
        let n = if alpha < 0.4 { 160 } else { 80 };
        check(KernelSpec::VanEM1D(a), &big, &big, n);
        check(KernelSpec::VanEM2D(a), &pairs, &pairs, 80);
    }
}

#[test]
fn short_series_gap_is_truncation() {
    let a = AlphaParam::new(0.3).unwrap();
    let pts = ring(1.5);
    let gap = |n: usize| {
        let mut d = 0.0f64;
        for &x in &pts {
            for &y in &pts {
                let (x, y) = (Point::One(x), Point::One(y));
                let k = closed_kernel(&KernelSpec::VanEM1D(a), x, y).unwrap();
                d = d.max((zaremba_partial(&BasisSpec::HolHermiteH1D(a), x, y, n).unwrap().value - k).norm());
            }
        }
        d
    };
    let gaps: Vec<f64> = [40, 80, 120].iter().map(|&n| gap(n)).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[1] > 1e-9 && gaps[2] < 1e-12, "{gaps:?}");
}

#[test]
fn k_family_reproduces_bargmann_kernel() {
    let a = AlphaParam::new(0.5).unwrap();
    let (z, w) = (Point::One(c(0.3, 0.0)), Point::One(c(0.0, 0.3)));
    let v = zaremba_kernel(&BasisSpec::HolHermiteK1D(a), z, w, 60).unwrap();
    assert!((v - (c(0.3, 0.0) * c(0.0, -0.3)).exp()).norm() < 1e-10);
    let v = closed_kernel(&KernelSpec::VanEM1D(a), Point::One(c(0.0, 0.0)), Point::One(c(0.0, 0.0))).unwrap();
    assert!((v.re - 0.75 / PI).abs() < 1e-15);
}

#[test]
fn hermitian_symmetry_and_diagonal_positivity() {
    let a = AlphaParam::new(0.6).unwrap();
    let pts = ring(0.7);
    for spec in [KernelSpec::Bargmann1D, KernelSpec::VanEM1D(a), KernelSpec::Szego, KernelSpec::Bergman] {
        for &x in &pts {
            for &y in &pts {
                let k1 = closed_kernel(&spec, Point::One(x), Point::One(y)).unwrap();
                let k2 = closed_kernel(&spec, Point::One(y), Point::One(x)).unwrap();
                assert!((k1 - k2.conj()).norm() <= 1e-12 * k1.norm().max(1.0));
            }
            let d = closed_kernel(&spec, Point::One(x), Point::One(x)).unwrap();
            assert!(d.re > 0.0 && d.im.abs() <= 1e-15 * d.re);
        }
    }
    for spec in [KernelSpec::Bargmann2D, KernelSpec::VanEM2D(a)] {
        for &x in &pts {
            let p = Point::Two(x, x * 0.5);
            let q = Point::Two(c(0.2, 0.1), x);
            let k1 = closed_kernel(&spec, p, q).unwrap();
            let k2 = closed_kernel(&spec, q, p).unwrap();
            assert!((k1 - k2.conj()).norm() <= 1e-12 * k1.norm().max(1.0));
        }
    }
    let z = Point::One(c(2.5, 1.0));
    let w = Point::One(c(2.0, -0.5));
    let k1 = closed_kernel(&KernelSpec::FactorialRatio3F2, z, w).unwrap();
    let k2 = closed_kernel(&KernelSpec::FactorialRatio3F2, w, z).unwrap();
    assert!((k1 - k2.conj()).norm() <= 1e-12 * k1.norm());
}

#[test]
fn factorial_ratio_kernel() {
    let pts = [c(2.0, 0.0), c(2.0, 0.5), c(3.0, -1.0), c(2.5, 2.0)];
    for &z in &pts {
        for &w in &pts {
            let k = closed_kernel(&KernelSpec::FactorialRatio3F2, Point::One(z), Point::One(w)).unwrap();
            let r = f32_kernel(z, w, 1e-16);
            assert!((k - r).norm() <= 1e-10 * r.norm(), "{z} {w}: {k} vs {r}");
            let s = zaremba_partial(&BasisSpec::FactorialRatio, Point::One(z), Point::One(w), 2000).unwrap().value;
            assert!((k - s).norm() <= 1e-8 * k.norm(), "{z} {w}: {k} vs series {s}");
        }
    }
}

#[test]
fn positive_definiteness() {
    let pts: Vec<Point> = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)].map(Point::One).to_vec();
    assert!(hermitian_pd_check(&KernelSpec::Bargmann1D, &pts, 1e-10).unwrap().pass);
    let a = AlphaParam::new(0.5).unwrap();
    // fixed pseudo-random points in the unit polydisk
    let raw = [0.13, -0.72, 0.55, 0.31, -0.44, 0.08, 0.67, -0.29, -0.15, 0.81, 0.36, -0.58, -0.62, -0.11, 0.2, 0.49,
        0.05, -0.33, -0.77, 0.4];
    let pts: Vec<Point> =
        raw.chunks(4).map(|q| Point::Two(c(q[0], q[1]), c(q[2], q[3]))).collect();
    let r = hermitian_pd_check(&KernelSpec::VanEM2D(a), &pts, 1e-8).unwrap();
    assert!(r.pass, "{r:?}");
    for spec in [KernelSpec::Bargmann1D, KernelSpec::Szego, KernelSpec::VanEM1D(a)] {
        let p = Point::One(c(0.4, -0.3));
        let r = hermitian_pd_check(&spec, &[p, p], 1e-12).unwrap();
        assert!(r.pass && r.min_eigenvalue > -1e-12);
    }
}

#[test]
fn reproducing_property_by_quadrature() {
    // integral Phi_m(z) conj K(z, x) w(z) dz = Phi_m(x)
    let x = c(0.4, -0.3);
    let g = build_grid(80, 1.0, 1.0).unwrap();
    for m in 0..6 {
        let v = integrate_plane(|z| phi(m, z) * (z.conj() * x).exp() / PI, &g).unwrap();
        assert!((v - phi(m, x)).norm() < 1e-7, "Bargmann m={m}");
    }
    let alpha = 0.5;
    let a = AlphaParam::new(alpha).unwrap();
    let spec = KernelSpec::VanEM1D(a);
    // Gaussian envelope of h_m(z) conj K(z, x) exp(alpha u^2 - v^2/alpha)
    let sx = (1.0 - alpha) * (1.0 + 3.0 * alpha) / (4.0 * alpha);
    let sy = (1.0 - alpha) * (3.0 + alpha) / (4.0 * alpha);
    let g = build_grid(80, sx, sy).unwrap();
    for m in 0..6 {
        let v = integrate_plane(
            |z| {
                let k = closed_kernel(&spec, Point::One(x), Point::One(z)).unwrap();
                let w = (alpha * z.re * z.re - z.im * z.im / alpha + sx * z.re * z.re + sy * z.im * z.im).exp();
                h1(alpha, m, z) * k * w
            },
            &g,
        )
        .unwrap();
        assert!((v - h1(alpha, m, x)).norm() < 1e-7, "van Eijndhoven-Meyers m={m}: {v}");
    }
}

#[test]
fn gaussian_radial_moments_give_bargmann_weights() {
    // a_{2n} = 2 pi integral_0^inf r^{2n} exp(-r^2) 2r dr, by Simpson's rule in s = r^2
    let gamma = |n: i32| {
        let (h, steps) = (1e-3, 100_000);
        let f = |s: f64| s.powi(n) * (-s).exp();
        let mut acc = f(0.0) + f(h * steps as f64);
        for j in 1..steps {
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(h * j as f64);
        }
        acc * h / 3.0
    };
    let a: Vec<f64> = (0..13).map(|j| if j % 2 == 0 { 2.0 * PI * gamma(j / 2) } else { 1.0 }).collect();
    let k = radial_measure_norms(&MomentSequence::new(a).unwrap(), 6).unwrap();
    for (n, kn) in k.iter().enumerate() {
        assert!((kn * fact(n) - 1.0).abs() < 1e-8, "n={n}: {kn}");
    }
    let inv: Vec<f64> = k.iter().map(|v| 1.0 / v).collect();
    assert!(log_convexity_check(&MomentSequence::new(inv).unwrap()).pass);
}

#[test]
fn log_convexity_brute_force_for_factorials() {
    let f: Vec<f64> = (0..41).map(fact).collect();
    let r = log_convexity_check(&MomentSequence::new(f.clone()).unwrap());
    assert!(r.pass && r.note.contains("necessary"));
    for m in 0..=20 {
        for n in 0..=20 - m {
            assert!(f[m + n] * f[m + n] <= f[2 * m] * f[2 * n] * (1.0 + 1e-12));
        }
    }
}

#[test]
fn factorial_ratio_kernel_near_the_edge() {
    let pts = [c(1.0, 0.0), c(1.0, 0.7), c(1.3, -0.4), c(2.0, 1.0)];
    for &z in &pts {
        for &w in &pts {
            let k = closed_kernel(&KernelSpec::FactorialRatio3F2, Point::One(z), Point::One(w)).unwrap();
            let r = f32_kernel_extrapolated(z, w);
            assert!((k - r).norm() <= 1e-8 * r.norm(), "{z} {w}: {k} vs {r}");
        }
    }
    // at z = w = 1 the kernel is sum 1/(n+1)^2
    let one = Point::One(c(1.0, 0.0));
    let k = closed_kernel(&KernelSpec::FactorialRatio3F2, one, one).unwrap();
    assert!((k.re - PI * PI / 6.0).abs() < 1e-10 && k.im == 0.0);
    assert!((f32_kernel_extrapolated(c(1.0, 0.0), c(1.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-10);
}
