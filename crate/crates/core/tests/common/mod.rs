//! Independent reference formulas: direct sums straight from the defining
//! series, no shared code with the library's recurrences.
#![allow(dead_code)]

use std::f64::consts::PI;

use hermite_cs::C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binom(n: usize, k: usize) -> f64 {
    fact(n) / (fact(k) * fact(n - k))
}

/// `H_n(z) = n! sum_m (-1)^m (2z)^{n-2m} / (m! (n-2m)!)`, with the sum of
/// term moduli for a cancellation-aware tolerance.
pub fn hermite_direct(n: usize, z: C64) -> (C64, f64) {
    let mut s = c(0.0, 0.0);
    let mut mag = 0.0;
    for m in 0..=n / 2 {
        let t = (2.0 * z).powu((n - 2 * m) as u32) * (fact(n) / (fact(m) * fact(n - 2 * m)));
        let t = if m % 2 == 1 { -t } else { t };
        mag += t.norm();
        s += t;
    }
    (s, mag)
}

/// `H_{m,n}(z1, z2) = sum_k C(m,k) C(n,k) (-1)^k k! z1^{m-k} z2^{n-k}`.
pub fn hermite2_direct(m: usize, n: usize, z1: C64, z2: C64) -> (C64, f64) {
    let mut s = c(0.0, 0.0);
    let mut mag = 0.0;
    for k in 0..=m.min(n) {
        let t = z1.powu((m - k) as u32) * z2.powu((n - k) as u32) * (binom(m, k) * binom(n, k) * fact(k));
        let t = if k % 2 == 1 { -t } else { t };
        mag += t.norm();
        s += t;
    }
    (s, mag)
}

/// Expansion of `H_{m,n}` through one-variable Hermite polynomials, with the
/// binomial weights of the generating-function derivation.
pub fn hermite2_bridge(m: usize, n: usize, z1: C64, z2: C64) -> (C64, f64) {
    let x = (z1 + z2) / 2.0;
    let y = (z1 - z2) / c(0.0, 2.0);
    let i = c(0.0, 1.0);
    let mut s = c(0.0, 0.0);
    let mut mag = 0.0;
    for k in 0..=m {
        for l in 0..=n {
            let (a, ma) = hermite_direct(k + l, x);
            let (b, mb) = hermite_direct(m + n - k - l, y);
            let w = binom(m, k) * binom(n, l);
            let t = i.powu((m - k) as u32) * (-i).powu((n - l) as u32) * a * b * w;
            s += t;
            mag += w * ma * mb;
        }
    }
    let scale = 0.5f64.powi((m + n) as i32);
    (s * scale, mag * scale)
}

pub fn phi(n: usize, z: C64) -> C64 {
    z.powu(n as u32) / fact(n).sqrt()
}

pub fn h1(alpha: f64, n: usize, z: C64) -> C64 {
    let norm = PI * alpha.sqrt() / (1.0 - alpha) * (2.0 * (1.0 + alpha) / (1.0 - alpha)).powi(n as i32) * fact(n);
    (-z * z / 2.0).exp() * hermite_direct(n, z).0 / norm.sqrt()
}

pub fn k1(alpha: f64, n: usize, z: C64) -> C64 {
    let pre = (2.0 * alpha.sqrt() / (1.0 + alpha)).sqrt()
        * ((1.0 - alpha) / (2.0 * (1.0 + alpha))).powf(n as f64 / 2.0)
        / fact(n).sqrt();
    let arg = (2.0 * alpha / (1.0 - alpha * alpha)).sqrt() * z;
    pre * ((1.0 - alpha) / (1.0 + alpha) * z * z / 2.0).exp() * hermite_direct(n, arg).0
}

pub fn h2(alpha: f64, m: usize, n: usize, z1: C64, z2: C64) -> C64 {
    let e: f64 = (1.0 - alpha) / (1.0 + alpha);
    (1.0 - alpha) / (PI * alpha.sqrt()) * e.powf((m + n) as f64 / 2.0) * (-z1 * z2 / 2.0).exp()
        / (fact(m) * fact(n)).sqrt()
        * hermite2_direct(m, n, z1, z2).0
}

pub fn k2(alpha: f64, m: usize, n: usize, z1: C64, z2: C64) -> C64 {
    let e: f64 = (1.0 - alpha) / (1.0 + alpha);
    let s = 2.0 * alpha.sqrt() / (1.0 - alpha * alpha).sqrt();
    2.0 * alpha.sqrt() / (1.0 + alpha) * e.powf((m + n) as f64 / 2.0) * (e * z1 * z2).exp()
        / (fact(m) * fact(n)).sqrt()
        * hermite2_direct(m, n, s * z1, s * z2).0
}

pub fn psi(a: f64, n: usize, q: f64) -> f64 {
    a.sqrt() / (2f64.powi(n as i32) * fact(n) * PI.sqrt()).sqrt()
        * (-a * a * q * q / 2.0).exp()
        * hermite_direct(n, c(a * q, 0.0)).0.re
}

/// `3F2(1, 1, 1; z+1, conj(w)+1; 1) / (z conj(w))` by its hypergeometric
/// series, summed until the term drops below `tol` of the partial sum.
pub fn f32_kernel(z: C64, w: C64, tol: f64) -> C64 {
    let wb = w.conj();
    let mut term = c(1.0, 0.0);
    let mut sum = c(0.0, 0.0);
    let mut k = 0.0f64;
    loop {
        sum += term;
        if term.norm() < tol * sum.norm() && k > 10.0 {
            break;
        }
        term *= (1.0 + k).powi(3) / ((z + 1.0 + k) * (wb + 1.0 + k) * (1.0 + k));
        k += 1.0;
        assert!(k < 5e6, "reference series did not settle");
    }
    sum / (z * wb)
}

/// Max entrywise modulus of `a - b`.
pub fn max_diff(a: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// The same kernel for slowly converging arguments (down to `Re z = Re w = 1`):
/// partial sums at `K, 2K, .., 32K` extrapolated with the tail model
/// `sum_j c_j K^{1-p-j}`, `p = z + conj(w)`.
pub fn f32_kernel_extrapolated(z: C64, w: C64) -> C64 {
    let wb = w.conj();
    let p = z + wb;
    let ks: Vec<usize> = (0..6).map(|i| 1000usize << i).collect();
    let mut partial = Vec::new();
    let (mut term, mut sum) = (c(1.0, 0.0), c(0.0, 0.0));
    let mut k = 0usize;
    for &target in &ks {
        while k < target {
            sum += term;
            let kf = k as f64;
            term *= (1.0 + kf) * (1.0 + kf) / ((z + 1.0 + kf) * (wb + 1.0 + kf));
            k += 1;
        }
        partial.push(sum);
    }
    let n = ks.len();
    let k0 = ks[0] as f64;
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if j == 0 {
            c(1.0, 0.0)
        } else {
            -(c(ks[i] as f64 / k0, 0.0).powc(1.0 - p - (j - 1) as f64))
        }
    });
    let b = nalgebra::DVector::from_vec(partial);
    let x = a.lu().solve(&b).expect("extrapolation system is singular");
    x[0] / (z * wb)
}
