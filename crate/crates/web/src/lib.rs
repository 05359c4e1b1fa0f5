//! Browser bindings for a small interactive demo.
//!
//! The plain functions are what the page needs, with complex numbers passed as
//! interleaved `re, im` pairs; the `wasm` module wraps them for JavaScript.

use hermite_cs::entanglement::alpha_entropy_sweep;
use hermite_cs::hermite::{AlphaParam, Arity, BasisSpec, Point};
use hermite_cs::states::{
    kept_indices, squeeze_matrix, squeezed_values, zeta_from_xi, MiddleFactor, ResidualRows, SqueezeMethod, XI_LIMIT,
};
use hermite_cs::C64;

/// First `n` members of a one-variable family at `z`, as `[re0, im0, re1, im1, ...]`.
///
/// `family` is one of `h1d`, `k1d`, `monomial1d`; alpha is ignored for the last.
pub fn basis_values(family: &str, alpha: f64, re: f64, im: f64, n: usize) -> Result<Vec<f64>, String> {
    if n == 0 || n > 200 {
        return Err(format!("n must lie in [1, 200], got {n}"));
    }
    let spec = match family {
        "monomial1d" => BasisSpec::Monomial1D,
        "h1d" => BasisSpec::HolHermiteH1D(AlphaParam::new(alpha).map_err(|e| e.to_string())?),
        "k1d" => BasisSpec::HolHermiteK1D(AlphaParam::new(alpha).map_err(|e| e.to_string())?),
        other => return Err(format!("unknown family {other:?}")),
    };
    let v = spec.values(n, Point::One(C64::new(re, im))).map_err(|e| e.to_string())?.values();
    Ok(v.iter().flat_map(|z| [z.re, z.im]).collect())
}

/// Entanglement entropy (natural log) of the bipartite coherent state at
/// `(z1, z2)` for each alpha, truncated at `n` per mode.
pub fn entropy_curve(z1: [f64; 2], z2: [f64; 2], alphas: &[f64], n: usize) -> Result<Vec<f64>, String> {
    if n > 60 {
        return Err(format!("n is capped at 60 in the browser, got {n}"));
    }
    let pts = alpha_entropy_sweep(C64::new(z1[0], z1[1]), C64::new(z2[0], z2[1]), alphas, n).map_err(|e| e.to_string())?;
    Ok(pts.iter().map(|p| p.schmidt.entropy).collect())
}

/// `[exact vs disentangled on the interior block, columns vs closed form at z, |zeta|, arg zeta]`
/// for the one-mode squeeze operator at truncation `n`.
pub fn squeeze_check(xi: [f64; 2], z: [f64; 2], n: usize) -> Result<Vec<f64>, String> {
    let xi = C64::new(xi[0], xi[1]);
    if !(xi.norm() < XI_LIMIT) {
        return Err(format!("|xi| must be below {XI_LIMIT}"));
    }
    if !(4..=80).contains(&n) {
        return Err(format!("n must lie in [4, 80], got {n}"));
    }
    let ex = squeeze_matrix(xi, n, Arity::One, SqueezeMethod::Exact).map_err(|e| e.to_string())?;
    let za = squeeze_matrix(xi, n, Arity::One, SqueezeMethod::Zassenhaus(MiddleFactor::Standard)).map_err(|e| e.to_string())?;
    let keep = kept_indices(Arity::One, n, ResidualRows::Interior);
    let mut agree = 0.0f64;
    for &i in &keep {
        for &j in &keep {
            agree = agree.max((ex.matrix[(i, j)] - za.matrix[(i, j)]).norm());
        }
    }
    let zeta = zeta_from_xi(xi);
    let p = Point::One(C64::new(z[0], z[1]));
    let cols = (2 * n / 3).max(1);
    let want = squeezed_values(cols, p, zeta).map_err(|e| e.to_string())?;
    let phi = BasisSpec::Monomial1D.values(n, p).map_err(|e| e.to_string())?.values();
    let mut worst = 0.0f64;
    for (k, w) in want.iter().enumerate() {
        let got: C64 = (0..n).map(|m| ex.matrix[(m, k)] * phi[m]).sum();
        worst = worst.max((got - w).norm());
    }
    Ok(vec![agree, worst, zeta.norm(), zeta.arg()])
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsValue> {
        r.map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = basisValues)]
    pub fn basis_values(family: &str, alpha: f64, re: f64, im: f64, n: usize) -> Result<Vec<f64>, JsValue> {
        js(super::basis_values(family, alpha, re, im, n))
    }

    #[wasm_bindgen(js_name = entropyCurve)]
    pub fn entropy_curve(z1re: f64, z1im: f64, z2re: f64, z2im: f64, alphas: Vec<f64>, n: usize) -> Result<Vec<f64>, JsValue> {
        js(super::entropy_curve([z1re, z1im], [z2re, z2im], &alphas, n))
    }

    #[wasm_bindgen(js_name = squeezeCheck)]
    pub fn squeeze_check(xire: f64, xiim: f64, zre: f64, zim: f64, n: usize) -> Result<Vec<f64>, JsValue> {
        js(super::squeeze_check([xire, xiim], [zre, zim], n))
    }
}
