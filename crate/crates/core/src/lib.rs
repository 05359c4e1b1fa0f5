//! Holomorphic Hermite coherent states in the reproducing-kernel picture.
//!
//! Basis families and Hermite polynomials live in [`hermite`], Gaussian
//! quadrature in [`quadrature`], kernels and integrability diagnostics in
//! [`rkhs`], the Segal-Bargmann transform kernels in [`bargmann`], truncated
//! Fock-space states and operators in [`states`], and Schmidt analysis in
//! [`entanglement`].

pub mod bargmann;
pub mod entanglement;
mod error;
pub mod hermite;
pub mod quadrature;
pub mod rkhs;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Caps the global rayon pool from `HERMITE_CS_THREADS` if it is set.
///
/// Returns the number of worker threads in effect. Calling it more than once
/// is harmless; only the first successful call configures the pool.
pub fn init_thread_pool() -> usize {
    if let Some(n) = std::env::var("HERMITE_CS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    rayon::current_num_threads()
}
