//! Numerical gauge fixing for flat dbar-connections on a disc.
//!
//! A connection `dbar + rho dwbar` with `rho = sum_I rho_I(w) z^I` is
//! trivialised by `g = sum_J g_J(w) z^J` solving `dg/dwbar = g rho`. Order by
//! order in `|I|` this is
//!
//! ```text
//! dg_I/dwbar = g_I rho_0 + sum_(I = J + K, |K| > 0) g_J rho_K
//! ```
//!
//! which the Cauchy transform `L` (a right inverse of `d/dwbar`) turns into
//! the fixed-point problems `f = L(rho_0 + f rho_0)` for `g_0 = 1 + f` and
//! `g_I = L(g_I rho_0 + A_I)` for higher orders. Each map is a contraction
//! with ratio about `sup |rho_0|`.

mod cauchy;
mod grid;
pub mod io;
mod problem;
mod solver;

pub use cauchy::{
    cauchy_transform, cell_integral, dbar_fd, dbar_fd_field, CauchyOperator, Evaluation,
    DIRECT_LIMIT,
};
pub use grid::{DiscGrid, GridMatrixFn, MatrixField};
pub use problem::{GaugeProblem, GridSpec, RhoTerm};
pub use solver::{
    check_flatness, contraction_bound, gauge_family, gauge_family_with, rescale, solve_order,
    solve_order0, verify_gauge, GaugeSolution, OrderReport, OrderResidual, SolverConfig,
    RESIDUAL_FRACTION,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FD_THREADS";

/// Runs `f` on a thread pool limited by `FD_THREADS` when it is set to a
/// positive integer, otherwise on the global pool.
pub fn with_worker_limit<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let limit = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok());
    match limit.filter(|&n| n > 0) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
