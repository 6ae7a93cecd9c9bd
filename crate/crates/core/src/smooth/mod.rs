//! Smooth numbers: exact `Ψ(x, y)`, its asymptotic regimes, the Dickman
//! function, `Φ̃`, divisor-times-smooth counts and multiplicative rank.

mod dickman;
mod divisor;
mod primes;
mod psi;
mod rank;

pub use dickman::{dickman_rho, DickmanTable, STEPS_PER_UNIT};
pub use divisor::{check_bounddivsm, smooth_bound_prime, tau_divisor_smooth};
pub use primes::{nth_prime, prime_count, primes_up_to, small_primes};
pub use psi::{
    phi_tilde, psi_estimate_ht, psi_estimate_rho, psi_estimate_small_y, psi_exact, psi_exact_big, HtEstimate,
    RhoEstimate, SmoothCounter, MEMO_CAP,
};
pub use rank::{gram_determinant, multiplicative_rank, ExponentVector, IncrementalRank, RankResult};
