//! One-step kernels built from complex conditional probabilities.
//!
//! The one-step complex probability of moving from `|k>` through the
//! U-eigenvector `|u_n>` to `|k'>` is `P(k'; n, k) = <k'|u_n><u_n|k>`. Summing
//! it against a phase `e^{-i H~(p_n, x_k) dt}` gives a transfer-matrix step.
//! For `H = K(p) + V(x)` the sum over `n` only involves `K`, which yields the
//! free kernel `P_X`, and the full step is `X = P_X diag(e^{-i V dt})`.

mod hamiltonian;
mod kernel;
mod paths;
pub mod reference;

pub use hamiltonian::{MixedHamiltonian, SplitHamiltonian};
pub use kernel::{
    evolve, evolve_fast, free_step_kernel, full_step_kernel, mixed_step_kernel, KernelKind,
    StepKernel,
};
pub use paths::{brute_force_amplitude, conditional_probability, PathEnsembleResult, PATH_LIMIT};
