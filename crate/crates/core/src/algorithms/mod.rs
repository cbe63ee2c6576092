//! End-to-end oracle algorithms and Grover search.

pub mod gf2;
pub mod grover;
pub mod kickback;
pub mod simon;

pub use gf2::{simons_solver, Gf2System};
pub use grover::{
    evolve, grover, grover_closed_form, grover_via_qft, optimal_grover_iterations, run_plan, Diffusion, GroverPlan,
    GroverResult,
};
pub use kickback::{
    bernstein_vazirani, deutsch, deutsch_jozsa, kickback_program, kickback_state, measure_register,
    BernsteinVaziraniResult, Classification, DeutschJozsaResult, DeutschResult,
};
pub use simon::{default_max_runs, simons, SimonOutcome, SimonResult};
