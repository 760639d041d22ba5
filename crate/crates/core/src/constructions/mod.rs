//! Generators for colored line configurations.

pub(crate) mod algebraic;
pub mod dual_cycles;
mod finite;
mod probabilistic;
pub mod small;
mod tricolor;
pub mod two_slit;

pub use algebraic::{coordinate_vector, gen_algebraic};
pub use dual_cycles::{gen_dual_cycles, search_dual_cycles, small_rationals, DualCycleReport, DualCycles};
pub use finite::{default_v_vectors, is_prime, rank_mod_p, AlgebraicParams, FiniteVec};
pub use probabilistic::{gen_probabilistic, sample_probabilistic, DeletionReport, ProbParams, ProbSample};
pub use small::{gen_desargues, gen_reye};
pub use tricolor::gen_tricolor;
pub use two_slit::{gen_two_slit, linked_family, quadric_rulings, Slits};
