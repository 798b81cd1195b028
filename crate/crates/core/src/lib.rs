//! Deciding the orbit problem for cyclic permutation groups in linear time.
//!
//! Given `g` in disjoint-cycle form and two words `v`, `w` of length `n`,
//! [`orbit::decide_orbit`] determines whether `g^r v = w` for some `r` and
//! returns every such `r` as an arithmetic progression. Each cycle is
//! handled by string matching on its projection and contributes one
//! congruence; the congruences are then intersected.
//!
//! Besides the decision procedure the crate provides
//! - [`crt_solver`]: solvability of congruence systems via prime-power
//!   splitting, linear in the unary size of the input,
//! - [`oracle`]: brute-force enumeration used as ground truth,
//! - [`analysis`]: exact Stirling/harmonic moment identities and sampled
//!   average-case costs,
//! - [`bench`]: scaling runs on the primorial family and random permutations.

pub mod analysis;
pub mod bench;
pub mod cli;
pub mod congruence;
pub mod crt_solver;
pub mod oracle;
pub mod orbit;
pub mod permutation;
pub mod strmatch;

pub use congruence::{ArithmeticProgression, Congruence, CongruenceSystem, CostCounter};
pub use orbit::{decide_orbit, reduce, OrbitAnswer, Reduction};
pub use permutation::{Configuration, Cycle, Permutation};
