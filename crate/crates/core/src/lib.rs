//! Bargmann invariants of pure-state tuples: Gram-matrix realizability,
//! the achievable regions of third- and fourth-order invariants, and
//! basis-independent imaginarity witnesses built from overlaps alone.
//!
//! Hermitian linear algebra is implemented in [`linalg`] (cyclic complex
//! Jacobi) so the crate has no LAPACK dependency.

pub mod error;
pub mod experiments;
pub mod gram;
pub mod linalg;
pub mod regions;
pub mod rng;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use gram::{
    build_candidate3, build_candidate4, build_circulant4, extract_invariants3, is_realizable,
    real_realization_triple, Candidate3, Candidate4, CirculantCandidate4, OverlapTuple3,
    OverlapTuple6,
};
pub use linalg::{eigh, factor_states, hermitian_eigenvalues, is_psd, HermitianMatrix};
pub use regions::{BoundaryCurve, Region};
pub use states::{
    bargmann_invariant, gram_matrix, haar_random_tuple, DensityMatrix, InvariantValue, StateTuple,
    StateVector,
};
pub use witness::{witness_overlaps4, witness_states4, WitnessMode, WitnessReport};
