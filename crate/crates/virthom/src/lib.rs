//! Virtually-homomorphic perturbations of free-group representations, and the
//! combinatorial machinery around them.
//!
//! The headline pipeline lives in [`perturb`]: given a group model with a
//! lattice and a compact coset space, a homomorphism `phi` from a free group
//! `F(S)` (specified by its generator images) and a tolerance `epsilon`, it
//! produces a map `phi_eps` that is within `epsilon` of `phi` in the
//! one-letter sense and restricts to a genuine homomorphism into the lattice
//! on a finite-index subgroup `F'`. The subgroup is recorded as a finite
//! covering of the rose with `|S|` petals ([`rose`]), built by expanding an
//! integer-weighted transition digraph ([`weighting`]).
//!
//! The remaining modules are standalone calculators used by the same
//! program of study: mod-p homology ranks of presentations, singular-graph
//! Betti bounds and the Golod-Shafarevich test ([`orbifold`]); triangulation
//! 1-skeletons, graph Cheeger constants and normal-surface cell counts
//! ([`surfaces`]); and the backing group models ([`models`]).
//!
//! Every operation is deterministic for a fixed seed, and the exact backends
//! (finite groups, rational torus) run entirely over exact arithmetic.

pub mod models;
pub mod orbifold;
pub mod perturb;
pub mod ratio;
pub mod rose;
pub mod surfaces;
pub mod weighting;
pub mod words;
