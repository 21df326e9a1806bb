//! Bubble-sort star graphs and their decycling structure.
//!
//! The bubble-sort star graph of dimension `n`, written `BS_n`, is the Cayley
//! graph on all `n!` permutations of `{1..n}` whose generators are the star
//! transpositions `(1,j)` for `2 <= j <= n` together with the adjacent swaps
//! `(i,i+1)` for `2 <= i <= n-1`. It is `(2n-3)`-regular and bipartite: every
//! edge joins a permutation with an even number of inversions to one with an
//! odd number.
//!
//! The crate provides:
//!
//! - [`perm`]: permutation algebra, parity, rotations, Lehmer ranking, and
//!   the special vertex families the decycling constructions reserve;
//! - [`graph`]: the graph itself, with cached or on-the-fly adjacency, plus
//!   DOT and edge-list export;
//! - [`metrics`]: BFS distances, diameter, closed-form rotation distances
//!   with an explicit routing policy, and distance-k independence checks;
//! - [`decycle`]: exact lower/upper bound formulas for the decycling number,
//!   constructions of small decycling sets, and certificate verification;
//! - [`exact`]: a branch-and-bound solver computing minimum feedback vertex
//!   sets of tiny instances, used as ground truth.

pub mod decycle;
pub mod error;
pub mod exact;
pub mod graph;
pub mod metrics;
pub mod perm;

pub use error::Error;
pub use graph::{AdjacencyMode, BubbleSortStarGraph, BuildOptions, VertexId};
pub use perm::{Parity, Permutation, Transposition};
