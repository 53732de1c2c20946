//! Edge-transitive Ramanujan Cayley graphs on `PSL₂(q^e)` and `PGL₂(q^e)`
//! built from quaternion reductions, cyclic inner codes of even length, and
//! the symmetric LDPC codes they define on graph edges.
//!
//! Layering, bottom up: [`field`] and [`gf2`] arithmetic; [`cyclic`] inner
//! codes; [`group`] projective matrices and the torus; [`lsv`] generating
//! sets; [`graph`] and [`spectrum`]; [`cayley_code`]; [`alist`] export; and
//! [`pipeline`], which strings them together and writes reports.

pub mod alist;
pub mod cayley_code;
pub mod cyclic;
pub mod field;
pub mod gf2;
pub mod graph;
pub mod group;
pub mod lsv;
pub mod pipeline;
pub mod spectrum;
