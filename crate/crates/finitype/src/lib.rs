//! Multifractal analysis of self-similar measures of finite type on `[0, 1]`.
//!
//! Everything is computed exactly in a real number field `Q(ρ)`: the
//! characteristic vectors of net intervals, the graph they form, the
//! transition matrices on its edges, and from those the local dimensions at
//! periodic points, bounds for the set of local dimensions on the essential
//! class, and a sufficient test for generalized regularity.
//!
//! ```
//! use finitype::{catalog, net};
//!
//! let ifs = catalog::golden_ss_ratio(2, 5);
//! let graph = net::analyze(&ifs, 1000).unwrap();
//! assert_eq!(graph.len(), 7);
//! ```

// Field elements hash by their coefficients; the lock inside a field only
// caches a refined root enclosure.
#![allow(clippy::mutable_key_type)]

pub mod catalog;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod ifs;
pub mod net;
pub mod numberfield;
pub mod specfile;
pub mod transitions;

pub use error::{Error, Result};
pub use ifs::{AffineMap, Ifs, Word};
pub use net::{CharacteristicVector, NetIntervalInstance};
pub use numberfield::{Enclosure, FieldElement, NumberField};
pub use transitions::{TransitionMatrix, VectorGraph};
