//! Chain complexes built from Singer functors that compute the derived
//! functors of destabilization and of iterated loop functors for modules
//! over the mod 2 Steenrod algebra, together with a resolution-based oracle
//! that computes the same groups independently.

pub mod complexes;
pub mod error;
pub mod gf2;
pub mod library;
pub mod module;
pub mod oracle;
pub mod poly;
pub mod presentation;
pub mod report;
pub mod singer;
pub mod steenrod;
pub mod unstable;

pub use error::{Error, Result};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Send, R: Send>(items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R>(items: Vec<T>, f: impl Fn(T) -> R) -> Vec<R> {
    items.into_iter().map(f).collect()
}
