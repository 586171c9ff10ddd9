//! Foldable cube complexes, strict hyperbolization and loop contraction in
//! dual complexes.
//!
//! The crate is organised bottom up: [`cube`], [`cubical`] and
//! [`simplicial`] hold the combinatorial data, [`folding`] and [`mirror`]
//! add the folding structure, [`gromov`] builds hyperbolized complexes,
//! [`curvature`] checks links and hyperplanes, [`dual`] materializes the
//! dual complex of a foldable complex, [`path`] contracts loops in it and
//! [`tree`] builds the mirror/component trees.

pub mod cube;
pub mod cubical;
pub mod curvature;
pub mod dual;
pub mod fixtures;
pub mod folding;
pub mod gromov;
pub mod io;
pub mod iso;
pub mod mirror;
pub mod path;
pub mod poset;
pub mod simplicial;
pub mod subdivision;
pub mod tree;
pub mod unionfind;

pub use cube::{Cube, VertexId};
pub use cubical::{validate_cubical, validate_cubical_closed, CubicalComplex, ValidationError};
pub use poset::{link, CellId, CellPoset, Link};
pub use simplicial::SimplicialComplex;
