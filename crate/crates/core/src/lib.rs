//! Combinatorial models of the repetitive cluster category `C_{n,p}` of type
//! `D_n`: the orbit quiver `Gamma_{n,p}` built from the derived category, the
//! quiver of tagged edges on a punctured `np`-gon, the isomorphism between
//! them, and cluster-tilting objects computed from orbit Hom dimensions.

pub mod ar_model;
pub mod cluster_tilting;
pub mod equivalence;
pub mod error;
pub mod export;
pub mod linalg;
pub mod polygon_model;
pub mod report;
pub mod translation_quiver;

pub use error::{Error, Result};
