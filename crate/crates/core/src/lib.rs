//! PL geometric category of 2-dimensional polyhedra.

pub mod cell;
pub mod collapse;
pub mod complex;
pub mod corpus;
pub mod covers;
pub mod deformation;
pub mod homology;
pub mod io;
pub mod one_relator;
pub mod polygonal;
pub mod strip;
pub mod structure;
pub mod subdivision;

pub use complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
pub use subdivision::{SecondSubdivision, SubdivisionMap};
pub use homology::{homology, HomologySummary};
pub use collapse::{CollapseCertificate, CollapseStep, CollapsibilityVerdict, StrongCollapseCertificate, StrongCollapseStep};
pub use structure::{analyze, StructureReport};
pub use covers::{Cover, PieceCertificate};
