//! Construction, transformation and exact verification of colored line
//! configurations.
//!
//! A configuration is a set of lines split into color classes. The crate
//! builds the grid-based constructions (finite-field and random selection),
//! the small 12-line configurations of Reye and Desargues type, dual-plane
//! cycle families and two-slit line families, and checks them with exact
//! rational arithmetic: k-consistency, colorful incidences, flatness,
//! minimality and incidence-structure isomorphism.

pub mod analysis;
pub mod constructions;
pub mod error;
pub mod exactgeom;
pub mod gridmodel;
pub mod incidence;
pub mod io;
pub mod rng;
pub mod transforms;

pub use error::{Error, Result};
pub use exactgeom::{Line, ProjFlat, ProjPoint, RatScalar};
pub use gridmodel::{ColoredGridConfig, GridClass, GridLine};
pub use incidence::{IncidenceTable, LineRef};
pub use transforms::{ColoredLineConfig, DualPointConfig};
