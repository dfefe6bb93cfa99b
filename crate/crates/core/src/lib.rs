pub mod error;
pub mod ff;

pub use error::{Error, Result};
pub use ff::{make_field, ExtensionSpec, FieldElement, FieldSpec};
pub mod mpoly;
pub use mpoly::{HomogDecomp, Monomial, MultiPoly};
pub mod charsum;
pub use charsum::{CycInt, CycRational};
pub mod linalg;
pub mod ideals;
pub mod koszul;
pub mod dwork;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
