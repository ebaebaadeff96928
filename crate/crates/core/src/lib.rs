//! Generic k-ranks and power-sum decompositions of binary forms.

pub mod apolarity;
pub mod certificate;
pub mod decomposition;
pub mod error;
pub mod fiber;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod reproduce;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod sextic;
pub mod structured;
pub mod tolerance;

pub use decomposition::{Decomposition, PowerSum, PowerTerm, WaringDecomposition};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use poly::{BinaryForm, LinearSubstitution, MultiForm};
pub use roots::ProjRoot;
pub use scalar::{Field, GaussRational, Mode, Scalar, C64};
pub use tolerance::Tolerances;
