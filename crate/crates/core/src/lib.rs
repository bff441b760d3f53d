//! Exact monodromy computations for degenerations of Calabi-Yau manifolds.
//!
//! The crate covers unipotent monodromy logarithms and weight filtrations,
//! nilpotent cones and their gluing under connection matrices, movable-cone
//! chamber fans, Picard-Fuchs series identities, and high-precision numeric
//! transport of a Pfaffian system.

pub mod error;
pub mod birational;
pub mod cones;
pub mod exact;
pub mod fan;
pub mod hodge;
pub mod poly;
pub mod series;
pub mod word;
pub mod dataset;

pub use error::{Error, Result};
pub use dataset::Dataset;
pub use exact::{ExactMatrix, QuadNum, QuadRay, Rat};
pub use word::Word;
