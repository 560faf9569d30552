pub mod dd;
pub mod interval;
pub mod special;
pub mod sum;

pub use dd::Dd;
pub use interval::Enclosure;
pub use sum::{ComplexSum, NeumaierSum};
