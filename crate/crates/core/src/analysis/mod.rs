//! Bottleneck distances between diagrams and Hilbert functions of
//! bifiltrations.

mod bottleneck;
mod hilbert;
mod svg;

pub use bottleneck::{bottleneck_distance, bottleneck_finite};
pub use hilbert::{hilbert_function, hilbert_function_with, HilbertGrid};
pub use svg::{diagram_svg, hilbert_svg};
