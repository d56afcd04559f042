//! Instance generators, strip algorithm registry, benchmark runner and SVG rendering.

pub mod algorithms;
pub mod bench;
pub mod gen;
pub mod svg;

pub use algorithms::{resolve_params, AlgOptions, StripAlgorithm};
pub use bench::{bench, write_records, BenchError, BenchRecord};
pub use gen::{gen_equal_height, gen_tiling, gen_uniform, GenError};
pub use svg::{render_svg, write_svg};
