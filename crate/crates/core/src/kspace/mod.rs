//! Complex grids, centered transforms, acquisition masks and the `CKS1` format.

mod dft;
mod grid;
pub mod io;
mod mask;
mod weight;

pub use dft::{
    dft1_centered, dft2_centered, dft_cols_centered, dft_rows_centered, to_image, to_kspace,
    Direction,
};
pub use grid::{default_center, ComplexGrid, RealImage};
pub use mask::{apply_mask, conjugate_reflect, AcquisitionMask};
pub use weight::{frequency_weight, inverse_frequency_weight, GeometryParams};
