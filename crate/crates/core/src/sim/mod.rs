//! Bloch-equation spin-echo simulation of a digital brain phantom.

mod bloch;
mod simulate;
mod tissue;

pub use bloch::{
    init_magnetization, lorentzian_ensemble, propagate, propagate_towards, rf_rotate,
    MagnetizationState, SpinEnsemble,
};
pub use simulate::{
    reverse_centric_order, simulate_spin_echo, truncate_acquisition, SequenceParams, GAMMA,
};
pub use tissue::{
    brain_phantom, PhantomGeometry, RelaxationClass, Tissue, TissueClass, TissueMap, CSF,
    GRAY_MATTER, WHITE_MATTER,
};
