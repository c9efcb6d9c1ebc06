//! Short-time Fourier transform on a Gabor lattice and the mixed norms built
//! from it: modulation spaces `M^{p,q}`, Wiener amalgams `W(FL^p, L^q)` and
//! the Feichtinger algebra `M¹`. One-dimensional.

mod analysis;
mod norms;
mod stft;

pub use analysis::{
    check_dilation, check_dilation_on, chirp_amalgam_growth, dilate, homogeneous_stft_decay,
    stft_decay_profile, DecayProfile, DilationRatio, CHIRP_MARGIN,
};
pub use norms::{amalgam_norm, edge_ratio, m1_norm, modulation_norm};
pub use stft::{stft, Lattice1d, LatticeSpec, StftMatrix, Window};
