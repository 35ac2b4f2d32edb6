//! Numerical library for the index transforms arising from Sturm-Liouville
//! spectral theory — Kontorovich-Lebedev, index Whittaker and Mehler-Fock —
//! together with their spectral heat kernels and resolvents, generalized Yor
//! integrals, Feller boundary classification, and a killed-diffusion Monte
//! Carlo engine that cross-validates every spectral formula against its
//! Feynman-Kac counterpart.

pub mod error;
pub mod grid;
pub mod heat;
pub mod logscale;
pub mod operators;
pub mod quad;
pub mod specfun;
pub mod spectral;
pub mod checks;
pub mod diffusion;
pub mod expr;
pub mod feller;
pub mod rng;
pub mod transforms;
pub mod yor;

pub use error::{Error, Result};
pub use grid::{GridFunction, Interpolation};
pub use logscale::{LogScaledValue, LogSum};
pub use operators::SLOperator;
pub use quad::{Carrier, DecayHint, QuadResult, QuadSpec};
pub use diffusion::{DiffusionSpec, MCEstimate, PathBundle};
pub use spectral::{KernelKind, SpectralEngine};
pub use transforms::TransformFamily;
