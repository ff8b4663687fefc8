//! Exact Markov-kernel algebra and trajectory laws on finite state spaces.
//!
//! Probabilities are arbitrary-precision rationals, so every identity
//! between kernels (Chapman–Kolmogorov, projectivity of the trajectory
//! marginals, the conditional-expectation formula, the product-measure
//! reduction) is checked as literal equality.
//!
//! - [`measure`]: distributions on enumerated spaces.
//! - [`kernel`]: Markov kernels, composition, products and
//!   composition-products.
//! - [`trajectory`]: chain models, the partial-trajectory kernels
//!   `η_{a,b}`, cylinders and their content, witness extraction, conditional
//!   expectations and a sequential sampler.
//! - [`product`]: product measures as chains with constant kernels.
//! - [`model_file`] and [`cli`]: the JSON model format and command line.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod measure;
pub mod model_file;
pub mod product;
pub mod random;
pub mod rational;
pub mod report;
pub mod space;
pub mod trajectory;

pub use error::{Error, Result};
pub use kernel::Kernel;
pub use measure::{Dist, SubsetOf};
pub use product::ProductModel;
pub use rational::Prob;
pub use space::{Space, SpaceRef};
pub use trajectory::{ChainModel, Cylinder, Prefix, StepSpec};
