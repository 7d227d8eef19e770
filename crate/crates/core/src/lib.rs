//! Exponentiated-update online learning for composite objectives.
//!
//! The learners in this crate run adaptive optimistic mirror descent and
//! follow-the-regularised-leader with the generalised entropy regulariser
//! `phi(x) = alpha (|x| + beta) ln(|x|/beta + 1) - alpha |x|`, on vectors
//! (l1 geometry) and on matrices through their singular values (nuclear
//! geometry).
//!
//! Module map:
//!
//! * [`entropy`]: the scalar potential, its conjugate, the mirror maps and the
//!   Bregman divergence;
//! * [`lambert`]: the principal Lambert branch used by the elastic-net prox;
//! * [`prox`]: elastic-net prox and sorted l1-ball projection;
//! * [`learners`]: vector AO-OMD / AO-FTRL with adaptive stepsizes;
//! * [`spectral`]: SVD adapter, nuclear/Frobenius prox, nuclear-ball
//!   projection and the matrix learners;
//! * [`acceleration`]: online-to-batch stochastic acceleration;
//! * [`baselines`]: diagonal AdaGrad, AdaFTRL and EG±;
//! * [`zeroth_order`]: two-point gradient estimation;
//! * [`harness`]: synthetic experiments, regret accounting and CSV output.

pub mod acceleration;
pub mod baselines;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod lambert;
pub mod learners;
pub mod point;
pub mod prox;
pub mod spectral;
pub mod zeroth_order;

pub use error::{Error, Result};
