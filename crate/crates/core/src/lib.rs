//! Computations in Kauffman bracket skein modules over the dual numbers
//! `C[e]/(e^2)` at `t = -1 + e`, with the supporting quantum torus symbol
//! calculus and SL2 numerics used to check first-order identities.

pub mod error;
pub mod ring;
pub mod selflink;
pub mod skein;
pub mod sl2;
pub mod suite;
pub mod torus;
pub mod transport;
pub mod words;

pub use error::{CalibrationError, ParseError, SkeinError, Sl2Error, TorusError};
pub use ring::{Dual, DualScalar, ExactDual, GaussianRational, LaurentPoly};
pub use skein::{
    build_handle_slide, evaluate, goldman_bracket, resolve, resolve_dual, resolve_laurent, Diagram,
    FlatPair, SkeinElement, SkeinRing,
};
pub use sl2::{Form3, Mat2, Representation, Sl2, Sl2Vec};
pub use torus::{CommutativeLM, RSequence, TorusElement};
pub use transport::{
    calibrate_kappa, f_and_fprime, fprime_closed_form, frozen_kappa, transport_residual,
    TransportReport,
};
pub use words::{ConjClass, GroupWord, Letter};
