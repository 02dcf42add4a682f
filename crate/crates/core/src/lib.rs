//! Exact log canonical thresholds of binomial and monomial ideals, computed
//! as the optimum of a rational linear program and certified by a uniqueness
//! test on the optimal face.

pub mod charp;
pub mod cli;
pub mod curves;
pub mod engine;
pub mod ideal;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod report;

pub use engine::{build_lp, compute_lct, compute_lct_with, CertificateStatus, LctCertificate, LctOptions};
pub use ideal::{parse_ideal, BinomialGen, ExponentVector, IdealError, IdealSpec, MonomialGen};
pub use rational::Rational;
