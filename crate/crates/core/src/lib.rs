//! Exact symbolic engine for lambda-bracket superalgebras of Block type,
//! their finite quotients, annihilation superalgebras and conformal modules.
//!
//! Everything is computed over the exact field `Q(i, sqrt(p))`; every check
//! is a polynomial identity verified to be literally zero, never a numeric
//! approximation.

pub mod acceptance;
pub mod annihilation;
pub mod catalog;
pub mod defects;
pub mod doc;
pub mod conformal;
pub mod factors;
pub mod hermite;
pub mod module;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod submodule;
pub mod upoly;
