//! Exact lower K-theory of group rings of finite and virtually cyclic groups.

pub mod catalog;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod fp;
pub mod ktheory;
pub mod perm;
pub mod rational;
pub mod zlin;

pub use error::{Error, Result};
