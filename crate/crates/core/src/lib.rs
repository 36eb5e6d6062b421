//! Computation engine for central series of finite groups and a harness that
//! checks the classical bounds relating a group's hypercenter, derived
//! subgroup and nilpotent residual.
//!
//! Groups are dense multiplication tables ([`group::GroupTable`]); finite
//! modules over a group of automorphisms live in [`zg_module`].

pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod group;
pub mod perm;
pub mod series;
pub mod theorems;
pub mod zg_module;

pub use error::{Error, Result};
