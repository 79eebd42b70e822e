//! Runs every code snippet in the guide (`book/src/*.md`) as a doctest,
//! keeping the book and the library in lockstep.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/process.md")]
pub mod process {}

#[doc = include_str!("../../../book/src/trajectories.md")]
pub mod trajectories {}

#[doc = include_str!("../../../book/src/identities.md")]
pub mod identities {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
