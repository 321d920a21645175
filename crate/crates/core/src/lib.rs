//! Planar locomotion environments over seeded, procedurally generated terrain.
//!
//! [`physics2d`] steps articulated rigid bodies against a heightfield,
//! [`terrain`] builds that heightfield from parameter files, [`character`]
//! defines the morphologies and their actuation models, and [`env`] ties them
//! into reset/step environments listed in a named catalog. [`cli`] backs the
//! `terra` binary and [`ffi`] exposes environments over a C interface.
//!
//! ```
//! let mut env = terra::env::make_env("PD_Biped2D_Walk-Flat-v0").unwrap();
//! env.set_random_seed(0);
//! let obs = env.reset();
//! assert_eq!(obs.data.len(), env.obs_dim());
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assets;
pub mod character;
pub mod cli;
pub mod env;
pub mod ffi;
pub mod physics2d;
pub mod rng;
pub mod terrain;

/// Crate version, also exchanged across the C interface.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
