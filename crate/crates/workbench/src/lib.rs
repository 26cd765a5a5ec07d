//! Files, rendering, command line and HTTP service around
//! [`artgallery_core`].

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod exact;
pub mod format;
pub mod render;
pub mod service;
