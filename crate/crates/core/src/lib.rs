//! Polygonal simulation of curvature flows with a global forcing term,
//! together with the geometric certificates used to monitor them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod flow;
pub mod forcing;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod monitors;
pub mod oracles;
pub mod scenarios;
pub mod singularity;
