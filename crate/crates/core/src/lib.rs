#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod exactalg;
pub mod polyring;
pub mod groebner;
pub mod betti;
pub mod scroll;
pub mod exterior;
pub mod picard;
pub mod classify;
pub mod curvegen;
pub mod io;
