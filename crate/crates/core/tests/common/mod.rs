#![allow(dead_code)]

pub mod exterior_fixtures;
pub mod ideals;
