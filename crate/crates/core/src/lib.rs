#![allow(clippy::needless_range_loop)]

pub mod counting;
pub mod coxeter;
pub mod field;
pub mod flag;
pub mod report;
pub mod twist;
pub mod verify;
