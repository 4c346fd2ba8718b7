#![allow(dead_code)]

pub mod analysis;
pub mod oracle;
