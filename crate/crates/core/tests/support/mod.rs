#![allow(dead_code)]

pub mod exprs;
pub mod golden;
pub mod oracle;
