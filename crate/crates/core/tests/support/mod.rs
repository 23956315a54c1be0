#![allow(dead_code)]

pub mod ideal_oracle;
