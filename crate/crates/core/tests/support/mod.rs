#![allow(dead_code)]

pub mod causal_oracle;
