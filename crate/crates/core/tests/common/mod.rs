#![allow(dead_code)]

pub use slopeflow::scenarios::random_network;
