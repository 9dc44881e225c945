//! Fixtures shared by the benchmarks.

use bnsl_core::encoder::{build_qubo, EncoderConfig};
use bnsl_core::{networks, BnslQubo, Dataset};

/// Expected dataset of `rows` rows from a bundled network.
pub fn dataset(network: &str, rows: usize) -> Dataset {
    networks::by_name(network)
        .expect("bundled network")
        .expected_dataset(rows)
        .expect("dataset")
}

pub fn encoded(network: &str, rows: usize) -> BnslQubo {
    build_qubo(&dataset(network, rows), &EncoderConfig::default()).expect("encoding")
}
