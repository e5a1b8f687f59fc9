#![allow(dead_code)]

use std::collections::BTreeMap;

use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Triple {
    pub mu: f64,
    pub gamma: f64,
    pub z: f64,
    pub value: f64,
    pub method: String,
}

#[derive(Debug, Deserialize)]
pub struct Point {
    pub mu: f64,
    pub gamma: f64,
    pub z: f64,
    pub value: f64,
}

/// model -> mu -> nu -> prices at t = 100, 1000, 10000 (C = 20).
pub type Tables = BTreeMap<String, BTreeMap<String, BTreeMap<String, Vec<f64>>>>;

#[derive(Debug, Deserialize)]
pub struct Reference {
    pub ml_triples: Vec<Triple>,
    pub crosscheck: Vec<Point>,
    pub tables: Tables,
    pub spot: BTreeMap<String, f64>,
}

pub fn reference() -> Reference {
    let text = include_str!("../fixtures/reference.json");
    serde_json::from_str(text).expect("reference fixture parses")
}

pub fn rel_err(value: f64, expected: f64) -> f64 {
    (value - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}
