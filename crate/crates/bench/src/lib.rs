//! Fixtures shared by the benchmarks: the shipped hospital scenarios and
//! search spaces, loaded once.

use std::path::PathBuf;

use hybridsizer::{load_bundle, ScenarioConfig, SearchSpace, SeriesBundle};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/hospital")
}

pub fn scenario(name: &str) -> (ScenarioConfig, SeriesBundle) {
    let dir = data_dir();
    let cfg = ScenarioConfig::from_path(&dir.join(name)).expect("shipped scenario parses");
    let bundle = load_bundle(&cfg.load, &cfg.resources, &dir).expect("shipped series load");
    (cfg, bundle)
}

pub fn space(name: &str) -> (SearchSpace, SeriesBundle) {
    let dir = data_dir();
    let space = SearchSpace::from_path(&dir.join(name)).expect("shipped space parses");
    let bundle = load_bundle(&space.load, &space.resources, &dir).expect("shipped series load");
    (space, bundle)
}
