#![allow(dead_code)]

use std::path::PathBuf;

use entropia::model::ClassModel;

pub mod ck_oracle;
pub mod entropy_props;
pub mod weyuker_bf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn corpus() -> ClassModel {
    entropia::ingest::parse_paths(&[fixture("corpus")]).expect("corpus parses")
}
