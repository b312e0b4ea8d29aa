//! parse -> dump -> load on the fixture corpus, and line classification
//! against hand counts.

mod common;

use common::ck_oracle::HAND_STATS;

use entropia::ingest::{self, from_interchange_str, to_interchange_string};
use entropia::metrics::{model_metrics, WmcWeighting};
use entropia::model::SourceStats;

#[test]
fn annotated_files_match_hand_counts() {
    for &(file, lines, blank, comment, code, executable, declarative) in HAND_STATS {
        let path = common::fixture("corpus").join(file);
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = ingest::parse_file(file, &text).unwrap();
        let want = SourceStats {
            files: 1,
            lines,
            blank,
            comment,
            code,
            executable,
            declarative,
        };
        assert_eq!(parsed.stats, want, "{file}");
    }
}

#[test]
fn corpus_round_trips_metric_identical() {
    let model = common::corpus();
    let text = to_interchange_string(&model);
    let back = from_interchange_str(&text).unwrap();
    assert_eq!(back, model);
    for w in [WmcWeighting::Unit, WmcWeighting::Cyclomatic] {
        assert_eq!(model_metrics(&back, w), model_metrics(&model, w));
    }
    assert_eq!(to_interchange_string(&back), text);
}

#[test]
fn round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.json");
    let model = common::corpus();
    ingest::dump_interchange(&model, &path).unwrap();
    let back = ingest::load_interchange(&path).unwrap();
    assert_eq!(
        model_metrics(&back, WmcWeighting::Unit),
        model_metrics(&model, WmcWeighting::Unit)
    );
    assert_eq!(back.stats(), model.stats());
}

#[test]
fn corpus_stats_aggregate() {
    let model = common::corpus();
    let s = model.stats().unwrap();
    assert_eq!(s.files, 4);
    assert_eq!(s.lines, s.blank + s.comment + s.code);
}
