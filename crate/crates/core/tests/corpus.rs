//! Round-trip of the shipped example corpus through the file format:
//! parse, print, reparse, reprint; the normalized form must be a fixed
//! point and every model kind must be exercised.

use std::collections::BTreeSet;
use std::path::PathBuf;

use dgquiver::{parse, print, QuiverModel};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn kind_name(m: &QuiverModel) -> &'static str {
    match m {
        QuiverModel::Quiver(_) => "quiver",
        QuiverModel::WithPotential(_) => "potential",
        QuiverModel::Presentation(_) => "relations",
        QuiverModel::Dg(_) => "dg",
    }
}

#[test]
fn every_corpus_file_round_trips_through_print() {
    let mut kinds = BTreeSet::new();
    let mut count = 0;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory exists")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "quiver"))
        .collect();
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path).unwrap();
        let model = parse(&text)
            .unwrap_or_else(|d| panic!("{} fails to parse: {d}", path.display()));
        kinds.insert(kind_name(&model));
        let printed = print(&model);
        let reparsed = parse(&printed)
            .unwrap_or_else(|d| panic!("{} fails to reparse: {d}", path.display()));
        assert_eq!(
            printed,
            print(&reparsed),
            "{} is not a print fixed point",
            path.display()
        );
        count += 1;
    }
    assert!(count >= 10, "corpus unexpectedly small: {count} files");
    assert_eq!(
        kinds.into_iter().collect::<Vec<_>>(),
        vec!["dg", "potential", "quiver", "relations"],
        "corpus misses a model kind"
    );
}
