mod common;

use defring::catalog::minimal_names;

#[test]
fn catalog_matches_golden_files() {
    let bad = common::golden_mismatches();
    assert!(bad.is_empty(), "{} mismatches:\n{}", bad.len(), bad.join("\n"));
}

#[test]
fn every_golden_file_belongs_to_a_name() {
    let stems: Vec<String> = minimal_names().iter().map(|n| common::file_stem(n)).collect();
    for entry in std::fs::read_dir(common::golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        assert!(stems.contains(&stem), "stray golden file {}", path.display());
    }
}

#[test]
fn file_stems_are_distinct() {
    let mut stems: Vec<String> = minimal_names().iter().map(|n| common::file_stem(n)).collect();
    let n = stems.len();
    stems.sort();
    stems.dedup();
    assert_eq!(stems.len(), n);
}

#[test]
fn small_sets_are_stored_verbatim() {
    let text = std::fs::read_to_string(common::golden_dir().join("lie_sp_2.sexpr")).unwrap();
    assert!(text.starts_with("(vset (sig x[1,1] x[1,2] x[2,1] x[2,2])"));
    let so0 = std::fs::read_to_string(common::golden_dir().join("lie_so_0.sexpr")).unwrap();
    assert_eq!(so0, "(vset (sig) (true))\n");
}
