use stmod::fpmod::{normalize_whitespace, verify_fixture, Library, ModuleFile};

#[test]
fn every_fixture_meets_its_expectations() {
    let lib = Library::shipped();
    let names = lib.names().unwrap();
    assert!(names.len() >= 25);
    let mut failures = Vec::new();
    for name in &names {
        for (what, outcome) in verify_fixture(name, &lib).unwrap() {
            if let Err(e) = outcome {
                failures.push(format!("{name}: {what}: {e}"));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn fixtures_round_trip() {
    let lib = Library::shipped();
    for name in lib.names().unwrap() {
        let text = std::fs::read_to_string(lib.dir().join(format!("{name}.mod"))).unwrap();
        let f = ModuleFile::parse(&text).unwrap();
        assert_eq!(
            normalize_whitespace(&f.serialize()),
            normalize_whitespace(&text),
            "{name}"
        );
        assert_eq!(f.name, name);
    }
}
