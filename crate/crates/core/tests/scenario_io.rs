use proptest::prelude::*;
use starworlds::scenario::*;
use starworlds::Error;

const SCENES: [&str; 3] = [
    include_str!("../scenes/three_ellipses.txt"),
    include_str!("../scenes/ellipses_and_polygon.txt"),
    include_str!("../scenes/moving.txt"),
];

#[test]
fn scene_files_have_stable_canonical_form() {
    for text in SCENES {
        let s = from_text(text).unwrap();
        let canon = to_text(&s);
        let back = from_text(&canon).unwrap();
        assert_eq!(back, s);
        assert_eq!(to_text(&back), canon);
    }
}

#[test]
fn save_then_load_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moving.txt");
    let s = from_text(SCENES[2]).unwrap();
    save_scenario(&s, &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(load_scenario(&path).unwrap(), s);
    save_scenario(&load_scenario(&path).unwrap(), &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
    // no temporary files are left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_scenario(std::path::Path::new("/nonexistent/scene.txt")).unwrap_err();
    assert!(matches!(err, Error::Io(_)), "{err:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_scenes_round_trip(n in 1usize..30, seed in any::<u64>()) {
        let s = generate_random_scene(n, seed).unwrap();
        let text = to_text(&s);
        let back = from_text(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(to_text(&back), text);
    }

    #[test]
    fn generation_is_reproducible(n in 1usize..30, seed in any::<u64>(), k in 0u64..8) {
        prop_assert_eq!(generate_scene_at(n, seed, k).unwrap(), generate_scene_at(n, seed, k).unwrap());
    }
}
