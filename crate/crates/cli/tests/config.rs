use effham::hamlib::HamiltonianKind;
use effham_cli::config::{LoadedConfig, Pipeline};

const BASE: &str = r#"
[hamiltonian]
kind = "radial"
profile = "ring_well"
dim = 2

[potential]
kind = "sine_product"

[grid]
points = 32

[pgrid]
radius = 1.0
samples = 21
"#;

#[test]
fn minimal_config_uses_defaults() {
    let c = LoadedConfig::from_str(BASE).unwrap();
    assert_eq!(c.config.scales, vec![0.0]);
    assert_eq!(c.config.pipelines, vec![Pipeline::Direct]);
    assert_eq!(c.config.solver, Default::default());
    assert_eq!(c.config.p_grid().unwrap().len(), 441);
    assert_eq!(c.hash.len(), 64);
}

#[test]
fn hash_tracks_the_source_text() {
    let a = LoadedConfig::from_str(BASE).unwrap();
    let b = LoadedConfig::from_str(&format!("{BASE}\n")).unwrap();
    assert_ne!(a.hash, b.hash);
    assert_eq!(a.hash, LoadedConfig::from_str(BASE).unwrap().hash);
}

#[test]
fn explicit_knots_and_double_well() {
    let knots = BASE.replace("profile = \"ring_well\"", "radii = [0.0, 1.0]\nvalues = [1.0, 0.0]\ntail_slope = 2.0");
    let c = LoadedConfig::from_str(&knots).unwrap();
    assert_eq!(c.config.profile().unwrap().unwrap().eval(0.5), 0.5);
    let dw = BASE.replace("kind = \"radial\"\nprofile = \"ring_well\"\ndim = 2", "kind = \"double_well\"\noffset = [1.0, 0.0]");
    let c = LoadedConfig::from_str(&dw).unwrap();
    assert!(matches!(c.config.hamiltonian().unwrap().kind, HamiltonianKind::DoubleWell { .. }));
}

#[test]
fn rejects_inconsistent_configs() {
    for (from, to) in [
        ("profile = \"ring_well\"", "profile = \"nonesuch\""),
        ("samples = 21", "samples = 20"),
        ("kind = \"sine_product\"", "kind = \"triangle\"\nc0 = 1.0\napex = 0.5"),
        ("points = 32", "points = 32\nextra = 1"),
        ("[grid]", "[solver]\ncfl = 2.0\n\n[grid]"),
        ("profile = \"ring_well\"", "profile = \"ring_well\"\nradii = [0.0]"),
    ] {
        let text = BASE.replace(from, to);
        assert!(LoadedConfig::from_str(&text).is_err(), "{from} -> {to}");
    }
}
