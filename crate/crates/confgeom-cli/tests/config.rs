use confgeom::integrability::ConformalData;
use confgeom::mink5::LorentzMap;
use confgeom_cli::config::RunConfig;
use confgeom_cli::data::TabulatedData;
use confgeom_cli::transform::{parse_chain, parse_transform};
use confgeom_cli::{CliError, Format};

fn parse(text: &str) -> Result<RunConfig, CliError> {
    RunConfig::from_json(text)
}

#[test]
fn defaults_fill_in() {
    let c = parse(r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 10}}"#).unwrap();
    assert_eq!(c.jet_order, 6);
    assert_eq!(c.lambda_name(), "round");
    assert!(c.invariants.is_empty());
    let g = c.grid().unwrap();
    assert_eq!((g.nu, g.nv), (8, 10));
    // periodic grids leave out the closing point
    assert!((g.step[0] - core::f64::consts::TAU / 8.0).abs() < 1e-15);
    assert!((g.step[1] - core::f64::consts::TAU / 10.0).abs() < 1e-15);
    assert_eq!(c.tolerance("anything", 0.5), 0.5);
}

#[test]
fn open_ranges_include_both_ends() {
    let c = parse(
        r#"{"surface": {"kind": "flat_torus", "params": [0.6]},
            "grid": {"nu": 9, "nv": 9, "u_range": [0.0, 1.0], "v_range": [1.0, 2.0], "periodic": [false, false]}}"#,
    )
    .unwrap();
    let g = c.grid().unwrap();
    assert!((g.step[0] - 0.125).abs() < 1e-15);
    assert_eq!(g.point(8, 8), [1.0, 2.0]);
}

#[test]
fn rejects_bad_configs() {
    let cases = [
        r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 7}}"#,
        r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "jet_order": 2}"#,
        r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "tolerances": {"gauss": 0.0}}"#,
        r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "points": [[0.0, 0.1]]}"#,
        r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "points": [[1.0, -0.1]]}"#,
        r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8, "u_range": [1.0, 1.0]}}"#,
        r#"{"surface": {"kind": "sphere"}, "grid": {"nu": 8, "nv": 8}}"#,
        r#"{"surface": {"kind": "clifford"}}"#,
    ];
    for text in cases {
        assert!(matches!(parse(text), Err(CliError::Config(_))), "{text}");
    }
    let c = parse(
        r#"{"surface": {"kind": "clifford"}, "lambda": {"kind": "affine", "params": [1.0, 2.0, 0, 0, 0]}, "grid": {"nu": 8, "nv": 8}}"#,
    );
    assert!(matches!(c.and_then(|c| c.factor().map(|_| ())), Err(CliError::Config(_))));
}

#[test]
fn fingerprint_tracks_content() {
    let a = parse(r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}}"#).unwrap();
    let b = parse(r#"{ "grid": {"nv": 8, "nu": 8}, "surface": {"kind": "clifford"} }"#).unwrap();
    let c = parse(r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 9}}"#).unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_ne!(a.fingerprint(), c.fingerprint());
    assert_eq!(a.fingerprint().len(), 64);
}

#[test]
fn output_format_parses() {
    let c =
        parse(r#"{"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "output": {"format": "csv"}}"#).unwrap();
    assert_eq!(c.output.format, Format::Csv);
}

#[test]
fn transforms_parse() {
    let b = parse_transform("boost:2,0,0,0,0.5").unwrap();
    let unit = LorentzMap::boost([1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
    assert_eq!(b.matrix(), unit.matrix());
    let r = parse_transform("rotation:1,3,0.7").unwrap();
    assert_eq!(r.matrix(), LorentzMap::rotation(1, 3, 0.7).unwrap().matrix());
    let chain = parse_chain("boost:2,0,0,0,0.5;rotation:1,3,0.7").unwrap();
    assert_eq!(chain.matrix(), unit.compose(&LorentzMap::rotation(1, 3, 0.7).unwrap()).matrix());
    for bad in ["boost", "boost:1,0,0,0", "rotation:1.5,2,0.1", "rotation:1,1,0.3", "spin:1,2,3", "boost:a,0,0,0,1"] {
        assert!(parse_transform(bad).is_err(), "{bad}");
    }
}

#[test]
fn tabulated_data_round_trips() {
    let c = parse(r#"{"surface": {"kind": "flat_torus", "params": [0.6]}, "grid": {"nu": 8, "nv": 8}}"#).unwrap();
    let data = ConformalData::from_chart(&c.chart().unwrap(), &c.factor().unwrap(), c.grid().unwrap(), 6).unwrap();
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("d.json");
    TabulatedData::from(&data).write(&path).unwrap();
    let back = TabulatedData::read(&path).unwrap().into_data().unwrap();
    assert_eq!(back.grid, data.grid);
    let a = data.to_tabulated();
    assert_eq!(TabulatedData::from(&back), TabulatedData::from(&a));
    assert!(matches!(TabulatedData::read(&dir.path().join("missing.json")), Err(CliError::Io { .. })));
}
