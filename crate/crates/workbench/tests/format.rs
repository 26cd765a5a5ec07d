#![allow(clippy::result_large_err)]

use artgallery_core::compiler::{compile_gallery, formula_from_faces, parse_faces, rewrite_with_satisfiers, LayoutParams};
use artgallery_core::gadgets::{generate_family, Family};
use artgallery_core::topology::{sample_family, SampleOptions};
use artgallery_workbench::format::{from_json, CloudFile, FacesFile, FormatError, GalleryFile};
use serde_json::Value;

fn families() -> Vec<Family> {
    vec![
        Family::Circle,
        Family::Clover(2),
        Family::Clover(3),
        Family::Chain(2),
        Family::Necklace(4),
        Family::Grid { h: 3, v: 2 },
        Family::Grid { h: 4, v: 1 },
        Family::Torus,
        Family::DoubleTorus,
    ]
}

#[test]
fn families_round_trip_exactly() {
    for fam in families() {
        let inst = generate_family(&fam).unwrap();
        let json = GalleryFile::from_instance(&inst).to_json();
        let file = GalleryFile::from_json(&json).unwrap();
        assert_eq!(file.to_instance().unwrap(), inst, "{fam}");
        assert_eq!(file.to_json(), json, "{fam}");
    }
}

#[test]
fn compiled_galleries_round_trip() {
    let u = parse_faces(2, "X1=0; X1=1 & X2=1").unwrap();
    let cg = compile_gallery(&rewrite_with_satisfiers(&formula_from_faces(&u).unwrap()), &LayoutParams::default()).unwrap();
    let json = GalleryFile::from_compiled(&cg).to_json();
    let back = GalleryFile::from_json(&json).unwrap().to_compiled().unwrap().unwrap();
    assert_eq!(back, cg);
    assert!(GalleryFile::from_instance(&cg.instance).to_compiled().unwrap().is_none());
}

#[test]
fn serialisation_is_stable() {
    for fam in families() {
        let a = GalleryFile::from_instance(&generate_family(&fam).unwrap()).to_json();
        let b = GalleryFile::from_instance(&generate_family(&fam).unwrap()).to_json();
        assert_eq!(a, b, "{fam}");
    }
    // frozen from the first run
    let circle = GalleryFile::from_instance(&generate_family(&Family::Circle).unwrap()).to_json();
    assert_eq!(circle, include_str!("golden/circle.json"));
}

fn check_no_floats(v: &Value, path: &str) {
    match v {
        Value::Number(n) => assert!(n.is_u64(), "{path} holds the non-integer {n}"),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| check_no_floats(x, &format!("{path}[{i}]"))),
        Value::Object(o) => o.iter().for_each(|(k, x)| check_no_floats(x, &format!("{path}.{k}"))),
        Value::String(s) => assert!(!s.contains('.') || path.ends_with(".name") || path == ".family", "{path} = {s:?}"),
        _ => {}
    }
}

#[test]
fn geometry_is_never_a_float() {
    for fam in families() {
        let v: Value = serde_json::from_str(&GalleryFile::from_instance(&generate_family(&fam).unwrap()).to_json()).unwrap();
        check_no_floats(&v, "");
    }
}

fn circle_value() -> Value {
    serde_json::from_str(&GalleryFile::from_instance(&generate_family(&Family::Circle).unwrap()).to_json()).unwrap()
}

fn load(v: &Value) -> Result<artgallery_core::gadgets::GalleryInstance, FormatError> {
    GalleryFile::from_json(&v.to_string())?.to_instance()
}

#[test]
fn errors_name_the_field() {
    let mut v = circle_value();
    v["vertices"][3][0] = Value::String("0.25".into());
    let e = load(&v).unwrap_err().to_string();
    assert!(e.contains("vertices[3]") && e.contains("0.25"), "{e}");

    let mut v = circle_value();
    v["segments"][1]["pockets"][2]["apex"][1] = Value::from(3);
    let e = load(&v).unwrap_err().to_string();
    assert!(e.starts_with("segments[1].pockets[2].apex[1]"), "{e}");

    let mut v = circle_value();
    v["segments"][0]["pockets"].as_array_mut().unwrap().pop();
    assert!(load(&v).unwrap_err().to_string().contains("exactly four pockets"));

    let mut v = circle_value();
    v["surprise"] = Value::Bool(true);
    assert!(load(&v).is_err());

    let mut v = circle_value();
    v["segments"][0]["pockets"][0]["tip"] = Value::from(0);
    assert!(load(&v).unwrap_err().to_string().contains("does not match vertex"));

    let mut v = circle_value();
    v["vertices"].as_array_mut().unwrap().reverse();
    assert!(matches!(load(&v), Err(FormatError::Core(artgallery_core::Error::InvalidPolygon(_)))));

    let mut v = circle_value();
    v["version"] = Value::String("artgallery-gallery/0".into());
    assert!(load(&v).is_err());
}

#[test]
fn faces_files() {
    let ff: FacesFile = from_json(r#"{"dimension": 3, "faces": [{"1": 0}, {"2": 1, "3": 0}]}"#).unwrap();
    let u = ff.to_union().unwrap();
    assert_eq!(u, parse_faces(3, "X1=0; X2=1 & X3=0").unwrap());
    for bad in [
        r#"{"dimension": 2, "faces": [{"0": 1}]}"#,
        r#"{"dimension": 2, "faces": [{"1": 2}]}"#,
        r#"{"dimension": 2, "faces": [{"3": 1}]}"#,
        r#"{"dimension": 2, "faces": []}"#,
    ] {
        let ff: FacesFile = from_json(bad).unwrap();
        assert!(ff.to_union().is_err(), "{bad}");
    }
    let e = from_json::<FacesFile>(r#"{"dimension": 2, "faces": [{"1": "x"}]}"#).unwrap_err().to_string();
    assert!(e.starts_with("faces[0].1"), "{e}");
}

#[test]
fn clouds_round_trip() {
    let inst = generate_family(&Family::Circle).unwrap();
    let cloud = sample_family(&inst, &SampleOptions::new(8)).unwrap();
    let file = CloudFile::from_cloud(&inst.family, &cloud);
    let back: CloudFile = from_json(&file.to_json()).unwrap();
    assert_eq!(back.to_cloud().unwrap(), cloud);
}
