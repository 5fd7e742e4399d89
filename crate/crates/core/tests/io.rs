mod common;

use common::ideals::{corpus, ideal};
use syzygy::curvegen::{build_recipe, check_singularities, Recipe};
use syzygy::groebner::buchberger;
use syzygy::io::*;
use syzygy::polyring::MonomialOrder;

#[test]
fn ideal_files_round_trip() {
    for (name, i) in corpus() {
        let text = write_ideal(&i);
        let back = read_ideal(&text).unwrap();
        assert_eq!(back.generators(), i.generators(), "{name}");
        assert_eq!(write_ideal(&back), text, "{name}");
    }
}

#[test]
fn basis_files_round_trip() {
    let i = ideal(4, &["x0^2 + x1*x2", "x0*x1 + x3^2"]);
    let gb = buchberger(&i, MonomialOrder::Grevlex);
    let text = write_polys(i.ring(), gb.elements());
    let (_, polys) = read_polys(&text).unwrap();
    assert_eq!(polys, gb.elements());
}

#[test]
fn header_and_comments() {
    let i = read_ideal("# two lines\nring p=101 vars=a,b,c\n\na^2 - b*c\n# end\n").unwrap();
    assert_eq!(i.ring().p(), 101);
    assert_eq!(i.ring().names(), &["a", "b", "c"]);
    assert_eq!(i.generators().len(), 1);
    let w = read_ideal("ring p=7 vars=s,t,w weights=1,1,2\nw - s*t\n").unwrap();
    assert_eq!(w.ring().weights(), &[1, 1, 2]);
    assert!(write_ideal(&w).starts_with("ring p=7 vars=s,t,w weights=1,1,2\n"));
}

#[test]
fn malformed_files_are_refused() {
    for bad in ["", "ring vars=x", "ring p=12 vars=x", "ideal p=7 vars=x", "ring p=7 vars=x,y\nx +* y", "ring p=7 vars=x,y\nx^2 + y", "ring p=7 vars=x q=1"] {
        assert!(read_ideal(bad).is_err(), "{bad:?}");
    }
    let e = read_ideal("ring p=7 vars=x,y\nx\nx + z").unwrap_err();
    assert!(e.to_string().starts_with("line 3"), "{e}");
}

#[test]
fn models_round_trip() {
    for r in [Recipe::G72, Recipe::OneG15, Recipe::ThreeG15] {
        let m = build_recipe(r, 10007, 4).unwrap();
        let (forms, side) = (write_polys(&m.ring, &m.defining_forms), write_sidecar(&m));
        let back = read_model(&forms, &side).unwrap();
        assert_eq!(back, m, "{r}");
        check_singularities(&back).unwrap();
    }
}

#[test]
fn small_field_orbits_round_trip() {
    let m = build_recipe(Recipe::G72, 3, 1).unwrap();
    assert!(m.points.iter().any(|c| c.modulus.len() > 2));
    let back = read_model(&write_polys(&m.ring, &m.defining_forms), &write_sidecar(&m)).unwrap();
    assert_eq!(back, m);
}

#[test]
fn inconsistent_models_are_refused() {
    let m = build_recipe(Recipe::G72, 10007, 4).unwrap();
    let forms = write_polys(&m.ring, &m.defining_forms);
    let side = write_sidecar(&m);
    assert!(read_model(&forms, &side.replace("ambient plane", "ambient quadric")).is_err());
    assert!(read_model(&forms, &side.replace("recipe g72", "recipe g99")).is_err());
    assert!(read_model(&forms, &(side.clone() + "point mult=2 modulus=3 chart=;\n")).is_err());
    assert!(read_model(&forms, &(side.clone() + "point mult=2 modulus=5,1 chart=20000;1\n")).is_err());
    assert!(read_model(&forms, &side.replace("seed 4\n", "")).is_err());
}
