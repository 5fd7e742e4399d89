use std::sync::Arc;
use syzygy::groebner::Ideal;
use syzygy::polyring::{Polynomial, RingSpec};
use syzygy::scroll::{scroll_ideal, ScrollType};

pub fn ring(n: usize) -> Arc<RingSpec> {
    RingSpec::standard(10007, "x", n).unwrap()
}

pub fn ideal(n: usize, gens: &[&str]) -> Ideal {
    let r = ring(n);
    Ideal::new(&r, gens.iter().map(|g| Polynomial::parse(&r, g).unwrap()).collect()).unwrap()
}

pub fn scroll(e: &str) -> Ideal {
    let t = ScrollType::parse(e).unwrap();
    scroll_ideal(&t, &ring(t.ambient() + 1)).unwrap()
}

/// Two fixed quadrics in four variables meeting in an elliptic quartic.
pub fn two_quadrics() -> Ideal {
    ideal(4, &["x0^2 + 3*x1*x2 - x3^2 + 5*x0*x3", "x0*x1 + 5*x2^2 + 7*x1*x3 - 2*x3^2"])
}

/// Ten small ideals in at most five variables.
pub fn corpus() -> Vec<(&'static str, Ideal)> {
    vec![
        ("scroll S(1,1)", scroll("1,1")),
        ("scroll S(2,1)", scroll("2,1")),
        ("twisted cubic", scroll("3")),
        ("rational normal quartic", scroll("4")),
        ("complete intersection", two_quadrics()),
        ("maximal ideal", ideal(3, &["x0", "x1", "x2"])),
        ("principal", ideal(3, &["x0^3 + x1^3 + x2^3"])),
        ("monomial", ideal(4, &["x0^2", "x0*x1", "x1*x2^2", "x3^3"])),
        ("points", ideal(3, &["x0*x1", "x0*x2", "x1*x2"])),
        ("non-minimal basis", ideal(3, &["x0^2 + x1*x2", "x0*x1"])),
    ]
}
