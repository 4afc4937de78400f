//! Shipped example inputs, addressable by name wherever a file is expected.

pub const FIXTURES: &[(&str, &str)] = &[
    ("benzene", include_str!("../../../fixtures/benzene.json")),
    ("boolean8", include_str!("../../../fixtures/boolean8.json")),
    (
        "compat_triple",
        include_str!("../../../fixtures/compat_triple.json"),
    ),
    (
        "ghz_mermin",
        include_str!("../../../fixtures/ghz_mermin.json"),
    ),
    (
        "mermin_peres",
        include_str!("../../../fixtures/mermin_peres.json"),
    ),
    (
        "qubit_hilbert",
        include_str!("../../../fixtures/qubit_hilbert.json"),
    ),
    (
        "qubit_measure_hilbert",
        include_str!("../../../fixtures/qubit_measure_hilbert.json"),
    ),
    (
        "qubit_measure_lattice",
        include_str!("../../../fixtures/qubit_measure_lattice.json"),
    ),
    (
        "qubit_model",
        include_str!("../../../fixtures/qubit_model.json"),
    ),
    (
        "spin1_triads_demo",
        include_str!("../../../fixtures/spin1_triads_demo.json"),
    ),
    (
        "toy_model",
        include_str!("../../../fixtures/toy_model.json"),
    ),
    (
        "witness_model",
        include_str!("../../../fixtures/witness_model.json"),
    ),
];

pub fn get(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}
