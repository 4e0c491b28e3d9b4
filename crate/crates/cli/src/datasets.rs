//! Scenario files shipped inside the binary.

pub const CONSTANTS: &str = include_str!("../datasets/constants.toml");

pub struct Dataset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const DATASETS: &[Dataset] = &[
    Dataset {
        name: "main_belt",
        summary: "main asteroid belt as a power-law belt, diameters >= 1 km",
        text: include_str!("../datasets/main_belt.toml"),
    },
    Dataset {
        name: "solar_planets",
        summary: "Solar System planets on the Titius-Bode chain",
        text: include_str!("../datasets/solar_planets.toml"),
    },
    Dataset {
        name: "galilean_satellites",
        summary: "the four Galilean satellites of Jupiter",
        text: include_str!("../datasets/galilean_satellites.toml"),
    },
    Dataset {
        name: "two_body_test",
        summary: "two coupled bodies for the quadrature oracle",
        text: include_str!("../datasets/two_body_test.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Dataset> {
    DATASETS.iter().find(|d| d.name == name)
}
