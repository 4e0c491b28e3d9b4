//! Scenario files: parsing, unit resolution, validation and the SI echo.

use std::path::Path;

use epsilon_stability::bounds::{BoundForm, PlanetChainParams, PowerLawBeltParams, SimilarBeltParams};
use epsilon_stability::model::sphere_mass;
use epsilon_stability::{pair_coupling, Body, FreeMeasure, GibbsModel, GibbsModel64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datasets;
use crate::error::{CliError, CliResult};
use crate::units::{Dimension, Quantity, UnitDecl, Units};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "similar")]
    Similar,
    #[serde(rename = "powerlaw")]
    PowerLaw,
    #[serde(rename = "planets")]
    Planets,
    #[serde(rename = "custom-system")]
    Custom,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Similar => "similar",
            Kind::PowerLaw => "powerlaw",
            Kind::Planets => "planets",
            Kind::Custom => "custom-system",
        }
    }
}

/// Shape of a scenario file with the parameter block of one kind.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document<P> {
    schema_version: u32,
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default)]
    units: UnitDecl,
    params: P,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    bodies: Vec<BodyEntry>,
}

#[derive(Deserialize)]
struct Probe {
    schema_version: u32,
    kind: Kind,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimilarEntry {
    n: u64,
    size: Quantity,
    gamma: f64,
    density_ratio: f64,
    orbit_radius: Quantity,
    star_radius: Quantity,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerLawEntry {
    n: u64,
    nu: f64,
    classes: u32,
    gamma: f64,
    density_ratio: f64,
    orbit_radius: Quantity,
    star_radius: Quantity,
    unit_length: Quantity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FormEntry {
    Closed,
    Explicit,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanetsEntry {
    offset: Quantity,
    scale: Quantity,
    ratio: f64,
    i_min: i32,
    i_max: i32,
    gamma: f64,
    k_typical: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c2: Option<Quantity>,
    #[serde(default = "closed")]
    form: FormEntry,
    star_mass: Quantity,
    masses: Vec<Quantity>,
    planet_radii: Vec<Quantity>,
}

fn closed() -> FormEntry {
    FormEntry::Closed
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    star_mass: Option<Quantity>,
    /// Dimensionless pair couplings in pair order `(0,1), (0,2), ..., (1,2), ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    couplings: Option<Vec<f64>>,
    /// Upper end of the radial deviation per body; selects the truncated free measure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyEntry {
    gamma: f64,
    orbit_radius: Quantity,
    body_radius: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<Quantity>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanetScenario {
    pub params: PlanetChainParams<f64>,
    /// Form used for verdicts and the mass search.
    pub form: BoundForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CustomBody {
    pub gamma: f64,
    pub orbit_radius: f64,
    pub body_radius: f64,
    pub mass: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CustomSystem {
    pub bodies: Vec<CustomBody>,
    pub star_mass: Option<f64>,
    pub couplings: Option<Vec<f64>>,
    pub truncation: Option<Vec<f64>>,
}

/// Scenario parameters with every length and mass in SI.
#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Similar(SimilarBeltParams<f64>),
    PowerLaw(PowerLawBeltParams<f64>),
    Planets(PlanetScenario),
    Custom(CustomSystem),
}

impl Scenario {
    pub fn kind(&self) -> Kind {
        match self {
            Scenario::Similar(_) => Kind::Similar,
            Scenario::PowerLaw(_) => Kind::PowerLaw,
            Scenario::Planets(_) => Kind::Planets,
            Scenario::Custom(_) => Kind::Custom,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioFile {
    pub name: String,
    pub description: Option<String>,
    /// File path or `builtin:<name>`.
    pub origin: String,
    /// SHA-256 of the file as read.
    pub sha256: String,
    pub units: Units,
    pub scenario: Scenario,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Line of the first `key = ...` in `text`, 1-based.
fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

struct Ctx<'a> {
    text: &'a str,
    origin: &'a str,
    units: Units,
}

impl Ctx<'_> {
    fn fail(&self, field: &str, msg: impl std::fmt::Display) -> CliError {
        let key = field.rsplit('.').next().unwrap_or(field);
        let key = key.split('[').next().unwrap_or(key);
        match line_of(self.text, key) {
            Some(line) => CliError::Input(format!("{}:{line}: {field}: {msg}", self.origin)),
            None => CliError::Input(format!("{}: {field}: {msg}", self.origin)),
        }
    }

    fn si(&self, field: &str, q: &Quantity, dim: Dimension) -> CliResult<f64> {
        q.to_si(dim, &self.units).map_err(|e| self.fail(field, e))
    }

    fn core(&self, e: epsilon_stability::Error) -> CliError {
        match &e {
            epsilon_stability::Error::InvalidParameter { field, reason } => {
                self.fail(&format!("params.{field}"), reason)
            }
            _ => self.fail("params", e),
        }
    }
}

fn parse_doc<P: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> CliResult<Document<P>> {
    toml::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let probe: Probe = toml::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
        if probe.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "{origin}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                probe.schema_version
            )));
        }
        let fallback = Path::new(origin)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| origin.to_string());
        let (name, description, units, scenario) = match probe.kind {
            Kind::Similar => {
                let d: Document<SimilarEntry> = parse_doc(text, origin)?;
                let ctx = ctx_for(text, origin, &d)?;
                let p = &d.params;
                let s = SimilarBeltParams {
                    n: p.n,
                    size: ctx.si("params.size", &p.size, Dimension::Length)?,
                    gamma: p.gamma,
                    density_ratio: p.density_ratio,
                    orbit_radius: ctx.si("params.orbit_radius", &p.orbit_radius, Dimension::Length)?,
                    star_radius: ctx.si("params.star_radius", &p.star_radius, Dimension::Length)?,
                };
                s.validate().map_err(|e| ctx.core(e))?;
                (d.name, d.description, ctx.units, Scenario::Similar(s))
            }
            Kind::PowerLaw => {
                let d: Document<PowerLawEntry> = parse_doc(text, origin)?;
                let ctx = ctx_for(text, origin, &d)?;
                let p = &d.params;
                let s = PowerLawBeltParams {
                    n: p.n,
                    nu: p.nu,
                    classes: p.classes,
                    gamma: p.gamma,
                    density_ratio: p.density_ratio,
                    orbit_radius: ctx.si("params.orbit_radius", &p.orbit_radius, Dimension::Length)?,
                    star_radius: ctx.si("params.star_radius", &p.star_radius, Dimension::Length)?,
                    unit_length: ctx.si("params.unit_length", &p.unit_length, Dimension::Length)?,
                };
                s.validate().map_err(|e| ctx.core(e))?;
                (d.name, d.description, ctx.units, Scenario::PowerLaw(s))
            }
            Kind::Planets => {
                let d: Document<PlanetsEntry> = parse_doc(text, origin)?;
                let ctx = ctx_for(text, origin, &d)?;
                let p = &d.params;
                let list = |field: &str, qs: &[Quantity], dim| -> CliResult<Vec<f64>> {
                    qs.iter()
                        .enumerate()
                        .map(|(k, q)| ctx.si(&format!("{field}[{k}]"), q, dim))
                        .collect()
                };
                let params = PlanetChainParams {
                    offset: ctx.si("params.offset", &p.offset, Dimension::Length)?,
                    scale: ctx.si("params.scale", &p.scale, Dimension::Length)?,
                    ratio: p.ratio,
                    i_min: p.i_min,
                    i_max: p.i_max,
                    gamma: p.gamma,
                    k_typical: p.k_typical,
                    masses: list("params.masses", &p.masses, Dimension::Mass)?,
                    planet_radii: list("params.planet_radii", &p.planet_radii, Dimension::Length)?,
                    star_mass: ctx.si("params.star_mass", &p.star_mass, Dimension::Mass)?,
                    c2_override: p
                        .c2
                        .as_ref()
                        .map(|q| ctx.si("params.c2", q, Dimension::Length))
                        .transpose()?,
                };
                params.validate().map_err(|e| ctx.core(e))?;
                let form = match p.form {
                    FormEntry::Closed => BoundForm::Closed,
                    FormEntry::Explicit => BoundForm::Explicit,
                };
                (
                    d.name,
                    d.description,
                    ctx.units,
                    Scenario::Planets(PlanetScenario { params, form }),
                )
            }
            Kind::Custom => {
                let d: Document<CustomEntry> = parse_doc(text, origin)?;
                let units = Units::from_decl(&d.units).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
                let ctx = Ctx { text, origin, units };
                let bodies = d
                    .bodies
                    .iter()
                    .enumerate()
                    .map(|(k, b)| {
                        Ok(CustomBody {
                            gamma: b.gamma,
                            orbit_radius: ctx.si(
                                &format!("bodies[{k}].orbit_radius"),
                                &b.orbit_radius,
                                Dimension::Length,
                            )?,
                            body_radius: ctx.si(
                                &format!("bodies[{k}].body_radius"),
                                &b.body_radius,
                                Dimension::Length,
                            )?,
                            mass: b
                                .mass
                                .as_ref()
                                .map(|q| ctx.si(&format!("bodies[{k}].mass"), q, Dimension::Mass))
                                .transpose()?,
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let system = CustomSystem {
                    bodies,
                    star_mass: d
                        .params
                        .star_mass
                        .as_ref()
                        .map(|q| ctx.si("params.star_mass", q, Dimension::Mass))
                        .transpose()?,
                    couplings: d.params.couplings.clone(),
                    truncation: d.params.truncation.clone(),
                };
                // building the model runs every consistency check
                system.model().map_err(|e| match e {
                    CliError::Input(m) => ctx.fail("bodies", m),
                    other => other,
                })?;
                (d.name, d.description, units, Scenario::Custom(system))
            }
        };
        Ok(Self {
            name: name.unwrap_or(fallback),
            description,
            origin: origin.to_string(),
            sha256: sha256_hex(text.as_bytes()),
            units,
            scenario,
        })
    }

    /// The same scenario with every value in SI, as a scenario file.
    pub fn echo(&self) -> String {
        let q = Quantity::Value;
        let name = Some(self.name.clone());
        let description = self.description.clone();
        let units = UnitDecl::default();
        let result = match &self.scenario {
            Scenario::Similar(p) => toml::to_string(&Document {
                schema_version: SCHEMA_VERSION,
                kind: Kind::Similar,
                name,
                description,
                units,
                params: SimilarEntry {
                    n: p.n,
                    size: q(p.size),
                    gamma: p.gamma,
                    density_ratio: p.density_ratio,
                    orbit_radius: q(p.orbit_radius),
                    star_radius: q(p.star_radius),
                },
                bodies: vec![],
            }),
            Scenario::PowerLaw(p) => toml::to_string(&Document {
                schema_version: SCHEMA_VERSION,
                kind: Kind::PowerLaw,
                name,
                description,
                units,
                params: PowerLawEntry {
                    n: p.n,
                    nu: p.nu,
                    classes: p.classes,
                    gamma: p.gamma,
                    density_ratio: p.density_ratio,
                    orbit_radius: q(p.orbit_radius),
                    star_radius: q(p.star_radius),
                    unit_length: q(p.unit_length),
                },
                bodies: vec![],
            }),
            Scenario::Planets(s) => {
                let p = &s.params;
                toml::to_string(&Document {
                    schema_version: SCHEMA_VERSION,
                    kind: Kind::Planets,
                    name,
                    description,
                    units,
                    params: PlanetsEntry {
                        offset: q(p.offset),
                        scale: q(p.scale),
                        ratio: p.ratio,
                        i_min: p.i_min,
                        i_max: p.i_max,
                        gamma: p.gamma,
                        k_typical: p.k_typical,
                        c2: p.c2_override.map(q),
                        form: match s.form {
                            BoundForm::Closed => FormEntry::Closed,
                            BoundForm::Explicit => FormEntry::Explicit,
                        },
                        star_mass: q(p.star_mass),
                        masses: p.masses.iter().copied().map(q).collect(),
                        planet_radii: p.planet_radii.iter().copied().map(q).collect(),
                    },
                    bodies: vec![],
                })
            }
            Scenario::Custom(c) => toml::to_string(&Document {
                schema_version: SCHEMA_VERSION,
                kind: Kind::Custom,
                name,
                description,
                units,
                params: CustomEntry {
                    star_mass: c.star_mass.map(q),
                    couplings: c.couplings.clone(),
                    truncation: c.truncation.clone(),
                },
                bodies: c
                    .bodies
                    .iter()
                    .map(|b| BodyEntry {
                        gamma: b.gamma,
                        orbit_radius: q(b.orbit_radius),
                        body_radius: q(b.body_radius),
                        mass: b.mass.map(q),
                    })
                    .collect(),
            }),
        };
        result.expect("scenario documents serialise")
    }
}

fn ctx_for<'a, P>(text: &'a str, origin: &'a str, d: &Document<P>) -> CliResult<Ctx<'a>> {
    if !d.bodies.is_empty() {
        return Err(CliError::Input(format!(
            "{origin}: a body list is only read for kind = \"custom-system\", not \"{}\"",
            d.kind.name()
        )));
    }
    let units = Units::from_decl(&d.units).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    Ok(Ctx { text, origin, units })
}

pub fn load_scenario(path: &Path) -> CliResult<ScenarioFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        context: format!("reading {}", path.display()),
        source,
    })?;
    ScenarioFile::parse(&text, &path.display().to_string())
}

/// A path, or the name of a bundled dataset when no such file exists.
pub fn open_scenario(arg: &str) -> CliResult<ScenarioFile> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(d) = datasets::find(arg) {
            return ScenarioFile::parse(d.text, &format!("builtin:{}", d.name));
        }
    }
    load_scenario(path)
}

impl CustomSystem {
    pub fn model(&self) -> CliResult<GibbsModel64> {
        let n = self.bodies.len();
        if n == 0 {
            return Err(CliError::Input("no bodies".into()));
        }
        if let Some(k) = (1..n).find(|&k| self.bodies[k].orbit_radius < self.bodies[k - 1].orbit_radius) {
            return Err(CliError::Input(format!("body {k} is not ordered by orbit radius")));
        }
        let couplings = match (&self.couplings, self.star_mass) {
            (Some(c), _) => c.clone(),
            (None, Some(star_mass)) => {
                let bodies = self
                    .bodies
                    .iter()
                    .enumerate()
                    .map(|(k, b)| {
                        let mass = b.mass.ok_or_else(|| {
                            CliError::Input(format!("body {k} needs a mass when no couplings are given"))
                        })?;
                        Body::new(k, mass, b.body_radius, b.orbit_radius, b.gamma)
                            .map_err(|e| CliError::Input(format!("body {k}: {e}")))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                couplings_of(&bodies, star_mass)?
            }
            (None, None) => {
                return Err(CliError::Input(
                    "give either params.couplings or params.star_mass with a mass per body".into(),
                ))
            }
        };
        let model = GibbsModel::new(
            self.bodies.iter().map(|b| b.gamma).collect(),
            self.bodies.iter().map(|b| b.orbit_radius).collect(),
            self.bodies.iter().map(|b| b.body_radius).collect(),
            &couplings,
        )
        .map_err(|e| CliError::Input(e.to_string()))?;
        match &self.truncation {
            None => Ok(model),
            Some(upper) => model
                .with_free_measure(FreeMeasure::Truncated { upper: upper.clone() })
                .map_err(|e| CliError::Input(e.to_string())),
        }
    }
}

fn couplings_of(bodies: &[Body<f64>], star_mass: f64) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..bodies.len() {
        for j in i + 1..bodies.len() {
            let c = pair_coupling(&bodies[i], &bodies[j], star_mass).map_err(|e| CliError::Input(e.to_string()))?;
            out.push(c.gamma_ij);
        }
    }
    Ok(out)
}

fn model_from_bodies(bodies: Vec<Body<f64>>, star_mass: f64) -> CliResult<GibbsModel64> {
    let couplings = couplings_of(&bodies, star_mass)?;
    GibbsModel::new(
        bodies.iter().map(|b| b.gamma).collect(),
        bodies.iter().map(|b| b.orbit_radius).collect(),
        bodies.iter().map(|b| b.body_radius).collect(),
        &couplings,
    )
    .map_err(|e| CliError::Input(e.to_string()))
}

/// `n` equal bodies of radius `size` on one orbit. Only the density ratio enters the
/// couplings, so the star gets unit density.
pub fn similar_belt_model(p: &SimilarBeltParams<f64>) -> CliResult<GibbsModel64> {
    let star_mass = sphere_mass(1.0, p.star_radius);
    let bodies = (0..p.n as usize)
        .map(|k| Body::with_density(k, p.density_ratio, p.size, p.orbit_radius, p.gamma))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    model_from_bodies(bodies, star_mass)
}

pub fn planet_chain_model(p: &PlanetChainParams<f64>) -> CliResult<GibbsModel64> {
    let bodies = (p.i_min..=p.i_max)
        .enumerate()
        .map(|(k, i)| Body::new(k, p.masses[k], p.planet_radii[k], p.orbit_radius(i), p.gamma))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    // each planet stays within twice the outermost orbit: xi_i <= 2 R_N / R_i
    let outer = p.orbit_radius(p.i_max);
    let upper = bodies.iter().map(|b| 2.0 * outer / b.orbit_radius).collect();
    model_from_bodies(bodies, p.star_mass)?
        .with_free_measure(FreeMeasure::Truncated { upper })
        .map_err(|e| CliError::Input(e.to_string()))
}

/// Largest body count the Metropolis commands accept for a generated belt.
pub const MAX_SAMPLED_BODIES: u64 = 1000;

impl Scenario {
    /// Explicit model for sampling: custom systems as given, belts and chains generated.
    pub fn model(&self) -> CliResult<GibbsModel64> {
        match self {
            Scenario::Custom(c) => c.model(),
            Scenario::Similar(p) if p.n > MAX_SAMPLED_BODIES => Err(CliError::Input(format!(
                "a sampled belt is limited to {MAX_SAMPLED_BODIES} bodies, got {}",
                p.n
            ))),
            Scenario::Similar(p) => similar_belt_model(p),
            Scenario::Planets(s) => planet_chain_model(&s.params),
            Scenario::PowerLaw(_) => Err(CliError::Input(
                "a power-law belt has no explicit body list to sample".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_datasets_load() {
        for d in datasets::DATASETS {
            let s = ScenarioFile::parse(d.text, d.name).unwrap_or_else(|e| panic!("{}: {e}", d.name));
            assert_eq!(s.name, d.name);
        }
        let belt = open_scenario("main_belt").unwrap();
        let Scenario::PowerLaw(p) = belt.scenario else { panic!() };
        assert_eq!(
            (p.gamma, p.density_ratio, p.classes, p.unit_length),
            (50.0, 2.0, 10, 1e3)
        );
        assert_eq!(p.orbit_radius, 2.7 * 1.495978707e11);
        let solar = open_scenario("solar_planets").unwrap();
        let Scenario::Planets(s) = solar.scenario else { panic!() };
        assert_eq!((s.params.gamma, s.params.k_typical, s.params.ratio), (150.0, 30.0, 2.0));
        assert_eq!(s.params.c2_override, Some(1.495978707e11));
        assert_eq!(s.params.ratio.powi(s.params.i_max), 128.0);
    }

    #[test]
    fn strict_schema() {
        let text = datasets::find("main_belt")
            .unwrap()
            .text
            .replace("gamma = 50.0", "gamma = 50.0\ngama = 1.0");
        let err = ScenarioFile::parse(&text, "typo.toml").unwrap_err().to_string();
        assert!(err.contains("gama"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn negative_gamma_names_the_field() {
        let text = datasets::find("main_belt")
            .unwrap()
            .text
            .replace("gamma = 50.0", "gamma = -50.0");
        let err = ScenarioFile::parse(&text, "neg.toml").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("params.gamma") && msg.starts_with("neg.toml:"), "{msg}");
    }

    #[test]
    fn unit_mismatch_is_reported() {
        let text = datasets::find("main_belt")
            .unwrap()
            .text
            .replace("\"2.7 AU\"", "\"2.7 M_sun\"");
        let msg = ScenarioFile::parse(&text, "u.toml").unwrap_err().to_string();
        assert!(
            msg.contains("params.orbit_radius") && msg.contains("is a mass"),
            "{msg}"
        );
    }

    #[test]
    fn schema_version_and_bodies_are_checked() {
        let text = datasets::find("main_belt")
            .unwrap()
            .text
            .replace("schema_version = 1", "schema_version = 2");
        assert!(ScenarioFile::parse(&text, "v.toml")
            .unwrap_err()
            .to_string()
            .contains("schema_version"));
        let text = format!(
            "{}\n[[bodies]]\ngamma = 1.0\norbit_radius = 1.0\nbody_radius = 0.1\n",
            datasets::find("main_belt").unwrap().text
        );
        assert!(ScenarioFile::parse(&text, "b.toml").is_err());
    }

    #[test]
    fn echo_round_trips_exactly() {
        for d in datasets::DATASETS {
            let s = ScenarioFile::parse(d.text, d.name).unwrap();
            let again = ScenarioFile::parse(&s.echo(), d.name).unwrap();
            assert_eq!(again.scenario, s.scenario, "{}", d.name);
            assert_eq!(again.units, Units::SI);
        }
    }

    #[test]
    fn custom_systems_need_couplings_or_masses() {
        let text = r#"
schema_version = 1
kind = "custom-system"
[params]
star_mass = "1 M_sun"
[[bodies]]
gamma = 50.0
orbit_radius = "1 AU"
body_radius = "6371 km"
mass = "1 M_earth"
[[bodies]]
gamma = 50.0
orbit_radius = "1.5 AU"
body_radius = "3389 km"
"#;
        let err = ScenarioFile::parse(text, "c.toml").unwrap_err().to_string();
        assert!(err.contains("needs a mass"), "{err}");
        let ok = text.replace(
            "body_radius = \"3389 km\"",
            "body_radius = \"3389 km\"\nmass = \"0.107 M_earth\"",
        );
        let s = ScenarioFile::parse(&ok, "c.toml").unwrap();
        let m = s.scenario.model().unwrap();
        assert_eq!(m.n(), 2);
        assert!(m.strength(0, 1) > 0.0);
    }

    #[test]
    fn planet_chains_sample_the_truncated_measure() {
        let s = open_scenario("galilean_satellites").unwrap();
        let m = s.scenario.model().unwrap();
        let FreeMeasure::Truncated { upper } = m.free_measure() else {
            panic!("expected the truncated measure")
        };
        assert_eq!(upper[3], 2.0);
        assert!(upper[0] > upper[1] && upper[1] > upper[2]);
        assert!(matches!(
            open_scenario("two_body_test")
                .unwrap()
                .scenario
                .model()
                .unwrap()
                .free_measure(),
            FreeMeasure::Gaussian
        ));
    }
}
