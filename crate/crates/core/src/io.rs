//! JSON forms of bodies and energies.
//!
//! Floats are written with 17 significant digits so that a round trip is
//! exact.

use std::io;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::body::Body;
use crate::energy::QuadGauge;
use crate::error::{check_dim, Error, Result};
use crate::grid::{DirectionGrid, GridSpec};

/// Version of every JSON document the CLI prints.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyJson {
    Polytope {
        dim: usize,
        vertices: Vec<Vec<f64>>,
    },
    Ball {
        dim: usize,
        radius: f64,
    },
    Support {
        dim: usize,
        grid: GridSpec,
        values: Vec<f64>,
    },
    LevelSet {
        dim: usize,
        level: f64,
        energy: EnergyJson,
    },
    Polar {
        dim: usize,
        body: Box<BodyJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnergyJson {
    SquaredGauge { weight: f64, body: Box<BodyJson> },
    Sum { terms: Vec<EnergyJson> },
    Conjugate { inner: Box<EnergyJson> },
    Tabulated { values: Vec<f64> },
}

impl BodyJson {
    pub fn from_body(b: &Body) -> BodyJson {
        let dim = b.dim();
        match b {
            Body::Polytope(p) => BodyJson::Polytope {
                dim,
                vertices: p.vertices().to_vec(),
            },
            Body::Ball { radius, .. } => BodyJson::Ball {
                dim,
                radius: *radius,
            },
            Body::SupportSampled(s) => BodyJson::Support {
                dim,
                grid: s.grid().spec(),
                values: s.values().to_vec(),
            },
            Body::LevelSet(l) => BodyJson::LevelSet {
                dim,
                level: l.level,
                energy: EnergyJson::from_energy(&l.energy),
            },
            Body::PolarOf(inner) => BodyJson::Polar {
                dim,
                body: Box::new(BodyJson::from_body(inner)),
            },
        }
    }

    pub fn to_body(&self) -> Result<Body> {
        let (dim, body) = match self {
            BodyJson::Polytope { dim, vertices } => (*dim, Body::polytope(vertices.clone())?),
            BodyJson::Ball { dim, radius } => (*dim, Body::ball(*dim, *radius)?),
            BodyJson::Support { dim, grid, values } => {
                let g = DirectionGrid::new(*dim, grid.n, grid.seed)?;
                (*dim, Body::support_sampled(Arc::new(g), values.clone())?)
            }
            BodyJson::LevelSet { dim, level, energy } => {
                (*dim, Body::level_set(energy.to_energy()?, *level)?)
            }
            BodyJson::Polar { dim, body } => (*dim, Body::PolarOf(Arc::new(body.to_body()?))),
        };
        check_dim(dim, body.dim())?;
        Ok(body)
    }
}

impl EnergyJson {
    pub fn from_energy(f: &QuadGauge) -> EnergyJson {
        match f {
            QuadGauge::SquaredGauge { body, weight } => EnergyJson::SquaredGauge {
                weight: *weight,
                body: Box::new(BodyJson::from_body(body)),
            },
            QuadGauge::Sum(terms) => EnergyJson::Sum {
                terms: terms.iter().map(EnergyJson::from_energy).collect(),
            },
            QuadGauge::ConjugateOf(inner) => EnergyJson::Conjugate {
                inner: Box::new(EnergyJson::from_energy(inner)),
            },
            QuadGauge::Tabulated(t) => EnergyJson::Tabulated {
                values: t.values().to_vec(),
            },
        }
    }

    pub fn to_energy(&self) -> Result<QuadGauge> {
        match self {
            EnergyJson::SquaredGauge { weight, body } => {
                QuadGauge::squared_gauge(body.to_body()?, *weight)
            }
            EnergyJson::Sum { terms } => QuadGauge::sum(
                terms
                    .iter()
                    .map(EnergyJson::to_energy)
                    .collect::<Result<Vec<_>>>()?,
            ),
            EnergyJson::Conjugate { inner } => Ok(QuadGauge::ConjugateOf(Arc::new(inner.to_energy()?))),
            EnergyJson::Tabulated { values } => QuadGauge::tabulated(values.clone()),
        }
    }
}

/// Formatter writing every `f64` as `d.dddddddddddddddde±x`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with 17 significant digits per float.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    String::from_utf8(buf).map_err(|e| Error::Domain(e.to_string()))
}

pub fn body_to_json(b: &Body) -> Result<String> {
    to_json_string(&BodyJson::from_body(b))
}

pub fn body_from_json(s: &str) -> Result<Body> {
    serde_json::from_str::<BodyJson>(s)?.to_body()
}

pub fn energy_to_json(f: &QuadGauge) -> Result<String> {
    to_json_string(&EnergyJson::from_energy(f))
}

pub fn energy_from_json(s: &str) -> Result<QuadGauge> {
    serde_json::from_str::<EnergyJson>(s)?.to_energy()
}
