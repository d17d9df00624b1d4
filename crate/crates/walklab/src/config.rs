//! Experiment configuration: a single JSON document naming the group, the
//! connection set, its pieces, and the command-specific knobs.
//!
//! Elements may be written as flat indices or, for product groups, as
//! coordinate tuples. Angles are strings: either an exact rational multiple
//! of pi like `"1/2 pi"`, or a decimal radian value, which is snapped to the
//! nearest rational multiple of pi.

use crate::cayley::ConnectionSet;
use crate::group::{ElementSet, FiniteGroup};
use crate::operators::Angle;
use crate::tessellation::ConnectionPartition;
use serde::Deserialize;
use std::sync::Arc;

/// Raw document shape, straight from JSON.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    pub connection: Vec<ElementSpec>,
    pub partition: Vec<Vec<ElementSpec>>,
    #[serde(default)]
    pub overlap_allowed: bool,
    /// Per-piece angles, for commands that take an explicit schedule.
    pub thetas: Option<Vec<String>>,
    /// The single base angle used by the discretization check.
    pub theta: Option<String>,
    pub time: Option<u64>,
    /// Indices of pieces to target for state transfer.
    pub targets: Option<Vec<usize>>,
    /// Largest step count for the discretization sweep.
    pub tmax: Option<u64>,
    /// Search bound for the period detector.
    pub max_period: Option<u64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    /// Cyclic factor orders of a direct product.
    AbelianProduct(Vec<usize>),
    /// Explicit multiplication table, row-major.
    Table(Vec<Vec<usize>>),
}

/// An element written either as a flat index or as coordinates into a
/// product group.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Index(usize),
    Coords(Vec<usize>),
}

/// Why a config could not be turned into domain values: the document itself
/// is bad, or it describes structures that fail mathematical validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolveError {
    Config(String),
    Validation(String),
}

impl std::fmt::Display for ResolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResolveError::Config(m) => write!(f, "config error: {m}"),
            ResolveError::Validation(m) => write!(f, "validation failed: {m}"),
        }
    }
}

/// Config with every reference resolved against the group, but domain
/// validation (connection set, partition) still pending so a validation run
/// can report each failed check individually.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub group: Arc<FiniteGroup>,
    pub connection_elems: ElementSet,
    pub pieces: Vec<ElementSet>,
    pub overlap_allowed: bool,
    pub thetas: Option<Vec<Angle>>,
    pub theta: Option<Angle>,
    pub time: Option<u64>,
    pub targets: Option<Vec<usize>>,
    pub tmax: Option<u64>,
    pub max_period: Option<u64>,
    pub tolerance: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ResolveError> {
        serde_json::from_str(text).map_err(|e| ResolveError::Config(e.to_string()))
    }

    /// Build the group and resolve every element reference and angle string.
    pub fn resolve(&self) -> Result<ResolvedExperiment, ResolveError> {
        let group = match &self.group {
            GroupSpec::AbelianProduct(orders) => FiniteGroup::abelian_product(orders),
            GroupSpec::Table(rows) => FiniteGroup::from_table(rows.clone()),
        }
        .map_err(|e| ResolveError::Validation(format!("group: {e}")))?;
        let group = Arc::new(group);

        let mut connection_elems = Vec::with_capacity(self.connection.len());
        for (i, spec) in self.connection.iter().enumerate() {
            connection_elems
                .push(resolve_element(&group, spec).map_err(|m| {
                    ResolveError::Config(format!("connection[{i}]: {m}"))
                })?);
        }
        let mut pieces = Vec::with_capacity(self.partition.len());
        for (pi, piece) in self.partition.iter().enumerate() {
            let mut elems = Vec::with_capacity(piece.len());
            for (ei, spec) in piece.iter().enumerate() {
                elems.push(resolve_element(&group, spec).map_err(|m| {
                    ResolveError::Config(format!("partition[{pi}][{ei}]: {m}"))
                })?);
            }
            pieces.push(ElementSet::new(elems));
        }

        let thetas = match &self.thetas {
            None => None,
            Some(strings) => {
                if strings.len() != pieces.len() {
                    return Err(ResolveError::Config(format!(
                        "thetas: expected {} angles for {} pieces, found {}",
                        pieces.len(),
                        pieces.len(),
                        strings.len()
                    )));
                }
                let mut angles = Vec::with_capacity(strings.len());
                for (i, s) in strings.iter().enumerate() {
                    angles.push(parse_angle(s).map_err(|m| {
                        ResolveError::Config(format!("thetas[{i}]: {m}"))
                    })?);
                }
                Some(angles)
            }
        };
        let theta = match &self.theta {
            None => None,
            Some(s) => Some(
                parse_angle(s).map_err(|m| ResolveError::Config(format!("theta: {m}")))?,
            ),
        };

        Ok(ResolvedExperiment {
            group,
            connection_elems: ElementSet::new(connection_elems),
            pieces,
            overlap_allowed: self.overlap_allowed,
            thetas,
            theta,
            time: self.time,
            targets: self.targets.clone(),
            tmax: self.tmax,
            max_period: self.max_period,
            tolerance: self.tolerance,
        })
    }
}

impl ResolvedExperiment {
    pub fn connection(&self) -> crate::error::Result<ConnectionSet> {
        ConnectionSet::new(self.group.clone(), self.connection_elems.clone())
    }

    pub fn partition(&self) -> crate::error::Result<ConnectionPartition> {
        Ok(ConnectionPartition::new(
            self.connection()?,
            self.pieces.clone(),
            self.overlap_allowed,
        )?)
    }
}

fn resolve_element(group: &FiniteGroup, spec: &ElementSpec) -> Result<usize, String> {
    match spec {
        ElementSpec::Index(i) => {
            if *i < group.order() {
                Ok(*i)
            } else {
                Err(format!(
                    "index {i} out of range for group of order {}",
                    group.order()
                ))
            }
        }
        ElementSpec::Coords(coords) => group.from_coords(coords).map_err(|_| {
            if group.cycle_orders().is_none() {
                "coordinates are only valid for product groups".to_string()
            } else {
                format!("coordinates {coords:?} do not name an element")
            }
        }),
    }
}

/// Parse `"p/q pi"`, `"p pi"`, `"pi"`, `"0"`, or a decimal radian value.
pub fn parse_angle(s: &str) -> Result<Angle, String> {
    let text = s.trim();
    if text.is_empty() {
        return Err("empty angle".into());
    }
    if let Some(body) = text.strip_suffix("pi") {
        let body = body.trim();
        let (num, den) = if body.is_empty() {
            (1, 1)
        } else if body == "-" {
            (-1, 1)
        } else if let Some((n, d)) = body.split_once('/') {
            let num = n
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("bad numerator {:?}", n.trim()))?;
            let den = d
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("bad denominator {:?}", d.trim()))?;
            (num, den)
        } else {
            let num = body
                .parse::<i64>()
                .map_err(|_| format!("bad pi multiple {body:?}"))?;
            (num, 1)
        };
        Angle::new(num, den).map_err(|e| e.to_string())
    } else {
        let radians: f64 = text
            .parse()
            .map_err(|_| format!("{text:?} is neither a pi multiple nor a decimal"))?;
        Angle::from_radians_approx(radians).map_err(|e| e.to_string())
    }
}
