//! Instance files: JSON with sorted keys and rationals as `p/q` strings.

use deliberation::dynamics::{CoalitionStructure, DeliberativeCoalition};
use deliberation::rational;
use deliberation::{Agent, BitPoint, DeliberationSpace, Point, SpaceKind};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub space: DeliberationSpace,
    pub structure: Option<CoalitionStructure>,
    /// Free-form object, kept verbatim.
    pub metadata: Map<String, Value>,
}

impl InstanceFile {
    pub fn new(space: DeliberationSpace) -> Self {
        InstanceFile {
            space,
            structure: None,
            metadata: Map::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        let agents: Vec<Value> = self
            .space
            .agents()
            .iter()
            .map(|a| {
                json!({
                    "coords": point_to_value(&a.position),
                    "weight": rational::format(&a.weight),
                })
            })
            .collect();
        let mut root = Map::new();
        root.insert("version".into(), json!(FORMAT_VERSION));
        root.insert("kind".into(), json!(self.space.kind().name()));
        root.insert("d".into(), json!(self.space.dim()));
        root.insert("agents".into(), Value::Array(agents));
        if let Some(s) = &self.structure {
            let cs: Vec<Value> = s
                .coalitions()
                .iter()
                .map(|c| {
                    json!({
                        "members": c.members,
                        "proposal": point_to_value(&c.proposal),
                    })
                })
                .collect();
            root.insert("structure".into(), Value::Array(cs));
        }
        if !self.metadata.is_empty() {
            root.insert("metadata".into(), Value::Object(self.metadata.clone()));
        }
        Value::Object(root)
    }

    /// Canonical text: pretty JSON, sorted keys, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn from_value(v: &Value) -> Result<Self, CliError> {
        let root = v.as_object().ok_or_else(|| bad("top level must be an object"))?;
        let version = root.get("version").and_then(Value::as_u64).ok_or_else(|| bad("missing version"))?;
        if version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let kind_name = root.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))?;
        let kind = SpaceKind::from_name(kind_name).ok_or_else(|| bad(format!("unknown kind {kind_name:?}")))?;
        let d = root.get("d").and_then(Value::as_u64).ok_or_else(|| bad("missing d"))? as usize;
        let agents = root
            .get("agents")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing agents"))?
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let coords = a.get("coords").ok_or_else(|| bad(format!("agent {i}: missing coords")))?;
                let weight = a
                    .get("weight")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad(format!("agent {i}: weight must be a \"p/q\" string")))?;
                Ok(Agent::new(point_from_value(kind, d, coords)?, rational::parse(weight)?))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let space = DeliberationSpace::new(kind, d, agents)?;
        let structure = match root.get("structure") {
            None => None,
            Some(s) => {
                let list = s.as_array().ok_or_else(|| bad("structure must be a list"))?;
                let coalitions = list
                    .iter()
                    .map(|c| {
                        let members = c
                            .get("members")
                            .and_then(Value::as_array)
                            .ok_or_else(|| bad("coalition without members"))?
                            .iter()
                            .map(|m| m.as_u64().map(|m| m as usize).ok_or_else(|| bad("member index")))
                            .collect::<Result<Vec<_>, _>>()?;
                        let proposal = c.get("proposal").ok_or_else(|| bad("coalition without proposal"))?;
                        Ok(DeliberativeCoalition::new(members, point_from_value(kind, d, proposal)?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Some(CoalitionStructure::new(&space, coalitions)?)
            }
        };
        let metadata = match root.get("metadata") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(bad("metadata must be an object")),
        };
        Ok(InstanceFile {
            space,
            structure,
            metadata,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(&v)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_canonical_string()).map_err(|e| CliError::io(path, e))
    }

    /// The stored structure, or singletons.
    pub fn initial_structure(&self) -> CoalitionStructure {
        self.structure
            .clone()
            .unwrap_or_else(|| CoalitionStructure::singletons(&self.space))
    }

    pub fn family(&self) -> Option<&str> {
        self.metadata.get("family").and_then(Value::as_str)
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Format(msg.into())
}

/// Hypercube bits and grid coordinates as integers, Euclidean coordinates as strings.
pub fn point_to_value(p: &Point) -> Value {
    match p {
        Point::Hypercube(b) => Value::Array((0..b.len()).map(|i| json!(u8::from(b.get(i)))).collect()),
        Point::Euclidean(v) => Value::Array(v.iter().map(|c| json!(rational::format(c))).collect()),
        Point::Grid(x, y) => json!([x, y]),
    }
}

pub fn point_from_value(kind: SpaceKind, d: usize, v: &Value) -> Result<Point, CliError> {
    let items = v.as_array().ok_or_else(|| bad("coordinates must be a list"))?;
    if items.len() != d {
        return Err(bad(format!("expected {d} coordinates, found {}", items.len())));
    }
    match kind {
        SpaceKind::Hypercube => {
            let bits = items
                .iter()
                .map(|b| match b.as_u64() {
                    Some(0) => Ok(false),
                    Some(1) => Ok(true),
                    _ => Err(bad("hypercube coordinates must be 0 or 1")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Point::Hypercube(BitPoint::from_bits(&bits)))
        }
        SpaceKind::Euclidean => items
            .iter()
            .map(|c| match c {
                Value::String(s) => Ok(rational::parse(s)?),
                Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap())),
                _ => Err(bad("euclidean coordinates must be \"p/q\" strings")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Point::Euclidean),
        SpaceKind::Grid(_) => {
            let c = items
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| bad("grid coordinates must be integers")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Point::Grid(c[0], c[1]))
        }
    }
}
