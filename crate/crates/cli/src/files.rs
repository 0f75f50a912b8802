//! On-disk formats: JSON instance and schema files with stable key order
//! so identical invocations produce byte-identical output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use msk_core::{cost_report, CostReport, InputId, InputItem, Instance, MappingSchema};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ItemFile {
    pub id: String,
    pub size: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub capacity: u64,
    pub problem: String,
    pub inputs: Vec<ItemFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_inputs: Option<Vec<ItemFile>>,
    /// Reducer budget attached by the reduction generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reducer_budget: Option<usize>,
    /// Set by the reduction generators when the source partition instance
    /// has an odd total (the answer is trivially "no").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivially_no: Option<bool>,
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, String> {
        let items = |v: &[ItemFile]| -> Vec<InputItem> {
            v.iter()
                .map(|i| InputItem::new(i.id.clone(), i.size))
                .collect()
        };
        match self.problem.as_str() {
            "a2a" => {
                if self.y_inputs.as_ref().is_some_and(|y| !y.is_empty()) {
                    return Err("a2a instances must not carry y_inputs".into());
                }
                Instance::a2a(self.capacity, items(&self.inputs)).map_err(|e| e.to_string())
            }
            "x2y" => Instance::x2y(
                self.capacity,
                items(&self.inputs),
                items(self.y_inputs.as_deref().unwrap_or_default()),
            )
            .map_err(|e| e.to_string()),
            other => Err(format!(
                "unknown problem kind `{other}` (expected a2a or x2y)"
            )),
        }
    }

    pub fn from_instance(instance: &Instance) -> Self {
        let items = |v: &[InputItem]| -> Vec<ItemFile> {
            v.iter()
                .map(|i| ItemFile {
                    id: i.id.as_str().to_owned(),
                    size: i.size,
                })
                .collect()
        };
        let y = match instance.kind() {
            msk_core::ProblemKind::A2A => None,
            msk_core::ProblemKind::X2Y => Some(items(instance.y_inputs())),
        };
        InstanceFile {
            capacity: instance.capacity(),
            problem: instance.kind().as_str().to_owned(),
            inputs: items(instance.inputs()),
            y_inputs: y,
            reducer_budget: None,
            trivially_no: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReducerFile {
    pub id: usize,
    pub inputs: Vec<String>,
    pub load: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StatsFile {
    pub communication_cost: u64,
    pub reducer_count: usize,
    pub replication: BTreeMap<String, usize>,
    pub lower_bound_cost: u128,
    pub lower_bound_reducers: u128,
    /// Exact rational `cost/lower_bound_cost`, or null for a zero bound.
    pub cost_ratio: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SchemaFile {
    pub reducers: Vec<ReducerFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub teams: Option<Vec<Vec<usize>>>,
    pub stats: StatsFile,
}

impl SchemaFile {
    pub fn from_schema(
        schema: &MappingSchema,
        instance: &Instance,
        report: &CostReport,
    ) -> Result<Self, String> {
        let mut reducers = Vec::with_capacity(schema.reducer_count());
        for r in schema.reducers() {
            reducers.push(ReducerFile {
                id: r.id(),
                inputs: r.assigned().iter().map(|i| i.as_str().to_owned()).collect(),
                load: r.load(instance).map_err(|e| e.to_string())?,
            });
        }
        Ok(SchemaFile {
            reducers,
            teams: schema.teams().map(<[Vec<usize>]>::to_vec),
            stats: StatsFile {
                communication_cost: report.communication_cost,
                reducer_count: report.reducer_count,
                replication: report
                    .replication
                    .iter()
                    .map(|(id, &r)| (id.as_str().to_owned(), r))
                    .collect(),
                lower_bound_cost: report.lower_bound_cost,
                lower_bound_reducers: report.lower_bound_reducers,
                cost_ratio: report
                    .cost_ratio
                    .map(|r| format!("{}/{}", r.numer(), r.denom())),
            },
        })
    }

    /// Rebuild the schema, checking reducer ids are sequential and every
    /// declared load matches the instance (a stale load means the file
    /// was edited inconsistently).
    pub fn to_schema(&self, instance: &Instance) -> Result<MappingSchema, String> {
        for (pos, r) in self.reducers.iter().enumerate() {
            if r.id != pos {
                return Err(format!(
                    "reducer ids must be sequential; found {} at position {pos}",
                    r.id
                ));
            }
        }
        let assignments: Vec<Vec<InputId>> = self
            .reducers
            .iter()
            .map(|r| r.inputs.iter().map(|s| InputId::new(s.clone())).collect())
            .collect();
        let mut schema = MappingSchema::new(assignments).map_err(|e| e.to_string())?;
        if let Some(teams) = &self.teams {
            schema = schema
                .with_teams(teams.clone())
                .map_err(|e| e.to_string())?;
        }
        for r in schema.reducers() {
            let load = r.load(instance).map_err(|e| e.to_string())?;
            if load != self.reducers[r.id()].load {
                return Err(format!(
                    "reducer {} declares load {} but the instance gives {}",
                    r.id(),
                    self.reducers[r.id()].load,
                    load
                ));
            }
        }
        Ok(schema)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| format!("cannot serialize {}: {e}", path.display()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Cost report helper shared by solve and validate output paths.
pub fn report_for(schema: &MappingSchema, instance: &Instance) -> Result<CostReport, String> {
    cost_report(schema, instance).map_err(|e| e.to_string())
}
