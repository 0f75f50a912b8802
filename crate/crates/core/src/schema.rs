//! Domain types for mapping-schema problems, plus validation and cost
//! accounting.
//!
//! An [`Instance`] states the problem: a reducer capacity `q`, a problem
//! kind (A2A or X2Y), and the inputs with their sizes. A [`MappingSchema`]
//! is a candidate solution: a list of reducers, each holding a set of input
//! ids. Validation checks both constraints of a mapping schema — no reducer
//! load may exceed `q`, and every required pair of inputs must share at
//! least one reducer.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;

use crate::bounds;
use crate::error::{Error, Result};

/// Opaque identifier for an input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InputId(String);

impl InputId {
    pub fn new(id: impl Into<String>) -> Self {
        InputId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for InputId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for InputId {
    fn from(s: &str) -> Self {
        InputId(s.to_owned())
    }
}

impl From<String> for InputId {
    fn from(s: String) -> Self {
        InputId(s)
    }
}

/// An input with a non-negative integer size, in abstract size units.
///
/// Sizes are exact integers; callers working with fractional sizes scale
/// the capacity so that every size is integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputItem {
    pub id: InputId,
    pub size: u64,
}

impl InputItem {
    pub fn new(id: impl Into<InputId>, size: u64) -> Self {
        InputItem {
            id: id.into(),
            size,
        }
    }
}

/// Which pairs of inputs are required to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Every unordered pair of inputs must share a reducer.
    A2A,
    /// Every cross pair (one input from X, one from Y) must share a reducer.
    X2Y,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::A2A => "a2a",
            ProblemKind::X2Y => "x2y",
        }
    }
}

/// A problem statement: capacity, kind, and the input list(s).
///
/// Construction enforces id uniqueness and `size <= capacity` per input.
/// An instance where some required pair cannot co-reside in any reducer is
/// still representable; [`Instance::is_pairable`] reports it.
#[derive(Debug, Clone)]
pub struct Instance {
    capacity: u64,
    kind: ProblemKind,
    inputs: Vec<InputItem>,
    y_inputs: Vec<InputItem>,
    by_id: HashMap<InputId, (usize, u64)>,
}

impl Instance {
    /// Build an A2A instance.
    pub fn a2a(capacity: u64, inputs: Vec<InputItem>) -> Result<Self> {
        Self::build(capacity, ProblemKind::A2A, inputs, Vec::new())
    }

    /// Build an X2Y instance from the two disjoint lists.
    pub fn x2y(capacity: u64, x_inputs: Vec<InputItem>, y_inputs: Vec<InputItem>) -> Result<Self> {
        Self::build(capacity, ProblemKind::X2Y, x_inputs, y_inputs)
    }

    /// An A2A instance of `m` unit-size inputs with ids `"1"..="m"`.
    pub fn unit_a2a(m: usize, capacity: u64) -> Result<Self> {
        let items = (1..=m).map(|i| InputItem::new(i.to_string(), 1)).collect();
        Self::a2a(capacity, items)
    }

    fn build(
        capacity: u64,
        kind: ProblemKind,
        inputs: Vec<InputItem>,
        y_inputs: Vec<InputItem>,
    ) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(inputs.len() + y_inputs.len());
        for (pos, item) in inputs.iter().chain(y_inputs.iter()).enumerate() {
            if item.size > capacity {
                return Err(Error::ItemExceedsCapacity {
                    id: item.id.as_str().to_owned(),
                    size: item.size,
                    capacity,
                });
            }
            if by_id.insert(item.id.clone(), (pos, item.size)).is_some() {
                return Err(Error::DuplicateId(item.id.as_str().to_owned()));
            }
        }
        Ok(Instance {
            capacity,
            kind,
            inputs,
            y_inputs,
            by_id,
        })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// The input list (the X list for X2Y instances).
    pub fn inputs(&self) -> &[InputItem] {
        &self.inputs
    }

    /// The Y list; empty unless the kind is X2Y.
    pub fn y_inputs(&self) -> &[InputItem] {
        &self.y_inputs
    }

    /// All inputs across both lists, in declaration order.
    pub fn all_inputs(&self) -> impl Iterator<Item = &InputItem> {
        self.inputs.iter().chain(self.y_inputs.iter())
    }

    pub fn len(&self) -> usize {
        self.inputs.len() + self.y_inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of all input sizes (`s`).
    pub fn total_size(&self) -> u64 {
        self.all_inputs().map(|i| i.size).sum()
    }

    pub fn sum_x(&self) -> u64 {
        self.inputs.iter().map(|i| i.size).sum()
    }

    pub fn sum_y(&self) -> u64 {
        self.y_inputs.iter().map(|i| i.size).sum()
    }

    pub fn size_of(&self, id: &InputId) -> Option<u64> {
        self.by_id.get(id).map(|&(_, size)| size)
    }

    /// True when every input has size exactly one.
    pub fn is_unit(&self) -> bool {
        self.all_inputs().all(|i| i.size == 1)
    }

    /// True when every required pair fits some reducer: for A2A the two
    /// largest inputs must fit together, for X2Y the largest of each list.
    pub fn is_pairable(&self) -> bool {
        match self.kind {
            ProblemKind::A2A => {
                let mut sizes: Vec<u64> = self.inputs.iter().map(|i| i.size).collect();
                sizes.sort_unstable_by(|a, b| b.cmp(a));
                match (sizes.first(), sizes.get(1)) {
                    (Some(&a), Some(&b)) => a + b <= self.capacity,
                    _ => true,
                }
            }
            ProblemKind::X2Y => {
                let max_x = self.inputs.iter().map(|i| i.size).max();
                let max_y = self.y_inputs.iter().map(|i| i.size).max();
                match (max_x, max_y) {
                    (Some(a), Some(b)) => a + b <= self.capacity,
                    _ => true,
                }
            }
        }
    }
}

/// One reducer of a schema: an id and the set of assigned input ids.
///
/// The load is derived from the owning instance via [`Reducer::load`], so
/// it can never go stale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reducer {
    id: usize,
    assigned: BTreeSet<InputId>,
}

impl Reducer {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn assigned(&self) -> &BTreeSet<InputId> {
        &self.assigned
    }

    pub fn contains(&self, id: &InputId) -> bool {
        self.assigned.contains(id)
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }

    /// Sum of the assigned input sizes per the given instance.
    pub fn load(&self, instance: &Instance) -> Result<u64> {
        let mut total = 0;
        for id in &self.assigned {
            total += instance
                .size_of(id)
                .ok_or_else(|| Error::UnknownInput(id.as_str().to_owned()))?;
        }
        Ok(total)
    }
}

/// A candidate solution: reducers, optionally partitioned into ordered
/// teams (a team is a group of reducers in which each input occurs at most
/// once; the constructions in `equal` produce them).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSchema {
    reducers: Vec<Reducer>,
    teams: Option<Vec<Vec<usize>>>,
}

impl MappingSchema {
    /// Build a schema from per-reducer id lists. Reducer ids are assigned
    /// sequentially from zero. Duplicate assignment of one input to the
    /// same reducer is rejected rather than deduplicated, since it signals
    /// a generator bug.
    pub fn new(assignments: Vec<Vec<InputId>>) -> Result<Self> {
        let mut reducers = Vec::with_capacity(assignments.len());
        for (id, ids) in assignments.into_iter().enumerate() {
            let mut assigned = BTreeSet::new();
            for input in ids {
                if !assigned.insert(input.clone()) {
                    return Err(Error::DuplicateAssignment {
                        reducer: id,
                        id: input.as_str().to_owned(),
                    });
                }
            }
            reducers.push(Reducer { id, assigned });
        }
        Ok(MappingSchema {
            reducers,
            teams: None,
        })
    }

    /// Attach a team partition. The teams must cover every reducer id
    /// exactly once.
    pub fn with_teams(mut self, teams: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for team in &teams {
            for &r in team {
                if r >= self.reducers.len() || !seen.insert(r) {
                    return Err(Error::Domain(format!(
                        "teams must partition reducer ids exactly; bad id {r}"
                    )));
                }
            }
        }
        if seen.len() != self.reducers.len() {
            return Err(Error::Domain(format!(
                "teams cover {} of {} reducers",
                seen.len(),
                self.reducers.len()
            )));
        }
        self.teams = Some(teams);
        Ok(self)
    }

    pub fn reducers(&self) -> &[Reducer] {
        &self.reducers
    }

    pub fn teams(&self) -> Option<&[Vec<usize>]> {
        self.teams.as_deref()
    }

    pub fn reducer_count(&self) -> usize {
        self.reducers.len()
    }

    /// Ids assigned to the reducer with the given id.
    pub fn reducer(&self, id: usize) -> Option<&Reducer> {
        self.reducers.get(id)
    }
}

/// Outcome of validating a schema against an instance. The schema is
/// feasible exactly when both defect lists are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Required pairs that share no reducer, in instance input order.
    pub uncovered_pairs: Vec<(InputId, InputId)>,
    /// Reducers whose load exceeds the capacity, as (reducer id, load).
    pub capacity_violations: Vec<(usize, u64)>,
}

impl ValidationReport {
    pub fn feasible(&self) -> bool {
        self.uncovered_pairs.is_empty() && self.capacity_violations.is_empty()
    }
}

/// Communication cost, replication, and bound comparison for a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    /// Sum of reducer loads; equivalently, sum over inputs of
    /// `size * replication`.
    pub communication_cost: u64,
    pub reducer_count: usize,
    /// Number of reducers holding each input (zero entries included).
    pub replication: BTreeMap<InputId, usize>,
    pub lower_bound_cost: u128,
    pub lower_bound_reducers: u128,
    /// `communication_cost / lower_bound_cost`; `None` when the bound is 0.
    pub cost_ratio: Option<Ratio<u128>>,
}

/// Per-input membership bitsets over reducers, shared by the validators.
struct Membership {
    words: Vec<u64>,
    stride: usize,
    loads: Vec<u64>,
}

fn index_schema(schema: &MappingSchema, instance: &Instance) -> Result<Membership> {
    let n = instance.len();
    let stride = schema.reducer_count().div_ceil(64).max(1);
    let mut words = vec![0u64; n * stride];
    let mut loads = vec![0u64; schema.reducer_count()];
    for reducer in schema.reducers() {
        for id in reducer.assigned() {
            let &(pos, size) = instance
                .by_id
                .get(id)
                .ok_or_else(|| Error::UnknownInput(id.as_str().to_owned()))?;
            words[pos * stride + reducer.id() / 64] |= 1 << (reducer.id() % 64);
            loads[reducer.id()] += size;
        }
    }
    Ok(Membership {
        words,
        stride,
        loads,
    })
}

impl Membership {
    fn meet(&self, a: usize, b: usize) -> bool {
        let (wa, wb) = (
            &self.words[a * self.stride..],
            &self.words[b * self.stride..],
        );
        (0..self.stride).any(|w| wa[w] & wb[w] != 0)
    }
}

/// Check an A2A schema: every unordered pair of inputs must meet in at
/// least one reducer and every reducer load must stay within capacity.
///
/// The report lists exactly the failing pairs and the overloaded reducers.
/// A schema naming an id absent from the instance is malformed and errors.
pub fn validate_a2a(schema: &MappingSchema, instance: &Instance) -> Result<ValidationReport> {
    if instance.kind() != ProblemKind::A2A {
        return Err(Error::KindMismatch {
            expected: "a2a",
            actual: instance.kind().as_str(),
        });
    }
    let membership = index_schema(schema, instance)?;
    let mut uncovered = Vec::new();
    let items = instance.inputs();
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            if !membership.meet(i, j) {
                uncovered.push((items[i].id.clone(), items[j].id.clone()));
            }
        }
    }
    Ok(ValidationReport {
        uncovered_pairs: uncovered,
        capacity_violations: overloads(&membership.loads, instance.capacity()),
    })
}

/// Check an X2Y schema: every cross pair (x from X, y from Y) must meet.
/// Pairs within X or within Y are not required.
pub fn validate_x2y(schema: &MappingSchema, instance: &Instance) -> Result<ValidationReport> {
    if instance.kind() != ProblemKind::X2Y {
        return Err(Error::KindMismatch {
            expected: "x2y",
            actual: instance.kind().as_str(),
        });
    }
    let membership = index_schema(schema, instance)?;
    let x_len = instance.inputs().len();
    let mut uncovered = Vec::new();
    for (i, x) in instance.inputs().iter().enumerate() {
        for (j, y) in instance.y_inputs().iter().enumerate() {
            if !membership.meet(i, x_len + j) {
                uncovered.push((x.id.clone(), y.id.clone()));
            }
        }
    }
    Ok(ValidationReport {
        uncovered_pairs: uncovered,
        capacity_violations: overloads(&membership.loads, instance.capacity()),
    })
}

fn overloads(loads: &[u64], capacity: u64) -> Vec<(usize, u64)> {
    loads
        .iter()
        .enumerate()
        .filter(|&(_, &load)| load > capacity)
        .map(|(id, &load)| (id, load))
        .collect()
}

/// Validate a schema with the validator matching the instance kind.
pub fn validate(schema: &MappingSchema, instance: &Instance) -> Result<ValidationReport> {
    match instance.kind() {
        ProblemKind::A2A => validate_a2a(schema, instance),
        ProblemKind::X2Y => validate_x2y(schema, instance),
    }
}

/// Compute the cost report for a schema. Cost is well-defined even for
/// infeasible schemas; callers wanting feasibility run a validator first.
///
/// The lower bounds come from the bound matching the instance kind; for
/// A2A instances where every input is unit-sized the sharper equal-size
/// bound applies.
pub fn cost_report(schema: &MappingSchema, instance: &Instance) -> Result<CostReport> {
    let mut replication: BTreeMap<InputId, usize> =
        instance.all_inputs().map(|i| (i.id.clone(), 0)).collect();
    let mut cost: u64 = 0;
    for reducer in schema.reducers() {
        for id in reducer.assigned() {
            let size = instance
                .size_of(id)
                .ok_or_else(|| Error::UnknownInput(id.as_str().to_owned()))?;
            cost += size;
            *replication.get_mut(id).expect("id checked above") += 1;
        }
    }

    let pair = applicable_lower_bounds(instance)?;
    let cost_ratio = if pair.cost_bound > 0 {
        Some(Ratio::new(u128::from(cost), pair.cost_bound))
    } else {
        None
    };
    Ok(CostReport {
        communication_cost: cost,
        reducer_count: schema.reducer_count(),
        replication,
        lower_bound_cost: pair.cost_bound,
        lower_bound_reducers: pair.reducer_bound,
        cost_ratio,
    })
}

/// The lower bounds applicable to an instance: the general size-based A2A
/// bound, sharpened with the unit-input bound when all sizes are one, or
/// the X2Y bound for cross problems.
///
/// For unit inputs the two A2A bounds are combined componentwise: near
/// `m = q` the floor in the unit formula can dip below `s^2/q`, so neither
/// dominates the other everywhere.
pub fn applicable_lower_bounds(instance: &Instance) -> Result<bounds::BoundPair> {
    match instance.kind() {
        ProblemKind::A2A => {
            let general = bounds::lb_a2a(instance.total_size(), instance.capacity())?;
            if instance.is_unit() && instance.capacity() >= 2 && !instance.is_empty() {
                let unit = bounds::lb_a2a_unit(instance.len() as u64, instance.capacity())?;
                let (cost, raw_cost) = if unit.cost_bound >= general.cost_bound {
                    (unit.cost_bound, unit.raw_cost)
                } else {
                    (general.cost_bound, general.raw_cost)
                };
                let (reducers, raw_reducers) = if unit.reducer_bound >= general.reducer_bound {
                    (unit.reducer_bound, unit.raw_reducers)
                } else {
                    (general.reducer_bound, general.raw_reducers)
                };
                Ok(bounds::BoundPair {
                    cost_bound: cost,
                    reducer_bound: reducers,
                    raw_cost,
                    raw_reducers,
                })
            } else {
                Ok(general)
            }
        }
        ProblemKind::X2Y => bounds::lb_x2y(instance.sum_x(), instance.sum_y(), instance.capacity()),
    }
}
