//! Ground-truth machinery: exhaustive optimal-schema search for tiny
//! instances, exhaustive bin packing, and instance generators realizing
//! the hardness reductions from the partition problem.
//!
//! The searches are branch-and-bound over the first uncovered pair, with
//! reducer-count pruning from the pair-count bound. They are exact but
//! exponential; keep instances at desk scale (around eight inputs).

use crate::error::{Error, Result};
use crate::schema::{InputId, InputItem, Instance, MappingSchema, ProblemKind};

/// A proven-optimal schema for an instance.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub reducer_count: usize,
    pub communication_cost: u64,
    pub witness: MappingSchema,
}

/// Search outcome. `exhausted` is set when no feasible schema exists
/// within the reducer budget (including capacity-impossible pairs).
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best: Option<OracleSolution>,
    pub exhausted: bool,
}

/// Exact minimum for the A2A problem: fewest reducers first, then lowest
/// communication cost, searched up to `max_reducers`. Deterministic
/// witness (fixed branch order).
pub fn brute_force_a2a(instance: &Instance, max_reducers: usize) -> Result<OracleResult> {
    if instance.kind() != ProblemKind::A2A {
        return Err(Error::KindMismatch {
            expected: "a2a",
            actual: instance.kind().as_str(),
        });
    }
    Ok(Search::new(instance)?.run(max_reducers, false))
}

/// As [`brute_force_a2a`] for X2Y cross-pair coverage.
pub fn brute_force_x2y(instance: &Instance, max_reducers: usize) -> Result<OracleResult> {
    if instance.kind() != ProblemKind::X2Y {
        return Err(Error::KindMismatch {
            expected: "x2y",
            actual: instance.kind().as_str(),
        });
    }
    Ok(Search::new(instance)?.run(max_reducers, false))
}

/// Decision form: some feasible schema within `budget` reducers, if any.
/// Stops at the first solution instead of proving optimality.
pub fn feasible_within(instance: &Instance, budget: usize) -> Result<Option<MappingSchema>> {
    Ok(Search::new(instance)?
        .run(budget, true)
        .best
        .map(|s| s.witness))
}

struct Search {
    ids: Vec<InputId>,
    sizes: Vec<u64>,
    capacity: u64,
    required: Vec<u64>,
    uncovered: usize,
    cover: Vec<u32>,
    reducers: Vec<(u64, u64)>,
    max_per_reducer: usize,
    best: Option<(usize, u64, Vec<u64>)>,
    first_only: bool,
    budget: usize,
}

impl Search {
    fn new(instance: &Instance) -> Result<Self> {
        let n = instance.len();
        if n > 60 {
            return Err(Error::Domain(format!(
                "exhaustive search supports up to 60 inputs, got {n}"
            )));
        }
        let ids: Vec<InputId> = instance.all_inputs().map(|i| i.id.clone()).collect();
        let sizes: Vec<u64> = instance.all_inputs().map(|i| i.size).collect();
        let x_len = instance.inputs().len();

        let mut required = vec![0u64; n];
        let mut uncovered = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let needed = match instance.kind() {
                    ProblemKind::A2A => true,
                    ProblemKind::X2Y => (i < x_len) != (j < x_len),
                };
                if needed {
                    required[i] |= 1 << j;
                    required[j] |= 1 << i;
                    uncovered += 1;
                }
            }
        }

        // Largest number of inputs that can ever share a reducer.
        let mut sorted = sizes.clone();
        sorted.sort_unstable();
        let mut acc = 0u64;
        let mut max_per = 0;
        for s in sorted {
            if acc + s > instance.capacity() {
                break;
            }
            acc += s;
            max_per += 1;
        }

        Ok(Search {
            ids,
            sizes,
            capacity: instance.capacity(),
            required,
            uncovered,
            cover: vec![0; n * n],
            reducers: Vec::new(),
            max_per_reducer: max_per,
            best: None,
            first_only: false,
            budget: 0,
        })
    }

    fn run(mut self, max_reducers: usize, first_only: bool) -> OracleResult {
        // A required pair that cannot co-reside kills the instance outright.
        let n = self.ids.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.required[i] & (1 << j) != 0 && self.sizes[i] + self.sizes[j] > self.capacity
                {
                    return OracleResult {
                        best: None,
                        exhausted: true,
                    };
                }
            }
        }
        self.first_only = first_only;

        // Phase 1: iterative deepening on the reducer count.
        let start = self.count_floor().max(usize::from(self.uncovered > 0));
        let mut optimum = None;
        for target in start..=max_reducers.max(start) {
            if target > max_reducers {
                break;
            }
            self.budget = target;
            self.best = None;
            self.dfs(true);
            if let Some(best) = self.best.take() {
                optimum = Some(best);
                break;
            }
        }
        if self.uncovered == 0 {
            optimum = Some((0, 0, Vec::new()));
        }
        let Some((count, _, _)) = optimum else {
            return OracleResult {
                best: None,
                exhausted: true,
            };
        };

        // Phase 2: minimize cost among schemas with the optimal count.
        if !self.first_only {
            self.budget = count;
            self.best = optimum;
            self.dfs(false);
            optimum = self.best.take();
        }

        let (count, cost, masks) = optimum.expect("phase 2 keeps at least the phase 1 solution");
        let assignments: Vec<Vec<InputId>> = masks
            .iter()
            .map(|mask| {
                (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| self.ids[i].clone())
                    .collect()
            })
            .collect();
        let witness = MappingSchema::new(assignments).expect("masks hold each input once");
        OracleResult {
            best: Some(OracleSolution {
                reducer_count: count,
                communication_cost: cost,
                witness,
            }),
            exhausted: false,
        }
    }

    fn count_floor(&self) -> usize {
        if self.uncovered == 0 {
            return 0;
        }
        let per = self.max_per_reducer * self.max_per_reducer.saturating_sub(1) / 2;
        if per == 0 {
            return usize::MAX;
        }
        self.uncovered.div_ceil(per)
    }

    fn cost(&self) -> u64 {
        self.reducers
            .iter()
            .map(|&(mask, _)| {
                (0..self.ids.len())
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| self.sizes[i])
                    .sum::<u64>()
            })
            .sum()
    }

    fn first_uncovered(&self) -> Option<(usize, usize)> {
        let n = self.ids.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.required[i] & (1 << j) != 0 && self.cover[i * n + j] == 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn add(&mut self, reducer: usize, input: usize) {
        let n = self.ids.len();
        let (mask, load) = self.reducers[reducer];
        for other in 0..n {
            if mask & (1 << other) != 0 && self.required[input] & (1 << other) != 0 {
                let (a, b) = (input.min(other), input.max(other));
                if self.cover[a * n + b] == 0 {
                    self.uncovered -= 1;
                }
                self.cover[a * n + b] += 1;
            }
        }
        self.reducers[reducer] = (mask | 1 << input, load + self.sizes[input]);
    }

    fn remove(&mut self, reducer: usize, input: usize) {
        let n = self.ids.len();
        let (mask, load) = self.reducers[reducer];
        let mask = mask & !(1 << input);
        for other in 0..n {
            if mask & (1 << other) != 0 && self.required[input] & (1 << other) != 0 {
                let (a, b) = (input.min(other), input.max(other));
                self.cover[a * n + b] -= 1;
                if self.cover[a * n + b] == 0 {
                    self.uncovered += 1;
                }
            }
        }
        self.reducers[reducer] = (mask, load - self.sizes[input]);
    }

    /// DFS over the first uncovered pair. In phase 1 (`feasibility`) any
    /// schema within budget wins; in phase 2 only strictly cheaper ones.
    fn dfs(&mut self, feasibility: bool) {
        if feasibility && self.best.is_some() {
            return;
        }
        let floor = match self.count_floor() {
            usize::MAX => return,
            f => f.max(self.reducers.len()),
        };
        if floor > self.budget {
            return;
        }
        if !feasibility {
            if let Some((_, best_cost, _)) = &self.best {
                // Inputs with uncovered pairs must appear at least once more
                // if absent everywhere.
                let n = self.ids.len();
                let mut pending = 0u64;
                for i in 0..n {
                    let absent = self.reducers.iter().all(|&(m, _)| m & (1 << i) == 0);
                    let has_uncovered = (0..n).any(|j| {
                        i != j
                            && self.required[i] & (1 << j) != 0
                            && self.cover[i.min(j) * n + i.max(j)] == 0
                    });
                    if absent && has_uncovered {
                        pending += self.sizes[i];
                    }
                }
                if self.cost() + pending >= *best_cost {
                    return;
                }
            }
        }
        let Some((i, j)) = self.first_uncovered() else {
            let cost = self.cost();
            let count = self.reducers.len();
            let better = match &self.best {
                None => true,
                Some((bc, bcost, _)) => count < *bc || (count == *bc && cost < *bcost),
            };
            if better {
                self.best = Some((count, cost, self.reducers.iter().map(|&(m, _)| m).collect()));
            }
            return;
        };

        for r in 0..self.reducers.len() {
            let (mask, load) = self.reducers[r];
            let has_i = mask & (1 << i) != 0;
            let has_j = mask & (1 << j) != 0;
            let needed = match (has_i, has_j) {
                (true, true) => unreachable!("pair would be covered"),
                (true, false) => self.sizes[j],
                (false, true) => self.sizes[i],
                (false, false) => self.sizes[i] + self.sizes[j],
            };
            if load + needed > self.capacity {
                continue;
            }
            let added: Vec<usize> = [(has_i, i), (has_j, j)]
                .into_iter()
                .filter(|&(has, _)| !has)
                .map(|(_, x)| x)
                .collect();
            for &x in &added {
                self.add(r, x);
            }
            self.dfs(feasibility);
            for &x in added.iter().rev() {
                self.remove(r, x);
            }
            if feasibility && self.best.is_some() {
                return;
            }
        }

        if self.reducers.len() < self.budget && self.sizes[i] + self.sizes[j] <= self.capacity {
            self.reducers.push((0, 0));
            let r = self.reducers.len() - 1;
            self.add(r, i);
            self.add(r, j);
            self.dfs(feasibility);
            self.remove(r, j);
            self.remove(r, i);
            self.reducers.pop();
        }
    }
}

/// Exact minimum number of bins for the given sizes, by exhaustive search
/// with symmetry breaking. Panics on an item larger than the capacity.
pub fn optimal_bin_count(sizes: &[u64], capacity: u64) -> usize {
    assert!(
        sizes.iter().all(|&s| s <= capacity),
        "item exceeds bin capacity"
    );
    let mut sorted: Vec<u64> = sizes.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let total: u64 = sorted.iter().sum();
    let floor = total.div_ceil(capacity.max(1)) as usize;
    let mut best = sorted.len();

    fn place(
        sizes: &[u64],
        next: usize,
        bins: &mut Vec<u64>,
        cap: u64,
        floor: usize,
        best: &mut usize,
    ) {
        if bins.len().max(floor) >= *best {
            return;
        }
        if next == sizes.len() {
            *best = bins.len();
            return;
        }
        let size = sizes[next];
        for b in 0..bins.len() {
            if bins[b] + size <= cap {
                bins[b] += size;
                place(sizes, next + 1, bins, cap, floor, best);
                bins[b] -= size;
            }
        }
        bins.push(size);
        place(sizes, next + 1, bins, cap, floor, best);
        bins.pop();
    }

    if sorted.is_empty() {
        return 0;
    }
    place(&sorted, 0, &mut Vec::new(), capacity, floor, &mut best);
    best
}

/// A partition-problem instance: positive integers to split into two
/// equal-sum halves.
#[derive(Debug, Clone)]
pub struct PartitionInstance {
    numbers: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(numbers: Vec<u64>) -> Result<Self> {
        if numbers.contains(&0) {
            return Err(Error::Domain("partition numbers must be positive".into()));
        }
        Ok(PartitionInstance { numbers })
    }

    pub fn numbers(&self) -> &[u64] {
        &self.numbers
    }

    pub fn total(&self) -> u64 {
        self.numbers.iter().sum()
    }
}

/// Does some subset sum to exactly half the total? Direct subset-sum
/// dynamic program, independent of the reductions it checks.
pub fn has_equal_bipartition(numbers: &[u64]) -> bool {
    let total: u64 = numbers.iter().sum();
    if !total.is_multiple_of(2) {
        return false;
    }
    let target = (total / 2) as usize;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for &n in numbers {
        let n = n as usize;
        if n > target {
            continue;
        }
        for s in (n..=target).rev() {
            if reachable[s - n] {
                reachable[s] = true;
            }
        }
    }
    reachable[target]
}

/// A reduction output: the instance, the intended reducer budget, and
/// whether the source partition instance is trivially "no" (odd total).
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub instance: Instance,
    pub reducer_budget: usize,
    pub trivially_no: bool,
}

/// Reduce a partition instance to A2A feasibility within `z >= 3`
/// reducers: the originals, `z-3` medium inputs of size `s/2`, one big
/// input of size `(z-2)s/2`, capacity `(z-1)s/2`. An odd total is scaled
/// by two (answer unchanged) and flagged trivially "no".
pub fn partition_to_a2a(p: &PartitionInstance, z: usize) -> Result<ReductionInstance> {
    if z < 3 {
        return Err(Error::Domain(format!(
            "A2A reduction needs z >= 3 reducers, got {z}"
        )));
    }
    let s = p.total();
    let scale = if s.is_multiple_of(2) { 1 } else { 2 };
    let s = s * scale;
    let mut items: Vec<InputItem> = p
        .numbers()
        .iter()
        .enumerate()
        .map(|(i, &w)| InputItem::new(format!("n{}", i + 1), w * scale))
        .collect();
    for i in 0..z - 3 {
        items.push(InputItem::new(format!("mid{}", i + 1), s / 2));
    }
    items.push(InputItem::new("big", (z as u64 - 2) * s / 2));
    let capacity = (z as u64 - 1) * s / 2;
    Ok(ReductionInstance {
        instance: Instance::a2a(capacity, items)?,
        reducer_budget: z,
        trivially_no: scale == 2,
    })
}

/// Reduce a partition instance to X2Y feasibility within `z >= 2`
/// reducers: X holds the originals plus `z-2` big inputs of size `s/2`,
/// Y holds one unit-size input, capacity `1 + s/2` (scaled by two when
/// the total is odd).
pub fn partition_to_x2y(p: &PartitionInstance, z: usize) -> Result<ReductionInstance> {
    if z < 2 {
        return Err(Error::Domain(format!(
            "X2Y reduction needs z >= 2 reducers, got {z}"
        )));
    }
    let s = p.total();
    let scale = if s.is_multiple_of(2) { 1 } else { 2 };
    let s = s * scale;
    let mut xs: Vec<InputItem> = p
        .numbers()
        .iter()
        .enumerate()
        .map(|(i, &w)| InputItem::new(format!("n{}", i + 1), w * scale))
        .collect();
    for i in 0..z - 2 {
        xs.push(InputItem::new(format!("big{}", i + 1), s / 2));
    }
    let ys = vec![InputItem::new("small", scale)];
    let capacity = scale + s / 2;
    Ok(ReductionInstance {
        instance: Instance::x2y(capacity, xs, ys)?,
        reducer_budget: z,
        trivially_no: scale == 2,
    })
}
