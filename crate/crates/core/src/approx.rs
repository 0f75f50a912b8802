//! Approximation algorithms for different-sized inputs: bin-pack-then-pair,
//! the team-table generalizations (Algorithms 1A/1B), the AU extensions
//! (Algorithms 2 and 3), the hybrid Algorithm 4, the big-input cases, and
//! the X2Y cross algorithm, plus the strategy auto-selector.
//!
//! The common shape: pack inputs into bins of some fraction of `q`, treat
//! each bin as a unit input at a small effective capacity, and delegate to
//! the team constructions in [`crate::equal`].

use std::fmt;

use crate::binpack::{ffd_pack, Packing};
use crate::equal::{
    self, au_cell_teams, even_unit_teams, is_prime, odd_unit_teams, q2_unit_teams, UnitTeam,
};
use crate::error::{Error, Result};
use crate::schema::{InputId, InputItem, Instance, MappingSchema, ProblemKind};

/// A dispatchable strategy with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyChoice {
    /// Bins of `q/2`, one reducer per bin pair.
    BinPackPairs,
    /// Bins of `q/k` for odd `k > 3`, grouped team table with leftovers.
    Alg1A { k: u64 },
    /// Bins of `q/k` for even `k >= 4`, grouped team table.
    Alg1B { k: u64 },
    /// AU square on `p^2` inputs plus `l = q - p` extra slots per reducer.
    Alg2 { p: u64, l: u64 },
    /// The assignment-tree extension for `m = q^l` unit inputs.
    Alg3 { q: u64, l: u32 },
    /// Big/medium/small hybrid around the `q/3` threshold.
    Alg4,
    /// Exactly one input above `q/2`.
    BigInput,
    /// Cross-pair bin product.
    X2Y,
    /// The AU method itself (unit inputs, `m = q^2`, prime `q`).
    Au,
    /// The optimal q=2 team construction (unit inputs).
    SchemaQ2,
    /// The optimal q=3 team construction (unit inputs).
    SchemaQ3,
}

impl fmt::Display for StrategyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyChoice::BinPackPairs => write!(f, "binpack"),
            StrategyChoice::Alg1A { k } => write!(f, "alg1a(k={k})"),
            StrategyChoice::Alg1B { k } => write!(f, "alg1b(k={k})"),
            StrategyChoice::Alg2 { p, l } => write!(f, "alg2(p={p},l={l})"),
            StrategyChoice::Alg3 { q, l } => write!(f, "alg3(q={q},l={l})"),
            StrategyChoice::Alg4 => write!(f, "alg4"),
            StrategyChoice::BigInput => write!(f, "big"),
            StrategyChoice::X2Y => write!(f, "x2y"),
            StrategyChoice::Au => write!(f, "au"),
            StrategyChoice::SchemaQ2 => write!(f, "q2"),
            StrategyChoice::SchemaQ3 => write!(f, "q3"),
        }
    }
}

/// The prime split `q = p + l` used by Algorithm 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeDecomposition {
    pub p: u64,
    pub l: u64,
}

fn require_a2a(instance: &Instance) -> Result<()> {
    if instance.kind() != ProblemKind::A2A {
        return Err(Error::KindMismatch {
            expected: "a2a",
            actual: instance.kind().as_str(),
        });
    }
    Ok(())
}

/// Expand unit teams over bins into teams of reducers over input ids.
fn bin_teams_to_schema(teams: &[UnitTeam], packing: &Packing) -> MappingSchema {
    let assignments: Vec<Vec<InputId>> = teams
        .iter()
        .flatten()
        .map(|r| {
            r.iter()
                .flat_map(|&b| packing.bins[b].contents.iter().cloned())
                .collect()
        })
        .collect();
    let mut team_ids = Vec::with_capacity(teams.len());
    let mut next = 0;
    for team in teams {
        team_ids.push((next..next + team.len()).collect::<Vec<_>>());
        next += team.len();
    }
    MappingSchema::new(assignments)
        .expect("bins are disjoint")
        .with_teams(team_ids)
        .expect("sequential team ids partition the reducers")
}

/// Pack into bins of `q/2` and emit one reducer per unordered bin pair
/// (a single reducer when everything fits one bin).
pub fn binpack_pairs_schema(instance: &Instance) -> Result<MappingSchema> {
    require_a2a(instance)?;
    let q = instance.capacity();
    if let Some(item) = instance.inputs().iter().find(|i| i.size * 2 > q) {
        return Err(Error::WrongStrategy {
            reason: format!("input `{}` exceeds q/2", item.id),
            suggested: "big".into(),
        });
    }
    let packing = ffd_pack(instance.inputs(), q / 2)?;
    Ok(pair_all_bins(&packing))
}

fn pair_all_bins(packing: &Packing) -> MappingSchema {
    let x = packing.bin_count();
    let mut reducers: Vec<Vec<InputId>> = Vec::new();
    match x {
        0 => {}
        1 => reducers.push(packing.bins[0].contents.clone()),
        _ => {
            for i in 0..x {
                for j in (i + 1)..x {
                    let mut ids = packing.bins[i].contents.clone();
                    ids.extend(packing.bins[j].contents.iter().cloned());
                    reducers.push(ids);
                }
            }
        }
    }
    MappingSchema::new(reducers).expect("bins are disjoint")
}

fn check_alg1_inputs(instance: &Instance, k: u64) -> Result<()> {
    require_a2a(instance)?;
    let q = instance.capacity();
    if k == 0 || !q.is_multiple_of(k) {
        return Err(Error::Domain(format!(
            "k={k} must divide the capacity q={q}"
        )));
    }
    if let Some(item) = instance.inputs().iter().find(|i| i.size * k > q) {
        return Err(Error::WrongStrategy {
            reason: format!("input `{}` exceeds q/k = {}", item.id, q / k),
            suggested: "binpack".into(),
        });
    }
    Ok(())
}

/// Algorithm 1A: odd `k > 3`, all sizes at most `q/k`. Bins of `q/k`
/// behave as unit inputs at capacity `k`; the odd team construction
/// covers them, leftovers riding one team each.
pub fn alg1a(instance: &Instance, k: u64) -> Result<MappingSchema> {
    if k.is_multiple_of(2) {
        return Err(Error::WrongStrategy {
            reason: format!("k={k} is even"),
            suggested: "alg1b".into(),
        });
    }
    if k <= 3 {
        return Err(Error::Domain(format!("alg1a needs odd k > 3, got {k}")));
    }
    check_alg1_inputs(instance, k)?;
    let packing = ffd_pack(instance.inputs(), instance.capacity() / k)?;
    Ok(alg1_schema(&packing, k as usize, true))
}

/// Algorithm 1B: even `k >= 4`, all sizes at most `q/k`. Bins of `q/k`
/// are grouped into `k/2`-bin derived inputs paired by the q=2 table.
pub fn alg1b(instance: &Instance, k: u64) -> Result<MappingSchema> {
    if k % 2 == 1 {
        return Err(Error::WrongStrategy {
            reason: format!("k={k} is odd"),
            suggested: "alg1a".into(),
        });
    }
    if k < 4 {
        return Err(Error::Domain(format!("alg1b needs even k >= 4, got {k}")));
    }
    check_alg1_inputs(instance, k)?;
    let packing = ffd_pack(instance.inputs(), instance.capacity() / k)?;
    Ok(alg1_schema(&packing, k as usize, false))
}

fn alg1_schema(packing: &Packing, k: usize, odd: bool) -> MappingSchema {
    let bins = packing.bin_count();
    if bins <= 1 {
        let reducers = packing
            .bins
            .first()
            .map(|b| vec![b.contents.clone()])
            .unwrap_or_default();
        return MappingSchema::new(reducers).expect("bins are disjoint");
    }
    let items: Vec<usize> = (0..bins).collect();
    let teams = if odd {
        odd_unit_teams(&items, k, true)
    } else {
        even_unit_teams(&items, k)
    };
    bin_teams_to_schema(&teams, packing)
}

/// The largest prime `p <= q` with `p^2 + (q-p)(p+1) <= m`, paired with
/// `l = q - p`.
pub fn nearest_prime_decomposition(q: u64, m: usize) -> Result<PrimeDecomposition> {
    for p in (2..=q).rev() {
        if !is_prime(p) {
            continue;
        }
        let l = q - p;
        if p * p + l * (p + 1) <= m as u64 {
            return Ok(PrimeDecomposition { p, l });
        }
    }
    Err(Error::NoDecomposition { q, m })
}

/// Algorithm 2: the AU square on the first `p^2` unit inputs, the
/// remaining inputs appended in `l`-sized chunks to the `p+1` teams, and
/// the leftover set completed by the capacity-`q` team construction.
pub fn alg2(instance: &Instance, decomposition: PrimeDecomposition) -> Result<MappingSchema> {
    require_a2a(instance)?;
    if !instance.is_unit() {
        return Err(Error::WrongStrategy {
            reason: "algorithm 2 needs unit-size inputs".into(),
            suggested: "binpack".into(),
        });
    }
    let PrimeDecomposition { p, l } = decomposition;
    let q = instance.capacity();
    if p + l != q || !is_prime(p) {
        return Err(Error::Domain(format!(
            "decomposition p={p}, l={l} does not fit q={q}"
        )));
    }
    let m = instance.len();
    let pu = p as usize;
    let square = pu * pu;
    let extra = m.saturating_sub(square);
    if extra > 0 && (l == 0 || extra as u64 > (p + 1) * l) {
        return Err(Error::WrongStrategy {
            reason: format!(
                "{extra} leftover inputs exceed the (p+1)*l = {} spare slots",
                (p + 1) * l
            ),
            suggested: "alg3".into(),
        });
    }

    // AU teams over the square, stripped to real inputs when m < p^2.
    let mut teams: Vec<UnitTeam> = au_cell_teams(pu)
        .into_iter()
        .map(|team| {
            team.into_iter()
                .map(|r| r.into_iter().filter(|&c| c < m).collect::<Vec<_>>())
                .collect()
        })
        .collect();

    // Chunk i of the leftovers rides every reducer of team i.
    let lu = l as usize;
    if extra > 0 {
        let chunks: Vec<Vec<usize>> = (square..m)
            .collect::<Vec<_>>()
            .chunks(lu)
            .map(<[usize]>::to_vec)
            .collect();
        for (i, chunk) in chunks.iter().enumerate() {
            for reducer in &mut teams[i] {
                if !reducer.is_empty() {
                    reducer.extend(chunk.iter().copied());
                }
            }
        }
    }
    for team in &mut teams {
        team.retain(|r| r.len() >= 2);
    }
    teams.retain(|t| !t.is_empty());

    // Leftover pairs via the capacity-q table, by parity.
    if extra >= 2 {
        let b: Vec<usize> = (square..m).collect();
        let qu = q as usize;
        let completion = if q.is_multiple_of(2) {
            even_unit_teams(&b, qu)
        } else {
            odd_unit_teams(&b, qu, true)
        };
        teams.extend(completion);
    }
    Ok(equal::teams_to_schema_with(
        &teams,
        &instance
            .inputs()
            .iter()
            .map(|i| i.id.clone())
            .collect::<Vec<_>>(),
    ))
}

/// Algorithm 3 for `m = q^l` unit inputs, prime `q`, `l > 2`: the square
/// of `q^(l-2)`-sized cells is repeatedly expanded by the AU rule until
/// the cells are single inputs, where each team is emitted `q` times.
/// Canonical ids `"1"..="m"`; exactly `q (q(q+1))^(l-1)` reducers of load
/// `q`, cost `q^2 (q(q+1))^(l-1)`.
pub fn alg3(q: u64, l: u32) -> Result<MappingSchema> {
    let teams = alg3_teams(q, l)?;
    Ok(equal::teams_to_schema(&teams))
}

fn alg3_root(q: u64, l: u32) -> Result<Vec<Vec<usize>>> {
    if !is_prime(q) {
        return Err(Error::Domain(format!(
            "algorithm 3 needs a prime capacity, got {q}"
        )));
    }
    if l <= 2 {
        return Err(Error::Domain(format!(
            "algorithm 3 needs l > 2 (l = 2 is the plain AU method), got {l}"
        )));
    }
    let m = (q as u128)
        .checked_pow(l)
        .filter(|&m| m <= 1 << 20)
        .ok_or_else(|| Error::Domain(format!("q^l = {q}^{l} is too large for schema generation")))?
        as usize;
    let qu = q as usize;
    let cell = m / (qu * qu);
    Ok((0..qu * qu)
        .map(|c| (c * cell..(c + 1) * cell).collect())
        .collect())
}

fn alg3_teams(q: u64, l: u32) -> Result<Vec<UnitTeam>> {
    let root = alg3_root(q, l)?;
    let mut out = Vec::new();
    expand_au(&root, q as usize, &mut out, &mut None);
    Ok(out)
}

/// The input-column groupings of the deepest matrix level: for each node
/// whose cells are whole input columns, the q column indices it pairs.
/// Every unordered pair of input columns appears in at least one node.
pub fn alg3_column_matrices(q: u64, l: u32) -> Result<Vec<Vec<usize>>> {
    let root = alg3_root(q, l)?;
    let mut teams = Vec::new();
    let mut collector = Some(Vec::new());
    expand_au(&root, q as usize, &mut teams, &mut collector);
    Ok(collector.unwrap())
}

fn expand_au(
    cells: &[Vec<usize>],
    q: usize,
    out: &mut Vec<UnitTeam>,
    columns: &mut Option<Vec<Vec<usize>>>,
) {
    let csize = cells[0].len();
    let teams = au_cell_teams(q);
    if csize == 1 {
        let flat: Vec<UnitTeam> = teams
            .iter()
            .map(|team| {
                team.iter()
                    .map(|r| r.iter().map(|&c| cells[c][0]).collect::<Vec<_>>())
                    .collect()
            })
            .collect();
        for _ in 0..q {
            out.extend(flat.iter().cloned());
        }
        return;
    }
    for team in &teams {
        for bin in team {
            if csize == q {
                if let Some(cols) = columns.as_mut() {
                    cols.push(bin.iter().map(|&c| cells[c][0] / q).collect());
                }
            }
            let sub = csize / q;
            let mut child = vec![Vec::with_capacity(sub); q * q];
            for (j, &c) in bin.iter().enumerate() {
                for i in 0..q {
                    child[i * q + j] = cells[c][i * sub..(i + 1) * sub].to_vec();
                }
            }
            expand_au(&child, q, out, columns);
        }
    }
}

/// Algorithm 4, the hybrid: inputs in `(q/3, q/2]` pack into big `q/2`
/// bins, the rest pack twice (medium `q/2` bins and small `q/3` bins);
/// big-big pairs and big-medium products get one reducer each, and the
/// small bins are covered by the best applicable unit construction at
/// effective capacity 3.
pub fn alg4_hybrid(instance: &Instance) -> Result<MappingSchema> {
    require_a2a(instance)?;
    let q = instance.capacity();
    if let Some(item) = instance.inputs().iter().find(|i| i.size * 2 > q) {
        return Err(Error::WrongStrategy {
            reason: format!("input `{}` exceeds q/2", item.id),
            suggested: "big".into(),
        });
    }
    let (large, small): (Vec<InputItem>, Vec<InputItem>) = instance
        .inputs()
        .iter()
        .cloned()
        .partition(|i| i.size * 3 > q);

    let big_bins = ffd_pack(&large, q / 2)?;
    let medium_bins = ffd_pack(&small, q / 2)?;
    let small_bins = ffd_pack(&small, q / 3)?;

    let mut reducers: Vec<Vec<InputId>> = Vec::new();
    let x = big_bins.bin_count();
    match x {
        0 => {}
        1 => {
            // A lone big bin still ships its inputs (and their internal
            // pairs) unless the big-medium products below already do.
            if medium_bins.bin_count() == 0 {
                reducers.push(big_bins.bins[0].contents.clone());
            }
        }
        _ => {
            for i in 0..x {
                for j in (i + 1)..x {
                    let mut ids = big_bins.bins[i].contents.clone();
                    ids.extend(big_bins.bins[j].contents.iter().cloned());
                    reducers.push(ids);
                }
            }
        }
    }
    for big in &big_bins.bins {
        for medium in &medium_bins.bins {
            let mut ids = big.contents.clone();
            ids.extend(medium.contents.iter().cloned());
            reducers.push(ids);
        }
    }
    for team in unit_cover_capacity3(small_bins.bin_count()) {
        for reducer in team {
            reducers.push(
                reducer
                    .iter()
                    .flat_map(|&b| small_bins.bins[b].contents.iter().cloned())
                    .collect(),
            );
        }
    }
    reducers.retain(|r| !r.is_empty());
    MappingSchema::new(reducers)
}

/// Cover all pairs of `n` unit items that fit three per reducer: the AU
/// square when `n = p^2`, the assignment tree when `n = p^l`, otherwise
/// the q=3 team recursion.
fn unit_cover_capacity3(n: usize) -> Vec<UnitTeam> {
    if n <= 1 {
        if n == 1 {
            return vec![vec![vec![0]]];
        }
        return Vec::new();
    }
    if n == 2 {
        return vec![vec![vec![0, 1]]];
    }
    if let Some(p) = (2..=n).find(|&p| p * p == n) {
        if is_prime(p as u64) {
            return au_cell_teams(p);
        }
    }
    if let Some((p, l)) = prime_power(n) {
        if l > 2 && p >= 3 {
            if let Ok(teams) = alg3_teams(p as u64, l) {
                return teams;
            }
        }
    }
    odd_unit_teams(&(0..n).collect::<Vec<_>>(), 3, false)
}

fn prime_power(n: usize) -> Option<(usize, u32)> {
    for p in 2..=n {
        if !is_prime(p as u64) {
            continue;
        }
        let mut value = p;
        let mut exp = 1;
        while value < n {
            value *= p;
            exp += 1;
        }
        if value == n {
            return Some((p, exp));
        }
        if p * p > n {
            break;
        }
    }
    None
}

/// The single-big-input cases: pair the big input with bins of the
/// leftover space, then cover the small inputs among themselves with the
/// construction the big input's size class allows.
pub fn big_input_schema(instance: &Instance) -> Result<MappingSchema> {
    require_a2a(instance)?;
    let q = instance.capacity();
    let bigs: Vec<&InputItem> = instance
        .inputs()
        .iter()
        .filter(|i| i.size * 2 > q)
        .collect();
    match bigs.len() {
        0 => {
            return Err(Error::WrongStrategy {
                reason: "no input exceeds q/2".into(),
                suggested: "binpack".into(),
            })
        }
        1 => {}
        _ => {
            return Err(Error::Infeasible(format!(
                "inputs `{}` and `{}` both exceed q/2 and can never share a reducer",
                bigs[0].id, bigs[1].id
            )))
        }
    }
    let big = bigs[0].clone();
    let w = big.size;
    let smalls: Vec<InputItem> = instance
        .inputs()
        .iter()
        .filter(|i| i.id != big.id)
        .cloned()
        .collect();
    if let Some(item) = smalls.iter().find(|i| i.size > q - w) {
        return Err(Error::Infeasible(format!(
            "input `{}` cannot share a reducer with the big input `{}`",
            item.id, big.id
        )));
    }
    if smalls.is_empty() {
        return MappingSchema::new(vec![vec![big.id]]);
    }

    let mut reducers: Vec<Vec<InputId>> = Vec::new();
    let pair_with_big = |packing: &Packing, reducers: &mut Vec<Vec<InputId>>| {
        for bin in &packing.bins {
            let mut ids = vec![big.id.clone()];
            ids.extend(bin.contents.iter().cloned());
            reducers.push(ids);
        }
    };

    if w * 3 <= 2 * q && smalls.iter().all(|i| i.size * 3 <= q) {
        // q/2 < w <= 2q/3 with smalls at most q/3.
        let bins = ffd_pack(&smalls, q / 3)?;
        pair_with_big(&bins, &mut reducers);
        for team in unit_cover_capacity3(bins.bin_count()) {
            for reducer in team {
                let ids: Vec<InputId> = reducer
                    .iter()
                    .flat_map(|&b| bins.bins[b].contents.iter().cloned())
                    .collect();
                if ids.len() >= 2 {
                    reducers.push(ids);
                }
            }
        }
    } else if w * 4 <= 3 * q && smalls.iter().all(|i| i.size * 4 <= q) {
        // 2q/3 < w <= 3q/4 with smalls at most q/4.
        let bins = ffd_pack(&smalls, q / 4)?;
        pair_with_big(&bins, &mut reducers);
        let teams = if bins.bin_count() == 1 {
            vec![vec![vec![0]]]
        } else {
            even_unit_teams(&(0..bins.bin_count()).collect::<Vec<_>>(), 4)
        };
        for team in teams {
            for reducer in team {
                let ids: Vec<InputId> = reducer
                    .iter()
                    .flat_map(|&b| bins.bins[b].contents.iter().cloned())
                    .collect();
                if ids.len() >= 2 {
                    reducers.push(ids);
                }
            }
        }
    } else {
        // 3q/4 < w < q, or smalls too large for the finer binnings: one
        // reducer per (q-w)-bin with the big input, then pair q/2-bins.
        let bins = ffd_pack(&smalls, q - w)?;
        pair_with_big(&bins, &mut reducers);
        if smalls.len() >= 2 {
            let halves = ffd_pack(&smalls, q / 2)?;
            let paired = pair_all_bins(&halves);
            for r in paired.reducers() {
                reducers.push(r.assigned().iter().cloned().collect());
            }
        }
    }
    MappingSchema::new(reducers)
}

/// The X2Y bin-product schema: X packs into bins of `bx`, Y into bins of
/// `q - bx`, one reducer per bin pair. The X bin size is the largest of
/// the biggest X input and `q/2`, shrunk only if the biggest Y input
/// needs the room.
pub fn x2y_schema(instance: &Instance) -> Result<MappingSchema> {
    if instance.kind() != ProblemKind::X2Y {
        return Err(Error::KindMismatch {
            expected: "x2y",
            actual: instance.kind().as_str(),
        });
    }
    let q = instance.capacity();
    if instance.inputs().is_empty() || instance.y_inputs().is_empty() {
        return MappingSchema::new(Vec::new());
    }
    let max_x = instance.inputs().iter().map(|i| i.size).max().unwrap_or(0);
    let max_y = instance
        .y_inputs()
        .iter()
        .map(|i| i.size)
        .max()
        .unwrap_or(0);
    if max_x + max_y > q {
        return Err(Error::Infeasible(format!(
            "largest X input ({max_x}) plus largest Y input ({max_y}) exceeds q={q}"
        )));
    }
    let mut bx = max_x.max(q / 2);
    if max_y > q - bx {
        bx = q - max_y;
    }
    let x_bins = ffd_pack(instance.inputs(), bx)?;
    let y_bins = ffd_pack(instance.y_inputs(), q - bx)?;
    let mut reducers = Vec::with_capacity(x_bins.bin_count() * y_bins.bin_count());
    for xb in &x_bins.bins {
        for yb in &y_bins.bins {
            let mut ids = xb.contents.clone();
            ids.extend(yb.contents.iter().cloned());
            reducers.push(ids);
        }
    }
    MappingSchema::new(reducers)
}

/// Deterministic strategy dispatch over the constraint table: X2Y first,
/// then the big-input case, the optimal unit constructions, the `q/k`
/// divisor rule, and the hybrid/binpack split on the `q/3` threshold.
pub fn auto_select(instance: &Instance) -> Result<StrategyChoice> {
    if instance.kind() == ProblemKind::X2Y {
        if !instance.is_pairable() {
            return Err(Error::Infeasible(
                "an X input and a Y input exceed q together".into(),
            ));
        }
        return Ok(StrategyChoice::X2Y);
    }
    if !instance.is_pairable() {
        return Err(Error::Infeasible(
            "the two largest inputs exceed q together".into(),
        ));
    }
    let q = instance.capacity();
    let m = instance.len();
    if instance.inputs().iter().filter(|i| i.size * 2 > q).count() == 1 {
        return Ok(StrategyChoice::BigInput);
    }
    if instance.is_unit() && m >= 2 {
        if is_prime(q) && m == (q * q) as usize {
            return Ok(StrategyChoice::Au);
        }
        if is_prime(q) {
            if let Some((p, l)) = prime_power(m) {
                if p as u64 == q && l > 2 {
                    return Ok(StrategyChoice::Alg3 { q, l });
                }
            }
        }
        if q == 2 {
            return Ok(StrategyChoice::SchemaQ2);
        }
        if q == 3 {
            return Ok(StrategyChoice::SchemaQ3);
        }
    }
    let max_size = instance.inputs().iter().map(|i| i.size).max().unwrap_or(0);
    if max_size > 0 {
        let best_k = (4..=q)
            .rev()
            .find(|&k| q.is_multiple_of(k) && max_size * k <= q);
        if let Some(k) = best_k {
            return Ok(if k % 2 == 0 {
                StrategyChoice::Alg1B { k }
            } else {
                StrategyChoice::Alg1A { k }
            });
        }
    }
    let has_large = instance.inputs().iter().any(|i| i.size * 3 > q);
    let has_small = instance.inputs().iter().any(|i| i.size * 3 <= q);
    if has_large && has_small {
        return Ok(StrategyChoice::Alg4);
    }
    Ok(StrategyChoice::BinPackPairs)
}

/// Run the chosen strategy against the instance. The unit constructions
/// (au/q2/q3/alg3) are relabeled from canonical ids onto the instance's
/// inputs in declaration order.
pub fn apply(instance: &Instance, choice: StrategyChoice) -> Result<MappingSchema> {
    let relabel = |teams: &[UnitTeam]| -> MappingSchema {
        equal::teams_to_schema_with(
            teams,
            &instance
                .inputs()
                .iter()
                .map(|i| i.id.clone())
                .collect::<Vec<_>>(),
        )
    };
    let need_unit = |name: &str| -> Result<()> {
        require_a2a(instance)?;
        if !instance.is_unit() {
            return Err(Error::WrongStrategy {
                reason: format!("{name} needs unit-size inputs"),
                suggested: "binpack".into(),
            });
        }
        Ok(())
    };
    match choice {
        StrategyChoice::BinPackPairs => binpack_pairs_schema(instance),
        StrategyChoice::Alg1A { k } => alg1a(instance, k),
        StrategyChoice::Alg1B { k } => alg1b(instance, k),
        StrategyChoice::Alg2 { p, l } => alg2(instance, PrimeDecomposition { p, l }),
        StrategyChoice::Alg3 { q, l } => {
            need_unit("algorithm 3")?;
            if q != instance.capacity() {
                return Err(Error::Domain(format!(
                    "alg3 q={q} does not match the instance capacity {}",
                    instance.capacity()
                )));
            }
            let m = instance.len();
            let target = (q as u128).pow(l);
            if (m as u128) > target {
                return Err(Error::Domain(format!(
                    "instance has {m} inputs, more than q^l = {target}"
                )));
            }
            // Short instances pad with dummies, stripped on emission.
            let mut teams = alg3_teams(q, l)?;
            for team in &mut teams {
                for reducer in team.iter_mut() {
                    reducer.retain(|&i| i < m);
                }
                team.retain(|r| r.len() >= 2);
            }
            teams.retain(|t| !t.is_empty());
            Ok(relabel(&teams))
        }
        StrategyChoice::Alg4 => alg4_hybrid(instance),
        StrategyChoice::BigInput => big_input_schema(instance),
        StrategyChoice::X2Y => x2y_schema(instance),
        StrategyChoice::Au => {
            need_unit("the AU method")?;
            let q = instance.capacity();
            if !is_prime(q) || instance.len() != (q * q) as usize {
                return Err(Error::Domain(format!(
                    "AU method needs prime q and m = q^2; got q={q}, m={}",
                    instance.len()
                )));
            }
            Ok(relabel(&au_cell_teams(q as usize)))
        }
        StrategyChoice::SchemaQ2 => {
            need_unit("the q=2 construction")?;
            if instance.capacity() < 2 || instance.len() < 2 {
                return Err(Error::Domain(
                    "q=2 construction needs q >= 2 and m >= 2".into(),
                ));
            }
            Ok(relabel(&q2_unit_teams(instance.len())))
        }
        StrategyChoice::SchemaQ3 => {
            need_unit("the q=3 construction")?;
            if instance.capacity() < 3 || instance.len() < 3 {
                return Err(Error::Domain(
                    "q=3 construction needs q >= 3 and m >= 3".into(),
                ));
            }
            Ok(relabel(&odd_unit_teams(
                &(0..instance.len()).collect::<Vec<_>>(),
                3,
                false,
            )))
        }
    }
}

/// Auto-select and run in one step.
pub fn solve_auto(instance: &Instance) -> Result<(StrategyChoice, MappingSchema)> {
    let choice = auto_select(instance)?;
    let schema = apply(instance, choice)?;
    Ok((choice, schema))
}
