//! Optimal mapping schemas for unit-size inputs.
//!
//! Four constructions, all organized around *teams* — groups of reducers
//! in which every input occurs at most once (exactly once in full teams):
//!
//! * `schema_q2`: capacity 2, the recursive kind-I/kind-II team table.
//! * `schema_q3`: capacity 3, splitting inputs into a team table over the
//!   first half plus one extra input per team, recursing on the rest.
//! * `au_schema`: prime capacity `q` with `m = q^2` inputs arranged in a
//!   square; reducer `r` of team `t < q` takes the cells with
//!   `(i + t*j) mod q = r`, and team `q` takes the columns.
//! * `au_plus_one_schema`: the `q^2+q+1` extension adding one input to
//!   each reducer plus one final reducer with all the new inputs.
//!
//! All of them produce canonical input ids `"1"..="m"` and cover every
//! pair exactly once (`schema_q3` covers at least once at padded sizes).

use crate::error::{Error, Result};
use crate::schema::{InputId, MappingSchema};

/// A schema with its team partition populated, plus the small-integer
/// capacity the construction targets.
#[derive(Debug, Clone)]
pub struct TeamedSchema {
    pub schema: MappingSchema,
    pub unit_capacity: u64,
}

/// Reducers-by-team at index level; dummy padding uses indices past the
/// real range and is stripped before emission.
pub(crate) type UnitTeam = Vec<Vec<usize>>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The recursive pair-team table for a power-of-two item count.
///
/// Kind-I teams pair the two halves with a rotation; kind-II teams merge
/// the j-th teams of the recursive solutions on each half. Every pair of
/// items lands in exactly one reducer and every team holds each item
/// exactly once.
pub(crate) fn pow2_pair_teams(items: &[usize]) -> Vec<UnitTeam> {
    let u = items.len();
    debug_assert!(u.is_power_of_two() && u >= 2);
    if u == 2 {
        return vec![vec![vec![items[0], items[1]]]];
    }
    let half = u / 2;
    let (g, h) = items.split_at(half);
    let mut teams: Vec<UnitTeam> = Vec::with_capacity(u - 1);
    for t in 0..half {
        teams.push((0..half).map(|i| vec![g[i], h[(i + t) % half]]).collect());
    }
    for (mut gj, hj) in pow2_pair_teams(g).into_iter().zip(pow2_pair_teams(h)) {
        gj.extend(hj);
        teams.push(gj);
    }
    teams
}

fn next_pow2(n: usize) -> usize {
    n.next_power_of_two().max(2)
}

/// Drop reducers that cannot cover a pair, then reducers whose content is
/// contained in an earlier or larger reducer. Empty teams disappear.
fn cleanup_teams(teams: Vec<UnitTeam>, dedupe: bool) -> Vec<UnitTeam> {
    let mut kept: Vec<UnitTeam> = Vec::with_capacity(teams.len());
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for team in teams {
        let mut out: UnitTeam = Vec::with_capacity(team.len());
        for mut reducer in team {
            reducer.sort_unstable();
            if reducer.len() < 2 {
                continue;
            }
            out.push(reducer);
        }
        if !out.is_empty() {
            if dedupe {
                out.retain(|r| {
                    let dominated = seen.iter().any(|s| r.iter().all(|x| s.contains(x)));
                    if !dominated {
                        seen.push(r.clone());
                    }
                    !dominated
                });
                if out.is_empty() {
                    continue;
                }
            }
            kept.push(out);
        }
    }
    // A reducer kept earlier may turn out to be a subset of a later, larger
    // one; one backward pass settles it.
    if dedupe {
        let all: Vec<Vec<usize>> = kept.iter().flatten().cloned().collect();
        for team in &mut kept {
            team.retain(|r| {
                !all.iter()
                    .any(|s| s.len() > r.len() && r.iter().all(|x| s.contains(x)))
            });
        }
        kept.retain(|t| !t.is_empty());
    }
    kept
}

/// Pair-cover `items` (unit sizes) at an odd capacity `cap >= 3`.
///
/// The first `y` items form groups of `floor(cap/2)`; group pairs fill a
/// team table; the i-th leftover item joins every reducer of team i; the
/// leftovers recurse. With `spill` set, leftover items may fill dummy
/// group slots when padding to a power of two, emptying the leftover set.
pub(crate) fn odd_unit_teams(items: &[usize], cap: usize, spill: bool) -> Vec<UnitTeam> {
    debug_assert!(cap % 2 == 1 && cap >= 3);
    let m = items.len();
    if m <= 1 {
        return Vec::new();
    }
    let gsize = cap / 2;
    let y = (gsize * (2 * m / (cap + 1) + 1)).min(m);
    let mut rest = &items[y..];

    let mut groups: Vec<Vec<usize>> = items[..y].chunks(gsize).map(<[usize]>::to_vec).collect();
    if groups.len() == 1 {
        debug_assert!(rest.is_empty());
        return vec![vec![groups.remove(0)]];
    }
    let padded = next_pow2(groups.len());
    if spill && !rest.is_empty() {
        let slots = padded - groups.len();
        if rest.len().div_ceil(gsize) <= slots {
            groups.extend(rest.chunks(gsize).map(<[usize]>::to_vec));
            rest = &[];
        }
    }
    groups.resize(padded, Vec::new());

    let mut teams: Vec<UnitTeam> = pow2_pair_teams(&(0..padded).collect::<Vec<_>>())
        .into_iter()
        .map(|team| {
            team.into_iter()
                .map(|pair| {
                    pair.into_iter()
                        .flat_map(|g| groups[g].iter().copied())
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();

    for (i, &extra) in rest.iter().enumerate() {
        for reducer in &mut teams[i] {
            if !reducer.is_empty() {
                reducer.push(extra);
            }
        }
    }

    let mut teams = cleanup_teams(teams, gsize > 1);
    if rest.len() >= 2 {
        teams.extend(odd_unit_teams(rest, cap, spill));
    }
    teams
}

/// Pair-cover `items` (unit sizes) at an even capacity `cap >= 2` by
/// grouping into `cap/2`-sized derived inputs and pairing the groups with
/// the power-of-two team table. `cap = 2` degenerates to the plain q=2
/// construction.
pub(crate) fn even_unit_teams(items: &[usize], cap: usize) -> Vec<UnitTeam> {
    debug_assert!(cap.is_multiple_of(2) && cap >= 2);
    let m = items.len();
    if m <= 1 {
        return Vec::new();
    }
    let gsize = cap / 2;
    let mut groups: Vec<Vec<usize>> = items.chunks(gsize).map(<[usize]>::to_vec).collect();
    if groups.len() == 1 {
        return vec![vec![groups.remove(0)]];
    }
    let padded = next_pow2(groups.len());
    groups.resize(padded, Vec::new());
    let teams: Vec<UnitTeam> = pow2_pair_teams(&(0..padded).collect::<Vec<_>>())
        .into_iter()
        .map(|team| {
            team.into_iter()
                .map(|pair| {
                    pair.into_iter()
                        .flat_map(|g| groups[g].iter().copied())
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    cleanup_teams(teams, gsize > 1)
}

/// The AU team table over cell indices `0..q^2` of a row-major `q x q`
/// square: teams `0..q-1` place cell `(i, j)` in reducer `(i + t*j) mod q`,
/// team `q` is the columns. Every pair of cells meets exactly once.
pub(crate) fn au_cell_teams(q: usize) -> Vec<UnitTeam> {
    let mut teams: Vec<UnitTeam> = Vec::with_capacity(q + 1);
    for t in 0..q {
        let mut team: UnitTeam = vec![Vec::with_capacity(q); q];
        for i in 0..q {
            for j in 0..q {
                team[(i + t * j) % q].push(i * q + j);
            }
        }
        teams.push(team);
    }
    teams.push(
        (0..q)
            .map(|j| (0..q).map(|i| i * q + j).collect())
            .collect(),
    );
    teams
}

/// Materialize index teams into a schema, mapping index `i` to `ids[i]`.
pub(crate) fn teams_to_schema_with(teams: &[UnitTeam], ids: &[InputId]) -> MappingSchema {
    let assignments: Vec<Vec<InputId>> = teams
        .iter()
        .flatten()
        .map(|r| r.iter().map(|&i| ids[i].clone()).collect())
        .collect();
    let mut team_ids = Vec::with_capacity(teams.len());
    let mut next = 0;
    for team in teams {
        team_ids.push((next..next + team.len()).collect());
        next += team.len();
    }
    MappingSchema::new(assignments)
        .expect("index teams are duplicate-free")
        .with_teams(team_ids)
        .expect("sequential team ids partition the reducers")
}

pub(crate) fn canonical_ids(m: usize) -> Vec<InputId> {
    (1..=m).map(|i| InputId::new(i.to_string())).collect()
}

/// Materialize index teams into a schema over canonical ids `"1"..="m"`.
pub(crate) fn teams_to_schema(teams: &[UnitTeam]) -> MappingSchema {
    let max = teams
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .map_or(0, |i| i + 1);
    teams_to_schema_with(teams, &canonical_ids(max))
}

/// The q=2 team table for any `m >= 2`: pad to a power of two and delete
/// every reducer touching a dummy (real pairs only ever share dummy-free
/// reducers).
pub(crate) fn q2_unit_teams(m: usize) -> Vec<UnitTeam> {
    let padded = next_pow2(m);
    let mut teams = pow2_pair_teams(&(0..padded).collect::<Vec<_>>());
    for team in &mut teams {
        team.retain(|pair| pair.iter().all(|&i| i < m));
    }
    teams.retain(|t| !t.is_empty());
    teams
}

/// Optimal capacity-2 schema: `m-1` teams of `m/2` reducers for a power
/// of two `m`.
pub fn schema_q2(m: usize) -> Result<TeamedSchema> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "q=2 construction needs m >= 2, got {m}"
        )));
    }
    Ok(TeamedSchema {
        schema: teams_to_schema(&q2_unit_teams(m)),
        unit_capacity: 2,
    })
}

/// Optimal capacity-3 schema via the recurrence r(m,3) = n(n-1)/2 + r(n-1,3)
/// with A holding the first ceil((m+1)/2) inputs.
pub fn schema_q3(m: usize) -> Result<TeamedSchema> {
    if m < 3 {
        return Err(Error::Domain(format!(
            "q=3 construction needs m >= 3, got {m}"
        )));
    }
    let teams = odd_unit_teams(&(0..m).collect::<Vec<_>>(), 3, false);
    Ok(TeamedSchema {
        schema: teams_to_schema(&teams),
        unit_capacity: 3,
    })
}

/// The AU method: prime `q`, `m = q^2` unit inputs, `q+1` teams of `q`
/// reducers, cost `q^2 (q+1)`, each pair covered exactly once.
pub fn au_schema(q: u64, m: usize) -> Result<TeamedSchema> {
    if !is_prime(q) {
        return Err(Error::Domain(format!(
            "AU method needs a prime capacity, got {q}"
        )));
    }
    let qu = q as usize;
    if m != qu * qu {
        return Err(Error::Domain(format!(
            "AU method needs m = q^2 = {}, got {m}",
            qu * qu
        )));
    }
    let teams = au_cell_teams(qu);
    Ok(TeamedSchema {
        schema: teams_to_schema(&teams),
        unit_capacity: q,
    })
}

pub(crate) fn au_plus_one_teams(p: usize) -> Vec<UnitTeam> {
    let mut teams = au_cell_teams(p);
    let base = p * p;
    for (i, team) in teams.iter_mut().enumerate() {
        for reducer in team.iter_mut() {
            reducer.push(base + i);
        }
    }
    teams.push(vec![(base..base + p + 1).collect()]);
    teams
}

/// The AU extension to `m = p^2 + p + 1` inputs at capacity `p + 1`: the
/// i-th of `p+1` new inputs joins every reducer of team i, and one final
/// reducer holds all the new inputs. Exactly `p^2 + p + 1` reducers.
pub fn au_plus_one_schema(p: u64) -> Result<TeamedSchema> {
    if !is_prime(p) {
        return Err(Error::Domain(format!(
            "AU extension needs a prime p, got {p}"
        )));
    }
    let teams = au_plus_one_teams(p as usize);
    Ok(TeamedSchema {
        schema: teams_to_schema(&teams),
        unit_capacity: p + 1,
    })
}

/// Group-level pair teams: `u = 2^i` items of size `group_size` arranged into
/// `2^i - 1` teams of `2^(i-1)` reducers, every pair exactly once. The
/// team table is identical to `schema_q2(u)` at group granularity.
pub fn teams_pow2(u: usize, group_size: u64) -> Result<TeamedSchema> {
    if !u.is_power_of_two() || u < 2 {
        return Err(Error::Domain(format!(
            "need a power of two >= 2 items, got {u}"
        )));
    }
    let teams = pow2_pair_teams(&(0..u).collect::<Vec<_>>());
    Ok(TeamedSchema {
        schema: teams_to_schema(&teams),
        unit_capacity: 2 * group_size,
    })
}
