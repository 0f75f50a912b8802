//! First-Fit Decreasing and Best-Fit Decreasing bin packing.
//!
//! Every approximation algorithm in this crate starts by packing inputs
//! into bins of some fraction of the reducer capacity and then treating
//! each bin as a single input. Tie-breaking is fixed (equal sizes order by
//! ascending id, "first"/"best" bin prefers the lowest id) so downstream
//! schemas are byte-for-byte reproducible.

use crate::error::{Error, Result};
use crate::schema::{InputId, InputItem};

/// A bin holding input ids whose sizes sum to `load <= capacity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub id: usize,
    pub capacity: u64,
    pub contents: Vec<InputId>,
    pub load: u64,
}

/// The result of packing: bins partition the input set.
///
/// FFD and BFD guarantee that at most one bin is less than half-full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub bins: Vec<Bin>,
    pub bin_capacity: u64,
}

impl Packing {
    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }
}

#[derive(Clone, Copy)]
enum Fit {
    First,
    Best,
}

/// Pack items with First-Fit Decreasing: sort by size descending (ties by
/// ascending id), place each item into the lowest-id bin that fits, open a
/// new bin otherwise.
pub fn ffd_pack(items: &[InputItem], bin_capacity: u64) -> Result<Packing> {
    pack(items, bin_capacity, Fit::First)
}

/// Pack items with Best-Fit Decreasing: like FFD but each item goes to the
/// feasible bin with maximal load (ties by lowest bin id).
pub fn bfd_pack(items: &[InputItem], bin_capacity: u64) -> Result<Packing> {
    pack(items, bin_capacity, Fit::Best)
}

fn pack(items: &[InputItem], bin_capacity: u64, fit: Fit) -> Result<Packing> {
    let mut order: Vec<&InputItem> = items.iter().collect();
    order.sort_by(|a, b| b.size.cmp(&a.size).then_with(|| a.id.cmp(&b.id)));

    let mut bins: Vec<Bin> = Vec::new();
    for item in order {
        if item.size > bin_capacity {
            return Err(Error::OversizedItem {
                id: item.id.as_str().to_owned(),
                size: item.size,
                capacity: bin_capacity,
            });
        }
        let target = match fit {
            Fit::First => bins.iter().position(|b| b.load + item.size <= bin_capacity),
            Fit::Best => bins
                .iter()
                .enumerate()
                .filter(|(_, b)| b.load + item.size <= bin_capacity)
                .max_by(|(ia, a), (ib, b)| a.load.cmp(&b.load).then(ib.cmp(ia)))
                .map(|(i, _)| i),
        };
        match target {
            Some(i) => {
                bins[i].contents.push(item.id.clone());
                bins[i].load += item.size;
            }
            None => bins.push(Bin {
                id: bins.len(),
                capacity: bin_capacity,
                contents: vec![item.id.clone()],
                load: item.size,
            }),
        }
    }
    Ok(Packing { bins, bin_capacity })
}
