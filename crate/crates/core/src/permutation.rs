//! Permutations of `[0, p^n)` induced by an oriented cycle partition.

use crate::chain::{partition, CyclePartition};
use crate::error::{Error, Result};
use crate::field::{Guard, IrreduciblePoly};
use crate::poly::ElementIndex;

/// How each cycle of the partition is traversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientation {
    /// Minimum element maps to its f1-inverse.
    Canonical,
    /// One flag per cycle in canonical order; `true` keeps the canonical
    /// direction, `false` reverses it.
    PerCycle(Vec<bool>),
}

impl Orientation {
    /// Parses `canonical` or a bit string such as `0110`.
    pub fn parse(s: &str) -> Option<Orientation> {
        if s.eq_ignore_ascii_case("canonical") {
            return Some(Orientation::Canonical);
        }
        s.chars()
            .map(|c| match c {
                '1' => Some(true),
                '0' => Some(false),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Orientation::PerCycle)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    pub p: u32,
    pub n: usize,
    mapping: Vec<u64>,
    cycles: Vec<Vec<u64>>,
}

impl Permutation {
    /// Wraps a mapping, checking that it is a bijection on `[0, len)`.
    pub fn from_mapping(p: u32, n: usize, mapping: Vec<u64>) -> Option<Self> {
        let len = mapping.len();
        let mut hit = vec![false; len];
        for &v in &mapping {
            let slot = hit.get_mut(v as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        let cycles = decompose(&mapping);
        Some(Permutation {
            p,
            n,
            mapping,
            cycles,
        })
    }

    pub fn mapping(&self) -> &[u64] {
        &self.mapping
    }

    pub fn apply(&self, i: ElementIndex) -> ElementIndex {
        ElementIndex(self.mapping[i.0 as usize])
    }

    /// Non-trivial cycles, each starting at its minimum, sorted by minimum.
    pub fn cycles(&self) -> &[Vec<u64>] {
        &self.cycles
    }

    pub fn fixed_points(&self) -> Vec<u64> {
        (0..self.mapping.len() as u64)
            .filter(|&i| self.mapping[i as usize] == i)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }
}

fn decompose(mapping: &[u64]) -> Vec<Vec<u64>> {
    let mut seen = vec![false; mapping.len()];
    let mut cycles = Vec::new();
    for start in 0..mapping.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cycle.push(cur as u64);
            cur = mapping[cur] as usize;
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    cycles
}

pub fn build_permutation(
    f1: &IrreduciblePoly,
    f2: &IrreduciblePoly,
    orientation: &Orientation,
    guard: Guard,
) -> Result<Permutation> {
    let part = partition(f1, f2, guard)?;
    permutation_from_partition(&part, orientation)
}

pub fn permutation_from_partition(
    part: &CyclePartition,
    orientation: &Orientation,
) -> Result<Permutation> {
    let f1 = &part.pair.0;
    let p = f1.prime();
    let q = f1.field_size(Guard(u64::MAX))? as usize;
    if let Orientation::PerCycle(flags) = orientation {
        if flags.len() != part.cycles.len() {
            return Err(Error::OrientationLength {
                expected: part.cycles.len(),
                found: flags.len(),
            });
        }
    }
    let mut mapping: Vec<u64> = (0..q as u64).collect();
    for c in 1..p.get() {
        mapping[c as usize] = p.inv_residue(c).expect("nonzero residue") as u64;
    }
    for (i, cycle) in part.cycles.iter().enumerate() {
        let forward = match orientation {
            Orientation::Canonical => true,
            Orientation::PerCycle(flags) => flags[i],
        };
        let k = cycle.elements.len();
        for (j, from) in cycle.elements.iter().enumerate() {
            let to = if forward {
                cycle.elements[(j + 1) % k]
            } else {
                cycle.elements[(j + k - 1) % k]
            };
            mapping[from.0 as usize] = to.0;
        }
    }
    Ok(Permutation::from_mapping(p.get(), f1.degree(), mapping)
        .expect("cycle partition induces a bijection"))
}
