//! Closed loops under a schedule of `beta` bases.
//!
//! The chaining state is the pair `(element, phase)` with `phase = i mod beta`.
//! Every step is an inverse map, hence a bijection on states, so the state
//! sequence from any start is purely periodic: the first repeated state is
//! the start itself. A closed loop is one full period starting at phase 0.

use std::borrow::Borrow;
use std::collections::BTreeMap;

use crate::chain::{BasisSchedule, InverseTable};
use crate::error::{Error, Result};
use crate::field::{inv, Guard};
use crate::poly::{ElementIndex, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedLoop {
    pub schedule: BasisSchedule,
    /// `a_0, ..., a_k` with `a_k = a_0`.
    pub elements: Vec<Poly>,
}

impl ClosedLoop {
    pub fn k(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn start(&self) -> &Poly {
        &self.elements[0]
    }

    /// How often each element occurs among `a_0, ..., a_{k-1}`.
    pub fn multiplicities(&self) -> BTreeMap<ElementIndex, usize> {
        let mut out = BTreeMap::new();
        for a in &self.elements[..self.k()] {
            *out.entry(a.index()).or_insert(0) += 1;
        }
        out
    }

    /// Step positions at which each element is visited, `a_k` included.
    pub fn visits(&self) -> BTreeMap<ElementIndex, Vec<usize>> {
        let mut out: BTreeMap<ElementIndex, Vec<usize>> = BTreeMap::new();
        for (i, a) in self.elements.iter().enumerate() {
            out.entry(a.index()).or_default().push(i);
        }
        out
    }
}

fn check_loop_inputs(a: &Poly, schedule: &BasisSchedule) -> Result<()> {
    if schedule.beta() < 2 {
        return Err(Error::ScheduleTooShort {
            needed: 2,
            found: schedule.beta(),
        });
    }
    schedule.require_distinct()?;
    if a.is_constant() {
        return Err(Error::Constant(a.to_string()));
    }
    if a.prime() != schedule.prime() {
        return Err(Error::CharacteristicMismatch {
            left: a.prime().get(),
            right: schedule.prime().get(),
        });
    }
    Ok(())
}

fn state_cap(schedule: &BasisSchedule) -> Result<u64> {
    let q = Guard(u64::MAX).field_size(schedule.prime(), schedule.degree())?;
    Ok(schedule.beta() as u64 * (q - schedule.prime().get() as u64))
}

/// Minimal closed loop through non-constant `a` at phase 0.
pub fn find_closed_loop(a: &Poly, schedule: &BasisSchedule) -> Result<ClosedLoop> {
    check_loop_inputs(a, schedule)?;
    let cap = state_cap(schedule)?;
    let beta = schedule.beta();
    let mut elements = vec![a.clone()];
    let mut i = 0usize;
    loop {
        i += 1;
        if i as u64 > cap {
            return Err(Error::IterationCap {
                cap,
                start: a.to_string(),
            });
        }
        let next = inv(&elements[i - 1], schedule.basis_for_step(i))?;
        let closed = i.is_multiple_of(beta) && &next == a;
        elements.push(next);
        if closed {
            return Ok(ClosedLoop {
                schedule: schedule.clone(),
                elements,
            });
        }
    }
}

/// Per-element membership: `(loop position in the census, multiplicity)`.
pub type Membership = Vec<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopCensus {
    pub loops: Vec<ClosedLoop>,
    pub report: BTreeMap<ElementIndex, Membership>,
}

impl LoopCensus {
    /// Total number of `(element, phase)` states covered by the loops.
    pub fn state_coverage(&self) -> usize {
        self.loops.iter().map(ClosedLoop::k).sum()
    }

    /// Loop length seen from every non-constant start element at phase 0.
    pub fn start_histogram(&self) -> BTreeMap<usize, usize> {
        let beta = self.loops.first().map_or(1, |l| l.schedule.beta());
        let mut hist = BTreeMap::new();
        for l in &self.loops {
            // a loop of length k holds k / beta distinct phase-0 states
            *hist.entry(l.k()).or_insert(0) += l.k() / beta;
        }
        hist
    }
}

/// Inverse tables for every basis of a schedule.
pub fn schedule_tables(schedule: &BasisSchedule, guard: Guard) -> Result<Vec<InverseTable>> {
    schedule
        .bases()
        .iter()
        .map(|f| InverseTable::new(f, guard))
        .collect()
}

/// Closed loops from every non-constant element at phase 0, keeping one
/// representative per rotation class of the state sequence. A loop whose
/// reverse traversal is also a walk of the schedule (always the case for two
/// bases) is identified with that reverse.
pub fn enumerate_closed_loops(schedule: &BasisSchedule, guard: Guard) -> Result<LoopCensus> {
    if schedule.beta() < 2 {
        return Err(Error::ScheduleTooShort {
            needed: 2,
            found: schedule.beta(),
        });
    }
    schedule.require_distinct()?;
    let tables = schedule_tables(schedule, guard)?;
    census_with_tables(schedule, &tables)
}

/// Phase offset `r` at which walking a loop backwards follows the schedule,
/// i.e. `bases[-j mod beta] == bases[(j - 1 + r) mod beta]` for every `j`.
fn reversal_offset(beta: usize) -> Option<usize> {
    (0..beta).find(|&r| (1..=beta).all(|j| (beta - j % beta) % beta == (j - 1 + r) % beta))
}

pub fn census_with_tables<T>(schedule: &BasisSchedule, tables: &[T]) -> Result<LoopCensus>
where
    T: std::borrow::Borrow<InverseTable>,
{
    let tables: Vec<&InverseTable> = tables.iter().map(Borrow::borrow).collect();
    let p = schedule.prime();
    let beta = tables.len();
    let q = tables[0].len() as u64;
    let cap = state_cap(schedule)?;
    let reverse = reversal_offset(beta);
    let mut seen = vec![false; beta * q as usize];
    let mut loops = Vec::new();
    let mut report: BTreeMap<ElementIndex, Membership> = BTreeMap::new();

    for start in p.get() as u64..q {
        if seen[start as usize] {
            continue;
        }
        let mut indices = vec![start];
        let mut cur = start;
        let mut phase = 0usize;
        loop {
            seen[phase * q as usize + cur as usize] = true;
            cur = tables[phase].get(cur);
            phase = (phase + 1) % beta;
            indices.push(cur);
            if phase == 0 && cur == start {
                break;
            }
            if indices.len() as u64 > cap {
                return Err(Error::IterationCap {
                    cap,
                    start: Poly::from_index(p, ElementIndex(start)).to_string(),
                });
            }
        }
        if let Some(r) = reverse {
            let k = indices.len() - 1;
            for j in 0..k {
                seen[((j + r) % beta) * q as usize + indices[k - j] as usize] = true;
            }
        }
        let closed = ClosedLoop {
            schedule: schedule.clone(),
            elements: indices
                .iter()
                .map(|&i| Poly::from_index(p, ElementIndex(i)))
                .collect(),
        };
        for (e, m) in closed.multiplicities() {
            report.entry(e).or_default().push((loops.len(), m));
        }
        loops.push(closed);
    }
    Ok(LoopCensus { loops, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{find_cycle, partition};
    use crate::field::IrreduciblePoly;
    use crate::Prime;

    fn p2(s: &str) -> Poly {
        Poly::parse(Prime::TWO, s).unwrap()
    }

    fn figure_two() -> BasisSchedule {
        let bases = ["x^4+x+1", "x^4+x^3+1", "x^4+x^3+x^2+x+1"]
            .iter()
            .map(|s| IrreduciblePoly::parse(Prime::TWO, s).unwrap())
            .collect();
        BasisSchedule::distinct(bases).unwrap()
    }

    #[test]
    fn three_basis_loop() {
        let l = find_closed_loop(&p2("x^2+x+1"), &figure_two()).unwrap();
        let idx: Vec<u64> = l.elements.iter().map(|a| a.index().0).collect();
        assert_eq!(
            idx,
            [7, 6, 4, 8, 15, 5, 6, 7, 14, 11, 5, 15, 2, 9, 13, 12, 10, 11, 14, 3, 8, 4, 13, 9, 7]
        );
        assert_eq!(l.k(), 24);
        // returns to the start at a phase other than 0 first
        assert_eq!(l.elements[7], l.elements[0]);
        assert_eq!(l.multiplicities().len(), 14);
        assert_eq!(l.multiplicities()[&ElementIndex(7)], 2);
    }

    #[test]
    fn loop_input_errors() {
        let s = figure_two();
        assert!(matches!(find_closed_loop(&p2("1"), &s), Err(Error::Constant(_))));
        let short = BasisSchedule::new(vec![s.bases()[0].clone()]).unwrap();
        assert!(matches!(
            find_closed_loop(&p2("x"), &short),
            Err(Error::ScheduleTooShort { .. })
        ));
        let repeated = BasisSchedule::new(vec![s.bases()[0].clone(), s.bases()[0].clone()]).unwrap();
        assert!(matches!(
            find_closed_loop(&p2("x"), &repeated),
            Err(Error::RepeatedBasis(_))
        ));
    }

    #[test]
    fn two_bases_reduce_to_cycles() {
        let s = figure_two();
        let pair = BasisSchedule::pair(&s.bases()[0], &s.bases()[1]).unwrap();
        let census = enumerate_closed_loops(&pair, Guard::DEFAULT).unwrap();
        let part = partition(&s.bases()[0], &s.bases()[1], Guard::DEFAULT).unwrap();
        assert_eq!(census.loops.len(), part.cycles.len());
        for (l, c) in census.loops.iter().zip(&part.cycles) {
            let idx: Vec<ElementIndex> = l.elements[..l.k()].iter().map(Poly::index).collect();
            assert_eq!(idx, c.elements);
        }
        assert!(census.report.values().all(|m| m.len() == 1 && m[0].1 == 1));
        for i in 2..16 {
            let a = Poly::from_index(Prime::TWO, ElementIndex(i));
            let k = find_closed_loop(&a, &pair).unwrap().k();
            assert_eq!(k, find_cycle(&a, &pair.bases()[0], &pair.bases()[1]).unwrap().len());
        }
    }

    #[test]
    fn census_covers_all_states() {
        let s = figure_two();
        let census = enumerate_closed_loops(&s, Guard::DEFAULT).unwrap();
        assert_eq!(census.state_coverage(), 3 * 14);
        assert_eq!(census.report.len(), 14);
        let through = census
            .loops
            .iter()
            .find(|l| l.elements.contains(&p2("x^2+x+1")))
            .unwrap();
        assert_eq!(through.k(), 24);
        let hist = census.start_histogram();
        assert_eq!(hist.values().sum::<usize>(), 14);
        for i in 2..16 {
            let a = Poly::from_index(Prime::TWO, ElementIndex(i));
            let k = find_closed_loop(&a, &s).unwrap().k();
            assert!(hist.contains_key(&k));
        }
    }
}
