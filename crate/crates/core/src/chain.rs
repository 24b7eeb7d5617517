//! k-chains, two-basis cycles, and the cycle partition of the non-constant
//! elements.
//!
//! Step `i >= 1` of a chain applies the inverse under basis
//! `((i - 1) mod beta) + 1`, so with two bases odd steps use `f1` and even
//! steps use `f2`.

use crate::error::{Error, Result};
use crate::field::{inv, Guard, IrreduciblePoly};
use crate::poly::{ElementIndex, Poly};
use crate::Prime;

/// Ordered list of bases `(f_1, ..., f_beta)` sharing one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisSchedule {
    bases: Vec<IrreduciblePoly>,
}

impl BasisSchedule {
    /// All bases must share p and degree. Repeats are allowed.
    pub fn new(bases: Vec<IrreduciblePoly>) -> Result<Self> {
        let first = bases.first().ok_or(Error::EmptySchedule)?;
        for f in &bases[1..] {
            if f.prime() != first.prime() {
                return Err(Error::CharacteristicMismatch {
                    left: first.prime().get(),
                    right: f.prime().get(),
                });
            }
            if f.degree() != first.degree() {
                return Err(Error::DegreeMismatch {
                    expected: first.degree(),
                    found: f.degree(),
                });
            }
        }
        Ok(BasisSchedule { bases })
    }

    /// Like [`BasisSchedule::new`], additionally rejecting repeated bases.
    pub fn distinct(bases: Vec<IrreduciblePoly>) -> Result<Self> {
        let schedule = BasisSchedule::new(bases)?;
        schedule.require_distinct()?;
        Ok(schedule)
    }

    pub fn pair(f1: &IrreduciblePoly, f2: &IrreduciblePoly) -> Result<Self> {
        BasisSchedule::distinct(vec![f1.clone(), f2.clone()])
    }

    pub fn require_distinct(&self) -> Result<()> {
        for (i, f) in self.bases.iter().enumerate() {
            if self.bases[..i].contains(f) {
                return Err(Error::RepeatedBasis(f.to_string()));
            }
        }
        Ok(())
    }

    pub fn bases(&self) -> &[IrreduciblePoly] {
        &self.bases
    }

    pub fn beta(&self) -> usize {
        self.bases.len()
    }

    pub fn degree(&self) -> usize {
        self.bases[0].degree()
    }

    pub fn prime(&self) -> Prime {
        self.bases[0].prime()
    }

    /// Zero-based basis position used by step `i >= 1`.
    #[inline]
    pub fn phase_of_step(&self, i: usize) -> usize {
        (i - 1) % self.bases.len()
    }

    pub fn basis_for_step(&self, i: usize) -> &IrreduciblePoly {
        &self.bases[self.phase_of_step(i)]
    }
}

/// The sequence `(a_0, ..., a_k)` produced by a schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub start: Poly,
    pub schedule: BasisSchedule,
    pub elements: Vec<Poly>,
}

impl Chain {
    pub fn k(&self) -> usize {
        self.elements.len() - 1
    }
}

pub fn k_chain(a: &Poly, schedule: &BasisSchedule, k: usize) -> Result<Chain> {
    if a.is_zero() {
        return Err(Error::ZeroHasNoInverse);
    }
    let mut elements = Vec::with_capacity(k + 1);
    elements.push(a.clone());
    for i in 1..=k {
        let next = inv(&elements[i - 1], schedule.basis_for_step(i))?;
        elements.push(next);
    }
    Ok(Chain {
        start: a.clone(),
        schedule: schedule.clone(),
        elements,
    })
}

/// Inverse map of one basis over all element indices; slot 0 maps to 0.
#[derive(Debug, Clone)]
pub struct InverseTable {
    basis: IrreduciblePoly,
    table: Vec<u64>,
}

impl InverseTable {
    pub fn new(basis: &IrreduciblePoly, guard: Guard) -> Result<Self> {
        let q = basis.field_size(guard)?;
        let p = basis.prime();
        let mut table = vec![0u64; q as usize];
        for (i, slot) in table.iter_mut().enumerate().skip(1) {
            let a = Poly::from_index(p, ElementIndex(i as u64));
            *slot = inv(&a, basis)?.index().0;
        }
        Ok(InverseTable {
            basis: basis.clone(),
            table,
        })
    }

    pub fn basis(&self) -> &IrreduciblePoly {
        &self.basis
    }

    #[inline]
    pub fn get(&self, i: u64) -> u64 {
        self.table[i as usize]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// An alternating cycle of a basis pair, stored by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub pair: (IrreduciblePoly, IrreduciblePoly),
    pub elements: Vec<ElementIndex>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn polys(&self) -> Vec<Poly> {
        let p = self.pair.0.prime();
        self.elements.iter().map(|&i| Poly::from_index(p, i)).collect()
    }

    pub fn min_element(&self) -> ElementIndex {
        self.elements[0]
    }
}

fn check_cycle_start(a: &Poly, f: &IrreduciblePoly) -> Result<()> {
    if a.is_constant() {
        return Err(Error::Constant(a.to_string()));
    }
    if a.prime() != f.prime() {
        return Err(Error::CharacteristicMismatch {
            left: a.prime().get(),
            right: f.prime().get(),
        });
    }
    Ok(())
}

/// Walks the alternating chain from `a` until it closes; `raw[0] = a` and
/// the step out of `raw[i]` uses `f1` for even `i`.
fn raw_cycle(a: &Poly, f1: &IrreduciblePoly, f2: &IrreduciblePoly) -> Result<Vec<ElementIndex>> {
    let q = Guard(u64::MAX).field_size(f1.prime(), f1.degree())?;
    let cap = q - f1.prime().get() as u64;
    let mut raw = vec![a.index()];
    let mut cur = a.clone();
    for step in 0..cap {
        let f = if step % 2 == 0 { f1 } else { f2 };
        cur = inv(&cur, f)?;
        if step % 2 == 1 && &cur == a {
            return Ok(raw);
        }
        raw.push(cur.index());
    }
    Err(Error::IterationCap {
        cap,
        start: a.to_string(),
    })
}

/// Rotates and, if needed, reverses a raw cycle so it starts at its minimum
/// element and steps first along `f1`.
fn canonicalize(raw: Vec<ElementIndex>) -> Vec<ElementIndex> {
    let k = raw.len();
    let (m, _) = raw
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .expect("cycles are non-empty");
    if m % 2 == 0 {
        let mut out = raw;
        out.rotate_left(m);
        out
    } else {
        (0..k).map(|i| raw[(m + k - i) % k]).collect()
    }
}

/// The cycle through non-constant `a` for distinct `f1`, `f2`, in canonical
/// orientation.
pub fn find_cycle(a: &Poly, f1: &IrreduciblePoly, f2: &IrreduciblePoly) -> Result<Cycle> {
    BasisSchedule::pair(f1, f2)?;
    check_cycle_start(a, f1)?;
    let raw = raw_cycle(a, f1, f2)?;
    Ok(Cycle {
        pair: (f1.clone(), f2.clone()),
        elements: canonicalize(raw),
    })
}

/// Checks that walking from `a` under `(f2, f1)` retraces the `(f1, f2)`
/// cycle backwards.
pub fn reverse_consistency_check(
    a: &Poly,
    f1: &IrreduciblePoly,
    f2: &IrreduciblePoly,
) -> Result<bool> {
    BasisSchedule::pair(f1, f2)?;
    check_cycle_start(a, f1)?;
    let forward = raw_cycle(a, f1, f2)?;
    let backward = raw_cycle(a, f2, f1)?;
    let k = forward.len();
    Ok(backward.len() == k && (0..k).all(|i| backward[i] == forward[(k - i) % k]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePartition {
    pub pair: (IrreduciblePoly, IrreduciblePoly),
    pub cycles: Vec<Cycle>,
}

impl CyclePartition {
    pub fn covered(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    /// Cycle lengths in canonical order.
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Cycle::len).collect()
    }
}

/// Partition of the non-constant elements into cycles, sorted by minimum
/// element.
pub fn partition(f1: &IrreduciblePoly, f2: &IrreduciblePoly, guard: Guard) -> Result<CyclePartition> {
    BasisSchedule::pair(f1, f2)?;
    let t1 = InverseTable::new(f1, guard)?;
    let t2 = InverseTable::new(f2, guard)?;
    partition_with_tables(&t1, &t2)
}

/// Same as [`partition`] but reusing precomputed tables.
pub fn partition_with_tables(t1: &InverseTable, t2: &InverseTable) -> Result<CyclePartition> {
    let (f1, f2) = (t1.basis(), t2.basis());
    BasisSchedule::pair(f1, f2)?;
    let q = t1.len() as u64;
    let p = f1.prime().get() as u64;
    let cap = q - p;
    let mut seen = vec![false; q as usize];
    let mut cycles = Vec::new();
    for start in p..q {
        if seen[start as usize] {
            continue;
        }
        let mut elements = Vec::new();
        let mut cur = start;
        let mut steps = 0u64;
        loop {
            seen[cur as usize] = true;
            elements.push(ElementIndex(cur));
            let table = if steps.is_multiple_of(2) { t1 } else { t2 };
            cur = table.get(cur);
            steps += 1;
            if steps.is_multiple_of(2) && cur == start {
                break;
            }
            if steps > cap {
                return Err(Error::IterationCap {
                    cap,
                    start: Poly::from_index(f1.prime(), ElementIndex(start)).to_string(),
                });
            }
        }
        cycles.push(Cycle {
            pair: (f1.clone(), f2.clone()),
            elements,
        });
    }
    Ok(CyclePartition {
        pair: (f1.clone(), f2.clone()),
        cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(s: &str) -> Poly {
        Poly::parse(Prime::TWO, s).unwrap()
    }

    fn irr2(s: &str) -> IrreduciblePoly {
        IrreduciblePoly::parse(Prime::TWO, s).unwrap()
    }

    fn fig1() -> (IrreduciblePoly, IrreduciblePoly) {
        (irr2("x^3+x+1"), irr2("x^3+x^2+1"))
    }

    fn idx(v: &[u64]) -> Vec<ElementIndex> {
        v.iter().map(|&i| ElementIndex(i)).collect()
    }

    #[test]
    fn figure_one_chain() {
        let (f1, f2) = fig1();
        let schedule = BasisSchedule::pair(&f1, &f2).unwrap();
        let chain = k_chain(&p2("x^2+x+1"), &schedule, 6).unwrap();
        let got: Vec<String> = chain.elements.iter().map(|e| e.digit_string(3)).collect();
        assert_eq!(got, ["111", "100", "011", "110", "010", "101", "111"]);
        assert_eq!(chain.k(), 6);
    }

    #[test]
    fn constant_chains_alternate() {
        let (f1, f2) = fig1();
        let schedule = BasisSchedule::pair(&f1, &f2).unwrap();
        let chain = k_chain(&p2("1"), &schedule, 4).unwrap();
        assert!(chain.elements.iter().all(Poly::is_one));
        assert_eq!(chain.elements.len(), 5);

        let five = Prime::new(5).unwrap();
        let fs = crate::enumerate_irreducibles(five, 2, Guard::DEFAULT).unwrap();
        let schedule = BasisSchedule::pair(&fs[0], &fs[1]).unwrap();
        let chain = k_chain(&Poly::constant(five, 2), &schedule, 3).unwrap();
        let got: Vec<u32> = chain.elements.iter().map(|e| e.coeff(0)).collect();
        assert_eq!(got, [2, 3, 2, 3]);
    }

    #[test]
    fn chain_rejects_zero() {
        let (f1, f2) = fig1();
        let schedule = BasisSchedule::pair(&f1, &f2).unwrap();
        assert_eq!(
            k_chain(&Poly::zero(Prime::TWO), &schedule, 2),
            Err(Error::ZeroHasNoInverse)
        );
    }

    #[test]
    fn schedule_validation() {
        let (f1, _) = fig1();
        assert_eq!(BasisSchedule::new(vec![]), Err(Error::EmptySchedule));
        assert!(matches!(
            BasisSchedule::pair(&f1, &f1),
            Err(Error::RepeatedBasis(_))
        ));
        assert!(BasisSchedule::new(vec![f1.clone(), f1.clone()]).is_ok());
        let g = irr2("x^4+x+1");
        assert!(matches!(
            BasisSchedule::new(vec![f1, g]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn figure_one_cycle() {
        let (f1, f2) = fig1();
        for i in 2..8 {
            let a = Poly::from_index(Prime::TWO, ElementIndex(i));
            let cycle = find_cycle(&a, &f1, &f2).unwrap();
            assert_eq!(cycle.elements, idx(&[2, 5, 7, 4, 3, 6]));
        }
    }

    #[test]
    fn find_cycle_errors() {
        let (f1, f2) = fig1();
        assert!(matches!(find_cycle(&p2("1"), &f1, &f2), Err(Error::Constant(_))));
        assert!(matches!(
            find_cycle(&Poly::zero(Prime::TWO), &f1, &f2),
            Err(Error::Constant(_))
        ));
        assert!(matches!(
            find_cycle(&p2("x"), &f1, &f1),
            Err(Error::RepeatedBasis(_))
        ));
    }

    #[test]
    fn canonical_orientation_from_odd_minimum() {
        // min at position 1: the f1 edge out of it leads back to position 0.
        let raw = idx(&[7, 2, 5, 9]);
        assert_eq!(canonicalize(raw), idx(&[2, 7, 9, 5]));
        let raw = idx(&[7, 4, 2, 9]);
        assert_eq!(canonicalize(raw), idx(&[2, 9, 7, 4]));
    }

    #[test]
    fn figure_one_partition() {
        let (f1, f2) = fig1();
        let part = partition(&f1, &f2, Guard::DEFAULT).unwrap();
        assert_eq!(part.cycles.len(), 1);
        assert_eq!(part.covered(), 6);
        assert_eq!(part.cycles[0].elements, idx(&[2, 5, 7, 4, 3, 6]));
        assert!(matches!(
            partition(&f1, &f1, Guard::DEFAULT),
            Err(Error::RepeatedBasis(_))
        ));
    }

    #[test]
    fn reversal() {
        let (f1, f2) = fig1();
        assert!(reverse_consistency_check(&p2("x^2+x+1"), &f1, &f2).unwrap());
    }

    #[test]
    fn partition_matches_find_cycle() {
        let f1 = irr2("x^4+x+1");
        let f2 = irr2("x^4+x^3+1");
        let part = partition(&f1, &f2, Guard::DEFAULT).unwrap();
        assert_eq!(part.covered(), 14);
        for cycle in &part.cycles {
            assert!(cycle.len() >= 4 && cycle.len() % 2 == 0);
            for a in cycle.polys() {
                assert_eq!(&find_cycle(&a, &f1, &f2).unwrap(), cycle);
            }
        }
    }
}
