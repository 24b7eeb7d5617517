//! Stable JSON documents. Polynomials use the indexed `#N` encoding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, CyclePartition};
use crate::loops::ClosedLoop;
use crate::permutation::Permutation;
use crate::poly::Poly;

fn tag(p: &Poly) -> String {
    p.index().to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDoc {
    pub p: u32,
    pub n: usize,
    pub bases: Vec<String>,
    pub start: String,
    pub elements: Vec<String>,
}

impl From<&Chain> for ChainDoc {
    fn from(c: &Chain) -> Self {
        ChainDoc {
            p: c.schedule.prime().get(),
            n: c.schedule.degree(),
            bases: c.schedule.bases().iter().map(|f| tag(f.poly())).collect(),
            start: tag(&c.start),
            elements: c.elements.iter().map(tag).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDoc {
    pub len: usize,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub pair: [String; 2],
    pub cycles: Vec<CycleDoc>,
    pub covered: usize,
}

impl From<&CyclePartition> for PartitionDoc {
    fn from(part: &CyclePartition) -> Self {
        PartitionDoc {
            pair: [tag(part.pair.0.poly()), tag(part.pair.1.poly())],
            cycles: part
                .cycles
                .iter()
                .map(|c| CycleDoc {
                    len: c.len(),
                    elements: c.elements.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            covered: part.covered(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationDoc {
    pub mapping: Vec<u64>,
    pub cycles: Vec<Vec<u64>>,
    pub fixed_points: Vec<u64>,
}

impl From<&Permutation> for PermutationDoc {
    fn from(perm: &Permutation) -> Self {
        PermutationDoc {
            mapping: perm.mapping().to_vec(),
            cycles: perm.cycles().to_vec(),
            fixed_points: perm.fixed_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedLoopDoc {
    pub bases: Vec<String>,
    pub k: usize,
    pub elements: Vec<String>,
    /// Occurrences among `a_0 .. a_{k-1}` for every element of the loop.
    pub multiplicities: BTreeMap<String, usize>,
}

impl From<&ClosedLoop> for ClosedLoopDoc {
    fn from(l: &ClosedLoop) -> Self {
        ClosedLoopDoc {
            bases: l.schedule.bases().iter().map(|f| tag(f.poly())).collect(),
            k: l.k(),
            elements: l.elements.iter().map(tag).collect(),
            multiplicities: l
                .multiplicities()
                .into_iter()
                .map(|(e, m)| (e.to_string(), m))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{k_chain, partition, BasisSchedule};
    use crate::field::{Guard, IrreduciblePoly};
    use crate::Prime;

    #[test]
    fn chain_document_shape() {
        let f1 = IrreduciblePoly::parse(Prime::TWO, "#11").unwrap();
        let f2 = IrreduciblePoly::parse(Prime::TWO, "#13").unwrap();
        let schedule = BasisSchedule::pair(&f1, &f2).unwrap();
        let chain = k_chain(&Poly::parse(Prime::TWO, "#7").unwrap(), &schedule, 6).unwrap();
        let text = serde_json::to_string(&ChainDoc::from(&chain)).unwrap();
        assert_eq!(
            text,
            r##"{"p":2,"n":3,"bases":["#11","#13"],"start":"#7","elements":["#7","#4","#3","#6","#2","#5","#7"]}"##
        );
    }

    #[test]
    fn partition_document_shape() {
        let f1 = IrreduciblePoly::parse(Prime::TWO, "#11").unwrap();
        let f2 = IrreduciblePoly::parse(Prime::TWO, "#13").unwrap();
        let doc = PartitionDoc::from(&partition(&f1, &f2, Guard::DEFAULT).unwrap());
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["pair"], serde_json::json!(["#11", "#13"]));
        assert_eq!(v["cycles"][0]["len"], 6);
        assert_eq!(v["covered"], 6);
    }
}
