use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered set of distinct, 1-based qubit indices.
///
/// The order matters: a partial trace onto `[4, 1]` puts qubit 4 in the most
/// significant position of the reduced state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitSet(Vec<usize>);

impl QubitSet {
    pub fn new(members: impl Into<Vec<usize>>) -> Result<Self> {
        let members = members.into();
        for (i, &q) in members.iter().enumerate() {
            if q == 0 {
                return Err(Error::QubitOutOfRange { index: 0, num_qubits: 0 });
            }
            if members[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(QubitSet(members))
    }

    pub fn empty() -> Self {
        QubitSet(Vec::new())
    }

    /// Qubits `first..=last` in ascending order.
    pub fn range(first: usize, last: usize) -> Self {
        QubitSet((first.max(1)..=last).collect())
    }

    /// All qubits of an `n`-qubit system.
    pub fn all(num_qubits: usize) -> Self {
        Self::range(1, num_qubits)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.0.contains(&qubit)
    }

    /// Fails unless every member lies in `1..=num_qubits`.
    pub fn check(&self, num_qubits: usize) -> Result<()> {
        match self.0.iter().find(|&&q| q > num_qubits) {
            Some(&index) => Err(Error::QubitOutOfRange { index, num_qubits }),
            None => Ok(()),
        }
    }

    /// The remaining qubits of an `n`-qubit system, ascending.
    pub fn complement(&self, num_qubits: usize) -> QubitSet {
        QubitSet((1..=num_qubits).filter(|q| !self.contains(*q)).collect())
    }

    /// Same members, ascending.
    pub fn sorted(&self) -> QubitSet {
        let mut m = self.0.clone();
        m.sort_unstable();
        QubitSet(m)
    }

    /// Parses `"1,4"` style lists.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let members = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad qubit index '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }
}

impl fmt::Display for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// Splits a basis index of an `n`-qubit system into the bits of an ordered
/// subset and the bits of its ascending complement, and back.
#[derive(Clone, Debug)]
pub(crate) struct IndexSplit {
    sub_shifts: Vec<u32>,
    rest_shifts: Vec<u32>,
}

impl IndexSplit {
    /// `subset` must already be validated against `num_qubits`.
    pub fn new(num_qubits: usize, subset: &[usize]) -> Self {
        let shift = |q: usize| (num_qubits - q) as u32;
        let sub_shifts = subset.iter().map(|&q| shift(q)).collect();
        let rest_shifts = (1..=num_qubits)
            .filter(|q| !subset.contains(q))
            .map(shift)
            .collect();
        IndexSplit { sub_shifts, rest_shifts }
    }

    pub fn sub_len(&self) -> usize {
        self.sub_shifts.len()
    }

    pub fn rest_len(&self) -> usize {
        self.rest_shifts.len()
    }

    /// Full index from a subset index and a complement index.
    pub fn join(&self, sub: usize, rest: usize) -> usize {
        scatter(sub, &self.sub_shifts) | scatter(rest, &self.rest_shifts)
    }

    /// Bit mask of the subset qubits inside a full index.
    pub fn sub_mask(&self) -> usize {
        self.sub_shifts.iter().fold(0, |m, &s| m | (1 << s))
    }
}

fn scatter(value: usize, shifts: &[u32]) -> usize {
    let m = shifts.len();
    shifts
        .iter()
        .enumerate()
        .fold(0, |idx, (k, &s)| idx | (((value >> (m - 1 - k)) & 1) << s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero() {
        assert!(matches!(QubitSet::new(vec![1, 2, 1]), Err(Error::DuplicateQubit(1))));
        assert!(QubitSet::new(vec![0]).is_err());
    }

    #[test]
    fn complement_and_range_check() {
        let s = QubitSet::new(vec![4, 1]).unwrap();
        assert_eq!(s.complement(5).members(), &[2, 3, 5]);
        assert!(s.check(4).is_ok());
        assert!(s.check(3).is_err());
    }

    #[test]
    fn parse_lists() {
        assert_eq!(QubitSet::parse("1, 4").unwrap().members(), &[1, 4]);
        assert!(QubitSet::parse("").unwrap().is_empty());
        assert!(QubitSet::parse("1,x").is_err());
    }

    #[test]
    fn index_split_respects_subset_order() {
        // 3 qubits, subset [3, 1]: sub index bit order is (q3, q1).
        let split = IndexSplit::new(3, &[3, 1]);
        // sub = 0b10 -> q3=1, q1=0 ; rest = q2 = 1 -> index 0b011
        assert_eq!(split.join(0b10, 1), 0b011);
        assert_eq!(split.sub_mask(), 0b101);
    }
}
