//! Eventually periodic sets of positive indices, the coordinate subspaces
//! of ℓ₂.

use std::collections::BTreeSet;

use crate::error::SeqError;

/// `{n ≥ 1 : n mod modulus ∈ residues}`, then `add` inserted and `remove`
/// taken out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    modulus: usize,
    residues: BTreeSet<usize>,
    add: BTreeSet<i64>,
    remove: BTreeSet<i64>,
}

impl IndexSet {
    pub fn new(
        modulus: usize,
        residues: BTreeSet<usize>,
        add: BTreeSet<i64>,
        remove: BTreeSet<i64>,
    ) -> Result<Self, SeqError> {
        if modulus == 0 {
            return Err(SeqError::BadIndexSet("modulus must be at least 1".into()));
        }
        if let Some(r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(SeqError::BadIndexSet(format!(
                "residue {r} out of range for modulus {modulus}"
            )));
        }
        if let Some(i) = add.iter().chain(&remove).find(|&&i| i < 1) {
            return Err(SeqError::BadIndexSet(format!("index {i} is not positive")));
        }
        if let Some(i) = add.intersection(&remove).next() {
            return Err(SeqError::BadIndexSet(format!("index {i} is both added and removed")));
        }
        Ok(Self {
            modulus,
            residues,
            add,
            remove,
        })
    }

    pub fn periodic(modulus: usize, residues: &[usize]) -> Result<Self, SeqError> {
        Self::new(
            modulus,
            residues.iter().copied().collect(),
            BTreeSet::new(),
            BTreeSet::new(),
        )
    }

    pub fn odds() -> Self {
        Self::periodic(2, &[1]).expect("valid residues")
    }

    pub fn evens() -> Self {
        Self::periodic(2, &[0]).expect("valid residues")
    }

    pub fn all() -> Self {
        Self::periodic(1, &[0]).expect("valid residues")
    }

    pub fn empty() -> Self {
        Self::periodic(1, &[]).expect("valid residues")
    }

    /// A finite set of indices.
    pub fn finite(indices: &[i64]) -> Result<Self, SeqError> {
        Self::new(1, BTreeSet::new(), indices.iter().copied().collect(), BTreeSet::new())
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    pub fn added(&self) -> &BTreeSet<i64> {
        &self.add
    }

    pub fn removed(&self) -> &BTreeSet<i64> {
        &self.remove
    }

    /// Membership decided by the residue alone, ignoring the exceptions.
    pub fn periodic_contains(&self, n: i64) -> bool {
        self.residues.contains(&(n.rem_euclid(self.modulus as i64) as usize))
    }

    pub fn contains(&self, n: i64) -> bool {
        if n < 1 {
            return false;
        }
        if self.add.contains(&n) {
            return true;
        }
        if self.remove.contains(&n) {
            return false;
        }
        self.periodic_contains(n)
    }

    /// Largest index named as an exception, 0 if none.
    pub fn last_exception(&self) -> i64 {
        self.add.iter().chain(&self.remove).copied().max().unwrap_or(0)
    }

    pub fn complement(&self) -> Self {
        Self {
            modulus: self.modulus,
            residues: (0..self.modulus).filter(|r| !self.residues.contains(r)).collect(),
            add: self.remove.clone(),
            remove: self.add.clone(),
        }
    }

    /// Members in `1..=size`, 1-based.
    pub fn members_upto(&self, size: usize) -> Vec<i64> {
        (1..=size as i64).filter(|&n| self.contains(n)).collect()
    }
}
