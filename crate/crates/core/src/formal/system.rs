use std::collections::HashMap;

use super::relations::{enumerate_generators, relations};
use super::{FormalElement, GenId, Space};
use crate::error::{Error, Result};
use crate::linalg::{sparse_row, Rref, SparseRow};

/// The presentation of one weight-graded piece: basis plus reduced relation matrix.
#[derive(Clone, Debug)]
pub struct RelationSystem {
    space: Space,
    weight: u32,
    basis: Vec<GenId>,
    index: HashMap<GenId, usize>,
    rref: Rref,
}

impl RelationSystem {
    pub fn build(space: Space, weight: u32) -> Result<Self> {
        if weight == 0 {
            return Err(Error::InvalidArgument("weight must be at least 1".into()));
        }
        let basis = enumerate_generators(space, weight);
        let index = index_of(&basis);
        let rows: Vec<SparseRow> = relations(space, weight).iter().map(|r| to_row(&index, r)).collect();
        let rref = Rref::from_rows(basis.len(), rows);
        Ok(RelationSystem { space, weight, basis, index, rref })
    }

    /// Reassembles a system from stored reduced rows; validates shape and echelon form.
    pub fn from_reduced(space: Space, weight: u32, rows: Vec<SparseRow>) -> Result<Self> {
        let basis = enumerate_generators(space, weight);
        let index = index_of(&basis);
        let rref = Rref::from_reduced(basis.len(), rows)
            .ok_or_else(|| Error::Cache(format!("stored rows for {space} weight {weight} are not in reduced form")))?;
        Ok(RelationSystem { space, weight, basis, index, rref })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn basis(&self) -> &[GenId] {
        &self.basis
    }

    pub fn rref(&self) -> &Rref {
        &self.rref
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len() - self.rank()
    }

    /// Generators that survive as a basis of the quotient (the non-pivot columns).
    pub fn free_generators(&self) -> Vec<GenId> {
        (0..self.basis.len()).filter(|&c| !self.rref.is_pivot(c)).map(|c| self.basis[c]).collect()
    }

    /// The reduced rows as elements.
    pub fn reduced_rows(&self) -> Vec<FormalElement> {
        self.rref.rows().iter().map(|r| self.from_row(r)).collect()
    }

    fn check(&self, e: &FormalElement) -> Result<()> {
        if e.space() != self.space {
            return Err(Error::WrongSpace { expected: self.space, found: e.space() });
        }
        if e.weight() != self.weight && !e.is_empty() {
            return Err(Error::WrongWeight { expected: self.weight, found: e.weight() });
        }
        Ok(())
    }

    fn from_row(&self, row: &[(usize, crate::rational::Rational)]) -> FormalElement {
        let mut e = FormalElement::zero(self.space, self.weight);
        for (c, v) in row {
            e.push(self.basis[*c], v.clone());
        }
        e
    }

    /// Canonical representative modulo the relations, supported on free generators.
    pub fn normal_form(&self, e: &FormalElement) -> Result<FormalElement> {
        self.check(e)?;
        Ok(self.from_row(&self.rref.reduce(&to_row(&self.index, e))))
    }

    pub fn is_zero(&self, e: &FormalElement) -> Result<bool> {
        Ok(self.normal_form(e)?.is_empty())
    }
}

fn index_of(basis: &[GenId]) -> HashMap<GenId, usize> {
    basis.iter().enumerate().map(|(i, g)| (*g, i)).collect()
}

fn to_row(index: &HashMap<GenId, usize>, e: &FormalElement) -> SparseRow {
    sparse_row(e.terms().iter().map(|(g, c)| (index[g], c.clone())))
}
