use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::{FiniteGroup, GroupError, QuotientGroup, Subgroup};

/// The normal subgroups of a group, indexed in canonical order.
///
/// Index `0` is the trivial subgroup and the last index is the whole group.
#[derive(Debug)]
pub struct NormalLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    commutators: Vec<usize>,
    quotients: Vec<OnceLock<QuotientGroup>>,
}

impl NormalLattice {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self, GroupError> {
        let subgroups = group.all_normal_subgroups()?;
        let index: HashMap<Subgroup, usize> = subgroups.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let commutators = subgroups.iter().map(|s| index[&group.commutator_with(s)]).collect();
        let quotients = subgroups.iter().map(|_| OnceLock::new()).collect();
        Ok(NormalLattice {
            group,
            subgroups,
            index,
            commutators,
            quotients,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn whole(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// `N_i ⊆ N_j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.subgroups[i].is_subgroup_of(&self.subgroups[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index[&self.subgroups[i].intersection(&self.subgroups[j])]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.index[&self.group.product_of_normals(&self.subgroups[i], &self.subgroups[j])]
    }

    /// Index of `[G, N_i]`.
    pub fn commutator(&self, i: usize) -> usize {
        self.commutators[i]
    }

    /// Index of the derived subgroup.
    pub fn derived(&self) -> usize {
        self.commutators[self.whole()]
    }

    /// Whether `G/N_i` is abelian.
    pub fn has_abelian_quotient(&self, i: usize) -> bool {
        self.leq(self.derived(), i)
    }

    pub fn quotient(&self, i: usize) -> Result<&QuotientGroup, GroupError> {
        if let Some(q) = self.quotients[i].get() {
            return Ok(q);
        }
        let q = QuotientGroup::new(&self.group, &self.subgroups[i])?;
        Ok(self.quotients[i].get_or_init(|| q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_lattice() {
        let lat = NormalLattice::new(Arc::new(FiniteGroup::symmetric(3).unwrap())).unwrap();
        assert_eq!(lat.len(), 3);
        assert_eq!(lat.subgroup(0).len(), 1);
        assert_eq!(lat.subgroup(1).len(), 3);
        assert_eq!(lat.derived(), 1);
        assert!(lat.has_abelian_quotient(1));
        assert!(!lat.has_abelian_quotient(0));
        assert_eq!(lat.commutator(1), 1);
        assert_eq!(lat.join(0, 1), 1);
        assert_eq!(lat.meet(1, 2), 1);
        assert_eq!(lat.quotient(1).unwrap().order(), 2);
    }
}
