use super::{check_bound, Elem, FiniteGroup, GroupError, Subgroup, TABLE_BOUND};

/// `G/N` with cosets numbered by their smallest representative.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    kernel: Subgroup,
    projection: Vec<u32>,
    reps: Vec<Elem>,
    group: FiniteGroup,
}

impl QuotientGroup {
    pub fn new(parent: &FiniteGroup, kernel: &Subgroup) -> Result<Self, GroupError> {
        if !parent.is_normal(kernel) {
            return Err(GroupError::NotNormal(parent.name().to_string()));
        }
        let index = parent.order() / kernel.len();
        check_bound("quotient table", index as u128, TABLE_BOUND)?;
        let members = kernel.members();
        let mut projection = vec![u32::MAX; parent.order()];
        let mut reps = Vec::with_capacity(index);
        for x in parent.elements() {
            if projection[x] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &n in &members {
                projection[parent.mul(x, n)] = c;
            }
        }
        let mut table = Vec::with_capacity(index * index);
        for &a in &reps {
            for &b in &reps {
                table.push(projection[parent.mul(a, b)]);
            }
        }
        let name = format!("{}/N{}", parent.name(), kernel.len());
        let group = FiniteGroup::from_flat_table(name, index, table)?;
        Ok(QuotientGroup {
            kernel: kernel.clone(),
            projection,
            reps,
            group,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn project(&self, x: Elem) -> Elem {
        self.projection[x] as usize
    }

    pub fn rep(&self, coset: Elem) -> Elem {
        self.reps[coset]
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_mod_a3_is_c2() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let normals = s3.all_normal_subgroups().unwrap();
        let a3 = &normals[1];
        let q = QuotientGroup::new(&s3, a3).unwrap();
        assert_eq!(q.order(), 2);
        for a in s3.elements() {
            for b in s3.elements() {
                assert_eq!(q.project(s3.mul(a, b)), q.group().mul(q.project(a), q.project(b)));
            }
        }
    }

    #[test]
    fn non_normal_kernel_is_rejected() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let h = s3.generate(&[1]);
        assert_eq!(h.len(), 2);
        assert!(QuotientGroup::new(&s3, &h).is_err());
    }
}
