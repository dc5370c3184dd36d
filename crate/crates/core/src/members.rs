use std::fmt;

/// Index of a member in `[0, n)`.
pub type MemberId = u32;

/// A sorted, duplicate-free set of members.
///
/// Ordering is lexicographic on the sorted ids, which is the order used for
/// every community listing this crate writes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberSet(Vec<MemberId>);

impl MemberSet {
    pub fn new(members: impl IntoIterator<Item = MemberId>) -> Self {
        let mut members: Vec<MemberId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        MemberSet(members)
    }

    /// Members `start..end`.
    pub fn range(start: MemberId, end: MemberId) -> Self {
        MemberSet((start..end).collect())
    }

    /// The set of members whose bit is set in `mask`.
    pub fn from_mask(mask: u64) -> Self {
        MemberSet((0..64).filter(|b| mask >> b & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, member: MemberId) -> bool {
        self.0.binary_search(&member).is_ok()
    }

    pub fn as_slice(&self) -> &[MemberId] {
        &self.0
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = MemberId> + Clone + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<MemberId> {
        self.0
    }

    pub fn max(&self) -> Option<MemberId> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &MemberSet) -> MemberSet {
        MemberSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &MemberSet) -> MemberSet {
        MemberSet(self.iter().filter(|&m| other.contains(m)).collect())
    }

    pub fn difference(&self, other: &MemberSet) -> MemberSet {
        MemberSet(self.iter().filter(|&m| !other.contains(m)).collect())
    }

    pub fn is_subset(&self, other: &MemberSet) -> bool {
        self.iter().all(|m| other.contains(m))
    }

    /// `|self Δ other|`.
    pub fn symmetric_difference_len(&self, other: &MemberSet) -> usize {
        self.difference(other).len() + other.difference(self).len()
    }
}

impl FromIterator<MemberId> for MemberSet {
    fn from_iter<I: IntoIterator<Item = MemberId>>(iter: I) -> Self {
        MemberSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a MemberSet {
    type Item = MemberId;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, MemberId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl From<Vec<MemberId>> for MemberSet {
    fn from(members: Vec<MemberId>) -> Self {
        MemberSet::new(members)
    }
}

impl<const N: usize> From<[MemberId; N]> for MemberSet {
    fn from(members: [MemberId; N]) -> Self {
        MemberSet::new(members)
    }
}

impl fmt::Display for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_compares() {
        let a = MemberSet::new([3, 1, 2, 1]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert!(a.contains(2));
        assert!(!a.contains(0));
        let b = MemberSet::from([2, 3, 4]);
        assert_eq!(a.symmetric_difference_len(&b), 2);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersection(&b), MemberSet::from([2, 3]));
        assert!(MemberSet::from([2]).is_subset(&a));
        assert_eq!(a.to_string(), "1 2 3");
        assert!(MemberSet::from([0, 1]) < MemberSet::from([0, 2]));
        assert_eq!(MemberSet::from_mask(0b101), MemberSet::from([0, 2]));
    }
}
