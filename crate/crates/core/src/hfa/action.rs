//! The pointwise permutation action on elements.

use super::{Element, HfaError};
use crate::atoms_perms::Perm;

impl Perm {
    /// `p · x`: atoms are mapped by `p`, sets are mapped member by member.
    pub fn act(&self, x: &Element) -> Result<Element, HfaError> {
        x.check_pool(self.pool())?;
        Ok(self.permute(x))
    }

    /// `p · x` without checking that `x` lives over the permutation's pool;
    /// atoms outside the pool are fixed.
    pub fn permute(&self, x: &Element) -> Element {
        if self.is_identity() {
            return x.clone();
        }
        self.permute_inner(x)
    }

    fn permute_inner(&self, x: &Element) -> Element {
        match x {
            Element::Atom(a) => Element::Atom(self.image(*a)),
            Element::Set(_) => {
                if x.members().is_empty() {
                    return x.clone();
                }
                Element::set(x.members().iter().map(|m| self.permute_inner(m)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms_perms::{enumerate_perms, Atom, AtomPool};

    #[test]
    fn act_examples() {
        let pool = AtomPool::new(3).unwrap();
        let x: Element = "{a0, {a1}}".parse().unwrap();
        assert_eq!(Perm::identity(pool).act(&x).unwrap(), x);
        let s = Perm::swap(pool, Atom::new(0), Atom::new(1)).unwrap();
        assert_eq!(s.act(&x).unwrap().to_string(), "{a1, {a0}}");
    }

    #[test]
    fn act_rejects_foreign_atoms() {
        let pool = AtomPool::new(2).unwrap();
        let x: Element = "{a5}".parse().unwrap();
        assert!(matches!(
            Perm::identity(pool).act(&x),
            Err(HfaError::PoolMismatch { .. })
        ));
    }

    #[test]
    fn action_preserves_rank_and_composes() {
        let pool = AtomPool::new(3).unwrap();
        let perms = enumerate_perms(pool, 6).unwrap();
        let xs: Vec<Element> = ["{a0, {a1}}", "{{a0, a2}, {a0}}", "{}", "a2", "{a0, a1, a2}"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for x in &xs {
            for p in &perms {
                let px = p.act(x).unwrap();
                assert_eq!(px.rank(), x.rank());
                for q in &perms {
                    let lhs = p.act(&q.act(x).unwrap()).unwrap();
                    let rhs = p.compose(q).unwrap().act(x).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
