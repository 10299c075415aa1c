//! Finite partial functions on the naturals, used as forcing conditions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::pairing::{pair, unpair};
use crate::Nat;

/// A forcing condition: a finite partial map from naturals to naturals.
///
/// Conditions are ordered by graph inclusion. The empty condition is the
/// weakest one and extends to everything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Oracle {
    entries: BTreeMap<Nat, Nat>,
}

impl Oracle {
    pub fn empty() -> Self {
        Oracle::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (Nat, Nat)>>(items: I) -> Self {
        Oracle {
            entries: items.into_iter().collect(),
        }
    }

    pub fn get(&self, key: &Nat) -> Option<&Nat> {
        self.entries.get(key)
    }

    pub fn defines(&self, key: &Nat) -> bool {
        self.entries.contains_key(key)
    }

    pub fn insert(&mut self, key: Nat, value: Nat) {
        self.entries.insert(key, value);
    }

    /// The condition extended by one binding; `None` if the key is already
    /// bound to a different value.
    pub fn extended(&self, key: Nat, value: Nat) -> Option<Oracle> {
        match self.entries.get(&key) {
            Some(v) if *v != value => None,
            _ => {
                let mut q = self.clone();
                q.insert(key, value);
                Some(q)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Nat, &Nat)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Nat> {
        self.entries.keys()
    }

    /// Graph inclusion `self ⊆ other`.
    pub fn is_extended_by(&self, other: &Oracle) -> bool {
        self.entries
            .iter()
            .all(|(k, v)| other.entries.get(k) == Some(v))
    }

    /// Encode the graph as a single natural: a nil/cons list of key-value
    /// pairs in ascending key order.
    pub fn encode(&self) -> Nat {
        let mut acc = Nat::zero();
        for (k, v) in self.entries.iter().rev() {
            acc = pair(&pair(k, v), &acc) + 1u32;
        }
        acc
    }

    /// Total decoder; duplicate keys collapse to the last binding.
    pub fn decode(mut n: Nat) -> Oracle {
        let mut entries = BTreeMap::new();
        while !n.is_zero() {
            let (head, rest) = unpair(&(n - 1u32));
            let (k, v) = unpair(&head);
            entries.insert(k, v);
            n = rest;
        }
        Oracle { entries }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}:{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::pairing::nat;

    #[test]
    fn encode_decode_roundtrip() {
        let p = Oracle::from_entries([(nat(3), nat(8)), (nat(0), nat(1))]);
        assert_eq!(Oracle::decode(p.encode()), p);
        assert_eq!(Oracle::decode(Oracle::empty().encode()), Oracle::empty());
    }

    #[test]
    fn extension_is_a_partial_order() {
        let p = Oracle::from_entries([(nat(1), nat(2))]);
        let q = Oracle::from_entries([(nat(1), nat(2)), (nat(3), nat(4))]);
        assert!(p.is_extended_by(&q));
        assert!(!q.is_extended_by(&p));
        assert!(p.is_extended_by(&p));
        // Antisymmetry on a sample: mutual extension means equality.
        let p2 = Oracle::decode(p.encode());
        assert!(p.is_extended_by(&p2) && p2.is_extended_by(&p) && p == p2);
    }

    #[test]
    fn extended_rejects_conflicts() {
        let p = Oracle::from_entries([(nat(1), nat(2))]);
        assert!(p.extended(nat(1), nat(3)).is_none());
        assert!(p.extended(nat(1), nat(2)).is_some());
        assert_eq!(p.extended(nat(5), nat(0)).unwrap().len(), 2);
    }
}
