//! Cantor pairing and the derived tuple/sequence coding.
//!
//! `pair` is the bijection `<a,b> = (a+b)(a+b+1)/2 + b` with closed-form
//! projections. Tuples of length k are right-nested pairs
//! `<n1,...,nk> = <n1,<n2,...,nk>>`, with `<n>` being `n` itself, and the
//! i-th component of a length-k tuple is read off by walking the spine.

use num_traits::{One, Zero};

use crate::Nat;

/// `<a,b>` under the Cantor bijection.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

/// Both Cantor projections at once.
pub fn unpair(n: &Nat) -> (Nat, Nat) {
    // w = floor((sqrt(8n+1) - 1) / 2) is the diagonal index.
    let w = ((n * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = n - t;
    let a = w - &b;
    (a, b)
}

/// `(n)_0` or `(n)_1` of a raw pair.
pub fn proj(i: u8, n: &Nat) -> Nat {
    let (a, b) = unpair(n);
    if i == 0 {
        a
    } else {
        b
    }
}

/// Right-nested tuple. Empty tuple is 0, singleton is the element itself.
pub fn tuple(items: &[Nat]) -> Nat {
    match items {
        [] => Nat::zero(),
        [x] => x.clone(),
        [x, rest @ ..] => pair(x, &tuple(rest)),
    }
}

/// The i-th component of `n` read as a tuple of length `len`.
///
/// Components other than the last sit in the left slot of their spine
/// node; the last component is the final right slot.
pub fn component(n: &Nat, i: usize, len: usize) -> Nat {
    assert!(i < len, "component index {i} out of range for length {len}");
    let mut cur = n.clone();
    for _ in 0..i {
        cur = proj(1, &cur);
    }
    if i == len - 1 {
        cur
    } else {
        proj(0, &cur)
    }
}

pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

pub fn is_one(n: &Nat) -> bool {
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_zero_zero_is_zero() {
        assert_eq!(pair(&nat(0), &nat(0)), nat(0));
    }

    #[test]
    fn projections_invert_pair() {
        assert_eq!(proj(0, &pair(&nat(7), &nat(9))), nat(7));
        assert_eq!(proj(1, &pair(&nat(7), &nat(9))), nat(9));
    }

    #[test]
    fn pair_is_bijective_on_initial_segment() {
        // Exhaustive check below 200 in each coordinate: injective, and
        // unpair is a left inverse.
        let mut seen = std::collections::HashSet::new();
        for a in 0..200u64 {
            for b in 0..200u64 {
                let p = pair(&nat(a), &nat(b));
                assert!(seen.insert(p.clone()), "collision at ({a},{b})");
                assert_eq!(unpair(&p), (nat(a), nat(b)));
            }
        }
    }

    #[test]
    fn unpair_is_a_right_inverse_on_small_values() {
        // Surjectivity onto an initial segment: every n is some pair.
        for n in 0..500u64 {
            let (a, b) = unpair(&nat(n));
            assert_eq!(pair(&a, &b), nat(n));
        }
    }

    #[test]
    fn tuple_components() {
        let t = tuple(&[nat(4), nat(5), nat(6)]);
        assert_eq!(component(&t, 0, 3), nat(4));
        assert_eq!(component(&t, 1, 3), nat(5));
        assert_eq!(component(&t, 2, 3), nat(6));
        // Right nesting: <4,5,6> = <4,<5,6>>.
        assert_eq!(t, pair(&nat(4), &pair(&nat(5), &nat(6))));
        // Singleton tuples are bare elements.
        assert_eq!(tuple(&[nat(9)]), nat(9));
        assert_eq!(component(&nat(9), 0, 1), nat(9));
    }
}
