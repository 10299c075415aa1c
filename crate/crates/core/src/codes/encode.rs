//! Gödel numbering of closures.
//!
//! A closure serializes to a canonical self-delimiting byte string; the
//! number of a closure is that string read as a big-endian natural with a
//! leading sentinel byte. Decoding is total: numbers that do not parse are
//! simply invalid programs. A handful of small numbers are reserved as
//! canonical codes for everyday total functions, so that tiny numerals
//! double as useful programs:
//!
//!   0 = constant zero, 1 = identity, 2 = successor,
//!   3 = constant one, 4 = doubling.
//!
//! Any numbering with these properties is acceptable; nothing downstream
//! depends on the particular numerals, only on the laws they satisfy.

use std::sync::OnceLock;

use num_traits::ToPrimitive;

use super::expr::{Closure, CodeExpr, PrimOp};
use crate::Nat;

const RESERVED: u64 = 5;

fn reserved_table() -> &'static [Closure; 5] {
    static TABLE: OnceLock<[Closure; 5]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let f = |body: CodeExpr| Closure { body, env: vec![] };
        [
            f(CodeExpr::num(0)),
            f(CodeExpr::Arg),
            f(CodeExpr::Prim(PrimOp::Succ, vec![CodeExpr::Arg])),
            f(CodeExpr::num(1)),
            f(CodeExpr::Prim(
                PrimOp::Add,
                vec![CodeExpr::Arg, CodeExpr::Arg],
            )),
        ]
    })
}

/// The number of a closure. Injective; `decode` inverts it.
pub fn encode(c: &Closure) -> Nat {
    for (i, t) in reserved_table().iter().enumerate() {
        if t == c {
            return Nat::from(i);
        }
    }
    let mut bytes = vec![0x01u8];
    ser_closure(c, &mut bytes);
    Nat::from_bytes_be(&bytes)
}

/// Total decoder: a closure, or `None` for numbers that are not programs.
pub fn decode(n: &Nat) -> Option<Closure> {
    if let Some(small) = n.to_u64() {
        if small < RESERVED {
            return Some(reserved_table()[small as usize].clone());
        }
    }
    let bytes = n.to_bytes_be();
    if bytes.first() != Some(&0x01) {
        return None;
    }
    let mut cur = Cursor {
        bytes: &bytes[1..],
        pos: 0,
    };
    let c = de_closure(&mut cur)?;
    if cur.pos != cur.bytes.len() {
        return None; // trailing bytes
    }
    // Reserved closures encode through the table only.
    if reserved_table().iter().any(|t| *t == c) {
        return None;
    }
    Some(c)
}

fn ser_closure(c: &Closure, out: &mut Vec<u8>) {
    ser_usize(c.env.len(), out);
    ser_expr(&c.body, out);
    for v in &c.env {
        ser_nat(v, out);
    }
}

fn ser_expr(e: &CodeExpr, out: &mut Vec<u8>) {
    match e {
        CodeExpr::Arg => out.push(0),
        CodeExpr::Env(i) => {
            out.push(1);
            ser_usize(*i, out);
        }
        CodeExpr::Num(n) => {
            out.push(2);
            ser_nat(n, out);
        }
        CodeExpr::Prim(op, args) => {
            out.push(3);
            out.push(op.tag());
            for a in args {
                ser_expr(a, out);
            }
        }
        CodeExpr::Pair(a, b) => {
            out.push(4);
            ser_expr(a, out);
            ser_expr(b, out);
        }
        CodeExpr::Proj(i, x) => {
            out.push(5);
            out.push(*i);
            ser_expr(x, out);
        }
        CodeExpr::IfZero(c, t, f) => {
            out.push(6);
            ser_expr(c, out);
            ser_expr(t, out);
            ser_expr(f, out);
        }
        CodeExpr::Apply(f, x) => {
            out.push(7);
            ser_expr(f, out);
            ser_expr(x, out);
        }
        CodeExpr::Oracle(x) => {
            out.push(8);
            ser_expr(x, out);
        }
        CodeExpr::Close(body, caps) => {
            out.push(9);
            ser_usize(caps.len(), out);
            ser_expr(body, out);
            for c in caps {
                ser_expr(c, out);
            }
        }
        CodeExpr::SelfRef => out.push(10),
    }
}

/// LEB128, low groups first, no redundant trailing group.
fn ser_nat(n: &Nat, out: &mut Vec<u8>) {
    let mut digits = n.to_radix_le(128);
    if digits.is_empty() {
        digits.push(0);
    }
    let last = digits.len() - 1;
    for (i, d) in digits.iter().enumerate() {
        out.push(if i == last { *d } else { *d | 0x80 });
    }
}

fn ser_usize(n: usize, out: &mut Vec<u8>) {
    ser_nat(&Nat::from(n), out);
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn next(&mut self) -> Option<u8> {
        let b = *self.bytes.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }
}

fn de_closure(cur: &mut Cursor) -> Option<Closure> {
    let env_len = de_usize(cur)?;
    let body = de_expr(cur, 0)?;
    let mut env = Vec::with_capacity(env_len);
    for _ in 0..env_len {
        env.push(de_nat(cur)?);
    }
    Some(Closure { body, env })
}

fn de_expr(cur: &mut Cursor, depth: usize) -> Option<CodeExpr> {
    if depth > 4096 {
        return None;
    }
    match cur.next()? {
        0 => Some(CodeExpr::Arg),
        1 => Some(CodeExpr::Env(de_usize(cur)?)),
        2 => Some(CodeExpr::Num(de_nat(cur)?)),
        3 => {
            let op = PrimOp::from_tag(cur.next()?)?;
            let mut args = Vec::with_capacity(op.arity());
            for _ in 0..op.arity() {
                args.push(de_expr(cur, depth + 1)?);
            }
            Some(CodeExpr::Prim(op, args))
        }
        4 => Some(CodeExpr::pair_of(
            de_expr(cur, depth + 1)?,
            de_expr(cur, depth + 1)?,
        )),
        5 => {
            let i = cur.next()?;
            if i > 1 {
                return None;
            }
            Some(CodeExpr::Proj(i, Box::new(de_expr(cur, depth + 1)?)))
        }
        6 => Some(CodeExpr::if_zero(
            de_expr(cur, depth + 1)?,
            de_expr(cur, depth + 1)?,
            de_expr(cur, depth + 1)?,
        )),
        7 => Some(CodeExpr::apply(
            de_expr(cur, depth + 1)?,
            de_expr(cur, depth + 1)?,
        )),
        8 => Some(CodeExpr::oracle_at(de_expr(cur, depth + 1)?)),
        9 => {
            let n_caps = de_usize(cur)?;
            if n_caps > cur.bytes.len() {
                return None;
            }
            let body = de_expr(cur, depth + 1)?;
            let mut caps = Vec::with_capacity(n_caps);
            for _ in 0..n_caps {
                caps.push(de_expr(cur, depth + 1)?);
            }
            Some(CodeExpr::Close(Box::new(body), caps))
        }
        10 => Some(CodeExpr::SelfRef),
        _ => None,
    }
}

fn de_nat(cur: &mut Cursor) -> Option<Nat> {
    let mut digits = Vec::new();
    loop {
        let b = cur.next()?;
        digits.push(b & 0x7f);
        if b & 0x80 == 0 {
            break;
        }
        if digits.len() > cur.bytes.len() {
            return None;
        }
    }
    // Canonical form: no redundant zero in the top group (unless the
    // number is a single zero group).
    if digits.len() > 1 && *digits.last().unwrap() == 0 {
        return None;
    }
    Nat::from_radix_le(&digits, 128)
}

fn de_usize(cur: &mut Cursor) -> Option<usize> {
    de_nat(cur)?.to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::pairing::nat;

    #[test]
    fn reserved_codes_decode_to_the_table() {
        assert_eq!(decode(&nat(0)).unwrap().body, CodeExpr::num(0));
        assert_eq!(decode(&nat(1)).unwrap().body, CodeExpr::Arg);
        for i in 0..5u64 {
            let c = decode(&nat(i)).unwrap();
            assert_eq!(encode(&c), nat(i));
        }
    }

    #[test]
    fn roundtrip_on_structured_closures() {
        let samples = [
            Closure {
                body: CodeExpr::oracle_at(CodeExpr::Arg),
                env: vec![],
            },
            Closure {
                body: CodeExpr::apply(CodeExpr::Env(0), CodeExpr::num(3)),
                env: vec![nat(77), nat(0)],
            },
            Closure {
                body: CodeExpr::Close(
                    Box::new(CodeExpr::pair_of(CodeExpr::Env(0), CodeExpr::Arg)),
                    vec![CodeExpr::Arg],
                ),
                env: vec![],
            },
            Closure {
                body: CodeExpr::if_zero(CodeExpr::Arg, CodeExpr::SelfRef, CodeExpr::num(128)),
                env: vec![Nat::from(u128::MAX)],
            },
        ];
        for c in samples {
            assert_eq!(decode(&encode(&c)).as_ref(), Some(&c));
        }
    }

    #[test]
    fn decode_never_panics_on_arbitrary_numbers() {
        for n in 0..4000u64 {
            let _ = decode(&nat(n));
        }
        let big = Nat::from_bytes_be(&[1, 9, 9, 200, 13, 0, 0, 7]);
        let _ = decode(&big);
    }

    #[test]
    fn small_non_reserved_numbers_are_invalid() {
        for n in 5..256u64 {
            assert!(decode(&nat(n)).is_none(), "{n} should not decode");
        }
    }
}
