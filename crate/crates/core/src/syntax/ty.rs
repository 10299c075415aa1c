//! Finite types: `N`, products and arrows.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite type. Structural equality is the intended notion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Type {
    Nat,
    Prod(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    /// `A1 -> A2 -> ... -> B`, association to the right.
    pub fn arrows(args: &[Type], result: Type) -> Type {
        args.iter()
            .rev()
            .fold(result, |acc, a| Type::arrow(a.clone(), acc))
    }

    pub fn depth(&self) -> usize {
        match self {
            Type::Nat => 0,
            Type::Prod(a, b) | Type::Arrow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Type::Nat => write!(f, "N"),
            Type::Prod(a, b) => {
                // '*' binds tighter than '->' and associates right.
                let need = prec > 1;
                if need {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 1)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Type::Arrow(a, b) => {
                let need = prec > 0;
                if need {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, "->")?;
                b.fmt_prec(f, 0)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
