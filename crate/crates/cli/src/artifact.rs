//! On-disk formats: extracted-code artifacts, machine expressions and
//! oracles, all with numbers as decimal strings.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use goodman_core::codes::{build, CodeExpr, Oracle, PrimOp};
use goodman_core::extraction::ExtractionResult;
use goodman_core::Nat;

pub fn parse_nat(s: &str) -> Result<Nat> {
    use num_traits::Num;
    Nat::from_str_radix(s.trim(), 10).map_err(|_| anyhow!("not a number: {s:?}"))
}

/// The serialized form of an extraction result.
#[derive(Debug, Serialize, Deserialize)]
pub struct Artifact {
    pub mode: String,
    /// The index, in decimal.
    pub code: String,
    /// Canonical closure variables, name and type.
    pub closure_vars: Vec<(String, String)>,
    /// The conclusion and its universal closure, in concrete syntax.
    pub conclusion: String,
    pub closure: String,
    pub case_trace: Vec<TraceLine>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TraceLine {
    pub node: usize,
    pub rule: u8,
    pub recipe: String,
}

impl Artifact {
    pub fn of(result: &ExtractionResult, conclusion: &goodman_core::syntax::Formula) -> Artifact {
        Artifact {
            mode: result.mode.to_string(),
            code: result.code.to_string(),
            closure_vars: result
                .closure_vars
                .iter()
                .map(|(n, t)| (n.clone(), t.to_string()))
                .collect(),
            conclusion: conclusion.to_string(),
            closure: result.closure_of(conclusion).to_string(),
            case_trace: result
                .case_trace
                .iter()
                .map(|t| TraceLine {
                    node: t.node,
                    rule: t.rule_id,
                    recipe: t.recipe.clone(),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mode: {}\n", self.mode));
        out.push_str(&format!("conclusion: {}\n", self.conclusion));
        if !self.closure_vars.is_empty() {
            out.push_str(&format!("closure: {}\n", self.closure));
        }
        out.push_str(&format!("code: {}\n", self.code));
        out.push_str("trace:\n");
        for t in &self.case_trace {
            out.push_str(&format!(
                "  node {:>3} rule ({:>2}): {}\n",
                t.node, t.rule, t.recipe
            ));
        }
        out
    }
}

/// Machine expressions with explicit node tags and decimal numbers.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum ExprDto {
    Arg,
    Env {
        index: usize,
    },
    Num {
        value: String,
    },
    Prim {
        op: String,
        args: Vec<ExprDto>,
    },
    Pair {
        left: Box<ExprDto>,
        right: Box<ExprDto>,
    },
    Proj {
        index: u8,
        of: Box<ExprDto>,
    },
    IfZero {
        cond: Box<ExprDto>,
        then: Box<ExprDto>,
        otherwise: Box<ExprDto>,
    },
    Apply {
        func: Box<ExprDto>,
        arg: Box<ExprDto>,
    },
    Oracle {
        at: Box<ExprDto>,
    },
    Close {
        body: Box<ExprDto>,
        captures: Vec<ExprDto>,
    },
    SelfRef,
}

fn prim_of(name: &str) -> Result<PrimOp> {
    Ok(match name {
        "succ" => PrimOp::Succ,
        "pred" => PrimOp::Pred,
        "add" => PrimOp::Add,
        "mul" => PrimOp::Mul,
        "sub" => PrimOp::Sub,
        "eq" => PrimOp::Eq,
        "max" => PrimOp::Max,
        "lt" => PrimOp::Lt,
        other => bail!("unknown primitive {other:?}"),
    })
}

impl ExprDto {
    pub fn to_expr(&self) -> Result<CodeExpr> {
        Ok(match self {
            ExprDto::Arg => CodeExpr::Arg,
            ExprDto::Env { index } => CodeExpr::Env(*index),
            ExprDto::Num { value } => CodeExpr::Num(parse_nat(value)?),
            ExprDto::Prim { op, args } => {
                let op = prim_of(op)?;
                let args: Result<Vec<CodeExpr>> = args.iter().map(ExprDto::to_expr).collect();
                CodeExpr::Prim(op, args?)
            }
            ExprDto::Pair { left, right } => CodeExpr::pair_of(left.to_expr()?, right.to_expr()?),
            ExprDto::Proj { index, of } => {
                if *index > 1 {
                    bail!("projection index must be 0 or 1");
                }
                CodeExpr::Proj(*index, Box::new(of.to_expr()?))
            }
            ExprDto::IfZero {
                cond,
                then,
                otherwise,
            } => CodeExpr::if_zero(cond.to_expr()?, then.to_expr()?, otherwise.to_expr()?),
            ExprDto::Apply { func, arg } => CodeExpr::apply(func.to_expr()?, arg.to_expr()?),
            ExprDto::Oracle { at } => CodeExpr::oracle_at(at.to_expr()?),
            ExprDto::Close { body, captures } => {
                let caps: Result<Vec<CodeExpr>> = captures.iter().map(ExprDto::to_expr).collect();
                CodeExpr::Close(Box::new(body.to_expr()?), caps?)
            }
            ExprDto::SelfRef => CodeExpr::SelfRef,
        })
    }
}

/// Read a code from a file: an artifact, a serialized expression tree
/// (built into a one-argument program), or a bare decimal number.
pub fn load_code(path: &str) -> Result<Nat> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let trimmed = text.trim();
    if let Ok(artifact) = serde_json::from_str::<Artifact>(trimmed) {
        return parse_nat(&artifact.code);
    }
    if let Ok(expr) = serde_json::from_str::<ExprDto>(trimmed) {
        return Ok(build(expr.to_expr()?)?);
    }
    parse_nat(trimmed).context("file is neither an artifact, an expression tree, nor a number")
}

/// Inline oracle syntax `{k1:v1,k2:v2}`.
pub fn parse_oracle(text: &str) -> Result<Oracle> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| anyhow!("oracle must look like {{k:v,k:v}}"))?;
    let mut oracle = Oracle::empty();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("oracle entry {part:?} is not k:v"))?;
        oracle.insert(parse_nat(k)?, parse_nat(v)?);
    }
    Ok(oracle)
}

/// `0..4` (inclusive) or a comma-separated list.
pub fn parse_num_set(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse()?;
        let hi: u64 = hi.trim().parse()?;
        if lo > hi {
            bail!("empty range {text:?}");
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(Into::into))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_trees_roundtrip_to_codes() {
        let json = r#"{"node":"pair","left":{"node":"num","value":"1"},"right":{"node":"arg"}}"#;
        let dto: ExprDto = serde_json::from_str(json).unwrap();
        let code = build(dto.to_expr().unwrap()).unwrap();
        let got = goodman_core::codes::apply(&code, &Nat::from(9u32), &Oracle::empty(), 100);
        assert_eq!(
            got,
            goodman_core::codes::EvalResult::Value(goodman_core::codes::pairing::pair(
                &Nat::from(1u32),
                &Nat::from(9u32)
            ))
        );
    }

    #[test]
    fn inline_oracles_parse() {
        let p = parse_oracle("{1:2, 3:4}").unwrap();
        assert_eq!(p.get(&Nat::from(1u32)), Some(&Nat::from(2u32)));
        assert_eq!(p.len(), 2);
        assert!(parse_oracle("nope").is_err());
    }

    #[test]
    fn num_set_forms() {
        assert_eq!(parse_num_set("0..4").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(parse_num_set("1,5,9").unwrap(), vec![1, 5, 9]);
    }
}
