//! First-order logic over a vocabulary: concrete syntax, Tarskian
//! semantics, and exact Ehrenfeucht-Fraisse game solving.

mod eval;
mod game;
mod parse;

pub use eval::{evaluate, evaluate_sentence, EvalBudget};
pub use game::{ef_winner, GameBudget, Player};
pub use parse::parse;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::vocabulary::{RelId, Vocabulary};

pub type Var = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { rel: RelId, args: Vec<Var> },
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("relation {relation} has arity {want}, got {got} arguments")]
    Arity {
        relation: String,
        want: usize,
        got: usize,
    },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("evaluation budget exceeded")]
    BudgetExceeded,
    #[error("game solver budget exceeded ({0} positions)")]
    GameBudgetExceeded(u64),
    #[error("pinned tuples have different lengths")]
    PinLengthMismatch,
}

impl Formula {
    /// Maximum number of nested quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn free_variables(&self) -> HashSet<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut HashSet<Var>) {
            match f {
                Formula::Atom { args, .. } => {
                    for a in args {
                        if !bound.contains(a) {
                            out.insert(a.clone());
                        }
                    }
                }
                Formula::Eq(a, b) => {
                    for v in [a, b] {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => {
                    for g in gs {
                        walk(g, bound, out);
                    }
                }
                Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = HashSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Arity check against a vocabulary; parsing already enforces this for
    /// formulas built from text.
    pub fn check_arities(&self, vocab: &Vocabulary) -> Result<(), FoError> {
        match self {
            Formula::Atom { rel, args } => {
                let r = &vocab.relations[*rel];
                if r.arity != args.len() {
                    return Err(FoError::Arity {
                        relation: r.name.clone(),
                        want: r.arity,
                        got: args.len(),
                    });
                }
                Ok(())
            }
            Formula::Eq(..) => Ok(()),
            Formula::Not(f) => f.check_arities(vocab),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().try_for_each(|f| f.check_arities(vocab))
            }
            Formula::Implies(a, b) => {
                a.check_arities(vocab)?;
                b.check_arities(vocab)
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.check_arities(vocab),
        }
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> FormulaDisplay<'a> {
        FormulaDisplay { f: self, vocab }
    }
}

pub struct FormulaDisplay<'a> {
    f: &'a Formula,
    vocab: &'a Vocabulary,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atomic(f: &Formula) -> bool {
            matches!(f, Formula::Atom { .. } | Formula::Eq(..) | Formula::Not(_))
        }
        fn go(f: &Formula, vocab: &Vocabulary, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            match f {
                Formula::Atom { rel, args } => {
                    write!(out, "{}({})", vocab.relations[*rel].name, args.join(", "))
                }
                Formula::Eq(a, b) => write!(out, "{a} = {b}"),
                Formula::Not(g) => {
                    write!(out, "not ")?;
                    wrap(g, vocab, out)
                }
                Formula::And(gs) => join(gs, " and ", vocab, out),
                Formula::Or(gs) => join(gs, " or ", vocab, out),
                Formula::Implies(a, b) => {
                    wrap(a, vocab, out)?;
                    write!(out, " implies ")?;
                    wrap(b, vocab, out)
                }
                Formula::Exists(v, g) => {
                    write!(out, "exists {v}. ")?;
                    go(g, vocab, out)
                }
                Formula::Forall(v, g) => {
                    write!(out, "forall {v}. ")?;
                    go(g, vocab, out)
                }
            }
        }
        fn wrap(f: &Formula, vocab: &Vocabulary, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            if atomic(f) {
                go(f, vocab, out)
            } else {
                write!(out, "(")?;
                go(f, vocab, out)?;
                write!(out, ")")
            }
        }
        fn join(
            gs: &[Formula],
            sep: &str,
            vocab: &Vocabulary,
            out: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    write!(out, "{sep}")?;
                }
                wrap(g, vocab, out)?;
            }
            Ok(())
        }
        go(self.f, self.vocab, out)
    }
}

/// A systematic corpus of low-quantifier-rank sentences used to cross-check
/// the game solver against direct evaluation: every quantifier prefix over
/// `vars` variables combined with small matrices built from atom templates.
pub fn sentence_battery(vocab: &Arc<Vocabulary>, vars: usize) -> Vec<Formula> {
    let names: Vec<Var> = (0..vars).map(|i| format!("x{}", i + 1)).collect();
    let mut atoms: Vec<Formula> = Vec::new();
    for (rel, r) in vocab.relations.iter().enumerate() {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..r.arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..vars).map(move |v| {
                        let mut t2 = t.clone();
                        t2.push(v);
                        t2
                    })
                })
                .collect();
        }
        let mut seen = HashSet::new();
        for t in tuples {
            // dedup modulo the symmetry group: same orbit, same atom
            let mut orbit: Vec<Vec<usize>> = r
                .group
                .elements()
                .iter()
                .map(|g| g.apply(&t))
                .collect();
            orbit.sort();
            if seen.insert(orbit[0].clone()) {
                atoms.push(Formula::Atom {
                    rel,
                    args: t.iter().map(|&v| names[v].clone()).collect(),
                });
            }
        }
    }
    for i in 0..vars {
        for j in (i + 1)..vars {
            atoms.push(Formula::Eq(names[i].clone(), names[j].clone()));
        }
    }

    let mut matrices: Vec<Formula> = Vec::new();
    for a in &atoms {
        matrices.push(a.clone());
        matrices.push(Formula::Not(Box::new(a.clone())));
    }
    // all sign combinations over pairs; with existentials distributing over
    // disjunction this spans every matrix built from two atoms
    for (i, a) in atoms.iter().enumerate() {
        for b in atoms.iter().skip(i + 1) {
            for signs in 0..4u8 {
                let lit = |f: &Formula, neg: bool| {
                    if neg {
                        Formula::Not(Box::new(f.clone()))
                    } else {
                        f.clone()
                    }
                };
                let (la, lb) = (lit(a, signs & 1 != 0), lit(b, signs & 2 != 0));
                matrices.push(Formula::And(vec![la.clone(), lb.clone()]));
                matrices.push(Formula::Or(vec![la, lb]));
            }
        }
    }

    let mut out = Vec::new();
    for prefix in 0..(1u32 << vars) {
        for m in &matrices {
            let mut f = m.clone();
            for (i, name) in names.iter().enumerate().rev() {
                f = if prefix & (1 << i) != 0 {
                    Formula::Forall(name.clone(), Box::new(f))
                } else {
                    Formula::Exists(name.clone(), Box::new(f))
                };
            }
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocabulary::preset;

    #[test]
    fn quantifier_rank_examples() {
        let v = preset("graph").unwrap();
        assert_eq!(parse("E(x, y)", &v).unwrap().quantifier_rank(), 0);
        assert_eq!(
            parse("exists x. forall y. E(x,y)", &v)
                .unwrap()
                .quantifier_rank(),
            2
        );
        assert_eq!(
            parse("(exists x. E(x,x)) and (exists y. E(y,y))", &v)
                .unwrap()
                .quantifier_rank(),
            1
        );
    }

    #[test]
    fn battery_is_wellformed() {
        let v = preset("digraph").unwrap();
        let battery = sentence_battery(&v, 2);
        assert!(battery.len() > 20);
        for f in &battery {
            assert!(f.is_sentence());
            assert!(f.quantifier_rank() <= 2);
            f.check_arities(&v).unwrap();
        }
    }
}
