//! Tarskian evaluation over a finite structure. Quantifier loops restrict
//! their range to provable witness candidates (vertices co-occurring with
//! already-bound vertices in a required positive atom) whenever the formula
//! shape allows, which keeps sentence checks near-linear on sparse inputs.

use std::cell::Cell;
use std::collections::HashMap;

use super::{FoError, Formula, Var};
use crate::structure::Hypergraph;
use crate::vocabulary::VertexId;

/// Shared countdown over quantifier iterations.
pub struct EvalBudget(Cell<u64>);

impl EvalBudget {
    pub fn new(steps: u64) -> Self {
        EvalBudget(Cell::new(steps))
    }

    pub fn unlimited() -> Self {
        EvalBudget(Cell::new(u64::MAX))
    }

    fn spend(&self, amount: u64) -> Result<(), FoError> {
        let left = self.0.get();
        if left < amount {
            return Err(FoError::BudgetExceeded);
        }
        self.0.set(left - amount);
        Ok(())
    }
}

pub fn evaluate(
    h: &Hypergraph,
    f: &Formula,
    assignment: &HashMap<Var, VertexId>,
    budget: &EvalBudget,
) -> Result<bool, FoError> {
    let mut env = assignment.clone();
    eval(h, f, &mut env, budget)
}

pub fn evaluate_sentence(h: &Hypergraph, f: &Formula, budget: &EvalBudget) -> Result<bool, FoError> {
    let mut env = HashMap::new();
    eval(h, f, &mut env, budget)
}

fn eval(
    h: &Hypergraph,
    f: &Formula,
    env: &mut HashMap<Var, VertexId>,
    budget: &EvalBudget,
) -> Result<bool, FoError> {
    match f {
        Formula::Atom { rel, args } => {
            let mut tuple = Vec::with_capacity(args.len());
            for a in args {
                tuple.push(
                    *env.get(a)
                        .ok_or_else(|| FoError::UnboundVariable(a.clone()))?,
                );
            }
            Ok(h.has_edge_tuple(*rel, &tuple))
        }
        Formula::Eq(a, b) => {
            let va = *env
                .get(a)
                .ok_or_else(|| FoError::UnboundVariable(a.clone()))?;
            let vb = *env
                .get(b)
                .ok_or_else(|| FoError::UnboundVariable(b.clone()))?;
            Ok(va == vb)
        }
        Formula::Not(g) => Ok(!eval(h, g, env, budget)?),
        Formula::And(gs) => {
            for g in gs {
                if !eval(h, g, env, budget)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval(h, g, env, budget)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => {
            if !eval(h, a, env, budget)? {
                return Ok(true);
            }
            eval(h, b, env, budget)
        }
        Formula::Exists(v, g) => {
            let shadowed = env.get(v).copied();
            let domain = candidates(h, g, v, env, true);
            let result = scan(h, g, v, domain, env, budget, true)?;
            restore(env, v, shadowed);
            Ok(result)
        }
        Formula::Forall(v, g) => {
            let shadowed = env.get(v).copied();
            // only candidate witnesses of the negation can refute the forall
            let domain = candidates(h, g, v, env, false);
            let result = scan(h, g, v, domain, env, budget, false)?;
            restore(env, v, shadowed);
            Ok(result)
        }
    }
}

fn restore(env: &mut HashMap<Var, VertexId>, v: &Var, shadowed: Option<VertexId>) {
    match shadowed {
        Some(old) => {
            env.insert(v.clone(), old);
        }
        None => {
            env.remove(v);
        }
    }
}

/// Existential scan (`witness_means = true`) or universal scan over the
/// candidate domain; `None` means the full vertex set.
fn scan(
    h: &Hypergraph,
    g: &Formula,
    v: &Var,
    domain: Option<Vec<VertexId>>,
    env: &mut HashMap<Var, VertexId>,
    budget: &EvalBudget,
    witness_means: bool,
) -> Result<bool, FoError> {
    let full;
    let domain: &[VertexId] = match &domain {
        Some(d) => d,
        None => {
            full = h.vertices().to_vec();
            &full
        }
    };
    budget.spend(domain.len() as u64 + 1)?;
    for &u in domain {
        env.insert(v.clone(), u);
        let val = eval(h, g, env, budget)?;
        if val == witness_means {
            return Ok(witness_means);
        }
    }
    Ok(!witness_means)
}

/// A sound superset of the witnesses of `f` (when `polarity`) or of `not f`
/// (when `!polarity`) for variable `v`, or `None` when no restriction can
/// be proven. Soundness: any vertex making the target true must satisfy
/// some positive atom mentioning `v`, hence co-occur in an edge of that
/// relation (with a bound vertex when the atom has one).
fn candidates(
    h: &Hypergraph,
    f: &Formula,
    v: &Var,
    env: &HashMap<Var, VertexId>,
    polarity: bool,
) -> Option<Vec<VertexId>> {
    let mut out = collect(h, f, v, env, polarity)?;
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn collect(
    h: &Hypergraph,
    f: &Formula,
    v: &Var,
    env: &HashMap<Var, VertexId>,
    polarity: bool,
) -> Option<Vec<VertexId>> {
    match (f, polarity) {
        (Formula::Atom { rel, args }, true) => {
            if !args.iter().any(|a| a == v) {
                return None;
            }
            // prefer an already-bound co-argument: the witness must share an
            // edge of this relation with it
            if let Some(b) = args
                .iter()
                .filter(|a| *a != v)
                .find_map(|a| env.get(a).copied())
            {
                let mut out = Vec::new();
                for (r, e) in h.incident_edges(b) {
                    if r == *rel {
                        out.extend(e.iter().copied());
                    }
                }
                return Some(out);
            }
            let mut out = Vec::new();
            for e in h.edges(*rel) {
                out.extend(e.iter().copied());
            }
            Some(out)
        }
        (Formula::Eq(a, b), true) => {
            if a == v && b == v {
                return None;
            }
            if a != v && b != v {
                // truth independent of v: no restriction can be claimed
                return None;
            }
            let other = if a == v { b } else { a };
            env.get(other).map(|&u| vec![u])
        }
        // negated atoms and inequalities restrict nothing
        (Formula::Atom { .. }, false) | (Formula::Eq(..), false) => None,
        (Formula::Not(g), pol) => collect(h, g, v, env, !pol),
        (Formula::And(gs), true) | (Formula::Or(gs), false) => {
            // a witness must pass every part: any single restriction works
            let mut best: Option<Vec<VertexId>> = None;
            for g in gs {
                if let Some(c) = collect(h, g, v, env, polarity) {
                    if best.as_ref().map_or(true, |b| c.len() < b.len()) {
                        best = Some(c);
                    }
                }
            }
            best
        }
        (Formula::And(gs), false) | (Formula::Or(gs), true) => {
            // a witness may come through any part: need all restrictions
            let mut out = Vec::new();
            for g in gs {
                out.extend(collect(h, g, v, env, polarity)?);
            }
            Some(out)
        }
        (Formula::Implies(a, b), pol) => {
            let rewritten = Formula::Or(vec![
                Formula::Not(Box::new((**a).clone())),
                (**b).clone(),
            ]);
            collect(h, &rewritten, v, env, pol)
        }
        (Formula::Exists(w, g), pol) | (Formula::Forall(w, g), pol) => {
            if w == v {
                // inner binder shadows v; the subformula cannot constrain it
                None
            } else {
                collect(h, g, v, env, pol)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::parse;
    use crate::structure::HypergraphBuilder;
    use crate::vocabulary::preset;

    fn eval_sentence(h: &Hypergraph, text: &str) -> bool {
        let f = parse(text, h.vocab()).unwrap();
        evaluate_sentence(h, &f, &EvalBudget::unlimited()).unwrap()
    }

    #[test]
    fn triangle_satisfies_edge_sentence() {
        let v = preset("graph").unwrap();
        let mut b = HypergraphBuilder::new(v);
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        let h = b.freeze();
        assert!(eval_sentence(&h, "exists x. exists y. E(x,y)"));
        assert!(!eval_sentence(&h, "exists x. E(x,x)"));
        assert!(eval_sentence(&h, "forall x. exists y. E(x,y)"));
    }

    #[test]
    fn empty_domain_has_no_witnesses() {
        let v = preset("graph").unwrap();
        let h = HypergraphBuilder::new(v).freeze();
        assert!(!eval_sentence(&h, "exists x. x = x"));
        assert!(eval_sentence(&h, "forall x. E(x,x)"));
    }

    #[test]
    fn symmetry_axiom_via_canonical_storage() {
        let v = preset("graph").unwrap();
        let mut b = HypergraphBuilder::new(v);
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        let h = b.freeze();
        let f = parse("E(y, x)", h.vocab()).unwrap();
        let mut env = HashMap::new();
        env.insert("x".to_string(), 1);
        env.insert("y".to_string(), 2);
        assert!(evaluate(&h, &f, &env, &EvalBudget::unlimited()).unwrap());
        let g = parse("E(x, z)", h.vocab()).unwrap();
        assert!(matches!(
            evaluate(&h, &g, &env, &EvalBudget::unlimited()),
            Err(FoError::UnboundVariable(_))
        ));
    }

    /// The guided scan must agree with an unguided reference on a battery
    /// of random small structures and sentences.
    #[test]
    fn guided_matches_naive() {
        use rand::{Rng, SeedableRng};
        let vocab = preset("digraph").unwrap();
        let battery = crate::fo::sentence_battery(&vocab, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.gen_range(1..=5u32);
            let mut b = HypergraphBuilder::new(vocab.clone());
            b.add_vertices(1..=n);
            for u in 1..=n {
                for w in 1..=n {
                    if u != w && rng.gen_bool(0.3) {
                        b.add_edge_by_name("E", &[u, w]).unwrap();
                    }
                }
            }
            let h = b.freeze();
            for f in battery.iter().step_by(7) {
                let fast = evaluate_sentence(&h, f, &EvalBudget::unlimited()).unwrap();
                let slow = naive(&h, f, &mut HashMap::new());
                assert_eq!(fast, slow, "{}", f.display(h.vocab()));
            }
        }
    }

    fn naive(h: &Hypergraph, f: &Formula, env: &mut HashMap<Var, VertexId>) -> bool {
        match f {
            Formula::Atom { rel, args } => {
                let tuple: Vec<VertexId> = args.iter().map(|a| env[a]).collect();
                h.has_edge_tuple(*rel, &tuple)
            }
            Formula::Eq(a, b) => env[a] == env[b],
            Formula::Not(g) => !naive(h, g, env),
            Formula::And(gs) => gs.iter().all(|g| naive(h, g, env)),
            Formula::Or(gs) => gs.iter().any(|g| naive(h, g, env)),
            Formula::Implies(a, b) => !naive(h, a, env) || naive(h, b, env),
            Formula::Exists(v, g) => {
                let old = env.get(v).copied();
                let r = h.vertices().iter().any(|&u| {
                    env.insert(v.clone(), u);
                    naive(h, g, env)
                });
                restore(env, v, old);
                r
            }
            Formula::Forall(v, g) => {
                let old = env.get(v).copied();
                let r = h.vertices().iter().all(|&u| {
                    env.insert(v.clone(), u);
                    naive(h, g, env)
                });
                restore(env, v, old);
                r
            }
        }
    }
}
