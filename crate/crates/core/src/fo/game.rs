//! Exact minimax solver for the k-round (distance-)Ehrenfeucht-Fraisse game
//! with memoized positions. Only the winner is computed, no strategy.

use std::collections::HashMap;

use super::FoError;
use crate::structure::Hypergraph;
use crate::vocabulary::VertexId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Duplicator,
    Spoiler,
}

#[derive(Clone, Copy, Debug)]
pub struct GameBudget {
    /// Upper bound on (|V1|*|V2|)^k accepted without refusal.
    pub positions: u64,
    /// Upper bound on solver calls actually made.
    pub calls: u64,
}

impl Default for GameBudget {
    fn default() -> Self {
        GameBudget {
            positions: 100_000_000,
            calls: 50_000_000,
        }
    }
}

/// Winner of the k-round EF game on the pinned structures. With `distance`
/// set, the win condition additionally requires all pairwise distances
/// among pinned and played vertices to agree.
pub fn ef_winner(
    h1: &Hypergraph,
    pins1: &[VertexId],
    h2: &Hypergraph,
    pins2: &[VertexId],
    rounds: usize,
    distance: bool,
    budget: GameBudget,
) -> Result<Player, FoError> {
    if pins1.len() != pins2.len() {
        return Err(FoError::PinLengthMismatch);
    }
    let per_round = (h1.vertex_count() as u64).saturating_mul(h2.vertex_count() as u64);
    let mut positions: u64 = 1;
    for _ in 0..rounds {
        positions = positions.saturating_mul(per_round.max(1));
        if positions > budget.positions {
            return Err(FoError::GameBudgetExceeded(positions));
        }
    }

    let mut solver = Solver {
        h1,
        h2,
        dist1: distance.then(|| all_pairs(h1)),
        dist2: distance.then(|| all_pairs(h2)),
        memo: HashMap::new(),
        calls_left: budget.calls,
    };

    // initial position must already be a partial isomorphism
    if !solver.initial_ok(pins1, pins2) {
        return Ok(Player::Spoiler);
    }
    let win = solver.duplicator_wins(&mut pins1.to_vec(), &mut pins2.to_vec(), rounds)?;
    Ok(if win { Player::Duplicator } else { Player::Spoiler })
}

fn all_pairs(h: &Hypergraph) -> HashMap<(VertexId, VertexId), u32> {
    let mut out = HashMap::new();
    for &v in h.vertices() {
        let reach = h.neighborhood(&[v], usize::MAX >> 1).unwrap();
        for &u in &reach {
            out.insert((v, u), h.distance(v, u).unwrap().unwrap());
        }
    }
    out
}

struct Solver<'a> {
    h1: &'a Hypergraph,
    h2: &'a Hypergraph,
    dist1: Option<HashMap<(VertexId, VertexId), u32>>,
    dist2: Option<HashMap<(VertexId, VertexId), u32>>,
    memo: HashMap<(Vec<VertexId>, Vec<VertexId>, usize), bool>,
    calls_left: u64,
}

impl Solver<'_> {
    fn initial_ok(&self, v: &[VertexId], u: &[VertexId]) -> bool {
        for i in 0..v.len() {
            for j in 0..v.len() {
                if (v[i] == v[j]) != (u[i] == u[j]) {
                    return false;
                }
                if !self.distance_match(v[i], v[j], u[i], u[j]) {
                    return false;
                }
            }
        }
        // all atoms over the pinned vertices must agree
        for rel in 0..self.h1.relation_count() {
            let arity = self.h1.vocab().relations[rel].arity;
            let mut idx = vec![0usize; arity];
            loop {
                let t1: Vec<VertexId> = idx.iter().map(|&i| v[i]).collect();
                let t2: Vec<VertexId> = idx.iter().map(|&i| u[i]).collect();
                if self.h1.has_edge_tuple(rel, &t1) != self.h2.has_edge_tuple(rel, &t2) {
                    return false;
                }
                if !odometer(&mut idx, v.len()) {
                    break;
                }
            }
            if v.is_empty() {
                break;
            }
        }
        true
    }

    fn distance_match(&self, a1: VertexId, b1: VertexId, a2: VertexId, b2: VertexId) -> bool {
        match (&self.dist1, &self.dist2) {
            (Some(d1), Some(d2)) => d1.get(&(a1, b1)) == d2.get(&(a2, b2)),
            _ => true,
        }
    }

    /// Legality of appending (x, y) to an already-valid position.
    fn extend_ok(&self, v: &[VertexId], u: &[VertexId], x: VertexId, y: VertexId) -> bool {
        for i in 0..v.len() {
            if (v[i] == x) != (u[i] == y) {
                return false;
            }
            if !self.distance_match(v[i], x, u[i], y) {
                return false;
            }
        }
        // atoms involving the new vertex
        let len = v.len();
        for rel in 0..self.h1.relation_count() {
            let arity = self.h1.vocab().relations[rel].arity;
            let mut idx = vec![0usize; arity];
            loop {
                if idx.iter().any(|&i| i == len) {
                    let t1: Vec<VertexId> =
                        idx.iter().map(|&i| if i == len { x } else { v[i] }).collect();
                    let t2: Vec<VertexId> =
                        idx.iter().map(|&i| if i == len { y } else { u[i] }).collect();
                    if self.h1.has_edge_tuple(rel, &t1) != self.h2.has_edge_tuple(rel, &t2) {
                        return false;
                    }
                }
                if !odometer(&mut idx, len + 1) {
                    break;
                }
            }
        }
        true
    }

    fn duplicator_wins(
        &mut self,
        v: &mut Vec<VertexId>,
        u: &mut Vec<VertexId>,
        rounds: usize,
    ) -> Result<bool, FoError> {
        if rounds == 0 {
            return Ok(true);
        }
        if let Some(&cached) = self.memo.get(&(v.clone(), u.clone(), rounds)) {
            return Ok(cached);
        }
        if self.calls_left == 0 {
            return Err(FoError::GameBudgetExceeded(self.memo.len() as u64));
        }
        self.calls_left -= 1;

        let mut result = true;
        // Spoiler picks a side and a vertex; Duplicator must answer.
        'outer: for side in 0..2 {
            let (spoiler_verts, dup_verts) = if side == 0 {
                (self.h1.vertices().to_vec(), self.h2.vertices().to_vec())
            } else {
                (self.h2.vertices().to_vec(), self.h1.vertices().to_vec())
            };
            for x in spoiler_verts {
                let mut answered = false;
                for &y in &dup_verts {
                    let ok = if side == 0 {
                        self.extend_ok(v, u, x, y)
                    } else {
                        self.extend_ok(v, u, y, x)
                    };
                    if !ok {
                        continue;
                    }
                    let (a, b) = if side == 0 { (x, y) } else { (y, x) };
                    v.push(a);
                    u.push(b);
                    let win = self.duplicator_wins(v, u, rounds - 1)?;
                    v.pop();
                    u.pop();
                    if win {
                        answered = true;
                        break;
                    }
                }
                if !answered {
                    result = false;
                    break 'outer;
                }
            }
        }
        self.memo.insert((v.clone(), u.clone(), rounds), result);
        Ok(result)
    }
}

/// Advances a mixed-radix counter; false when it wraps to all zeros.
fn odometer(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}
