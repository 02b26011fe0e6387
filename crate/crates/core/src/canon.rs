//! Canonical labeling for small hypergraphs by refinement plus backtracking.
//!
//! Intended for structures with at most a few dozen vertices (cycle shapes,
//! test corpora); the search is exponential in the worst case.

use std::collections::HashMap;

use crate::structure::Hypergraph;
use crate::vocabulary::VertexId;

/// A relabeling-invariant encoding: relation-sorted edge lists written in
/// the canonical vertex order, together with vertex colors.
pub type CanonicalForm = Vec<u8>;

/// Canonical form of `h` with optional vertex colors (colors are compared
/// as opaque u64 values and must themselves be relabeling-invariant).
pub fn canonical_form(h: &Hypergraph, colors: Option<&HashMap<VertexId, u64>>) -> CanonicalForm {
    let n = h.vertex_count();
    let verts: Vec<VertexId> = h.vertices().to_vec();
    let color_of = |v: VertexId| -> u64 { colors.and_then(|c| c.get(&v).copied()).unwrap_or(0) };

    let mut best: Option<CanonicalForm> = None;
    let mut assignment: Vec<Option<usize>> = vec![None; n]; // vertex idx -> label
    search(
        h,
        &verts,
        &color_of,
        &mut assignment,
        0,
        &mut best,
    );
    best.unwrap_or_default()
}

/// Number of automorphisms of `(h, colors)`.
pub fn automorphism_count(h: &Hypergraph, colors: Option<&HashMap<VertexId, u64>>) -> u64 {
    let verts: Vec<VertexId> = h.vertices().to_vec();
    let n = verts.len();
    if n == 0 {
        return 1;
    }
    let color_of = |v: VertexId| -> u64 { colors.and_then(|c| c.get(&v).copied()).unwrap_or(0) };
    // Group vertices by invariant; automorphisms permute within groups.
    let inv: Vec<(u64, Vec<usize>)> = verts
        .iter()
        .map(|&v| (color_of(v), degree_profile(h, v)))
        .map(|(c, d)| (c ^ hash_profile(&d), vec![]))
        .collect();
    let _ = inv;
    let mut count = 0u64;
    let mut mapping: Vec<Option<usize>> = vec![None; n];
    count_autos(h, &verts, &color_of, &mut mapping, 0, &mut count);
    count
}

fn degree_profile(h: &Hypergraph, v: VertexId) -> Vec<(usize, usize, usize)> {
    // (relation, position multiset hash, count) per incident edge kind
    let mut prof: Vec<(usize, usize, usize)> = Vec::new();
    for (rel, edge) in h.incident_edges(v) {
        let positions: usize = edge
            .iter()
            .enumerate()
            .filter(|(_, &u)| u == v)
            .map(|(i, _)| 1 << i)
            .sum();
        prof.push((rel, positions, 1));
    }
    prof.sort_unstable();
    prof
}

fn hash_profile(p: &[(usize, usize, usize)]) -> u64 {
    let mut acc: u64 = 0xcbf29ce484222325;
    for &(a, b, c) in p {
        for x in [a as u64, b as u64, c as u64] {
            acc ^= x.wrapping_add(0x9e3779b97f4a7c15);
            acc = acc.wrapping_mul(0x100000001b3);
        }
    }
    acc
}

fn encode(h: &Hypergraph, verts: &[VertexId], label: &[Option<usize>], color_of: &dyn Fn(VertexId) -> u64) -> CanonicalForm {
    let pos: HashMap<VertexId, usize> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, label[i].unwrap()))
        .collect();
    let mut out = Vec::new();
    let mut by_label: Vec<(usize, u64)> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (label[i].unwrap(), color_of(v)))
        .collect();
    by_label.sort_unstable();
    for (_, c) in by_label {
        out.extend_from_slice(&c.to_be_bytes());
    }
    for rel in 0..h.relation_count() {
        let mut edges: Vec<Vec<u8>> = h
            .edges(rel)
            .iter()
            .map(|e| {
                let tuple: Vec<VertexId> = e.iter().map(|v| pos[v] as VertexId).collect();
                let canon = h
                    .vocab()
                    .canonical_edge(rel, &tuple)
                    .expect("arity")
                    .expect("stored edges never excluded");
                let mut bytes = vec![rel as u8];
                for v in canon.iter() {
                    bytes.extend_from_slice(&v.to_be_bytes());
                }
                bytes
            })
            .collect();
        edges.sort();
        for e in edges {
            out.extend_from_slice(&e);
        }
    }
    out
}

fn search(
    h: &Hypergraph,
    verts: &[VertexId],
    color_of: &dyn Fn(VertexId) -> u64,
    assignment: &mut Vec<Option<usize>>,
    next_label: usize,
    best: &mut Option<CanonicalForm>,
) {
    let n = verts.len();
    if next_label == n {
        let form = encode(h, verts, assignment, color_of);
        match best {
            Some(b) if *b <= form => {}
            _ => *best = Some(form),
        }
        return;
    }
    // Candidate ordering: group by (color, degree profile) so equivalent
    // vertices are tried in a stable order; prune by partial invariant.
    let mut candidates: Vec<usize> = (0..n).filter(|&i| assignment[i].is_none()).collect();
    candidates.sort_by_key(|&i| (color_of(verts[i]), degree_profile(h, verts[i])));
    let mut tried: Vec<(u64, Vec<(usize, usize, usize)>, Vec<Option<usize>>)> = Vec::new();
    for i in candidates {
        let key = (
            color_of(verts[i]),
            degree_profile(h, verts[i]),
            neighbor_labels(h, verts, assignment, verts[i]),
        );
        if tried.iter().any(|t| t.0 == key.0 && t.1 == key.1 && t.2 == key.2) {
            continue; // symmetric to an already-tried choice at this level
        }
        tried.push(key);
        assignment[i] = Some(next_label);
        search(h, verts, color_of, assignment, next_label + 1, best);
        assignment[i] = None;
    }
}

fn neighbor_labels(
    h: &Hypergraph,
    verts: &[VertexId],
    assignment: &[Option<usize>],
    v: VertexId,
) -> Vec<Option<usize>> {
    let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut labels: Vec<Option<usize>> = Vec::new();
    for (_, edge) in h.incident_edges(v) {
        for &u in edge.iter() {
            labels.push(assignment[pos[&u]]);
        }
    }
    labels.sort_unstable();
    labels
}

fn count_autos(
    h: &Hypergraph,
    verts: &[VertexId],
    color_of: &dyn Fn(VertexId) -> u64,
    mapping: &mut Vec<Option<usize>>,
    depth: usize,
    count: &mut u64,
) {
    let n = verts.len();
    if depth == n {
        *count += 1;
        return;
    }
    let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    for target in 0..n {
        if mapping.iter().any(|m| *m == Some(target)) {
            continue;
        }
        if color_of(verts[depth]) != color_of(verts[target]) {
            continue;
        }
        mapping[depth] = Some(target);
        if partial_ok(h, verts, &pos, mapping, depth) {
            count_autos(h, verts, color_of, mapping, depth + 1, count);
        }
        mapping[depth] = None;
    }
}

/// Checks that all edges fully inside the mapped prefix are preserved both ways.
fn partial_ok(
    h: &Hypergraph,
    verts: &[VertexId],
    pos: &HashMap<VertexId, usize>,
    mapping: &[Option<usize>],
    depth: usize,
) -> bool {
    for rel in 0..h.relation_count() {
        for edge in h.edges(rel) {
            if edge.iter().all(|u| pos[u] <= depth && mapping[pos[u]].is_some()) {
                let image: Vec<VertexId> = edge
                    .iter()
                    .map(|u| verts[mapping[pos[u]].unwrap()])
                    .collect();
                if !h.has_edge_tuple(rel, &image) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::HypergraphBuilder;
    use crate::vocabulary::preset;

    #[test]
    fn triangle_automorphisms() {
        let vocab = preset("graph").unwrap();
        let mut b = HypergraphBuilder::new(vocab);
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        let h = b.freeze();
        assert_eq!(automorphism_count(&h, None), 6);
    }

    #[test]
    fn relabeled_structures_share_canonical_form() {
        let vocab = preset("digraph").unwrap();
        let mut b1 = HypergraphBuilder::new(vocab.clone());
        b1.add_edge_by_name("E", &[1, 2]).unwrap();
        b1.add_edge_by_name("E", &[2, 3]).unwrap();
        let h1 = b1.freeze();
        let mut b2 = HypergraphBuilder::new(vocab.clone());
        b2.add_edge_by_name("E", &[7, 5]).unwrap();
        b2.add_edge_by_name("E", &[5, 9]).unwrap();
        let h2 = b2.freeze();
        assert_eq!(canonical_form(&h1, None), canonical_form(&h2, None));

        let mut b3 = HypergraphBuilder::new(vocab);
        b3.add_edge_by_name("E", &[2, 1]).unwrap();
        b3.add_edge_by_name("E", &[2, 3]).unwrap();
        let h3 = b3.freeze();
        assert_ne!(canonical_form(&h1, None), canonical_form(&h3, None));
    }

    #[test]
    fn colored_forms_distinguish_colorings() {
        let vocab = preset("graph").unwrap();
        let mut b = HypergraphBuilder::new(vocab);
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        let h = b.freeze();
        let mut c1 = HashMap::new();
        c1.insert(1, 10u64);
        c1.insert(2, 20u64);
        let mut c2 = HashMap::new();
        c2.insert(1, 20u64);
        c2.insert(2, 10u64);
        let mut c3 = HashMap::new();
        c3.insert(1, 10u64);
        c3.insert(2, 10u64);
        assert_eq!(
            canonical_form(&h, Some(&c1)),
            canonical_form(&h, Some(&c2))
        );
        assert_ne!(
            canonical_form(&h, Some(&c1)),
            canonical_form(&h, Some(&c3))
        );
        assert_eq!(automorphism_count(&h, Some(&c3)), 2);
        assert_eq!(automorphism_count(&h, Some(&c1)), 1);
    }
}
