//! Canonical forms by full permutation minimization, isomorphism testing,
//! and exhaustive enumeration of small connected graphs.
//!
//! Sizes here are tiny (certificates target 4- and 5-vertex graphs, sweeps
//! stop at 7 vertices), so the canonical form is the minimum upper-triangle
//! adjacency encoding over all vertex permutations. Correctness over scale.

use super::{Graph, GraphError};

/// Hard cap for permutation-minimized canonical forms.
pub const CANONICAL_MAX_N: usize = 10;

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

fn encode(g: &Graph, perm: &[usize]) -> u64 {
    let n = g.vertex_count();
    let len = n * (n - 1) / 2;
    let mut bits = 0u64;
    for u in 0..n {
        for v in (u + 1)..n {
            if g.adjacent(u, v) {
                let (a, b) = if perm[u] < perm[v] {
                    (perm[u], perm[v])
                } else {
                    (perm[v], perm[u])
                };
                bits |= 1 << (len - 1 - pair_index(n, a, b));
            }
        }
    }
    bits
}

fn decode(n: usize, bits: u64) -> Graph {
    let len = n * (n - 1) / 2;
    let mut g = Graph::empty(n).expect("n >= 1");
    for u in 0..n {
        for v in (u + 1)..n {
            if bits & (1 << (len - 1 - pair_index(n, u, v))) != 0 {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// Advances `perm` to its lexicographic successor; false once exhausted.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn check_size(g: &Graph) -> Result<usize, GraphError> {
    let n = g.vertex_count();
    if n > CANONICAL_MAX_N {
        return Err(GraphError::TooLarge(n, CANONICAL_MAX_N));
    }
    Ok(n)
}

/// Canonical upper-triangle bits: the minimum of [`encode`] over all vertex
/// permutations. Two graphs on the same vertex count are isomorphic exactly
/// when their canonical bits agree.
pub fn canonical_bits(g: &Graph) -> Result<u64, GraphError> {
    let n = check_size(g)?;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = encode(g, &perm);
    while next_permutation(&mut perm) {
        best = best.min(encode(g, &perm));
    }
    Ok(best)
}

/// Canonical form as a row-major upper-triangle bit string, e.g. `"1"` for
/// the single edge of `K2`.
pub fn canonical_form(g: &Graph) -> Result<String, GraphError> {
    let n = g.vertex_count();
    let bits = canonical_bits(g)?;
    let len = n * (n - 1) / 2;
    Ok((0..len)
        .map(|idx| {
            if bits & (1 << (len - 1 - idx)) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect())
}

/// True exactly when an adjacency-preserving bijection between the two vertex
/// sets exists.
pub fn isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    if g.vertex_count() != h.vertex_count() {
        return Ok(false);
    }
    if g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonical_bits(g)? == canonical_bits(h)?)
}

/// The lexicographically first isomorphism `g -> h` (as a vertex map), if any.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
    let n = check_size(g)?;
    check_size(h)?;
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ok = (0..n).all(|u| {
            ((u + 1)..n).all(|v| g.adjacent(u, v) == h.adjacent(perm[u], perm[v]))
        });
        if ok {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, for `1 <= n <= 7`, ordered by edge count then canonical bits.
///
/// Graphs are grown one vertex at a time with canonical deduplication at each
/// level; connectivity is filtered at the end because a disconnected
/// intermediate can still gain connecting vertices later.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 || n > 7 {
        return Err(GraphError::EnumerationRange(n));
    }
    let mut level: Vec<u64> = vec![0]; // the single-vertex graph
    for k in 2..=n {
        let mut next: Vec<u64> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for &bits in &level {
            let smaller = decode(k - 1, bits);
            for mask in 0u32..(1 << (k - 1)) {
                let mut g = Graph::empty(k)?;
                for u in 0..(k - 1) {
                    for v in (u + 1)..(k - 1) {
                        if smaller.adjacent(u, v) {
                            g.set_edge(u, v, true);
                        }
                    }
                    if mask & (1 << u) != 0 {
                        g.set_edge(u, k - 1, true);
                    }
                }
                let key = canonical_bits(&g)?;
                if seen.insert(key) {
                    next.push(key);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<Graph> = level
        .into_iter()
        .map(|bits| decode(n, bits))
        .filter(Graph::is_connected)
        .collect();
    out.sort_by_key(|g| (g.edge_count(), canonical_bits(g).expect("n <= 7")));
    Ok(out)
}
