//! Five-array encodings of trivial graphs: a path of length `path_len` with a
//! complete graph attached at each end (`k_i` vertices of `K_{m_i}` joined to
//! the respective path endpoint).

use serde::de::Error as _;
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_proposition, ClassifyError, PropositionCheck};
use crate::graph::{Graph, MultipathSequence};

/// The decomposition `(m1, k1, path_len, k2, m2)` of a trivial connected
/// graph. Invariants: `m_i >= k_i >= 0` and `k_i > 0` whenever `m_i > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiveArray {
    pub m1: usize,
    pub k1: usize,
    pub path_len: usize,
    pub k2: usize,
    pub m2: usize,
}

impl FiveArray {
    pub fn new(
        m1: usize,
        k1: usize,
        path_len: usize,
        k2: usize,
        m2: usize,
    ) -> Result<Self, ClassifyError> {
        let f = FiveArray {
            m1,
            k1,
            path_len,
            k2,
            m2,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        for (m, k) in [(self.m1, self.k1), (self.m2, self.k2)] {
            if k > m {
                return Err(ClassifyError::InvalidFiveArray(format!(
                    "attachment count {k} exceeds clique size {m}"
                )));
            }
            if m > 0 && k == 0 {
                return Err(ClassifyError::InvalidFiveArray(format!(
                    "clique of size {m} must attach at least one vertex"
                )));
            }
        }
        Ok(())
    }

    pub fn total_vertices(&self) -> usize {
        self.path_len + 1 + self.m1 + self.m2
    }

    pub fn mirrored(&self) -> Self {
        FiveArray {
            m1: self.m2,
            k1: self.k2,
            path_len: self.path_len,
            k2: self.k1,
            m2: self.m1,
        }
    }

    pub fn as_tuple(&self) -> (usize, usize, usize, usize, usize) {
        (self.m1, self.k1, self.path_len, self.k2, self.m2)
    }
}

impl Serialize for FiveArray {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(5)?;
        t.serialize_element(&self.m1)?;
        t.serialize_element(&self.k1)?;
        t.serialize_element(&self.path_len)?;
        t.serialize_element(&self.k2)?;
        t.serialize_element(&self.m2)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for FiveArray {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [m1, k1, path_len, k2, m2] = <[usize; 5]>::deserialize(deserializer)?;
        FiveArray::new(m1, k1, path_len, k2, m2).map_err(D::Error::custom)
    }
}

/// Builds the graph a five-array describes. Vertices `0..=path_len` form the
/// path; the left clique follows with its first `k1` vertices adjacent to
/// path vertex 0, then the right clique with its first `k2` vertices adjacent
/// to the other path end.
pub fn graph_from_five_array(f: &FiveArray) -> Result<Graph, ClassifyError> {
    f.validate()?;
    let path_vertices = f.path_len + 1;
    let n = path_vertices + f.m1 + f.m2;
    let mut g = Graph::empty(n)?;
    for i in 0..f.path_len {
        g.set_edge(i, i + 1, true);
    }
    let left = path_vertices;
    for i in 0..f.m1 {
        for j in (i + 1)..f.m1 {
            g.set_edge(left + i, left + j, true);
        }
        if i < f.k1 {
            g.set_edge(left + i, 0, true);
        }
    }
    let right = path_vertices + f.m1;
    for i in 0..f.m2 {
        for j in (i + 1)..f.m2 {
            g.set_edge(right + i, right + j, true);
        }
        if i < f.k2 {
            g.set_edge(right + i, f.path_len, true);
        }
    }
    debug_assert!(g.is_connected());
    Ok(g)
}

/// A clique of one vertex attached to a path end is one more path vertex, and
/// a two-clique attached by one vertex is two more; folding those into the
/// path keeps the encoding unique.
fn collapse_side(m: usize, k: usize, path_len: &mut usize) -> (usize, usize) {
    match (m, k) {
        (1, 1) => {
            *path_len += 1;
            (0, 0)
        }
        (2, 1) => {
            *path_len += 2;
            (0, 0)
        }
        other => other,
    }
}

/// The canonical five-array of a multipath sequence that passes the structure
/// conditions.
///
/// Case mapping, with `k = (k_0, ..., k_m)`:
/// * `m <= 1`: the graph is complete, `(n-1, n-1, 0, 0, 0)`.
/// * `m = 2`: the singleton level anchors the path vertex; a singleton middle
///   gives two fully attached cliques, a singleton end gives one clique made
///   of the two remaining levels attached through the middle one.
/// * `m = 3`: orient so the level of size one is second from the top; the
///   bottom two levels form one clique attached through its upper layer, the
///   top level forms a fully attached clique.
/// * `m >= 4`: the bottom two and top two levels become the end cliques and
///   the interior levels (all singletons) become the path.
///
/// Degenerate cliques are then folded into the path and the result oriented
/// so the heavier `(m, k)` pair sits on the left.
pub fn five_array_from_sequence(seq: &MultipathSequence) -> Result<FiveArray, ClassifyError> {
    if let PropositionCheck::Violation(case) = check_proposition(seq) {
        return Err(ClassifyError::PropositionViolated(case));
    }
    let k = seq.counts();
    let m = seq.top_level();
    let mut raw = Vec::with_capacity(2);
    match m {
        0 | 1 => {
            let n = seq.total_vertices();
            raw.push(FiveArray {
                m1: n - 1,
                k1: n - 1,
                path_len: 0,
                k2: 0,
                m2: 0,
            });
        }
        2 => {
            if k[1] == 1 {
                raw.push(FiveArray {
                    m1: k[0],
                    k1: k[0],
                    path_len: 0,
                    k2: k[2],
                    m2: k[2],
                });
            } else {
                // An end level is the singleton; the other two levels are
                // mutually adjacent, hence one clique.
                let (mid, far) = if k[0] == 1 { (k[1], k[2]) } else { (k[1], k[0]) };
                raw.push(FiveArray {
                    m1: mid + far,
                    k1: mid,
                    path_len: 0,
                    k2: 0,
                    m2: 0,
                });
            }
        }
        3 => {
            // With both middle levels of size one the two readings give
            // different decompositions of the same graph; finalize both and
            // keep the smaller.
            if k[2] == 1 {
                raw.push(FiveArray {
                    m1: k[0] + k[1],
                    k1: k[1],
                    path_len: 0,
                    k2: k[3],
                    m2: k[3],
                });
            }
            if k[1] == 1 {
                raw.push(FiveArray {
                    m1: k[3] + k[2],
                    k1: k[2],
                    path_len: 0,
                    k2: k[0],
                    m2: k[0],
                });
            }
        }
        _ => raw.push(FiveArray {
            m1: k[0] + k[1],
            k1: k[1],
            path_len: m - 4,
            k2: k[m - 1],
            m2: k[m - 1] + k[m],
        }),
    }
    let f = raw
        .into_iter()
        .map(|candidate| {
            let mut path_len = candidate.path_len;
            let (m1, k1) = collapse_side(candidate.m1, candidate.k1, &mut path_len);
            let (m2, k2) = collapse_side(candidate.m2, candidate.k2, &mut path_len);
            if (m1, k1) >= (m2, k2) {
                FiveArray {
                    m1,
                    k1,
                    path_len,
                    k2,
                    m2,
                }
            } else {
                FiveArray {
                    m1: m2,
                    k1: k2,
                    path_len,
                    k2: k1,
                    m2: m1,
                }
            }
        })
        .min_by_key(FiveArray::as_tuple)
        .expect("at least one reading applies");
    debug_assert_eq!(f.total_vertices(), seq.total_vertices());
    f.validate()?;
    Ok(f)
}
