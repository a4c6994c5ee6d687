//! Regular graphs: construction, edge-list ingestion and strongly regular
//! parameter checks.
//!
//! Vertices are dense integers `0..n`. Adjacency matrices are kept as exact
//! integer matrices so that identities such as `A² = kI + aA + c(J − I − A)`
//! are checked without rounding.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph with cached structural flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    name: String,
    adjacency: DMatrix<i64>,
    degree: Option<usize>,
    connected: bool,
    color_class: Option<Vec<i8>>,
}

/// Parameters `(n, k, a, c)` of a strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: usize,
    pub k: usize,
    /// Common neighbours of two adjacent vertices.
    pub a: usize,
    /// Common neighbours of two distinct non-adjacent vertices.
    pub c: usize,
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.k, self.a, self.c)
    }
}

impl SrgParams {
    /// Parameters of the complementary graph.
    pub fn complement(&self) -> Option<SrgParams> {
        let SrgParams { n, k, a, c } = *self;
        let k_bar = n.checked_sub(k + 1)?;
        let a_bar = (n + c).checked_sub(2 + 2 * k)?;
        let c_bar = (n + a).checked_sub(2 * k)?;
        Some(SrgParams {
            n,
            k: k_bar,
            a: a_bar,
            c: c_bar,
        })
    }
}

/// Outcome of [`validate_srg`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "params")]
pub enum SrgVerdict {
    Srg(SrgParams),
    /// No two distinct vertices are non-adjacent, so `c` is undefined.
    Complete,
    NotSrg,
}

impl Graph {
    /// Builds a graph from a symmetric 01 adjacency matrix with zero diagonal.
    pub fn from_adjacency(name: impl Into<String>, adjacency: DMatrix<i64>) -> Result<Graph> {
        let n = adjacency.nrows();
        if adjacency.ncols() != n {
            return Err(Error::Dimension {
                expected: n,
                got: adjacency.ncols(),
            });
        }
        for i in 0..n {
            if adjacency[(i, i)] != 0 {
                return Err(Error::SelfLoop(i));
            }
            for j in 0..n {
                let v = adjacency[(i, j)];
                if v != 0 && v != 1 {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency entry ({i}, {j}) = {v} is not 0 or 1"
                    )));
                }
                if v != adjacency[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::from_checked(name.into(), adjacency))
    }

    fn from_checked(name: String, adjacency: DMatrix<i64>) -> Graph {
        let n = adjacency.nrows();
        let degrees: Vec<usize> = (0..n)
            .map(|i| adjacency.row(i).iter().sum::<i64>() as usize)
            .collect();
        let degree = match degrees.first() {
            Some(&k) if degrees.iter().all(|&d| d == k) => Some(k),
            None => Some(0),
            _ => None,
        };
        let (connected, color_class) = traverse(&adjacency);
        Graph {
            name,
            adjacency,
            degree,
            connected,
            color_class,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<i64> {
        &self.adjacency
    }

    pub fn adjacency_f64(&self) -> DMatrix<f64> {
        self.adjacency.map(|v| v as f64)
    }

    /// Common degree, present only when the graph is regular.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn is_regular(&self) -> bool {
        self.degree.is_some()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_bipartite(&self) -> bool {
        self.color_class.is_some()
    }

    /// A proper 2-colouring with values ±1 when the graph is bipartite.
    pub fn color_class(&self) -> Option<&[i8]> {
        self.color_class.as_deref()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[(u, v)] == 1
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&v| self.adjacency[(u, v)] == 1)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&v| v == 1).count() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..n {
            for v in (u + 1)..n {
                if self.adjacency[(u, v)] == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Degree, or [`Error::NotRegular`].
    pub fn require_regular(&self) -> Result<usize> {
        self.degree.ok_or(Error::NotRegular)
    }

    pub fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex,
                n: self.n(),
            })
        }
    }
}

/// BFS over all components: connectivity and a 2-colouring witness.
fn traverse(adjacency: &DMatrix<i64>) -> (bool, Option<Vec<i8>>) {
    let n = adjacency.nrows();
    let mut color = vec![0i8; n];
    let mut bipartite = true;
    let mut components = 0;
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        components += 1;
        color[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if adjacency[(u, v)] != 1 {
                    continue;
                }
                if color[v] == 0 {
                    color[v] = -color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    bipartite = false;
                }
            }
        }
    }
    (components <= 1, bipartite.then_some(color))
}

/// Builds a graph on `n` vertices from an edge list. Duplicate edges, in
/// either orientation, are collapsed.
pub fn from_edge_list(edges: &[(usize, usize)], n: usize) -> Result<Graph> {
    let mut adjacency = DMatrix::<i64>::zeros(n, n);
    let mut duplicates = 0usize;
    for &(u, v) in edges {
        for index in [u, v] {
            if index >= n {
                return Err(Error::VertexOutOfRange {
                    index,
                    n,
                    edge: (u, v),
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if adjacency[(u, v)] == 1 {
            duplicates += 1;
        }
        adjacency[(u, v)] = 1;
        adjacency[(v, u)] = 1;
    }
    if duplicates > 0 {
        log::info!("collapsed {duplicates} duplicate edge(s)");
    }
    Ok(Graph::from_checked(format!("edges(n={n})"), adjacency))
}

/// Parses the edge-list text format: a header line `n m` followed by `m`
/// lines `u v` with 0-based vertices. Lines starting with `#` and blank lines
/// are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = parse_pair(line, line_no)?;
        match header {
            None => header = Some(fields),
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("more than the declared {m} edges"),
                    });
                }
                let (u, v) = fields;
                if u >= n || v >= n {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("vertex out of range in edge ({u}, {v}) for n = {n}"),
                    });
                }
                if u == v {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("self-loop at vertex {u}"),
                    });
                }
                edges.push(fields);
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: last_line,
        message: "missing header line \"n m\"".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("declared {m} edges but found {}", edges.len()),
        });
    }
    from_edge_list(&edges, n)
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected two integers, got {line:?}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            message: format!("trailing tokens in {line:?}"),
        });
    }
    Ok((a, b))
}

/// The complete graph `K_n`.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    let adjacency = DMatrix::from_fn(n, n, |i, j| i64::from(i != j));
    Ok(Graph::from_checked(format!("K{n}"), adjacency))
}

/// The cycle `C_n`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(from_edge_list(&edges, n)?.with_name(format!("C{n}")))
}

/// The `q × q` rook's graph: vertex `(r, c)` is `q·r + c`, adjacent when the
/// two cells share a row or a column.
pub fn rook_graph(q: usize) -> Result<Graph> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "rook graph needs q >= 2, got {q}"
        )));
    }
    let n = q * q;
    let adjacency = DMatrix::from_fn(n, n, |i, j| {
        let (ri, ci) = (i / q, i % q);
        let (rj, cj) = (j / q, j % q);
        i64::from(i != j && (ri == rj || ci == cj))
    });
    Ok(Graph::from_checked(format!("rook({q})"), adjacency))
}

pub fn petersen_graph() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    from_edge_list(&edges, 10)
        .expect("static edge list")
        .with_name("petersen")
}

/// Builds the graph with adjacency `(J − δH)/2` from a symmetric regular
/// Hadamard matrix `H` whose diagonal is constantly `δ ∈ {±1}`.
pub fn srg_from_regular_hadamard(h: &DMatrix<i64>) -> Result<Graph> {
    let n = h.nrows();
    if h.ncols() != n || n == 0 {
        return Err(Error::NotHadamard(format!(
            "expected a non-empty square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if let Some(&v) = h.iter().find(|&&v| v != 1 && v != -1) {
        return Err(Error::NotHadamard(format!("entry {v} is not ±1")));
    }
    if h != &h.transpose() {
        return Err(Error::NotHadamard("matrix is not symmetric".into()));
    }
    let delta = h[(0, 0)];
    if (0..n).any(|i| h[(i, i)] != delta) {
        return Err(Error::NotHadamard("diagonal is not constant".into()));
    }
    let row_sum: i64 = h.row(0).iter().sum();
    if (0..n).any(|i| h.row(i).iter().sum::<i64>() != row_sum) {
        return Err(Error::NotHadamard("row sums are not constant".into()));
    }
    if h * h.transpose() != DMatrix::<i64>::identity(n, n) * (n as i64) {
        return Err(Error::NotHadamard("H·Hᵀ ≠ nI".into()));
    }
    let adjacency = h.map(|v| (1 - delta * v) / 2);
    Ok(Graph::from_checked(format!("hadamard-srg({n})"), adjacency))
}

/// Checks the strongly regular identity `A² = kI + aA + c(J − I − A)` in
/// exact integer arithmetic.
pub fn validate_srg(g: &Graph) -> Result<SrgVerdict> {
    let k = g.require_regular()?;
    let n = g.n();
    let adj = g.adjacency();
    let square = adj * adj;

    let mut a_param = None;
    let mut c_param = None;
    for u in 0..n {
        for v in (u + 1)..n {
            let slot = if adj[(u, v)] == 1 {
                &mut a_param
            } else {
                &mut c_param
            };
            if slot.is_none() {
                *slot = Some(square[(u, v)]);
            }
        }
    }
    let Some(c) = c_param else {
        return Ok(SrgVerdict::Complete);
    };
    let a = a_param.unwrap_or(0);
    let ki = k as i64;
    for u in 0..n {
        for v in 0..n {
            let expected = if u == v {
                ki
            } else if adj[(u, v)] == 1 {
                a
            } else {
                c
            };
            if square[(u, v)] != expected {
                return Ok(SrgVerdict::NotSrg);
            }
        }
    }
    Ok(SrgVerdict::Srg(SrgParams {
        n,
        k,
        a: a as usize,
        c: c as usize,
    }))
}

/// The complement graph with adjacency `J − I − A`.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let adjacency = DMatrix::from_fn(
        n,
        n,
        |i, j| {
            if i == j {
                0
            } else {
                1 - g.adjacency[(i, j)]
            }
        },
    );
    let name = match g
        .name
        .strip_prefix("complement(")
        .and_then(|s| s.strip_suffix(')'))
    {
        Some(inner) => inner.to_string(),
        None => format!("complement({})", g.name),
    };
    Graph::from_checked(name, adjacency)
}

/// Vertices in the connected component of `start`.
pub fn component_of(g: &Graph, start: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_from_edges() {
        let g = from_edge_list(&[(0, 1), (1, 2), (2, 0)], 3).unwrap();
        assert_eq!(g.degree(), Some(2));
        assert!(g.is_connected());
        assert!(!g.is_bipartite());
    }

    #[test]
    fn four_cycle_is_bipartite() {
        let g = from_edge_list(&[(0, 1), (1, 2), (2, 3), (3, 0)], 4).unwrap();
        assert_eq!(g.degree(), Some(2));
        let colors = g.color_class().unwrap();
        assert_eq!(colors[0], colors[2]);
        assert_eq!(colors[1], colors[3]);
        assert_ne!(colors[0], colors[1]);
    }

    #[test]
    fn single_edge_on_four_vertices_is_disconnected() {
        let g = from_edge_list(&[(0, 1)], 4).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.degree(), None);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            from_edge_list(&[(0, 4)], 4),
            Err(Error::VertexOutOfRange {
                index: 4,
                n: 4,
                edge: (0, 4)
            })
        );
        assert_eq!(from_edge_list(&[(2, 2)], 4), Err(Error::SelfLoop(2)));
    }

    #[test]
    fn duplicates_collapse() {
        let g = from_edge_list(&[(0, 1), (1, 0), (0, 1), (1, 2)], 3).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn complete_graphs() {
        let k4 = complete_graph(4).unwrap();
        assert_eq!(k4.degree(), Some(3));
        assert_eq!(k4.n() * 3, 12);
        let k2 = complete_graph(2).unwrap();
        assert!(k2.is_bipartite());
        let k5 = complete_graph(5).unwrap();
        assert_eq!(k5.degree(), Some(4));
        assert!(!k5.is_bipartite());
        assert!(complete_graph(1).is_err());
    }

    #[test]
    fn rook_graphs() {
        let r4 = rook_graph(4).unwrap();
        assert_eq!(
            validate_srg(&r4).unwrap(),
            SrgVerdict::Srg(SrgParams {
                n: 16,
                k: 6,
                a: 2,
                c: 2
            })
        );
        let r3 = rook_graph(3).unwrap();
        assert_eq!(
            validate_srg(&r3).unwrap(),
            SrgVerdict::Srg(SrgParams {
                n: 9,
                k: 4,
                a: 1,
                c: 2
            })
        );
        let r2 = rook_graph(2).unwrap();
        assert!(r2.is_bipartite());
        assert_eq!(r2.degree(), Some(2));
        assert_eq!(r2.edge_count(), 4);
        assert!(rook_graph(1).is_err());
    }

    #[test]
    fn petersen_and_complete_verdicts() {
        assert_eq!(
            validate_srg(&petersen_graph()).unwrap(),
            SrgVerdict::Srg(SrgParams {
                n: 10,
                k: 3,
                a: 0,
                c: 1
            })
        );
        assert_eq!(
            validate_srg(&complete_graph(4).unwrap()).unwrap(),
            SrgVerdict::Complete
        );
        assert_eq!(
            validate_srg(&cycle_graph(6).unwrap()).unwrap(),
            SrgVerdict::NotSrg
        );
        let path = from_edge_list(&[(0, 1), (1, 2)], 3).unwrap();
        assert_eq!(validate_srg(&path), Err(Error::NotRegular));
    }

    #[test]
    fn complement_parameters() {
        let r4 = rook_graph(4).unwrap();
        let c = complement(&r4);
        let expected = SrgParams {
            n: 16,
            k: 9,
            a: 4,
            c: 6,
        };
        assert_eq!(validate_srg(&c).unwrap(), SrgVerdict::Srg(expected));
        assert_eq!(
            SrgParams {
                n: 16,
                k: 6,
                a: 2,
                c: 2
            }
            .complement(),
            Some(expected)
        );
        assert_eq!(complement(&c), r4);

        let empty = complement(&complete_graph(4).unwrap());
        assert_eq!(empty.edge_count(), 0);
        assert!(!empty.is_connected());
    }

    #[test]
    fn hadamard_order_four_gives_k4() {
        let h = DMatrix::from_fn(4, 4, |i, j| if i == j { -1 } else { 1 });
        let g = srg_from_regular_hadamard(&h).unwrap();
        assert_eq!(g.adjacency(), complete_graph(4).unwrap().adjacency());
    }

    #[test]
    fn hadamard_order_sixteen_gives_srg() {
        let h4 = DMatrix::from_fn(4, 4, |i, j| if i == j { -1i64 } else { 1 });
        let h16 = h4.kronecker(&h4);
        let g = srg_from_regular_hadamard(&h16).unwrap();
        assert_eq!(
            validate_srg(&g).unwrap(),
            SrgVerdict::Srg(SrgParams {
                n: 16,
                k: 6,
                a: 2,
                c: 2
            })
        );
    }

    #[test]
    fn hadamard_mixed_diagonal_rejected() {
        let mut h = DMatrix::from_fn(4, 4, |i, j| if i == j { -1i64 } else { 1 });
        h[(0, 0)] = 1;
        assert!(matches!(
            srg_from_regular_hadamard(&h),
            Err(Error::NotHadamard(_))
        ));
        let nonsym = DMatrix::from_row_slice(2, 2, &[1i64, 1, -1, 1]);
        assert!(matches!(
            srg_from_regular_hadamard(&nonsym),
            Err(Error::NotHadamard(_))
        ));
    }

    #[test]
    fn parse_edge_list_format() {
        let text = "# triangle\n3 3\n0 1\n1 2\n\n# closing edge\n2 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.degree(), Some(2));

        let err = parse_edge_list("3 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_edge_list("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_edge_list("3 1\n0 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
