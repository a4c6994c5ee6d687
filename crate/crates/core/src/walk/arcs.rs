use nalgebra::DMatrix;

use crate::error::Result;
use crate::graphs::Graph;

/// Arcs of a regular graph with their incidence structure.
///
/// Arcs are ordered lexicographically by `(tail, head)`. `tail` and `head`
/// are the `n × nk` incidence matrices `D_t` and `D_h`; `reversal[i]` is the
/// index of the reverse of arc `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcSpace {
    n: usize,
    k: usize,
    arcs: Vec<(usize, usize)>,
    tail: DMatrix<f64>,
    head: DMatrix<f64>,
    reversal: Vec<usize>,
}

impl ArcSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of arcs, `nk`.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, i: usize) -> (usize, usize) {
        self.arcs[i]
    }

    pub fn index_of(&self, tail: usize, head: usize) -> Option<usize> {
        self.arcs.binary_search(&(tail, head)).ok()
    }

    /// `D_t`, with `(D_t)_{v,(a,b)} = [v = a]`.
    pub fn tail_incidence(&self) -> &DMatrix<f64> {
        &self.tail
    }

    /// `D_h`, with `(D_h)_{v,(a,b)} = [v = b]`.
    pub fn head_incidence(&self) -> &DMatrix<f64> {
        &self.head
    }

    pub fn reversal(&self) -> &[usize] {
        &self.reversal
    }

    pub fn reversal_matrix(&self) -> DMatrix<f64> {
        let m = self.len();
        DMatrix::from_fn(m, m, |i, j| f64::from(u8::from(self.reversal[i] == j)))
    }

    /// Checks `D_t D_tᵀ = D_h D_hᵀ = kI`, `D_t D_hᵀ = D_h D_tᵀ = A`,
    /// `R² = I` and `D_t R = D_h`. All entries are small integers, so the
    /// comparison is exact.
    pub fn identities_hold(&self, g: &Graph) -> bool {
        let k_i = DMatrix::<f64>::identity(self.n, self.n) * self.k as f64;
        let a = g.adjacency_f64();
        let r = self.reversal_matrix();
        let tt = &self.tail * self.tail.transpose();
        let hh = &self.head * self.head.transpose();
        let th = &self.tail * self.head.transpose();
        let ht = &self.head * self.tail.transpose();
        tt == k_i
            && hh == k_i
            && th == a
            && ht == a
            && &r * &r == DMatrix::identity(self.len(), self.len())
            && &self.tail * &r == self.head
            && self.len() == self.n * self.k
    }
}

/// Builds the arc space of a regular graph.
pub fn build_arc_space(g: &Graph) -> Result<ArcSpace> {
    let k = g.require_regular()?;
    let n = g.n();
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| g.neighbors(u).map(move |v| (u, v)))
        .collect();
    let m = arcs.len();
    let mut tail = DMatrix::<f64>::zeros(n, m);
    let mut head = DMatrix::<f64>::zeros(n, m);
    for (i, &(u, v)) in arcs.iter().enumerate() {
        tail[(u, i)] = 1.0;
        head[(v, i)] = 1.0;
    }
    let reversal = arcs
        .iter()
        .map(|&(u, v)| arcs.binary_search(&(v, u)).expect("adjacency is symmetric"))
        .collect();
    Ok(ArcSpace {
        n,
        k,
        arcs,
        tail,
        head,
        reversal,
    })
}

/// `U = R(2/k · D_tᵀD_t − I)`, the arc-reversal walk with Grover coin.
pub fn transition_matrix(arcs: &ArcSpace) -> DMatrix<f64> {
    let m = arcs.len();
    let scale = 2.0 / arcs.k as f64;
    let coin = arcs.tail.transpose() * &arcs.tail * scale - DMatrix::<f64>::identity(m, m);
    DMatrix::from_fn(m, m, |i, j| coin[(arcs.reversal[i], j)])
}
