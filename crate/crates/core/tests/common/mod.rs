#![allow(dead_code)]

use arc_walk::graphs::{complete_graph, cycle_graph, petersen_graph, rook_graph, Graph};
use arc_walk::spectra::{eigendecompose_symmetric, SpectralDecomposition, DEFAULT_TAU_GROUP};
use arc_walk::walk::{build_arc_space, walk_spectrum, ArcSpace, WalkSpectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub struct Setup {
    pub g: Graph,
    pub d: SpectralDecomposition,
    pub arcs: ArcSpace,
    pub ws: WalkSpectrum,
}

pub fn setup(g: Graph) -> Setup {
    let d = eigendecompose_symmetric(&g, DEFAULT_TAU_GROUP).unwrap();
    let arcs = build_arc_space(&g).unwrap();
    let ws = walk_spectrum(&d, &arcs).unwrap();
    Setup { g, d, arcs, ws }
}

/// K4, C4, K5, Petersen, rook(4), rook(3).
pub fn test_graphs() -> Vec<Graph> {
    vec![
        complete_graph(4).unwrap(),
        cycle_graph(4).unwrap(),
        complete_graph(5).unwrap(),
        petersen_graph(),
        rook_graph(4).unwrap(),
        rook_graph(3).unwrap(),
    ]
}

pub fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Largest absolute row sum.
pub fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `U^t` by repeated multiplication.
pub fn dense_power(u: &DMatrix<f64>, t: u32) -> DMatrix<f64> {
    let mut p = DMatrix::identity(u.nrows(), u.ncols());
    for _ in 0..t {
        p = u * p;
    }
    p
}
