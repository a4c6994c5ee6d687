use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::walk::ArcSpace;

/// Tolerance on the unit-norm invariant of [`State`].
pub const STATE_NORM_TOL: f64 = 1e-12;

/// A unit vector indexed by arcs.
///
/// Serialized as a JSON array of `[re, im]` pairs in arc order.
#[derive(Clone, Debug, PartialEq)]
pub struct State(DVector<Complex64>);

impl State {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<State> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(State(amplitudes))
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<State> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(State(amplitudes.unscale(norm)))
    }

    /// Wraps amplitudes produced by a unitary map of a unit state.
    pub(crate) fn from_raw(amplitudes: DVector<Complex64>) -> State {
        debug_assert!((amplitudes.norm() - 1.0).abs() < 1e-8);
        State(amplitudes)
    }

    pub fn from_real(amplitudes: &DVector<f64>) -> Result<State> {
        State::new(amplitudes.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<Complex64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `⟨self, other⟩ = Σ conj(self_i)·other_i`.
    pub fn inner(&self, other: &State) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.0.iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<State> {
        State::new(DVector::from_iterator(
            pairs.len(),
            pairs.iter().map(|&[re, im]| Complex64::new(re, im)),
        ))
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        State::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

/// `x_a = D_tᵀe_a / √k`: amplitude `1/√k` on every arc leaving `a`.
pub fn initial_state(arcs: &ArcSpace, a: usize) -> Result<State> {
    if a >= arcs.n() {
        return Err(Error::InvalidVertex {
            vertex: a,
            n: arcs.n(),
        });
    }
    let amp = 1.0 / (arcs.k() as f64).sqrt();
    let v = DVector::from_iterator(
        arcs.len(),
        arcs.arcs()
            .iter()
            .map(|&(tail, _)| Complex64::new(if tail == a { amp } else { 0.0 }, 0.0)),
    );
    State::new(v)
}

/// Entrywise `|x_i|²`.
pub fn arc_distribution(x: &State) -> Vec<f64> {
    x.0.iter().map(|z| z.norm_sqr()).collect()
}

/// `max_i | |x_i| − 1/√(nk) |`, zero exactly for flat states.
pub fn flatness_deficit(x: &State) -> f64 {
    let target = 1.0 / (x.len() as f64).sqrt();
    x.0.iter()
        .fold(0.0, |acc, z| acc.max((z.norm() - target).abs()))
}

/// `max_i |Im x_i|`.
pub fn realness_deficit(x: &State) -> f64 {
    x.0.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

/// Imaginary part of `U^t x_a` on a bipartite graph compared with the
/// prediction `sin(πt)·c(u)c(a) / (n√k)` on arc `(u, v)`, where `c` is the
/// ±1 colour class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryProfile {
    /// Predicted `|Im|` on every arc.
    pub expected_abs: f64,
    pub min_abs: f64,
    pub max_abs: f64,
    /// Largest deviation from the signed prediction.
    pub max_deviation: f64,
}

impl ImaginaryProfile {
    pub fn is_flat(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Bipartite imaginary-flatness check for a state evolved from `x_a` for
/// time `t`. Returns `None` for non-bipartite graphs.
pub fn imaginary_profile(
    g: &Graph,
    arcs: &ArcSpace,
    x: &State,
    a: usize,
    t: f64,
) -> Option<ImaginaryProfile> {
    let colors = g.color_class()?;
    let scale = 1.0 / (arcs.n() as f64 * (arcs.k() as f64).sqrt());
    let s = (std::f64::consts::PI * t).sin();
    let mut profile = ImaginaryProfile {
        expected_abs: s.abs() * scale,
        min_abs: f64::INFINITY,
        max_abs: 0.0,
        max_deviation: 0.0,
    };
    for (i, &(u, _)) in arcs.arcs().iter().enumerate() {
        let im = x.0[i].im;
        let predicted = s * scale * f64::from(colors[u] * colors[a]);
        profile.min_abs = profile.min_abs.min(im.abs());
        profile.max_abs = profile.max_abs.max(im.abs());
        profile.max_deviation = profile.max_deviation.max((im - predicted).abs());
    }
    Some(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::complete_graph;
    use crate::walk::build_arc_space;

    #[test]
    fn k4_initial_state() {
        let arcs = build_arc_space(&complete_graph(4).unwrap()).unwrap();
        let x = initial_state(&arcs, 0).unwrap();
        let nonzero: Vec<_> = x.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 3);
        for z in nonzero {
            assert!((z.re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        assert!((x.amplitudes().norm() - 1.0).abs() < 1e-15);
        let dt_x = arcs.tail_incidence() * x.amplitudes().map(|z| z.re);
        assert!((dt_x[0] - 3f64.sqrt()).abs() < 1e-15);
        assert!(dt_x.iter().skip(1).all(|&v| v == 0.0));
        assert!(initial_state(&arcs, 4).is_err());
    }

    #[test]
    fn distribution_and_deficits() {
        let arcs = build_arc_space(&complete_graph(4).unwrap()).unwrap();
        let x = initial_state(&arcs, 0).unwrap();
        let p = arc_distribution(&x);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15);
        // |1/√3 − 1/√12| = 1/√12
        assert!((flatness_deficit(&x) - 1.0 / 12f64.sqrt()).abs() < 1e-15);

        let flat = State::from_real(&DVector::from_fn(12, |i, _| {
            (if i % 3 == 0 { -1.0 } else { 1.0 }) / 12f64.sqrt()
        }))
        .unwrap();
        assert!(flatness_deficit(&flat) < 1e-15);
        assert!(arc_distribution(&flat)
            .iter()
            .all(|p| (p - 1.0 / 12.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_unit() {
        let v = DVector::from_element(3, Complex64::new(1.0, 0.0));
        assert!(matches!(State::new(v.clone()), Err(Error::NotUnitNorm(_))));
        assert!(State::normalized(v).is_ok());
        assert!(State::normalized(DVector::zeros(3)).is_err());
    }

    #[test]
    fn json_pairs() {
        let x = State::normalized(DVector::from_vec(vec![
            Complex64::new(0.3, -0.1),
            Complex64::new(-0.7, 0.2),
        ]))
        .unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert!(text.starts_with("[["));
        let back: State = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<State>("[[1.0,0.0],[1.0,0.0]]").is_err());
    }
}
