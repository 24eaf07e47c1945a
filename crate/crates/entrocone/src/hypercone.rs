//! Hypergraph min-cut realization of five-qubit entropy vectors.
//!
//! The five-vertex hypergraph carries all five 4-edges, ordered by the vertex
//! they omit (A first), followed by all ten 3-edges in lexicographic order.
//! Each of the fifteen independent entropies S_A..S_E, S_AB..S_DE equals the
//! total weight of the edges its designated cut crosses.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::entropy::EntropyVector;
use crate::error::{Error, Result};

const N5: usize = 5;
const FULL5: u64 = 0b11111;

/// Weighted hypergraph. `external` marks boundary vertices; the rest are bulk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub n_vertices: usize,
    pub edges: Vec<(u64, f64)>,
    pub external: u64,
}

/// Value of a min-cut search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinCut {
    pub weight: f64,
    pub side: u64,
    /// False when some edge weight is negative, in which case the minimum
    /// has no min-cut meaning.
    pub cut_semantic: bool,
}

impl Hypergraph {
    /// All vertices external. Each edge must touch at least two vertices.
    pub fn new(n_vertices: usize, edges: Vec<(u64, f64)>) -> Result<Self> {
        let full = (1u64 << n_vertices) - 1;
        for &(e, _) in &edges {
            if e.count_ones() < 2 || e & !full != 0 {
                return Err(Error::InvalidConfig(format!("edge {e:#b} is not a valid hyperedge")));
            }
        }
        Ok(Hypergraph {
            n_vertices,
            edges,
            external: full,
        })
    }

    pub fn with_external(mut self, external: u64) -> Self {
        self.external = external;
        self
    }

    fn full(&self) -> u64 {
        (1u64 << self.n_vertices) - 1
    }

    /// Total weight of edges with vertices on both sides of `side`.
    pub fn cut_weight(&self, side: u64) -> Result<f64> {
        let full = self.full();
        if side == 0 || side & full == full || side & !full != 0 {
            return Err(Error::TrivialCut(side));
        }
        Ok(self
            .edges
            .iter()
            .filter(|(e, _)| e & side != 0 && e & !side != 0)
            .map(|(_, w)| w)
            .sum())
    }

    /// Minimum cut weight over sides containing `region` and no other
    /// external vertex.
    pub fn min_cut_entropy(&self, region: u64) -> Result<MinCut> {
        if region == 0 || region & !self.external != 0 {
            return Err(Error::InvalidConfig(format!("region {region:#b} is not external")));
        }
        let bulk = self.full() & !self.external;
        let mut best: Option<MinCut> = None;
        let mut sub = bulk;
        loop {
            let side = region | sub;
            if side != self.full() {
                let w = self.cut_weight(side)?;
                if best.is_none_or(|b| w < b.weight) {
                    best = Some(MinCut {
                        weight: w,
                        side,
                        cut_semantic: true,
                    });
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & bulk;
        }
        let mut best = best.ok_or(Error::TrivialCut(region))?;
        best.cut_semantic = self.edges.iter().all(|&(_, w)| w >= 0.0);
        Ok(best)
    }
}

/// Vertex masks of the fifteen edges, in column order.
pub fn edges_5() -> Vec<u64> {
    let mut e: Vec<u64> = (0..N5).map(|v| FULL5 & !(1 << v)).collect();
    let mut triples = Vec::new();
    for a in 0..N5 {
        for b in a + 1..N5 {
            for c in b + 1..N5 {
                triples.push((1u64 << a) | (1 << b) | (1 << c));
            }
        }
    }
    e.extend(triples);
    e
}

/// Region masks of the fifteen designated cuts: singletons, then pairs in
/// lexicographic order.
pub fn regions_5() -> Vec<u64> {
    let mut r: Vec<u64> = (0..N5).map(|v| 1u64 << v).collect();
    for a in 0..N5 {
        for b in a + 1..N5 {
            r.push((1 << a) | (1 << b));
        }
    }
    r
}

/// 0/1 matrix whose (i, j) entry is 1 when edge j crosses the cut of region i.
pub fn incidence_matrix_5() -> [[u8; 15]; 15] {
    let mut m = [[0u8; 15]; 15];
    for (i, &r) in regions_5().iter().enumerate() {
        for (j, &e) in edges_5().iter().enumerate() {
            m[i][j] = u8::from(e & r != 0 && e & !r != 0);
        }
    }
    m
}

/// Solved edge weights for one entropy vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationResult {
    pub weights: Vec<f64>,
    /// Max absolute deviation of the designated-cut equations.
    pub residual: f64,
    pub all_nonneg: bool,
    /// Max absolute difference between the direct solve and [`closed_form_weights`].
    pub closed_form_deviation: f64,
}

fn targets(ev: &EntropyVector) -> Result<Vec<f64>> {
    regions_5().into_iter().map(|r| ev.get(r)).collect()
}

/// Closed-form inverse of the incidence system.
///
/// For the 4-edge omitting v:
/// w = ½ (Σ_{u≠v} S_u − S_v + Σ_{pairs ∋ v} S − Σ_{pairs ∌ v} S).
/// For the 3-edge whose complement is the pair p:
/// w = (Σ_pairs S − Σ_singles S − 6 S_p) / 6.
pub fn closed_form_weights(ev: &EntropyVector) -> Result<Vec<f64>> {
    let t = targets(ev)?;
    let regions = regions_5();
    let singles: f64 = t[..5].iter().sum();
    let pairs: f64 = t[5..].iter().sum();
    let mut w = Vec::with_capacity(15);
    for v in 0..N5 {
        let bit = 1u64 << v;
        let mut acc = singles - 2.0 * t[v];
        for (k, &r) in regions.iter().enumerate().skip(5) {
            acc += if r & bit != 0 { t[k] } else { -t[k] };
        }
        w.push(0.5 * acc);
    }
    for e in edges_5().into_iter().skip(5) {
        let p = FULL5 & !e;
        let k = regions.iter().position(|&r| r == p).expect("pair region");
        w.push((pairs - singles - 6.0 * t[k]) / 6.0);
    }
    Ok(w)
}

/// Solves the fifteen designated-cut equations for the edge weights.
///
/// `ev` must hold S for the five singletons and ten pairs of a five-party
/// pure state.
pub fn realize_5qubit(ev: &EntropyVector) -> Result<RealizationResult> {
    let t = targets(ev)?;
    let inc = incidence_matrix_5();
    let a = DMatrix::from_fn(15, 15, |i, j| inc[i][j] as f64);
    let b = DVector::from_vec(t.clone());
    let w = a.clone().lu().solve(&b).ok_or(Error::Singular)?;
    let residual = (&a * &w - &b).amax();
    let closed = closed_form_weights(ev)?;
    let closed_form_deviation = w
        .iter()
        .zip(&closed)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(RealizationResult {
        all_nonneg: w.iter().all(|&x| x >= -1e-12),
        weights: w.iter().copied().collect(),
        residual,
        closed_form_deviation,
    })
}

/// The realized five-vertex hypergraph for a weight vector.
pub fn hypergraph_5(weights: &[f64]) -> Hypergraph {
    Hypergraph::new(N5, edges_5().into_iter().zip(weights.iter().copied()).collect())
        .expect("fixed edge set is valid")
}
