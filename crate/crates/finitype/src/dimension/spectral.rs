//! Certified spectral radii of nonnegative matrices.

use num_rational::BigRational;
use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{precision_bits, Bounds};
use crate::error::{Error, Result};
use crate::numberfield::FieldElement;
use crate::transitions::TransitionMatrix;

/// Default relative width targeted by [`spectral_radius`].
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Enclosure of a spectral radius, exact when it equals a diagonal entry of
/// a triangular block.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRadius {
    pub bounds: Bounds,
    pub exact: Option<FieldElement>,
}

impl SpectralRadius {
    pub fn is_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(FieldElement::is_zero)
    }
}

/// `sp(M)` with the default tolerance and precision.
pub fn spectral_radius(m: &TransitionMatrix) -> Result<SpectralRadius> {
    spectral_radius_with(m, DEFAULT_TOLERANCE, precision_bits())
}

/// `sp(M)` for a square nonnegative matrix.
///
/// The matrix is split into irreducible diagonal blocks. A block of size one
/// contributes its entry exactly; a larger block is bracketed by the
/// Collatz–Wielandt quotients `(Bx)_i / x_i` of a floating point Perron
/// vector `x`, evaluated exactly in the field. If the reported width exceeds
/// `tolerance · hi` the enclosure is still valid, just wider than asked.
pub fn spectral_radius_with(
    m: &TransitionMatrix,
    tolerance: f64,
    bits: u32,
) -> Result<SpectralRadius> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            left_cols: m.cols(),
            right_rows: m.rows(),
        });
    }
    let n = m.rows();
    let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for i in 0..n {
        for j in 0..n {
            if !m.get(i, j).is_zero() {
                g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
            }
        }
    }
    let mut exact_best: Option<FieldElement> = None;
    let mut block_bounds: Vec<Bounds> = Vec::new();
    for comp in tarjan_scc(&g) {
        let idx: Vec<usize> = comp.into_iter().map(NodeIndex::index).collect();
        if idx.len() == 1 {
            let d = m.get(idx[0], idx[0]).clone();
            exact_best = Some(match exact_best {
                None => d,
                Some(e) => e.max_value(d),
            });
        } else {
            block_bounds.push(irreducible_block(m, &idx, tolerance, bits));
        }
    }
    let exact_bounds = exact_best.as_ref().map(|e| Bounds::of(e, bits));
    let mut bounds = exact_bounds.unwrap_or(Bounds::point(0.0));
    for b in &block_bounds {
        bounds = Bounds {
            lo: bounds.lo.max(b.lo),
            hi: bounds.hi.max(b.hi),
        };
    }
    let exact = match (&exact_best, &exact_bounds) {
        (Some(e), Some(eb)) if block_bounds.iter().all(|b| b.hi < eb.lo) => Some(e.clone()),
        (Some(e), _) if block_bounds.is_empty() => Some(e.clone()),
        _ => None,
    };
    if let (Some(_), Some(eb)) = (&exact, exact_bounds) {
        bounds = eb;
    }
    Ok(SpectralRadius { bounds, exact })
}

fn irreducible_block(m: &TransitionMatrix, idx: &[usize], tolerance: f64, bits: u32) -> Bounds {
    let k = idx.len();
    let block: Vec<Vec<f64>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| m.get(i, j).to_f64()).collect())
        .collect();
    let field = m.get(idx[0], idx[0]).field().clone();
    let mut x = perron_vector(&block);
    let mut best = Bounds {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    for _round in 0..3 {
        let xs: Vec<BigRational> = x
            .iter()
            .map(|&v| BigRational::from_float(v).expect("finite Perron entry"))
            .collect();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (row, &i) in idx.iter().enumerate() {
            let mut acc = field.zero();
            for (col, &j) in idx.iter().enumerate() {
                let e = m.get(i, j);
                if !e.is_zero() {
                    acc = acc + e.scale(&xs[col]);
                }
            }
            let q = acc.scale(&(BigRational::from_integer(1.into()) / &xs[row]));
            let enc = q.to_enclosure(bits);
            lo = lo.min(enc.lo_f64());
            hi = hi.max(enc.hi_f64());
        }
        if lo > best.lo {
            best.lo = lo;
        }
        if hi < best.hi {
            best.hi = hi;
        }
        if best.hi - best.lo <= tolerance * best.hi {
            break;
        }
        // one more power step in floating point
        let y: Vec<f64> = (0..k)
            .map(|r| (0..k).map(|c| block[r][c] * x[c]).sum())
            .collect();
        let top = y.iter().cloned().fold(0.0, f64::max);
        x = y.iter().map(|v| (v / top).max(f64::MIN_POSITIVE)).collect();
    }
    best
}

/// Positive right Perron vector of an irreducible nonnegative matrix, by
/// repeated squaring of `M/s + I`.
fn perron_vector(block: &[Vec<f64>]) -> Vec<f64> {
    let k = block.len();
    let s = block
        .iter()
        .map(|row| row.iter().sum::<f64>())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| block[i][j] / s + if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..64 {
        let mut sq = vec![vec![0.0; k]; k];
        for i in 0..k {
            for (&ail, row) in a[i].iter().zip(&a) {
                if ail == 0.0 {
                    continue;
                }
                for (out, &alj) in sq[i].iter_mut().zip(row) {
                    *out += ail * alj;
                }
            }
        }
        let top = sq.iter().flatten().cloned().fold(0.0, f64::max);
        a = sq
            .into_iter()
            .map(|row| row.into_iter().map(|v| v / top).collect())
            .collect();
    }
    let x: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let top = x.iter().cloned().fold(0.0, f64::max);
    x.into_iter()
        .map(|v| (v / top).max(f64::MIN_POSITIVE))
        .collect()
}

/// Floating point estimate of `sp(M)`, for ranking candidates before
/// certifying them.
pub fn spectral_radius_estimate(m: &[Vec<f64>]) -> f64 {
    let k = m.len();
    if k == 0 || m.iter().flatten().all(|&v| v == 0.0) {
        return 0.0;
    }
    let x = perron_vector(m);
    let mx: f64 = (0..k)
        .map(|r| (0..k).map(|c| m[r][c] * x[c]).sum::<f64>())
        .sum();
    let sx: f64 = x.iter().sum();
    if sx.is_zero() {
        0.0
    } else {
        mx / sx
    }
}
