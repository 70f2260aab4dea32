//! Jordan frames and Peirce-adapted orthonormal bases.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Element, JordanAlgebra, Model};
use crate::{Error, Result};

const FRAME_TOL: f64 = 1e-10;

/// A complete system of orthogonal primitive idempotents `c_1, …, c_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanFrame {
    pub idempotents: Vec<Element>,
}

/// Peirce block `V_st` with 0-based `s ≤ t`; `s == t` is `V_ss = ℝ c_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockLabel {
    pub s: usize,
    pub t: usize,
}

impl BlockLabel {
    pub fn is_diagonal(&self) -> bool {
        self.s == self.t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeirceBlock {
    pub label: BlockLabel,
    pub elements: Vec<Element>,
}

/// Orthonormal basis of `V` adapted to `V = ⊕_{s ≤ t} V_st`.
///
/// Ordering: the diagonal blocks `V_11, …, V_rr`, then the off-diagonal
/// blocks in lexicographic order. For the matrix kinds and the standard
/// frame this reproduces the algebra's own basis.
#[derive(Debug, Clone)]
pub struct PeirceBasis {
    pub frame: JordanFrame,
    pub blocks: Vec<PeirceBlock>,
}

impl PeirceBasis {
    /// `(block label, basis element)` pairs in basis order.
    pub fn flattened(&self) -> Vec<(BlockLabel, &Element)> {
        self.blocks
            .iter()
            .flat_map(|b| b.elements.iter().map(move |e| (b.label, e)))
            .collect()
    }

    pub fn labels(&self) -> Vec<BlockLabel> {
        self.flattened().into_iter().map(|(l, _)| l).collect()
    }

    pub fn block(&self, s: usize, t: usize) -> Option<&PeirceBlock> {
        self.blocks.iter().find(|b| b.label == BlockLabel { s, t })
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.elements.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Orthogonal matrix whose columns are the basis elements in algebra
    /// coordinates.
    pub fn change_of_basis(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self
            .flattened()
            .into_iter()
            .map(|(_, e)| e.coords.clone())
            .collect();
        DMatrix::from_columns(&cols)
    }
}

impl JordanAlgebra {
    /// Diagonal unit idempotents for the matrix kinds; `½(1, ±û)` for the
    /// spin factor with `û` the first unit vector of `E`.
    pub fn standard_frame(&self) -> JordanFrame {
        let idempotents = match self.model {
            Model::Matrix(_) => (0..self.rank).map(|s| self.basis_element(s)).collect(),
            Model::Spin(sp) => {
                let mut u = vec![0.0; sp.ambient];
                u[0] = 1.0;
                let plus = self.spin_element(0.5, &u.iter().map(|v| 0.5 * v).collect::<Vec<_>>());
                let minus = self.spin_element(0.5, &u.iter().map(|v| -0.5 * v).collect::<Vec<_>>());
                vec![plus.expect("spin frame"), minus.expect("spin frame")]
            }
        };
        JordanFrame { idempotents }
    }

    /// Checks `c_s² = c_s`, `c_s c_t = 0`, `tr c_s = 1` and `Σ c_s = e`.
    pub fn validate_frame(&self, frame: &JordanFrame) -> Result<()> {
        let cs = &frame.idempotents;
        if cs.len() != self.rank {
            return Err(Error::InvalidFrame(format!(
                "expected {} idempotents, got {}",
                self.rank,
                cs.len()
            )));
        }
        let mut sum = self.zero();
        for (s, c) in cs.iter().enumerate() {
            self.check(c)?;
            let sq = self.product(c, c)?;
            if sq.max_abs_diff(c) > FRAME_TOL {
                return Err(Error::InvalidFrame(format!(
                    "c_{} is not idempotent",
                    s + 1
                )));
            }
            let tr = self.trace(c)?;
            if (tr - 1.0).abs() > FRAME_TOL {
                return Err(Error::InvalidFrame(format!(
                    "tr(c_{}) = {tr}, expected 1",
                    s + 1
                )));
            }
            for (t, c2) in cs.iter().enumerate().skip(s + 1) {
                if self.product(c, c2)?.norm() > FRAME_TOL {
                    return Err(Error::InvalidFrame(format!(
                        "c_{} c_{} is not zero",
                        s + 1,
                        t + 1
                    )));
                }
            }
            sum = &sum + c;
        }
        if sum.max_abs_diff(&self.identity()) > FRAME_TOL {
            return Err(Error::InvalidFrame("idempotents do not sum to e".into()));
        }
        Ok(())
    }

    /// Peirce decomposition relative to `frame`.
    ///
    /// The blocks are the joint eigenspaces of the commuting family
    /// `{L(c_s)}`: `V_ss = V(c_s, 1)` and `V_st = V(c_s, ½) ∩ V(c_t, ½)`,
    /// extracted through the spectral projectors of each `L(c_s)` and then
    /// orthonormalized inside each block.
    pub fn peirce_basis(&self, frame: &JordanFrame) -> Result<PeirceBasis> {
        self.validate_frame(frame)?;
        let n = self.dim;
        let id = DMatrix::<f64>::identity(n, n);
        let ls: Vec<DMatrix<f64>> = frame
            .idempotents
            .iter()
            .map(|c| self.lmatrix(&c.coords))
            .collect();
        // L(c) has spectrum in {0, ½, 1}; the projectors are polynomials in L(c).
        let proj_one: Vec<DMatrix<f64>> = ls.iter().map(|l| l * (l * 2.0 - &id)).collect();
        let proj_half: Vec<DMatrix<f64>> = ls.iter().map(|l| l * (&id - l) * 4.0).collect();

        let mut blocks = Vec::new();
        for s in 0..self.rank {
            let mut v = extract_range(&proj_one[s], 1)
                .map_err(|e| Error::InvalidFrame(format!("V_{}{}: {e}", s + 1, s + 1)))?;
            // orient V_ss along c_s itself
            if v[0].dot(&frame.idempotents[s].coords) < 0.0 {
                v[0] = -v[0].clone();
            }
            blocks.push(PeirceBlock {
                label: BlockLabel { s, t: s },
                elements: v.into_iter().map(|c| self.element_from_vector(c)).collect(),
            });
        }
        for s in 0..self.rank {
            for t in (s + 1)..self.rank {
                let proj = &proj_half[s] * &proj_half[t];
                let v = extract_range(&proj, self.peirce_d)
                    .map_err(|e| Error::InvalidFrame(format!("V_{}{}: {e}", s + 1, t + 1)))?;
                blocks.push(PeirceBlock {
                    label: BlockLabel { s, t },
                    elements: v.into_iter().map(|c| self.element_from_vector(c)).collect(),
                });
            }
        }
        let basis = PeirceBasis {
            frame: frame.clone(),
            blocks,
        };
        if basis.len() != n {
            return Err(Error::InvalidFrame(format!(
                "Peirce blocks span {} dimensions, expected {n}",
                basis.len()
            )));
        }
        Ok(basis)
    }
}

/// Orthonormal basis of the range of a projector, by Gram–Schmidt over its
/// columns taken in coordinate order.
fn extract_range(
    proj: &DMatrix<f64>,
    expected: usize,
) -> std::result::Result<Vec<DVector<f64>>, String> {
    let rank = proj.trace();
    if (rank - expected as f64).abs() > 1e-8 {
        return Err(format!(
            "projector trace {rank}, expected dimension {expected}"
        ));
    }
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(expected);
    for j in 0..proj.ncols() {
        if out.len() == expected {
            break;
        }
        let mut v = proj.column(j).into_owned();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            let mut q = v / norm;
            // canonical sign: first significant coordinate positive
            if let Some(first) = q.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    q = -q;
                }
            }
            out.push(q.map(|x| if x.abs() < 1e-15 { 0.0 } else { x }));
        }
    }
    if out.len() != expected {
        return Err(format!(
            "found {} independent directions, expected {expected}",
            out.len()
        ));
    }
    Ok(out)
}
