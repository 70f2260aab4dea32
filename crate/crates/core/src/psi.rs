//! The operator `Ψ` on `F = L_s(V)` and the splitting `F = F₁ ⊕ F₂`.
//!
//! `Ψ` is the symmetric endomorphism of `F` with `Ψ(y ⊗ y) = P(y)`. It is
//! materialized as a dense `N × N` matrix, `N = n(n+1)/2`, over the
//! orthonormal basis of `F` built from a Peirce-adapted basis `(e_i)` of `V`:
//!
//! ```text
//! f_ℓ = e_i ⊗ e_i                       (i = 1..n)
//! f_ℓ = (e_i ⊗ e_j + e_j ⊗ e_i)/√2      (i < j)
//! ```
//!
//! On these, `Ψ(e_i ⊗ e_i) = P(e_i)` and, by polarization,
//! `Ψ(e_i ⊗ e_j + e_j ⊗ e_i) = 2[L(e_i)L(e_j) + L(e_j)L(e_i) − L(e_i e_j)]`.
//! Its eigenvalues are `1` on `F₁` and `−d'` on `F₂`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraTag, BlockLabel, Element, JordanAlgebra, JordanFrame, PeirceBasis};
use crate::endo::{outer_self, QuadraticForm, SymEndo};
use crate::{Error, Result};

/// Eigenvalues farther than this from `{1, −d'}` signal a broken kernel.
pub const EIGEN_TOL: f64 = 1e-9;
/// Allowed distance of a projector trace from an integer.
pub const RANK_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct PsiOperator {
    tag: AlgebraTag,
    rank: usize,
    peirce_d: usize,
    peirce: PeirceBasis,
    change: DMatrix<f64>,
    basis_f: Vec<(usize, usize)>,
    psi_mat: DMatrix<f64>,
}

/// Builds `Ψ` over the Peirce basis of the standard frame.
pub fn build_psi(algebra: &JordanAlgebra) -> Result<PsiOperator> {
    build_psi_with_frame(algebra, &algebra.standard_frame())
}

pub fn build_psi_with_frame(algebra: &JordanAlgebra, frame: &JordanFrame) -> Result<PsiOperator> {
    let peirce = algebra.peirce_basis(frame)?;
    let q = peirce.change_of_basis();
    let qt = q.transpose();
    let n = algebra.dim();

    let cols: Vec<DVector<f64>> = (0..n).map(|i| q.column(i).into_owned()).collect();
    // L(b_i) expressed in the Peirce basis
    let rot: Vec<DMatrix<f64>> = cols.iter().map(|b| &qt * algebra.lmatrix(b) * &q).collect();
    let rot_l_of = |v: &DVector<f64>| &qt * algebra.lmatrix(v) * &q;

    let basis_f = f_basis_pairs(n);
    let big_n = basis_f.len();
    let mut psi_mat = DMatrix::zeros(big_n, big_n);
    for (l, &(i, j)) in basis_f.iter().enumerate() {
        let image = if i == j {
            let sq = algebra.product_vec(&cols[i], &cols[i]);
            &rot[i] * &rot[i] * 2.0 - rot_l_of(&sq)
        } else {
            let prod = algebra.product_vec(&cols[i], &cols[j]);
            (&rot[i] * &rot[j] + &rot[j] * &rot[i] - rot_l_of(&prod)) * (2.0 / SQRT_2)
        };
        psi_mat.set_column(l, &svec(&image, &basis_f));
    }

    Ok(PsiOperator {
        tag: algebra.tag(),
        rank: algebra.rank(),
        peirce_d: algebra.peirce_d(),
        peirce,
        change: q,
        basis_f,
        psi_mat,
    })
}

/// Index pairs of the `F` basis: all `(i, i)`, then `(i, j)` with `i < j`.
fn f_basis_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// Coordinates of a symmetric matrix in the orthonormal `F` basis.
fn svec(m: &DMatrix<f64>, pairs: &[(usize, usize)]) -> DVector<f64> {
    DVector::from_iterator(
        pairs.len(),
        pairs.iter().map(|&(i, j)| {
            if i == j {
                m[(i, i)]
            } else {
                SQRT_2 * 0.5 * (m[(i, j)] + m[(j, i)])
            }
        }),
    )
}

fn unsvec(v: &DVector<f64>, n: usize, pairs: &[(usize, usize)]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for (l, &(i, j)) in pairs.iter().enumerate() {
        if i == j {
            m[(i, i)] = v[l];
        } else {
            let x = v[l] / SQRT_2;
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

impl PsiOperator {
    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn peirce_d(&self) -> usize {
        self.peirce_d
    }

    pub fn d_half(&self) -> f64 {
        self.peirce_d as f64 / 2.0
    }

    /// `N = n(n+1)/2`.
    pub fn dim_f(&self) -> usize {
        self.basis_f.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.psi_mat
    }

    pub fn basis_f(&self) -> &[(usize, usize)] {
        &self.basis_f
    }

    pub fn peirce(&self) -> &PeirceBasis {
        &self.peirce
    }

    /// The basis element `f_ℓ` as a symmetric endomorphism in algebra
    /// coordinates.
    pub fn basis_endo(&self, l: usize) -> SymEndo {
        let mut v = DVector::zeros(self.dim_f());
        v[l] = 1.0;
        self.from_fcoords(&v)
    }

    /// Coordinates of `f` in the orthonormal basis `(f_ℓ)`.
    pub fn to_fcoords(&self, f: &SymEndo) -> Result<DVector<f64>> {
        if f.tag() != self.tag {
            return Err(Error::AlgebraMismatch);
        }
        let rotated = self.change.transpose() * f.matrix() * &self.change;
        Ok(svec(&rotated, &self.basis_f))
    }

    pub fn from_fcoords(&self, v: &DVector<f64>) -> SymEndo {
        let m = unsvec(v, self.tag.dim, &self.basis_f);
        SymEndo::from_matrix_symmetrized(self.tag, &self.change * m * self.change.transpose())
    }

    /// `Ψ(f)`.
    pub fn apply(&self, f: &SymEndo) -> Result<SymEndo> {
        let v = self.to_fcoords(f)?;
        Ok(self.from_fcoords(&(&self.psi_mat * v)))
    }

    /// `Tr[Ψ(f) f]`.
    pub fn rayleigh(&self, f: &SymEndo) -> Result<f64> {
        let v = self.to_fcoords(f)?;
        Ok(v.dot(&(&self.psi_mat * &v)))
    }

    pub fn trace_numeric(&self) -> f64 {
        self.psi_mat.trace()
    }

    pub fn symmetry_residual(&self) -> f64 {
        (&self.psi_mat - self.psi_mat.transpose()).amax()
    }

    /// Eigenvalues of `Ψ` in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = (&self.psi_mat + self.psi_mat.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    /// The eigenspace projectors onto `F₁` and `F₂`.
    ///
    /// The projectors come from the closed forms `(Ψ + d'I)/(1 + d')` and
    /// `(I − Ψ)/(1 + d')`; the numeric spectrum is used as a cross-check and
    /// must lie in `{1, −d'}` up to [`EIGEN_TOL`].
    pub fn spectral_split(&self) -> Result<SpectralSplit> {
        let dh = self.d_half();
        let big_n = self.dim_f();
        let id = DMatrix::<f64>::identity(big_n, big_n);
        let proj1 = (&self.psi_mat + &id * dh) / (1.0 + dh);
        let proj2 = (&id - &self.psi_mat) / (1.0 + dh);

        let eig = self.eigenvalues();
        let mut n1 = 0;
        let mut n2 = 0;
        let mut worst: f64 = 0.0;
        for &lambda in &eig {
            let to1 = (lambda - 1.0).abs();
            let to2 = (lambda + dh).abs();
            worst = worst.max(to1.min(to2));
            if to1 <= EIGEN_TOL {
                n1 += 1;
            } else if to2 <= EIGEN_TOL {
                n2 += 1;
            } else {
                return Err(Error::StructuralFailure(format!(
                    "eigenvalue {lambda} of Psi is not in {{1, {}}}",
                    -dh
                )));
            }
        }

        let dim1 = integer_rank(proj1.trace(), "F1")?;
        let dim2 = integer_rank(proj2.trace(), "F2")?;
        if dim1 != n1 || dim2 != n2 {
            return Err(Error::StructuralFailure(format!(
                "projector ranks ({dim1}, {dim2}) disagree with eigenvalue multiplicities ({n1}, {n2})"
            )));
        }
        Ok(SpectralSplit {
            tag: self.tag,
            d_half: dh,
            change: self.change.clone(),
            basis_f: self.basis_f.clone(),
            proj1,
            proj2,
            dim1,
            dim2,
            eigen_deviation: worst,
        })
    }

    /// Diagonal entries `C_ℓ = Tr[Ψ(f_ℓ) f_ℓ]` grouped by Peirce case.
    pub fn case_table(&self) -> Result<CaseTable> {
        let labels = self.peirce.labels();
        let mut groups: BTreeMap<CaseLabel, Vec<f64>> = BTreeMap::new();
        for (l, &(i, j)) in self.basis_f.iter().enumerate() {
            let case = classify_pair(labels[i], labels[j], i == j)?;
            groups.entry(case).or_default().push(self.psi_mat[(l, l)]);
        }
        let r = self.rank;
        let d = self.peirce_d;
        let mut entries = BTreeMap::new();
        for case in CaseLabel::ALL {
            let values = groups.remove(&case).unwrap_or_default();
            let expected_value = case.expected_value();
            let count = values.len();
            let total: f64 = values.iter().sum();
            let max_deviation = values
                .iter()
                .map(|v| (v - expected_value).abs())
                .fold(0.0, f64::max);
            entries.insert(
                case,
                CaseEntry {
                    count,
                    expected_count: case.expected_count(r, d),
                    value: if count > 0 {
                        total / count as f64
                    } else {
                        expected_value
                    },
                    expected_value,
                    total,
                    max_deviation,
                },
            );
        }
        Ok(CaseTable { entries })
    }
}

fn integer_rank(trace: f64, what: &str) -> Result<usize> {
    let rounded = trace.round();
    if (trace - rounded).abs() > RANK_TOL || rounded < 0.0 {
        return Err(Error::StructuralFailure(format!(
            "trace of the {what} projector is {trace}, not an integer"
        )));
    }
    Ok(rounded as usize)
}

/// Orthogonal projectors onto the eigenspaces `F₁` (eigenvalue 1) and
/// `F₂` (eigenvalue `−d'`), in the `F` coordinates of the owning `Ψ`.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    tag: AlgebraTag,
    d_half: f64,
    change: DMatrix<f64>,
    basis_f: Vec<(usize, usize)>,
    pub proj1: DMatrix<f64>,
    pub proj2: DMatrix<f64>,
    pub dim1: usize,
    pub dim2: usize,
    /// Largest distance of a numeric eigenvalue from `{1, −d'}`.
    pub eigen_deviation: f64,
}

impl SpectralSplit {
    pub fn d_half(&self) -> f64 {
        self.d_half
    }

    fn fcoords(&self, f: &SymEndo) -> Result<DVector<f64>> {
        if f.tag() != self.tag {
            return Err(Error::AlgebraMismatch);
        }
        let rotated = self.change.transpose() * f.matrix() * &self.change;
        Ok(svec(&rotated, &self.basis_f))
    }

    fn endo(&self, v: &DVector<f64>) -> SymEndo {
        let m = unsvec(v, self.tag.dim, &self.basis_f);
        SymEndo::from_matrix_symmetrized(self.tag, &self.change * m * self.change.transpose())
    }

    pub fn project1(&self, f: &SymEndo) -> Result<SymEndo> {
        let v = self.fcoords(f)?;
        Ok(self.endo(&(&self.proj1 * v)))
    }

    pub fn project2(&self, f: &SymEndo) -> Result<SymEndo> {
        let v = self.fcoords(f)?;
        Ok(self.endo(&(&self.proj2 * v)))
    }

    /// `max |P_i² − P_i|` over both projectors.
    pub fn idempotence_residual(&self) -> f64 {
        let r1 = (&self.proj1 * &self.proj1 - &self.proj1).amax();
        let r2 = (&self.proj2 * &self.proj2 - &self.proj2).amax();
        r1.max(r2)
    }

    /// `max |P₁ + P₂ − I|` and `max |P₁P₂|`.
    pub fn complement_residual(&self) -> (f64, f64) {
        let big_n = self.proj1.nrows();
        let sum = (&self.proj1 + &self.proj2 - DMatrix::<f64>::identity(big_n, big_n)).amax();
        let prod = (&self.proj1 * &self.proj2).amax();
        (sum, prod)
    }

    /// Splits `q = q₁ + q₂` with `f_{q_i} = P_i f_q`.
    pub fn decompose_quadratic(&self, q: &QuadraticForm) -> Result<(QuadraticForm, QuadraticForm)> {
        let v = self.fcoords(&q.endo)?;
        Ok((
            QuadraticForm::new(self.endo(&(&self.proj1 * &v))),
            QuadraticForm::new(self.endo(&(&self.proj2 * &v))),
        ))
    }
}

/// Convenience wrapper for [`SpectralSplit::decompose_quadratic`].
pub fn decompose_quadratic(
    split: &SpectralSplit,
    q: &QuadraticForm,
) -> Result<(QuadraticForm, QuadraticForm)> {
    split.decompose_quadratic(q)
}

/// The eight kinds of basis elements `f_ℓ`, by the Peirce blocks of `e_i, e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `e_i ⊗ e_i`, `e_i = c_s`.
    A1,
    /// `e_i ⊗ e_i`, `e_i ∈ V_st`.
    A2,
    /// `e_i = c_s`, `e_j = c_t`.
    B1,
    /// `e_i = c_s`, `e_j ∈ V_uv` with `s ∈ {u, v}`.
    B2,
    /// `e_i = c_s`, `e_j ∈ V_uv` with `s ∉ {u, v}`.
    B3,
    /// Two distinct elements of the same `V_uv`.
    B4,
    /// Elements of blocks sharing exactly one index.
    B5,
    /// Elements of disjoint blocks.
    B6,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 8] = [
        CaseLabel::A1,
        CaseLabel::A2,
        CaseLabel::B1,
        CaseLabel::B2,
        CaseLabel::B3,
        CaseLabel::B4,
        CaseLabel::B5,
        CaseLabel::B6,
    ];

    /// Expected `C_ℓ`.
    pub fn expected_value(self) -> f64 {
        match self {
            CaseLabel::A1 | CaseLabel::B2 | CaseLabel::B4 => 1.0,
            CaseLabel::A2 | CaseLabel::B5 => 0.5,
            CaseLabel::B1 | CaseLabel::B3 | CaseLabel::B6 => 0.0,
        }
    }

    /// Number of basis elements in the case, for rank `r` and Peirce `d`.
    ///
    /// `A1, A2, B2, B4, B5` follow `N(A₁) = r`, `N(A₂) = r(r−1)d'`,
    /// `N(B₂) = 2r(r−1)d'`, `N(B₄) = r(r−1)d'(d'−½)`,
    /// `N(B₅) = 2r(r−1)(r−2)d'²`; the zero-valued cases are counted directly.
    pub fn expected_count(self, r: usize, d: usize) -> usize {
        let pairs = r * r.saturating_sub(1) / 2;
        match self {
            CaseLabel::A1 => r,
            CaseLabel::A2 => r * r.saturating_sub(1) * d / 2,
            CaseLabel::B1 => pairs,
            CaseLabel::B2 => r * r.saturating_sub(1) * d,
            CaseLabel::B3 => r * pairs.saturating_sub(r.saturating_sub(1)) * d,
            CaseLabel::B4 => r * r.saturating_sub(1) * d * d.saturating_sub(1) / 4,
            CaseLabel::B5 => r * r.saturating_sub(1) * r.saturating_sub(2) * d * d / 2,
            CaseLabel::B6 => {
                let rest = r.saturating_sub(2) * r.saturating_sub(3) / 2;
                pairs * rest / 2 * d * d
            }
        }
    }

    /// Whether the case is among the five that carry `trace(Ψ)`.
    pub fn is_counted_in_trace(self) -> bool {
        matches!(
            self,
            CaseLabel::A1 | CaseLabel::A2 | CaseLabel::B2 | CaseLabel::B4 | CaseLabel::B5
        )
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub(crate) fn classify_pair(a: BlockLabel, b: BlockLabel, same_element: bool) -> Result<CaseLabel> {
    if same_element {
        return Ok(if a.is_diagonal() {
            CaseLabel::A1
        } else {
            CaseLabel::A2
        });
    }
    match (a.is_diagonal(), b.is_diagonal()) {
        (true, true) => {
            if a.s == b.s {
                return Err(Error::Classification(format!(
                    "two basis elements in the one-dimensional block V_{}{}",
                    a.s + 1,
                    a.s + 1
                )));
            }
            Ok(CaseLabel::B1)
        }
        (true, false) | (false, true) => {
            let (diag, off) = if a.is_diagonal() { (a, b) } else { (b, a) };
            if diag.s == off.s || diag.s == off.t {
                Ok(CaseLabel::B2)
            } else {
                Ok(CaseLabel::B3)
            }
        }
        (false, false) => {
            if a == b {
                return Ok(CaseLabel::B4);
            }
            let shared = [a.s, a.t]
                .iter()
                .filter(|x| **x == b.s || **x == b.t)
                .count();
            match shared {
                1 => Ok(CaseLabel::B5),
                0 => Ok(CaseLabel::B6),
                _ => Err(Error::Classification(format!(
                    "blocks V_{}{} and V_{}{} cannot share two indices",
                    a.s + 1,
                    a.t + 1,
                    b.s + 1,
                    b.t + 1
                ))),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseEntry {
    pub count: usize,
    pub expected_count: usize,
    /// Mean of `C_ℓ` over the case.
    pub value: f64,
    pub expected_value: f64,
    /// `Σ C_ℓ` over the case.
    pub total: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseTable {
    pub entries: BTreeMap<CaseLabel, CaseEntry>,
}

impl CaseTable {
    pub fn get(&self, case: CaseLabel) -> &CaseEntry {
        &self.entries[&case]
    }

    /// `Σ_ℓ C_ℓ`, which is `trace(Ψ)`.
    pub fn total(&self) -> f64 {
        self.entries.values().map(|e| e.total).sum()
    }

    pub fn max_value_deviation(&self) -> f64 {
        self.entries
            .values()
            .map(|e| e.max_deviation)
            .fold(0.0, f64::max)
    }

    pub fn counts_match(&self) -> bool {
        self.entries.values().all(|e| e.count == e.expected_count)
    }
}

/// `(dim F₁, dim F₂)` from rank and Peirce constant:
/// `dim F₂ = r(r−1)/2 · (1 + d'(2r−3) + d'²(r−1)(r−2))/(1 + d')` and
/// `dim F₁ = n(n+1)/2 − dim F₂`, evaluated in exact integer arithmetic.
pub fn dims_closed_form(r: usize, d: usize) -> Result<(usize, usize)> {
    if r == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "invalid (r, d) = ({r}, {d})"
        )));
    }
    let (ri, di) = (r as i128, d as i128);
    // with d' = d/2: r(r−1)[4 + 2d(2r−3) + d²(r−1)(r−2)] / (4(2 + d))
    let num = ri * (ri - 1) * (4 + 2 * di * (2 * ri - 3) + di * di * (ri - 1) * (ri - 2));
    let den = 4 * (2 + di);
    if num % den != 0 {
        return Err(Error::InvalidParameter(format!(
            "dim F2 is not an integer for (r, d) = ({r}, {d})"
        )));
    }
    let dim2 = num / den;
    let n = crate::algebra::dimension_formula(r, d) as i128;
    let dim1 = n * (n + 1) / 2 - dim2;
    if dim1 < 0 || dim2 < 0 {
        return Err(Error::InvalidParameter(format!(
            "negative dimension for (r, d) = ({r}, {d})"
        )));
    }
    Ok((dim1 as usize, dim2 as usize))
}

/// `trace(Ψ) = r + r(r−1)d'[2 + (r−1)d']`.
pub fn trace_psi_closed(r: usize, d: usize) -> f64 {
    let r = r as f64;
    let dh = d as f64 / 2.0;
    r + r * (r - 1.0) * dh * (2.0 + (r - 1.0) * dh)
}

/// `f_{q₁ˢ} = d' s ⊗ s + P(s)`, i.e.
/// `q₁ˢ(x) = (d/2) tr²(x s) + tr(P(x)(s) s)`.
pub fn q1s(algebra: &JordanAlgebra, s: &Element) -> Result<QuadraticForm> {
    let ss = outer_self(s);
    let ps = algebra.pmap(s)?;
    Ok(QuadraticForm::new(&ss.scale(algebra.d_half()) + &ps))
}

/// `f_{q₂ˢ} = s ⊗ s − P(s)`, i.e. `q₂ˢ(x) = tr²(x s) − tr(P(x)(s) s)`.
pub fn q2s(algebra: &JordanAlgebra, s: &Element) -> Result<QuadraticForm> {
    let ss = outer_self(s);
    let ps = algebra.pmap(s)?;
    Ok(QuadraticForm::new(&ss - &ps))
}

/// `q_iˢ(x)` straight from its defining expression, for `i ∈ {1, 2}`.
pub fn qis_direct(algebra: &JordanAlgebra, i: u8, s: &Element, x: &Element) -> Result<f64> {
    let tr_xs = algebra.inner(x, s)?;
    let px_s = algebra.pmap(x)?.apply(s)?;
    let tail = algebra.inner(&px_s, s)?;
    match i {
        1 => Ok(algebra.d_half() * tr_xs * tr_xs + tail),
        2 => Ok(tr_xs * tr_xs - tail),
        _ => Err(Error::InvalidParameter(format!(
            "eigenspace index must be 1 or 2, got {i}"
        ))),
    }
}
