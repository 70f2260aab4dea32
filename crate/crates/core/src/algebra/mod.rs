//! Simple Euclidean Jordan algebras in coordinates.
//!
//! Every algebra is realized once through a concrete model (Hermitian
//! matrices over ℝ/ℂ/ℍ/𝕆, or the spin factor `ℝ × E`) and then reduced to an
//! orthonormal basis with precomputed structure constants
//! `e_i ∘ e_j = Σ_k c[i][j][k] e_k`. Everything downstream works on the
//! coordinate representation only.

mod element;
mod frame;
mod functions;
mod model;

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use element::{AlgebraTag, Element};
pub use frame::{BlockLabel, JordanFrame, PeirceBasis, PeirceBlock};

use crate::endo::SymEndo;
use crate::{Error, Result};
use model::{MatrixModel, SpinModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraKind {
    SymReal,
    HermComplex,
    HermQuaternion,
    SpinFactor,
    Albert,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 5] = [
        AlgebraKind::SymReal,
        AlgebraKind::HermComplex,
        AlgebraKind::HermQuaternion,
        AlgebraKind::SpinFactor,
        AlgebraKind::Albert,
    ];

    /// Short command-line name.
    pub fn short_name(self) -> &'static str {
        match self {
            AlgebraKind::SymReal => "sym",
            AlgebraKind::HermComplex => "herm",
            AlgebraKind::HermQuaternion => "quat",
            AlgebraKind::SpinFactor => "spin",
            AlgebraKind::Albert => "albert",
        }
    }

    /// Peirce constant of the matrix kinds; `None` for the spin factor,
    /// whose constant depends on the ambient dimension.
    pub fn matrix_peirce_d(self) -> Option<usize> {
        match self {
            AlgebraKind::SymReal => Some(1),
            AlgebraKind::HermComplex => Some(2),
            AlgebraKind::HermQuaternion => Some(4),
            AlgebraKind::Albert => Some(8),
            AlgebraKind::SpinFactor => None,
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sym" | "symreal" | "real" => Ok(AlgebraKind::SymReal),
            "herm" | "hermcomplex" | "complex" => Ok(AlgebraKind::HermComplex),
            "quat" | "hermquaternion" | "quaternion" => Ok(AlgebraKind::HermQuaternion),
            "spin" | "spinfactor" | "lorentz" => Ok(AlgebraKind::SpinFactor),
            "albert" | "octonion" => Ok(AlgebraKind::Albert),
            other => Err(Error::InvalidAlgebra(format!(
                "unknown algebra kind '{other}' (expected sym, herm, quat, spin or albert)"
            ))),
        }
    }
}

/// What a coordinate basis vector is in the underlying model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BasisLabel {
    /// `E_ss`.
    Diagonal { s: usize },
    /// `(u E_st + ū E_ts)/√2` for the division-algebra unit `u = u_unit`.
    OffDiagonal { s: usize, t: usize, unit: usize },
    /// `(1/√2, 0)` in the spin factor.
    SpinScalar,
    /// `(0, u_k/√2)` in the spin factor.
    SpinVector { k: usize },
}

#[derive(Debug, Clone, Copy)]
enum Model {
    Matrix(MatrixModel),
    Spin(SpinModel),
}

/// Immutable descriptor of a simple Euclidean Jordan algebra.
#[derive(Debug, Clone)]
pub struct JordanAlgebra {
    kind: AlgebraKind,
    rank: usize,
    peirce_d: usize,
    dim: usize,
    spin_ambient: Option<usize>,
    labels: Vec<BasisLabel>,
    structure: Vec<f64>,
    lbasis: Vec<DMatrix<f64>>,
    identity: DVector<f64>,
    model: Model,
}

/// Serializable summary used by reports and golden files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub kind: AlgebraKind,
    pub r: usize,
    pub d: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_ambient_dim: Option<usize>,
    pub basis: Vec<BasisLabel>,
    pub identity: Vec<f64>,
    /// Nonzero structure constants as `[i, j, k, c_ijk]`.
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
}

impl JordanAlgebra {
    /// Builds the algebra of the given kind and rank. `spin_ambient_dim` is
    /// `dim E` for the spin factor and must be absent otherwise.
    pub fn new(kind: AlgebraKind, rank: usize, spin_ambient_dim: Option<usize>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidAlgebra("rank must be at least 1".into()));
        }
        if kind != AlgebraKind::SpinFactor && spin_ambient_dim.is_some() {
            return Err(Error::InvalidAlgebra(format!(
                "an ambient dimension is only meaningful for the spin factor, not {kind}"
            )));
        }
        let model = match kind {
            AlgebraKind::SpinFactor => {
                if rank != 2 {
                    return Err(Error::InvalidAlgebra(format!(
                        "the spin factor has rank 2, got {rank}"
                    )));
                }
                let ambient = spin_ambient_dim
                    .ok_or_else(|| Error::InvalidAlgebra("the spin factor needs dim E".into()))?;
                if ambient < 2 {
                    return Err(Error::InvalidAlgebra(format!(
                        "the spin factor needs dim E >= 2, got {ambient}"
                    )));
                }
                Model::Spin(SpinModel { ambient })
            }
            AlgebraKind::Albert => {
                if rank != 3 {
                    return Err(Error::InvalidAlgebra(format!(
                        "the Albert algebra has rank 3, got {rank}"
                    )));
                }
                Model::Matrix(MatrixModel { r: 3, d: 8 })
            }
            _ => Model::Matrix(MatrixModel {
                r: rank,
                d: kind.matrix_peirce_d().expect("matrix kind"),
            }),
        };
        Ok(Self::from_model(kind, rank, spin_ambient_dim, model))
    }

    /// Convenience for the matrix kinds and Albert.
    pub fn matrix(kind: AlgebraKind, rank: usize) -> Result<Self> {
        Self::new(kind, rank, None)
    }

    pub fn spin(ambient_dim: usize) -> Result<Self> {
        Self::new(AlgebraKind::SpinFactor, 2, Some(ambient_dim))
    }

    pub fn albert() -> Self {
        Self::new(AlgebraKind::Albert, 3, None).expect("Albert algebra is well formed")
    }

    fn from_model(
        kind: AlgebraKind,
        rank: usize,
        spin_ambient: Option<usize>,
        model: Model,
    ) -> Self {
        let (dim, peirce_d, labels, identity) = match model {
            Model::Matrix(m) => {
                let mut labels: Vec<BasisLabel> =
                    (0..m.r).map(|s| BasisLabel::Diagonal { s }).collect();
                for s in 0..m.r {
                    for t in (s + 1)..m.r {
                        for unit in 0..m.d {
                            debug_assert_eq!(m.off_index(s, t, unit), labels.len());
                            labels.push(BasisLabel::OffDiagonal { s, t, unit });
                        }
                    }
                }
                let mut identity = DVector::zeros(m.dim());
                for s in 0..m.r {
                    identity[s] = 1.0;
                }
                (m.dim(), m.d, labels, identity)
            }
            Model::Spin(sp) => {
                let mut labels = vec![BasisLabel::SpinScalar];
                labels.extend((0..sp.ambient).map(|k| BasisLabel::SpinVector { k }));
                let mut identity = DVector::zeros(sp.dim());
                identity[0] = SQRT_2;
                (sp.dim(), sp.ambient - 1, labels, identity)
            }
        };

        let n = dim;
        let mut structure = vec![0.0; n * n * n];
        let unit = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        match model {
            Model::Matrix(m) => {
                let basis: Vec<Vec<f64>> = (0..n).map(|i| m.coords_to_entries(&unit(i))).collect();
                for i in 0..n {
                    for j in i..n {
                        let prod = m.entries_to_coords(&m.jordan(&basis[i], &basis[j]));
                        for (k, v) in prod.into_iter().enumerate() {
                            let v = clean(v);
                            structure[(i * n + j) * n + k] = v;
                            structure[(j * n + i) * n + k] = v;
                        }
                    }
                }
            }
            Model::Spin(sp) => {
                for i in 0..n {
                    for j in i..n {
                        let x = sp.coords_to_parts(&unit(i));
                        let y = sp.coords_to_parts(&unit(j));
                        let prod = sp.parts_to_coords(&sp.product(&x, &y));
                        for (k, v) in prod.into_iter().enumerate() {
                            let v = clean(v);
                            structure[(i * n + j) * n + k] = v;
                            structure[(j * n + i) * n + k] = v;
                        }
                    }
                }
            }
        }

        // L(e_i)[k, j] = c[i][j][k]
        let lbasis = (0..n)
            .map(|i| DMatrix::from_fn(n, n, |k, j| structure[(i * n + j) * n + k]))
            .collect();

        JordanAlgebra {
            kind,
            rank,
            peirce_d,
            dim,
            spin_ambient,
            labels,
            structure,
            lbasis,
            identity,
            model,
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Peirce constant `d`.
    pub fn peirce_d(&self) -> usize {
        self.peirce_d
    }

    /// `d' = d/2`.
    pub fn d_half(&self) -> f64 {
        self.peirce_d as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spin_ambient_dim(&self) -> Option<usize> {
        self.spin_ambient
    }

    pub fn tag(&self) -> AlgebraTag {
        AlgebraTag {
            kind: self.kind,
            rank: self.rank,
            dim: self.dim,
        }
    }

    /// Human-readable name such as `sym(r=3)` or `spin(dimE=4)`.
    pub fn name(&self) -> String {
        match self.spin_ambient {
            Some(m) => format!("spin(dimE={m})"),
            None => format!("{}(r={})", self.kind, self.rank),
        }
    }

    pub fn basis_labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// `c[i][j][k]` with `e_i ∘ e_j = Σ_k c[i][j][k] e_k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim;
        self.structure[(i * n + j) * n + k]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        Element::new(self.tag(), v)
    }

    pub fn basis(&self) -> Vec<Element> {
        (0..self.dim).map(|i| self.basis_element(i)).collect()
    }

    pub fn identity(&self) -> Element {
        Element::new(self.tag(), self.identity.clone())
    }

    pub fn zero(&self) -> Element {
        Element::new(self.tag(), DVector::zeros(self.dim))
    }

    pub fn element(&self, coords: Vec<f64>) -> Result<Element> {
        self.element_from_slice(&coords)
    }

    pub fn element_from_slice(&self, coords: &[f64]) -> Result<Element> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        Ok(Element::new(self.tag(), DVector::from_column_slice(coords)))
    }

    pub(crate) fn element_from_vector(&self, coords: DVector<f64>) -> Element {
        Element::new(self.tag(), coords)
    }

    /// Element with independent standard normal coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let v = DVector::from_fn(self.dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        Element::new(self.tag(), v)
    }

    pub(crate) fn check(&self, x: &Element) -> Result<()> {
        if x.tag != self.tag() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Matrix of `y ↦ x ∘ y` in the algebra basis.
    pub(crate) fn lmatrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if *xi != 0.0 {
                out += &self.lbasis[i] * *xi;
            }
        }
        out
    }

    pub(crate) fn product_vec(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += w * self.structure[base + k];
                }
            }
        }
        out
    }

    /// Matrix of `P(x) = 2L(x)² − L(x²)` in the algebra basis.
    pub(crate) fn pmatrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let l = self.lmatrix(x);
        let x2 = self.product_vec(x, x);
        &l * &l * 2.0 - self.lmatrix(&x2)
    }

    /// Jordan product `x ∘ y`.
    pub fn product(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(Element::new(
            self.tag(),
            self.product_vec(&x.coords, &y.coords),
        ))
    }

    pub fn square(&self, x: &Element) -> Result<Element> {
        self.product(x, x)
    }

    /// `x^k` by repeated multiplication, `x^0 = e`.
    pub fn power(&self, x: &Element, k: usize) -> Result<Element> {
        self.check(x)?;
        let mut acc = self.identity.clone();
        for _ in 0..k {
            acc = self.product_vec(&x.coords, &acc);
        }
        Ok(Element::new(self.tag(), acc))
    }

    /// `L(x)`, multiplication by `x`.
    pub fn lmap(&self, x: &Element) -> Result<SymEndo> {
        self.check(x)?;
        Ok(SymEndo::from_matrix_symmetrized(
            self.tag(),
            self.lmatrix(&x.coords),
        ))
    }

    /// Quadratic representation `P(x) = 2L(x)² − L(x²)`.
    pub fn pmap(&self, x: &Element) -> Result<SymEndo> {
        self.check(x)?;
        Ok(SymEndo::from_matrix_symmetrized(
            self.tag(),
            self.pmatrix(&x.coords),
        ))
    }

    /// Jordan trace, normalized so that primitive idempotents have trace 1.
    pub fn trace(&self, x: &Element) -> Result<f64> {
        self.check(x)?;
        Ok(x.coords.dot(&self.identity))
    }

    /// `⟨x, y⟩ = tr(x ∘ y)`.
    pub fn inner(&self, x: &Element, y: &Element) -> Result<f64> {
        self.check(x)?;
        x.inner(y)
    }

    /// Builds the element `(x₀, x⃗)` of the spin factor.
    pub fn spin_element(&self, x0: f64, vector: &[f64]) -> Result<Element> {
        match self.model {
            Model::Spin(sp) => {
                if vector.len() != sp.ambient {
                    return Err(Error::DimensionMismatch {
                        expected: sp.ambient,
                        got: vector.len(),
                    });
                }
                let mut parts = Vec::with_capacity(sp.dim());
                parts.push(x0);
                parts.extend_from_slice(vector);
                self.element(sp.parts_to_coords(&parts))
            }
            Model::Matrix(_) => Err(Error::Unsupported(format!(
                "{} is not a spin factor",
                self.name()
            ))),
        }
    }

    /// `(x₀, x⃗)` of a spin-factor element.
    pub fn spin_parts(&self, x: &Element) -> Result<(f64, Vec<f64>)> {
        self.check(x)?;
        match self.model {
            Model::Spin(sp) => {
                let parts = sp.coords_to_parts(x.as_slice());
                Ok((parts[0], parts[1..].to_vec()))
            }
            Model::Matrix(_) => Err(Error::Unsupported(format!(
                "{} is not a spin factor",
                self.name()
            ))),
        }
    }

    /// Number of reals per matrix entry for the matrix kinds (1, 2, 4, 8).
    pub fn entry_components(&self) -> Option<usize> {
        match self.model {
            Model::Matrix(m) => Some(m.d),
            Model::Spin(_) => None,
        }
    }

    /// Element from a full `r × r` matrix in row-major layout with `d`
    /// reals per entry. Only the Hermitian part is retained.
    pub fn from_matrix_entries(&self, entries: &[f64]) -> Result<Element> {
        let m = self.matrix_model()?;
        if entries.len() != m.entry_len() {
            return Err(Error::DimensionMismatch {
                expected: m.entry_len(),
                got: entries.len(),
            });
        }
        self.element(m.entries_to_coords(entries))
    }

    /// The matrix (row-major, `d` reals per entry) of a matrix-kind element.
    pub fn to_matrix_entries(&self, x: &Element) -> Result<Vec<f64>> {
        self.check(x)?;
        let m = self.matrix_model()?;
        Ok(m.coords_to_entries(x.as_slice()))
    }

    pub(crate) fn matrix_model(&self) -> Result<MatrixModel> {
        match self.model {
            Model::Matrix(m) => Ok(m),
            Model::Spin(_) => Err(Error::Unsupported(format!(
                "{} has no matrix realization",
                self.name()
            ))),
        }
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        let n = self.dim;
        let mut sc = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.structure_constant(i, j, k);
                    if v != 0.0 {
                        sc.push((i, j, k, v));
                    }
                }
            }
        }
        AlgebraDescriptor {
            kind: self.kind,
            r: self.rank,
            d: self.peirce_d,
            n,
            spin_ambient_dim: self.spin_ambient,
            basis: self.labels.clone(),
            identity: self.identity.iter().copied().collect(),
            structure_constants: sc,
        }
    }
}

/// `n = r + (d/2) r (r − 1)`.
pub fn dimension_formula(r: usize, d: usize) -> usize {
    r + d * r * (r.saturating_sub(1)) / 2
}

fn clean(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}
