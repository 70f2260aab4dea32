//! Symmetric endomorphisms of `V` and the quadratic forms they represent.
//!
//! `V` is identified with its dual through `⟨x, y⟩ = tr(x ∘ y)`, so a
//! symmetric endomorphism `f` and the quadratic form `q_f(x) = ⟨f(x), x⟩`
//! determine each other.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::algebra::{AlgebraTag, Element, JordanAlgebra};
use crate::{Error, Result};

/// Symmetric endomorphism of `V`, as an `n × n` matrix in the algebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEndo {
    tag: AlgebraTag,
    mat: DMatrix<f64>,
}

impl SymEndo {
    /// Rejects matrices whose asymmetry exceeds `1e-12` relative to their
    /// largest entry; the accepted matrix is symmetrized exactly.
    pub fn new(tag: AlgebraTag, mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() != tag.dim || mat.ncols() != tag.dim {
            return Err(Error::DimensionMismatch {
                expected: tag.dim,
                got: mat.nrows().max(mat.ncols()),
            });
        }
        let scale = mat.amax().max(1.0);
        let asym = (&mat - mat.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::InvalidParameter(format!(
                "matrix is not symmetric (residual {asym:e})"
            )));
        }
        Ok(Self::from_matrix_symmetrized(tag, mat))
    }

    pub(crate) fn from_matrix_symmetrized(tag: AlgebraTag, mat: DMatrix<f64>) -> Self {
        let mat = (&mat + mat.transpose()) * 0.5;
        SymEndo { tag, mat }
    }

    pub fn identity(tag: AlgebraTag) -> Self {
        SymEndo {
            tag,
            mat: DMatrix::identity(tag.dim, tag.dim),
        }
    }

    pub fn zeros(tag: AlgebraTag) -> Self {
        SymEndo {
            tag,
            mat: DMatrix::zeros(tag.dim, tag.dim),
        }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.tag() != self.tag {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element::new(self.tag, &self.mat * x.coords()))
    }

    /// `Tr(f)`, the trace of the endomorphism.
    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    /// `Tr(fg)`, the inner product on `F = L_s(V)`.
    pub fn trace_product(&self, other: &SymEndo) -> Result<f64> {
        if other.tag != self.tag {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.mat.component_mul(&other.mat).sum())
    }

    pub fn scale(&self, s: f64) -> SymEndo {
        SymEndo {
            tag: self.tag,
            mat: &self.mat * s,
        }
    }

    /// Frobenius norm `√Tr(f²)`.
    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn max_abs_diff(&self, other: &SymEndo) -> f64 {
        assert_eq!(self.tag, other.tag, "endomorphisms of different algebras");
        (&self.mat - &other.mat).amax()
    }

    /// `q_f(x) = ⟨f(x), x⟩`.
    pub fn quadratic(&self, x: &Element) -> Result<f64> {
        if x.tag() != self.tag {
            return Err(Error::AlgebraMismatch);
        }
        Ok(x.coords().dot(&(&self.mat * x.coords())))
    }
}

impl Add for &SymEndo {
    type Output = SymEndo;

    fn add(self, rhs: &SymEndo) -> SymEndo {
        assert_eq!(self.tag, rhs.tag, "endomorphisms of different algebras");
        SymEndo {
            tag: self.tag,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &SymEndo {
    type Output = SymEndo;

    fn sub(self, rhs: &SymEndo) -> SymEndo {
        assert_eq!(self.tag, rhs.tag, "endomorphisms of different algebras");
        SymEndo {
            tag: self.tag,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul<f64> for &SymEndo {
    type Output = SymEndo;

    fn mul(self, rhs: f64) -> SymEndo {
        self.scale(rhs)
    }
}

/// `a ⊗ b : x ↦ a tr(b x)`, as a raw (generally non-symmetric) matrix.
pub fn outer(a: &Element, b: &Element) -> Result<DMatrix<f64>> {
    if a.tag() != b.tag() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(a.coords() * b.coords().transpose())
}

/// `a ⊗ b + b ⊗ a`.
pub fn outer_sym(a: &Element, b: &Element) -> Result<SymEndo> {
    let m = outer(a, b)?;
    Ok(SymEndo {
        tag: a.tag(),
        mat: &m + m.transpose(),
    })
}

/// `a ⊗ a`.
pub fn outer_self(a: &Element) -> SymEndo {
    SymEndo {
        tag: a.tag(),
        mat: a.coords() * a.coords().transpose(),
    }
}

/// A quadratic form on `V`, carried by its symmetric endomorphism `f_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub endo: SymEndo,
}

impl QuadraticForm {
    pub fn new(endo: SymEndo) -> Self {
        QuadraticForm { endo }
    }

    pub fn eval(&self, x: &Element) -> Result<f64> {
        self.endo.quadratic(x)
    }

    /// Recovers `f_q` from evaluations of `q` through polarization,
    /// `⟨f_q(e_i), e_j⟩ = ½(q(e_i + e_j) − q(e_i) − q(e_j))`.
    pub fn from_evaluations<F>(algebra: &JordanAlgebra, mut q: F) -> Result<Self>
    where
        F: FnMut(&Element) -> Result<f64>,
    {
        let n = algebra.dim();
        let basis = algebra.basis();
        let diag: Vec<f64> = basis.iter().map(&mut q).collect::<Result<_>>()?;
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n {
            mat[(i, i)] = diag[i];
            for j in (i + 1)..n {
                let qij = q(&(&basis[i] + &basis[j]))?;
                let v = 0.5 * (qij - diag[i] - diag[j]);
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
        Ok(QuadraticForm {
            endo: SymEndo {
                tag: algebra.tag(),
                mat,
            },
        })
    }
}

/// `q_f(x) = ⟨f(x), x⟩`.
pub fn q_of_endo(f: &SymEndo, x: &Element) -> Result<f64> {
    f.quadratic(x)
}

/// Inverse of [`q_of_endo`]: the unique symmetric `f` with `q = q_f`.
pub fn endo_of_q<F>(algebra: &JordanAlgebra, q: F) -> Result<SymEndo>
where
    F: FnMut(&Element) -> Result<f64>,
{
    Ok(QuadraticForm::from_evaluations(algebra, q)?.endo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_form_is_squared_norm() {
        let alg = JordanAlgebra::matrix(AlgebraKind::HermComplex, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = SymEndo::identity(alg.tag());
        for _ in 0..10 {
            let x = alg.random_element(&mut rng);
            let tr_x2 = alg.trace(&alg.square(&x).unwrap()).unwrap();
            assert!((q_of_endo(&f, &x).unwrap() - tr_x2).abs() < 1e-10 * tr_x2.max(1.0));
        }
    }

    #[test]
    fn e_outer_e_gives_trace_squared() {
        let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 3).unwrap();
        let e = alg.identity();
        let f = outer_self(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let x = alg.random_element(&mut rng);
            let tr = alg.trace(&x).unwrap();
            assert!((q_of_endo(&f, &x).unwrap() - tr * tr).abs() < 1e-10 * (1.0 + tr * tr));
            // (e ⊗ e)(x) = e tr(x)
            let applied = f.apply(&x).unwrap();
            assert!(applied.max_abs_diff(&e.scale(tr)) < 1e-12);
        }
    }

    #[test]
    fn polarization_round_trip() {
        let alg = JordanAlgebra::spin(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let a = alg.random_element(&mut rng);
            let b = alg.random_element(&mut rng);
            let f = &outer_sym(&a, &b).unwrap() + &alg.pmap(&a).unwrap();
            let back = endo_of_q(&alg, |x| q_of_endo(&f, x)).unwrap();
            worst = worst.max(back.max_abs_diff(&f));
        }
        assert!(worst <= 1e-10, "worst round-trip error {worst:e}");
    }

    #[test]
    fn rejects_asymmetric_matrix_and_mismatch() {
        let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
        let mut m = DMatrix::identity(3, 3);
        m[(0, 1)] = 1.0;
        assert!(SymEndo::new(alg.tag(), m).is_err());
        let other = JordanAlgebra::spin(2).unwrap();
        let f = SymEndo::identity(alg.tag());
        assert_eq!(f.apply(&other.identity()), Err(Error::AlgebraMismatch));
        assert!(outer(&alg.identity(), &other.identity()).is_err());
    }
}
