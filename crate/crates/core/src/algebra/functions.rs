//! Determinant, inverse, cone membership and square roots.

use nalgebra::{DVector, SymmetricEigen};

use super::{Element, JordanAlgebra};
use crate::{Error, Result};

impl JordanAlgebra {
    /// Power traces `tr(x^k)` for `k = 1..=r`.
    fn power_traces(&self, x: &DVector<f64>) -> Vec<f64> {
        let mut acc = x.clone();
        let mut traces = Vec::with_capacity(self.rank);
        for k in 1..=self.rank {
            if k > 1 {
                acc = self.product_vec(x, &acc);
            }
            traces.push(acc.dot(&self.identity));
        }
        traces
    }

    /// Elementary symmetric functions `e_0..=e_r` of the Jordan eigenvalues,
    /// recovered from the power traces by Newton's identities.
    pub(crate) fn characteristic_coefficients(&self, x: &DVector<f64>) -> Vec<f64> {
        let p = self.power_traces(x);
        let r = self.rank;
        let mut e = vec![0.0; r + 1];
        e[0] = 1.0;
        for k in 1..=r {
            let mut acc = 0.0;
            for i in 1..=k {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                acc += sign * e[k - i] * p[i - 1];
            }
            e[k] = acc / k as f64;
        }
        e
    }

    /// Jordan determinant, the product of the `r` eigenvalues of `x`.
    ///
    /// Computed intrinsically from `tr(x), …, tr(x^r)`, so it applies to
    /// every kind including Albert.
    pub fn determinant(&self, x: &Element) -> Result<f64> {
        self.check(x)?;
        Ok(self.characteristic_coefficients(&x.coords)[self.rank])
    }

    /// Smallest and largest Jordan eigenvalue of `x`.
    ///
    /// The spectrum of `L(x)` is `{(λ_i + λ_j)/2}`, whose extremes are the
    /// extreme eigenvalues of `x`.
    pub fn eigenvalue_bounds(&self, x: &Element) -> Result<(f64, f64)> {
        self.check(x)?;
        let eig = SymmetricEigen::new(self.lmatrix(&x.coords)).eigenvalues;
        Ok((eig.min(), eig.max()))
    }

    /// `x ∈ Ω`, the open cone of invertible squares.
    pub fn is_in_cone(&self, x: &Element) -> Result<bool> {
        let (lo, hi) = self.eigenvalue_bounds(x)?;
        Ok(lo > 1e-12 * hi.abs().max(1.0))
    }

    /// `x⁻¹ = P(x)⁻¹ x`.
    pub fn inverse(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        let p = self.pmatrix(&x.coords);
        let inv = p
            .lu()
            .solve(&x.coords)
            .ok_or_else(|| Error::Domain("element is not invertible".into()))?;
        if !inv.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("element is not invertible".into()));
        }
        Ok(self.element_from_vector(inv))
    }

    /// Square root `σ^½` of a cone element, the unique `y ∈ Ω` with `y² = σ`.
    ///
    /// Coupled Denman–Beavers iteration `y ← ½(y + z⁻¹)`, `z ← ½(z + y⁻¹)`
    /// from `y = σ/c`, `z = e`, rescaled by `√c` with `c = tr(σ)/r`. All
    /// iterates lie in the associative subalgebra generated by `σ`.
    pub fn sqrt(&self, sigma: &Element) -> Result<Element> {
        self.check(sigma)?;
        if !self.is_in_cone(sigma)? {
            return Err(Error::Domain(
                "square root requires an element of the open cone".into(),
            ));
        }
        let c = self.trace(sigma)? / self.rank as f64;
        let mut y = &sigma.coords / c;
        let mut z = self.identity.clone();
        for _ in 0..100 {
            let yinv = self.inverse(&self.element_from_vector(y.clone()))?.coords;
            let zinv = self.inverse(&self.element_from_vector(z.clone()))?.coords;
            let next_y = (&y + zinv) * 0.5;
            let next_z = (&z + yinv) * 0.5;
            let step = (&next_y - &y).norm();
            y = next_y;
            z = next_z;
            if step <= 1e-15 * y.norm().max(1.0) {
                break;
            }
        }
        let y = y * c.sqrt();
        let root = self.element_from_vector(y);
        let residual = (self.product_vec(&root.coords, &root.coords) - &sigma.coords).norm();
        if residual > 1e-9 * sigma.norm().max(1.0) {
            return Err(Error::StructuralFailure(format!(
                "square root did not converge (residual {residual:e})"
            )));
        }
        Ok(root)
    }
}
