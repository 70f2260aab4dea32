//! Concrete realizations used to build structure constants and to move
//! between coordinates and the familiar matrix / Lorentz pictures.

use std::f64::consts::SQRT_2;

use crate::division::DivisionAlgebra;

/// Hermitian `r × r` matrices over ℝ, ℂ, ℍ or 𝕆, with Jordan product
/// `(xy + yx)/2`.
///
/// Entries are laid out row-major, `d` reals per entry:
/// `entries[(i * r + j) * d + k]` is the `k`-th component of `x_ij`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MatrixModel {
    pub r: usize,
    pub d: usize,
}

impl MatrixModel {
    fn field(&self) -> &'static DivisionAlgebra {
        DivisionAlgebra::of_dim(self.d).expect("d is 1, 2, 4 or 8")
    }

    pub fn entry_len(&self) -> usize {
        self.r * self.r * self.d
    }

    pub fn dim(&self) -> usize {
        self.r + self.d * self.r * (self.r - 1) / 2
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.r + j) * self.d
    }

    /// Coordinate index of the off-diagonal unit `k` in block `(s, t)`, `s < t`.
    pub fn off_index(&self, s: usize, t: usize, k: usize) -> usize {
        let r = self.r;
        // number of pairs (a, b) with a < b that precede (s, t) lexicographically
        let before = s * (2 * r - s - 1) / 2 + (t - s - 1);
        r + before * self.d + k
    }

    pub fn coords_to_entries(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.entry_len()];
        for s in 0..self.r {
            let o = self.offset(s, s);
            out[o] = coords[s];
        }
        for s in 0..self.r {
            for t in (s + 1)..self.r {
                for k in 0..self.d {
                    let c = coords[self.off_index(s, t, k)] / SQRT_2;
                    out[self.offset(s, t) + k] += c;
                    out[self.offset(t, s) + k] += if k == 0 { c } else { -c };
                }
            }
        }
        out
    }

    /// Coordinates of the Hermitian part of a matrix.
    pub fn entries_to_coords(&self, entries: &[f64]) -> Vec<f64> {
        let mut coords = vec![0.0; self.dim()];
        for s in 0..self.r {
            coords[s] = entries[self.offset(s, s)];
        }
        for s in 0..self.r {
            for t in (s + 1)..self.r {
                for k in 0..self.d {
                    let upper = entries[self.offset(s, t) + k];
                    let lower = entries[self.offset(t, s) + k];
                    let lower_conj = if k == 0 { lower } else { -lower };
                    coords[self.off_index(s, t, k)] = SQRT_2 * 0.5 * (upper + lower_conj);
                }
            }
        }
        coords
    }

    pub fn matmul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let field = self.field();
        let mut out = vec![0.0; self.entry_len()];
        for i in 0..self.r {
            for j in 0..self.r {
                let o = self.offset(i, j);
                for l in 0..self.r {
                    let x = &a[self.offset(i, l)..self.offset(i, l) + self.d];
                    let y = &b[self.offset(l, j)..self.offset(l, j) + self.d];
                    field.mul_add(x, y, 1.0, &mut out[o..o + self.d]);
                }
            }
        }
        out
    }

    pub fn jordan(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let ab = self.matmul(a, b);
        let ba = self.matmul(b, a);
        ab.iter().zip(&ba).map(|(x, y)| 0.5 * (x + y)).collect()
    }

    /// `u u*` for a column `u` with `r` entries of `d` components each.
    pub fn outer_self(&self, u: &[f64]) -> Vec<f64> {
        let field = self.field();
        let mut out = vec![0.0; self.entry_len()];
        for i in 0..self.r {
            let ui = &u[i * self.d..(i + 1) * self.d];
            for j in 0..self.r {
                let uj_conj = field.conj(&u[j * self.d..(j + 1) * self.d]);
                let o = self.offset(i, j);
                field.mul_add(ui, &uj_conj, 1.0, &mut out[o..o + self.d]);
            }
        }
        out
    }

    /// `U U*` for an `r × r` matrix `U` in entry layout.
    pub fn gram(&self, u: &[f64]) -> Vec<f64> {
        let field = self.field();
        let mut out = vec![0.0; self.entry_len()];
        for i in 0..self.r {
            for j in 0..self.r {
                let o = self.offset(i, j);
                for l in 0..self.r {
                    let x = &u[self.offset(i, l)..self.offset(i, l) + self.d];
                    let y = field.conj(&u[self.offset(j, l)..self.offset(j, l) + self.d]);
                    field.mul_add(x, &y, 1.0, &mut out[o..o + self.d]);
                }
            }
        }
        out
    }
}

/// The spin factor `ℝ × E` with `(x₀, x⃗)(y₀, y⃗) = (x₀y₀ + x⃗·y⃗, x₀y⃗ + y₀x⃗)`.
///
/// Coordinates are `√2 · (x₀, x⃗)` so that they are orthonormal for
/// `tr(x ∘ y)` with `tr(x₀, x⃗) = 2x₀`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SpinModel {
    pub ambient: usize,
}

impl SpinModel {
    pub fn dim(&self) -> usize {
        self.ambient + 1
    }

    pub fn coords_to_parts(&self, coords: &[f64]) -> Vec<f64> {
        coords.iter().map(|c| c / SQRT_2).collect()
    }

    pub fn parts_to_coords(&self, parts: &[f64]) -> Vec<f64> {
        parts.iter().map(|c| c * SQRT_2).collect()
    }

    pub fn product(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        out[0] = x.iter().zip(y).map(|(a, b)| a * b).sum();
        for k in 1..self.dim() {
            out[k] = x[0] * y[k] + y[0] * x[k];
        }
        out
    }
}
