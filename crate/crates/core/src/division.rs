//! The four normed division algebras ℝ, ℂ, ℍ, 𝕆 as coordinate tuples.
//!
//! Each algebra of dimension `d ∈ {1, 2, 4, 8}` is stored as a `d × d`
//! multiplication table over the standard units `u_0 = 1, u_1, …, u_{d-1}`:
//! `u_i u_j = sign · u_k`. The tables are produced once by the Cayley–Dickson
//! doubling `(a, b)(c, d) = (ac − d̄b, da + bc̄)`, which yields the usual
//! complex and Hamilton tables and an octonion table whose seven imaginary
//! units multiply along the lines of a Fano plane.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
struct TableEntry {
    index: usize,
    sign: f64,
}

#[derive(Debug)]
pub struct DivisionAlgebra {
    dim: usize,
    table: Vec<TableEntry>,
}

impl DivisionAlgebra {
    /// Returns the shared table for dimension 1, 2, 4 or 8.
    pub fn of_dim(dim: usize) -> Option<&'static DivisionAlgebra> {
        static TABLES: [OnceLock<DivisionAlgebra>; 4] = [
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
        ];
        let slot = match dim {
            1 => 0,
            2 => 1,
            4 => 2,
            8 => 3,
            _ => return None,
        };
        Some(TABLES[slot].get_or_init(|| DivisionAlgebra::build(dim)))
    }

    fn build(dim: usize) -> Self {
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut ui = vec![0.0; dim];
                let mut uj = vec![0.0; dim];
                ui[i] = 1.0;
                uj[j] = 1.0;
                let prod = cayley_dickson_mul(&ui, &uj);
                let (index, value) = prod
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0.0)
                    .map(|(k, v)| (k, *v))
                    .expect("product of units is a signed unit");
                table.push(TableEntry { index, sign: value });
            }
        }
        DivisionAlgebra { dim, table }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(index, sign)` with `u_i u_j = sign · u_index`.
    pub fn unit_product(&self, i: usize, j: usize) -> (usize, f64) {
        let e = self.table[i * self.dim + j];
        (e.index, e.sign)
    }

    /// Accumulates `scale · a b` into `out`.
    pub fn mul_add(&self, a: &[f64], b: &[f64], scale: f64, out: &mut [f64]) {
        let d = self.dim;
        for i in 0..d {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0.0 {
                    continue;
                }
                let e = self.table[i * d + j];
                out[e.index] += scale * e.sign * a[i] * b[j];
            }
        }
    }

    pub fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.mul_add(a, b, 1.0, &mut out);
        out
    }

    pub fn conj(&self, a: &[f64]) -> Vec<f64> {
        let mut out = a.to_vec();
        for v in out.iter_mut().skip(1) {
            *v = -*v;
        }
        out
    }
}

fn cayley_dickson_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[f64]| {
        let mut out = v.to_vec();
        for t in out.iter_mut().skip(1) {
            *t = -*t;
        }
        out
    };
    let ac = cayley_dickson_mul(a, c);
    let dbar_b = cayley_dickson_mul(&conj(d), b);
    let da = cayley_dickson_mul(d, a);
    let b_cbar = cayley_dickson_mul(b, &conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&dbar_b).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p + q));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum()
    }

    fn pseudo(seed: u64, len: usize) -> Vec<f64> {
        // small deterministic LCG, good enough for table checks
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (0..len)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn imaginary_units_square_to_minus_one() {
        for dim in [2, 4, 8] {
            let k = DivisionAlgebra::of_dim(dim).unwrap();
            assert_eq!(k.unit_product(0, 0), (0, 1.0));
            for i in 1..dim {
                assert_eq!(k.unit_product(i, i), (0, -1.0));
                assert_eq!(k.unit_product(0, i), (i, 1.0));
                assert_eq!(k.unit_product(i, 0), (i, 1.0));
                for j in 1..dim {
                    if i != j {
                        let (a, sa) = k.unit_product(i, j);
                        let (b, sb) = k.unit_product(j, i);
                        assert_eq!(a, b);
                        assert_eq!(sa, -sb, "distinct imaginary units anticommute");
                    }
                }
            }
        }
    }

    #[test]
    fn quaternion_table_is_hamilton() {
        let h = DivisionAlgebra::of_dim(4).unwrap();
        // i j = k, j k = i, k i = j
        assert_eq!(h.unit_product(1, 2), (3, 1.0));
        assert_eq!(h.unit_product(2, 3), (1, 1.0));
        assert_eq!(h.unit_product(3, 1), (2, 1.0));
    }

    #[test]
    fn norms_are_multiplicative() {
        for dim in [1, 2, 4, 8] {
            let k = DivisionAlgebra::of_dim(dim).unwrap();
            for t in 0..50 {
                let a = pseudo(t, dim);
                let b = pseudo(t + 1000, dim);
                let ab = k.mul(&a, &b);
                assert!((norm2(&ab) - norm2(&a) * norm2(&b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn octonions_are_alternative_not_associative() {
        let o = DivisionAlgebra::of_dim(8).unwrap();
        let mut worst_assoc: f64 = 0.0;
        for t in 0..20 {
            let a = pseudo(t, 8);
            let b = pseudo(t + 77, 8);
            let c = pseudo(t + 155, 8);
            // (aa)b = a(ab)
            let lhs = o.mul(&o.mul(&a, &a), &b);
            let rhs = o.mul(&a, &o.mul(&a, &b));
            for (x, y) in lhs.iter().zip(&rhs) {
                assert!((x - y).abs() < 1e-12);
            }
            let l = o.mul(&o.mul(&a, &b), &c);
            let r = o.mul(&a, &o.mul(&b, &c));
            let diff = l
                .iter()
                .zip(&r)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst_assoc = worst_assoc.max(diff);
        }
        assert!(worst_assoc > 1e-3);
    }

    #[test]
    fn conjugation_reverses_products() {
        let h = DivisionAlgebra::of_dim(8).unwrap();
        let a = pseudo(3, 8);
        let b = pseudo(4, 8);
        let lhs = h.conj(&h.mul(&a, &b));
        let rhs = h.mul(&h.conj(&b), &h.conj(&a));
        for (x, y) in lhs.iter().zip(&rhs) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
