//! Randomized verification of the algebraic identities behind `Ψ`.
//!
//! [`run_identity_suite`] evaluates every structural property of an algebra
//! and its `Ψ` operator on random inputs and collects one [`CheckResult`] per
//! identity into an [`IdentityReport`].

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, Element, JordanAlgebra};
use crate::endo::{endo_of_q, outer, outer_self, outer_sym};
use crate::psi::{
    build_psi, classify_pair, dims_closed_form, q1s, q2s, qis_direct, trace_psi_closed, CaseLabel,
    CaseTable, PsiOperator, SpectralSplit,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub trials: usize,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &str, max_error: f64, tolerance: f64, trials: usize) -> Self {
        CheckResult {
            name: name.to_string(),
            max_error,
            tolerance,
            trials,
            pass: max_error.is_finite() && max_error <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub algebra: String,
    pub kind: AlgebraKind,
    pub r: usize,
    pub d: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_ambient_dim: Option<usize>,
    #[serde(rename = "dim_F1")]
    pub dim_f1: usize,
    #[serde(rename = "dim_F2")]
    pub dim_f2: usize,
    pub trace_psi_numeric: f64,
    pub trace_psi_closed: f64,
    pub case_table: CaseTable,
    pub checks: Vec<CheckResult>,
    pub seed: u64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random tuples per identity.
    pub trials: usize,
    /// Random `s` for the `q₁ˢ, q₂ˢ` membership checks.
    pub s_trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            trials: 100,
            s_trials: 50,
        }
    }
}

/// Scale used for relative errors of multilinear identities.
fn norm_product(xs: &[&Element]) -> f64 {
    xs.iter()
        .map(|x| x.norm())
        .product::<f64>()
        .max(f64::MIN_POSITIVE)
}

fn rel_to(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}

pub fn run_identity_suite(
    algebra: &JordanAlgebra,
    options: SuiteOptions,
) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let trials = options.trials;
    let mut checks = Vec::new();

    checks.extend(algebra_checks(algebra, trials, &mut rng)?);

    let psi = build_psi(algebra)?;
    let split = psi.spectral_split()?;
    checks.extend(trace_checks(algebra, trials, &mut rng)?);
    checks.extend(psi_checks(algebra, &psi, &split, trials, &mut rng)?);

    let (c1, c2) = dims_closed_form(algebra.rank(), algebra.peirce_d())?;
    let dims_err = split.dim1.abs_diff(c1) + split.dim2.abs_diff(c2);
    checks.push(CheckResult::new(
        "dims_closed_form",
        dims_err as f64,
        0.0,
        1,
    ));
    let closed = trace_psi_closed(algebra.rank(), algebra.peirce_d());
    let numeric = psi.trace_numeric();
    checks.push(CheckResult::new(
        "trace_psi",
        (numeric - closed).abs(),
        1e-8,
        1,
    ));

    let case_table = psi.case_table()?;
    checks.push(CheckResult::new(
        "case_table_values",
        case_table.max_value_deviation(),
        1e-9,
        psi.dim_f(),
    ));
    let count_err: usize = case_table
        .entries
        .values()
        .map(|e| e.count.abs_diff(e.expected_count))
        .sum();
    checks.push(CheckResult::new(
        "case_table_counts",
        count_err as f64,
        0.0,
        8,
    ));
    checks.push(CheckResult::new(
        "case_table_sum",
        (case_table.total() - numeric).abs(),
        1e-8,
        1,
    ));
    checks.push(basis_classification(&psi, &split)?);
    checks.extend(split_checks(algebra, &psi, &split, options, &mut rng)?);

    let pass = checks.iter().all(|c| c.pass);
    Ok(IdentityReport {
        algebra: algebra.name(),
        kind: algebra.kind(),
        r: algebra.rank(),
        d: algebra.peirce_d(),
        n: algebra.dim(),
        spin_ambient_dim: algebra.spin_ambient_dim(),
        dim_f1: split.dim1,
        dim_f2: split.dim2,
        trace_psi_numeric: numeric,
        trace_psi_closed: closed,
        case_table,
        checks,
        seed: options.seed,
        pass,
    })
}

fn algebra_checks(
    alg: &JordanAlgebra,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CheckResult>> {
    let n = alg.dim();
    let mut out = Vec::new();

    let mut sym_err: f64 = 0.0;
    let mut ortho_err: f64 = 0.0;
    let basis = alg.basis();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let d = alg.structure_constant(i, j, k) - alg.structure_constant(j, i, k);
                sym_err = sym_err.max(d.abs());
            }
            let delta = if i == j { 1.0 } else { 0.0 };
            ortho_err = ortho_err.max((alg.inner(&basis[i], &basis[j])? - delta).abs());
        }
    }
    out.push(CheckResult::new(
        "structure_constants_symmetric",
        sym_err,
        1e-15,
        n * n,
    ));
    out.push(CheckResult::new(
        "basis_orthonormal",
        ortho_err,
        1e-12,
        n * n,
    ));

    let jordan_defect = |x: &Element, y: &Element| -> Result<f64> {
        let x2 = alg.square(x)?;
        let lhs = alg.product(&x2, &alg.product(x, y)?)?;
        let rhs = alg.product(x, &alg.product(&x2, y)?)?;
        Ok((&lhs - &rhs).norm() / (1.0 + x.norm().powi(3) * y.norm()))
    };
    let mut jordan_err: f64 = 0.0;
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            let x = &basis[i] + &basis[(i + j) % n];
            jordan_err = jordan_err.max(jordan_defect(&x, &basis[j])?);
            count += 1;
        }
    }
    for _ in 0..trials {
        let x = alg.random_element(rng);
        let y = alg.random_element(rng);
        jordan_err = jordan_err.max(jordan_defect(&x, &y)?);
        count += 1;
    }
    out.push(CheckResult::new(
        "jordan_identity",
        jordan_err,
        1e-10,
        count,
    ));

    let mut lsym: f64 = 0.0;
    let mut power: f64 = 0.0;
    for t in 0..(n + trials) {
        let x = if t < n {
            basis[t].clone()
        } else {
            alg.random_element(rng)
        };
        let l = alg.lmatrix(x.coords());
        lsym = lsym.max(rel_to((&l - l.transpose()).amax(), l.amax()));
        if t >= n {
            let x2 = alg.square(&x)?;
            let a = alg.product(&x2, &x2)?;
            let b = alg.product(&x, &alg.product(&x, &x2)?)?;
            power = power.max((&a - &b).norm() / (1.0 + x.norm().powi(4)));
        }
    }
    out.push(CheckResult::new("l_symmetric", lsym, 1e-12, n + trials));
    out.push(CheckResult::new("power_associative", power, 1e-10, trials));

    let frame = alg.standard_frame();
    let frame_ok = alg.validate_frame(&frame).is_ok();
    out.push(CheckResult::new(
        "frame",
        if frame_ok { 0.0 } else { 1.0 },
        0.0,
        1,
    ));

    let peirce = alg.peirce_basis(&frame)?;
    let mut peirce_err: f64 = 0.0;
    for block in &peirce.blocks {
        let (s, t) = (block.label.s, block.label.t);
        for y in &block.elements {
            for (u, c) in frame.idempotents.iter().enumerate() {
                let factor = match (block.label.is_diagonal(), u == s || u == t) {
                    (true, true) => 1.0,
                    (false, true) => 0.5,
                    _ => 0.0,
                };
                let ly = alg.product(c, y)?;
                peirce_err = peirce_err.max(ly.max_abs_diff(&y.scale(factor)));
            }
            if !block.label.is_diagonal() {
                // unit x ∈ V_st squares to ½(c_s + c_t)
                let want = (&frame.idempotents[s] + &frame.idempotents[t]).scale(0.5);
                peirce_err = peirce_err.max(alg.square(y)?.max_abs_diff(&want));
            }
        }
    }
    out.push(CheckResult::new("peirce_blocks", peirce_err, 1e-10, n));
    Ok(out)
}

fn trace_checks(
    alg: &JordanAlgebra,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CheckResult>> {
    let mut e1: f64 = 0.0;
    let mut e2: f64 = 0.0;
    let mut e3: f64 = 0.0;
    let mut e4: f64 = 0.0;
    let mut e5: f64 = 0.0;
    for _ in 0..trials {
        let xs: Vec<Element> = (0..6).map(|_| alg.random_element(rng)).collect();
        let (a, b, c, d) = (&xs[0], &xs[1], &xs[2], &xs[3]);
        let tr = |u: &Element, v: &Element| alg.inner(u, v);

        // Tr(a ⊗ b) = tr(ab)
        let ab = outer(a, b)?;
        e1 = e1.max((ab.trace() - tr(a, b)?).abs() / norm_product(&[a, b]));

        // Tr[(a ⊗ b)(c ⊗ d)] = tr(ad) tr(bc)
        let cd = outer(c, d)?;
        let lhs = (&ab * &cd).trace();
        let rhs = tr(a, d)? * tr(b, c)?;
        e2 = e2.max((lhs - rhs).abs() / norm_product(&[a, b, c, d]));

        // Tr[(a₁⊗b₁)(a₂⊗b₂)(a₃⊗b₃)] = tr(b₁a₂) tr(b₂a₃) tr(b₃a₁)
        let (a3, b3) = (&xs[4], &xs[5]);
        let m3 = outer(a3, b3)?;
        let lhs = (&ab * &cd * &m3).trace();
        let rhs = tr(b, c)? * tr(d, a3)? * tr(b3, a)?;
        e3 = e3.max((lhs - rhs).abs() / norm_product(&[a, b, c, d, a3, b3]));

        // Tr[L(a)L(b)(c ⊗ d)] = tr[(a(bc))d]
        let la = alg.lmatrix(a.coords());
        let lb = alg.lmatrix(b.coords());
        let lhs = (&la * &lb * &cd).trace();
        let abc = alg.product(a, &alg.product(b, c)?)?;
        let rhs = tr(&abc, d)?;
        e4 = e4.max((lhs - rhs).abs() / norm_product(&[a, b, c, d]));

        // Tr(P(a)(b ⊗ c)) = tr[(P(a)b)c]
        let pa = alg.pmap(a)?;
        let bc = outer(b, c)?;
        let lhs = (pa.matrix() * &bc).trace();
        let rhs = tr(&pa.apply(b)?, c)?;
        e5 = e5.max((lhs - rhs).abs() / norm_product(&[a, a, b, c]));
    }
    Ok(vec![
        CheckResult::new("trace_outer", e1, 1e-10, trials),
        CheckResult::new("trace_outer_pair", e2, 1e-10, trials),
        CheckResult::new("trace_outer_cyclic3", e3, 1e-10, trials),
        CheckResult::new("trace_l_l_outer", e4, 1e-10, trials),
        CheckResult::new("trace_p_outer", e5, 1e-10, trials),
    ])
}

fn psi_checks(
    alg: &JordanAlgebra,
    psi: &PsiOperator,
    split: &SpectralSplit,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CheckResult>> {
    let dh = alg.d_half();
    let mut rank_one: f64 = 0.0;
    let mut clm: f64 = 0.0;
    for _ in 0..trials {
        let y = alg.random_element(rng);
        let yy = outer_self(&y);
        let py = alg.pmap(&y)?;
        let got = psi.apply(&yy)?;
        rank_one = rank_one.max(rel_to(got.max_abs_diff(&py), py.norm()));
        // Ψ(P(y)) = d' y ⊗ y + (1 − d') P(y)
        let got = psi.apply(&py)?;
        let want = &yy.scale(dh) + &py.scale(1.0 - dh);
        clm = clm.max(rel_to(got.max_abs_diff(&want), want.norm()));
    }
    let (sum, prod) = split.complement_residual();
    Ok(vec![
        CheckResult::new("psi_rank_one", rank_one, 1e-10, trials),
        CheckResult::new("psi_clm", clm, 1e-10, trials),
        CheckResult::new("psi_symmetric", psi.symmetry_residual(), 1e-10, 1),
        CheckResult::new("psi_spectrum", split.eigen_deviation, 1e-9, psi.dim_f()),
        CheckResult::new(
            "projector_idempotent",
            split.idempotence_residual(),
            1e-9,
            2,
        ),
        CheckResult::new("projector_complement", sum.max(prod), 1e-9, 2),
    ])
}

/// `f_ℓ ∈ F₁` exactly for cases `A1, B2, B4`; no `f_ℓ` lies in `F₂`.
fn basis_classification(psi: &PsiOperator, split: &SpectralSplit) -> Result<CheckResult> {
    let labels = psi.peirce().labels();
    let mut wrong = 0usize;
    for (l, &(i, j)) in psi.basis_f().iter().enumerate() {
        let case = classify_pair(labels[i], labels[j], i == j)?;
        let in_f1 = split.proj2.column(l).amax() <= 1e-9;
        let in_f2 = split.proj1.column(l).amax() <= 1e-9;
        let expect_f1 = matches!(case, CaseLabel::A1 | CaseLabel::B2 | CaseLabel::B4);
        if in_f1 != expect_f1 || in_f2 {
            wrong += 1;
        }
    }
    Ok(CheckResult::new(
        "basis_classification",
        wrong as f64,
        0.0,
        psi.dim_f(),
    ))
}

fn split_checks(
    alg: &JordanAlgebra,
    psi: &PsiOperator,
    split: &SpectralSplit,
    options: SuiteOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CheckResult>> {
    let dh = alg.d_half();
    let mut out = Vec::new();

    let mut in1: f64 = 0.0;
    let mut in2: f64 = 0.0;
    for _ in 0..options.s_trials {
        let s = alg.random_element(rng);
        let f1 = q1s(alg, &s)?.endo;
        let f2 = q2s(alg, &s)?.endo;
        in1 = in1.max(rel_to(split.project2(&f1)?.matrix().amax(), f1.norm()));
        in2 = in2.max(rel_to(split.project1(&f2)?.matrix().amax(), f2.norm()));
    }
    out.push(CheckResult::new("q1s_in_F1", in1, 1e-9, options.s_trials));
    out.push(CheckResult::new("q2s_in_F2", in2, 1e-9, options.s_trials));

    // matrix forms of q_iˢ against direct evaluation, by polarization
    let direct_trials = 3;
    let mut direct: f64 = 0.0;
    for _ in 0..direct_trials {
        let s = alg.random_element(rng);
        for i in [1u8, 2] {
            let form = if i == 1 { q1s(alg, &s)? } else { q2s(alg, &s)? };
            let f = endo_of_q(alg, |x| qis_direct(alg, i, &s, x))?;
            direct = direct.max(rel_to(f.max_abs_diff(&form.endo), form.endo.norm()));
        }
    }
    out.push(CheckResult::new(
        "qis_direct_evaluation",
        direct,
        1e-10,
        2 * direct_trials,
    ));

    let random_f = |rng: &mut ChaCha8Rng| -> DVector<f64> {
        let a = alg.random_element(rng);
        let b = alg.random_element(rng);
        let c = alg.random_element(rng);
        let f = &outer_sym(&a, &b).expect("same algebra") + &alg.pmap(&c).expect("pmap");
        psi.to_fcoords(&f).expect("same algebra")
    };

    let mut orth: f64 = 0.0;
    let mut member: f64 = 0.0;
    let mut strict = true;
    let trials = options.trials.min(20);
    for _ in 0..trials {
        let g = random_f(rng);
        let h = random_f(rng);
        let f1 = &split.proj1 * &g;
        let f2 = &split.proj2 * &h;
        orth = orth.max(f1.dot(&f2).abs() / (f1.norm() * f2.norm()).max(1.0));

        // Tr[Ψ(f) f] = Tr(f²) − (1 + d')‖P₂ f‖², so equality holds iff P₂ f = 0
        let gap_general = g.norm_squared() - g.dot(&(psi.matrix() * &g));
        let p2g = (&split.proj2 * &g).norm_squared();
        member = member.max(rel_to(
            (gap_general - (1.0 + dh) * p2g).abs(),
            g.norm_squared(),
        ));
        if alg.rank() > 1 && gap_general <= 1e-9 * g.norm_squared() {
            strict = false;
        }
        let gap_f1 = f1.norm_squared() - f1.dot(&(psi.matrix() * &f1));
        member = member.max(rel_to(gap_f1.abs(), f1.norm_squared()));
    }
    out.push(CheckResult::new("f1_orthogonal_f2", orth, 1e-9, trials));
    out.push(CheckResult::new(
        "membership_criterion",
        if strict { member } else { f64::INFINITY },
        1e-9,
        trials,
    ));

    // y ⊗ y = [d' y⊗y + P(y)]/(1+d') + [y⊗y − P(y)]/(1+d')
    let mut dec: f64 = 0.0;
    for _ in 0..trials {
        let y = alg.random_element(rng);
        let yy = outer_self(&y);
        let py = alg.pmap(&y)?;
        let want = (&yy.scale(dh) + &py).scale(1.0 / (1.0 + dh));
        let got = split.project1(&yy)?;
        dec = dec.max(rel_to(got.max_abs_diff(&want), want.norm()));
    }
    out.push(CheckResult::new("decompose_rank_one", dec, 1e-9, trials));

    if alg.kind() == AlgebraKind::SpinFactor {
        // S = e ⊗ e − P(e) spans F₂ and acts as (x₀, x⃗) ↦ (x₀, −x⃗)
        let e = alg.identity();
        let s_map = &outer_self(&e) - &alg.pmap(&e)?;
        let mut err = split.project1(&s_map)?.matrix().amax();
        let reflection = DMatrix::from_fn(alg.dim(), alg.dim(), |i, j| match (i, j) {
            (0, 0) => 1.0,
            (i, j) if i == j => -1.0,
            _ => 0.0,
        });
        err = err.max((s_map.matrix() - reflection).amax());
        out.push(CheckResult::new("spin_reflection_in_F2", err, 1e-9, 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_algebras() {
        let algebras = [
            JordanAlgebra::matrix(AlgebraKind::SymReal, 1).unwrap(),
            JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap(),
            JordanAlgebra::matrix(AlgebraKind::HermComplex, 2).unwrap(),
            JordanAlgebra::spin(3).unwrap(),
        ];
        let options = SuiteOptions {
            seed: 7,
            trials: 20,
            s_trials: 10,
        };
        for alg in &algebras {
            let report = run_identity_suite(alg, options).unwrap();
            assert!(report.pass, "{}: {:?}", alg.name(), report.failing());
        }
    }

    #[test]
    fn sym_rank_two_case_counts() {
        let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
        let report = run_identity_suite(&alg, SuiteOptions::default()).unwrap();
        let count = |c| report.case_table.get(c).count;
        assert_eq!(count(CaseLabel::A1), 2);
        assert_eq!(count(CaseLabel::A2), 1);
        assert_eq!(count(CaseLabel::B2), 2);
        assert_eq!(count(CaseLabel::B4), 0);
        assert_eq!(count(CaseLabel::B5), 0);
        assert_eq!((report.dim_f1, report.dim_f2), (5, 1));
    }

    #[test]
    fn report_is_deterministic() {
        let alg = JordanAlgebra::spin(4).unwrap();
        let options = SuiteOptions {
            seed: 3,
            trials: 5,
            s_trials: 5,
        };
        let a = serde_json::to_string(&run_identity_suite(&alg, options).unwrap()).unwrap();
        let b = serde_json::to_string(&run_identity_suite(&alg, options).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
