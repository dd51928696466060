//! The Calabi-Yau trace on finitely generated modules over a semisimple
//! symmetric Frobenius algebra: λ ∘ ev ∘ Ψ⁻¹, together with the trace
//! pairing, its structural identities (symmetry, additivity, matrix form),
//! a certification routine, and the degeneracy witness for module pairs
//! whose composites all vanish.

use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::frobenius::{extract_block_weights, is_frobenius, is_symmetric, FrobeniusForm};
use crate::linalg::Matrix;
use crate::modules::{
    direct_sum_modules, dual_basis, ev_map, hom_basis, psi_data, HomSpace, LeftModule,
};
use crate::sample;

/// Precomputed trace data for one module: tr(f) = ⟨functional, coords(f)⟩.
pub struct TraceMachine {
    pub end_space: HomSpace,
    functional: Vec<Scalar>,
}

impl TraceMachine {
    pub fn new(m: &LeftModule, form: &FrobeniusForm) -> Result<TraceMachine> {
        if !is_symmetric(m.algebra(), form)? {
            return Err(Error::AsymmetricForm);
        }
        let data = psi_data(m, m)?;
        let psi_inv = data.psi_inverse()?;
        let ev = ev_map(m, &data.p_dual, &data.space)?;
        // λᵀ · ev · Ψ⁻¹ as a row vector over End(M) coordinates
        let lam_ev = ev.transpose().mul_vec(&form.lambda)?;
        let functional = psi_inv.transpose().mul_vec(&lam_ev)?;
        Ok(TraceMachine {
            end_space: data.hom,
            functional,
        })
    }

    pub fn trace(&self, f: &Matrix) -> Result<Scalar> {
        let coords = self.end_space.coords_of(f)?;
        Ok(self.pair(&coords, f.field()))
    }

    /// Traces of many endomorphisms with one elimination.
    pub fn trace_many(&self, fs: &[Matrix]) -> Result<Vec<Scalar>> {
        if fs.is_empty() {
            return Ok(Vec::new());
        }
        let field = fs[0].field();
        let coords = self.end_space.coords_of_many(fs)?;
        Ok(coords.iter().map(|c| self.pair(c, field)).collect())
    }

    fn pair(&self, coords: &[Scalar], field: crate::field::FieldSpec) -> Scalar {
        let mut acc = field.zero();
        for (c, t) in coords.iter().zip(&self.functional) {
            if !c.is_zero() && !t.is_zero() {
                acc = acc.add(&c.mul(t));
            }
        }
        acc
    }
}

/// tr_M^λ(f) = λ(ev(Ψ⁻¹(f))) for an endomorphism f of M.
///
/// Refuses non-symmetric forms; fails with `SingularPsi` when Ψ is not
/// invertible (non-projective M over a non-semisimple algebra) and with
/// `NotIntertwiner` when f is not A-linear.
pub fn hs_trace(m: &LeftModule, form: &FrobeniusForm, f: &Matrix) -> Result<Scalar> {
    TraceMachine::new(m, form)?.trace(f)
}

/// Independent route to the same number: tr(f) = λ(Σᵢ fᵢ(f(pᵢ))) from any
/// dual basis {(fᵢ, pᵢ)} of M.
pub fn hs_trace_via_dual_basis(m: &LeftModule, form: &FrobeniusForm, f: &Matrix) -> Result<Scalar> {
    if !is_symmetric(m.algebra(), form)? {
        return Err(Error::AsymmetricForm);
    }
    // reject non-intertwiners to match the main route's contract
    hom_basis(m, m)?.coords_of(f)?;
    let db = dual_basis(m)?;
    let field = m.algebra().field();
    let mut acc = field.zero();
    for (func, elem) in db.functionals.iter().zip(&db.elements) {
        let moved = f.mul_vec(elem)?;
        let a = func.mul_vec(&moved)?;
        acc = acc.add(&form.eval(&a));
    }
    Ok(acc)
}

/// The Gram matrix ⟨f, g⟩ = tr_M^λ(g ∘ f) over bases of Hom(M,N) and
/// Hom(N,M).
pub struct PairingGram {
    pub hom_fwd: HomSpace,
    pub hom_bwd: HomSpace,
    pub gram: Matrix,
}

pub fn trace_pairing(m: &LeftModule, n: &LeftModule, form: &FrobeniusForm) -> Result<PairingGram> {
    let machine = TraceMachine::new(m, form)?;
    let hom_fwd = hom_basis(m, n)?;
    let hom_bwd = hom_basis(n, m)?;
    let field = m.algebra().field();
    let mut composites = Vec::with_capacity(hom_fwd.dim() * hom_bwd.dim());
    for f in &hom_fwd.basis {
        for g in &hom_bwd.basis {
            composites.push(g.mul(f)?);
        }
    }
    let values = machine.trace_many(&composites)?;
    let mut gram = Matrix::zeros(field, hom_fwd.dim(), hom_bwd.dim());
    for (idx, t) in values.into_iter().enumerate() {
        gram.set(idx / hom_bwd.dim(), idx % hom_bwd.dim(), t);
    }
    Ok(PairingGram {
        hom_fwd,
        hom_bwd,
        gram,
    })
}

/// Non-degeneracy of the trace pairing between Hom(M,N) and Hom(N,M).
pub fn pairing_nondegenerate(m: &LeftModule, n: &LeftModule, form: &FrobeniusForm) -> Result<bool> {
    let p = trace_pairing(m, n, form)?;
    Ok(p.gram.rank() == p.hom_fwd.dim() && p.gram.rank() == p.hom_bwd.dim())
}

/// tr_M(g∘f) = tr_N(f∘g) for f: M → N, g: N → M.
pub fn check_symmetry(
    m: &LeftModule,
    n: &LeftModule,
    form: &FrobeniusForm,
    f: &Matrix,
    g: &Matrix,
) -> Result<bool> {
    let lhs = hs_trace(m, form, &g.mul(f)?)?;
    let rhs = hs_trace(n, form, &f.mul(g)?)?;
    Ok(lhs == rhs)
}

/// tr_{x⊕y}(f⊕g) = tr_x(f) + tr_y(g).
pub fn check_additivity(
    x: &LeftModule,
    y: &LeftModule,
    form: &FrobeniusForm,
    f: &Matrix,
    g: &Matrix,
) -> Result<bool> {
    let sum = direct_sum_modules(&[x, y])?;
    let fg = f.direct_sum(g)?;
    let lhs = hs_trace(&sum.module, form, &fg)?;
    let rhs = hs_trace(x, form, f)?.add(&hs_trace(y, form, g)?);
    Ok(lhs == rhs)
}

/// tr(f) = Σ tr(f_ii) for an endomorphism of a direct sum written in block
/// matrix form; the diagonal blocks are p_i ∘ f ∘ ι_i.
pub fn check_matrix_form(parts: &[&LeftModule], form: &FrobeniusForm, f: &Matrix) -> Result<bool> {
    let sum = direct_sum_modules(parts)?;
    let total = hs_trace(&sum.module, form, f)?;
    let field = sum.module.algebra().field();
    let mut acc = field.zero();
    for (i, part) in parts.iter().enumerate() {
        let block = sum.projections[i].mul(f)?.mul(&sum.injections[i])?;
        acc = acc.add(&hs_trace(part, form, &block)?);
    }
    Ok(total == acc)
}

/// A pair of modules with nonzero hom spaces in both directions whose
/// composites all vanish. No trace on the module category can make the
/// pairing between these hom spaces non-degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub hom_fwd_dim: usize,
    pub hom_bwd_dim: usize,
}

/// Searches for the degeneracy obstruction between M and N. Works in any
/// characteristic; returns a witness exactly when both hom spaces are
/// nonzero and every composite g∘f is zero.
pub fn cy_obstruction_witness(
    m: &LeftModule,
    n: &LeftModule,
) -> Result<Option<ObstructionWitness>> {
    let fwd = hom_basis(m, n)?;
    let bwd = hom_basis(n, m)?;
    if fwd.dim() == 0 || bwd.dim() == 0 {
        return Ok(None);
    }
    for f in &fwd.basis {
        for g in &bwd.basis {
            if !g.mul(f)?.is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(ObstructionWitness {
        hom_fwd_dim: fwd.dim(),
        hom_bwd_dim: bwd.dim(),
    }))
}

/// One record of a certification run.
#[derive(Debug, Clone)]
pub struct CertCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Report of `certify_cy`: the per-simple trace weights plus the verdicts of
/// symmetry and non-degeneracy checks on all simple pairs and on sampled
/// composite modules.
#[derive(Debug, Clone)]
pub struct CyCertification {
    pub weights: Vec<Scalar>,
    pub checks: Vec<CertCheck>,
}

impl CyCertification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Certifies the Calabi-Yau structure of the module category of (A, λ).
/// Structural preconditions (split semisimple, λ symmetric Frobenius) fail
/// as errors; property violations are reported as failed checks with
/// witnesses.
pub fn certify_cy(
    a: &std::sync::Arc<Algebra>,
    form: &FrobeniusForm,
    seed: u64,
    max_sample_dim: usize,
) -> Result<CyCertification> {
    if !is_symmetric(a, form)? {
        return Err(Error::AsymmetricForm);
    }
    if !is_frobenius(a, form)? {
        return Err(Error::NotFrobenius);
    }
    let wd = a.wedderburn(seed)?;
    let simples = crate::modules::simple_modules(a, &wd)?;
    let mut checks = Vec::new();
    let mut weights = Vec::new();
    for (i, v) in simples.iter().enumerate() {
        let id = Matrix::identity(a.field(), v.dim());
        let t = hs_trace(v, form, &id)?;
        checks.push(CertCheck {
            name: format!("simple_{i}_weight_nonzero"),
            passed: !t.is_zero(),
            witness: if t.is_zero() {
                Some(format!("tr(id) = 0 on simple {i}"))
            } else {
                None
            },
        });
        weights.push(t);
    }
    // cross-check against the block weights of the form
    match extract_block_weights(a, form, &wd, &simples) {
        Ok(extracted) => checks.push(CertCheck {
            name: "weights_match_block_decomposition".into(),
            passed: extracted == weights,
            witness: if extracted == weights {
                None
            } else {
                Some(format!("extracted {extracted:?} vs traced {weights:?}"))
            },
        }),
        Err(e) => checks.push(CertCheck {
            name: "weights_match_block_decomposition".into(),
            passed: false,
            witness: Some(e.to_string()),
        }),
    }
    // non-degeneracy on all simple pairs
    for (i, vi) in simples.iter().enumerate() {
        for (j, vj) in simples.iter().enumerate() {
            let ok = pairing_nondegenerate(vi, vj, form)?;
            checks.push(CertCheck {
                name: format!("pairing_simples_{i}_{j}"),
                passed: ok,
                witness: if ok {
                    None
                } else {
                    Some(format!("degenerate Gram between simples {i} and {j}"))
                },
            });
        }
    }
    // sampled composite modules
    let inst = sample::Instance {
        algebra: std::sync::Arc::clone(a),
        wd,
        simples,
        form: form.clone(),
        weights: weights.clone(),
    };
    let mut rng: ChaCha8Rng = sample::rng_for(seed, 0xCE27);
    for k in 0..3u32 {
        let m = sample::random_module(&mut rng, &inst, max_sample_dim)?;
        let n = sample::random_module(&mut rng, &inst, max_sample_dim)?;
        let ok = pairing_nondegenerate(&m, &n, form)?;
        checks.push(CertCheck {
            name: format!("pairing_sample_{k}"),
            passed: ok,
            witness: if ok {
                None
            } else {
                Some(format!(
                    "degenerate Gram on sampled modules of dims {} and {}",
                    m.dim(),
                    n.dim()
                ))
            },
        });
        let f = sample::random_endomorphism(&mut rng, &m)?;
        let fwd = hom_basis(&m, &n)?;
        if fwd.dim() > 0 {
            let g_mn = &fwd.basis[0];
            let bwd = hom_basis(&n, &m)?;
            let g_nm = &bwd.basis[0];
            let sym = check_symmetry(&m, &n, form, g_mn, g_nm)?;
            checks.push(CertCheck {
                name: format!("symmetry_sample_{k}"),
                passed: sym,
                witness: if sym {
                    None
                } else {
                    Some("tr(g∘f) != tr(f∘g)".into())
                },
            });
        }
        let add = check_additivity(
            &m,
            &n,
            form,
            &f,
            &Matrix::zeros(a.field(), n.dim(), n.dim()),
        )?;
        checks.push(CertCheck {
            name: format!("additivity_sample_{k}"),
            passed: add,
            witness: if add {
                None
            } else {
                Some("additivity failed".into())
            },
        });
    }
    Ok(CyCertification { weights, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, product_algebra};
    use crate::field::FieldSpec;
    use crate::frobenius::weighted_trace_form;
    use crate::modules::test_support::{column_module, counterexample_modules};
    use crate::modules::{free_module, simple_modules};
    use crate::sample::{instance, random_endomorphism, random_module, rng_for, GenParams};
    use std::sync::Arc;

    fn qq() -> FieldSpec {
        FieldSpec::Rational
    }

    fn qi(n: i64) -> Scalar {
        Scalar::ratio(n, 1)
    }

    fn matrix_trace_form(n: usize) -> FrobeniusForm {
        let mut lambda = vec![qi(0); n * n];
        for i in 0..n {
            lambda[i * n + i] = qi(1);
        }
        FrobeniusForm { lambda }
    }

    #[test]
    fn trace_of_identity_on_columns_is_one() {
        let v = column_module(qq(), 2);
        let form = matrix_trace_form(2);
        let id = Matrix::identity(qq(), 2);
        assert_eq!(hs_trace(&v, &form, &id).unwrap(), qi(1));
        assert_eq!(hs_trace_via_dual_basis(&v, &form, &id).unwrap(), qi(1));
        // f = 0 has trace 0
        let zero = Matrix::zeros(qq(), 2, 2);
        assert_eq!(hs_trace(&v, &form, &zero).unwrap(), qi(0));
        // also for n = 3
        let v3 = column_module(qq(), 3);
        let form3 = matrix_trace_form(3);
        let id3 = Matrix::identity(qq(), 3);
        assert_eq!(hs_trace(&v3, &form3, &id3).unwrap(), qi(1));
    }

    #[test]
    fn trace_of_identity_on_free_module_is_rank_times_lambda_of_unit() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let form = matrix_trace_form(2);
        for k in 1..=3usize {
            let free = free_module(&a, k).unwrap();
            let id = Matrix::identity(qq(), free.module.dim());
            let expected = form.eval(a.unit()).mul(&qi(k as i64));
            assert_eq!(hs_trace(&free.module, &form, &id).unwrap(), expected);
        }
    }

    #[test]
    fn trace_refuses_asymmetric_forms_and_non_intertwiners() {
        let v = column_module(qq(), 2);
        // λ(x) = tr(x·c), c unipotent: Frobenius but not symmetric
        let asym = FrobeniusForm {
            lambda: vec![qi(1), qi(0), qi(1), qi(1)],
        };
        let id = Matrix::identity(qq(), 2);
        assert_eq!(hs_trace(&v, &asym, &id), Err(Error::AsymmetricForm));
        // a non-intertwiner is rejected
        let form = matrix_trace_form(2);
        let mut bad = Matrix::zeros(qq(), 2, 2);
        bad.set(0, 1, qi(1));
        assert_eq!(hs_trace(&v, &form, &bad), Err(Error::NotIntertwiner));
    }

    #[test]
    fn trace_singular_psi_on_counterexample() {
        let (_, s, _) = counterexample_modules();
        let f2 = FieldSpec::prime(2).unwrap();
        let form = FrobeniusForm {
            lambda: vec![f2.one(), f2.zero()],
        };
        let id = Matrix::identity(f2, 1);
        assert_eq!(hs_trace(&s, &form, &id), Err(Error::SingularPsi));
    }

    #[test]
    fn oracle_equality_on_random_instances() {
        let params = GenParams::new(qq());
        for seed in 0..10u64 {
            let mut rng = rng_for(31337, seed);
            let inst = instance(&mut rng, &params).unwrap();
            let m = random_module(&mut rng, &inst, 6).unwrap();
            if m.dim() == 0 {
                continue;
            }
            let f = random_endomorphism(&mut rng, &m).unwrap();
            let a = hs_trace(&m, &inst.form, &f).unwrap();
            let b = hs_trace_via_dual_basis(&m, &inst.form, &f).unwrap();
            assert_eq!(a, b, "trace routes disagree at seed {seed}");
        }
    }

    #[test]
    fn pairing_on_simples_and_disjoint_support() {
        let m23 =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd = m23.wedderburn(1).unwrap();
        let simples = simple_modules(&m23, &wd).unwrap();
        let form = weighted_trace_form(&m23, &[qi(2), qi(5)], &simples).unwrap();
        // same simple: 1×1 Gram with the block weight
        let p = trace_pairing(&simples[0], &simples[0], &form).unwrap();
        assert_eq!(p.gram.rows(), 1);
        assert!(!p.gram.at(0, 0).is_zero());
        // disjoint support: 0×0 Gram, vacuously non-degenerate
        let q = trace_pairing(&simples[0], &simples[1], &form).unwrap();
        assert_eq!(q.gram.rows(), 0);
        assert!(pairing_nondegenerate(&simples[0], &simples[1], &form).unwrap());
        assert!(pairing_nondegenerate(&simples[0], &simples[0], &form).unwrap());
    }

    #[test]
    fn symmetry_additivity_matrix_form_on_instances() {
        let params = GenParams::new(qq());
        for seed in 0..6u64 {
            let mut rng = rng_for(4242, seed);
            let inst = instance(&mut rng, &params).unwrap();
            let m = random_module(&mut rng, &inst, 5).unwrap();
            let n = random_module(&mut rng, &inst, 5).unwrap();
            let fwd = hom_basis(&m, &n).unwrap();
            let bwd = hom_basis(&n, &m).unwrap();
            for f in fwd.basis.iter().take(2) {
                for g in bwd.basis.iter().take(2) {
                    assert!(check_symmetry(&m, &n, &inst.form, f, g).unwrap());
                }
            }
            let f = random_endomorphism(&mut rng, &m).unwrap();
            let g = random_endomorphism(&mut rng, &n).unwrap();
            assert!(check_additivity(&m, &n, &inst.form, &f, &g).unwrap());
            let sum = direct_sum_modules(&[&m, &n]).unwrap();
            let h = random_endomorphism(&mut rng, &sum.module).unwrap();
            assert!(check_matrix_form(&[&m, &n], &inst.form, &h).unwrap());
        }
    }

    #[test]
    fn additivity_on_columns() {
        // f = g = id on K² ⊕ K² over M₂ gives trace 2
        let v = column_module(qq(), 2);
        let form = matrix_trace_form(2);
        let sum = direct_sum_modules(&[&v, &v]).unwrap();
        let id = Matrix::identity(qq(), 4);
        assert_eq!(hs_trace(&sum.module, &form, &id).unwrap(), qi(2));
        // block-nilpotent endomorphism (only off-diagonal blocks) has trace 0
        let mut nil = Matrix::zeros(qq(), 4, 4);
        nil.set(0, 2, qi(1));
        nil.set(1, 3, qi(1));
        assert_eq!(hs_trace(&sum.module, &form, &nil).unwrap(), qi(0));
        assert!(check_matrix_form(&[&v, &v], &form, &nil).unwrap());
    }

    #[test]
    fn trace_invariant_under_basis_change() {
        use crate::algebra::change_basis;
        let params = GenParams::new(qq());
        let mut rng = rng_for(2024, 3);
        let inst = instance(&mut rng, &params).unwrap();
        let m = random_module(&mut rng, &inst, 5).unwrap();
        if m.dim() == 0 {
            return;
        }
        let f = random_endomorphism(&mut rng, &m).unwrap();
        let before = hs_trace(&m, &inst.form, &f).unwrap();
        let g = Matrix::random_invertible(qq(), inst.algebra.dim(), 5);
        let moved = Arc::new(change_basis(&inst.algebra, &g).unwrap());
        let m2 = m.transport_algebra_basis(&moved, &g).unwrap();
        let form2 =
            FrobeniusForm::new(&moved, g.transpose().mul_vec(&inst.form.lambda).unwrap()).unwrap();
        let after = hs_trace(&m2, &form2, &f).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn obstruction_witness_on_counterexample() {
        let (_, s, p) = counterexample_modules();
        let w = cy_obstruction_witness(&s, &p).unwrap().unwrap();
        assert_eq!(w.hom_fwd_dim, 1);
        assert_eq!(w.hom_bwd_dim, 1);
        // semisimple instances never produce a witness
        let v = column_module(qq(), 2);
        assert_eq!(cy_obstruction_witness(&v, &v).unwrap(), None);
        // zero hom space in one direction: no witness
        let m23 =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd = m23.wedderburn(1).unwrap();
        let simples = simple_modules(&m23, &wd).unwrap();
        assert_eq!(
            cy_obstruction_witness(&simples[0], &simples[1]).unwrap(),
            None
        );
    }

    #[test]
    fn certification_of_matrix_algebra() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let form = matrix_trace_form(2);
        let cert = certify_cy(&a, &form, 7, 8).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.weights, vec![qi(1)]);

        let m23 =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd = m23.wedderburn(1).unwrap();
        let simples = simple_modules(&m23, &wd).unwrap();
        let form25 = weighted_trace_form(&m23, &[qi(2), qi(5)], &simples).unwrap();
        let cert25 = certify_cy(&m23, &form25, 7, 8).unwrap();
        assert!(cert25.passed());
        assert_eq!(cert25.weights, vec![qi(2), qi(5)]);

        // asymmetric form is refused
        let asym = FrobeniusForm {
            lambda: vec![qi(1), qi(0), qi(1), qi(1)],
        };
        assert!(matches!(
            certify_cy(&a, &asym, 7, 8),
            Err(Error::AsymmetricForm)
        ));
    }

    #[test]
    fn weight_formula_links_trace_to_block_weights() {
        let params = GenParams::new(qq());
        for seed in 0..6u64 {
            let mut rng = rng_for(515, seed);
            let inst = instance(&mut rng, &params).unwrap();
            for (v, w) in inst.simples.iter().zip(&inst.weights) {
                let id = Matrix::identity(qq(), v.dim());
                assert_eq!(&hs_trace(v, &inst.form, &id).unwrap(), w);
            }
        }
    }
}
