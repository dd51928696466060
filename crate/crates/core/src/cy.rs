//! The passage between symmetric Frobenius algebras and skeletal
//! presentations of Calabi-Yau categories, in both directions: the module
//! category of (A, λ) with its trace yields simple-object dimensions and
//! trace weights; conversely a skeleton reconstructs the basic algebra K^r
//! with the weights as its form, or, staying inside module categories, the
//! endomorphism algebra of a progenerator with the transported trace.

use std::sync::Arc;

use crate::algebra::{matrix_algebra, product_algebra, Algebra};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::frobenius::{is_frobenius, is_symmetric, twist_form, FrobeniusForm};
use crate::linalg::Matrix;
use crate::modules::{direct_sum_modules, hom_basis, simple_modules, LeftModule};
use crate::morita::check_cy_functor_samples;
use crate::morita::{context_from_progenerator, is_compatible, MoritaContext};
use crate::sample;
use crate::trace::{CertCheck, TraceMachine};

/// A skeletal finite semisimple category with a trace: simple-object count,
/// their dimensions, and the trace of the identity on each simple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CYPresentation {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    pub weights: Vec<Scalar>,
    pub source: Option<String>,
}

impl CYPresentation {
    pub fn new(
        field: FieldSpec,
        dims: Vec<usize>,
        weights: Vec<Scalar>,
        source: Option<String>,
    ) -> Result<CYPresentation> {
        if dims.is_empty() || dims.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                context: "one weight per simple object",
                expected: dims.len().max(1),
                got: weights.len(),
            });
        }
        if dims.iter().any(|&n| n == 0) {
            return Err(Error::InvalidAlgebra("simple object of dimension 0".into()));
        }
        if weights.iter().any(|w| w.is_zero()) {
            return Err(Error::ZeroWeight);
        }
        for w in &weights {
            if w.field() != field {
                return Err(Error::FieldMismatch(field, w.field()));
            }
        }
        Ok(CYPresentation {
            field,
            dims,
            weights,
            source,
        })
    }

    pub fn simple_count(&self) -> usize {
        self.dims.len()
    }

    /// Weight multiset, sorted for order-independent comparison.
    pub fn sorted_weights(&self) -> Vec<Scalar> {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| a.sort_key_cmp(b));
        w
    }
}

/// The skeletal image of the module category of (A, λ): block dimensions
/// and the trace of the identity on each simple module.
pub fn rep_fg(a: &Arc<Algebra>, form: &FrobeniusForm, seed: u64) -> Result<CYPresentation> {
    if !is_symmetric(a, form)? {
        return Err(Error::AsymmetricForm);
    }
    if !is_frobenius(a, form)? {
        return Err(Error::NotFrobenius);
    }
    let wd = a.wedderburn(seed)?;
    let simples = simple_modules(a, &wd)?;
    let mut weights = Vec::with_capacity(simples.len());
    for v in &simples {
        let machine = TraceMachine::new(v, form)?;
        weights.push(machine.trace(&Matrix::identity(a.field(), v.dim()))?);
    }
    CYPresentation::new(a.field(), wd.block_dims.clone(), weights, None)
}

/// The basic algebra of a skeleton: K^r with the weights as its symmetric
/// Frobenius form. This is End(⊕ Xᵢ) with the trace values t_i, after Schur
/// collapses each endomorphism algebra to the ground field.
pub fn reconstruct_frobenius(cy: &CYPresentation) -> Result<(Arc<Algebra>, FrobeniusForm)> {
    let r = cy.simple_count();
    let mut acc = matrix_algebra(cy.field, 1);
    for _ in 1..r {
        acc = product_algebra(&acc, &matrix_algebra(cy.field, 1))?;
    }
    let algebra = Arc::new(acc);
    let form = FrobeniusForm::new(&algebra, cy.weights.clone())?;
    Ok((algebra, form))
}

/// The reconstruction staying inside module categories: B = End_A(⊕ Vᵢ)
/// with λ^B the trace of P = ⊕ Vᵢ, plus the Morita context between A and B.
pub struct ModuleCategoryReconstruction {
    pub progenerator: LeftModule,
    pub b: Arc<Algebra>,
    pub form_b: FrobeniusForm,
    pub context: MoritaContext,
}

pub fn reconstruct_from_module_category(
    a: &Arc<Algebra>,
    form: &FrobeniusForm,
    seed: u64,
) -> Result<ModuleCategoryReconstruction> {
    if !is_symmetric(a, form)? {
        return Err(Error::AsymmetricForm);
    }
    if !is_frobenius(a, form)? {
        return Err(Error::NotFrobenius);
    }
    let wd = a.wedderburn(seed)?;
    let simples = simple_modules(a, &wd)?;
    let parts: Vec<&LeftModule> = simples.iter().collect();
    let p = direct_sum_modules(&parts)?.module;
    let context = context_from_progenerator(a, &p)?;
    let b = Arc::clone(&context.b);
    // λ^B(b) = tr_P^λ(b̂) on the endomorphism basis of P
    let machine = TraceMachine::new(&p, form)?;
    let end = hom_basis(&p, &p)?;
    let lambda = machine.trace_many(&end.basis)?;
    let form_b = FrobeniusForm::new(&b, lambda)?;
    Ok(ModuleCategoryReconstruction {
        progenerator: p,
        b,
        form_b,
        context,
    })
}

/// Trace preservation under X ↦ Hom_A(P, X): the transported endomorphism
/// g ↦ f∘g over B = End_A(P) has the same trace as f.
pub fn hom_functor_trace_check(
    a: &Arc<Algebra>,
    form: &FrobeniusForm,
    x: &LeftModule,
    f: &Matrix,
    seed: u64,
) -> Result<bool> {
    let rec = reconstruct_from_module_category(a, form, seed)?;
    let p = &rec.progenerator;
    let hom_px = hom_basis(p, x)?;
    let field = a.field();
    let s = hom_px.dim();
    // left B-module structure on Hom_A(P, X): b·g = g ∘ b̂
    let end = hom_basis(p, p)?;
    let mut actions = Vec::with_capacity(rec.b.dim());
    for h in &end.basis {
        let mut images = Vec::with_capacity(s);
        for g in &hom_px.basis {
            images.push(g.mul(h)?);
        }
        let coords = hom_px.coords_of_many(&images)?;
        let mut act = Matrix::zeros(field, s, s);
        for (u, cs) in coords.into_iter().enumerate() {
            for (w, c) in cs.into_iter().enumerate() {
                act.set(w, u, c);
            }
        }
        actions.push(act);
    }
    let hom_module = LeftModule::new(Arc::clone(&rec.b), actions)?;
    // transported endomorphism g ↦ f ∘ g
    let mut images = Vec::with_capacity(s);
    for g in &hom_px.basis {
        images.push(f.mul(g)?);
    }
    let coords = hom_px.coords_of_many(&images)?;
    let mut transported = Matrix::zeros(field, s, s);
    for (u, cs) in coords.into_iter().enumerate() {
        for (w, c) in cs.into_iter().enumerate() {
            transported.set(w, u, c);
        }
    }
    let lhs = TraceMachine::new(&hom_module, &rec.form_b)?.trace(&transported)?;
    let rhs = TraceMachine::new(x, form)?.trace(f)?;
    Ok(lhs == rhs)
}

/// Full round-trip report for one (A, λ).
pub struct RoundtripReport {
    pub rep_a: CYPresentation,
    pub rep_b: CYPresentation,
    pub checks: Vec<CertCheck>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn roundtrip_check(
    a: &Arc<Algebra>,
    form: &FrobeniusForm,
    seed: u64,
    endo_samples: usize,
) -> Result<RoundtripReport> {
    let rep_a = rep_fg(a, form, seed)?;
    let rec = reconstruct_from_module_category(a, form, seed)?;
    let rep_b = rep_fg(&rec.b, &rec.form_b, seed)?;
    let mut checks = Vec::new();
    checks.push(CertCheck {
        name: "reconstructed_algebra_is_basic".into(),
        passed: rep_b.dims.iter().all(|&n| n == 1),
        witness: Some(format!("dims {:?}", rep_b.dims)),
    });
    let same_weights = rep_a.sorted_weights() == rep_b.sorted_weights();
    checks.push(CertCheck {
        name: "weights_preserved".into(),
        passed: same_weights,
        witness: if same_weights {
            None
        } else {
            Some(format!(
                "weights {:?} vs {:?}",
                rep_a.weights, rep_b.weights
            ))
        },
    });
    let compatible = is_compatible(&rec.context, form, &rec.form_b)?;
    checks.push(CertCheck {
        name: "context_compatible".into(),
        passed: compatible,
        witness: None,
    });
    // trace preservation along the tensor functor
    let wd = a.wedderburn(seed)?;
    let simples = simple_modules(a, &wd)?;
    let inst = sample::Instance {
        algebra: Arc::clone(a),
        wd,
        simples,
        form: form.clone(),
        weights: rep_a.weights.clone(),
    };
    let preserved =
        check_cy_functor_samples(&rec.context, form, &rec.form_b, &inst, seed, endo_samples)?;
    checks.push(CertCheck {
        name: "tensor_functor_preserves_traces".into(),
        passed: preserved,
        witness: None,
    });
    Ok(RoundtripReport {
        rep_a,
        rep_b,
        checks,
    })
}

/// Twisting λ by a central unit multiplies each weight by the block
/// coordinate of the unit.
pub fn cy_structure_family_check(
    a: &Arc<Algebra>,
    form: &FrobeniusForm,
    z: &[Scalar],
    seed: u64,
) -> Result<bool> {
    let base = rep_fg(a, form, seed)?;
    let twisted = rep_fg(a, &twist_form(a, form, z)?, seed)?;
    let wd = a.wedderburn(seed)?;
    let coords = a.block_coordinates(&wd, z)?;
    let expected: Vec<Scalar> = base
        .weights
        .iter()
        .zip(&coords)
        .map(|(w, c)| w.mul(c))
        .collect();
    Ok(twisted.weights == expected)
}

/// Over F_p, enumerates all central units along the blocks and collects the
/// distinct weight vectors of the twisted forms.
pub fn enumerate_twist_weight_vectors(
    a: &Arc<Algebra>,
    form: &FrobeniusForm,
    seed: u64,
) -> Result<Vec<Vec<Scalar>>> {
    let field = a.field();
    let units = field
        .nonzero_elements()
        .ok_or(Error::UnsupportedCharacteristic)?;
    let wd = a.wedderburn(seed)?;
    let r = wd.block_count();
    let mut distinct: Vec<Vec<Scalar>> = Vec::new();
    let mut counters = vec![0usize; r];
    loop {
        // z = Σ ζ_i e_i from the current counter state
        let mut z = vec![field.zero(); a.dim()];
        for (i, &c) in counters.iter().enumerate() {
            let zeta = &units[c];
            for (acc, e) in z.iter_mut().zip(&wd.idempotents[i]) {
                *acc = acc.add(&zeta.mul(e));
            }
        }
        let twisted = rep_fg(a, &twist_form(a, form, &z)?, seed)?;
        if !distinct.contains(&twisted.weights) {
            distinct.push(twisted.weights);
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == r {
                return Ok(distinct);
            }
            counters[i] += 1;
            if counters[i] < units.len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix_algebra;
    use crate::frobenius::weighted_trace_form;
    use crate::linalg::{vec_add, vec_scale};
    use crate::trace::certify_cy;

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

    fn m23_with_weights() -> (Arc<Algebra>, FrobeniusForm) {
        let a =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd = a.wedderburn(1).unwrap();
        let simples = simple_modules(&a, &wd).unwrap();
        let form = weighted_trace_form(&a, &[qi(2), qi(5)], &simples).unwrap();
        (a, form)
    }

    #[test]
    fn rep_of_matrix_algebra() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let rep = rep_fg(&a, &matrix_trace_form(2), 1).unwrap();
        assert_eq!(rep.dims, vec![2]);
        assert_eq!(rep.weights, vec![qi(1)]);
        // the trivial case
        let q = Arc::new(matrix_algebra(qq(), 1));
        let rep_q = rep_fg(
            &q,
            &FrobeniusForm {
                lambda: vec![qi(1)],
            },
            1,
        )
        .unwrap();
        assert_eq!(rep_q.dims, vec![1]);
        assert_eq!(rep_q.weights, vec![qi(1)]);
    }

    #[test]
    fn rep_of_product_with_weights() {
        let (a, form) = m23_with_weights();
        let rep = rep_fg(&a, &form, 1).unwrap();
        assert_eq!(rep.dims, vec![2, 3]);
        assert_eq!(rep.weights, vec![qi(2), qi(5)]);
    }

    #[test]
    fn reconstruct_basic_algebra() {
        let cy = CYPresentation::new(qq(), vec![2, 3], vec![qi(2), qi(5)], None).unwrap();
        let (b, form_b) = reconstruct_frobenius(&cy).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(b.is_commutative());
        assert_eq!(form_b.lambda, vec![qi(2), qi(5)]);
        let cert = certify_cy(&b, &form_b, 3, 6).unwrap();
        assert!(cert.passed());
        assert_eq!(
            {
                let mut w = cert.weights.clone();
                w.sort_by(|a, b| a.sort_key_cmp(b));
                w
            },
            vec![qi(2), qi(5)]
        );
        // single block with weight 1
        let cy1 = CYPresentation::new(qq(), vec![1], vec![qi(1)], None).unwrap();
        let (b1, f1) = reconstruct_frobenius(&cy1).unwrap();
        assert_eq!(b1.dim(), 1);
        assert_eq!(f1.lambda, vec![qi(1)]);
        // prime field
        let f5 = FieldSpec::prime(5).unwrap();
        let cy5 = CYPresentation::new(f5, vec![1, 1], vec![f5.from_i64(2), f5.from_i64(3)], None)
            .unwrap();
        let (b5, form5) = reconstruct_frobenius(&cy5).unwrap();
        assert_eq!(b5.dim(), 2);
        let cert5 = certify_cy(&b5, &form5, 3, 4).unwrap();
        assert!(cert5.passed());
        // zero weights rejected
        assert!(matches!(
            CYPresentation::new(qq(), vec![1], vec![qi(0)], None),
            Err(Error::ZeroWeight)
        ));
    }

    #[test]
    fn reconstruction_from_module_category() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let form = matrix_trace_form(2);
        let rec = reconstruct_from_module_category(&a, &form, 1).unwrap();
        assert_eq!(rec.b.dim(), 1);
        assert_eq!(rec.form_b.lambda, vec![qi(1)]);
        assert!(is_compatible(&rec.context, &form, &rec.form_b).unwrap());

        let (a23, form23) = m23_with_weights();
        let rec23 = reconstruct_from_module_category(&a23, &form23, 1).unwrap();
        assert_eq!(rec23.b.dim(), 2);
        assert!(rec23.b.is_commutative());
        let mut weights = rec23.form_b.lambda.clone();
        weights.sort_by(|a, b| a.sort_key_cmp(b));
        assert_eq!(weights, vec![qi(2), qi(5)]);
        assert!(is_compatible(&rec23.context, &form23, &rec23.form_b).unwrap());
    }

    #[test]
    fn hom_functor_preserves_traces() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let form = matrix_trace_form(2);
        let wd = a.wedderburn(1).unwrap();
        let simples = simple_modules(&a, &wd).unwrap();
        let v = &simples[0];
        let id = Matrix::identity(qq(), v.dim());
        assert!(hom_functor_trace_check(&a, &form, v, &id, 1).unwrap());
        let zero = Matrix::zeros(qq(), v.dim(), v.dim());
        assert!(hom_functor_trace_check(&a, &form, v, &zero, 1).unwrap());
        let reg = LeftModule::regular(&a);
        let idr = Matrix::identity(qq(), 4);
        assert!(hom_functor_trace_check(&a, &form, &reg, &idr, 1).unwrap());
    }

    #[test]
    fn roundtrip_examples() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let report = roundtrip_check(&a, &matrix_trace_form(2), 1, 3).unwrap();
        assert!(report.passed(), "checks: {:?}", report.checks);
        assert_eq!(report.rep_b.dims, vec![1]);

        let q = Arc::new(matrix_algebra(qq(), 1));
        let rq = roundtrip_check(
            &q,
            &FrobeniusForm {
                lambda: vec![qi(1)],
            },
            1,
            2,
        )
        .unwrap();
        assert!(rq.passed());

        let (a23, form23) = m23_with_weights();
        let r23 = roundtrip_check(&a23, &form23, 1, 3).unwrap();
        assert!(r23.passed(), "checks: {:?}", r23.checks);
        assert_eq!(r23.rep_a.dims, vec![2, 3]);
        assert_eq!(r23.rep_a.weights, vec![qi(2), qi(5)]);
        assert_eq!(r23.rep_b.dims, vec![1, 1]);
        assert_eq!(r23.rep_b.sorted_weights(), vec![qi(2), qi(5)]);
    }

    #[test]
    fn twist_family() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let form = matrix_trace_form(2);
        // z = unit leaves the weights alone
        assert!(cy_structure_family_check(&a, &form, &a.unit().to_vec(), 1).unwrap());
        // z = 3·1 scales the weight to 3
        let z = vec_scale(a.unit(), &qi(3));
        assert!(cy_structure_family_check(&a, &form, &z, 1).unwrap());
        let rep = rep_fg(&a, &twist_form(&a, &form, &z).unwrap(), 1).unwrap();
        assert_eq!(rep.weights, vec![qi(3)]);
    }

    #[test]
    fn twist_enumeration_over_f3() {
        let f3 = FieldSpec::prime(3).unwrap();
        let cy = CYPresentation::new(f3, vec![1, 1], vec![f3.one(), f3.one()], None).unwrap();
        let (a, form) = reconstruct_frobenius(&cy).unwrap();
        let vectors = enumerate_twist_weight_vectors(&a, &form, 1).unwrap();
        assert_eq!(vectors.len(), 4); // (3-1)²
                                      // mixed blocks also work
        let wd = a.wedderburn(1).unwrap();
        let z = vec_add(
            &vec_scale(&wd.idempotents[0], &f3.from_i64(2)),
            &wd.idempotents[1].clone(),
        );
        assert!(cy_structure_family_check(&a, &form, &z, 1).unwrap());
    }
}
