//! Frobenius forms: verification, the weighted-trace normal form on split
//! semisimple algebras, twisting by central units, and block weights.

use crate::algebra::{Algebra, WedderburnData};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::modules::LeftModule;

/// A linear functional on an algebra, stored by its coordinates in the dual
/// basis: λ(e_k) = lambda\[k]. Nothing is assumed; symmetry and
/// non-degeneracy are always checked by the operations that need them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusForm {
    pub lambda: Vec<Scalar>,
}

impl FrobeniusForm {
    pub fn new(a: &Algebra, lambda: Vec<Scalar>) -> Result<FrobeniusForm> {
        if lambda.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "form coordinate length",
                expected: a.dim(),
                got: lambda.len(),
            });
        }
        for s in &lambda {
            if s.field() != a.field() {
                return Err(Error::FieldMismatch(a.field(), s.field()));
            }
        }
        Ok(FrobeniusForm { lambda })
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let field = self.lambda[0].field();
        let mut acc = field.zero();
        for (l, v) in self.lambda.iter().zip(x) {
            if !l.is_zero() && !v.is_zero() {
                acc = acc.add(&l.mul(v));
            }
        }
        acc
    }
}

/// Gram matrix G\[i]\[j] = λ(e_i e_j) of the induced pairing.
pub fn pairing_gram(a: &Algebra, form: &FrobeniusForm) -> Result<Matrix> {
    if form.lambda.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "form coordinate length",
            expected: a.dim(),
            got: form.lambda.len(),
        });
    }
    Ok(Matrix::from_fn(a.field(), a.dim(), a.dim(), |i, j| {
        let mut s = a.field().zero();
        for k in 0..a.dim() {
            let c = a.constant(i, j, k);
            if !c.is_zero() && !form.lambda[k].is_zero() {
                s = s.add(&c.mul(&form.lambda[k]));
            }
        }
        s
    }))
}

/// Non-degeneracy of the pairing a ⊗ b ↦ λ(ab).
pub fn is_frobenius(a: &Algebra, form: &FrobeniusForm) -> Result<bool> {
    Ok(pairing_gram(a, form)?.rank() == a.dim())
}

/// λ(ab) = λ(ba) for all a, b; by bilinearity this is symmetry of the Gram
/// matrix.
pub fn is_symmetric(a: &Algebra, form: &FrobeniusForm) -> Result<bool> {
    let g = pairing_gram(a, form)?;
    Ok(g == g.transpose())
}

/// λ = Σᵢ wᵢ · trᵢ where trᵢ is the trace of the action on the i-th simple
/// module. All weights must be nonzero.
pub fn weighted_trace_form(
    a: &Algebra,
    weights: &[Scalar],
    simples: &[LeftModule],
) -> Result<FrobeniusForm> {
    if weights.len() != simples.len() {
        return Err(Error::DimensionMismatch {
            context: "one weight per block",
            expected: simples.len(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| w.is_zero()) {
        return Err(Error::ZeroWeight);
    }
    let mut lambda = vec![a.field().zero(); a.dim()];
    for (w, v) in weights.iter().zip(simples) {
        for k in 0..a.dim() {
            let t = v.action(k).trace()?;
            if !t.is_zero() {
                lambda[k] = lambda[k].add(&w.mul(&t));
            }
        }
    }
    FrobeniusForm::new(a, lambda)
}

/// λ_z(x) = λ(z·x) for a central invertible z.
pub fn twist_form(a: &Algebra, form: &FrobeniusForm, z: &[Scalar]) -> Result<FrobeniusForm> {
    if !a.is_central(z)? {
        return Err(Error::NotCentral);
    }
    if !a.is_invertible_element(z)? {
        return Err(Error::NotInvertible);
    }
    let lz = a.left_regular(z)?;
    FrobeniusForm::new(a, lz.transpose().mul_vec(&form.lambda)?)
}

/// The coordinates of a symmetric Frobenius form relative to the plain
/// block traces: λ = Σ wᵢ trᵢ. The extraction is verified by rebuilding the
/// form from the weights.
pub fn extract_block_weights(
    a: &Algebra,
    form: &FrobeniusForm,
    wd: &WedderburnData,
    simples: &[LeftModule],
) -> Result<Vec<Scalar>> {
    if !is_symmetric(a, form)? {
        return Err(Error::AsymmetricForm);
    }
    let mut weights = Vec::with_capacity(wd.block_count());
    for (e, v) in wd.idempotents.iter().zip(simples) {
        // scan projected basis elements for one with nonzero block trace
        let mut weight = None;
        for k in 0..a.dim() {
            let m = a.multiply(e, &a.basis_vec(k))?;
            let t = v.action_of(&m)?.trace()?;
            if !t.is_zero() {
                weight = Some(form.eval(&m).div(&t)?);
                break;
            }
        }
        weights.push(weight.ok_or(Error::InconsistentWeights)?);
    }
    if weights.iter().any(|w| w.is_zero()) {
        return Err(Error::InconsistentWeights);
    }
    let rebuilt = weighted_trace_form(a, &weights, simples)?;
    if &rebuilt != form {
        return Err(Error::InconsistentWeights);
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_group_table, group_algebra, matrix_algebra, product_algebra};
    use crate::field::FieldSpec;
    use crate::linalg::{vec_add, vec_scale};
    use crate::modules::simple_modules;
    use std::sync::Arc;

    fn qq() -> FieldSpec {
        FieldSpec::Rational
    }

    fn qi(n: i64) -> Scalar {
        Scalar::ratio(n, 1)
    }

    /// Matrix trace on M_n: λ(E_ij) = δ_ij.
    fn matrix_trace_form(n: usize) -> FrobeniusForm {
        let mut lambda = vec![qi(0); n * n];
        for i in 0..n {
            lambda[i * n + i] = qi(1);
        }
        FrobeniusForm { lambda }
    }

    #[test]
    fn gram_of_matrix_trace() {
        let a = matrix_algebra(qq(), 2);
        let form = matrix_trace_form(2);
        let g = pairing_gram(&a, &form).unwrap();
        assert_eq!(g.rank(), 4);
        assert_eq!(g, g.transpose());
        assert!(is_frobenius(&a, &form).unwrap());
        assert!(is_symmetric(&a, &form).unwrap());
    }

    #[test]
    fn gram_of_group_algebra_counterexample_form() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = group_algebra(f2, &cyclic_group_table(2)).unwrap();
        // λ(e) = 1, λ(g) = 0
        let form = FrobeniusForm::new(&a, vec![f2.one(), f2.zero()]).unwrap();
        let g = pairing_gram(&a, &form).unwrap();
        assert_eq!(g, Matrix::identity(f2, 2));
        assert!(is_frobenius(&a, &form).unwrap());
        assert!(is_symmetric(&a, &form).unwrap());
    }

    #[test]
    fn zero_form_has_zero_gram() {
        let a = matrix_algebra(qq(), 2);
        let form = FrobeniusForm::new(&a, vec![qi(0); 4]).unwrap();
        assert!(pairing_gram(&a, &form).unwrap().is_zero());
        assert!(!is_frobenius(&a, &form).unwrap());
    }

    #[test]
    fn coordinate_functional_of_off_diagonal_unit_is_degenerate() {
        let a = matrix_algebra(qq(), 2);
        // λ = coordinate functional of E_12: its Gram matrix pairs only
        // E_11 with E_12 and E_12 with E_22, so it has rank 2
        let form = FrobeniusForm::new(&a, vec![qi(0), qi(1), qi(0), qi(0)]).unwrap();
        assert_eq!(pairing_gram(&a, &form).unwrap().rank(), 2);
        assert!(!is_frobenius(&a, &form).unwrap());
        assert!(!is_symmetric(&a, &form).unwrap());
    }

    #[test]
    fn unipotent_twist_of_trace_is_frobenius_but_not_symmetric() {
        let a = matrix_algebra(qq(), 2);
        // λ(x) = tr(x·c) with c = E_11 + E_12 + E_22 invertible, not central
        let form = FrobeniusForm::new(&a, vec![qi(1), qi(0), qi(1), qi(1)]).unwrap();
        assert!(is_frobenius(&a, &form).unwrap());
        assert!(!is_symmetric(&a, &form).unwrap());
    }

    #[test]
    fn weighted_trace_forms() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let wd = a.wedderburn(1).unwrap();
        let simples = simple_modules(&a, &wd).unwrap();
        let form = weighted_trace_form(&a, &[qi(1)], &simples).unwrap();
        assert_eq!(form, matrix_trace_form(2));

        let m23 =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd23 = m23.wedderburn(1).unwrap();
        let s23 = simple_modules(&m23, &wd23).unwrap();
        let form23 = weighted_trace_form(&m23, &[qi(2), qi(5)], &s23).unwrap();
        assert_eq!(form23.eval(m23.unit()), qi(19)); // 2·2 + 5·3

        let qxq =
            Arc::new(product_algebra(&matrix_algebra(qq(), 1), &matrix_algebra(qq(), 1)).unwrap());
        let wdq = qxq.wedderburn(1).unwrap();
        let sq = simple_modules(&qxq, &wdq).unwrap();
        let fq = weighted_trace_form(&qxq, &[qi(1), qi(-1)], &sq).unwrap();
        assert!(is_frobenius(&qxq, &fq).unwrap());
        assert!(is_symmetric(&qxq, &fq).unwrap());
        // diagonal with entries {1, -1} in the sorted block order
        let g = pairing_gram(&qxq, &fq).unwrap();
        assert!(g.at(0, 1).is_zero() && g.at(1, 0).is_zero());
        let mut diag = vec![g.at(0, 0).clone(), g.at(1, 1).clone()];
        diag.sort_by(|a, b| a.sort_key_cmp(b));
        assert_eq!(diag, vec![qi(-1), qi(1)]);

        assert_eq!(
            weighted_trace_form(&qxq, &[qi(1), qi(0)], &sq),
            Err(Error::ZeroWeight)
        );
    }

    #[test]
    fn twists() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let wd = a.wedderburn(1).unwrap();
        let simples = simple_modules(&a, &wd).unwrap();
        let form = matrix_trace_form(2);
        // twist by the unit is the identity
        assert_eq!(twist_form(&a, &form, a.unit()).unwrap(), form);
        // twist by 3·1 scales the weight to 3
        let z = vec_scale(a.unit(), &qi(3));
        let twisted = twist_form(&a, &form, &z).unwrap();
        let w = extract_block_weights(&a, &twisted, &wd, &simples).unwrap();
        assert_eq!(w, vec![qi(3)]);
        // twisting twice composes multiplicatively
        let z2 = vec_scale(a.unit(), &Scalar::ratio(1, 2));
        let t1 = twist_form(&a, &twist_form(&a, &form, &z).unwrap(), &z2).unwrap();
        let zz = a.multiply(&z, &z2).unwrap();
        assert_eq!(t1, twist_form(&a, &form, &zz).unwrap());
        // twist by the inverse undoes the twist
        let z_inv = a.element_inverse(&z).unwrap();
        assert_eq!(twist_form(&a, &twisted, &z_inv).unwrap(), form);
        // non-central and non-invertible rejections
        assert_eq!(
            twist_form(&a, &form, &a.basis_vec(1)),
            Err(Error::NotCentral)
        );
        let zero = vec![qi(0); 4];
        assert_eq!(twist_form(&a, &form, &zero), Err(Error::NotInvertible));
    }

    #[test]
    fn extract_weights_round_trip() {
        let m23 =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd = m23.wedderburn(1).unwrap();
        let simples = simple_modules(&m23, &wd).unwrap();
        let form = weighted_trace_form(&m23, &[qi(2), qi(5)], &simples).unwrap();
        let w = extract_block_weights(&m23, &form, &wd, &simples).unwrap();
        assert_eq!(w, vec![qi(2), qi(5)]);
        // twisting by z = 3e₁ + 7e₂ multiplies the weights coordinatewise
        let z = vec_add(
            &vec_scale(&wd.idempotents[0], &qi(3)),
            &vec_scale(&wd.idempotents[1], &qi(7)),
        );
        let twisted = twist_form(&m23, &form, &z).unwrap();
        let tw = extract_block_weights(&m23, &twisted, &wd, &simples).unwrap();
        assert_eq!(tw, vec![qi(6), qi(35)]);
    }

    #[test]
    fn symmetry_iff_vanishing_on_commutators() {
        let a = matrix_algebra(qq(), 2);
        let (comms, _) = a.commutator_subspace();
        let sym = matrix_trace_form(2);
        for c in 0..comms.cols() {
            assert!(sym.eval(&comms.col(c)).is_zero());
        }
        let asym = FrobeniusForm::new(&a, vec![qi(0), qi(1), qi(0), qi(0)]).unwrap();
        let vanishes = (0..comms.cols()).all(|c| asym.eval(&comms.col(c)).is_zero());
        assert!(!vanishes);
    }
}
