//! Seeded generation of split semisimple instances: algebras with hidden
//! basis changes, symmetric Frobenius forms with bounded weights, modules
//! with hidden decompositions, and endomorphisms. All randomness flows
//! through an explicit ChaCha stream so every instance is reproducible.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{change_basis, matrix_algebra, product_algebra, Algebra, WedderburnData};
use crate::error::Result;
use crate::field::{FieldSpec, Scalar};
use crate::frobenius::{weighted_trace_form, FrobeniusForm};
use crate::linalg::Matrix;
use crate::modules::{direct_sum_modules, hom_basis, simple_modules, LeftModule};

#[derive(Debug, Clone)]
pub struct GenParams {
    pub field: FieldSpec,
    pub max_blocks: usize,
    pub max_block_dim: usize,
    /// resample block formats until Σ nᵢ² stays within this bound
    pub max_total_dim: usize,
    /// numerators and denominators of rational weights stay within this bound
    pub max_weight_size: i64,
    pub hide_basis: bool,
}

impl GenParams {
    pub fn new(field: FieldSpec) -> GenParams {
        GenParams {
            field,
            max_blocks: 3,
            max_block_dim: 3,
            max_total_dim: 27,
            max_weight_size: 7,
            hide_basis: true,
        }
    }

    /// Same block distribution with the algebra dimension capped; rational
    /// instances stay fast at this size.
    pub fn compact(field: FieldSpec) -> GenParams {
        GenParams {
            max_total_dim: 14,
            ..GenParams::new(field)
        }
    }
}

/// A generated split semisimple symmetric Frobenius algebra together with
/// the structural data transported through any hidden basis change.
pub struct Instance {
    pub algebra: Arc<Algebra>,
    pub wd: WedderburnData,
    pub simples: Vec<LeftModule>,
    pub form: FrobeniusForm,
    pub weights: Vec<Scalar>,
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Product of matrix algebras with the given block formats.
pub fn standard_product(field: FieldSpec, dims: &[usize]) -> Arc<Algebra> {
    let mut it = dims.iter();
    let first = *it.next().expect("at least one block");
    let mut acc = matrix_algebra(field, first);
    for &n in it {
        acc = product_algebra(&acc, &matrix_algebra(field, n)).expect("same field");
    }
    Arc::new(acc)
}

fn random_nonzero_weight(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> Scalar {
    match field {
        FieldSpec::Rational => loop {
            let num = rng.gen_range(-bound..=bound);
            let den = rng.gen_range(1..=bound);
            if num != 0 {
                return Scalar::ratio(num, den);
            }
        },
        FieldSpec::Prime(p) => {
            let v = rng.gen_range(1..p);
            Scalar::Residue {
                value: v,
                modulus: p,
            }
        }
    }
}

/// Invertible matrix with determinant one and entries kept small: shears by
/// ±1 are applied only when no entry grows past 3 in absolute value.
pub fn small_basis_change(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Matrix {
    let mut m = Matrix::identity(field, n);
    if n < 2 {
        return m;
    }
    let bound = Scalar::ratio(3, 1);
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = field.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut candidate = m.clone();
        for col in 0..n {
            let v = candidate.at(j, col).add(&c.mul(candidate.at(i, col)));
            candidate.set(j, col, v);
        }
        let within = match field {
            FieldSpec::Rational => (0..n).all(|r| {
                (0..n).all(|cidx| {
                    let e = candidate.at(r, cidx);
                    e.sort_key_cmp(&bound) != std::cmp::Ordering::Greater
                        && bound.neg().sort_key_cmp(e) != std::cmp::Ordering::Greater
                })
            }),
            FieldSpec::Prime(_) => true,
        };
        if within {
            m = candidate;
        }
    }
    m
}

/// Generates one instance. The block formats, weights, and the optional
/// hidden basis change are drawn from the stream; simple modules and
/// Wedderburn data are transported so the structure stays known even when
/// the presentation hides it.
pub fn instance(rng: &mut ChaCha8Rng, params: &GenParams) -> Result<Instance> {
    let dims: Vec<usize> = loop {
        let r = rng.gen_range(1..=params.max_blocks);
        let candidate: Vec<usize> = (0..r)
            .map(|_| rng.gen_range(1..=params.max_block_dim))
            .collect();
        if candidate.iter().map(|n| n * n).sum::<usize>() <= params.max_total_dim {
            break candidate;
        }
    };
    let standard = standard_product(params.field, &dims);
    let wd = standard.wedderburn(rng.gen())?;
    let simples = simple_modules(&standard, &wd)?;
    let weights: Vec<Scalar> = (0..wd.block_count())
        .map(|_| random_nonzero_weight(rng, params.field, params.max_weight_size))
        .collect();
    let form = weighted_trace_form(&standard, &weights, &simples)?;
    if !params.hide_basis {
        return Ok(Instance {
            algebra: standard,
            wd,
            simples,
            form,
            weights,
        });
    }
    let g = small_basis_change(rng, params.field, standard.dim());
    let g_inv = g.inverse()?;
    let hidden = Arc::new(change_basis(&standard, &g)?);
    let simples = simples
        .iter()
        .map(|v| v.transport_algebra_basis(&hidden, &g))
        .collect::<Result<Vec<_>>>()?;
    let idempotents = wd
        .idempotents
        .iter()
        .map(|e| g_inv.mul_vec(e))
        .collect::<Result<Vec<_>>>()?;
    let form = FrobeniusForm::new(&hidden, g.transpose().mul_vec(&form.lambda)?)?;
    Ok(Instance {
        algebra: hidden,
        wd: WedderburnData {
            idempotents,
            block_dims: wd.block_dims,
        },
        simples,
        form,
        weights,
    })
}

/// Random module ⊕ Vᵢ^{mᵢ} of total dimension ≤ max_dim with its
/// decomposition hidden behind a module-space basis change, together with
/// the multiplicity vector used to build it. May be zero.
pub fn random_module_with_mults(
    rng: &mut ChaCha8Rng,
    inst: &Instance,
    max_dim: usize,
) -> Result<(LeftModule, Vec<usize>)> {
    let mut mults = vec![0usize; inst.simples.len()];
    let mut parts: Vec<&LeftModule> = Vec::new();
    let mut budget = max_dim;
    let mut order: Vec<usize> = (0..inst.simples.len()).collect();
    // shuffle the insertion order so the layout varies
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for &i in &order {
        let v = &inst.simples[i];
        if v.dim() > budget {
            continue;
        }
        let max_mult = budget / v.dim();
        let m = rng.gen_range(0..=max_mult.min(3));
        for _ in 0..m {
            parts.push(v);
            budget -= v.dim();
        }
        mults[i] = m;
    }
    if parts.is_empty() {
        return Ok((LeftModule::zero(&inst.algebra), mults));
    }
    let sum = direct_sum_modules(&parts)?.module;
    let h = small_basis_change(rng, inst.algebra.field(), sum.dim());
    Ok((sum.change_space_basis(&h)?, mults))
}

pub fn random_module(rng: &mut ChaCha8Rng, inst: &Instance, max_dim: usize) -> Result<LeftModule> {
    Ok(random_module_with_mults(rng, inst, max_dim)?.0)
}

/// Random right module (over opposite(A)) built as ⊕ (Vᵢ*)^{kᵢ} with the
/// multiplicity vector returned, then hidden by a basis change.
pub fn random_right_module(
    rng: &mut ChaCha8Rng,
    inst: &Instance,
    max_dim: usize,
) -> Result<(LeftModule, Vec<usize>)> {
    let duals: Vec<LeftModule> = inst
        .simples
        .iter()
        .map(|v| crate::modules::dual_module(v).map(|d| d.module))
        .collect::<Result<_>>()?;
    let mut mults = vec![0usize; duals.len()];
    let mut parts: Vec<&LeftModule> = Vec::new();
    let mut budget = max_dim;
    for (i, d) in duals.iter().enumerate() {
        if d.dim() == 0 || d.dim() > budget {
            continue;
        }
        let m = rng.gen_range(0..=(budget / d.dim()).min(2));
        for _ in 0..m {
            parts.push(d);
            budget -= d.dim();
        }
        mults[i] = m;
    }
    if parts.is_empty() {
        let op = Arc::new(crate::algebra::opposite(&inst.algebra));
        return Ok((LeftModule::zero(&op), mults));
    }
    let sum = direct_sum_modules(&parts)?.module;
    let h = small_basis_change(rng, inst.algebra.field(), sum.dim());
    Ok((sum.change_space_basis(&h)?, mults))
}

/// Random module that contains every simple at least once (a progenerator).
pub fn random_progenerator(
    rng: &mut ChaCha8Rng,
    inst: &Instance,
    extra: usize,
) -> Result<LeftModule> {
    let mut parts: Vec<&LeftModule> = inst.simples.iter().collect();
    for _ in 0..extra {
        let i = rng.gen_range(0..inst.simples.len());
        parts.push(&inst.simples[i]);
    }
    let sum = direct_sum_modules(&parts)?.module;
    let h = small_basis_change(rng, inst.algebra.field(), sum.dim());
    sum.change_space_basis(&h)
}

/// Random endomorphism of M: a small-coefficient combination of an
/// intertwiner basis of End(M).
pub fn random_endomorphism(rng: &mut ChaCha8Rng, m: &LeftModule) -> Result<Matrix> {
    let field = m.algebra().field();
    let end = hom_basis(m, m)?;
    let mut out = Matrix::zeros(field, m.dim(), m.dim());
    for b in &end.basis {
        let c = field.from_i64(rng.gen_range(-3..=3));
        if !c.is_zero() {
            out = out.add(&b.scale(&c))?;
        }
    }
    Ok(out)
}
