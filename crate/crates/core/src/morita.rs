//! Morita contexts between algebras: validation of the defining diagrams,
//! the induced map on commutator quotients, compatibility with Frobenius
//! forms, the module-category tensor functor, and context construction from
//! a progenerator.
//!
//! ε and η are stored as matrices on the canonical bases of the tensor
//! spaces N ⊗_B M and M ⊗_A N computed by the tensor machinery; every
//! diagram check composes explicit unit and associativity constraint maps,
//! never implicit identifications.

use std::sync::Arc;

use crate::algebra::{opposite, Algebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::frobenius::{is_frobenius, is_symmetric, FrobeniusForm};
use crate::linalg::{unit_vec, Matrix};
use crate::modules::{
    dual_module, endomorphism_algebra, psi_data, tensor_over_algebra, HomSpace, LeftModule,
    TensorSpace,
};
use crate::trace::TraceMachine;

/// A (B, A)-bimodule: a left module over B and a right module over A
/// (encoded over opposite(A)) on the same space, with commuting actions.
#[derive(Debug, Clone)]
pub struct Bimodule {
    left: LeftModule,
    right: LeftModule,
    right_algebra: Arc<Algebra>,
}

impl Bimodule {
    pub fn new(
        left_algebra: &Arc<Algebra>,
        right_algebra: &Arc<Algebra>,
        left_actions: Vec<Matrix>,
        right_actions: Vec<Matrix>,
    ) -> Result<Bimodule> {
        let left = LeftModule::new(Arc::clone(left_algebra), left_actions)?;
        let a_op = Arc::new(opposite(right_algebra));
        let right = LeftModule::new(a_op, right_actions)?;
        if left.dim() != right.dim() {
            return Err(Error::DimensionMismatch {
                context: "bimodule action sizes",
                expected: left.dim(),
                got: right.dim(),
            });
        }
        Ok(Bimodule {
            left,
            right,
            right_algebra: Arc::clone(right_algebra),
        })
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        self.left.algebra()
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right_algebra
    }

    /// The left-module structure (over the left algebra).
    pub fn left_module(&self) -> &LeftModule {
        &self.left
    }

    /// The right-module structure, encoded over opposite(right algebra).
    pub fn right_module(&self) -> &LeftModule {
        &self.right
    }

    pub fn validate(&self) -> Vec<String> {
        let mut defects = Vec::new();
        for d in self.left.validate() {
            defects.push(format!("left action: {d}"));
        }
        for d in self.right.validate() {
            defects.push(format!("right action: {d}"));
        }
        // commuting actions; generators of both sides suffice
        for (i, bg) in self.left.algebra().generating_set().iter().enumerate() {
            let lb = self.left.action_of(bg).unwrap();
            for (k, ag) in self.right_algebra.generating_set().iter().enumerate() {
                // right action of ag is action_of over the opposite encoding
                let ra = self.right.action_of(ag).unwrap();
                if lb.mul(&ra).unwrap() != ra.mul(&lb).unwrap() {
                    defects.push(format!(
                        "left and right actions fail to commute (generators {i}, {k})"
                    ));
                }
            }
        }
        defects
    }
}

/// A Morita context (A, B, M, N, ε, η) with M a (B,A)-bimodule, N an
/// (A,B)-bimodule, ε: N⊗_B M → A and η: B → M⊗_A N.
#[derive(Debug, Clone)]
pub struct MoritaContext {
    pub a: Arc<Algebra>,
    pub b: Arc<Algebra>,
    pub m: Bimodule,
    pub n: Bimodule,
    pub nm: TensorSpace,
    pub mn: TensorSpace,
    pub eps: Matrix,
    pub eta: Matrix,
}

impl MoritaContext {
    pub fn new(
        a: &Arc<Algebra>,
        b: &Arc<Algebra>,
        m: Bimodule,
        n: Bimodule,
        eps: Matrix,
        eta: Matrix,
    ) -> Result<MoritaContext> {
        if m.left_algebra().as_ref() != b.as_ref()
            || m.right_algebra().as_ref() != a.as_ref()
            || n.left_algebra().as_ref() != a.as_ref()
            || n.right_algebra().as_ref() != b.as_ref()
        {
            return Err(Error::AlgebraMismatch);
        }
        let nm = tensor_over_algebra(n.right_module(), m.left_module())?;
        let mn = tensor_over_algebra(m.right_module(), n.left_module())?;
        if eps.rows() != a.dim() || eps.cols() != nm.dim {
            return Err(Error::DimensionMismatch {
                context: "epsilon shape",
                expected: a.dim() * nm.dim,
                got: eps.rows() * eps.cols(),
            });
        }
        if eta.rows() != mn.dim || eta.cols() != b.dim() {
            return Err(Error::DimensionMismatch {
                context: "eta shape",
                expected: mn.dim * b.dim(),
                got: eta.rows() * eta.cols(),
            });
        }
        Ok(MoritaContext {
            a: Arc::clone(a),
            b: Arc::clone(b),
            m,
            n,
            nm,
            mn,
            eps,
            eta,
        })
    }

    /// Left A-action on N ⊗_B M (through the N factor).
    fn nm_left_a(&self, k: usize) -> Result<Matrix> {
        self.nm.transport_left(self.n.left_module().action(k))
    }

    /// Right A-action on N ⊗_B M (through the M factor).
    fn nm_right_a(&self, k: usize) -> Result<Matrix> {
        self.nm.transport_right(self.m.right_module().action(k))
    }

    /// Left B-action on M ⊗_A N (through the M factor).
    fn mn_left_b(&self, i: usize) -> Result<Matrix> {
        self.mn.transport_left(self.m.left_module().action(i))
    }

    /// Right B-action on M ⊗_A N (through the N factor).
    fn mn_right_b(&self, i: usize) -> Result<Matrix> {
        self.mn.transport_right(self.n.right_module().action(i))
    }

    /// M ⊗ A N as a left module over B^op via its right action.
    fn mn_as_right_b_module(&self) -> Result<LeftModule> {
        let b_op = Arc::new(opposite(&self.b));
        let actions = (0..self.b.dim())
            .map(|i| self.mn_right_b(i))
            .collect::<Result<Vec<_>>>()?;
        LeftModule::new(b_op, actions)
    }

    fn mn_as_left_b_module(&self) -> Result<LeftModule> {
        let actions = (0..self.b.dim())
            .map(|i| self.mn_left_b(i))
            .collect::<Result<Vec<_>>>()?;
        LeftModule::new(Arc::clone(&self.b), actions)
    }

    fn nm_as_left_a_module(&self) -> Result<LeftModule> {
        let actions = (0..self.a.dim())
            .map(|k| self.nm_left_a(k))
            .collect::<Result<Vec<_>>>()?;
        LeftModule::new(Arc::clone(&self.a), actions)
    }

    fn nm_as_right_a_module(&self) -> Result<LeftModule> {
        let a_op = Arc::new(opposite(&self.a));
        let actions = (0..self.a.dim())
            .map(|k| self.nm_right_a(k))
            .collect::<Result<Vec<_>>>()?;
        LeftModule::new(a_op, actions)
    }
}

/// Checks bimodule axioms, the bimodule-map property and invertibility of
/// ε and η, and the first context diagram, reporting every defect.
pub fn validate_context(ctx: &MoritaContext) -> Result<Vec<String>> {
    let mut defects = Vec::new();
    for d in ctx.m.validate() {
        defects.push(format!("M: {d}"));
    }
    for d in ctx.n.validate() {
        defects.push(format!("N: {d}"));
    }
    // ε is a map of (A,A)-bimodules
    for k in 0..ctx.a.dim() {
        let e = ctx.a.basis_vec(k);
        let l = ctx.a.left_regular(&e)?;
        let r = ctx.a.right_regular(&e)?;
        if ctx.eps.mul(&ctx.nm_left_a(k)?)? != l.mul(&ctx.eps)? {
            defects.push(format!(
                "epsilon does not intertwine the left action of e{k}"
            ));
        }
        if ctx.eps.mul(&ctx.nm_right_a(k)?)? != r.mul(&ctx.eps)? {
            defects.push(format!(
                "epsilon does not intertwine the right action of e{k}"
            ));
        }
    }
    // η is a map of (B,B)-bimodules
    for i in 0..ctx.b.dim() {
        let e = ctx.b.basis_vec(i);
        let l = ctx.b.left_regular(&e)?;
        let r = ctx.b.right_regular(&e)?;
        if ctx.mn_left_b(i)?.mul(&ctx.eta)? != ctx.eta.mul(&l)? {
            defects.push(format!("eta does not intertwine the left action of e{i}"));
        }
        if ctx.mn_right_b(i)?.mul(&ctx.eta)? != ctx.eta.mul(&r)? {
            defects.push(format!("eta does not intertwine the right action of e{i}"));
        }
    }
    if ctx.eps.rows() != ctx.eps.cols() || ctx.eps.rank() != ctx.eps.rows() {
        defects.push("epsilon is not invertible".into());
    }
    if ctx.eta.rows() != ctx.eta.cols() || ctx.eta.rank() != ctx.eta.rows() {
        defects.push("eta is not invertible".into());
    }
    if !check_first_diagram(ctx)? {
        defects.push("the (η ⊗ id, id ⊗ ε) diagram over M does not commute".into());
    }
    Ok(defects)
}

/// Diagram over M: the composite B⊗_B M → (M⊗_A N)⊗_B M → M⊗_A (N⊗_B M)
/// → M⊗_A A → M equals the left unit constraint.
pub fn check_first_diagram(ctx: &MoritaContext) -> Result<bool> {
    let field = ctx.a.field();
    let m_dim = ctx.m.dim();
    let b_op = Arc::new(opposite(&ctx.b));
    let b_reg_right = LeftModule::regular(&b_op);
    // B ⊗_B M
    let bm = tensor_over_algebra(&b_reg_right, ctx.m.left_module())?;
    // (M⊗_A N) ⊗_B M
    let mn_right_b = ctx.mn_as_right_b_module()?;
    let mnm_outer = tensor_over_algebra(&mn_right_b, ctx.m.left_module())?;
    // M ⊗_A (N⊗_B M)
    let nm_left_a = ctx.nm_as_left_a_module()?;
    let m_nm = tensor_over_algebra(ctx.m.right_module(), &nm_left_a)?;
    // M ⊗_A A
    let a_reg = LeftModule::regular(&ctx.a);
    let ma = tensor_over_algebra(ctx.m.right_module(), &a_reg)?;

    // η ⊗ id_M
    let eta_id = mnm_outer
        .pi
        .mul(&ctx.eta.kronecker(&Matrix::identity(field, m_dim))?)?
        .mul(&bm.iota)?;
    // associativity (M⊗N)⊗M → M⊗(N⊗M)
    let assoc = m_nm
        .pi
        .mul(&Matrix::identity(field, m_dim).kronecker(&ctx.nm.pi)?)?
        .mul(&ctx.mn.iota.kronecker(&Matrix::identity(field, m_dim))?)?
        .mul(&mnm_outer.iota)?;
    // id_M ⊗ ε
    let id_eps = ma
        .pi
        .mul(&Matrix::identity(field, m_dim).kronecker(&ctx.eps)?)?
        .mul(&m_nm.iota)?;
    // unit constraints
    let mut runit_raw = Matrix::zeros(field, m_dim, ma.raw_dim());
    for u in 0..m_dim {
        for j in 0..ctx.a.dim() {
            let col = ctx.m.right_module().action(j).col(u);
            for (r, v) in col.into_iter().enumerate() {
                runit_raw.set(r, u * ma.y_dim + j, v);
            }
        }
    }
    let runit = runit_raw.mul(&ma.iota)?;
    let mut lunit_raw = Matrix::zeros(field, m_dim, bm.raw_dim());
    for i in 0..ctx.b.dim() {
        for u in 0..m_dim {
            let col = ctx.m.left_module().action(i).col(u);
            for (r, v) in col.into_iter().enumerate() {
                lunit_raw.set(r, i * bm.y_dim + u, v);
            }
        }
    }
    let lunit = lunit_raw.mul(&bm.iota)?;

    let path = runit.mul(&id_eps)?.mul(&assoc)?.mul(&eta_id)?;
    Ok(path == lunit)
}

/// Diagram over N: the composite N⊗_B B → N⊗_B (M⊗_A N) → (N⊗_B M)⊗_A N
/// → A⊗_A N → N equals the right unit constraint. By the standard lemma it
/// holds exactly when the first diagram does; exposed separately so the
/// equivalence itself can be property-tested.
pub fn check_second_diagram(ctx: &MoritaContext) -> Result<bool> {
    let field = ctx.a.field();
    let n_dim = ctx.n.dim();
    // N ⊗_B B
    let b_reg = LeftModule::regular(&ctx.b);
    let nb = tensor_over_algebra(ctx.n.right_module(), &b_reg)?;
    // N ⊗_B (M⊗_A N)
    let mn_left_b = ctx.mn_as_left_b_module()?;
    let n_mn = tensor_over_algebra(ctx.n.right_module(), &mn_left_b)?;
    // (N⊗_B M) ⊗_A N
    let nm_right_a = ctx.nm_as_right_a_module()?;
    let nmn_outer = tensor_over_algebra(&nm_right_a, ctx.n.left_module())?;
    // A ⊗_A N
    let a_op = Arc::new(opposite(&ctx.a));
    let a_reg_right = LeftModule::regular(&a_op);
    let an = tensor_over_algebra(&a_reg_right, ctx.n.left_module())?;

    // id_N ⊗ η
    let id_eta = n_mn
        .pi
        .mul(&Matrix::identity(field, n_dim).kronecker(&ctx.eta)?)?
        .mul(&nb.iota)?;
    // associativity (N⊗M)⊗N → N⊗(M⊗N), then inverted
    let assoc = n_mn
        .pi
        .mul(&Matrix::identity(field, n_dim).kronecker(&ctx.mn.pi)?)?
        .mul(&ctx.nm.iota.kronecker(&Matrix::identity(field, n_dim))?)?
        .mul(&nmn_outer.iota)?;
    let assoc_inv = assoc.inverse()?;
    // ε ⊗ id_N
    let eps_id = an
        .pi
        .mul(&ctx.eps.kronecker(&Matrix::identity(field, n_dim))?)?
        .mul(&nmn_outer.iota)?;
    // unit constraints
    let mut lunit_raw = Matrix::zeros(field, n_dim, an.raw_dim());
    for j in 0..ctx.a.dim() {
        for u in 0..n_dim {
            let col = ctx.n.left_module().action(j).col(u);
            for (r, v) in col.into_iter().enumerate() {
                lunit_raw.set(r, j * an.y_dim + u, v);
            }
        }
    }
    let lunit = lunit_raw.mul(&an.iota)?;
    let mut runit_raw = Matrix::zeros(field, n_dim, nb.raw_dim());
    for u in 0..n_dim {
        for i in 0..ctx.b.dim() {
            let col = ctx.n.right_module().action(i).col(u);
            for (r, v) in col.into_iter().enumerate() {
                runit_raw.set(r, u * nb.y_dim + i, v);
            }
        }
    }
    let runit = runit_raw.mul(&nb.iota)?;

    let path = lunit.mul(&eps_id)?.mul(&assoc_inv)?.mul(&id_eta)?;
    Ok(path == runit)
}

/// A representative of ε⁻¹(1_A) in the raw coordinates of N ⊗_K M.
pub fn eps_preimage_of_unit(ctx: &MoritaContext) -> Result<Vec<Scalar>> {
    let quotient_coords = match ctx.eps.solve(ctx.a.unit())? {
        Some(x) => x,
        None => {
            return Err(Error::InvalidContext(
                "epsilon does not reach the unit of A".into(),
            ))
        }
    };
    ctx.nm.lift(&quotient_coords)
}

/// Splits a raw N ⊗_K M vector into pure-tensor terms (n-part, m-part),
/// folding the coefficient into the n-part.
pub fn preimage_terms(ctx: &MoritaContext, raw: &[Scalar]) -> Vec<(Vec<Scalar>, Vec<Scalar>)> {
    let field = ctx.a.field();
    let n_dim = ctx.n.dim();
    let m_dim = ctx.m.dim();
    let mut terms = Vec::new();
    for u in 0..n_dim {
        for v in 0..m_dim {
            let c = &raw[u * m_dim + v];
            if !c.is_zero() {
                let mut n_part = vec![field.zero(); n_dim];
                n_part[u] = c.clone();
                terms.push((n_part, unit_vec(field, m_dim, v)));
            }
        }
    }
    terms
}

/// The linear map A → B, a ↦ Σ_t η⁻¹(m_t·a ⊗ n_t), computed from a chosen
/// representative Σ_t n_t ⊗ m_t of ε⁻¹(1_A). Composing with the commutator
/// projections yields the canonical isomorphism A/\[A,A] → B/\[B,B].
pub fn transfer_map(ctx: &MoritaContext, preimage_raw: &[Scalar]) -> Result<Matrix> {
    let eta_inv = ctx
        .eta
        .inverse()
        .map_err(|_| Error::InvalidContext("eta is not invertible".into()))?;
    let field = ctx.a.field();
    let terms = preimage_terms(ctx, preimage_raw);
    let mut out = Matrix::zeros(field, ctx.b.dim(), ctx.a.dim());
    for j in 0..ctx.a.dim() {
        let mut col = vec![field.zero(); ctx.b.dim()];
        for (n_part, m_part) in &terms {
            // m_t · e_j in M
            let moved = ctx.m.right_module().action(j).mul_vec(m_part)?;
            let raw = ctx.mn.pure_raw(&moved, n_part);
            let t = ctx.mn.project(&raw)?;
            let b = eta_inv.mul_vec(&t)?;
            for (acc, v) in col.iter_mut().zip(b) {
                *acc = acc.add(&v);
            }
        }
        for (r, v) in col.into_iter().enumerate() {
            out.set(r, j, v);
        }
    }
    Ok(out)
}

/// The induced isomorphism A/\[A,A] → B/\[B,B] in the canonical quotient
/// coordinates of `commutator_subspace`.
pub fn induced_commutator_quotient_map(ctx: &MoritaContext) -> Result<Matrix> {
    let raw = eps_preimage_of_unit(ctx)?;
    let g = transfer_map(ctx, &raw)?;
    let (_, qa) = ctx.a.commutator_subspace();
    let (_, qb) = ctx.b.commutator_subspace();
    // a section of the projection q_A
    let section = qa
        .solve_matrix(&Matrix::identity(ctx.a.field(), qa.rows()))?
        .ok_or_else(|| Error::InvalidContext("commutator projection has no section".into()))?;
    qb.mul(&g)?.mul(&section)
}

/// λ^A = λ^B ∘ f on A/\[A,A] for the induced map f; by linearity this is
/// checked as λ^A(e_j) = λ^B(g(e_j)) on the full basis.
pub fn is_compatible(
    ctx: &MoritaContext,
    form_a: &FrobeniusForm,
    form_b: &FrobeniusForm,
) -> Result<bool> {
    for (alg, form) in [(&ctx.a, form_a), (&ctx.b, form_b)] {
        if !is_symmetric(alg, form)? {
            return Err(Error::AsymmetricForm);
        }
        if !is_frobenius(alg, form)? {
            return Err(Error::NotFrobenius);
        }
    }
    let raw = eps_preimage_of_unit(ctx)?;
    let g = transfer_map(ctx, &raw)?;
    Ok(g.transpose().mul_vec(&form_b.lambda)? == form_a.lambda)
}

/// M ⊗_A X as a left B-module, together with the tensor space used to
/// transport morphisms.
pub fn tensor_functor_module(
    ctx: &MoritaContext,
    x: &LeftModule,
) -> Result<(LeftModule, TensorSpace)> {
    let space = tensor_over_algebra(ctx.m.right_module(), x)?;
    let actions = (0..ctx.b.dim())
        .map(|i| space.transport_left(ctx.m.left_module().action(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok((LeftModule::new(Arc::clone(&ctx.b), actions)?, space))
}

/// id_M ⊗ f on the tensor spaces of the source and target modules.
pub fn tensor_functor_hom(
    ctx: &MoritaContext,
    source_space: &TensorSpace,
    target_space: &TensorSpace,
    f: &Matrix,
) -> Result<Matrix> {
    let field = ctx.a.field();
    target_space
        .pi
        .mul(&Matrix::identity(field, ctx.m.dim()).kronecker(f)?)?
        .mul(&source_space.iota)
}

/// Trace preservation of M ⊗_A − on the given sample of objects and
/// endomorphisms: tr_{M⊗X}(id ⊗ f) = tr_X(f) for every sampled (X, f).
pub fn check_cy_functor(
    ctx: &MoritaContext,
    form_a: &FrobeniusForm,
    form_b: &FrobeniusForm,
    samples: &[(LeftModule, Vec<Matrix>)],
) -> Result<bool> {
    for (x, endos) in samples {
        let (mx, space) = tensor_functor_module(ctx, x)?;
        let machine_a = TraceMachine::new(x, form_a)?;
        let machine_b = TraceMachine::new(&mx, form_b)?;
        for f in endos {
            let lhs = machine_a.trace(f)?;
            let transported = tensor_functor_hom(ctx, &space, &space, f)?;
            let rhs = machine_b.trace(&transported)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Builds the default sample for `check_cy_functor`: every simple module
/// plus three random modules of bounded dimension, with seeded random
/// endomorphisms of each.
pub fn default_cy_samples(
    inst: &crate::sample::Instance,
    seed: u64,
    endos_per_module: usize,
) -> Result<Vec<(LeftModule, Vec<Matrix>)>> {
    let field = inst.algebra.field();
    let mut rng = crate::sample::rng_for(seed, 0xCF57);
    let mut samples = Vec::new();
    for v in &inst.simples {
        let mut endos = vec![Matrix::identity(field, v.dim())];
        for _ in 0..endos_per_module.saturating_sub(1) {
            endos.push(crate::sample::random_endomorphism(&mut rng, v)?);
        }
        samples.push((v.clone(), endos));
    }
    for _ in 0..3 {
        let m = crate::sample::random_module(&mut rng, inst, 8)?;
        let mut endos = Vec::with_capacity(endos_per_module);
        for _ in 0..endos_per_module {
            endos.push(crate::sample::random_endomorphism(&mut rng, &m)?);
        }
        samples.push((m, endos));
    }
    Ok(samples)
}

/// `check_cy_functor` over the default sample spec.
pub fn check_cy_functor_samples(
    ctx: &MoritaContext,
    form_a: &FrobeniusForm,
    form_b: &FrobeniusForm,
    inst: &crate::sample::Instance,
    seed: u64,
    endos_per_module: usize,
) -> Result<bool> {
    let samples = default_cy_samples(inst, seed, endos_per_module)?;
    check_cy_functor(ctx, form_a, form_b, &samples)
}

/// The square relating Ψ over A to Ψ over B through the tensor functor:
/// Ψ_{M⊗T,M⊗T} ∘ ξ = (id_M ⊗ −) ∘ Ψ_{T,T} as matrices, verified on the
/// whole basis of T* ⊗_A T.
pub fn check_xi_diagram(ctx: &MoritaContext, t: &LeftModule) -> Result<bool> {
    let field = ctx.a.field();
    let psi_t = psi_data(t, t)?;
    let (mt, st) = tensor_functor_module(ctx, t)?;
    let psi_mt = psi_data(&mt, &mt)?;
    let raw_pre = eps_preimage_of_unit(ctx)?;
    let terms = preimage_terms(ctx, &raw_pre);
    let eta_inv = ctx
        .eta
        .inverse()
        .map_err(|_| Error::InvalidContext("eta is not invertible".into()))?;
    let mt_dual_space = HomSpace {
        source_dim: mt.dim(),
        target_dim: ctx.b.dim(),
        basis: psi_mt.p_dual.functionals.clone(),
    };

    for s in 0..psi_t.space.dim {
        let s_raw = psi_t.space.lift(&unit_vec(field, psi_t.space.dim, s))?;
        // ξ of the lifted representative Σ c_(u,v) t*_u ⊗ t_v
        let mut xi_raw = vec![field.zero(); psi_mt.space.raw_dim()];
        for u in 0..psi_t.space.x_dim {
            for v in 0..psi_t.space.y_dim {
                let c = &s_raw[u * psi_t.space.y_dim + v];
                if c.is_zero() {
                    continue;
                }
                let functional = &psi_t.p_dual.functionals[u];
                for (n_part, m_part) in &terms {
                    // φ: M⊗T → B, x ⊗ y ↦ η⁻¹(x·t*(y) ⊗ n_t)
                    let mut phi = Matrix::zeros(field, ctx.b.dim(), mt.dim());
                    for w in 0..mt.dim() {
                        let lifted = st.lift(&unit_vec(field, mt.dim(), w))?;
                        let mut acc = vec![field.zero(); ctx.b.dim()];
                        for p in 0..st.x_dim {
                            for q in 0..st.y_dim {
                                let d = &lifted[p * st.y_dim + q];
                                if d.is_zero() {
                                    continue;
                                }
                                let a_val = functional.col(q);
                                let moved = ctx.m.right_module().action_of(&a_val)?.col(p);
                                let raw = ctx.mn.pure_raw(&moved, n_part);
                                let b_val = eta_inv.mul_vec(&ctx.mn.project(&raw)?)?;
                                for (accv, bv) in acc.iter_mut().zip(b_val) {
                                    if !bv.is_zero() {
                                        *accv = accv.add(&d.mul(&bv));
                                    }
                                }
                            }
                        }
                        for (r, v2) in acc.into_iter().enumerate() {
                            phi.set(r, w, v2);
                        }
                    }
                    let phi_coords = mt_dual_space.coords_of(&phi)?;
                    // m_t ⊗ t_v as element of M ⊗_A T
                    let mt_elem = st.project(&st.pure_raw(m_part, &unit_vec(field, t.dim(), v)))?;
                    for (i1, pc) in phi_coords.iter().enumerate() {
                        if pc.is_zero() {
                            continue;
                        }
                        for (i2, tc) in mt_elem.iter().enumerate() {
                            if tc.is_zero() {
                                continue;
                            }
                            let idx = i1 * psi_mt.space.y_dim + i2;
                            xi_raw[idx] = xi_raw[idx].add(&c.mul(&pc.mul(tc)));
                        }
                    }
                }
            }
        }
        let xi_s = psi_mt.space.project(&xi_raw)?;
        let lhs = psi_mt.psi.mul_vec(&xi_s)?;
        // other route: Ψ_T then id_M ⊗ −
        let f_coords = psi_t.psi.mul_vec(&unit_vec(field, psi_t.space.dim, s))?;
        let f = psi_t.hom.from_coords(&f_coords)?;
        let transported = tensor_functor_hom(ctx, &st, &st, &f)?;
        let rhs = psi_mt.hom.coords_of(&transported)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Morita context between A and End_A(P) for a progenerator P: N = P,
/// M = P* = Hom_A(P, A), ε the evaluation and η = Ψ_{P,P}⁻¹.
pub fn context_from_progenerator(a: &Arc<Algebra>, p: &LeftModule) -> Result<MoritaContext> {
    if p.algebra().as_ref() != a.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    let field = a.field();
    let dual = dual_module(p)?;
    // generator test: the values f(x) over f ∈ P*, x ∈ P must span A
    let mut value_cols = Vec::new();
    for f in &dual.functionals {
        for v in 0..p.dim() {
            value_cols.push(f.col(v));
        }
    }
    let trace_ideal_rank = if value_cols.is_empty() {
        0
    } else {
        Matrix::from_cols(field, value_cols)?.rank()
    };
    if trace_ideal_rank != a.dim() {
        return Err(Error::NotGenerator(format!(
            "trace ideal has dimension {trace_ideal_rank} < {}",
            a.dim()
        )));
    }
    let (b, end_hom) = endomorphism_algebra(p)?;
    // N = P as an (A, B)-bimodule
    let n_left: Vec<Matrix> = (0..a.dim()).map(|i| p.action(i).clone()).collect();
    let n_right: Vec<Matrix> = end_hom.basis.clone();
    let n = Bimodule::new(a, &b, n_left, n_right)?;
    // M = P* as a (B, A)-bimodule: (b·f) = f ∘ b̂, (f·a)(x) = f(x)·a
    let t = dual.functionals.len();
    let mut m_left = Vec::with_capacity(b.dim());
    let dual_hom = HomSpace {
        source_dim: p.dim(),
        target_dim: a.dim(),
        basis: dual.functionals.clone(),
    };
    for h in &end_hom.basis {
        let mut images = Vec::with_capacity(t);
        for f in &dual.functionals {
            images.push(f.mul(h)?);
        }
        let coords = dual_hom.coords_of_many(&images)?;
        let mut act = Matrix::zeros(field, t, t);
        for (u, cs) in coords.into_iter().enumerate() {
            for (w, cval) in cs.into_iter().enumerate() {
                act.set(w, u, cval);
            }
        }
        m_left.push(act);
    }
    let m_right: Vec<Matrix> = (0..a.dim())
        .map(|k| dual.module.action(k).clone())
        .collect();
    let m = Bimodule::new(&b, a, m_left, m_right)?;
    // ε: P ⊗_B P* → A, p ⊗ f ↦ f(p)
    let nm = tensor_over_algebra(n.right_module(), m.left_module())?;
    let mut eps_raw = Matrix::zeros(field, a.dim(), nm.raw_dim());
    for u in 0..p.dim() {
        for (v, f) in dual.functionals.iter().enumerate() {
            let val = f.col(u);
            for (r, s) in val.into_iter().enumerate() {
                eps_raw.set(r, u * nm.y_dim + v, s);
            }
        }
    }
    let eps = eps_raw.mul(&nm.iota)?;
    // η = Ψ_{P,P}⁻¹ under the identification of B with End_A(P)
    let psi = psi_data(p, p)?;
    let eta = psi.psi_inverse()?;
    MoritaContext::new(a, &b, m, n, eps, eta)
}

/// The identity context of an algebra: M = N = A with ε multiplication and
/// η its inverse.
pub fn identity_context(a: &Arc<Algebra>) -> Result<MoritaContext> {
    let field = a.field();
    let reg: Vec<Matrix> = (0..a.dim())
        .map(|i| a.left_regular(&a.basis_vec(i)).unwrap())
        .collect();
    let rreg: Vec<Matrix> = (0..a.dim())
        .map(|i| a.right_regular(&a.basis_vec(i)).unwrap())
        .collect();
    let m = Bimodule::new(a, a, reg.clone(), rreg.clone())?;
    let n = Bimodule::new(a, a, reg, rreg)?;
    let nm = tensor_over_algebra(n.right_module(), m.left_module())?;
    let mn = tensor_over_algebra(m.right_module(), n.left_module())?;
    let mut mult_raw_nm = Matrix::zeros(field, a.dim(), nm.raw_dim());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let prod = a.multiply(&a.basis_vec(i), &a.basis_vec(j))?;
            for (r, v) in prod.into_iter().enumerate() {
                mult_raw_nm.set(r, i * nm.y_dim + j, v);
            }
        }
    }
    let eps = mult_raw_nm.mul(&nm.iota)?;
    let mut mult_raw_mn = Matrix::zeros(field, a.dim(), mn.raw_dim());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let prod = a.multiply(&a.basis_vec(i), &a.basis_vec(j))?;
            for (r, v) in prod.into_iter().enumerate() {
                mult_raw_mn.set(r, i * mn.y_dim + j, v);
            }
        }
    }
    let eta = mult_raw_mn.mul(&mn.iota)?.inverse()?;
    MoritaContext::new(a, a, m, n, eps, eta)
}

/// Transports ε and η through invertible coordinate changes on M and N,
/// producing an equal context in hidden coordinates.
pub fn change_bimodule_bases(
    ctx: &MoritaContext,
    h_m: &Matrix,
    h_n: &Matrix,
) -> Result<MoritaContext> {
    let hm_inv = h_m.inverse()?;
    let hn_inv = h_n.inverse()?;
    let conj = |actions: Vec<Matrix>, h: &Matrix, h_inv: &Matrix| -> Result<Vec<Matrix>> {
        actions
            .into_iter()
            .map(|m| h_inv.mul(&m).and_then(|x| x.mul(h)))
            .collect()
    };
    let m_left = conj(
        (0..ctx.b.dim())
            .map(|i| ctx.m.left_module().action(i).clone())
            .collect(),
        h_m,
        &hm_inv,
    )?;
    let m_right = conj(
        (0..ctx.a.dim())
            .map(|k| ctx.m.right_module().action(k).clone())
            .collect(),
        h_m,
        &hm_inv,
    )?;
    let n_left = conj(
        (0..ctx.a.dim())
            .map(|k| ctx.n.left_module().action(k).clone())
            .collect(),
        h_n,
        &hn_inv,
    )?;
    let n_right = conj(
        (0..ctx.b.dim())
            .map(|i| ctx.n.right_module().action(i).clone())
            .collect(),
        h_n,
        &hn_inv,
    )?;
    let m2 = Bimodule::new(&ctx.b, &ctx.a, m_left, m_right)?;
    let n2 = Bimodule::new(&ctx.a, &ctx.b, n_left, n_right)?;
    let nm2 = tensor_over_algebra(n2.right_module(), m2.left_module())?;
    let mn2 = tensor_over_algebra(m2.right_module(), n2.left_module())?;
    // ε₂ = ε_raw ∘ (h_n ⊗ h_m) ∘ ι₂ and η₂ = π₂ ∘ (h_m⁻¹ ⊗ h_n⁻¹) ∘ ι ∘ η
    let eps2 = ctx
        .eps
        .mul(&ctx.nm.pi)?
        .mul(&h_n.kronecker(h_m)?)?
        .mul(&nm2.iota)?;
    let eta2 = mn2
        .pi
        .mul(&hm_inv.kronecker(&hn_inv)?)?
        .mul(&ctx.mn.iota)?
        .mul(&ctx.eta)?;
    MoritaContext::new(&ctx.a, &ctx.b, m2, n2, eps2, eta2)
}

/// Scales η alone, which breaks the context diagrams unless c = 1.
pub fn scale_eta(ctx: &MoritaContext, c: &Scalar) -> Result<MoritaContext> {
    MoritaContext::new(
        &ctx.a,
        &ctx.b,
        ctx.m.clone(),
        ctx.n.clone(),
        ctx.eps.clone(),
        ctx.eta.scale(c),
    )
}

/// A morphism of Morita contexts between the same pair of algebras: α on M
/// and β on N making both transfer squares commute.
pub fn validate_morphism(
    src: &MoritaContext,
    dst: &MoritaContext,
    alpha: &Matrix,
    beta: &Matrix,
) -> Result<Vec<String>> {
    let mut defects = Vec::new();
    if src.a.as_ref() != dst.a.as_ref() || src.b.as_ref() != dst.b.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    // bimodule maps
    for i in 0..src.b.dim() {
        if alpha.mul(src.m.left_module().action(i))? != dst.m.left_module().action(i).mul(alpha)? {
            defects.push(format!(
                "alpha does not intertwine the left B-action of e{i}"
            ));
        }
        if beta.mul(src.n.right_module().action(i))? != dst.n.right_module().action(i).mul(beta)? {
            defects.push(format!(
                "beta does not intertwine the right B-action of e{i}"
            ));
        }
    }
    for k in 0..src.a.dim() {
        if alpha.mul(src.m.right_module().action(k))?
            != dst.m.right_module().action(k).mul(alpha)?
        {
            defects.push(format!(
                "alpha does not intertwine the right A-action of e{k}"
            ));
        }
        if beta.mul(src.n.left_module().action(k))? != dst.n.left_module().action(k).mul(beta)? {
            defects.push(format!(
                "beta does not intertwine the left A-action of e{k}"
            ));
        }
    }
    // (α ⊗ β) ∘ η = η′
    let ab = dst.mn.pi.mul(&alpha.kronecker(beta)?)?.mul(&src.mn.iota)?;
    if ab.mul(&src.eta)? != dst.eta {
        defects.push("the η square does not commute".into());
    }
    // ε′ ∘ (β ⊗ α) = ε
    let ba = dst.nm.pi.mul(&beta.kronecker(alpha)?)?.mul(&src.nm.iota)?;
    if dst.eps.mul(&ba)? != src.eps {
        defects.push("the ε square does not commute".into());
    }
    Ok(defects)
}

/// Component α ⊗ id_X of the natural transformation induced by a morphism
/// of contexts.
pub fn induced_transformation_component(
    src_space: &TensorSpace,
    dst_space: &TensorSpace,
    alpha: &Matrix,
    x_dim: usize,
) -> Result<Matrix> {
    let field = alpha.field();
    dst_space
        .pi
        .mul(&alpha.kronecker(&Matrix::identity(field, x_dim))?)?
        .mul(&src_space.iota)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, product_algebra};
    use crate::field::FieldSpec;
    use crate::modules::test_support::column_module;
    use crate::modules::{direct_sum_modules, simple_modules, LeftModule};
    use crate::sample::{instance, random_progenerator, rng_for, GenParams};

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

    fn standard_context() -> MoritaContext {
        let v = column_module(qq(), 2);
        let a = Arc::clone(v.algebra());
        context_from_progenerator(&a, &v).unwrap()
    }

    #[test]
    fn identity_context_is_valid() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let ctx = identity_context(&a).unwrap();
        assert!(validate_context(&ctx).unwrap().is_empty());
        assert!(check_second_diagram(&ctx).unwrap());
        // induced map on commutator quotients is the identity
        let f = induced_commutator_quotient_map(&ctx).unwrap();
        assert_eq!(f, Matrix::identity(qq(), 1));
    }

    #[test]
    fn progenerator_context_for_columns_over_m2() {
        let ctx = standard_context();
        assert_eq!(ctx.b.dim(), 1);
        assert!(validate_context(&ctx).unwrap().is_empty());
        assert!(check_second_diagram(&ctx).unwrap());
        // ε applied to the preimage of the unit gives the unit back
        let raw = eps_preimage_of_unit(&ctx).unwrap();
        let projected = ctx.nm.project(&raw).unwrap();
        assert_eq!(ctx.eps.mul_vec(&projected).unwrap(), ctx.a.unit().to_vec());
        // transfer of E₁₁ is the unit of B
        let g = transfer_map(&ctx, &raw).unwrap();
        let mut e11 = vec![qi(0); 4];
        e11[0] = qi(1);
        assert_eq!(g.mul_vec(&e11).unwrap(), ctx.b.unit().to_vec());
        let f = induced_commutator_quotient_map(&ctx).unwrap();
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn progenerator_context_from_regular_module() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let reg = LeftModule::regular(&a);
        let ctx = context_from_progenerator(&a, &reg).unwrap();
        assert_eq!(ctx.b.dim(), 4);
        assert!(validate_context(&ctx).unwrap().is_empty());
        let f = induced_commutator_quotient_map(&ctx).unwrap();
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn progenerator_context_over_product() {
        let a =
            Arc::new(product_algebra(&matrix_algebra(qq(), 2), &matrix_algebra(qq(), 3)).unwrap());
        let wd = a.wedderburn(1).unwrap();
        let simples = simple_modules(&a, &wd).unwrap();
        let p = direct_sum_modules(&[&simples[0], &simples[1]])
            .unwrap()
            .module;
        let ctx = context_from_progenerator(&a, &p).unwrap();
        assert_eq!(ctx.b.dim(), 2);
        assert!(validate_context(&ctx).unwrap().is_empty());
        // block counts match on both sides of the induced map
        let f = induced_commutator_quotient_map(&ctx).unwrap();
        assert_eq!(f.rows(), 2);
        assert_eq!(f.cols(), 2);
        assert_eq!(f.rank(), 2);
        // a non-generator is rejected
        assert!(matches!(
            context_from_progenerator(&a, &simples[0]),
            Err(Error::NotGenerator(_))
        ));
    }

    #[test]
    fn scaled_eta_breaks_both_diagrams() {
        let ctx = standard_context();
        let broken = scale_eta(&ctx, &qi(2)).unwrap();
        let defects = validate_context(&broken).unwrap();
        assert!(!defects.is_empty());
        assert!(!check_first_diagram(&broken).unwrap());
        assert!(!check_second_diagram(&broken).unwrap());
    }

    #[test]
    fn diagram_equivalence_on_transported_contexts() {
        let mut rng = rng_for(808, 0);
        let params = GenParams::compact(qq());
        for k in 0..4u64 {
            let mut r2 = rng_for(808, k + 1);
            let inst = instance(&mut r2, &params).unwrap();
            let p = random_progenerator(&mut r2, &inst, 1).unwrap();
            let ctx = context_from_progenerator(&inst.algebra, &p).unwrap();
            let hm = crate::sample::small_basis_change(&mut rng, qq(), ctx.m.dim());
            let hn = crate::sample::small_basis_change(&mut rng, qq(), ctx.n.dim());
            let moved = change_bimodule_bases(&ctx, &hm, &hn).unwrap();
            assert!(validate_context(&moved).unwrap().is_empty(), "seed {k}");
            assert_eq!(
                check_first_diagram(&moved).unwrap(),
                check_second_diagram(&moved).unwrap()
            );
            let broken = scale_eta(&moved, &qi(3)).unwrap();
            assert_eq!(
                check_first_diagram(&broken).unwrap(),
                check_second_diagram(&broken).unwrap()
            );
        }
    }

    #[test]
    fn representative_independence_of_transfer() {
        let ctx = standard_context();
        let raw = eps_preimage_of_unit(&ctx).unwrap();
        let (_, qb) = ctx.b.commutator_subspace();
        let reduced = qb.mul(&transfer_map(&ctx, &raw).unwrap()).unwrap();
        // shift by relation vectors: anything in the kernel of π
        let field = qq();
        let relations = Matrix::identity(field, ctx.nm.raw_dim())
            .sub(&ctx.nm.iota.mul(&ctx.nm.pi).unwrap())
            .unwrap();
        for c in 0..ctx.nm.raw_dim() {
            let mut shifted = raw.clone();
            let col = relations.col(c);
            for (s, v) in shifted.iter_mut().zip(col) {
                *s = s.add(&v);
            }
            let reduced2 = qb.mul(&transfer_map(&ctx, &shifted).unwrap()).unwrap();
            assert_eq!(reduced, reduced2);
        }
    }

    #[test]
    fn compatibility_of_standard_context() {
        let ctx = standard_context();
        let trace_form = matrix_trace_form(2);
        let id_form = FrobeniusForm {
            lambda: vec![qi(1)],
        };
        assert!(is_compatible(&ctx, &trace_form, &id_form).unwrap());
        // scaling λ^B breaks compatibility
        let doubled = FrobeniusForm {
            lambda: vec![qi(2)],
        };
        assert!(!is_compatible(&ctx, &trace_form, &doubled).unwrap());
        // identity context with equal forms
        let a = Arc::new(matrix_algebra(qq(), 2));
        let idc = identity_context(&a).unwrap();
        assert!(is_compatible(&idc, &trace_form, &trace_form).unwrap());
    }

    #[test]
    fn tensor_functor_preserves_structure() {
        let ctx = standard_context();
        let v = column_module(qq(), 2);
        let (img, space) = tensor_functor_module(&ctx, &v).unwrap();
        assert_eq!(img.dim(), 1);
        assert!(img.validate().is_empty());
        // identities map to identities
        let id2 = Matrix::identity(qq(), 2);
        let tid = tensor_functor_hom(&ctx, &space, &space, &id2).unwrap();
        assert_eq!(tid, Matrix::identity(qq(), 1));
        // composition is preserved on the regular module
        let a = Arc::clone(v.algebra());
        let reg = LeftModule::regular(&a);
        let (_rimg, rspace) = tensor_functor_module(&ctx, &reg).unwrap();
        let endo = crate::modules::hom_basis(&reg, &reg).unwrap();
        let f = &endo.basis[0];
        let g = &endo.basis[endo.dim() - 1];
        let tf = tensor_functor_hom(&ctx, &rspace, &rspace, f).unwrap();
        let tg = tensor_functor_hom(&ctx, &rspace, &rspace, g).unwrap();
        let tgf = tensor_functor_hom(&ctx, &rspace, &rspace, &g.mul(f).unwrap()).unwrap();
        assert_eq!(tg.mul(&tf).unwrap(), tgf);
        // identity context: X maps to a module of the same dimension
        let idc = identity_context(&a).unwrap();
        let (ix, _) = tensor_functor_module(&idc, &v).unwrap();
        assert_eq!(ix.dim(), v.dim());
    }

    #[test]
    fn cy_functor_iff_compatible() {
        let ctx = standard_context();
        let trace_form = matrix_trace_form(2);
        let id_form = FrobeniusForm {
            lambda: vec![qi(1)],
        };
        let v = column_module(qq(), 2);
        let id2 = Matrix::identity(qq(), 2);
        let zero2 = Matrix::zeros(qq(), 2, 2);
        let samples = vec![(v, vec![id2, zero2])];
        assert!(check_cy_functor(&ctx, &trace_form, &id_form, &samples).unwrap());
        let doubled = FrobeniusForm {
            lambda: vec![qi(2)],
        };
        assert!(!check_cy_functor(&ctx, &trace_form, &doubled, &samples).unwrap());
        assert_eq!(
            is_compatible(&ctx, &trace_form, &id_form).unwrap(),
            check_cy_functor(&ctx, &trace_form, &id_form, &samples).unwrap()
        );
        assert_eq!(
            is_compatible(&ctx, &trace_form, &doubled).unwrap(),
            check_cy_functor(&ctx, &trace_form, &doubled, &samples).unwrap()
        );
    }

    #[test]
    fn xi_diagram_on_contexts() {
        let a = Arc::new(matrix_algebra(qq(), 2));
        let idc = identity_context(&a).unwrap();
        let v = column_module(qq(), 2);
        assert!(check_xi_diagram(&idc, &v).unwrap());
        let ctx = standard_context();
        assert!(check_xi_diagram(&ctx, &v).unwrap());
        let reg = LeftModule::regular(&a);
        assert!(check_xi_diagram(&ctx, &reg).unwrap());
    }

    #[test]
    fn morphisms_of_contexts() {
        let ctx = standard_context();
        let id_m = Matrix::identity(qq(), ctx.m.dim());
        let id_n = Matrix::identity(qq(), ctx.n.dim());
        assert!(validate_morphism(&ctx, &ctx, &id_m, &id_n)
            .unwrap()
            .is_empty());
        // c·id on M with c⁻¹·id on N is a morphism to the same context
        let c = qi(3);
        let c_inv = Scalar::ratio(1, 3);
        let alpha = id_m.scale(&c);
        let beta = id_n.scale(&c_inv);
        assert!(validate_morphism(&ctx, &ctx, &alpha, &beta)
            .unwrap()
            .is_empty());
        // scaling α alone breaks the squares
        let defects = validate_morphism(&ctx, &ctx, &alpha, &id_n).unwrap();
        assert!(!defects.is_empty());
        // naturality of α ⊗ id on an object
        let v = column_module(qq(), 2);
        let (_, space) = tensor_functor_module(&ctx, &v).unwrap();
        let comp = induced_transformation_component(&space, &space, &alpha, v.dim()).unwrap();
        let f = Matrix::identity(qq(), 2).scale(&qi(5));
        let tf = tensor_functor_hom(&ctx, &space, &space, &f).unwrap();
        assert_eq!(comp.mul(&tf).unwrap(), tf.mul(&comp).unwrap());
    }
}
