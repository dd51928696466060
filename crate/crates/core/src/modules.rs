//! Modules over structure-constant algebras: validation, hom spaces, duals,
//! tensor products over the algebra, dual bases and the map Ψ, direct sums,
//! and decomposition into simple modules.
//!
//! Right modules are encoded as left modules over the opposite algebra, so
//! there is exactly one multiplicativity convention in the crate. Matrices
//! act on column vectors and composition g∘f is the product g·f.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{opposite, Algebra, WedderburnData};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{column_space_intersection, unit_vec, vec_is_zero, Matrix};
use crate::poly::min_poly_of_krylov;

/// A left module: one action matrix per algebra basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftModule {
    algebra: Arc<Algebra>,
    dim: usize,
    actions: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleDefect {
    Multiplicativity { i: usize, j: usize },
    Unit,
}

impl std::fmt::Display for ModuleDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuleDefect::Multiplicativity { i, j } => {
                write!(f, "ρ(e{i})ρ(e{j}) != Σ c[{i}][{j}][k] ρ(e_k)")
            }
            ModuleDefect::Unit => write!(f, "ρ(unit) != identity"),
        }
    }
}

impl LeftModule {
    pub fn new(algebra: Arc<Algebra>, actions: Vec<Matrix>) -> Result<LeftModule> {
        if actions.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                context: "one action matrix per algebra basis element",
                expected: algebra.dim(),
                got: actions.len(),
            });
        }
        let dim = actions.first().map_or(0, |m| m.rows());
        for m in &actions {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "square action matrices of equal size",
                    expected: dim,
                    got: m.rows().max(m.cols()),
                });
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch(algebra.field(), m.field()));
            }
        }
        Ok(LeftModule {
            algebra,
            dim,
            actions,
        })
    }

    pub fn zero(algebra: &Arc<Algebra>) -> LeftModule {
        let actions = (0..algebra.dim())
            .map(|_| Matrix::zeros(algebra.field(), 0, 0))
            .collect();
        LeftModule {
            algebra: Arc::clone(algebra),
            dim: 0,
            actions,
        }
    }

    /// The algebra acting on itself from the left.
    pub fn regular(algebra: &Arc<Algebra>) -> LeftModule {
        let actions = (0..algebra.dim())
            .map(|i| algebra.left_regular(&algebra.basis_vec(i)).unwrap())
            .collect();
        LeftModule {
            algebra: Arc::clone(algebra),
            dim: algebra.dim(),
            actions,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn action_of(&self, a: &[Scalar]) -> Result<Matrix> {
        if a.len() != self.algebra.dim() {
            return Err(Error::DimensionMismatch {
                context: "algebra element length",
                expected: self.algebra.dim(),
                got: a.len(),
            });
        }
        let mut out = Matrix::zeros(self.algebra.field(), self.dim, self.dim);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.actions[i].scale(c))?;
            }
        }
        Ok(out)
    }

    pub fn act(&self, a: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.action_of(a)?.mul_vec(v)
    }

    /// Checks the algebra-map law on all basis pairs and the unit axiom.
    pub fn validate(&self) -> Vec<ModuleDefect> {
        let mut defects = Vec::new();
        let d = self.algebra.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.actions[i].mul(&self.actions[j]).unwrap();
                let mut rhs = Matrix::zeros(self.algebra.field(), self.dim, self.dim);
                for k in 0..d {
                    let c = self.algebra.constant(i, j, k);
                    if !c.is_zero() {
                        rhs = rhs.add(&self.actions[k].scale(c)).unwrap();
                    }
                }
                if lhs != rhs {
                    defects.push(ModuleDefect::Multiplicativity { i, j });
                }
            }
        }
        if self.action_of(self.algebra.unit()).unwrap()
            != Matrix::identity(self.algebra.field(), self.dim)
        {
            defects.push(ModuleDefect::Unit);
        }
        defects
    }

    /// New coordinates on the module space: ρ′ = h⁻¹ ρ h.
    pub fn change_space_basis(&self, h: &Matrix) -> Result<LeftModule> {
        let h_inv = h.inverse()?;
        let actions = self
            .actions
            .iter()
            .map(|m| h_inv.mul(m).and_then(|x| x.mul(h)))
            .collect::<Result<Vec<_>>>()?;
        LeftModule::new(Arc::clone(&self.algebra), actions)
    }

    /// The same module seen over a base-changed algebra: the new basis
    /// vectors are the columns of g in the old algebra coordinates.
    pub fn transport_algebra_basis(
        &self,
        new_algebra: &Arc<Algebra>,
        g: &Matrix,
    ) -> Result<LeftModule> {
        let actions = (0..new_algebra.dim())
            .map(|j| self.action_of(&g.col(j)))
            .collect::<Result<Vec<_>>>()?;
        LeftModule::new(Arc::clone(new_algebra), actions)
    }
}

/// Direct sum with its canonical injections and projections.
pub struct DirectSum {
    pub module: LeftModule,
    pub injections: Vec<Matrix>,
    pub projections: Vec<Matrix>,
}

pub fn direct_sum_modules(parts: &[&LeftModule]) -> Result<DirectSum> {
    let first = parts.first().ok_or(Error::AlgebraMismatch)?;
    let algebra = Arc::clone(first.algebra());
    for p in parts {
        if p.algebra().as_ref() != algebra.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
    }
    let field = algebra.field();
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    let mut actions = Vec::with_capacity(algebra.dim());
    for i in 0..algebra.dim() {
        let mut m = Matrix::zeros(field, 0, 0);
        for p in parts {
            m = m.direct_sum(p.action(i))?;
        }
        actions.push(m);
    }
    let module = LeftModule::new(algebra, actions)?;
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for p in parts {
        let inj = Matrix::from_fn(field, total, p.dim(), |r, c| {
            if r == offset + c {
                field.one()
            } else {
                field.zero()
            }
        });
        let proj = Matrix::from_fn(field, p.dim(), total, |r, c| {
            if c == offset + r {
                field.one()
            } else {
                field.zero()
            }
        });
        injections.push(inj);
        projections.push(proj);
        offset += p.dim();
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// The free module A^k with its standard decomposition.
pub fn free_module(algebra: &Arc<Algebra>, k: usize) -> Result<DirectSum> {
    if k == 0 {
        let z = LeftModule::zero(algebra);
        return direct_sum_modules(&[&z]);
    }
    let reg = LeftModule::regular(algebra);
    let parts: Vec<&LeftModule> = std::iter::repeat(&reg).take(k).collect();
    direct_sum_modules(&parts)
}

// ---------------------------------------------------------------------------
// hom spaces

/// A basis of intertwiners source → target (matrices of size
/// target_dim × source_dim).
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source_dim: usize,
    pub target_dim: usize,
    pub basis: Vec<Matrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn from_coords(&self, coords: &[Scalar]) -> Result<Matrix> {
        if coords.len() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                context: "hom space coordinates",
                expected: self.basis.len(),
                got: coords.len(),
            });
        }
        let field = match self.basis.first() {
            Some(m) => m.field(),
            None => {
                return Err(Error::DimensionMismatch {
                    context: "from_coords on zero hom space",
                    expected: 1,
                    got: 0,
                })
            }
        };
        let mut out = Matrix::zeros(field, self.target_dim, self.source_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Coordinates of an intertwiner in this basis.
    pub fn coords_of(&self, f: &Matrix) -> Result<Vec<Scalar>> {
        if f.rows() != self.target_dim || f.cols() != self.source_dim {
            return Err(Error::DimensionMismatch {
                context: "hom element shape",
                expected: self.target_dim * self.source_dim,
                got: f.rows() * f.cols(),
            });
        }
        if self.basis.is_empty() {
            if f.is_zero() {
                return Ok(Vec::new());
            }
            return Err(Error::NotIntertwiner);
        }
        let field = f.field();
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(flatten).collect();
        let s = Matrix::from_cols(field, cols)?;
        match s.solve(&flatten(f))? {
            Some(x) => Ok(x),
            None => Err(Error::NotIntertwiner),
        }
    }

    pub fn contains(&self, f: &Matrix) -> bool {
        self.coords_of(f).is_ok()
    }

    /// Coordinates of many intertwiners at once, with a single elimination.
    pub fn coords_of_many(&self, fs: &[Matrix]) -> Result<Vec<Vec<Scalar>>> {
        if fs.is_empty() {
            return Ok(Vec::new());
        }
        if self.basis.is_empty() {
            if fs.iter().any(|f| !f.is_zero()) {
                return Err(Error::NotIntertwiner);
            }
            return Ok(vec![Vec::new(); fs.len()]);
        }
        let field = fs[0].field();
        let basis_cols: Vec<Vec<Scalar>> = self.basis.iter().map(flatten).collect();
        let s = Matrix::from_cols(field, basis_cols)?;
        let rhs = Matrix::from_cols(field, fs.iter().map(flatten).collect())?;
        match s.solve_matrix(&rhs)? {
            Some(x) => Ok((0..fs.len()).map(|j| x.col(j)).collect()),
            None => Err(Error::NotIntertwiner),
        }
    }
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            v.push(m.at(i, j).clone());
        }
    }
    v
}

/// Basis indices whose orbits span the module, found greedily. The running
/// span is a submodule, so spanned candidates contribute nothing.
fn module_generators(m: &LeftModule) -> Vec<usize> {
    let field = m.algebra().field();
    let d = m.algebra().dim();
    let mut gens = Vec::new();
    let mut span = Matrix::zeros(field, m.dim(), 0);
    for v in 0..m.dim() {
        if span.cols() == m.dim() {
            break;
        }
        let e = unit_vec(field, m.dim(), v);
        if span.cols() > 0 && span.solve(&e).unwrap().is_some() {
            continue;
        }
        gens.push(v);
        let mut cols: Vec<Vec<Scalar>> = (0..span.cols()).map(|c| span.col(c)).collect();
        for i in 0..d {
            cols.push(m.action(i).col(v));
        }
        span = Matrix::from_cols(field, cols).unwrap().column_space_basis();
    }
    gens
}

/// Basis of Hom_A(M, N). A map is determined by its values on module
/// generators of M, subject to the relations of the presentation
/// A^g → M, (a_t) ↦ Σ a_t·gen_t; solving in those unknowns keeps the
/// system small.
pub fn hom_basis(m: &LeftModule, n: &LeftModule) -> Result<HomSpace> {
    if m.algebra().as_ref() != n.algebra().as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    let field = m.algebra().field();
    let d = m.algebra().dim();
    let (src, tgt) = (m.dim(), n.dim());
    if src == 0 || tgt == 0 {
        return Ok(HomSpace {
            source_dim: src,
            target_dim: tgt,
            basis: Vec::new(),
        });
    }
    let gens = module_generators(m);
    let g = gens.len();
    // presentation matrix: column t·d + i is ρ_M(e_i)·gen_t
    let mut pres_cols = Vec::with_capacity(g * d);
    for &t in &gens {
        for i in 0..d {
            pres_cols.push(m.action(i).col(t));
        }
    }
    let pres = Matrix::from_cols(field, pres_cols)?;
    let relations = pres.kernel_basis();
    // unknowns y_t ∈ N; one constraint block per relation
    let unknowns = g * tgt;
    let mut rows = Vec::with_capacity(relations.cols() * tgt);
    for c in 0..relations.cols() {
        // the relation is Σ_t a_{c,t}·gen_t = 0 with a_{c,t} ∈ A
        let mut blocks = Vec::with_capacity(g);
        for t in 0..g {
            let coeffs: Vec<Scalar> = (0..d).map(|i| relations.at(t * d + i, c).clone()).collect();
            blocks.push(n.action_of(&coeffs)?);
        }
        for out in 0..tgt {
            let mut row = vec![field.zero(); unknowns];
            for (t, block) in blocks.iter().enumerate() {
                for q in 0..tgt {
                    let v = block.at(out, q);
                    if !v.is_zero() {
                        row[t * tgt + q] = v.clone();
                    }
                }
            }
            if !vec_is_zero(&row) {
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(field, 0, unknowns)
    } else {
        Matrix::from_rows(field, rows)?
    };
    let kernel = system.kernel_basis();
    // every basis vector of M in terms of the presentation, solved once
    let coords = pres
        .solve_matrix(&Matrix::identity(field, src))?
        .expect("generators span the module");
    // action matrices applied to the generator values, per (t, column of M)
    let mut appliers = Vec::with_capacity(g * src);
    for t in 0..g {
        for v in 0..src {
            let coeffs: Vec<Scalar> = (0..d).map(|i| coords.at(t * d + i, v).clone()).collect();
            appliers.push(n.action_of(&coeffs)?);
        }
    }
    let mut basis = Vec::with_capacity(kernel.cols());
    for b in 0..kernel.cols() {
        let ys: Vec<Vec<Scalar>> = (0..g)
            .map(|t| {
                (0..tgt)
                    .map(|q| kernel.at(t * tgt + q, b).clone())
                    .collect()
            })
            .collect();
        let mut x = Matrix::zeros(field, tgt, src);
        for v in 0..src {
            let mut col = vec![field.zero(); tgt];
            for t in 0..g {
                let img = appliers[t * src + v].mul_vec(&ys[t])?;
                for (acc, val) in col.iter_mut().zip(img) {
                    if !val.is_zero() {
                        *acc = acc.add(&val);
                    }
                }
            }
            for (r, val) in col.into_iter().enumerate() {
                x.set(r, v, val);
            }
        }
        basis.push(x);
    }
    Ok(HomSpace {
        source_dim: src,
        target_dim: tgt,
        basis,
    })
}

// ---------------------------------------------------------------------------
// dual modules

/// M* = Hom_A(M, A) with its right action (f.a)(m) = f(m)·a, encoded as a
/// left module over opposite(A). `functionals` are the basis intertwiners
/// M → A (matrices of size dim(A) × dim(M)).
#[derive(Debug, Clone)]
pub struct DualModule {
    pub module: LeftModule,
    pub functionals: Vec<Matrix>,
}

impl DualModule {
    /// Applies the functional with the given dual coordinates to a module
    /// vector, yielding an algebra element.
    pub fn eval(&self, f_coords: &[Scalar], x: &[Scalar]) -> Result<Vec<Scalar>> {
        let field = self.module.algebra().field();
        let d = self.functionals.first().map_or(0, |m| m.rows());
        let mut out = vec![field.zero(); d];
        for (c, func) in f_coords.iter().zip(&self.functionals) {
            if !c.is_zero() {
                let fx = func.mul_vec(x)?;
                for (o, v) in out.iter_mut().zip(fx) {
                    *o = o.add(&c.mul(&v));
                }
            }
        }
        Ok(out)
    }
}

pub fn dual_module(m: &LeftModule) -> Result<DualModule> {
    let algebra = m.algebra();
    let a_op = Arc::new(opposite(algebra));
    let reg = LeftModule::regular(algebra);
    let hom = hom_basis(m, &reg)?;
    let t = hom.dim();
    let field = algebra.field();
    // right action (f·a)(x) = f(x)·a is R_a ∘ f; encode over opposite(A)
    let mut images = Vec::with_capacity(algebra.dim() * t);
    for k in 0..algebra.dim() {
        let rk = algebra.right_regular(&algebra.basis_vec(k))?;
        for f in &hom.basis {
            images.push(rk.mul(f)?);
        }
    }
    let coords = hom.coords_of_many(&images)?;
    let mut actions = Vec::with_capacity(algebra.dim());
    for k in 0..algebra.dim() {
        let mut act = Matrix::zeros(field, t, t);
        for u in 0..t {
            for (w, c) in coords[k * t + u].iter().enumerate() {
                act.set(w, u, c.clone());
            }
        }
        actions.push(act);
    }
    Ok(DualModule {
        module: LeftModule::new(a_op, actions)?,
        functionals: hom.basis,
    })
}

// ---------------------------------------------------------------------------
// tensor products over the algebra

/// X ⊗_A Y for a right module X (encoded over opposite(A)) and left module
/// Y. Raw coordinates index pairs (u, v) as u·dim(Y) + v; `pi` projects raw
/// coordinates onto the quotient and `iota` is a section of it.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    pub x_dim: usize,
    pub y_dim: usize,
    pub dim: usize,
    pub pi: Matrix,
    pub iota: Matrix,
}

impl TensorSpace {
    pub fn raw_dim(&self) -> usize {
        self.x_dim * self.y_dim
    }

    /// Raw coordinates of a pure tensor x ⊗ y.
    pub fn pure_raw(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let field = self.pi.field();
        let mut out = vec![field.zero(); self.raw_dim()];
        for (u, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (v, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    out[u * self.y_dim + v] = a.mul(b);
                }
            }
        }
        out
    }

    pub fn project(&self, raw: &[Scalar]) -> Result<Vec<Scalar>> {
        self.pi.mul_vec(raw)
    }

    pub fn lift(&self, t: &[Scalar]) -> Result<Vec<Scalar>> {
        self.iota.mul_vec(t)
    }

    /// Transports an operator acting on the X factor to the quotient.
    pub fn transport_left(&self, op: &Matrix) -> Result<Matrix> {
        let field = self.pi.field();
        let big = op.kronecker(&Matrix::identity(field, self.y_dim))?;
        self.pi.mul(&big)?.mul(&self.iota)
    }

    /// Transports an operator acting on the Y factor to the quotient.
    pub fn transport_right(&self, op: &Matrix) -> Result<Matrix> {
        let field = self.pi.field();
        let big = Matrix::identity(field, self.x_dim).kronecker(op)?;
        self.pi.mul(&big)?.mul(&self.iota)
    }
}

/// Builds X ⊗_A Y from the relations (x·a) ⊗ y − x ⊗ (a·y); generators of A
/// span the same relation subspace as the full basis.
pub fn tensor_over_algebra(x: &LeftModule, y: &LeftModule) -> Result<TensorSpace> {
    let a = y.algebra();
    if !crate::algebra::is_opposite_of(x.algebra(), a) {
        return Err(Error::AlgebraMismatch);
    }
    let field = a.field();
    let (xd, yd) = (x.dim(), y.dim());
    let raw = xd * yd;
    let mut rows = Vec::new();
    for g in a.generating_set() {
        let sigma = x.action_of(g)?; // x ↦ x·g
        let rho = y.action_of(g)?; // y ↦ g·y
        for u in 0..xd {
            for v in 0..yd {
                let mut row = vec![field.zero(); raw];
                for w in 0..xd {
                    let s = sigma.at(w, u);
                    if !s.is_zero() {
                        row[w * yd + v] = row[w * yd + v].add(s);
                    }
                }
                for w in 0..yd {
                    let r = rho.at(w, v);
                    if !r.is_zero() {
                        row[u * yd + w] = row[u * yd + w].sub(r);
                    }
                }
                if !vec_is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let relations = if rows.is_empty() {
        Matrix::zeros(field, 0, raw)
    } else {
        Matrix::from_rows(field, rows)?
    };
    let (rref, pivots) = relations.rref();
    let mut is_pivot = vec![false; raw];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..raw).filter(|c| !is_pivot[*c]).collect();
    let t = free.len();
    let mut pi = Matrix::zeros(field, t, raw);
    for (ti, &f) in free.iter().enumerate() {
        pi.set(ti, f, field.one());
    }
    for (ri, &p) in pivots.iter().enumerate() {
        for (ti, &f) in free.iter().enumerate() {
            pi.set(ti, p, rref.at(ri, f).neg());
        }
    }
    let mut iota = Matrix::zeros(field, raw, t);
    for (ti, &f) in free.iter().enumerate() {
        iota.set(f, ti, field.one());
    }
    Ok(TensorSpace {
        x_dim: xd,
        y_dim: yd,
        dim: t,
        pi,
        iota,
    })
}

// ---------------------------------------------------------------------------
// evaluation and Ψ

/// The map M* ⊗_A M → A, f ⊗ m ↦ f(m), as a matrix on the tensor space.
pub fn ev_map(m: &LeftModule, dual: &DualModule, space: &TensorSpace) -> Result<Matrix> {
    let field = m.algebra().field();
    let d = m.algebra().dim();
    let mut raw_map = Matrix::zeros(field, d, space.raw_dim());
    for (u, f) in dual.functionals.iter().enumerate() {
        for v in 0..m.dim() {
            let fx = f.col(v);
            for (r, val) in fx.into_iter().enumerate() {
                if !val.is_zero() {
                    raw_map.set(r, u * space.y_dim + v, val);
                }
            }
        }
    }
    raw_map.mul(&space.iota)
}

/// Ψ_{P,M}: P* ⊗_A M → Hom_A(P, M), f ⊗ m ↦ (x ↦ f(x)·m), as a matrix from
/// the tensor space onto the hom basis coordinates.
pub fn psi_map(
    p: &LeftModule,
    m: &LeftModule,
    p_dual: &DualModule,
    space: &TensorSpace,
    hom: &HomSpace,
) -> Result<Matrix> {
    let field = m.algebra().field();
    let mut endos = Vec::with_capacity(space.raw_dim());
    for f in &p_dual.functionals {
        for v in 0..m.dim() {
            // endomorphism x_j ↦ f(x_j)·m_v
            let mut endo = Matrix::zeros(field, m.dim(), p.dim());
            for j in 0..p.dim() {
                let a = f.col(j);
                let img = m.act(&a, &unit_vec(field, m.dim(), v))?;
                for (r, val) in img.into_iter().enumerate() {
                    endo.set(r, j, val);
                }
            }
            endos.push(endo);
        }
    }
    let all_coords = hom.coords_of_many(&endos)?;
    let mut raw_map = Matrix::zeros(field, hom.dim(), space.raw_dim());
    for (idx, coords) in all_coords.into_iter().enumerate() {
        for (w, c) in coords.into_iter().enumerate() {
            raw_map.set(w, idx, c);
        }
    }
    raw_map.mul(&space.iota)
}

/// Everything Ψ-related for a pair (P, M), built once.
pub struct PsiData {
    pub p_dual: DualModule,
    pub space: TensorSpace,
    pub hom: HomSpace,
    pub psi: Matrix,
}

pub fn psi_data(p: &LeftModule, m: &LeftModule) -> Result<PsiData> {
    let p_dual = dual_module(p)?;
    let space = tensor_over_algebra(&p_dual.module, m)?;
    let hom = hom_basis(p, m)?;
    let psi = psi_map(p, m, &p_dual, &space, &hom)?;
    Ok(PsiData {
        p_dual,
        space,
        hom,
        psi,
    })
}

impl PsiData {
    /// The inverse of Ψ; fails with `SingularPsi` exactly when the dual-basis
    /// machinery is unavailable (non-projective source).
    pub fn psi_inverse(&self) -> Result<Matrix> {
        if self.psi.rows() != self.psi.cols() {
            return Err(Error::SingularPsi);
        }
        self.psi.inverse().map_err(|_| Error::SingularPsi)
    }
}

/// Dual basis of a module P: pairs (fᵢ ∈ P*, pᵢ ∈ P) with x = Σ fᵢ(x)·pᵢ.
pub struct DualBasis {
    /// functionals as intertwiners P → A
    pub functionals: Vec<Matrix>,
    /// module vectors, one per functional
    pub elements: Vec<Vec<Scalar>>,
}

pub fn dual_basis(p: &LeftModule) -> Result<DualBasis> {
    if p.dim() == 0 {
        return Ok(DualBasis {
            functionals: Vec::new(),
            elements: Vec::new(),
        });
    }
    let data = psi_data(p, p)?;
    let field = p.algebra().field();
    let id_coords = data.hom.coords_of(&Matrix::identity(field, p.dim()))?;
    let preimage = match data.psi.solve(&id_coords)? {
        Some(x) => x,
        None => return Err(Error::SingularPsi),
    };
    let raw = data.space.lift(&preimage)?;
    // group the representative Σ w_(u,v) f_u ⊗ e_v by the right factor
    let mut functionals = Vec::new();
    let mut elements = Vec::new();
    for v in 0..p.dim() {
        let mut f = Matrix::zeros(field, p.algebra().dim(), p.dim());
        let mut nonzero = false;
        for (u, base) in data.p_dual.functionals.iter().enumerate() {
            let w = &raw[u * data.space.y_dim + v];
            if !w.is_zero() {
                f = f.add(&base.scale(w))?;
                nonzero = true;
            }
        }
        if nonzero {
            functionals.push(f);
            elements.push(unit_vec(field, p.dim(), v));
        }
    }
    Ok(DualBasis {
        functionals,
        elements,
    })
}

impl DualBasis {
    /// Checks x = Σ fᵢ(x)·pᵢ on every standard basis vector.
    pub fn verify(&self, p: &LeftModule) -> Result<bool> {
        let field = p.algebra().field();
        for j in 0..p.dim() {
            let x = unit_vec(field, p.dim(), j);
            let mut acc = vec![field.zero(); p.dim()];
            for (f, elem) in self.functionals.iter().zip(&self.elements) {
                let a = f.mul_vec(&x)?;
                let contrib = p.act(&a, elem)?;
                acc = crate::linalg::vec_add(&acc, &contrib);
            }
            if acc != x {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exhaustively verifies on basis pairs that Ψ turns the algebraic
/// composition map ξ(f⊗n, g⊗m) = f ⊗ g(n)·m into composition of morphisms.
pub fn psi_composition_commutes(m: &LeftModule, n: &LeftModule) -> Result<bool> {
    let field = m.algebra().field();
    let data_mn = psi_data(m, n)?;
    let data_nm = psi_data(n, m)?;
    let data_mm = psi_data(m, m)?;
    for s in 0..data_mn.space.dim {
        let s_raw = data_mn.space.lift(&unit_vec(field, data_mn.space.dim, s))?;
        for t in 0..data_nm.space.dim {
            let t_raw = data_nm.space.lift(&unit_vec(field, data_nm.space.dim, t))?;
            // ξ on representatives: Σ f_u ⊗ (g_w(n_v)·m_x)
            let mut xi_raw = vec![field.zero(); data_mm.space.raw_dim()];
            for u in 0..data_mn.space.x_dim {
                for v in 0..data_mn.space.y_dim {
                    let c1 = &s_raw[u * data_mn.space.y_dim + v];
                    if c1.is_zero() {
                        continue;
                    }
                    for w in 0..data_nm.space.x_dim {
                        for x in 0..data_nm.space.y_dim {
                            let c2 = &t_raw[w * data_nm.space.y_dim + x];
                            if c2.is_zero() {
                                continue;
                            }
                            // g_w(n_v) ∈ A acting on m_x
                            let a = data_nm.p_dual.functionals[w].col(v);
                            let mv = m.act(&a, &unit_vec(field, m.dim(), x))?;
                            let coeff = c1.mul(c2);
                            for (mm_idx, val) in mv.into_iter().enumerate() {
                                if !val.is_zero() {
                                    let idx = u * data_mm.space.y_dim + mm_idx;
                                    xi_raw[idx] = xi_raw[idx].add(&coeff.mul(&val));
                                }
                            }
                        }
                    }
                }
            }
            let xi_t = data_mm.space.project(&xi_raw)?;
            let lhs_coords = data_mm.psi.mul_vec(&xi_t)?;
            let lhs = data_mm.hom.from_coords(&lhs_coords)?;
            // composition route
            let f_coords = data_mn.psi.mul_vec(&data_mn.space.project(&s_raw)?)?;
            let f = data_mn.hom.from_coords(&f_coords)?;
            let g_coords = data_nm.psi.mul_vec(&data_nm.space.project(&t_raw)?)?;
            let g = data_nm.hom.from_coords(&g_coords)?;
            if lhs != g.mul(&f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// simple modules and decomposition

const SPLIT_SEARCH_LIMIT: usize = 400;

/// The r pairwise non-isomorphic simple modules, aligned with the block
/// order of the Wedderburn data.
pub fn simple_modules(a: &Arc<Algebra>, wd: &WedderburnData) -> Result<Vec<LeftModule>> {
    let mut simples = Vec::with_capacity(wd.block_count());
    for (e, &n) in wd.idempotents.iter().zip(&wd.block_dims) {
        simples.push(block_simple_module(a, e, n)?);
    }
    // Schur check across blocks
    for (i, vi) in simples.iter().enumerate() {
        for (j, vj) in simples.iter().enumerate() {
            let h = hom_basis(vi, vj)?;
            let expected = if i == j { 1 } else { 0 };
            if h.dim() != expected {
                return Err(Error::NotSplit(format!(
                    "hom dimension between simples {i},{j} is {} (expected {expected})",
                    h.dim()
                )));
            }
        }
    }
    Ok(simples)
}

fn block_simple_module(a: &Arc<Algebra>, e: &[Scalar], n: usize) -> Result<LeftModule> {
    let field = a.field();
    if n == 1 {
        // 1-dimensional block: e_j acts by the scalar χ(e_j) with e_j·e = χ(e_j)e
        let e_mat = Matrix::from_cols(field, vec![e.to_vec()])?;
        let mut actions = Vec::with_capacity(a.dim());
        for j in 0..a.dim() {
            let prod = a.multiply(&a.basis_vec(j), e)?;
            let chi = e_mat
                .solve(&prod)?
                .ok_or_else(|| Error::NotSplit("1-dimensional block is not invariant".into()))?;
            actions.push(Matrix::from_entries(field, 1, 1, chi)?);
        }
        return LeftModule::new(Arc::clone(a), actions);
    }
    let block = a.left_regular(e)?.column_space_basis();
    let budget = SPLIT_SEARCH_LIMIT;
    let mut spent = 0usize;
    let mut pool: Vec<Matrix> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB10C);
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    for c in 0..block.cols() {
        candidates.push(block.col(c));
    }
    for i in 0..block.cols() {
        for j in 0..block.cols() {
            candidates.push(a.multiply(&block.col(i), &block.col(j))?);
            if i < j {
                candidates.push(crate::linalg::vec_add(&block.col(i), &block.col(j)));
                candidates.push(crate::linalg::vec_sub(&block.col(i), &block.col(j)));
            }
        }
    }
    loop {
        for x in &candidates {
            if vec_is_zero(x) {
                continue;
            }
            spent += 1;
            if spent > budget {
                return Err(Error::SplitSearchExhausted);
            }
            if let Some(module) = try_split_candidate(a, e, n, &block, x, &mut pool)? {
                return Ok(module);
            }
        }
        // pairwise intersections of the proper ideals found so far
        let snapshot = pool.clone();
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                spent += 1;
                if spent > budget {
                    return Err(Error::SplitSearchExhausted);
                }
                let meet = column_space_intersection(&snapshot[i], &snapshot[j])?;
                if meet.cols() == n {
                    return module_from_ideal(a, &meet);
                }
                if meet.cols() > n
                    && meet.cols() < block.cols()
                    && snapshot.iter().all(|s| s.cols() != meet.cols())
                {
                    pool.push(meet);
                }
            }
        }
        // fresh random candidates
        candidates.clear();
        for _ in 0..8 {
            let coeffs: Vec<Scalar> = (0..block.cols())
                .map(|_| field.from_i64(rng.gen_range(-2..=2)))
                .collect();
            candidates.push(block.mul_vec(&coeffs)?);
        }
        if spent > budget {
            return Err(Error::SplitSearchExhausted);
        }
    }
}

fn try_split_candidate(
    a: &Arc<Algebra>,
    e: &[Scalar],
    n: usize,
    block: &Matrix,
    x: &[Scalar],
    pool: &mut Vec<Matrix>,
) -> Result<Option<LeftModule>> {
    let field = a.field();
    // minimal polynomial of x inside the block (unit element e)
    let bound = n + 2;
    let mut krylov: Vec<Vec<Scalar>> = vec![e.to_vec()];
    for _ in 0..bound {
        let prev = krylov.last().unwrap();
        krylov.push(a.multiply(prev, x)?);
    }
    let mu = min_poly_of_krylov(field, &krylov);
    let (roots, _) = mu.roots_in_field();
    for theta in roots {
        let shifted: Vec<Scalar> = (0..a.dim()).map(|k| x[k].sub(&theta.mul(&e[k]))).collect();
        if vec_is_zero(&shifted) {
            continue;
        }
        let mut cols = Vec::with_capacity(a.dim());
        for j in 0..a.dim() {
            cols.push(a.multiply(&a.basis_vec(j), &shifted)?);
        }
        let ideal = Matrix::from_cols(field, cols)?.column_space_basis();
        let k = ideal.cols();
        if k == n {
            return Ok(Some(module_from_ideal(a, &ideal)?));
        }
        if k > 0 && k < block.cols() && pool.iter().all(|p| p.cols() != k || p != &ideal) {
            pool.push(ideal);
        }
    }
    Ok(None)
}

/// Left module structure on a left ideal given by a column basis.
fn module_from_ideal(a: &Arc<Algebra>, basis: &Matrix) -> Result<LeftModule> {
    let mut actions = Vec::with_capacity(a.dim());
    for j in 0..a.dim() {
        let l = a.left_regular(&a.basis_vec(j))?;
        let image = l.mul(basis)?;
        let action = basis
            .solve_matrix(&image)?
            .ok_or_else(|| Error::NotSplit("ideal is not invariant".into()))?;
        actions.push(action);
    }
    let module = LeftModule::new(Arc::clone(a), actions)?;
    if !module.validate().is_empty() {
        return Err(Error::NotSplit(
            "ideal does not carry a module structure".into(),
        ));
    }
    Ok(module)
}

/// Multiplicity of each simple inside M, as dim Hom(Vᵢ, M).
pub fn multiplicities(m: &LeftModule, simples: &[LeftModule]) -> Result<Vec<usize>> {
    simples
        .iter()
        .map(|v| hom_basis(v, m).map(|h| h.dim()))
        .collect()
}

/// An explicit isomorphism ⊕ Vᵢ^{mᵢ} → M.
pub struct Decomposition {
    pub multiplicities: Vec<usize>,
    pub sum: LeftModule,
    /// change of basis C with ρ_M(a)·C = C·ρ_⊕(a)
    pub iso: Matrix,
}

pub fn decompose(m: &LeftModule, simples: &[LeftModule]) -> Result<Decomposition> {
    let field = m.algebra().field();
    let mut mults = Vec::new();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    let mut parts: Vec<&LeftModule> = Vec::new();
    for v in simples {
        let h = hom_basis(v, m)?;
        mults.push(h.dim());
        for f in &h.basis {
            for j in 0..v.dim() {
                cols.push(f.col(j));
            }
            parts.push(v);
        }
    }
    let total: usize = cols.len();
    if total != m.dim() {
        return Err(Error::NotSemisimple);
    }
    let sum = if parts.is_empty() {
        LeftModule::zero(m.algebra())
    } else {
        direct_sum_modules(&parts)?.module
    };
    let iso = if total == 0 {
        Matrix::zeros(field, 0, 0)
    } else {
        Matrix::from_cols(field, cols)?
    };
    if iso.rank() != m.dim() {
        return Err(Error::NotSemisimple);
    }
    for i in 0..m.algebra().dim() {
        let lhs = m.action(i).mul(&iso)?;
        let rhs = iso.mul(sum.action(i))?;
        if lhs != rhs {
            return Err(Error::NotIntertwiner);
        }
    }
    Ok(Decomposition {
        multiplicities: mults,
        sum,
        iso,
    })
}

/// The endomorphism algebra of P with opposite composition: the product
/// b·b′ corresponds to the matrix product b̂′ b̂ (apply b̂ first). This is the
/// multiplication under which Hom_A(P, −) is a left module over End_A(P).
pub fn endomorphism_algebra(p: &LeftModule) -> Result<(Arc<Algebra>, HomSpace)> {
    let field = p.algebra().field();
    let hom = hom_basis(p, p)?;
    let b = hom.dim();
    let mut products = Vec::with_capacity(b * b);
    for u in 0..b {
        for v in 0..b {
            products.push(hom.basis[v].mul(&hom.basis[u])?);
        }
    }
    let all_coords = hom.coords_of_many(&products)?;
    let mut constants = vec![field.zero(); b * b * b];
    for (idx, coords) in all_coords.into_iter().enumerate() {
        for (k, c) in coords.into_iter().enumerate() {
            constants[idx * b + k] = c;
        }
    }
    let unit = hom.coords_of(&Matrix::identity(field, p.dim()))?;
    let algebra = Arc::new(Algebra::new(field, b, constants, unit)?);
    Ok((algebra, hom))
}
