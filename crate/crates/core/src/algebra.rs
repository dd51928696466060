//! Finite-dimensional associative unital algebras presented by structure
//! constants, and their structural invariants: center, commutator subspace,
//! semisimplicity, central primitive idempotents and block dimensions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{unit_vec, vec_is_zero, vec_sub, Matrix};
use crate::poly::min_poly_of_matrix;

/// e_i · e_j = Σ_k c\[i]\[j]\[k] e_k, stored flat as ((i*d)+j)*d+k.
#[derive(Debug)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    constants: Vec<Scalar>,
    unit: Vec<Scalar>,
    generators: std::sync::OnceLock<Vec<Vec<Scalar>>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Algebra {
        Algebra {
            field: self.field,
            dim: self.dim,
            constants: self.constants.clone(),
            unit: self.unit.clone(),
            generators: std::sync::OnceLock::new(),
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.constants == other.constants
            && self.unit == other.unit
    }
}

impl Eq for Algebra {}

/// A defect found by `validate`; an empty defect list certifies the axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraDefect {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

impl std::fmt::Display for AlgebraDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraDefect::Associativity { i, j, k } => {
                write!(f, "(e{i}·e{j})·e{k} != e{i}·(e{j}·e{k})")
            }
            AlgebraDefect::LeftUnit { i } => write!(f, "u·e{i} != e{i}"),
            AlgebraDefect::RightUnit { i } => write!(f, "e{i}·u != e{i}"),
        }
    }
}

/// Central primitive idempotents with block dimensions; blocks are ordered
/// by (matrix size, idempotent coordinates) so the output is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedderburnData {
    pub idempotents: Vec<Vec<Scalar>>,
    pub block_dims: Vec<usize>,
}

impl WedderburnData {
    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }
}

const WEDDERBURN_RETRIES: usize = 40;

impl Algebra {
    pub fn new(
        field: FieldSpec,
        dim: usize,
        constants: Vec<Scalar>,
        unit: Vec<Scalar>,
    ) -> Result<Algebra> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                context: "structure constant count",
                expected: dim * dim * dim,
                got: constants.len(),
            });
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "unit vector length",
                expected: dim,
                got: unit.len(),
            });
        }
        for s in constants.iter().chain(unit.iter()) {
            if s.field() != field {
                return Err(Error::FieldMismatch(field, s.field()));
            }
        }
        Ok(Algebra {
            field,
            dim,
            constants,
            unit,
            generators: std::sync::OnceLock::new(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Product of two coordinate vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "algebra product operand length",
                expected: self.dim,
                got: if x.len() != self.dim {
                    x.len()
                } else {
                    y.len()
                },
            });
        }
        let mut out = vec![self.field.zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].mul(&y[j]);
                for k in 0..self.dim {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        out[k] = out[k].add(&xy.mul(c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of left multiplication by `x` on the algebra itself.
    pub fn left_regular(&self, x: &[Scalar]) -> Result<Matrix> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "left regular operand length",
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        let v = m.at(k, j).add(&x[i].mul(c));
                        m.set(k, j, v);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Matrix of right multiplication by `x` (v ↦ v·x).
    pub fn right_regular(&self, x: &[Scalar]) -> Result<Matrix> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "right regular operand length",
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            if x[j].is_zero() {
                continue;
            }
            for i in 0..self.dim {
                for k in 0..self.dim {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        let v = m.at(k, i).add(&x[j].mul(c));
                        m.set(k, i, v);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.field, self.dim, i)
    }

    /// Columns spanning the unital subalgebra generated by the given
    /// elements (closure under right multiplication by the generators).
    fn span_closure(&self, gens: &[Vec<Scalar>]) -> Matrix {
        let mut cols: Vec<Vec<Scalar>> = vec![self.unit.clone()];
        cols.extend(gens.iter().cloned());
        let mut basis = Matrix::from_cols(self.field, cols)
            .expect("generator vectors share the field")
            .column_space_basis();
        loop {
            let mut extended: Vec<Vec<Scalar>> = (0..basis.cols()).map(|c| basis.col(c)).collect();
            for c in 0..basis.cols() {
                for g in gens {
                    extended.push(self.multiply(&basis.col(c), g).unwrap());
                }
            }
            let bigger = Matrix::from_cols(self.field, extended)
                .unwrap()
                .column_space_basis();
            if bigger.cols() == basis.cols() {
                return basis;
            }
            basis = bigger;
        }
    }

    /// A small set of elements generating the algebra together with the
    /// unit. Intertwining, centrality and tensor-relation conditions hold on
    /// the whole algebra once they hold on these elements. Greedy over the
    /// basis, cached.
    pub fn generating_set(&self) -> &[Vec<Scalar>] {
        self.generators.get_or_init(|| {
            let mut gens: Vec<Vec<Scalar>> = Vec::new();
            let mut closure = self.span_closure(&gens);
            for i in 0..self.dim {
                if closure.cols() == self.dim {
                    break;
                }
                let e = self.basis_vec(i);
                if closure.solve(&e).unwrap().is_some() {
                    continue;
                }
                gens.push(e);
                closure = self.span_closure(&gens);
            }
            gens
        })
    }

    /// Checks associativity on all basis triples and the two unit laws,
    /// reporting every violation.
    ///
    /// The set S = { a : L_a L_x = L_{ax} for all x } is a subspace closed
    /// under products, so when it contains a generating set it is the whole
    /// algebra. A clean run of that certificate proves associativity; only
    /// on failure is the full triple scan performed to list every defect.
    pub fn validate(&self) -> Vec<AlgebraDefect> {
        let mut defects = Vec::new();
        let mut certified = true;
        for g in self.generating_set() {
            let lg = self.left_regular(g).unwrap();
            for j in 0..self.dim {
                let lj = self.left_regular(&self.basis_vec(j)).unwrap();
                let gj = self.multiply(g, &self.basis_vec(j)).unwrap();
                if lg.mul(&lj).unwrap() != self.left_regular(&gj).unwrap() {
                    certified = false;
                    break;
                }
            }
            if !certified {
                break;
            }
        }
        if !certified {
            // full scan: (eᵢeⱼ)eₖ = eᵢ(eⱼeₖ) as the column-k comparison of
            // L_{eᵢ}L_{eⱼ} against L_{eᵢeⱼ}
            let left_mults: Vec<Matrix> = (0..self.dim)
                .map(|i| self.left_regular(&self.basis_vec(i)).unwrap())
                .collect();
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let composed = left_mults[i].mul(&left_mults[j]).unwrap();
                    let mut of_product = Matrix::zeros(self.field, self.dim, self.dim);
                    for k in 0..self.dim {
                        let c = self.constant(i, j, k);
                        if !c.is_zero() {
                            of_product = of_product.add(&left_mults[k].scale(c)).unwrap();
                        }
                    }
                    if composed != of_product {
                        for k in 0..self.dim {
                            if (0..self.dim).any(|r| composed.at(r, k) != of_product.at(r, k)) {
                                defects.push(AlgebraDefect::Associativity { i, j, k });
                            }
                        }
                    }
                }
            }
        }
        for i in 0..self.dim {
            let e = self.basis_vec(i);
            if self.multiply(&self.unit, &e).unwrap() != e {
                defects.push(AlgebraDefect::LeftUnit { i });
            }
            if self.multiply(&e, &self.unit).unwrap() != e {
                defects.push(AlgebraDefect::RightUnit { i });
            }
        }
        defects
    }

    /// Columns span the center { z : zx = xz for all x }; commuting with a
    /// generating set is enough.
    pub fn center_basis(&self) -> Matrix {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for g in self.generating_set() {
            let lg = self.left_regular(g).unwrap();
            let rg = self.right_regular(g).unwrap();
            let diff = lg.sub(&rg).unwrap();
            for r in 0..self.dim {
                rows.push(diff.row(r));
            }
        }
        if rows.is_empty() {
            return Matrix::identity(self.field, self.dim);
        }
        Matrix::from_rows(self.field, rows)
            .expect("commutation system is well formed")
            .kernel_basis()
    }

    pub fn is_commutative(&self) -> bool {
        self.center_basis().cols() == self.dim
    }

    /// Basis of \[A,A] (columns) and the projection onto A/\[A,A], whose kernel
    /// is exactly the commutator subspace.
    pub fn commutator_subspace(&self) -> (Matrix, Matrix) {
        let mut cols = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let ei = self.basis_vec(i);
                let ej = self.basis_vec(j);
                let comm = vec_sub(
                    &self.multiply(&ei, &ej).unwrap(),
                    &self.multiply(&ej, &ei).unwrap(),
                );
                if !vec_is_zero(&comm) {
                    cols.push(comm);
                }
            }
        }
        let span = if cols.is_empty() {
            Matrix::zeros(self.field, self.dim, 0)
        } else {
            Matrix::from_cols(self.field, cols).unwrap()
        };
        let basis = span.column_space_basis();
        let projection = basis.transpose().kernel_basis().transpose();
        (basis, projection)
    }

    fn regular_trace_vector(&self) -> Vec<Scalar> {
        (0..self.dim)
            .map(|k| {
                self.left_regular(&self.basis_vec(k))
                    .unwrap()
                    .trace()
                    .unwrap()
            })
            .collect()
    }

    /// Gram matrix of the regular trace form (x,y) ↦ tr(L_x L_y).
    pub fn trace_form_gram(&self) -> Matrix {
        let t = self.regular_trace_vector();
        Matrix::from_fn(self.field, self.dim, self.dim, |i, j| {
            let mut s = self.field.zero();
            for k in 0..self.dim {
                let c = self.constant(i, j, k);
                if !c.is_zero() {
                    s = s.add(&c.mul(&t[k]));
                }
            }
            s
        })
    }

    /// Non-degeneracy of the regular trace form. Valid as a semisimplicity
    /// criterion only in characteristic 0; in characteristic p the form can
    /// vanish on a semisimple algebra, so the question is refused there.
    pub fn is_semisimple(&self) -> Result<bool> {
        if self.field.characteristic() != 0 {
            return Err(Error::UnsupportedCharacteristic);
        }
        Ok(self.trace_form_gram().rank() == self.dim)
    }

    pub fn is_central(&self, x: &[Scalar]) -> Result<bool> {
        Ok(self.left_regular(x)? == self.right_regular(x)?)
    }

    pub fn is_invertible_element(&self, x: &[Scalar]) -> Result<bool> {
        Ok(self.left_regular(x)?.rank() == self.dim)
    }

    pub fn element_inverse(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        match self.left_regular(x)?.solve(&self.unit)? {
            Some(inv) => Ok(inv),
            None => Err(Error::NotInvertible),
        }
    }

    /// Central primitive idempotents and block sizes.
    ///
    /// A random central element z is sampled from the seeded stream; when its
    /// minimal polynomial on the center is squarefree of full degree with all
    /// roots in the ground field, Lagrange interpolation at z yields the
    /// idempotents, and everything is verified before returning. Failures
    /// resample (bounded), an irreducible factor of degree > 1 means the
    /// algebra does not split over the ground field.
    pub fn wedderburn(&self, seed: u64) -> Result<WedderburnData> {
        if self.field.characteristic() == 0 && !self.is_semisimple()? {
            return Err(Error::NotSemisimple);
        }
        let center = self.center_basis();
        let r = center.cols();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut saw_squarefree_failure_only = true;
        for attempt in 0..WEDDERBURN_RETRIES {
            let spread = 3 + (attempt as i64) / 4;
            let coeffs: Vec<Scalar> = (0..r)
                .map(|_| self.field.from_i64(rng.gen_range(-spread..=spread)))
                .collect();
            let z = center.mul_vec(&coeffs).unwrap();
            // matrix of multiplication by z restricted to the center
            let images: Vec<Vec<Scalar>> = (0..r)
                .map(|j| self.multiply(&z, &center.col(j)).unwrap())
                .collect();
            let image_mat = Matrix::from_cols(self.field, images).unwrap();
            let mz = match center.solve_matrix(&image_mat).unwrap() {
                Some(m) => m,
                None => continue,
            };
            let mu = min_poly_of_matrix(&mz);
            if mu.degree() != Some(r) || !mu.is_squarefree() {
                continue;
            }
            let (roots, residual) = mu.roots_in_field();
            if residual > 0 {
                return Err(Error::NotSplit(format!(
                    "a central element has a minimal polynomial with an irreducible factor of degree {residual}"
                )));
            }
            saw_squarefree_failure_only = false;
            match self.idempotents_from_split_element(&z, &roots) {
                Ok(data) => return Ok(data),
                Err(e @ Error::NotSplit(_)) => return Err(e),
                Err(_) => continue,
            }
        }
        if self.field.characteristic() == 0 {
            Err(Error::SplitSearchExhausted)
        } else if saw_squarefree_failure_only {
            // In characteristic p this is where a non-semisimple algebra
            // lands: its center contains nilpotents, so no central element
            // has a squarefree minimal polynomial of full degree.
            Err(Error::NotSemisimple)
        } else {
            Err(Error::SplitSearchExhausted)
        }
    }

    pub fn wedderburn_default(&self) -> Result<WedderburnData> {
        self.wedderburn(0x5EED)
    }

    fn idempotents_from_split_element(
        &self,
        z: &[Scalar],
        roots: &[Scalar],
    ) -> Result<WedderburnData> {
        let r = roots.len();
        let mut idempotents = Vec::with_capacity(r);
        for i in 0..r {
            // Lagrange interpolant l_i evaluated at z in the algebra
            let mut e = self.unit.clone();
            for j in 0..r {
                if j == i {
                    continue;
                }
                let denom = roots[i].sub(&roots[j]);
                let denom_inv = denom.inv().map_err(|_| Error::SplitSearchExhausted)?;
                // e ← e · (z - θ_j) / (θ_i - θ_j)
                let shifted: Vec<Scalar> = (0..self.dim)
                    .map(|k| z[k].sub(&roots[j].mul(&self.unit[k])))
                    .collect();
                e = self.multiply(&e, &shifted)?;
                e = e.iter().map(|c| c.mul(&denom_inv)).collect();
            }
            idempotents.push(e);
        }
        // verify the idempotent axioms
        let mut sum = vec![self.field.zero(); self.dim];
        for (i, e) in idempotents.iter().enumerate() {
            if self.multiply(e, e)? != *e || vec_is_zero(e) {
                return Err(Error::SplitSearchExhausted);
            }
            for (j, f) in idempotents.iter().enumerate() {
                if i != j && !vec_is_zero(&self.multiply(e, f)?) {
                    return Err(Error::SplitSearchExhausted);
                }
            }
            sum = crate::linalg::vec_add(&sum, e);
        }
        if sum != self.unit {
            return Err(Error::SplitSearchExhausted);
        }
        // block dimensions must be perfect squares
        let mut blocks: Vec<(usize, Vec<Scalar>)> = Vec::with_capacity(r);
        for e in &idempotents {
            let b = self.left_regular(e)?.rank();
            let n = (1..=b).find(|n| n * n == b).ok_or_else(|| {
                Error::NotSplit(format!("block of dimension {b} is not a square"))
            })?;
            blocks.push((n, e.clone()));
        }
        if blocks.iter().map(|(n, _)| n * n).sum::<usize>() != self.dim {
            return Err(Error::SplitSearchExhausted);
        }
        if self.field.characteristic() != 0 {
            // Over F_p, simplicity of each block together with the split
            // center certifies a matrix algebra (finite division rings are
            // commutative), which replaces the characteristic-0 trace test.
            for (_, e) in &blocks {
                if !self.block_is_simple(e)? {
                    return Err(Error::NotSemisimple);
                }
            }
        }
        blocks.sort_by(|(na, ea), (nb, eb)| {
            na.cmp(nb).then_with(|| {
                for (x, y) in ea.iter().zip(eb.iter()) {
                    let ord = x.sort_key_cmp(y);
                    if ord != std::cmp::Ordering::Equal {
                        return ord;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        Ok(WedderburnData {
            block_dims: blocks.iter().map(|(n, _)| *n).collect(),
            idempotents: blocks.into_iter().map(|(_, e)| e).collect(),
        })
    }

    /// Whether the two-sided ideal generated by every nonzero element of the
    /// block e·A equals the whole block.
    fn block_is_simple(&self, e: &[Scalar]) -> Result<bool> {
        let block = self.left_regular(e)?.column_space_basis();
        let b = block.cols();
        for c in 0..b {
            let x = block.col(c);
            // span of e_i · x · e_j
            let mut gens = Vec::new();
            for i in 0..self.dim {
                let ix = self.multiply(&self.basis_vec(i), &x)?;
                for j in 0..self.dim {
                    gens.push(self.multiply(&ix, &self.basis_vec(j))?);
                }
            }
            let ideal = Matrix::from_cols(self.field, gens)?;
            if ideal.rank() != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of a central element along the block idempotents.
    pub fn block_coordinates(&self, wd: &WedderburnData, z: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.is_central(z)? {
            return Err(Error::NotCentral);
        }
        let basis = Matrix::from_cols(self.field, wd.idempotents.clone())?;
        match basis.solve(z)? {
            Some(coords) => Ok(coords),
            None => Err(Error::NotCentral),
        }
    }
}

// ---------------------------------------------------------------------------
// constructors

/// The full matrix algebra M_n, basis E_{ij} indexed by i*n + j.
pub fn matrix_algebra(field: FieldSpec, n: usize) -> Algebra {
    assert!(n >= 1);
    let d = n * n;
    let mut constants = vec![field.zero(); d * d * d];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // E_{ij} E_{kl} = δ_{jk} E_{il}
                    if j == k {
                        let a = i * n + j;
                        let b = k * n + l;
                        let target = i * n + l;
                        constants[(a * d + b) * d + target] = field.one();
                    }
                }
            }
        }
    }
    let mut unit = vec![field.zero(); d];
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    Algebra::new(field, d, constants, unit).expect("matrix algebra is well formed")
}

pub fn product_algebra(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let d = a.dim + b.dim;
    let field = a.field;
    let mut constants = vec![field.zero(); d * d * d];
    for i in 0..a.dim {
        for j in 0..a.dim {
            for k in 0..a.dim {
                constants[(i * d + j) * d + k] = a.constant(i, j, k).clone();
            }
        }
    }
    for i in 0..b.dim {
        for j in 0..b.dim {
            for k in 0..b.dim {
                constants[((a.dim + i) * d + (a.dim + j)) * d + (a.dim + k)] =
                    b.constant(i, j, k).clone();
            }
        }
    }
    let mut unit = a.unit.clone();
    unit.extend(b.unit.iter().cloned());
    Algebra::new(field, d, constants, unit)
}

/// Tensor product over the ground field; basis pairs (i, α) ↦ i·dim(b) + α.
pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let field = a.field;
    let d = a.dim * b.dim;
    let mut constants = vec![field.zero(); d * d * d];
    for i in 0..a.dim {
        for al in 0..b.dim {
            for j in 0..a.dim {
                for be in 0..b.dim {
                    let x = i * b.dim + al;
                    let y = j * b.dim + be;
                    for k in 0..a.dim {
                        let ca = a.constant(i, j, k);
                        if ca.is_zero() {
                            continue;
                        }
                        for ga in 0..b.dim {
                            let cb = b.constant(al, be, ga);
                            if cb.is_zero() {
                                continue;
                            }
                            let t = k * b.dim + ga;
                            constants[(x * d + y) * d + t] =
                                constants[(x * d + y) * d + t].add(&ca.mul(cb));
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec![field.zero(); d];
    for i in 0..a.dim {
        for al in 0..b.dim {
            let v = a.unit[i].mul(&b.unit[al]);
            unit[i * b.dim + al] = v;
        }
    }
    Algebra::new(field, d, constants, unit)
}

/// Group algebra from a multiplication table t\[i]\[j] = index of gᵢgⱼ.
pub fn group_algebra(field: FieldSpec, table: &[Vec<usize>]) -> Result<Algebra> {
    let n = table.len();
    if n == 0 || table.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidGroupTable(
            "table must be square and nonempty".into(),
        ));
    }
    if table.iter().flatten().any(|&v| v >= n) {
        return Err(Error::InvalidGroupTable("entry out of range".into()));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(Error::InvalidGroupTable(format!(
                        "not associative at ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
        .ok_or_else(|| Error::InvalidGroupTable("no identity element".into()))?;
    for i in 0..n {
        if !(0..n).any(|j| table[i][j] == identity) {
            return Err(Error::InvalidGroupTable(format!(
                "element {i} has no inverse"
            )));
        }
    }
    let mut constants = vec![field.zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            constants[(i * n + j) * n + table[i][j]] = field.one();
        }
    }
    let mut unit = vec![field.zero(); n];
    unit[identity] = field.one();
    Algebra::new(field, n, constants, unit)
}

/// The cyclic group of order n as a multiplication table.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect()
}

/// Structural check that `x` has the reversed structure constants of `a`,
/// without materializing the opposite algebra.
pub fn is_opposite_of(x: &Algebra, a: &Algebra) -> bool {
    if x.field != a.field || x.dim != a.dim || x.unit != a.unit {
        return false;
    }
    let d = a.dim;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if x.constant(i, j, k) != a.constant(j, i, k) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn opposite(a: &Algebra) -> Algebra {
    let d = a.dim;
    let mut constants = vec![a.field.zero(); d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                constants[(i * d + j) * d + k] = a.constant(j, i, k).clone();
            }
        }
    }
    Algebra::new(a.field, d, constants, a.unit.clone()).expect("opposite algebra is well formed")
}

/// Conjugates the structure constants by an invertible matrix g: the new
/// basis vectors are the columns of g expressed in the old basis.
pub fn change_basis(a: &Algebra, g: &Matrix) -> Result<Algebra> {
    if g.rows() != a.dim || g.cols() != a.dim {
        return Err(Error::DimensionMismatch {
            context: "basis change size",
            expected: a.dim,
            got: g.rows(),
        });
    }
    let g_inv = g.inverse()?;
    let d = a.dim;
    let mut constants = vec![a.field.zero(); d * d * d];
    for i in 0..d {
        let gi = g.col(i);
        for j in 0..d {
            let gj = g.col(j);
            let prod = a.multiply(&gi, &gj)?;
            let new_coords = g_inv.mul_vec(&prod)?;
            for (k, v) in new_coords.into_iter().enumerate() {
                constants[(i * d + j) * d + k] = v;
            }
        }
    }
    let unit = g_inv.mul_vec(&a.unit)?;
    Algebra::new(a.field, d, constants, unit)
}
