//! Integer matrices, Smith normal form, chain-complex homology, and the
//! explicit complex computing the stable derived functors of the exterior
//! square.
//!
//! Everything here is exact arbitrary-precision integer linear algebra. The
//! centrepiece is the bounded complex with `Lambda^2` in degree 0 and the
//! tensor square `I (x) I` in every positive degree,
//!
//! ```text
//! d_1(x (x) y) = x /\ y,
//! d_i(x (x) y) = x (x) y + y (x) x   (i even),
//! d_i(x (x) y) = x (x) y - y (x) x   (i odd, i >= 3),
//! ```
//!
//! whose homology at a free abelian group of rank `r` is `(Z/2)^r` in every
//! odd positive degree and zero elsewhere. [`stable_derived_lambda2`] reads
//! these groups off via Smith normal form.
//!
//! The module also hosts two purely combinatorial facts used alongside the
//! complex: the composite of the symmetric-power comultiplication
//! `Delta_{i,k-i}` with the multiplication is `C(k, i)` times the identity
//! ([`comult_binomial_check`]), and `d_k = gcd of the C(k, i)` is an integer
//! combination of them ([`dk_factorization_witness`]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cocycle::{binomial, binomial_gcd};
use crate::error::Error;
use crate::gamma::exponent_vectors;

/// One of the polynomial functors this module evaluates on free abelian
/// groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctorKind {
    /// The `k`-th symmetric power.
    Sym(u32),
    /// The exterior square.
    Lambda2,
    /// The tensor square.
    TensorSquare,
}

/// A basis element of an evaluated functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisElement {
    /// A degree-`k` monomial, as an exponent vector over `rank` variables.
    Monomial(Vec<u32>),
    /// `e_a /\ e_b` with `a < b` (1-based).
    Wedge(usize, usize),
    /// `e_a (x) e_b` (1-based, ordered).
    Tensor(usize, usize),
}

/// The value of a polynomial functor on `Z^rank`: an ordered basis, with
/// the dimension checked against its closed form (`C(rank + k - 1, k)` for
/// `Sym(k)`, `C(rank, 2)` for the exterior square, `rank^2` for the tensor
/// square).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorValue {
    pub kind: FunctorKind,
    pub rank: usize,
    pub basis: Vec<BasisElement>,
}

impl FunctorValue {
    pub fn new(kind: FunctorKind, rank: usize) -> Self {
        let basis = match kind {
            FunctorKind::Sym(k) => {
                exponent_vectors(rank, k).into_iter().map(BasisElement::Monomial).collect()
            }
            FunctorKind::Lambda2 => {
                let mut basis = Vec::new();
                for a in 1..=rank {
                    for b in a + 1..=rank {
                        basis.push(BasisElement::Wedge(a, b));
                    }
                }
                basis
            }
            FunctorKind::TensorSquare => {
                let mut basis = Vec::new();
                for a in 1..=rank {
                    for b in 1..=rank {
                        basis.push(BasisElement::Tensor(a, b));
                    }
                }
                basis
            }
        };
        let value = FunctorValue { kind, rank, basis };
        debug_assert_eq!(BigInt::from(value.dimension()), value.dimension_formula());
        value
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The closed-form dimension the basis length must match.
    pub fn dimension_formula(&self) -> BigInt {
        let r = self.rank as u64;
        match self.kind {
            FunctorKind::Sym(k) => binomial(r + k as u64 - 1, k as u64),
            FunctorKind::Lambda2 => binomial(r, 2),
            FunctorKind::TensorSquare => BigInt::from(r * r),
        }
    }

    /// Index of a basis element, when present.
    pub fn position(&self, element: &BasisElement) -> Option<usize> {
        self.basis.iter().position(|e| e == element)
    }
}

/// A dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().map(BigInt::from).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, Error> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    *m.get_mut(i, j) = val;
                }
                *m.get_mut(i, k) = BigInt::zero();
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * c;
            *self.get_mut(dst, j) += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * c;
            *self.get_mut(i, dst) += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            *self.get_mut(r, j) = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, c);
            *self.get_mut(i, c) = v;
        }
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain `d_1 | d_2 | ...`. The inverses of the transforms are
/// tracked alongside.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|e| !e.is_zero()).count()
    }

    /// The nonzero invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|e| !e.is_zero()).collect()
    }
}

struct SnfWork {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += c * row[src], kept consistent on U and its inverse
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row(dst, src, c);
        self.u.add_row(dst, src, c);
        let neg = -c;
        self.u_inv.add_col(src, dst, &neg);
    }

    /// col[dst] += c * col[src], kept consistent on V and its inverse
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col(dst, src, c);
        self.v.add_col(dst, src, c);
        let neg = -c;
        self.v_inv.add_row(src, dst, &neg);
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }
}

/// Smallest nonzero entry by absolute value in the trailing submatrix, ties
/// broken by lowest row then lowest column index.
fn find_pivot(d: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..d.rows() {
        for j in from..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if e.abs() < d.get(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Computes the Smith normal form by elementary row and column reduction
/// with a smallest-absolute-value pivot rule.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = SnfWork {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };

    let mut t = 0;
    while t < m.min(n) {
        let Some((r, c)) = find_pivot(&w.d, t) else { break };
        w.swap_rows(t, r);
        w.swap_cols(t, c);

        loop {
            // clear the pivot column and row; truncated quotients leave
            // remainders strictly smaller than the pivot
            for i in t + 1..m {
                if !w.d.get(i, t).is_zero() {
                    let q = w.d.get(i, t) / w.d.get(t, t);
                    if !q.is_zero() {
                        w.add_row(i, t, &(-q));
                    }
                }
            }
            for j in t + 1..n {
                if !w.d.get(t, j).is_zero() {
                    let q = w.d.get(t, j) / w.d.get(t, t);
                    if !q.is_zero() {
                        w.add_col(j, t, &(-q));
                    }
                }
            }

            let col_clear = (t + 1..m).all(|i| w.d.get(i, t).is_zero());
            let row_clear = (t + 1..n).all(|j| w.d.get(t, j).is_zero());
            if !(col_clear && row_clear) {
                // a nonzero remainder is now the smallest entry; re-pivot
                let (r, c) = find_pivot(&w.d, t).expect("nonzero remainder exists");
                w.swap_rows(t, r);
                w.swap_cols(t, c);
                continue;
            }

            // divisibility sweep: the pivot must divide the rest
            let pivot = w.d.get(t, t).clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(w.d.get(i, j) % &pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    w.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        t += 1;
    }

    for i in 0..m.min(n) {
        if w.d.get(i, i).is_negative() {
            w.negate_row(i);
        }
    }

    SnfDecomposition { u: w.u, d: w.d, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv }
}

/// A bounded chain complex of finitely generated free abelian groups,
/// `d_i : C_i -> C_{i-1}` for `1 <= i <= top`, with `d . d = 0` verified at
/// construction.
#[derive(Debug, Clone)]
pub struct IntChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

/// An abelian group presented by invariant factors: `Z^free + Z/t_1 + ...`
/// with `t_1 | t_2 | ...`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupIso {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupIso {
    pub fn trivial() -> Self {
        AbelianGroupIso { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `(Z/q)^count`.
    pub fn elementary(q: i64, count: usize) -> Self {
        AbelianGroupIso { free_rank: 0, torsion: vec![BigInt::from(q); count] }
    }
}

impl std::fmt::Display for AbelianGroupIso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl IntChainComplex {
    /// Builds a complex from per-degree ranks and boundary matrices
    /// (`boundaries[i-1]` is `d_i`, of shape `dims[i-1] x dims[i]`).
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, Error> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("a complex needs at least degree 0".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} degrees need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.rows() != dims[i] || d.cols() != dims[i + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "d_{} should be {}x{}, got {}x{}",
                    i + 1,
                    dims[i],
                    dims[i + 1],
                    d.rows(),
                    d.cols()
                )));
            }
        }
        for i in 1..boundaries.len() {
            if !boundaries[i - 1].mul(&boundaries[i])?.is_zero() {
                return Err(Error::NotAComplex { degree: i + 1 });
            }
        }
        Ok(IntChainComplex { dims, boundaries })
    }

    /// Highest degree carried by the complex.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_i` (1-based); out-of-range boundaries are zero maps.
    pub fn boundary(&self, i: usize) -> Option<&IntMatrix> {
        (1..=self.boundaries.len()).contains(&i).then(|| &self.boundaries[i - 1])
    }

    /// `H_i = ker d_i / im d_{i+1}`, presented by invariant factors.
    pub fn homology(&self, i: usize) -> Result<AbelianGroupIso, Error> {
        if i > self.top() {
            return Err(Error::OutOfRange(format!(
                "degree {i} exceeds the top degree {}",
                self.top()
            )));
        }
        let dim_i = self.dims[i];

        // kernel of d_i in the column coordinates of its SNF
        let (rank_out, v_inv) = match self.boundary(i) {
            Some(d) => {
                let snf = smith_normal_form(d);
                (snf.rank(), snf.v_inv)
            }
            None => (0, IntMatrix::identity(dim_i)),
        };
        let kernel_dim = dim_i - rank_out;

        // image of d_{i+1}, expressed in those coordinates
        let incoming = match self.boundary(i + 1) {
            Some(d) => v_inv.mul(d)?,
            None => IntMatrix::zero(dim_i, 0),
        };
        // rows corresponding to nonzero invariant factors must vanish on the
        // image, since d_i . d_{i+1} = 0
        for r in 0..rank_out {
            for c in 0..incoming.cols() {
                if !incoming.get(r, c).is_zero() {
                    return Err(Error::Internal(
                        "image of the boundary escapes the kernel".into(),
                    ));
                }
            }
        }
        let mut presentation = IntMatrix::zero(kernel_dim, incoming.cols());
        for r in 0..kernel_dim {
            for c in 0..incoming.cols() {
                *presentation.get_mut(r, c) = incoming.get(rank_out + r, c).clone();
            }
        }

        let snf = smith_normal_form(&presentation);
        let factors = snf.invariant_factors();
        Ok(AbelianGroupIso {
            free_rank: kernel_dim - factors.len(),
            torsion: factors.into_iter().filter(|f| !f.is_one()).collect(),
        })
    }
}

/// The bounded complex with the exterior square in degree 0 and the tensor
/// square in degrees `1..=top`, evaluated at a free abelian group of rank
/// `r`: `d_1` is the wedge projection, and higher boundaries alternate
/// between the symmetrizer (even degree) and antisymmetrizer (odd degree).
pub fn build_ctilde(rank: usize, top: usize) -> Result<IntChainComplex, Error> {
    if rank < 1 || top < 1 {
        return Err(Error::InvalidArgument(format!(
            "need rank >= 1 and top >= 1, got rank {rank}, top {top}"
        )));
    }
    let wedge = FunctorValue::new(FunctorKind::Lambda2, rank);
    let tensor = FunctorValue::new(FunctorKind::TensorSquare, rank);
    let mut dims = vec![wedge.dimension()];
    dims.extend(std::iter::repeat_n(tensor.dimension(), top));

    let wedge_index =
        |a: usize, b: usize| wedge.position(&BasisElement::Wedge(a, b)).expect("wedge basis");
    let tensor_index =
        |a: usize, b: usize| tensor.position(&BasisElement::Tensor(a, b)).expect("tensor basis");

    let mut boundaries = Vec::with_capacity(top);
    let mut d1 = IntMatrix::zero(wedge.dimension(), tensor.dimension());
    for a in 1..=rank {
        for b in 1..=rank {
            if a < b {
                *d1.get_mut(wedge_index(a, b), tensor_index(a, b)) += 1;
            } else if a > b {
                *d1.get_mut(wedge_index(b, a), tensor_index(a, b)) -= 1;
            }
        }
    }
    boundaries.push(d1);

    for i in 2..=top {
        let mut d = IntMatrix::zero(tensor.dimension(), tensor.dimension());
        for a in 1..=rank {
            for b in 1..=rank {
                let col = tensor_index(a, b);
                *d.get_mut(tensor_index(a, b), col) += 1;
                if i % 2 == 0 {
                    *d.get_mut(tensor_index(b, a), col) += 1;
                } else {
                    *d.get_mut(tensor_index(b, a), col) -= 1;
                }
            }
        }
        boundaries.push(d);
    }

    IntChainComplex::new(dims, boundaries)
}

/// The `i`-th stable derived functor of the exterior square at `Z^rank`,
/// read off as the homology of [`build_ctilde`]. Degrees at the top of a
/// truncated complex have unreliable homology, so `top >= i + 1` is
/// required.
pub fn stable_derived_lambda2(i: usize, rank: usize, top: usize) -> Result<AbelianGroupIso, Error> {
    if top < i + 1 {
        return Err(Error::InsufficientTruncation { need: i + 1, have: top });
    }
    build_ctilde(rank, top)?.homology(i)
}

/// Outcome of the comultiplication-multiplication composite check on
/// symmetric powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComultCheck {
    /// Whether the composite equals `C(k, i)` times the identity.
    pub holds: bool,
    /// The binomial factor `C(k, i)`.
    pub factor: BigInt,
    /// A monomial witnessing the failure, when `holds` is false.
    pub counterexample: Option<String>,
}

/// Builds the matrix of the comultiplication
/// `Delta_{i,k-i} : S^k(Z^r) -> S^i(Z^r) (x) S^{k-i}(Z^r)` on monomial
/// bases (a monomial splits into all sub-multisets of size `i`, with
/// multiplicity `prod_j C(a_j, b_j)`), composes with the multiplication,
/// and compares against `C(k, i)` times the identity.
pub fn comult_binomial_check(k: u32, i: u32, rank: usize) -> Result<ComultCheck, Error> {
    if i < 1 || i >= k {
        return Err(Error::OutOfRange(format!("need 1 <= i < k, got i = {i}, k = {k}")));
    }
    if rank < 1 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let monomials = |value: &FunctorValue| -> Vec<Vec<u32>> {
        value
            .basis
            .iter()
            .map(|e| match e {
                BasisElement::Monomial(exp) => exp.clone(),
                other => unreachable!("symmetric powers have monomial bases, got {other:?}"),
            })
            .collect()
    };
    let top_basis = monomials(&FunctorValue::new(FunctorKind::Sym(k), rank));
    let left_basis = monomials(&FunctorValue::new(FunctorKind::Sym(i), rank));
    let right_basis = monomials(&FunctorValue::new(FunctorKind::Sym(k - i), rank));
    let left_pos = |exp: &[u32]| left_basis.iter().position(|e| e == exp).expect("basis");
    let right_pos = |exp: &[u32]| right_basis.iter().position(|e| e == exp).expect("basis");
    let top_pos = |exp: &[u32]| top_basis.iter().position(|e| e == exp).expect("basis");

    // Delta on monomial bases
    let mut delta = IntMatrix::zero(left_basis.len() * right_basis.len(), top_basis.len());
    for (col, mono) in top_basis.iter().enumerate() {
        for sub in &left_basis {
            if sub.iter().zip(mono).any(|(s, m)| s > m) {
                continue;
            }
            let multiplicity: BigInt = sub
                .iter()
                .zip(mono)
                .map(|(&b, &a)| binomial(a as u64, b as u64))
                .product();
            let rest: Vec<u32> = mono.iter().zip(sub).map(|(a, b)| a - b).collect();
            let row = left_pos(sub) * right_basis.len() + right_pos(&rest);
            *delta.get_mut(row, col) += multiplicity;
        }
    }

    // multiplication S^i (x) S^{k-i} -> S^k
    let mut mult = IntMatrix::zero(top_basis.len(), left_basis.len() * right_basis.len());
    for (li, l) in left_basis.iter().enumerate() {
        for (ri, r) in right_basis.iter().enumerate() {
            let product: Vec<u32> = l.iter().zip(r).map(|(a, b)| a + b).collect();
            *mult.get_mut(top_pos(&product), li * right_basis.len() + ri) += 1;
        }
    }

    let composite = mult.mul(&delta)?;
    let factor = binomial(k as u64, i as u64);
    for (col, mono) in top_basis.iter().enumerate() {
        for row in 0..top_basis.len() {
            let expected = if row == col { factor.clone() } else { BigInt::zero() };
            if *composite.get(row, col) != expected {
                return Ok(ComultCheck {
                    holds: false,
                    factor,
                    counterexample: Some(format!("{mono:?}")),
                });
            }
        }
    }
    Ok(ComultCheck { holds: true, factor, counterexample: None })
}

/// Integers `lambda_1, ..., lambda_{k-1}` with
/// `sum lambda_i C(k, i) = d_k`, found by iterated extended gcd and
/// verified by substitution.
pub fn dk_factorization_witness(k: u32) -> Result<Vec<BigInt>, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 2, got {k}")));
    }
    let mut lambda = vec![BigInt::zero(); (k - 1) as usize];
    lambda[0] = BigInt::one();
    let mut g = binomial(k as u64, 1);
    for idx in 1..(k - 1) as usize {
        let c = binomial(k as u64, idx as u64 + 1);
        let ext = g.extended_gcd(&c);
        for l in &mut lambda[..idx] {
            *l *= &ext.x;
        }
        lambda[idx] = ext.y;
        g = ext.gcd;
    }

    let dk = binomial_gcd(k);
    let total: BigInt = lambda
        .iter()
        .enumerate()
        .map(|(idx, l)| l * binomial(k as u64, idx as u64 + 1))
        .sum();
    if g != dk || total != dk {
        return Err(Error::Internal(format!(
            "witness for d_{k} sums to {total}, expected {dk}"
        )));
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn snf_contract(a: &IntMatrix) {
        let snf = smith_normal_form(a);
        // U A V = D
        let uav = snf.u.mul(a).unwrap().mul(&snf.v).unwrap();
        assert_eq!(uav, snf.d);
        // unimodularity
        assert_eq!(snf.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().unwrap().abs(), BigInt::one());
        // tracked inverses really invert
        let m = a.rows();
        let n = a.cols();
        assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), IntMatrix::identity(m));
        assert_eq!(snf.v.mul(&snf.v_inv).unwrap(), IntMatrix::identity(n));
        // diagonal, non-negative, divisibility chain
        for i in 0..m {
            for j in 0..n {
                if i != j {
                    assert!(snf.d.get(i, j).is_zero());
                }
            }
        }
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "chain broken: {factors:?}");
        }
    }

    #[test]
    fn functor_dimensions_match_their_formulas() {
        for rank in 1..=4 {
            for k in 1..=6 {
                let sym = FunctorValue::new(FunctorKind::Sym(k), rank);
                assert_eq!(BigInt::from(sym.dimension()), sym.dimension_formula());
            }
            let wedge = FunctorValue::new(FunctorKind::Lambda2, rank);
            assert_eq!(wedge.dimension(), rank * (rank - 1) / 2);
            let tensor = FunctorValue::new(FunctorKind::TensorSquare, rank);
            assert_eq!(tensor.dimension(), rank * rank);
        }
    }

    #[test]
    fn snf_small_examples() {
        let a = IntMatrix::from_rows(vec![vec![2]]).unwrap();
        assert_eq!(smith_normal_form(&a).d, a);

        let a = IntMatrix::from_rows(vec![vec![1, 0], vec![0, 0]]).unwrap();
        let snf = smith_normal_form(&a);
        assert_eq!(snf.d.diagonal(), vec![BigInt::one(), BigInt::zero()]);

        // invariant factors of [[2,4],[6,8]] are 2 and 4
        let a = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]).unwrap();
        let snf = smith_normal_form(&a);
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
        snf_contract(&a);
    }

    #[test]
    fn snf_reference_matrix() {
        // independently known invariant factors 1, 3, 21
        let a = IntMatrix::from_rows(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ])
        .unwrap();
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::one(), BigInt::from(3), BigInt::from(21)]
        );
        snf_contract(&a);
    }

    #[test]
    fn snf_contract_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let mut a = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    *a.get_mut(i, j) = BigInt::from(rng.gen_range(-20i64..=20));
                }
            }
            snf_contract(&a);
        }
    }

    #[test]
    fn snf_degenerate_shapes() {
        snf_contract(&IntMatrix::zero(0, 3));
        snf_contract(&IntMatrix::zero(3, 0));
        snf_contract(&IntMatrix::zero(2, 2));
    }

    #[test]
    fn complex_validation() {
        // d1 = (2), d2 = (0) is a complex; d2 = (1) is not
        let good = IntChainComplex::new(
            vec![1, 1, 1],
            vec![
                IntMatrix::from_rows(vec![vec![2]]).unwrap(),
                IntMatrix::from_rows(vec![vec![0]]).unwrap(),
            ],
        );
        assert!(good.is_ok());
        let bad = IntChainComplex::new(
            vec![1, 1, 1],
            vec![
                IntMatrix::from_rows(vec![vec![2]]).unwrap(),
                IntMatrix::from_rows(vec![vec![1]]).unwrap(),
            ],
        );
        assert!(matches!(bad, Err(Error::NotAComplex { degree: 2 })));
    }

    #[test]
    fn homology_of_multiplication_by_two() {
        // 0 -> Z --2--> Z -> 0
        let c = IntChainComplex::new(
            vec![1, 1],
            vec![IntMatrix::from_rows(vec![vec![2]]).unwrap()],
        )
        .unwrap();
        assert_eq!(
            c.homology(0).unwrap(),
            AbelianGroupIso { free_rank: 0, torsion: vec![BigInt::from(2)] }
        );
        assert!(c.homology(1).unwrap().is_trivial());
    }

    #[test]
    fn homology_of_zero_maps() {
        let c = IntChainComplex::new(
            vec![1, 1],
            vec![IntMatrix::from_rows(vec![vec![0]]).unwrap()],
        )
        .unwrap();
        assert_eq!(c.homology(0).unwrap(), AbelianGroupIso { free_rank: 1, torsion: vec![] });
        assert_eq!(c.homology(1).unwrap(), AbelianGroupIso { free_rank: 1, torsion: vec![] });

        let zero = IntChainComplex::new(vec![0, 0, 0], vec![IntMatrix::zero(0, 0); 2]).unwrap();
        for i in 0..=2 {
            assert!(zero.homology(i).unwrap().is_trivial());
        }
    }

    #[test]
    fn ctilde_rank_one_shape() {
        let c = build_ctilde(1, 4).unwrap();
        assert_eq!(c.dims(), &[0, 1, 1, 1, 1]);
        // symmetrizer doubles, antisymmetrizer kills, at rank 1
        assert_eq!(c.boundary(2).unwrap().get(0, 0), &BigInt::from(2));
        assert_eq!(c.boundary(3).unwrap().get(0, 0), &BigInt::zero());
    }

    #[test]
    fn ctilde_rank_two_d1() {
        let c = build_ctilde(2, 2).unwrap();
        assert_eq!(c.dims(), &[1, 4, 4]);
        let d1 = c.boundary(1).unwrap();
        // columns in tensor order (1,1), (1,2), (2,1), (2,2)
        assert_eq!(d1.get(0, 0), &BigInt::zero());
        assert_eq!(d1.get(0, 1), &BigInt::one());
        assert_eq!(d1.get(0, 2), &BigInt::from(-1));
        assert_eq!(d1.get(0, 3), &BigInt::zero());
    }

    #[test]
    fn ctilde_composes_to_zero() {
        for rank in 1..=3 {
            assert!(build_ctilde(rank, 8).is_ok());
        }
    }

    #[test]
    fn stable_derived_functors_of_lambda_squared() {
        for rank in 1..=3usize {
            for i in 0..=5usize {
                let h = stable_derived_lambda2(i, rank, 8).unwrap();
                if i >= 1 && i % 2 == 1 {
                    assert_eq!(h, AbelianGroupIso::elementary(2, rank), "i={i} rank={rank}");
                } else {
                    assert!(h.is_trivial(), "i={i} rank={rank}: {h}");
                }
            }
        }
    }

    #[test]
    fn homology_is_stable_in_the_truncation() {
        for top in 4..=8 {
            let h = stable_derived_lambda2(3, 2, top).unwrap();
            assert_eq!(h, AbelianGroupIso::elementary(2, 2));
        }
        assert!(matches!(
            stable_derived_lambda2(3, 2, 3),
            Err(Error::InsufficientTruncation { need: 4, have: 3 })
        ));
    }

    #[test]
    fn rank_nullity_on_ctilde() {
        let c = build_ctilde(3, 6).unwrap();
        for i in 1..=6 {
            let d = c.boundary(i).unwrap();
            let rank = smith_normal_form(d).rank();
            let nullity = d.cols() - rank;
            assert_eq!(d.cols(), rank + nullity);
            // the kernel of d_i contains the image of d_{i+1}
            if let Some(next) = c.boundary(i + 1) {
                let next_rank = smith_normal_form(next).rank();
                assert!(next_rank <= nullity);
            }
        }
    }

    #[test]
    fn comult_composite_examples() {
        let check = comult_binomial_check(2, 1, 2).unwrap();
        assert!(check.holds);
        assert_eq!(check.factor, BigInt::from(2));

        let check = comult_binomial_check(4, 2, 1).unwrap();
        assert!(check.holds);
        assert_eq!(check.factor, BigInt::from(6));

        let check = comult_binomial_check(6, 3, 3).unwrap();
        assert!(check.holds);
        assert_eq!(check.factor, BigInt::from(20));
    }

    #[test]
    fn comult_rejects_bad_arguments() {
        assert!(comult_binomial_check(3, 0, 2).is_err());
        assert!(comult_binomial_check(3, 3, 2).is_err());
        assert!(comult_binomial_check(3, 1, 0).is_err());
    }

    #[test]
    fn dk_witness_examples() {
        assert_eq!(dk_factorization_witness(2).unwrap(), vec![BigInt::one()]);

        // 4 lambda_1 + 6 lambda_2 + 4 lambda_3 = 2
        let w4 = dk_factorization_witness(4).unwrap();
        let total: BigInt = w4
            .iter()
            .enumerate()
            .map(|(i, l)| l * binomial(4, i as u64 + 1))
            .sum();
        assert_eq!(total, BigInt::from(2));

        let w6 = dk_factorization_witness(6).unwrap();
        let total: BigInt = w6
            .iter()
            .enumerate()
            .map(|(i, l)| l * binomial(6, i as u64 + 1))
            .sum();
        assert_eq!(total, BigInt::one());
    }

    #[test]
    fn dk_witness_all_small_k() {
        for k in 2..=64u32 {
            let w = dk_factorization_witness(k).unwrap();
            let total: BigInt = w
                .iter()
                .enumerate()
                .map(|(i, l)| l * binomial(k as u64, i as u64 + 1))
                .sum();
            assert_eq!(total, binomial_gcd(k), "k = {k}");
        }
    }
}
