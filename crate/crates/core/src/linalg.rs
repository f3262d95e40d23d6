//! Exact elimination, kernels, eigenspaces, inertia and Darboux bases.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, CMat, Matrix, RMat};
use crate::scalars::{Field, GaussianRational, Rational, RationalQuaternion, Ring};

/// Reduced row echelon form and the pivot columns.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = t;
            }
        }
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] = inv.clone() * a[(r, j)].clone();
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel, one vector per free column.
pub fn kernel_basis<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![T::zero(); cols];
        v[free] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<T: Field>(m: &Matrix<T>) -> Option<Matrix<T>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = m.hstack(&Matrix::identity(n));
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.submatrix(0, n, n, n))
}

/// Some `X` with `A X = B`, if one exists.
pub fn solve_matrix<T: Field>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Matrix<T>> {
    assert_eq!(a.rows(), b.rows());
    let n = a.cols();
    let aug = a.hstack(b);
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = r[(row, n + j)].clone();
        }
    }
    Some(x)
}

/// Some `x` with `A x = b`, if one exists.
pub fn solve<T: Field>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let bm = Matrix::from_columns(b.len(), &[b.to_vec()]);
    solve_matrix(a, &bm).map(|x| x.column(0))
}

/// Whether `v` lies in the span of `basis` (vectors of equal length).
pub fn in_span<T: Field>(basis: &[Vec<T>], v: &[T]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let a = Matrix::from_columns(v.len(), basis);
    solve(&a, v).is_some()
}

/// Rank of a family of column vectors of length `n`.
pub fn span_rank<T: Field>(n: usize, vectors: &[Vec<T>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&Matrix::from_columns(n, vectors))
}

/// Basis of `ker(S - mu id)`.
pub fn eigenspace<T: Field>(s: &Matrix<T>, mu: &T) -> Vec<Vec<T>> {
    assert!(s.is_square());
    kernel_basis(&(s - &Matrix::scalar(s.rows(), mu.clone())))
}

/// The eigenvalues handled by the exact eigenspace routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eigenvalue {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "-i")]
    MinusI,
}

impl Eigenvalue {
    pub fn as_complex(self) -> GaussianRational {
        use crate::scalars::q;
        match self {
            Eigenvalue::One => GaussianRational::new(q(1), q(0)),
            Eigenvalue::MinusOne => GaussianRational::new(q(-1), q(0)),
            Eigenvalue::I => GaussianRational::new(q(0), q(1)),
            Eigenvalue::MinusI => GaussianRational::new(q(0), q(-1)),
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Eigenvalue::One | Eigenvalue::MinusOne)
    }
}

/// Eigenspace of a rational matrix, computed over `Q(i)`.
pub fn eigenspace_real(s: &RMat, mu: Eigenvalue) -> Vec<Vec<GaussianRational>> {
    eigenspace(&s.complexify(), &mu.as_complex())
}

/// Inertia `(p, q, z)`: positive, negative and null directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub p: usize,
    pub q: usize,
    pub z: usize,
}

impl Inertia {
    pub fn new(p: usize, q: usize, z: usize) -> Self {
        Self { p, q, z }
    }
}

/// How a Gram matrix is to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    SymmetricBilinear,
    SkewBilinear,
    Hermitian,
    AntiHermitian,
}

/// A Gram matrix with the relation it is required to satisfy.
#[derive(Clone, PartialEq)]
pub struct FormSpec<T> {
    gram: Matrix<T>,
    kind: FormKind,
}

impl<T: Ring> std::fmt::Debug for FormSpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FormSpec({:?}, {:?})", self.kind, self.gram)
    }
}

impl<T: Ring> FormSpec<T> {
    pub fn new(gram: Matrix<T>, kind: FormKind) -> Result<Self> {
        let ok = gram.is_square()
            && match kind {
                FormKind::SymmetricBilinear => gram.is_symmetric(),
                FormKind::SkewBilinear => gram.is_skew(),
                FormKind::Hermitian => gram.is_hermitian(),
                FormKind::AntiHermitian => gram == -gram.adjoint(),
            };
        if ok {
            Ok(Self { gram, kind })
        } else {
            Err(Error::ShapeMismatch(format!("gram is not {kind:?}")))
        }
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }
}

/// Inertia of a symmetric (over `Q`) or Hermitian (over `Q(i)`) form.
pub fn congruence_signature<T: Field>(form: &FormSpec<T>) -> Result<Inertia> {
    match form.kind {
        FormKind::SymmetricBilinear | FormKind::Hermitian => Ok(hermitian_inertia(&form.gram)),
        k => Err(Error::ShapeMismatch(format!(
            "signature needs a symmetric or Hermitian form, got {k:?}"
        ))),
    }
}

/// Sylvester inertia of a Hermitian matrix by symmetric elimination.
///
/// A nonzero diagonal entry is used as a 1x1 pivot. When the whole diagonal
/// vanishes any nonzero entry `h_ij` spans a hyperbolic plane with the 2x2
/// pivot `[[0, h_ij], [conj h_ij, 0]]`, contributing one positive and one
/// negative direction. Both steps are Schur complements, so no square roots
/// are needed.
pub fn hermitian_inertia<T: Field>(h: &Matrix<T>) -> Inertia {
    assert!(h.is_square());
    let mut a = h.clone();
    let mut idx: Vec<usize> = (0..h.rows()).collect();
    let (mut p, mut q) = (0, 0);
    loop {
        if idx.is_empty() {
            break;
        }
        if let Some(pos) = idx.iter().position(|&i| !a[(i, i)].is_zero()) {
            let i = idx.remove(pos);
            let d = a[(i, i)].clone();
            if d.real_part().is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            let dinv = d.inv().expect("nonzero");
            for &r in &idx {
                if a[(r, i)].is_zero() {
                    continue;
                }
                let f = a[(r, i)].clone() * dinv.clone();
                for &c in &idx {
                    if !a[(i, c)].is_zero() {
                        a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(i, c)].clone();
                    }
                }
            }
            continue;
        }
        let pair = idx.iter().enumerate().find_map(|(x, &i)| {
            idx.iter()
                .enumerate()
                .find(|&(_, &j)| j != i && !a[(i, j)].is_zero())
                .map(|(y, _)| (x, y))
        });
        let Some((x, y)) = pair else {
            break;
        };
        let (i, j) = (idx[x], idx[y]);
        idx.retain(|&k| k != i && k != j);
        p += 1;
        q += 1;
        // inverse of [[0, a], [b, 0]] is [[0, 1/b], [1/a, 0]]
        let ainv = a[(i, j)].inv().expect("nonzero");
        let binv = a[(j, i)].inv().expect("nonzero");
        for &r in &idx {
            let (ri, rj) = (a[(r, i)].clone(), a[(r, j)].clone());
            if ri.is_zero() && rj.is_zero() {
                continue;
            }
            for &c in &idx {
                let (ic, jc) = (a[(i, c)].clone(), a[(j, c)].clone());
                // [ri rj] [[0, 1/b], [1/a, 0]] [ic; jc] = ri jc / b + rj ic / a
                let t = ri.clone() * binv.clone() * jc + rj.clone() * ainv.clone() * ic;
                if !t.is_zero() {
                    a[(r, c)] = a[(r, c)].clone() - t;
                }
            }
        }
    }
    let z = h.rows() - p - q;
    Inertia { p, q, z }
}

/// A basis `p_1, ..., p_n` with `h(p_a, p_b) = 0` for `a != b`, together with
/// the values `d_a = h(p_a, p_a)`, for a Hermitian `h(x, y) = x* H y`.
///
/// Gram-Schmidt with exact pivots; when every remaining vector is null but
/// some pair is not orthogonal, `x + y / h(x, y)` has value 2 and is used.
pub fn orthogonal_basis<T: Field>(h: &Matrix<T>) -> (Vec<Vec<T>>, Vec<T>) {
    assert!(h.is_square());
    let n = h.rows();
    let mut rest: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let (mut basis, mut values) = (Vec::with_capacity(n), Vec::with_capacity(n));
    while !rest.is_empty() {
        let pivot = rest.iter().position(|v| !h.sesqui(v, v).is_zero());
        let pivot = match pivot {
            Some(k) => k,
            None => {
                let pair = (0..rest.len()).find_map(|a| {
                    (a + 1..rest.len())
                        .find(|&b| !h.sesqui(&rest[a], &rest[b]).is_zero())
                        .map(|b| (a, b))
                });
                let Some((a, b)) = pair else { break };
                let c = h.sesqui(&rest[a], &rest[b]).inv().expect("nonzero");
                let y = rest[b].clone();
                for (x, yy) in rest[a].iter_mut().zip(&y) {
                    *x = x.clone() + yy.clone() * c.clone();
                }
                a
            }
        };
        let v = rest.remove(pivot);
        let d = h.sesqui(&v, &v);
        let dinv = d.inv().expect("nonzero");
        for w in rest.iter_mut() {
            let f = h.sesqui(&v, w) * dinv.clone();
            if !f.is_zero() {
                for (x, vv) in w.iter_mut().zip(&v) {
                    *x = x.clone() - vv.clone() * f.clone();
                }
            }
        }
        basis.push(v);
        values.push(d);
    }
    for v in rest {
        basis.push(v);
        values.push(T::zero());
    }
    (basis, values)
}

/// The `2n x 2n` complex matrix of a quaternionic `n x n` matrix.
///
/// Each entry `u + j v` is replaced by `[[u, -conj v], [v, conj u]]`, the matrix
/// of left multiplication on `H = C + jC` viewed as a right `C`-space. This is a
/// `*`-homomorphism, so Hermitian matrices go to Hermitian matrices and
/// signatures double.
pub fn quaternion_to_complex(m: &Matrix<RationalQuaternion>) -> CMat {
    let mut out = CMat::zeros(2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let (u, v) = m[(i, j)].complex_parts();
            out[(2 * i, 2 * j)] = u.clone();
            out[(2 * i, 2 * j + 1)] = -v.conj();
            out[(2 * i + 1, 2 * j)] = v;
            out[(2 * i + 1, 2 * j + 1)] = u.conj();
        }
    }
    out
}

/// Inertia of a quaternionic Hermitian matrix, counted in quaternionic dimensions.
pub fn quaternion_hermitian_inertia(m: &Matrix<RationalQuaternion>) -> Result<Inertia> {
    if !m.is_hermitian() {
        return Err(Error::ShapeMismatch("quaternionic gram is not Hermitian".into()));
    }
    let c = hermitian_inertia(&quaternion_to_complex(m));
    Ok(Inertia::new(c.p / 2, c.q / 2, c.z / 2))
}

/// Columns `(X_1..X_m, Y_1..Y_m)` with `P^T W P = c [[0, I], [-I, 0]]`.
///
/// Symplectic Gram-Schmidt over `Q`; only divisions occur, so the basis stays
/// rational for every constant `c`.
pub fn darboux_basis(gram: &RMat, c: &Rational) -> Result<RMat> {
    if !gram.is_skew() {
        return Err(Error::ShapeMismatch("gram is not skew-symmetric".into()));
    }
    if c.is_zero() {
        return Err(Error::DegenerateForm("pairing constant is zero".into()));
    }
    let n = gram.rows();
    if n % 2 == 1 || rank(gram) < n {
        return Err(Error::DegenerateForm("skew gram is singular".into()));
    }
    let omega = |x: &[Rational], y: &[Rational]| gram.bilinear(x, y);
    let mut pool: Vec<Vec<Rational>> = RMat::identity(n).columns();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    while let Some(x) = pool.first().cloned() {
        pool.remove(0);
        let pos = pool
            .iter()
            .position(|y| !omega(&x, y).is_zero())
            .ok_or_else(|| Error::DegenerateForm("no partner vector".into()))?;
        let y0 = pool.remove(pos);
        let s = c / omega(&x, &y0);
        let y: Vec<Rational> = y0.iter().map(|t| t * &s).collect();
        for v in pool.iter_mut() {
            let beta = omega(v, &x) / c;
            let alpha = -omega(v, &y) / c;
            for k in 0..n {
                let t = &alpha * &x[k] + &beta * &y[k];
                v[k] += t;
            }
        }
        xs.push(x);
        ys.push(y);
    }
    xs.extend(ys);
    Ok(RMat::from_columns(n, &xs))
}

/// `c [[0, I_m], [-I_m, 0]]`.
pub fn standard_symplectic(m: usize, c: &Rational) -> RMat {
    let z = RMat::zeros(m, m);
    let i = RMat::scalar(m, c.clone());
    RMat::block2(&z, &i, &-&i, &z)
}

/// Checks that the given vectors are independent over the field.
pub fn independent<T: Field>(n: usize, vectors: &[Vec<T>]) -> bool {
    span_rank(n, vectors) == vectors.len()
}

/// Extends an independent family to a basis using unit vectors.
pub fn extend_to_basis<T: Field>(n: usize, vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vectors.to_vec();
    for i in 0..n {
        if out.len() == n {
            break;
        }
        let mut e = vec![T::zero(); n];
        e[i] = T::one();
        let mut trial = out.clone();
        trial.push(e);
        if independent(n, &trial) {
            out = trial;
        }
    }
    out
}

/// `x^T y` for rational vectors.
pub fn rdot(x: &[Rational], y: &[Rational]) -> Rational {
    dot(x, y)
}

/// Whether the determinant is nonzero.
pub fn is_invertible<T: Field>(m: &Matrix<T>) -> bool {
    m.is_square() && rank(m) == m.rows()
}

/// Promotes a vector over `Q` to one over `Q(i)`.
pub fn complexify_vec(v: &[Rational]) -> Vec<GaussianRational> {
    v.iter().map(GaussianRational::from_rational).collect()
}

/// The nonzero scalar `x / y` with `x = (x/y) y`, if `x` is a multiple of `y`.
pub fn proportional<T: Field>(x: &[T], y: &[T]) -> Option<T> {
    let k = y.iter().position(|t| !t.is_zero())?;
    let f = x[k].clone() * y[k].inv()?;
    let ok = x
        .iter()
        .zip(y)
        .all(|(a, b)| *a == f.clone() * b.clone());
    ok.then_some(f)
}
