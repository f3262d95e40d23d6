//! The extended space `E = V + V*`, its split pairing and block endomorphisms.
//!
//! Vectors of `E` are columns `(u, sigma)` of length `2n`: the first `n`
//! coordinates are the vector part in a basis `e_1..e_n`, the last `n` the
//! covector part in the dual basis. The dual of an endomorphism `j` of `V`
//! then has matrix `j^T`.
//!
//! Two-forms are given by their Gram matrices `W_ab = w(e_a, e_b)`. The map
//! `w_flat: u -> w(u, .)` has matrix `W^T`, which is `-W` for a skew form.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigenspace, inverse, kernel_basis, rank};
use crate::matrix::{dot, RMat};
use crate::scalars::{q, GaussianRational, LorentzRational, Rational};

/// A vector `u + sigma` of `V + V*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedVector {
    #[serde(serialize_with = "crate::json::ser_rational_vec")]
    pub vec: Vec<Rational>,
    #[serde(serialize_with = "crate::json::ser_rational_vec")]
    pub covec: Vec<Rational>,
}

impl ExtendedVector {
    pub fn new(vec: Vec<Rational>, covec: Vec<Rational>) -> Result<Self> {
        if vec.len() != covec.len() {
            return Err(Error::DimensionMismatch {
                expected: vec.len(),
                found: covec.len(),
            });
        }
        Ok(Self { vec, covec })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            vec: vec![q(0); n],
            covec: vec![q(0); n],
        }
    }

    /// Basis vector `e_i` of `V`.
    pub fn e(n: usize, i: usize) -> Self {
        let mut x = Self::zero(n);
        x.vec[i] = q(1);
        x
    }

    /// Dual basis covector `e^i`.
    pub fn e_dual(n: usize, i: usize) -> Self {
        let mut x = Self::zero(n);
        x.covec[i] = q(1);
        x
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// The column `(u, sigma)`.
    pub fn to_column(&self) -> Vec<Rational> {
        self.vec.iter().chain(&self.covec).cloned().collect()
    }

    pub fn from_column(c: &[Rational]) -> Result<Self> {
        if c.len() % 2 == 1 {
            return Err(Error::ShapeMismatch("odd length column".into()));
        }
        let n = c.len() / 2;
        Self::new(c[..n].to_vec(), c[n..].to_vec())
    }

    /// The `2n` standard basis vectors of `E`.
    pub fn basis(n: usize) -> Vec<Self> {
        (0..n)
            .map(|i| Self::e(n, i))
            .chain((0..n).map(|i| Self::e_dual(n, i)))
            .collect()
    }
}

/// `b(u + sigma, v + tau) = tau(u) + sigma(v)`.
pub fn pairing_b(x: &ExtendedVector, y: &ExtendedVector) -> Result<Rational> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(dot(&x.vec, &y.covec) + dot(&x.covec, &y.vec))
}

/// The pairing on columns `(u, sigma)`.
pub fn pairing_cols(x: &[Rational], y: &[Rational]) -> Rational {
    let n = x.len() / 2;
    dot(&x[..n], &y[n..]) + dot(&x[n..], &y[..n])
}

/// Gram matrix `[[0, I], [I, 0]]` of `b`.
pub fn pairing_gram(n: usize) -> RMat {
    let z = RMat::zeros(n, n);
    let i = RMat::identity(n);
    RMat::block2(&z, &i, &i, &z)
}

/// An endomorphism of `V + V*` acting as `(u, s) -> (Au + Bs, Cu + Ds)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEndo {
    n: usize,
    m: RMat,
}

impl BlockEndo {
    pub fn from_blocks(a: &RMat, b: &RMat, c: &RMat, d: &RMat) -> Result<Self> {
        let n = a.rows();
        for blk in [a, b, c, d] {
            if blk.rows() != n || blk.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if blk.rows() != n { blk.rows() } else { blk.cols() },
                });
            }
        }
        Ok(Self {
            n,
            m: RMat::block2(a, b, c, d),
        })
    }

    /// Reads a `2n x 2n` matrix in juxtaposed coordinates.
    pub fn from_matrix(m: RMat) -> Result<Self> {
        if !m.is_square() || m.rows() % 2 == 1 {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} is not an endomorphism of V + V*",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { n: m.rows() / 2, m })
    }

    pub fn diag(a: &RMat, d: &RMat) -> Result<Self> {
        let z = RMat::zeros(a.rows(), a.rows());
        Self::from_blocks(a, &z, &z, d)
    }

    pub fn anti_diag(b: &RMat, c: &RMat) -> Result<Self> {
        let z = RMat::zeros(b.rows(), b.rows());
        Self::from_blocks(&z, b, c, &z)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: RMat::identity(2 * n),
        }
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        Self {
            n,
            m: RMat::scalar(2 * n, q(c)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat {
        &self.m
    }

    pub fn a(&self) -> RMat {
        self.m.submatrix(0, 0, self.n, self.n)
    }

    pub fn b(&self) -> RMat {
        self.m.submatrix(0, self.n, self.n, self.n)
    }

    pub fn c(&self) -> RMat {
        self.m.submatrix(self.n, 0, self.n, self.n)
    }

    pub fn d(&self) -> RMat {
        self.m.submatrix(self.n, self.n, self.n, self.n)
    }

    pub fn apply(&self, x: &ExtendedVector) -> ExtendedVector {
        let y = self.m.mul_vec(&x.to_column());
        ExtendedVector::from_column(&y).expect("even length")
    }

    pub fn is_diagonal(&self) -> bool {
        self.b().is_zero() && self.c().is_zero()
    }

    pub fn is_anti_diagonal(&self) -> bool {
        self.a().is_zero() && self.d().is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        inverse(&self.m).map(|m| Self { n: self.n, m })
    }

    pub fn is_scalar(&self, c: i64) -> bool {
        self.m == RMat::scalar(2 * self.n, q(c))
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        Self {
            n: self.n,
            m: self.m.anticommutator(&o.m),
        }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        Self {
            n: self.n,
            m: self.m.commutator(&o.m),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            n: self.n,
            m: self.m.scale(c),
        }
    }
}

impl Mul for &BlockEndo {
    type Output = BlockEndo;
    fn mul(self, o: &BlockEndo) -> BlockEndo {
        BlockEndo {
            n: self.n,
            m: &self.m * &o.m,
        }
    }
}

impl Add for &BlockEndo {
    type Output = BlockEndo;
    fn add(self, o: &BlockEndo) -> BlockEndo {
        BlockEndo {
            n: self.n,
            m: &self.m + &o.m,
        }
    }
}

impl Sub for &BlockEndo {
    type Output = BlockEndo;
    fn sub(self, o: &BlockEndo) -> BlockEndo {
        BlockEndo {
            n: self.n,
            m: &self.m - &o.m,
        }
    }
}

impl Neg for &BlockEndo {
    type Output = BlockEndo;
    fn neg(self) -> BlockEndo {
        BlockEndo {
            n: self.n,
            m: -&self.m,
        }
    }
}

/// `E*` with `b(Ex, y) = b(x, E*y)`; in blocks `(A, B; C, D)* = (D^T, B^T; C^T, A^T)`.
pub fn b_adjoint(e: &BlockEndo) -> BlockEndo {
    BlockEndo::from_blocks(
        &e.d().transpose(),
        &e.b().transpose(),
        &e.c().transpose(),
        &e.a().transpose(),
    )
    .expect("square blocks")
}

pub fn is_b_skew(e: &BlockEndo) -> bool {
    b_adjoint(e) == -e
}

pub fn is_b_symmetric(e: &BlockEndo) -> bool {
    b_adjoint(e) == *e
}

/// Splitness in the sense used throughout: an involution is split when its
/// two eigenspaces have equal dimension; a complex structure always is.
pub fn is_split(s: &RMat) -> bool {
    let n = s.rows();
    let sq = s * s;
    if sq == RMat::scalar(n, q(-1)) {
        return true;
    }
    if !sq.is_identity() {
        return false;
    }
    eigenspace(s, &q(1)).len() == eigenspace(s, &q(-1)).len()
}

fn require_complex_structure(j: &RMat) -> Result<()> {
    if !j.is_square() || (j * j) != RMat::scalar(j.rows(), q(-1)) {
        return Err(Error::NotAComplexStructure);
    }
    Ok(())
}

/// `J_l = diag(j, l j^T)`.
pub fn make_j(j: &RMat, ell: i32) -> Result<BlockEndo> {
    require_complex_structure(j)?;
    BlockEndo::diag(j, &j.transpose().scale(&q(ell as i64)))
}

/// Matrix of `w_flat` for the Gram matrix `w`.
pub fn flat(w: &RMat) -> RMat {
    w.transpose()
}

/// Inverse of a nondegenerate skew Gram's flat map.
pub fn flat_inverse(w: &RMat) -> Result<RMat> {
    if !w.is_skew() {
        return Err(Error::ShapeMismatch("form is not skew-symmetric".into()));
    }
    inverse(&flat(w)).ok_or_else(|| Error::DegenerateForm("two-form is degenerate".into()))
}

/// `I_k` with blocks `(0, k w_flat^{-1}; w_flat, 0)`.
pub fn make_i(w: &RMat, k: i32) -> Result<BlockEndo> {
    let winv = flat_inverse(w)?;
    BlockEndo::anti_diag(&winv.scale(&q(k as i64)), &flat(w))
}

fn check_pair(x: &ExtendedVector, y: &ExtendedVector, n: usize) -> Result<()> {
    for v in [x, y] {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
    }
    Ok(())
}

/// `b_l(x, y) = b(x, y) - i b(x, J_l y)`.
pub fn sesqui_b_ell(
    x: &ExtendedVector,
    y: &ExtendedVector,
    j: &RMat,
    ell: i32,
) -> Result<GaussianRational> {
    let jl = make_j(j, ell)?;
    check_pair(x, y, jl.n())?;
    let re = pairing_b(x, y)?;
    let im = -pairing_b(x, &jl.apply(y))?;
    Ok(GaussianRational::new(re, im))
}

/// Value of `b_-` (complex) or `b_+` (Lorentz) on the symplectic side.
#[derive(Clone, Debug, PartialEq)]
pub enum SesquiFormValue {
    Minus(GaussianRational),
    Plus(LorentzRational),
}

/// `b_-(x, y) = b(x, y) - i b(x, I_- y)` and `b_+(x, y) = b(x, y) + eps b(x, I_+ y)`.
pub fn sesqui_b_pm(
    x: &ExtendedVector,
    y: &ExtendedVector,
    w: &RMat,
    k: i32,
) -> Result<SesquiFormValue> {
    let ik = make_i(w, k)?;
    check_pair(x, y, ik.n())?;
    let re = pairing_b(x, y)?;
    let other = pairing_b(x, &ik.apply(y))?;
    Ok(if k == 1 {
        SesquiFormValue::Plus(LorentzRational::new(re, other))
    } else {
        SesquiFormValue::Minus(GaussianRational::new(re, -other))
    })
}

/// A basis of `E` over `C` for the complex structure `J` (so `x, Jx` over all
/// returned `x` form a real basis).
pub fn complex_basis(j: &BlockEndo) -> Vec<Vec<Rational>> {
    let dim = 2 * j.n();
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut span: Vec<Vec<Rational>> = Vec::new();
    for i in 0..dim {
        if span.len() == dim {
            break;
        }
        let mut e = vec![q(0); dim];
        e[i] = q(1);
        let je = j.matrix().mul_vec(&e);
        let mut trial = span.clone();
        trial.push(e.clone());
        trial.push(je.clone());
        if rank(&RMat::from_columns(dim, &trial)) == trial.len() {
            chosen.push(e);
            span = trial;
        }
    }
    chosen
}

/// Gram matrix of `b_-` on the complex basis `f`, Hermitian with conjugation
/// on the first argument.
pub fn b_minus_gram(j_minus: &BlockEndo, f: &[Vec<Rational>]) -> crate::matrix::CMat {
    crate::matrix::CMat::from_fn(f.len(), f.len(), |s, t| {
        let jy = j_minus.matrix().mul_vec(&f[t]);
        GaussianRational::new(pairing_cols(&f[s], &f[t]), -pairing_cols(&f[s], &jy))
    })
}

/// Whether the kernel of `E` is trivial.
pub fn is_invertible(e: &BlockEndo) -> bool {
    kernel_basis(e.matrix()).is_empty()
}

/// `true` if every entry of `x` vanishes.
pub fn is_zero_vec(x: &[Rational]) -> bool {
    x.iter().all(Zero::is_zero)
}
