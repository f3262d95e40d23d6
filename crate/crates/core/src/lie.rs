//! Left-invariant Courant calculus over a Lie algebra given by structure
//! constants, and the integrability verdicts built on it.
//!
//! For left-invariant sections `u + sigma`, `v + tau` the functions
//! `tau(u)`, `sigma(v)` are constant, so the exact term of the Courant bracket
//! drops out, and `(L_u tau)(w) = -tau([u, w])` on left-invariant `w`. Hence
//!
//! ```text
//! [u + sigma, v + tau] = [u, v] + (w -> -tau([u, w]) + sigma([v, w]))
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::{flat, flat_inverse, is_split, BlockEndo};
use crate::linalg::{eigenspace, in_span, inverse, kernel_basis, rank, solve, Eigenvalue};
use crate::matrix::RMat;
use crate::scalars::{q, GaussianRational, Rational, Ring};
use crate::slash::{
    check_slash, check_slash_complex, lift_tensor, SideData, Verdict,
};

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    c: Vec<Rational>,
}

impl LieAlgebraData {
    /// Builds the algebra from the brackets `[e_i, e_j]` with `i < j`; the
    /// remaining ones follow by antisymmetry. Jacobi is not enforced here.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Rational>)]) -> Result<Self> {
        let mut c = vec![q(0); dim * dim * dim];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i.max(j).max(coeffs.len()),
                });
            }
            if i == j {
                if coeffs.iter().any(|x| *x != q(0)) {
                    return Err(Error::Parse(format!("[e_{i}, e_{i}] must vanish")));
                }
                continue;
            }
            for (k, x) in coeffs.iter().enumerate() {
                c[(i * dim + j) * dim + k] = x.clone();
                c[(j * dim + i) * dim + k] = -x.clone();
            }
        }
        Ok(Self { dim, c })
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            c: vec![q(0); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Overwrites one structure constant without restoring antisymmetry.
    pub fn set_c(&mut self, i: usize, j: usize, k: usize, x: Rational) {
        let d = self.dim;
        self.c[(i * d + j) * d + k] = x;
    }

    /// The nonzero brackets `[e_i, e_j]`, `i < j`.
    pub fn brackets(&self) -> Vec<(usize, usize, Vec<Rational>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v: Vec<Rational> = (0..self.dim).map(|k| self.c(i, j, k).clone()).collect();
                if v.iter().any(|x| *x != q(0)) {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim).all(|k| *self.c(i, j, k) == -self.c(j, i, k).clone())
            })
        })
    }

    /// `[u, v]` for coordinate vectors over any algebra containing `Q`.
    pub fn bracket<T: Ring>(&self, u: &[T], v: &[T]) -> Vec<T> {
        let d = self.dim;
        let mut out = vec![T::zero(); d];
        for i in 0..d {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let uv = u[i].clone() * v[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if *c != q(0) {
                        *o = o.clone() + uv.clone() * T::from_rational(c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_x = [x, .]`.
    pub fn ad(&self, x: &[Rational]) -> RMat {
        let d = self.dim;
        let mut m = RMat::zeros(d, d);
        for j in 0..d {
            let mut e = vec![q(0); d];
            e[j] = q(1);
            let col = self.bracket(x, &e);
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// The three-dimensional Heisenberg algebra times a line: `[e_1, e_2] = e_3`
/// (indices 0, 1, 2 here).
pub fn heisenberg_times_line() -> LieAlgebraData {
    LieAlgebraData::from_brackets(4, &[(0, 1, vec![q(0), q(0), q(1), q(0)])]).expect("valid")
}

/// Exact Jacobi identity on every index triple (and antisymmetry).
pub fn jacobi_check(g: &LieAlgebraData) -> bool {
    if !g.is_antisymmetric() {
        return false;
    }
    let d = g.dim;
    let e = |i: usize| {
        let mut v = vec![q(0); d];
        v[i] = q(1);
        v
    };
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (x, y, z) = (e(i), e(j), e(k));
                let a = g.bracket(&x, &g.bracket(&y, &z));
                let b = g.bracket(&y, &g.bracket(&z, &x));
                let c = g.bracket(&z, &g.bracket(&x, &y));
                if (0..d).any(|t| a[t].clone() + b[t].clone() + c[t].clone() != q(0)) {
                    return false;
                }
            }
        }
    }
    true
}

/// A left-invariant section `u + sigma`, stored as the column `(u, sigma)`.
pub type LeftInvariantSection = crate::extended::ExtendedVector;

/// Courant bracket of left-invariant sections given as columns `(u, sigma)`
/// over any algebra containing `Q` (the bracket is extended bilinearly).
pub fn courant_cols<T: Ring>(x: &[T], y: &[T], g: &LieAlgebraData) -> Vec<T> {
    let d = g.dim;
    let (u, sigma) = x.split_at(d);
    let (v, tau) = y.split_at(d);
    let mut out = g.bracket(u, v);
    for w in 0..d {
        let mut ew = vec![T::zero(); d];
        ew[w] = T::one();
        let uw = g.bracket(u, &ew);
        let vw = g.bracket(v, &ew);
        let mut acc = T::zero();
        for k in 0..d {
            acc = acc - tau[k].clone() * uw[k].clone() + sigma[k].clone() * vw[k].clone();
        }
        out.push(acc);
    }
    out
}

/// Courant bracket of two left-invariant sections.
pub fn courant_bracket_li(
    s1: &LeftInvariantSection,
    s2: &LeftInvariantSection,
    g: &LieAlgebraData,
) -> Result<LeftInvariantSection> {
    for s in [s1, s2] {
        if s.dim() != g.dim {
            return Err(Error::DimensionMismatch {
                expected: g.dim,
                found: s.dim(),
            });
        }
    }
    let out = courant_cols(&s1.to_column(), &s2.to_column(), g);
    LeftInvariantSection::from_column(&out)
}

/// `d theta(x, y, z) = -theta([x,y], z) + theta([x,z], y) - theta([y,z], x)`.
pub fn d_2form(theta: &RMat, g: &LieAlgebraData, i: usize, j: usize, k: usize) -> Rational {
    let d = g.dim;
    let e = |t: usize| {
        let mut v = vec![q(0); d];
        v[t] = q(1);
        v
    };
    let (x, y, z) = (e(i), e(j), e(k));
    -theta.bilinear(&g.bracket(&x, &y), &z) + theta.bilinear(&g.bracket(&x, &z), &y)
        - theta.bilinear(&g.bracket(&y, &z), &x)
}

/// Whether the left-invariant two-form with Gram matrix `theta` is closed.
pub fn d_closed_2form(theta: &RMat, g: &LieAlgebraData) -> bool {
    let d = g.dim;
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                if d_2form(theta, g, i, j, k) != q(0) {
                    return false;
                }
            }
        }
    }
    true
}

/// Skew, nondegenerate and closed.
pub fn is_symplectic_li(theta: &RMat, g: &LieAlgebraData) -> bool {
    theta.rows() == g.dim
        && theta.is_skew()
        && rank(theta) == g.dim
        && d_closed_2form(theta, g)
}

/// Whether `ker(S - mu)` is closed under the Courant bracket.
///
/// Eigenvalues `+-i` are handled over `Q(i)` with the bilinear extension of
/// the bracket; membership is an exact rank test.
pub fn eigensection_involutive(s: &BlockEndo, mu: Eigenvalue, g: &LieAlgebraData) -> bool {
    if mu.is_real() {
        let val = if mu == Eigenvalue::One { q(1) } else { q(-1) };
        involutive(&eigenspace(s.matrix(), &val), g)
    } else {
        let sc = s.matrix().complexify();
        involutive(&eigenspace(&sc, &mu.as_complex()), g)
    }
}

fn involutive<T: crate::scalars::Field>(basis: &[Vec<T>], g: &LieAlgebraData) -> bool {
    for (a, x) in basis.iter().enumerate() {
        for y in &basis[a + 1..] {
            let z = courant_cols(x, y, g);
            if !in_span(basis, &z) {
                return false;
            }
        }
    }
    true
}

/// Involutivity of each relevant eigensection and the overall verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Integrability {
    pub involutive: Vec<(Eigenvalue, bool)>,
    pub integrable: bool,
}

/// Courant integrability of a left-invariant structure whose algebraic
/// conditions hold: both `+-i` spaces for `lambda = -1`; both `+-1` spaces for
/// `lambda = 1`, or only `+1` when `plus_only`.
pub fn is_integrable_slash(
    s: &BlockEndo,
    lambda: i32,
    plus_only: bool,
    g: &LieAlgebraData,
    data: &SideData,
    ell: i32,
) -> Result<Integrability> {
    if s.n() != g.dim {
        return Err(Error::DimensionMismatch {
            expected: g.dim,
            found: s.n(),
        });
    }
    let rep = check_slash(s, data, lambda, ell)?;
    if !rep.passed() {
        return Err(Error::NotASlashStructure(
            rep.clause.unwrap_or_else(|| "algebraic conditions".into()),
        ));
    }
    Ok(integrability(s, lambda, plus_only, g))
}

/// The Courant part of [`is_integrable_slash`] without the slash conditions.
pub fn integrability(s: &BlockEndo, lambda: i32, plus_only: bool, g: &LieAlgebraData) -> Integrability {
    let mus: Vec<Eigenvalue> = match (lambda, plus_only) {
        (-1, _) => vec![Eigenvalue::I, Eigenvalue::MinusI],
        (_, true) => vec![Eigenvalue::One],
        _ => vec![Eigenvalue::One, Eigenvalue::MinusOne],
    };
    let involutive: Vec<(Eigenvalue, bool)> = mus
        .into_iter()
        .map(|mu| (mu, eigensection_involutive(s, mu, g)))
        .collect();
    let integrable = involutive.iter().all(|(_, ok)| *ok);
    Integrability {
        involutive,
        integrable,
    }
}

/// Whether the span of `basis` (vectors of the algebra) is a subalgebra.
pub fn is_subalgebra(basis: &[Vec<Rational>], g: &LieAlgebraData) -> bool {
    for (a, x) in basis.iter().enumerate() {
        for y in &basis[a + 1..] {
            if !in_span(basis, &g.bracket(x, y)) {
                return false;
            }
        }
    }
    true
}

/// Clause-by-clause outcome of the bi-symplectic foliation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllSymplecticVerdict {
    pub ok: bool,
    /// The first failed clause.
    pub clause: Option<String>,
    pub checks: Vec<Verdict>,
    /// Gram matrix of the reconstructed form (converse direction only).
    #[serde(skip)]
    pub theta: Option<RMat>,
}

impl EllSymplecticVerdict {
    fn from_checks(checks: Vec<Verdict>, theta: Option<RMat>) -> Self {
        let clause = checks.iter().find(|v| !v.ok).map(|v| v.name.clone());
        Self {
            ok: clause.is_none(),
            clause,
            checks,
            theta,
        }
    }
}

fn v(name: &str, ok: bool) -> Verdict {
    Verdict {
        name: name.to_string(),
        ok,
    }
}

fn restricted_nondegenerate(w: &RMat, basis: &[Vec<Rational>]) -> bool {
    let k = basis.len();
    let m = RMat::from_fn(k, k, |a, b| w.bilinear(&basis[a], &basis[b]));
    rank(&m) == k
}

/// Forward direction: `A = w_flat^{-1} theta_flat` is a split involution,
/// symmetric for `w`, whose eigenspaces are subalgebras on which `w` is
/// nondegenerate.
pub fn ell_symplectic_check(theta: &RMat, w: &RMat, g: &LieAlgebraData) -> EllSymplecticVerdict {
    let mut checks = vec![
        v("precondition: w symplectic", is_symplectic_li(w, g)),
        v("precondition: theta closed", theta.is_skew() && d_closed_2form(theta, g)),
    ];
    if checks.iter().any(|c| !c.ok) {
        return EllSymplecticVerdict::from_checks(checks, None);
    }
    let wf = flat(w);
    let a = &flat_inverse(w).expect("nondegenerate") * &flat(theta);
    checks.push(v("A^2 = id", (&a * &a).is_identity()));
    checks.push(v("A split", is_split(&a)));
    checks.push(v("A symmetric for w", &wf * &a == &a.transpose() * &wf));
    let plus = eigenspace(&a, &q(1));
    let minus = eigenspace(&a, &q(-1));
    checks.push(v("D_+ subalgebra", is_subalgebra(&plus, g)));
    checks.push(v("D_- subalgebra", is_subalgebra(&minus, g)));
    checks.push(v("w nondegenerate on D_+", restricted_nondegenerate(w, &plus)));
    checks.push(v("w nondegenerate on D_-", restricted_nondegenerate(w, &minus)));
    EllSymplecticVerdict::from_checks(checks, None)
}

/// Converse direction: from complementary subalgebras `D_+`, `D_-` of equal
/// dimension, `w`-orthogonal and `w`-nondegenerate, builds `theta` with
/// `theta_flat = w_flat A` where `A = +-1` on `D_+-`.
pub fn ell_symplectic_converse(
    d_plus: &[Vec<Rational>],
    d_minus: &[Vec<Rational>],
    w: &RMat,
    g: &LieAlgebraData,
) -> EllSymplecticVerdict {
    let n = g.dim;
    let mut checks = vec![v("precondition: w symplectic", is_symplectic_li(w, g))];
    let all: Vec<Vec<Rational>> = d_plus.iter().chain(d_minus).cloned().collect();
    checks.push(v("equal dimensions", d_plus.len() == d_minus.len()));
    checks.push(v(
        "complementary",
        all.len() == n && all.iter().all(|x| x.len() == n) && rank(&RMat::from_columns(n, &all)) == n,
    ));
    if checks.iter().any(|c| !c.ok) {
        return EllSymplecticVerdict::from_checks(checks, None);
    }
    checks.push(v("D_+ subalgebra", is_subalgebra(d_plus, g)));
    checks.push(v("D_- subalgebra", is_subalgebra(d_minus, g)));
    checks.push(v("w nondegenerate on D_+", restricted_nondegenerate(w, d_plus)));
    checks.push(v("w nondegenerate on D_-", restricted_nondegenerate(w, d_minus)));
    let orth = d_plus
        .iter()
        .all(|x| d_minus.iter().all(|y| w.bilinear(x, y) == q(0)));
    checks.push(v("D_+ and D_- w-orthogonal", orth));
    let p = RMat::from_columns(n, &all);
    let signs: Vec<Rational> = (0..n)
        .map(|i| if i < d_plus.len() { q(1) } else { q(-1) })
        .collect();
    let a = &(&p * &RMat::diagonal(&signs)) * &inverse(&p).expect("basis");
    let theta = (&flat(w) * &a).transpose();
    checks.push(v("theta skew", theta.is_skew()));
    if theta.is_skew() {
        checks.push(v("theta closed", d_closed_2form(&theta, g)));
        checks.push(v("theta nondegenerate", rank(&theta) == n));
        let wf = flat(w);
        checks.push(v("A^2 = id", (&a * &a).is_identity()));
        checks.push(v("A split", is_split(&a)));
        checks.push(v("A symmetric for w", &wf * &a == &a.transpose() * &wf));
    }
    EllSymplecticVerdict::from_checks(checks, Some(theta))
}

// ---------------------------------------------------------------------------
// The worked example on the Heisenberg group times a line

/// Matrices of the worked example on `H x R`.
#[derive(Clone, Debug)]
pub struct HeisenbergDemo {
    pub g: LieAlgebraData,
    /// `J = diag(i, i)`.
    pub j: RMat,
    /// `R = diag(r, r)`.
    pub r: RMat,
    /// `D = [[0, d], [d, 0]]` with `d = [[0, -r], [r, 0]]`.
    pub d: RMat,
    /// `S = diag(R, -R)`.
    pub s: BlockEndo,
    /// `T = [[0, -I], [I, 0]]`.
    pub t: RMat,
    /// Gram matrix of `e^1 ^ e^2 + e^3 ^ e^4`, which is not closed.
    pub theta_e: RMat,
}

fn small_i() -> RMat {
    RMat::from_i64(&[&[0, -1], &[1, 0]])
}

fn small_r() -> RMat {
    RMat::from_i64(&[&[1, 0], &[0, -1]])
}

pub fn heisenberg_demo() -> HeisenbergDemo {
    let i = small_i();
    let r = small_r();
    let j = RMat::block_diag(&[&i, &i]);
    let rr = RMat::block_diag(&[&r, &r]);
    let z2 = RMat::zeros(2, 2);
    let i2 = RMat::identity(2);
    let d = RMat::block2(&z2, &-&r, &r, &z2);
    let z4 = RMat::zeros(4, 4);
    let dd = RMat::block2(&z4, &d, &d, &z4);
    let t = RMat::block2(&z2, &-&i2, &i2, &z2);
    let s = lift_tensor(&rr).expect("square");
    let mut theta_e = RMat::zeros(4, 4);
    theta_e[(0, 1)] = q(1);
    theta_e[(1, 0)] = q(-1);
    theta_e[(2, 3)] = q(1);
    theta_e[(3, 2)] = q(-1);
    HeisenbergDemo {
        g: heisenberg_times_line(),
        j,
        r: rr,
        d: dd,
        s,
        t,
        theta_e,
    }
}

impl HeisenbergDemo {
    /// `S(t) = (c R, -s T; s T, -c R)` for the circle point `(c, s) = (cos 2t, sin 2t)`.
    pub fn s_of(&self, c2: &Rational, s2: &Rational) -> Result<BlockEndo> {
        if c2 * c2 + s2 * s2 != q(1) {
            return Err(Error::NotACirclePoint {
                c: crate::json::rational_to_string(c2),
                s: crate::json::rational_to_string(s2),
            });
        }
        BlockEndo::from_blocks(
            &self.r.scale(c2),
            &self.t.scale(&-s2.clone()),
            &self.t.scale(s2),
            &self.r.scale(&-c2.clone()),
        )
    }

    /// `e^{tD} = cos t I + sin t D` for the circle point `(cos t, sin t)`.
    pub fn exp_td(&self, c: &Rational, s: &Rational) -> RMat {
        &RMat::identity(8).scale(c) + &self.d.scale(s)
    }

    /// The pattern of left-invariant symplectic forms on `H x R`:
    /// `[[0, c, a, b], [-c, 0, -b, a], [-a, b, 0, 0], [-b, -a, 0, 0]]`
    /// (upper signs).
    pub fn symplectic_pattern(a: &Rational, b: &Rational, c: &Rational) -> RMat {
        let z = q(0);
        RMat::from_rows(vec![
            vec![z.clone(), c.clone(), a.clone(), b.clone()],
            vec![-c.clone(), z.clone(), -b.clone(), a.clone()],
            vec![-a.clone(), b.clone(), z.clone(), z.clone()],
            vec![-b.clone(), -a.clone(), z.clone(), z],
        ])
    }
}

/// Result of one attempted decomposition `S = B_b L B_b^{-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Decomposition {
    Unobstructed {
        /// Gram matrix of the closed B-field form.
        #[serde(serialize_with = "crate::json::ser_rmat")]
        b: RMat,
        /// The trivial member `L = B_b^{-1} S B_b`.
        #[serde(serialize_with = "crate::json::ser_rmat_block")]
        lift: BlockEndo,
    },
    Obstructed {
        reason: String,
    },
}

impl Decomposition {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Decomposition::Obstructed { .. })
    }
}

/// Both decompositions and the overall verdict: obstructed exactly when
/// neither an anti-diagonal nor a diagonal trivial member is B-field
/// conjugate to `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub anti_diagonal: Decomposition,
    pub diagonal: Decomposition,
    pub obstructed: bool,
}

/// Skew `n x n` matrix from its strictly upper entries in row order.
fn skew_from_params(n: usize, x: &[Rational]) -> RMat {
    let mut m = RMat::zeros(n, n);
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = x[t].clone();
            m[(j, i)] = -x[t].clone();
            t += 1;
        }
    }
    m
}

/// Solves `F(b) = 0` for an affine `F` of a skew matrix `b`, returning a
/// particular solution and the dimension of the solution space.
fn solve_affine_skew(
    n: usize,
    f: impl Fn(&RMat) -> Vec<Rational>,
) -> Option<(RMat, usize)> {
    let p = n * (n - 1) / 2;
    let f0 = f(&RMat::zeros(n, n));
    let mut cols = Vec::with_capacity(p);
    for t in 0..p {
        let mut x = vec![q(0); p];
        x[t] = q(1);
        let ft = f(&skew_from_params(n, &x));
        cols.push(ft.iter().zip(&f0).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    let l = RMat::from_columns(f0.len(), &cols);
    let rhs: Vec<Rational> = f0.iter().map(|x| -x.clone()).collect();
    let x = solve(&l, &rhs)?;
    let free = kernel_basis(&l).len();
    Some((skew_from_params(n, &x), free))
}

fn entries(m: &RMat) -> Vec<Rational> {
    m.entries().cloned().collect()
}

fn closedness_equations(b: &RMat, g: &LieAlgebraData) -> Vec<Rational> {
    let d = g.dim;
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                out.push(d_2form(b, g, i, j, k));
            }
        }
    }
    out
}

/// Tries to write `S` as a closed B-field transform of a trivial member: an
/// anti-diagonal lift of an integrable `(0, ell)`-structure, or a diagonal
/// lift of an integrable `(1, 0)`-structure. Both conditions on the B-field
/// form `b` are linear, so each attempt is an exact linear solve followed by
/// verification of the resulting member.
pub fn nontrivial_obstruction(
    s: &BlockEndo,
    j: &RMat,
    g: &LieAlgebraData,
    ell: i32,
) -> Result<ObstructionReport> {
    let n = s.n();
    if n != g.dim || j.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: g.dim,
            found: n,
        });
    }
    let (s11, s12, s21, s22) = (s.a(), s.b(), s.c(), s.d());
    // B^{-1} S B with B = (I, 0; b_flat, I) has blocks
    // (S11 + S12 b, S12; S21 + S22 b - b S11 - b S12 b, S22 - b S12).
    let conj = |b: &RMat| -> BlockEndo {
        let bi = crate::slash::bfield_matrix(&-b).expect("skew");
        let bb = crate::slash::bfield_matrix(b).expect("skew");
        &(&bi * s) * &bb
    };
    let anti = {
        let solved = solve_affine_skew(n, |b| {
            let bf = flat(b);
            let mut eq = entries(&(&s11 + &(&s12 * &bf)));
            eq.extend(entries(&(&s22 - &(&bf * &s12))));
            eq.extend(closedness_equations(b, g));
            eq
        });
        match solved {
            None => Decomposition::Obstructed {
                reason: "no closed two-form b makes the diagonal blocks of B_b^{-1} S B_b vanish"
                    .into(),
            },
            Some((b, free)) => {
                let lift = conj(&b);
                let theta = lift.c().transpose();
                let ok_shape = lift.is_anti_diagonal() && inverse(&lift.c()).is_some();
                let rep = check_slash_complex(&lift, j, 1, ell)?;
                if !crate::slash::bfield_preserves(&b, j, 1, ell) {
                    Decomposition::Obstructed {
                        reason: "the forced b does not have the symmetry type that preserves J_ell".into(),
                    }
                } else if ok_shape && rep.passed() && d_closed_2form(&theta, g) {
                    Decomposition::Unobstructed { b, lift }
                } else {
                    Decomposition::Obstructed {
                        reason: format!(
                            "the anti-diagonal member forced by b is not an integrable lift \
                             (solution space dimension {free})"
                        ),
                    }
                }
            }
        }
    };
    let diag = if !s12.is_zero() {
        Decomposition::Obstructed {
            reason: "upper-right block of B_b^{-1} S B_b equals that of S, which is nonzero".into(),
        }
    } else {
        let solved = solve_affine_skew(n, |b| {
            let bf = flat(b);
            let mut eq = entries(&(&(&s21 + &(&s22 * &bf)) - &(&bf * &s11)));
            eq.extend(closedness_equations(b, g));
            eq
        });
        match solved {
            None => Decomposition::Obstructed {
                reason: "no closed two-form b makes the lower-left block of B_b^{-1} S B_b vanish"
                    .into(),
            },
            Some((b, free)) => {
                let lift = conj(&b);
                let r = lift.a();
                let rep = check_slash_complex(&lift, j, 1, ell)?;
                let plus = eigenspace(&r, &q(1));
                let minus = eigenspace(&r, &q(-1));
                if !crate::slash::bfield_preserves(&b, j, 1, ell) {
                    Decomposition::Obstructed {
                        reason: "the forced b does not have the symmetry type that preserves J_ell".into(),
                    }
                } else if lift.is_diagonal()
                    && lift.d() == -r.transpose()
                    && rep.passed()
                    && is_subalgebra(&plus, g)
                    && is_subalgebra(&minus, g)
                {
                    Decomposition::Unobstructed { b, lift }
                } else {
                    Decomposition::Obstructed {
                        reason: format!(
                            "the diagonal member forced by b is not an integrable lift \
                             (solution space dimension {free})"
                        ),
                    }
                }
            }
        }
    };
    let obstructed = anti.is_obstructed() && diag.is_obstructed();
    Ok(ObstructionReport {
        anti_diagonal: anti,
        diagonal: diag,
        obstructed,
    })
}

/// Whether the structure is trivial in the sense used for the circle family:
/// `sin 4t = 2 sin 2t cos 2t = 0`.
pub fn circle_point_is_trivial(c2: &Rational, s2: &Rational) -> bool {
    c2 * s2 == q(0)
}

/// Complex conjugate vectors for the `-i` space of a real matrix.
pub fn conjugate_basis(v: &[Vec<GaussianRational>]) -> Vec<Vec<GaussianRational>> {
    v.iter()
        .map(|x| x.iter().map(|z| z.conj()).collect())
        .collect()
}
