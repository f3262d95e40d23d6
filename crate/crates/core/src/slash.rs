//! Slash structures: verifiers, signatures, lifts, block decompositions and
//! B-fields.
//!
//! Everything here is pointwise linear algebra on `E = V + V*`. Courant
//! integrability needs Lie algebra data and lives in [`crate::lie`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::{
    b_adjoint, flat, flat_inverse, is_split, make_i, make_j, pairing_gram, BlockEndo,
};
use crate::linalg::{eigenspace, hermitian_inertia, inverse, Inertia};
use crate::matrix::RMat;
use crate::scalars::{q, Rational};

/// Which fixed structure the slash structure is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Complex,
    Symplectic,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Complex => "complex",
            Side::Symplectic => "symplectic",
        })
    }
}

/// A pair of vectors of `E` that exhibits a failed clause.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "crate::json::ser_rational_vec")]
    pub x: Vec<Rational>,
    #[serde(serialize_with = "crate::json::ser_rational_vec")]
    pub y: Vec<Rational>,
}

/// Outcome of the algebraic checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlashReport {
    pub side: Option<Side>,
    pub lambda: i32,
    pub ell: Option<i32>,
    pub squares_ok: bool,
    pub skew_ok: bool,
    pub split_ok: bool,
    pub compat_ok: bool,
    /// Verdict of the sesquilinear form criterion, where one applies.
    pub form_criterion_ok: Option<bool>,
    /// The first failed clause.
    pub clause: Option<String>,
    pub failure_witness: Option<Witness>,
}

impl SlashReport {
    pub fn passed(&self) -> bool {
        self.squares_ok && self.skew_ok && self.split_ok && self.compat_ok
    }

    fn fail(&mut self, clause: &str, w: Option<Witness>) {
        if self.clause.is_none() {
            self.clause = Some(clause.to_string());
            self.failure_witness = w;
        }
    }
}

pub const CLAUSE_SQUARE: &str = "S^2 = lambda id";
pub const CLAUSE_SKEW: &str = "skew-symmetry for b";
pub const CLAUSE_SPLIT: &str = "splitness of S";
pub const CLAUSE_ANTICOMMUTE: &str = "anticommutation with J_ell";
pub const CLAUSE_COMMUTE: &str = "commutation with I_k";
pub const CLAUSE_I_SPLIT: &str = "splitness of I_k S";

fn check_sign(x: i32, what: &str) -> Result<()> {
    if x == 1 || x == -1 {
        Ok(())
    } else {
        Err(Error::InvalidLabel(format!("{what} must be +1 or -1, got {x}")))
    }
}

/// First standard basis vector not killed by `m`, with its image.
fn nonzero_column(m: &RMat) -> Option<Witness> {
    (0..m.cols()).find_map(|j| {
        let col = m.column(j);
        if col.iter().all(|x| *x == q(0)) {
            None
        } else {
            let mut e = vec![q(0); m.cols()];
            e[j] = q(1);
            Some(Witness { x: e, y: col })
        }
    })
}

/// A pair of basis vectors with `b(Sx, y) + b(x, Sy) != 0`.
fn skew_witness(s: &BlockEndo) -> Option<Witness> {
    let g = pairing_gram(s.n());
    let defect = &(&s.matrix().transpose() * &g) + &(&g * s.matrix());
    let dim = 2 * s.n();
    for i in 0..dim {
        for j in 0..dim {
            if defect[(i, j)] != q(0) {
                let mut x = vec![q(0); dim];
                let mut y = vec![q(0); dim];
                x[i] = q(1);
                y[j] = q(1);
                return Some(Witness { x, y });
            }
        }
    }
    None
}

fn split_witness(m: &RMat) -> Witness {
    let plus = eigenspace(m, &q(1));
    let minus = eigenspace(m, &q(-1));
    let zero = vec![q(0); m.rows()];
    Witness {
        x: plus.first().cloned().unwrap_or_else(|| zero.clone()),
        y: minus.first().cloned().unwrap_or(zero),
    }
}

/// `S^2 = lambda id`, `S* = -S` and, for `lambda = 1`, splitness.
pub fn check_generalized(s: &BlockEndo, lambda: i32) -> SlashReport {
    let mut rep = SlashReport {
        side: None,
        lambda,
        ell: None,
        squares_ok: true,
        skew_ok: true,
        split_ok: true,
        compat_ok: true,
        form_criterion_ok: None,
        clause: None,
        failure_witness: None,
    };
    let sq = s * s;
    let defect = sq.matrix() - &RMat::scalar(2 * s.n(), q(lambda as i64));
    if !defect.is_zero() {
        rep.squares_ok = false;
        rep.fail(CLAUSE_SQUARE, nonzero_column(&defect));
    }
    if b_adjoint(s) != -s {
        rep.skew_ok = false;
        rep.fail(CLAUSE_SKEW, skew_witness(s));
    }
    if lambda == 1 && !is_split(s.matrix()) {
        rep.split_ok = false;
        rep.fail(CLAUSE_SPLIT, Some(split_witness(s.matrix())));
    }
    rep
}

/// `b_l(Sx, Sy) = -lambda conj(b_l(x, y))` on a basis.
///
/// With `b_l = b - i b(., J_l .)` the real and imaginary parts give
/// `S^T G S = -lambda G` and `S^T G J_l S = lambda G J_l`.
pub fn form_criterion_complex(s: &BlockEndo, j: &RMat, lambda: i32, ell: i32) -> Result<bool> {
    let jl = make_j(j, ell)?;
    let g = pairing_gram(s.n());
    let st = s.matrix().transpose();
    let lam = q(lambda as i64);
    let re = &(&st * &g) * s.matrix() == g.scale(&-lam.clone());
    let gj = &g * jl.matrix();
    let im = &(&st * &gj) * s.matrix() == gj.scale(&lam);
    Ok(re && im)
}

/// `b_k(Sx, Sy) = -lambda b_k(x, y)` on a basis, `k = lambda ell`.
pub fn form_criterion_symplectic(
    s: &BlockEndo,
    w: &RMat,
    lambda: i32,
    ell: i32,
) -> Result<bool> {
    let ik = make_i(w, lambda * ell)?;
    let g = pairing_gram(s.n());
    let st = s.matrix().transpose();
    let lam = q(-(lambda as i64));
    let re = &(&st * &g) * s.matrix() == g.scale(&lam);
    let gi = &g * ik.matrix();
    let other = &(&st * &gi) * s.matrix() == gi.scale(&lam);
    Ok(re && other)
}

fn require_dim(s: &BlockEndo, m: &RMat) -> Result<()> {
    if m.rows() != s.n() || m.cols() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: m.rows(),
        });
    }
    Ok(())
}

/// Algebraic conditions for an integrable `(lambda, ell)`-structure on `(V, j)`.
pub fn check_slash_complex(s: &BlockEndo, j: &RMat, lambda: i32, ell: i32) -> Result<SlashReport> {
    check_sign(lambda, "lambda")?;
    check_sign(ell, "ell")?;
    let jl = make_j(j, ell)?;
    require_dim(s, j)?;
    let mut rep = check_generalized(s, lambda);
    rep.side = Some(Side::Complex);
    rep.ell = Some(ell);
    let anti = s.anticommutator(&jl);
    if !anti.is_zero() {
        rep.compat_ok = false;
        rep.fail(CLAUSE_ANTICOMMUTE, nonzero_column(anti.matrix()));
    }
    rep.form_criterion_ok = Some(form_criterion_complex(s, j, lambda, ell)?);
    Ok(rep)
}

/// Algebraic conditions for an integrable `(lambda, ell)`-structure on `(V, w)`.
///
/// `split_ok` covers both the splitness of `S` and, when `ell = 1`, that of
/// `I_{lambda ell} S`; for `ell = -1` the latter squares to `-id` and is not
/// tested.
pub fn check_slash_symplectic(
    s: &BlockEndo,
    w: &RMat,
    lambda: i32,
    ell: i32,
) -> Result<SlashReport> {
    check_sign(lambda, "lambda")?;
    check_sign(ell, "ell")?;
    let ik = make_i(w, lambda * ell)?;
    require_dim(s, w)?;
    let mut rep = check_generalized(s, lambda);
    rep.side = Some(Side::Symplectic);
    rep.ell = Some(ell);
    let comm = s.commutator(&ik);
    let commutes = comm.is_zero();
    if !commutes {
        rep.fail(CLAUSE_COMMUTE, nonzero_column(comm.matrix()));
    }
    let mut i_split = true;
    if ell == 1 {
        let is = &ik * s;
        if !is_split(is.matrix()) {
            i_split = false;
            rep.split_ok = false;
            rep.fail(CLAUSE_I_SPLIT, Some(split_witness(is.matrix())));
        }
    }
    rep.compat_ok = commutes && i_split;
    rep.form_criterion_ok = Some(form_criterion_symplectic(s, w, lambda, ell)?);
    Ok(rep)
}

/// `n` together with the raw inertia of the symmetric form it was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureResult {
    pub n: usize,
    pub inertia: Inertia,
    /// Whether the inertia has the shape mandated for this kind of structure.
    pub shape_ok: bool,
}

fn not_slash(rep: &SlashReport) -> Error {
    Error::NotASlashStructure(
        rep.clause
            .clone()
            .unwrap_or_else(|| "algebraic conditions".into()),
    )
}

/// Gram matrix of `beta(x, y) = b(Tx, y)`.
fn beta_gram(t: &BlockEndo) -> RMat {
    &t.matrix().transpose() * &pairing_gram(t.n())
}

/// `sig(S)` for a `(1,1)`-structure on `(V, j)`, from `beta_S(x, y) = b(S J_+ x, y)`
/// of inertia `(2n, 4m - 2n, 0)`.
pub fn sig_complex_11(s: &BlockEndo, j: &RMat) -> Result<SignatureResult> {
    let rep = check_slash_complex(s, j, 1, 1)?;
    if !rep.passed() {
        return Err(not_slash(&rep));
    }
    let t = s * &make_j(j, 1)?;
    let gram = beta_gram(&t);
    debug_assert!(gram.is_symmetric());
    let inertia = hermitian_inertia(&gram);
    Ok(SignatureResult {
        n: inertia.p / 2,
        inertia,
        shape_ok: inertia.p % 2 == 0 && inertia.z == 0,
    })
}

/// `sig(S)` for a `(-1,1)`-structure on `(V, w)`, from `beta_S(x, y) = b(I_- S x, y)`
/// of inertia `(4n, 4m - 4n, 0)`.
pub fn sig_symplectic_m11(s: &BlockEndo, w: &RMat) -> Result<SignatureResult> {
    let rep = check_slash_symplectic(s, w, -1, 1)?;
    if !rep.passed() {
        return Err(not_slash(&rep));
    }
    let t = &make_i(w, -1)? * s;
    let gram = beta_gram(&t);
    debug_assert!(gram.is_symmetric());
    let inertia = hermitian_inertia(&gram);
    Ok(SignatureResult {
        n: inertia.p / 4,
        inertia,
        shape_ok: inertia.p % 4 == 0 && inertia.z == 0,
    })
}

/// `diag(r, -r^T)`.
pub fn lift_tensor(r: &RMat) -> Result<BlockEndo> {
    if !r.is_square() {
        return Err(Error::ShapeMismatch("tensor must be square".into()));
    }
    BlockEndo::diag(r, &-r.transpose())
}

/// `(0, lambda theta_flat^{-1}; theta_flat, 0)`.
pub fn lift_two_form(theta: &RMat, lambda: i32) -> Result<BlockEndo> {
    let inv = flat_inverse(theta)?;
    BlockEndo::anti_diag(&inv.scale(&q(lambda as i64)), &flat(theta))
}

/// The fixed structure: `j` on the complex side, `w` on the symplectic side.
#[derive(Clone, Debug, PartialEq)]
pub enum SideData {
    Complex(RMat),
    Symplectic(RMat),
}

impl SideData {
    pub fn side(&self) -> Side {
        match self {
            SideData::Complex(_) => Side::Complex,
            SideData::Symplectic(_) => Side::Symplectic,
        }
    }

    pub fn matrix(&self) -> &RMat {
        match self {
            SideData::Complex(m) | SideData::Symplectic(m) => m,
        }
    }
}

/// Runs the side-appropriate algebraic check.
pub fn check_slash(s: &BlockEndo, data: &SideData, lambda: i32, ell: i32) -> Result<SlashReport> {
    match data {
        SideData::Complex(j) => check_slash_complex(s, j, lambda, ell),
        SideData::Symplectic(w) => check_slash_symplectic(s, w, lambda, ell),
    }
}

/// A named conclusion and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub ok: bool,
}

fn verdict(name: &str, ok: bool) -> Verdict {
    Verdict {
        name: name.to_string(),
        ok,
    }
}

/// Data read off a diagonal and an anti-diagonal member, with the
/// conclusions of the interpolation theorems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interpolants {
    #[serde(skip)]
    pub r: RMat,
    /// Gram matrix of the two-form whose flat map is the lower-left block of `Q`.
    #[serde(skip)]
    pub theta: RMat,
    pub verdicts: Vec<Verdict>,
}

impl Interpolants {
    pub fn all_ok(&self) -> bool {
        self.verdicts.iter().all(|v| v.ok)
    }
}

/// Reads `r` and `theta` off `R = diag(r, t)` and `Q = (0, p; theta_flat, 0)`
/// and checks that they are `(lambda, 0)`- and `(0, ell)`-structures.
pub fn extract_interpolants(
    rr: &BlockEndo,
    qq: &BlockEndo,
    data: &SideData,
    lambda: i32,
    ell: i32,
) -> Result<Interpolants> {
    if !rr.is_diagonal() {
        return Err(Error::ShapeMismatch("R is not block diagonal".into()));
    }
    if !qq.is_anti_diagonal() {
        return Err(Error::ShapeMismatch("Q is not block anti-diagonal".into()));
    }
    for m in [rr, qq] {
        let rep = check_slash(m, data, lambda, ell)?;
        if !rep.passed() {
            return Err(not_slash(&rep));
        }
    }
    let n = rr.n();
    let lam = q(lambda as i64);
    let r = rr.a();
    let tflat = qq.c();
    let theta = tflat.transpose();
    let mut v = vec![
        verdict("t = -r^T", rr.d() == -r.transpose()),
        verdict("r^2 = lambda id", &r * &r == RMat::scalar(n, lam.clone())),
        verdict("theta skew", theta.is_skew()),
    ];
    let tinv = inverse(&tflat);
    v.push(verdict("theta nondegenerate", tinv.is_some()));
    let Some(tinv) = tinv else {
        return Ok(Interpolants {
            r,
            theta,
            verdicts: v,
        });
    };
    v.push(verdict("p = lambda theta_flat^{-1}", qq.b() == tinv.scale(&lam)));
    match data {
        SideData::Complex(j) => {
            v.push(verdict("r j = -j r", &r * j == -(j * &r)));
            if lambda == 1 {
                v.push(verdict("r split", is_split(&r)));
            }
            // theta(ju, v) = -ell theta(u, jv)
            let lhs = &tflat * j;
            let rhs = (&j.transpose() * &tflat).scale(&q(-(ell as i64)));
            let name = if ell == -1 {
                "j symmetric for theta"
            } else {
                "j skew-symmetric for theta"
            };
            v.push(verdict(name, lhs == rhs));
        }
        SideData::Symplectic(w) => {
            let wf = flat(w);
            v.push(verdict(
                "r skew-symmetric for w",
                &wf * &r == -(&r.transpose() * &wf),
            ));
            if lambda == 1 {
                v.push(verdict("r split", is_split(&r)));
            }
            let a = &flat_inverse(w)? * &tflat;
            v.push(verdict(
                "A^2 = ell id",
                &a * &a == RMat::scalar(n, q(ell as i64)),
            ));
            v.push(verdict("A symmetric for w", &wf * &a == &a.transpose() * &wf));
            if ell == 1 {
                v.push(verdict("A split", is_split(&a)));
            }
        }
    }
    Ok(Interpolants {
        r,
        theta,
        verdicts: v,
    })
}

/// `S = (A, pi_sharp; theta_flat, -A^T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrainicBlocks {
    pub a: RMat,
    pub theta: RMat,
    pub pi: RMat,
    pub lambda: i32,
}

/// Splits a generalized (para)complex structure into its tensor, two-form and
/// bivector blocks and checks the relations between them.
pub fn crainic_blocks(s: &BlockEndo, lambda: i32) -> Result<CrainicBlocks> {
    let a = s.a();
    let pi = s.b();
    let theta = s.c();
    let n = s.n();
    let rel = |ok: bool, name: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::NotASlashStructure(name.to_string()))
        }
    };
    rel(s.d() == -a.transpose(), "lower-right block = -A^T")?;
    rel(theta.is_skew(), "theta skew")?;
    rel(pi.is_skew(), "pi skew")?;
    rel(
        &(&a * &a) + &(&pi * &theta) == RMat::scalar(n, q(lambda as i64)),
        "A^2 + pi theta = lambda id",
    )?;
    rel(&theta * &a == &a.transpose() * &theta, "theta A = A^T theta")?;
    rel(&pi * &a.transpose() == &a * &pi, "pi A^T = A pi")?;
    Ok(CrainicBlocks {
        a,
        theta,
        pi,
        lambda,
    })
}

/// `S = (A, lambda ell B w_flat^{-1}; w_flat B, -A^T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSlashBlocks {
    pub a: RMat,
    pub b: RMat,
    pub omega: RMat,
    pub lambda: i32,
    pub ell: i32,
}

/// Tensor description of a slash structure on `(V, w)`.
pub fn symplectic_slash_blocks(
    s: &BlockEndo,
    w: &RMat,
    lambda: i32,
    ell: i32,
) -> Result<SymplecticSlashBlocks> {
    let rep = check_slash_symplectic(s, w, lambda, ell)?;
    if !rep.passed() {
        return Err(not_slash(&rep));
    }
    let n = s.n();
    let wf = flat(w);
    let winv = flat_inverse(w)?;
    let a = s.a();
    let b = &winv * &s.c();
    let rel = |ok: bool, name: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::NotASlashStructure(name.to_string()))
        }
    };
    let le = q((lambda * ell) as i64);
    rel(s.b() == (&b * &winv).scale(&le), "upper-right = lambda ell B w_flat^{-1}")?;
    rel(s.d() == -a.transpose(), "lower-right = -A^T")?;
    let lhs = &(&a * &a).scale(&q(lambda as i64)) + &(&b * &b).scale(&q(ell as i64));
    rel(lhs.is_identity(), "lambda A^2 + ell B^2 = id")?;
    rel(a.anticommutator(&b).is_zero(), "AB + BA = 0")?;
    rel(&wf * &a == -(&a.transpose() * &wf), "w_flat A = -A^T w_flat")?;
    if ell == 1 {
        let matriz = RMat::block2(&b, &a, &a.scale(&q(lambda as i64)), &b);
        let phi = RMat::block_diag(&[&RMat::identity(n), &wf]);
        let phi_inv = RMat::block_diag(&[&RMat::identity(n), &winv]);
        let conj = &(&(&phi_inv * s.matrix()) * make_i(w, lambda)?.matrix()) * &phi;
        rel(
            conj.scale(&q(lambda as i64)) == matriz,
            "lambda phi^{-1} S I_lambda phi = [[B, A], [lambda A, B]]",
        )?;
        rel(is_split(&matriz), "[[B, A], [lambda A, B]] split")?;
    }
    Ok(SymplecticSlashBlocks {
        a,
        b,
        omega: w.clone(),
        lambda,
        ell,
    })
}

/// `B_w = (id, 0; w_flat, id)`.
pub fn bfield_matrix(w2: &RMat) -> Result<BlockEndo> {
    if !w2.is_skew() {
        return Err(Error::ShapeMismatch("B-field form is not skew".into()));
    }
    let n = w2.rows();
    let id = RMat::identity(n);
    BlockEndo::from_blocks(&id, &RMat::zeros(n, n), &flat(w2), &id)
}

/// `B_w S B_{-w}`.
pub fn bfield(w2: &RMat, s: &BlockEndo) -> Result<BlockEndo> {
    if w2.rows() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: w2.rows(),
        });
    }
    let b = bfield_matrix(w2)?;
    let binv = bfield_matrix(&-w2)?;
    debug_assert!((&b_adjoint(&b) * &b).is_scalar(1));
    Ok(&(&b * s) * &binv)
}

/// Whether `B_w` commutes with `J_ell`, i.e. `w_flat j = ell j^T w_flat`.
pub fn bfield_preserves(w2: &RMat, j: &RMat, _lambda: i32, ell: i32) -> bool {
    let wf = flat(w2);
    &wf * j == (&j.transpose() * &wf).scale(&q(ell as i64))
}

/// `S(u + s) = (u + pi_sharp s, -s)` with `pi_sharp = P^T` for the Gram matrix `P`.
pub fn poisson_lift(pi: &RMat) -> Result<BlockEndo> {
    if !pi.is_skew() {
        return Err(Error::ShapeMismatch("bivector is not skew".into()));
    }
    let n = pi.rows();
    let id = RMat::identity(n);
    BlockEndo::from_blocks(&id, &pi.transpose(), &RMat::zeros(n, n), &-&id)
}
