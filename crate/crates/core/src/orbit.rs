//! Orbits of slash structures under the group preserving `b` and the fixed
//! structure `J_ell` (complex side) or `I_k` (symplectic side).
//!
//! Each orbit has a representative written in model coordinates: `C^{2m}` or
//! `L^{2m}` viewed as `R^{4m}`. A complex vector `X + iY` is the real column
//! `(X, Y)`, a Lorentz vector `x e + y ebar` is `(x, y)`. A [`Frame`] is a
//! real isomorphism from the model to `E` that intertwines the scalar action
//! with `J_ell` or `I_k` and pulls `b` back to the real part of the standard
//! model form.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{make_i, make_j, pairing_gram, BlockEndo};
use crate::linalg::{
    darboux_basis, eigenspace, inverse, kernel_basis, orthogonal_basis, quaternion_hermitian_inertia,
    rank, standard_symplectic, Inertia,
};
use crate::matrix::{CMat, Matrix, RMat};
use crate::scalars::{q, qf, rational_to_f64, GaussianRational, Rational, RationalQuaternion, Ring};
use crate::slash::{check_slash, sig_complex_11, sig_symplectic_m11, Side, SideData};

/// Names one row of the classification tables for a given `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub side: Side,
    pub lambda: i32,
    pub ell: i32,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
}

impl std::fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({},{}", self.side, self.lambda, self.ell)?;
        if let Some(n) = self.n {
            write!(f, ";{n}")?;
        }
        write!(f, ") m={}", self.m)
    }
}

fn has_sig(side: Side, lambda: i32, ell: i32) -> bool {
    matches!(
        (side, lambda, ell),
        (Side::Complex, 1, 1) | (Side::Symplectic, -1, 1)
    )
}

impl OrbitLabel {
    pub fn new(side: Side, lambda: i32, ell: i32, m: usize, n: Option<usize>) -> Result<Self> {
        let l = Self {
            side,
            lambda,
            ell,
            m,
            n,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLabel(msg));
        if ![1, -1].contains(&self.lambda) || ![1, -1].contains(&self.ell) {
            return bad(format!("lambda and ell must be +1 or -1 in {self}"));
        }
        if self.m == 0 {
            return bad("m must be positive".into());
        }
        match (has_sig(self.side, self.lambda, self.ell), self.n) {
            (true, None) => return bad(format!("{self} needs a signature n")),
            (false, Some(_)) => return bad(format!("{self} carries no signature")),
            (true, Some(n)) => {
                let max = if self.side == Side::Complex { 2 * self.m } else { self.m };
                if n > max {
                    return bad(format!("n = {n} out of range 0..={max}"));
                }
            }
            _ => {}
        }
        if self.side == Side::Complex && self.lambda == -1 && self.ell == -1 && self.m % 2 == 1 {
            return bad(format!("{self} requires m even"));
        }
        Ok(())
    }

    /// `ell` on the complex side, `k = lambda ell` on the symplectic side.
    pub fn structure_param(&self) -> i32 {
        match self.side {
            Side::Complex => self.ell,
            Side::Symplectic => self.lambda * self.ell,
        }
    }
}

/// Every label with the given `m`, all admissible `n` included.
pub fn all_labels(m: usize) -> Vec<OrbitLabel> {
    let mut out = Vec::new();
    for side in [Side::Complex, Side::Symplectic] {
        for (lambda, ell) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            if has_sig(side, lambda, ell) {
                let max = if side == Side::Complex { 2 * m } else { m };
                for n in 0..=max {
                    out.push(OrbitLabel::new(side, lambda, ell, m, Some(n)).expect("valid"));
                }
            } else if let Ok(l) = OrbitLabel::new(side, lambda, ell, m, None) {
                out.push(l);
            }
        }
    }
    out
}

/// The groups `G` and `H` of the table row.
pub fn group_names(label: &OrbitLabel) -> Result<(String, String)> {
    label.validate()?;
    let m = label.m;
    let n = label.n.unwrap_or(0);
    Ok(match (label.side, label.lambda, label.ell) {
        (Side::Complex, 1, 1) => (format!("O({},C)", 2 * m), format!("O({n},{})", 2 * m - n)),
        (Side::Complex, 1, -1) => (format!("U({m},{m})"), format!("Sp({m},R)")),
        (Side::Complex, -1, 1) => (format!("O({},C)", 2 * m), format!("SO*({})", 2 * m)),
        (Side::Complex, _, _) => (format!("U({m},{m})"), format!("Sp({},{})", m / 2, m / 2)),
        (Side::Symplectic, 1, 1) => (format!("Gl({},R)", 2 * m), format!("Gl({m},R) x Gl({m},R)")),
        (Side::Symplectic, 1, -1) => (format!("U({m},{m})"), format!("Gl({m},C)")),
        (Side::Symplectic, -1, 1) => (
            format!("U({m},{m})"),
            format!("U({n},{}) x U({},{n})", m - n, m - n),
        ),
        (Side::Symplectic, _, _) => (format!("Gl({},R)", 2 * m), format!("Gl({m},C)")),
    })
}

/// `dim G - dim H` from the real dimensions of the classical groups.
pub fn group_dimension(label: &OrbitLabel) -> Result<usize> {
    label.validate()?;
    let m = label.m;
    let o_c = |k: usize| k * (k - 1); // O(k, C)
    let o_real = |k: usize| k * (k.saturating_sub(1)) / 2; // O(p, q), p + q = k
    let u = |k: usize| k * k; // U(p, q), p + q = k
    let gl_r = |k: usize| k * k;
    let gl_c = |k: usize| 2 * k * k;
    let sp_r = |k: usize| k * (2 * k + 1);
    let so_star = |k: usize| k * (k - 1) / 2; // SO*(k), k even
    let sp_pq = |k: usize| k * (2 * k + 1); // Sp(p, q), p + q = k
    let (g, h) = match (label.side, label.lambda, label.ell) {
        (Side::Complex, 1, 1) => (o_c(2 * m), o_real(2 * m)),
        (Side::Complex, 1, -1) => (u(2 * m), sp_r(m)),
        (Side::Complex, -1, 1) => (o_c(2 * m), so_star(2 * m)),
        (Side::Complex, _, _) => (u(2 * m), sp_pq(m)),
        (Side::Symplectic, 1, 1) => (gl_r(2 * m), 2 * gl_r(m)),
        (Side::Symplectic, 1, -1) => (u(2 * m), gl_c(m)),
        (Side::Symplectic, -1, 1) => (u(2 * m), u(m) + u(m)),
        (Side::Symplectic, _, _) => (gl_r(2 * m), gl_c(m)),
    };
    Ok(g - h)
}

// ---------------------------------------------------------------------------
// Model coordinates

/// Scalar algebra of the model space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelAlgebra {
    Complex,
    Lorentz,
}

/// `[[0, -I], [I, 0]]` of size `2k`.
pub fn standard_complex_structure(k: usize) -> RMat {
    let z = RMat::zeros(k, k);
    let i = RMat::identity(k);
    RMat::block2(&z, &-&i, &i, &z)
}

/// Multiplication by `i` (resp. `eps`) on the real model `R^{4m}`.
fn model_scalar(alg: ModelAlgebra, m: usize) -> RMat {
    match alg {
        ModelAlgebra::Complex => standard_complex_structure(2 * m),
        ModelAlgebra::Lorentz => {
            let mut d = vec![q(-1); 2 * m];
            d.extend(vec![q(1); 2 * m]);
            RMat::diagonal(&d)
        }
    }
}

/// Real part of the standard model form, as a Gram matrix on `R^{4m}`.
fn model_gram(side: Side, param: i32, m: usize) -> RMat {
    let id = RMat::identity(m);
    let z = RMat::zeros(m, m);
    match (side, param) {
        // conj(z) z' - conj(w) w'
        (Side::Complex, -1) => {
            let d = RMat::block2(&id, &z, &z, &-&id);
            RMat::block_diag(&[&d, &d])
        }
        // Z^T Z'
        (Side::Complex, _) => {
            let i2 = RMat::identity(2 * m);
            RMat::block_diag(&[&i2, &-&i2])
        }
        // conj(z) w' + conj(w) z'
        (Side::Symplectic, -1) => {
            let a = RMat::block2(&z, &id, &id, &z);
            RMat::block_diag(&[&a, &a])
        }
        // conj(Z) Z' over L, whose real part is (y.x' + x.y') / 2
        (Side::Symplectic, _) => {
            let z2 = RMat::zeros(2 * m, 2 * m);
            let h = RMat::scalar(2 * m, qf(1, 2));
            RMat::block2(&z2, &h, &h, &z2)
        }
    }
}

/// Real matrix of `Z -> A Z + B conj(Z)` on `C^N`.
pub fn semilinear_map(a: &CMat, b: &CMat) -> RMat {
    let (ar, ai, br, bi) = (a.real_part(), a.imag_part(), b.real_part(), b.imag_part());
    RMat::block2(&(&ar + &br), &(&bi - &ai), &(&ai + &bi), &(&ar - &br))
}

/// The value `B(x, y) = Re B(x, y) - i Re B(x, s y)` of the sesquilinear form
/// determined by its real part `gm` and the scalar action `s`.
fn model_form(gm: &RMat, s: &RMat, x: &[Rational], y: &[Rational]) -> GaussianRational {
    let sy = s.mul_vec(y);
    GaussianRational::new(gm.bilinear(x, y), -gm.bilinear(x, &sy))
}

/// A real isomorphism from the model space to `E`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub side: Side,
    /// `ell` or `k`.
    pub param: i32,
    pub m: usize,
    pub algebra: ModelAlgebra,
    pub phi: RMat,
    pub phi_inv: RMat,
    /// Gram matrix of the real part of the model form.
    pub gm: RMat,
    /// Scalar action on the model.
    pub mi: RMat,
    /// `J_ell` or `I_k` on `E`.
    pub structure: BlockEndo,
}

impl Frame {
    pub fn to_model(&self, s: &RMat) -> RMat {
        &(&self.phi_inv * s) * &self.phi
    }

    pub fn from_model(&self, s: &RMat) -> RMat {
        &(&self.phi * s) * &self.phi_inv
    }
}

/// `P` with `j = P j_std P^{-1}`, built from a greedy complex basis.
fn complex_adapted_basis(j: &RMat) -> RMat {
    let n = j.rows();
    let k = n / 2;
    let mut vs: Vec<Vec<Rational>> = Vec::new();
    let mut span: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        if vs.len() == k {
            break;
        }
        let mut e = vec![q(0); n];
        e[i] = q(1);
        let je = j.mul_vec(&e);
        let mut trial = span.clone();
        trial.push(e.clone());
        trial.push(je);
        if rank(&RMat::from_columns(n, &trial)) == trial.len() {
            vs.push(e);
            span = trial;
        }
    }
    let mut cols = vs.clone();
    cols.extend(vs.iter().map(|v| j.mul_vec(v)));
    RMat::from_columns(n, &cols)
}

fn standard_phi(side: Side, param: i32, m: usize, structure: &BlockEndo, w_std: &RMat) -> RMat {
    let nv = 2 * m;
    let dim = 2 * nv;
    let unit = |i: usize| {
        let mut v = vec![q(0); dim];
        v[i] = q(1);
        v
    };
    let half = qf(1, 2);
    let comb = |a: usize, ca: Rational, b: usize, cb: Rational| {
        let mut v = unit(a);
        v[a] = ca;
        v[b] = &v[b] + cb;
        v
    };
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(dim);
    match (side, param) {
        (Side::Complex, -1) => {
            for s in 0..m {
                cols.push(comb(s, q(1), nv + s, half.clone()));
            }
            for s in 0..m {
                cols.push(comb(s, q(1), nv + s, -half.clone()));
            }
        }
        (Side::Complex, _) => {
            for a in 0..nv {
                cols.push(comb(a, q(1), nv + a, half.clone()));
            }
        }
        (Side::Symplectic, -1) => {
            for s in 0..m {
                cols.push(unit(s));
            }
            for s in 0..m {
                cols.push(unit(nv + s));
            }
        }
        (Side::Symplectic, _) => {
            // x e -> u - w_flat u, y ebar -> c + w_flat c with c = W y / 4
            let wf = w_std.transpose();
            for a in 0..nv {
                let mut u = vec![q(0); nv];
                u[a] = q(1);
                let f = wf.mul_vec(&u);
                let mut v = u.clone();
                v.extend(f.iter().map(|t| -t.clone()));
                cols.push(v);
            }
            for a in 0..nv {
                let c: Vec<Rational> = w_std.column(a).iter().map(|t| t * qf(1, 4)).collect();
                let f = wf.mul_vec(&c);
                let mut v = c.clone();
                v.extend(f);
                cols.push(v);
            }
            return RMat::from_columns(dim, &cols);
        }
    }
    let first: Vec<Vec<Rational>> = cols.clone();
    for c in &first {
        cols.push(structure.matrix().mul_vec(c));
    }
    RMat::from_columns(dim, &cols)
}

/// The frame for `(V, j)` with `param = ell`, or `(V, w)` with `param = k`.
pub fn frame(data: &SideData, param: i32) -> Result<Frame> {
    if param != 1 && param != -1 {
        return Err(Error::InvalidLabel(format!("structure parameter must be +1 or -1, got {param}")));
    }
    let mat = data.matrix();
    let nv = mat.rows();
    if nv == 0 || nv % 2 == 1 || !mat.is_square() {
        return Err(Error::ShapeMismatch("fixed structure must be square of even size".into()));
    }
    let m = nv / 2;
    let side = data.side();
    let (structure, lift, std_structure, w_std) = match data {
        SideData::Complex(j) => {
            let structure = make_j(j, param)?;
            let p = complex_adapted_basis(j);
            let j_std = standard_complex_structure(m);
            (structure, p, make_j(&j_std, param)?, RMat::zeros(nv, nv))
        }
        SideData::Symplectic(w) => {
            let structure = make_i(w, param)?;
            let p = darboux_basis(w, &q(1))?;
            let w_std = standard_symplectic(m, &q(1));
            (structure, p, make_i(&w_std, param)?, w_std)
        }
    };
    let lift_inv_t = inverse(&lift).expect("basis").transpose();
    let l = BlockEndo::diag(&lift, &lift_inv_t)?;
    let phi_std = standard_phi(side, param, m, &std_structure, &w_std);
    let phi = l.matrix() * &phi_std;
    let phi_inv = inverse(&phi).ok_or_else(|| Error::DegenerateForm("frame is singular".into()))?;
    let algebra = if side == Side::Symplectic && param == 1 {
        ModelAlgebra::Lorentz
    } else {
        ModelAlgebra::Complex
    };
    let f = Frame {
        side,
        param,
        m,
        algebra,
        phi,
        phi_inv,
        gm: model_gram(side, param, m),
        mi: model_scalar(algebra, m),
        structure,
    };
    debug_assert_eq!(&(&f.phi.transpose() * &pairing_gram(nv)) * &f.phi, f.gm);
    debug_assert_eq!(f.structure.matrix() * &f.phi, &f.phi * &f.mi);
    Ok(f)
}

/// Standard fixed structure of the side: `j = [[0, -I], [I, 0]]` or
/// `w = [[0, I], [-I, 0]]` on `R^{2m}`.
pub fn standard_data(side: Side, m: usize) -> SideData {
    match side {
        Side::Complex => SideData::Complex(standard_complex_structure(m)),
        Side::Symplectic => SideData::Symplectic(standard_symplectic(m, &q(1))),
    }
}

// ---------------------------------------------------------------------------
// Normal forms

/// The representative of an orbit.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub label: OrbitLabel,
    /// Real matrix on the model `R^{4m}`.
    pub model: RMat,
    /// The same structure on `E` for the standard fixed structure.
    pub s: BlockEndo,
    pub data: SideData,
}

fn gdiag(entries: &[GaussianRational]) -> CMat {
    CMat::diagonal(entries)
}

fn gblock(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    CMat::block2(a, b, c, d)
}

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(q(re), q(im))
}

/// Model matrix of the representative.
pub fn model_normal_form(label: &OrbitLabel) -> Result<RMat> {
    label.validate()?;
    let m = label.m;
    let cz = |k: usize| CMat::zeros(k, k);
    let ci = |k: usize, c: GaussianRational| CMat::scalar(k, c);
    Ok(match (label.side, label.lambda, label.ell) {
        // (z, w) -> (conj w, conj z)
        (Side::Complex, 1, -1) => {
            let b = gblock(&cz(m), &ci(m, g(1, 0)), &ci(m, g(1, 0)), &cz(m));
            semilinear_map(&cz(2 * m), &b)
        }
        // (z1, z2, w1, w2) -> (-conj z2, conj z1, -conj w2, conj w1)
        (Side::Complex, -1, -1) => {
            let k = m / 2;
            let p = gblock(&cz(k), &ci(k, g(-1, 0)), &ci(k, g(1, 0)), &cz(k));
            semilinear_map(&cz(2 * m), &CMat::block_diag(&[&p, &p]))
        }
        // (z, w) -> (i conj z, -i conj w), z in C^n
        (Side::Complex, 1, 1) => {
            let n = label.n.expect("validated");
            let mut d = vec![g(0, 1); n];
            d.extend(vec![g(0, -1); 2 * m - n]);
            semilinear_map(&cz(2 * m), &gdiag(&d))
        }
        // (z, w) -> (-conj w, conj z)
        (Side::Complex, _, _) => {
            let b = gblock(&cz(m), &ci(m, g(-1, 0)), &ci(m, g(1, 0)), &cz(m));
            semilinear_map(&cz(2 * m), &b)
        }
        // (z, w) -> (z, -w)
        (Side::Symplectic, 1, -1) => {
            let mut d = vec![g(1, 0); m];
            d.extend(vec![g(-1, 0); m]);
            semilinear_map(&gdiag(&d), &cz(2 * m))
        }
        // (z1, z2, w1, w2) -> (-i w1, i w2, -i z1, i z2)
        (Side::Symplectic, -1, 1) => {
            let n = label.n.expect("validated");
            let mut d = vec![g(0, -1); n];
            d.extend(vec![g(0, 1); m - n]);
            let dg = gdiag(&d);
            semilinear_map(&gblock(&cz(m), &dg, &dg, &cz(m)), &cz(2 * m))
        }
        // x e + y ebar -> r(x) e - r(y) ebar
        (Side::Symplectic, 1, 1) => {
            let mut d = vec![q(1); m];
            d.extend(vec![q(-1); m]);
            let r = RMat::diagonal(&d);
            RMat::block_diag(&[&r, &-&r])
        }
        // x e + y ebar -> j(x) e + j(y) ebar
        (Side::Symplectic, _, _) => {
            let j = standard_complex_structure(m);
            RMat::block_diag(&[&j, &j])
        }
    })
}

/// The representative of the orbit, in model coordinates and on `E` with the
/// standard fixed structure.
pub fn normal_form(label: &OrbitLabel) -> Result<NormalForm> {
    let model = model_normal_form(label)?;
    let data = standard_data(label.side, label.m);
    let fr = frame(&data, label.structure_param())?;
    let s = BlockEndo::from_matrix(fr.from_model(&model))?;
    Ok(NormalForm {
        label: *label,
        model,
        s,
        data,
    })
}

// ---------------------------------------------------------------------------
// Classification

/// A label together with any other rows the structure also belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: OrbitLabel,
    /// Further labels (other `ell`) whose conditions the structure also meets.
    pub alternatives: Vec<OrbitLabel>,
}

fn member_label(s: &BlockEndo, data: &SideData, lambda: i32, ell: i32) -> Result<std::result::Result<OrbitLabel, String>> {
    let rep = check_slash(s, data, lambda, ell)?;
    if !rep.passed() {
        return Ok(Err(rep.clause.unwrap_or_default()));
    }
    if rep.form_criterion_ok != Some(true) {
        return Ok(Err("sesquilinear form criterion".into()));
    }
    let side = data.side();
    let m = s.n() / 2;
    let n = match (side, lambda, ell) {
        (Side::Complex, 1, 1) => Some(sig_complex_11(s, data.matrix())?.n),
        (Side::Symplectic, -1, 1) => Some(sig_symplectic_m11(s, data.matrix())?.n),
        _ => None,
    };
    OrbitLabel::new(side, lambda, ell, m, n)
        .map(Ok)
        .or_else(|e| Ok(Err(e.to_string())))
}

/// Determines the orbit of `s`. When both values of `ell` fit, `ell = 1` is
/// reported and the other label is listed as an alternative.
pub fn classify(s: &BlockEndo, data: &SideData) -> Result<Classification> {
    let nv = data.matrix().rows();
    if s.n() != nv {
        return Err(Error::DimensionMismatch {
            expected: nv,
            found: s.n(),
        });
    }
    if nv % 2 == 1 {
        return Err(Error::ShapeMismatch("odd-dimensional V".into()));
    }
    let sq = s * s;
    let lambda = if sq.is_scalar(1) {
        1
    } else if sq.is_scalar(-1) {
        -1
    } else {
        return Err(Error::NotInAnyOrbit(crate::slash::CLAUSE_SQUARE.into()));
    };
    let mut found = Vec::new();
    let mut clauses = Vec::new();
    for ell in [1, -1] {
        match member_label(s, data, lambda, ell)? {
            Ok(l) => found.push(l),
            Err(c) => clauses.push(format!("ell = {ell}: {c}")),
        }
    }
    if found.is_empty() {
        return Err(Error::NotInAnyOrbit(clauses.join("; ")));
    }
    let label = found.remove(0);
    Ok(Classification {
        label,
        alternatives: found,
    })
}

/// Whether `s` belongs to the orbit named by `label`.
pub fn in_orbit(s: &BlockEndo, data: &SideData, label: &OrbitLabel) -> Result<bool> {
    match classify(s, data) {
        Ok(c) => Ok(c.label == *label || c.alternatives.contains(label)),
        Err(Error::NotInAnyOrbit(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Nullity of the linearized defining equations at `s`: `dS S + S dS = 0`,
/// `dS` skew for `b`, and `dS` anticommuting with `J_ell` (complex side) or
/// commuting with `I_k` (symplectic side).
pub fn linearized_dimension(s: &BlockEndo, label: &OrbitLabel, data: &SideData) -> Result<usize> {
    label.validate()?;
    let structure = match data {
        SideData::Complex(j) => make_j(j, label.ell)?,
        SideData::Symplectic(w) => make_i(w, label.lambda * label.ell)?,
    };
    let dim = 2 * s.n();
    let gb = pairing_gram(s.n());
    let sm = s.matrix();
    let x = structure.matrix();
    let sign = if data.side() == Side::Complex { q(1) } else { q(-1) };
    let unknowns = dim * dim;
    let mut cols = Vec::with_capacity(unknowns);
    for a in 0..dim {
        for b in 0..dim {
            let mut e = RMat::zeros(dim, dim);
            e[(a, b)] = q(1);
            let mut col: Vec<Rational> = Vec::with_capacity(3 * unknowns);
            col.extend((&(&e * sm) + &(sm * &e)).entries().cloned());
            col.extend((&(&e.transpose() * &gb) + &(&gb * &e)).entries().cloned());
            col.extend((&(&e * x) + &(x * &e).scale(&sign)).entries().cloned());
            cols.push(col);
        }
    }
    let sys = RMat::from_columns(3 * unknowns, &cols);
    Ok(unknowns - rank(&sys))
}

// ---------------------------------------------------------------------------
// Conjugators

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Floating,
}

/// The conjugating matrix in either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum ConjugatorMatrix {
    Exact(RMat),
    Floating(DMatrix<f64>),
}

impl ConjugatorMatrix {
    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            ConjugatorMatrix::Exact(m) => m.to_f64(),
            ConjugatorMatrix::Floating(m) => m.clone(),
        }
    }
}

impl Serialize for ConjugatorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConjugatorMatrix::Exact(m) => crate::json::ser_rmat(m, s),
            ConjugatorMatrix::Floating(m) => {
                let rows: Vec<Vec<f64>> = (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                    .collect();
                rows.serialize(s)
            }
        }
    }
}

/// `F` with `T = F S F^{-1}` for the orbit representative `S` on `E`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugatorResult {
    #[serde(rename = "F")]
    pub f: ConjugatorMatrix,
    pub backend: Backend,
    /// Max-abs entry of `F S F^{-1} - T`.
    pub conjugation_residual: f64,
    /// Max-abs entry of `F^T G F - G` and of `F X - X F` for the fixed `X`.
    pub isometry_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjugatorOptions {
    pub tolerance: f64,
    /// Normalize model bases with the constant 2 instead of 1.
    pub doubled_normalization: bool,
}

impl Default for ConjugatorOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            doubled_normalization: false,
        }
    }
}

/// Greedy basis of the span of `vectors` over the scalars acting by `mi`.
fn scalar_basis(vectors: &[Vec<Rational>], mi: &RMat) -> Vec<Vec<Rational>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let mut chosen = Vec::new();
    let mut span: Vec<Vec<Rational>> = Vec::new();
    for v in vectors {
        let mut trial = span.clone();
        trial.push(v.clone());
        trial.push(mi.mul_vec(v));
        if rank(&RMat::from_columns(dim, &trial)) == trial.len() {
            chosen.push(v.clone());
            span = trial;
        }
    }
    chosen
}

/// `(a + ib) v = a v + b (mi v)`.
fn cscale(c: &GaussianRational, v: &[Rational], mi: &RMat) -> Vec<Rational> {
    let mv = mi.mul_vec(v);
    v.iter()
        .zip(&mv)
        .map(|(x, y)| &c.re * x + &c.im * y)
        .collect()
}

fn vadd(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// `[B, mi B]` for the columns `B`.
fn with_scalar_images(basis: &[Vec<Rational>], mi: &RMat) -> RMat {
    let dim = basis[0].len();
    let mut cols = basis.to_vec();
    cols.extend(basis.iter().map(|v| mi.mul_vec(v)));
    RMat::from_columns(dim, &cols)
}

/// Antilinear case with a skew real form on the fixed space: Darboux bases.
fn conj_real_form_skew(fr: &Frame, s: &RMat, t: &RMat, c: &Rational) -> Result<RMat> {
    let side_basis = |x: &RMat| -> Result<Vec<Vec<Rational>>> {
        let v = eigenspace(x, &q(1));
        let vm = RMat::from_columns(x.rows(), &v);
        let theta = -&(&(&vm.transpose() * &fr.gm) * &(&fr.mi * &vm));
        let p = darboux_basis(&theta, c)?;
        Ok((&vm * &p).columns())
    };
    let vb = side_basis(s)?;
    let wb = side_basis(t)?;
    let src = with_scalar_images(&vb, &fr.mi);
    let dst = with_scalar_images(&wb, &fr.mi);
    Ok(&dst * &inverse(&src).ok_or_else(|| Error::NotInOrbit("fixed space is not a real form".into()))?)
}

/// Linear case with isotropic eigenspaces: dual bases.
fn conj_dual_basis(fr: &Frame, t: &RMat) -> Result<RMat> {
    let plus = scalar_basis(&eigenspace(t, &q(1)), &fr.mi);
    let minus = scalar_basis(&eigenspace(t, &q(-1)), &fr.mi);
    let m = fr.m;
    if plus.len() != m || minus.len() != m {
        return Err(Error::NotInOrbit("eigenspaces are not of complex dimension m".into()));
    }
    let mm = CMat::from_fn(m, m, |s, k| model_form(&fr.gm, &fr.mi, &plus[s], &minus[k]));
    let minv = inverse(&mm).ok_or_else(|| Error::NotInOrbit("eigenspaces are not dually paired".into()))?;
    let dim = plus[0].len();
    let mut dual = Vec::with_capacity(m);
    for t_ in 0..m {
        let mut v = vec![q(0); dim];
        for (k, w) in minus.iter().enumerate() {
            v = vadd(&v, &cscale(&minv[(k, t_)], w, &fr.mi));
        }
        dual.push(v);
    }
    let mut basis = plus;
    basis.extend(dual);
    Ok(with_scalar_images(&basis, &fr.mi))
}

/// Lorentz model: `T = diag(f, g)`; conjugate `f` to the representative's block.
fn conj_lorentz(fr: &Frame, s: &RMat, t: &RMat, lambda: i32) -> Result<RMat> {
    let nv = 2 * fr.m;
    let f = t.submatrix(0, 0, nv, nv);
    let f0 = s.submatrix(0, 0, nv, nv);
    let off = t.submatrix(0, nv, nv, nv).is_zero() && t.submatrix(nv, 0, nv, nv).is_zero();
    if !off {
        return Err(Error::NotInOrbit("not linear over L".into()));
    }
    let adapted = |x: &RMat| -> Result<RMat> {
        if lambda == 1 {
            let mut cols = eigenspace(x, &q(1));
            cols.extend(eigenspace(x, &q(-1)));
            if cols.len() != nv {
                return Err(Error::NotInOrbit("block is not diagonalizable".into()));
            }
            Ok(RMat::from_columns(nv, &cols))
        } else {
            Ok(complex_adapted_basis(x))
        }
    };
    let a = &adapted(&f)? * &inverse(&adapted(&f0)?).expect("basis");
    let a_inv_t = inverse(&a).expect("invertible").transpose();
    Ok(RMat::block_diag(&[&a, &a_inv_t]))
}

type F64Basis = Vec<nalgebra::DVector<f64>>;

fn dvec(v: &[Rational]) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_iterator(v.len(), v.iter().map(rational_to_f64))
}

/// Values `d` with positive ones first, keeping the order otherwise.
fn positive_first<V>(mut out: Vec<(Rational, V)>) -> (Vec<(Rational, V)>, usize) {
    out.sort_by_key(|(d, _)| !d.is_positive());
    let pos = out.iter().filter(|(d, _)| d.is_positive()).count();
    (out, pos)
}

/// `v * sqrt(c / |d|)`; the only inexact step of the floating backend.
fn normalized(v: &[Rational], d: &Rational, c: f64) -> nalgebra::DVector<f64> {
    dvec(v) * (c / rational_to_f64(d).abs()).sqrt()
}

/// Antilinear case with a symmetric real form on the fixed space:
/// orthonormal bases with positive vectors first. The orthogonalization is
/// exact; only the normalization uses square roots.
fn conj_real_form_symmetric(fr: &Frame, s: &RMat, t: &RMat, c: f64) -> Result<DMatrix<f64>> {
    let side_basis = |x: &RMat| -> Result<(F64Basis, usize)> {
        let v = eigenspace(x, &q(1));
        let vm = RMat::from_columns(x.rows(), &v);
        let h = -&(&(&vm.transpose() * &fr.gm) * &(&fr.mi * &vm));
        let (p, d) = orthogonal_basis(&h);
        if d.iter().any(|x| x.is_zero()) {
            return Err(Error::NotInOrbit("fixed-space form is degenerate".into()));
        }
        let (out, pos) = positive_first(d.into_iter().zip(p).collect());
        let basis = out
            .iter()
            .map(|(d, p)| normalized(&vm.mul_vec(p), d, c))
            .collect();
        Ok((basis, pos))
    };
    let (vb, pv) = side_basis(s)?;
    let (wb, pw) = side_basis(t)?;
    if pv != pw {
        return Err(Error::NotInOrbit(format!("fixed-space form has {pw} positive directions, expected {pv}")));
    }
    Ok(assemble_f64(&vb, &wb, &fr.mi.to_f64()))
}

fn assemble_f64(vb: &F64Basis, wb: &F64Basis, mi: &DMatrix<f64>) -> DMatrix<f64> {
    let stack = |b: &F64Basis| {
        let dim = b[0].len();
        let mut cols: Vec<nalgebra::DVector<f64>> = b.clone();
        cols.extend(b.iter().map(|v| mi * v));
        DMatrix::from_columns(&cols).resize(dim, 2 * b.len(), 0.0)
    };
    let src = stack(vb);
    let dst = stack(wb);
    dst * src.try_inverse().unwrap_or_else(|| DMatrix::zeros(mi.nrows(), mi.ncols()))
}

/// Linear case, complex structure whose `i T` eigenspaces carry Hermitian
/// forms: orthonormal bases of each eigenspace, positive vectors first.
fn conj_hermitian(fr: &Frame, s: &RMat, t: &RMat, c: f64) -> Result<DMatrix<f64>> {
    let mi_f = fr.mi.to_f64();
    let side_basis = |x: &RMat| -> Result<(F64Basis, Vec<usize>)> {
        let ix = &fr.mi * x;
        let mut all = Vec::new();
        let mut counts = Vec::new();
        for delta in [1, -1] {
            let w = scalar_basis(&eigenspace(&ix, &q(delta)), &fr.mi);
            let k = w.len();
            let gram = CMat::from_fn(k, k, |a, b| model_form(&fr.gm, &fr.mi, &w[a], &w[b]));
            let (p, d) = orthogonal_basis(&gram);
            let mut vs = Vec::with_capacity(k);
            for (pz, dz) in p.iter().zip(d) {
                if !dz.im.is_zero() || dz.re.is_zero() {
                    return Err(Error::NotInOrbit("eigenspace form is not a nondegenerate Hermitian form".into()));
                }
                let mut v = vec![q(0); w[0].len()];
                for (z, wa) in pz.iter().zip(&w) {
                    v = vadd(&v, &cscale(z, wa, &fr.mi));
                }
                vs.push((dz.re, v));
            }
            let (vs, pos) = positive_first(vs);
            counts.push(pos);
            all.extend(vs.iter().map(|(d, v)| normalized(v, d, c)));
        }
        Ok((all, counts))
    };
    let (vb, cv) = side_basis(s)?;
    let (wb, cw) = side_basis(t)?;
    if cv != cw || vb.len() != fr.m * 2 || wb.len() != vb.len() {
        return Err(Error::NotInOrbit(format!(
            "eigenspace signatures {cw:?} differ from {cv:?}"
        )));
    }
    Ok(assemble_f64(&vb, &wb, &mi_f))
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Residuals of `F S F^{-1} = T` and of `F` preserving `b` and the fixed
/// structure, all in `E` coordinates.
pub fn conjugator_residuals(f: &DMatrix<f64>, s: &RMat, t: &RMat, structure: &RMat) -> (f64, f64) {
    let n = f.nrows();
    let gb = pairing_gram(n / 2).to_f64();
    let x = structure.to_f64();
    let conj = match f.clone().try_inverse() {
        Some(fi) => max_abs(&(f * s.to_f64() * fi - t.to_f64())),
        None => f64::INFINITY,
    };
    let iso = max_abs(&(f.transpose() * &gb * f - &gb)).max(max_abs(&(f * &x - &x * f)));
    (conj, iso)
}

/// Finds `F` in the group with `t = F S F^{-1}`, `S` the representative of
/// `label` transported to the given fixed structure.
pub fn conjugator(
    t: &BlockEndo,
    data: &SideData,
    label: &OrbitLabel,
    opts: &ConjugatorOptions,
) -> Result<ConjugatorResult> {
    label.validate()?;
    if data.side() != label.side || t.n() != 2 * label.m {
        return Err(Error::NotInOrbit(format!("{label} does not match the input shape")));
    }
    if label.side == Side::Complex && label.lambda == -1 {
        return Err(Error::Unsupported(format!(
            "no conjugator for the quaternionic row {label}"
        )));
    }
    if !in_orbit(t, data, label)? {
        return Err(Error::NotInOrbit(format!("structure is not in {label}")));
    }
    let fr = frame(data, label.structure_param())?;
    let s_model = model_normal_form(label)?;
    let s_e = fr.from_model(&s_model);
    let t_model = fr.to_model(t.matrix());
    let c = if opts.doubled_normalization { 2 } else { 1 };
    let exact = match (label.side, label.lambda, label.ell) {
        (Side::Complex, 1, -1) => Some(conj_real_form_skew(&fr, &s_model, &t_model, &q(c))?),
        (Side::Symplectic, 1, -1) => {
            let fs = conj_dual_basis(&fr, &s_model)?;
            let ft = conj_dual_basis(&fr, &t_model)?;
            Some(&ft * &inverse(&fs).expect("basis"))
        }
        (Side::Symplectic, l, _) if fr.algebra == ModelAlgebra::Lorentz => {
            Some(conj_lorentz(&fr, &s_model, &t_model, l)?)
        }
        _ => None,
    };
    if let Some(fm) = exact {
        let f = fr.from_model(&fm);
        let finv = inverse(&f).ok_or_else(|| Error::NotInOrbit("singular conjugator".into()))?;
        let gb = pairing_gram(t.n());
        let x = fr.structure.matrix();
        let ok_conj = &(&f * &s_e) * &finv == *t.matrix();
        let ok_iso = &(&f.transpose() * &gb) * &f == gb && &f * x == x * &f;
        if !(ok_conj && ok_iso) {
            let (rc, ri) = conjugator_residuals(&f.to_f64(), &s_e, t.matrix(), x);
            return Err(Error::NotInOrbit(format!(
                "exact construction failed verification (residuals {rc:e}, {ri:e})"
            )));
        }
        return Ok(ConjugatorResult {
            f: ConjugatorMatrix::Exact(f),
            backend: Backend::Exact,
            conjugation_residual: 0.0,
            isometry_residual: 0.0,
        });
    }
    let fm = match (label.side, label.lambda) {
        (Side::Complex, _) => conj_real_form_symmetric(&fr, &s_model, &t_model, c as f64)?,
        _ => conj_hermitian(&fr, &s_model, &t_model, c as f64)?,
    };
    let f = fr.phi.to_f64() * fm * fr.phi_inv.to_f64();
    let (rc, ri) = conjugator_residuals(&f, &s_e, t.matrix(), fr.structure.matrix());
    let worst = rc.max(ri);
    if !(worst <= opts.tolerance) {
        return Err(Error::ToleranceExceeded {
            residual: worst,
            tolerance: opts.tolerance,
        });
    }
    Ok(ConjugatorResult {
        f: ConjugatorMatrix::Floating(f),
        backend: Backend::Floating,
        conjugation_residual: rc,
        isometry_residual: ri,
    })
}

// ---------------------------------------------------------------------------
// Quaternionic rows

/// The quaternion-valued form attached to a complex-side structure with
/// `lambda = -1`, on an `H`-basis of the model.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionicForm {
    pub gram: Matrix<RationalQuaternion>,
    pub hermitian: bool,
    pub anti_hermitian: bool,
    /// Quaternionic inertia when the form is Hermitian.
    pub inertia: Option<Inertia>,
}

/// `u + j v`.
fn quat(u: &GaussianRational, v: &GaussianRational) -> RationalQuaternion {
    RationalQuaternion::new(u.re.clone(), u.im.clone(), v.re.clone(), -v.im.clone())
}

/// Builds `C(Z, Z') = B_-(Z, Z') - B_-(Z, S Z') j` for `ell = -1` and
/// `C(Z, Z') = B_+(S Z, Z') - j B_+(Z, Z')` for `ell = 1`, where `Z h` is
/// `u Z + v S Z` for `h = u + j v`.
pub fn quaternionic_form(s_model: &RMat, ell: i32, m: usize) -> Result<QuaternionicForm> {
    let dim = 4 * m;
    if s_model.rows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: s_model.rows(),
        });
    }
    let mi = model_scalar(ModelAlgebra::Complex, m);
    let gm = model_gram(Side::Complex, ell, m);
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut span: Vec<Vec<Rational>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![q(0); dim];
        e[i] = q(1);
        let se = s_model.mul_vec(&e);
        let mut trial = span.clone();
        trial.push(e.clone());
        trial.push(mi.mul_vec(&e));
        trial.push(se.clone());
        trial.push(mi.mul_vec(&se));
        if rank(&RMat::from_columns(dim, &trial)) == trial.len() {
            chosen.push(e);
            span = trial;
        }
    }
    if span.len() != dim {
        return Err(Error::ShapeMismatch("no quaternionic basis".into()));
    }
    let k = chosen.len();
    let form = |x: &[Rational], y: &[Rational]| model_form(&gm, &mi, x, y);
    let gram = Matrix::from_fn(k, k, |a, b| {
        let (x, y) = (&chosen[a], &chosen[b]);
        if ell == -1 {
            let u = form(x, y);
            let v = -form(x, &s_model.mul_vec(y)).conj();
            quat(&u, &v)
        } else {
            let u = form(&s_model.mul_vec(x), y);
            let v = -form(x, y);
            quat(&u, &v)
        }
    });
    let hermitian = gram.adjoint() == gram;
    let anti_hermitian = gram.adjoint() == -&gram;
    let inertia = if hermitian {
        Some(quaternion_hermitian_inertia(&gram)?)
    } else {
        None
    };
    Ok(QuaternionicForm {
        gram,
        hermitian,
        anti_hermitian,
        inertia,
    })
}

/// Basis of the Lie algebra of the group preserving `b` and commuting with
/// `structure`.
pub fn group_lie_algebra(structure: &BlockEndo) -> Vec<RMat> {
    let dim = 2 * structure.n();
    let gb = pairing_gram(structure.n());
    let x = structure.matrix();
    let mut cols = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut e = RMat::zeros(dim, dim);
            e[(a, b)] = q(1);
            let mut col: Vec<Rational> = (&(&e.transpose() * &gb) + &(&gb * &e)).entries().cloned().collect();
            col.extend((&(&e * x) - &(x * &e)).entries().cloned());
            cols.push(col);
        }
    }
    let sys = RMat::from_columns(2 * dim * dim, &cols);
    kernel_basis(&sys)
        .into_iter()
        .map(|v| RMat::from_fn(dim, dim, |i, j| v[i * dim + j].clone()))
        .collect()
}
