//! Generators shared by the integration tests. Every random object is built
//! from a seeded [`Sampler`] and a hand-checked standard representative.

#![allow(dead_code)]

use slashgeom::extended::{flat, BlockEndo};
use slashgeom::lie::{d_2form, heisenberg_demo, LieAlgebraData};
use slashgeom::linalg::{inverse, kernel_basis, standard_symplectic};
use slashgeom::matrix::RMat;
use slashgeom::orbit::{group_lie_algebra, standard_complex_structure};
use slashgeom::sampling::Sampler;
use slashgeom::scalars::{q, Rational};

pub fn j0(m: usize) -> RMat {
    standard_complex_structure(m)
}

/// `[[0, I], [-I, 0]]`.
pub fn w0(m: usize) -> RMat {
    standard_symplectic(m, &q(1))
}

pub fn diag_i64(d: &[i64]) -> RMat {
    RMat::diagonal(&d.iter().map(|&x| q(x)).collect::<Vec<_>>())
}

pub fn conj(p: &RMat, x: &RMat) -> RMat {
    &(p * x) * &inverse(p).expect("invertible")
}

/// `P^T x P`.
pub fn pull(p: &RMat, x: &RMat) -> RMat {
    &(&p.transpose() * x) * p
}

/// Random invertible matrix commuting with `j`.
pub fn complex_linear(smp: &mut Sampler, j: &RMat) -> RMat {
    let n = j.rows();
    let jinv = inverse(j).expect("invertible");
    loop {
        let x = smp.int_matrix(n, n, 2);
        let u = &x + &(&(j * &x) * &jinv);
        if inverse(&u).is_some() {
            return u;
        }
    }
}

/// Random element of the symplectic group of the Gram matrix `w`, as a
/// Cayley transform of `w^{-1} sigma` with `sigma` symmetric.
pub fn symplectic_matrix(smp: &mut Sampler, w: &RMat, terms: usize) -> RMat {
    let n = w.rows();
    let winv = inverse(w).expect("nondegenerate");
    let mut basis = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut s = RMat::zeros(n, n);
            s[(a, b)] = q(1);
            s[(b, a)] = q(1);
            basis.push(&winv * &s);
        }
    }
    smp.cayley(&basis, terms)
}

/// Random `b`-isometry of `V + V*`.
pub fn b_isometry(smp: &mut Sampler, n: usize, terms: usize) -> RMat {
    let basis = group_lie_algebra(&BlockEndo::identity(n));
    smp.cayley(&basis, terms)
}

/// Random skew matrix `theta` with `theta = ell j^T theta j`, i.e.
/// `theta(ju, v) = -ell theta(u, jv)`.
pub fn j_typed_form(smp: &mut Sampler, j: &RMat, ell: i32) -> RMat {
    let x = smp.skew(j.rows(), 2);
    let phi = (&(&j.transpose() * &x) * j).scale(&q(ell as i64));
    &x + &phi
}

/// Basis of the skew matrices satisfying the linear conditions `f = 0`.
pub fn skew_space(n: usize, f: impl Fn(&RMat) -> Vec<Rational>) -> Vec<RMat> {
    let mut params = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = RMat::zeros(n, n);
            m[(i, j)] = q(1);
            m[(j, i)] = q(-1);
            params.push(m);
        }
    }
    if params.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Rational>> = params.iter().map(&f).collect();
    let rows = cols[0].len();
    if rows == 0 {
        return params;
    }
    let sys = RMat::from_columns(rows, &cols);
    kernel_basis(&sys)
        .into_iter()
        .map(|c| {
            let mut m = RMat::zeros(n, n);
            for (x, p) in c.iter().zip(&params) {
                m = &m + &p.scale(x);
            }
            m
        })
        .collect()
}

pub fn closedness(b: &RMat, g: &LieAlgebraData) -> Vec<Rational> {
    let d = g.dim();
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

/// `theta` Gram matrices with `theta = ell j^T theta j`, as linear equations.
pub fn j_type_equations(b: &RMat, j: &RMat, ell: i32) -> Vec<Rational> {
    let phi = (&(&j.transpose() * b) * j).scale(&q(ell as i64));
    (b - &phi).entries().cloned().collect()
}

pub fn combine(smp: &mut Sampler, basis: &[RMat], n: usize) -> RMat {
    let mut m = RMat::zeros(n, n);
    for b in basis {
        m = &m + &b.scale(&q(smp.int(-3, 3)));
    }
    m
}

/// `diag(D, D)` with `D` a diagonal of signs; the complex model of a
/// pseudo-Hermitian metric for `j0`.
pub fn hermitian_metric(signs: &[i64]) -> RMat {
    let d = diag_i64(signs);
    RMat::block_diag(&[&d, &d])
}

/// Gram matrix of `w(u, v) = -g(ju, v)`, so that `g(u, v) = w(ju, v)`.
pub fn kahler_form(g: &RMat, j: &RMat) -> RMat {
    -&(&j.transpose() * g)
}

/// Gram matrix of `g(u, v) = w(ju, v)`.
pub fn kahler_metric(w: &RMat, j: &RMat) -> RMat {
    &j.transpose() * w
}

/// Tensors `r` with `r^2 = lambda`, `r j0 = -j0 r` on `R^{2m}`; `lambda = -1`
/// needs `m` even.
pub fn anti_j0(m: usize, lambda: i32) -> Option<RMat> {
    let id = RMat::identity(m);
    match lambda {
        1 => Some(RMat::block_diag(&[&id, &-&id])),
        _ if m % 2 == 0 => {
            let k = standard_complex_structure(m / 2);
            Some(RMat::block_diag(&[&k, &-&k]))
        }
        _ => None,
    }
}

/// Tensors `r` with `r^2 = lambda` skew for `w0` on `R^{2m}`.
pub fn skew_for_w0(m: usize, lambda: i32) -> RMat {
    let id = RMat::identity(m);
    if lambda == 1 {
        RMat::block_diag(&[&id, &-&id])
    } else {
        j0(m)
    }
}

/// `A` with `A^2 = ell`, symmetric for `w0`, split when `ell = 1`; needs `m` even.
pub fn symmetric_for_w0(m: usize, ell: i32) -> Option<RMat> {
    if m % 2 == 1 {
        return None;
    }
    let h = m / 2;
    if ell == 1 {
        let mut d = vec![1; h];
        d.extend(vec![-1; h]);
        let dd = diag_i64(&d);
        Some(RMat::block_diag(&[&dd, &dd]))
    } else {
        let k = standard_complex_structure(h);
        Some(RMat::block_diag(&[&k, &-&k]))
    }
}

/// Gram matrix of `theta` with `theta_flat = w_flat A`.
pub fn form_from_a(w: &RMat, a: &RMat) -> RMat {
    (&flat(w) * a).transpose()
}

/// The Heisenberg example: algebra, `j`, and tensors anticommuting with `j`.
pub struct Heis {
    pub g: LieAlgebraData,
    pub j: RMat,
    pub r_plus: RMat,
    pub r_minus: RMat,
}

pub fn heis() -> Heis {
    let d = heisenberg_demo();
    let small_d = d.d.submatrix(0, 4, 4, 4);
    Heis {
        g: d.g,
        j: d.j,
        r_plus: d.r,
        r_minus: small_d,
    }
}
