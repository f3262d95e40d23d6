//! Seeded random generation of exact test data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extended::BlockEndo;
use crate::linalg::{inverse, standard_symplectic};
use crate::matrix::RMat;
use crate::orbit::{group_lie_algebra, standard_complex_structure};
use crate::scalars::{q, qf, Rational};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// `p / q` with `|p| <= k`, `1 <= q <= d`.
    pub fn rational(&mut self, k: i64, d: i64) -> Rational {
        let p = self.int(-k, k);
        let den = self.int(1, d);
        qf(p, den)
    }

    pub fn int_matrix(&mut self, r: usize, c: usize, k: i64) -> RMat {
        RMat::from_fn(r, c, |_, _| q(self.int(-k, k)))
    }

    /// Random invertible integer matrix close to the identity.
    pub fn invertible(&mut self, n: usize, k: i64) -> RMat {
        loop {
            let mut m = self.int_matrix(n, n, k);
            for i in 0..n {
                if self.coin() {
                    m[(i, i)] = &m[(i, i)] + q(1);
                }
            }
            if inverse(&m).is_some() {
                return m;
            }
        }
    }

    pub fn skew(&mut self, n: usize, k: i64) -> RMat {
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let x = q(self.int(-k, k));
                m[(j, i)] = -x.clone();
                m[(i, j)] = x;
            }
        }
        m
    }

    /// A random complex structure `P j_std P^{-1}` on `R^{2m}`.
    pub fn complex_structure(&mut self, m: usize) -> RMat {
        let p = self.invertible(2 * m, 1);
        let pi = inverse(&p).expect("invertible");
        &(&p * &standard_complex_structure(m)) * &pi
    }

    /// Gram matrix `P^T w_std P` of a random symplectic form on `R^{2m}`.
    pub fn symplectic_form(&mut self, m: usize) -> RMat {
        let p = self.invertible(2 * m, 1);
        &(&p.transpose() * &standard_symplectic(m, &q(1))) * &p
    }

    /// Cayley transform `(1 - X)^{-1} (1 + X)` of a sparse random element of
    /// the span of `basis`.
    pub fn cayley(&mut self, basis: &[RMat], terms: usize) -> RMat {
        let n = basis[0].rows();
        loop {
            let mut x = RMat::zeros(n, n);
            for _ in 0..terms {
                let b = &basis[self.index(basis.len())];
                let c = self.rational(2, 2);
                x = &x + &b.scale(&c);
            }
            let id = RMat::identity(n);
            if let Some(inv) = inverse(&(&id - &x)) {
                return &inv * &(&id + &x);
            }
        }
    }

    /// A random element of the group preserving `b` and commuting with `structure`.
    pub fn group_element(&mut self, structure: &BlockEndo, terms: usize) -> RMat {
        let basis = group_lie_algebra(structure);
        self.cayley(&basis, terms)
    }
}

/// `F S F^{-1}`.
pub fn conjugate(f: &RMat, s: &BlockEndo) -> BlockEndo {
    let fi = inverse(f).expect("invertible");
    BlockEndo::from_matrix(&(f * s.matrix()) * &fi).expect("square")
}
