//! Dense square matrices over K, used for Anderson module coefficients
//! and exponential/logarithm coefficient matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kfield::{KContext, KElem};

/// An n-by-n matrix over K, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMat {
    n: usize,
    e: Vec<KElem>,
}

impl KMat {
    pub fn zero(n: usize, ctx: &KContext) -> KMat {
        KMat {
            n,
            e: vec![KElem::zero(ctx); n * n],
        }
    }

    pub fn identity(n: usize, ctx: &KContext) -> KMat {
        let mut m = KMat::zero(n, ctx);
        for i in 0..n {
            m.set(i, i, KElem::one(ctx));
        }
        m
    }

    pub fn scalar(n: usize, c: &KElem, ctx: &KContext) -> KMat {
        let mut m = KMat::zero(n, ctx);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diag(entries: &[KElem], ctx: &KContext) -> KMat {
        let n = entries.len();
        let mut m = KMat::zero(n, ctx);
        for (i, c) in entries.iter().enumerate() {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Matrix with `entries` along the k-th superdiagonal (k >= 1).
    pub fn superdiag(n: usize, k: usize, entries: &[KElem], ctx: &KContext) -> KMat {
        debug_assert_eq!(entries.len(), n.saturating_sub(k));
        let mut m = KMat::zero(n, ctx);
        for (i, c) in entries.iter().enumerate() {
            m.set(i, i + k, c.clone());
        }
        m
    }

    /// Matrix with `entries` along the k-th subdiagonal of the lower-left
    /// corner: entry j goes to row n - k + j, column j + 1 (1-based), i.e.
    /// the wraparound band k steps below the main diagonal block.
    pub fn corner_band(n: usize, k: usize, entries: &[KElem], ctx: &KContext) -> KMat {
        debug_assert_eq!(entries.len(), k.min(n));
        let mut m = KMat::zero(n, ctx);
        for (j, c) in entries.iter().enumerate() {
            m.set(n - k + j, j, c.clone());
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &KElem {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: KElem) {
        self.e[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &KMat, ctx: &KContext) -> KMat {
        debug_assert_eq!(self.n, o.n);
        KMat {
            n: self.n,
            e: self
                .e
                .iter()
                .zip(&o.e)
                .map(|(a, b)| a.add(b, ctx))
                .collect(),
        }
    }

    pub fn sub(&self, o: &KMat, ctx: &KContext) -> KMat {
        debug_assert_eq!(self.n, o.n);
        KMat {
            n: self.n,
            e: self
                .e
                .iter()
                .zip(&o.e)
                .map(|(a, b)| a.sub(b, ctx))
                .collect(),
        }
    }

    pub fn neg(&self, ctx: &KContext) -> KMat {
        KMat {
            n: self.n,
            e: self.e.iter().map(|a| a.neg(ctx)).collect(),
        }
    }

    pub fn mul(&self, o: &KMat, ctx: &KContext) -> KMat {
        debug_assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = KMat::zero(n, ctx);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b, ctx), ctx);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &KElem, ctx: &KContext) -> KMat {
        KMat {
            n: self.n,
            e: self.e.iter().map(|a| a.mul(c, ctx)).collect(),
        }
    }

    /// Entry-wise Frobenius twist by q^k.
    pub fn twist(&self, k: usize, ctx: &KContext) -> KMat {
        KMat {
            n: self.n,
            e: self.e.iter().map(|a| a.frobenius(k, ctx)).collect(),
        }
    }

    /// Entry-wise q-th root; errors if any entry is not a q-th power.
    pub fn qth_root(&self, ctx: &KContext) -> Result<KMat> {
        let mut e = Vec::with_capacity(self.e.len());
        for a in &self.e {
            e.push(a.qth_root(ctx)?);
        }
        Ok(KMat { n: self.n, e })
    }

    pub fn row(&self, i: usize) -> &[KElem] {
        &self.e[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> Vec<KElem> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// Solves D X = B for X when D is diagonal with invertible entries.
    pub fn solve_diag(&self, b: &KMat, ctx: &KContext) -> Result<KMat> {
        debug_assert_eq!(self.n, b.n);
        let mut out = KMat::zero(self.n, ctx);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && !self.get(i, j).is_zero() {
                    return Err(Error::InternalCheck(
                        "solve_diag called on a non-diagonal matrix".into(),
                    ));
                }
            }
            let d = self.get(i, i);
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = d.inv(ctx)?;
            for j in 0..self.n {
                out.set(i, j, b.get(i, j).mul(&inv, ctx));
            }
        }
        Ok(out)
    }
}
