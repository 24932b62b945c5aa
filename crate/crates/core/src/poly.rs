//! Sparse real polynomials in the hat coordinates of a dual space.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Highest total degree a [`Polynomial`] may carry.
pub const MAX_DEGREE: usize = 4;

/// A polynomial stored as a map from exponent multi-indices to coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u8>, f64>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.insert(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let mut e = vec![0; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.insert(e, 1.0);
        Ok(p)
    }

    /// The linear function `Σ v_i x_i`, i.e. the hat function of `v`.
    pub fn linear(v: &[f64]) -> Self {
        let dim = v.len();
        let mut p = Self::zero(dim);
        for (i, &c) in v.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            p.insert(e, c);
        }
        p
    }

    pub fn monomial(exponents: &[u8], coefficient: f64) -> Result<Self> {
        let degree: usize = exponents.iter().map(|&e| e as usize).sum();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow {
                degree,
                max: MAX_DEGREE,
            });
        }
        let mut p = Self::zero(exponents.len());
        p.insert(exponents.to_vec(), coefficient);
        Ok(p)
    }

    fn insert(&mut self, e: Vec<u8>, c: f64) {
        if c == 0.0 {
            return;
        }
        let v = self.terms.get(&e).copied().unwrap_or(0.0) + c;
        if v == 0.0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let degree = self.degree() + other.degree();
        if degree > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeOverflow {
                degree,
                max: MAX_DEGREE,
            });
        }
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&p, &xi)| acc * xi.powi(p as i32))
            })
            .sum()
    }

    /// `∂f/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.insert(d, c * e[i] as f64);
            }
        }
        out
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| self.partial(i).eval(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_derivatives() {
        let x0 = Polynomial::coordinate(3, 0).unwrap();
        let x1 = Polynomial::coordinate(3, 1).unwrap();
        let f = x0.mul(&x0).unwrap().mul(&x1).unwrap(); // x0² x1
        assert_eq!(f.degree(), 3);
        let p = [2.0, -3.0, 5.0];
        assert_eq!(f.eval(&p), -12.0);
        assert_eq!(f.gradient(&p), vec![-12.0, 4.0, 0.0]);
        assert!(f.sub(&f).unwrap().is_zero());
        assert_eq!(Polynomial::linear(&[1.0, 2.0, 3.0]).eval(&[4.0, 5.0, 6.0]), 32.0);
    }

    #[test]
    fn degree_cap() {
        let x = Polynomial::coordinate(2, 0).unwrap();
        let x2 = x.mul(&x).unwrap();
        let x4 = x2.mul(&x2).unwrap();
        assert!(matches!(x4.mul(&x), Err(Error::DegreeOverflow { degree: 5, .. })));
        assert!(Polynomial::monomial(&[3, 2], 1.0).is_err());
        assert!(Polynomial::coordinate(2, 2).is_err());
    }
}
