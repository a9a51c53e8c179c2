//! Truncated Taylor series ("jets") in high precision.
//!
//! A jet of order `K` stores `a(t) = a_0 + a_1 t + ... + a_K t^K`. Every
//! operation is an exact truncated-series operation: coefficient `k` of a
//! result depends only on coefficients `0..=k` of the operands. Seeding the
//! variable as `[p, 1, 0, ...]` and pushing it through `f` yields
//! `f^(k)(p) / k!` in coefficient `k`.

use rug::Float;

use crate::scalar::{finite, DomainError, HpReal, Scalar};

/// Default truncation order; matches an eighth-order expansion of `f`.
pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    coeffs: Vec<Float>,
}

impl TaylorJet {
    /// The independent variable at `point`: `[point, 1, 0, ..., 0]`.
    pub fn variable(point: HpReal, order: usize) -> Self {
        let prec = point.prec();
        let mut coeffs = vec![Float::new(prec); order + 1];
        if order >= 1 {
            coeffs[1] = Float::with_val(prec, 1);
        }
        coeffs[0] = point;
        Self { coeffs }
    }

    pub fn constant(value: HpReal, order: usize) -> Self {
        let prec = value.prec();
        let mut coeffs = vec![Float::new(prec); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// Builds a jet from explicit coefficients; panics on an empty slice.
    pub fn from_coeffs(coeffs: Vec<Float>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Float {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Float> {
        self.coeffs
    }

    fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    fn zero(&self) -> Float {
        Float::new(self.prec())
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(&Float, &Float) -> Float) -> Self {
        debug_assert_eq!(self.order(), rhs.order(), "jet orders differ");
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: &Float) -> Self {
        let prec = self.prec();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| Float::with_val(prec, a * factor))
                .collect(),
        }
    }

    /// `sin` and `cos` share one recurrence:
    /// `s_k = (1/k) sum j a_j c_{k-j}`, `c_k = -(1/k) sum j a_j s_{k-j}`.
    fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec();
        let n = self.coeffs.len();
        let mut s = vec![self.zero(); n];
        let mut c = vec![self.zero(); n];
        let (s0, c0) = self.coeffs[0].clone().sin_cos(Float::new(prec));
        s[0] = s0;
        c[0] = c0;
        for k in 1..n {
            let mut ss = self.zero();
            let mut cc = self.zero();
            for j in 1..=k {
                let ja = Float::with_val(prec, &self.coeffs[j] * j as u32);
                ss += Float::with_val(prec, &ja * &c[k - j]);
                cc += Float::with_val(prec, &ja * &s[k - j]);
            }
            s[k] = ss / k as u32;
            c[k] = -(cc / k as u32);
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }
}

impl Scalar for TaylorJet {
    fn constant_like(&self, value: HpReal) -> Self {
        Self::constant(Float::with_val(self.prec(), value), self.order())
    }

    fn point(&self) -> &HpReal {
        &self.coeffs[0]
    }

    fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec();
        self.zip_with(rhs, |a, b| Float::with_val(prec, a + b))
    }

    fn sub(&self, rhs: &Self) -> Self {
        let prec = self.prec();
        self.zip_with(rhs, |a, b| Float::with_val(prec, a - b))
    }

    fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec();
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = self.zero();
                for j in 0..=k {
                    acc += Float::with_val(prec, &self.coeffs[j] * &rhs.coeffs[k - j]);
                }
                acc
            })
            .collect();
        Self { coeffs }
    }

    fn div(&self, rhs: &Self) -> Result<Self, DomainError> {
        let pivot = &rhs.coeffs[0];
        if pivot.is_zero() {
            return Err(DomainError::DivisionByZero);
        }
        let prec = self.prec();
        let n = self.coeffs.len();
        let mut q: Vec<Float> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= Float::with_val(prec, &rhs.coeffs[j] * &q[k - j]);
            }
            q.push(finite(acc / pivot)?);
        }
        Ok(Self { coeffs: q })
    }

    fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    fn sin(&self) -> Self {
        self.sin_cos().0
    }

    fn cos(&self) -> Self {
        self.sin_cos().1
    }

    fn exp(&self) -> Result<Self, DomainError> {
        let prec = self.prec();
        let n = self.coeffs.len();
        let mut e = vec![finite(self.coeffs[0].clone().exp())?];
        for k in 1..n {
            let mut acc = self.zero();
            for j in 1..=k {
                let ja = Float::with_val(prec, &self.coeffs[j] * j as u32);
                acc += Float::with_val(prec, &ja * &e[k - j]);
            }
            e.push(acc / k as u32);
        }
        Ok(Self { coeffs: e })
    }

    fn ln(&self) -> Result<Self, DomainError> {
        let a0 = &self.coeffs[0];
        if *a0 <= 0 {
            return Err(DomainError::LogOfNonPositive);
        }
        let prec = self.prec();
        let n = self.coeffs.len();
        let mut l = vec![a0.clone().ln()];
        // a * l' = a'  =>  k a_0 l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}
        for k in 1..n {
            let mut acc = Float::with_val(prec, &self.coeffs[k] * k as u32);
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                let jl = Float::with_val(prec, lj * j as u32);
                acc -= Float::with_val(prec, &jl * &self.coeffs[k - j]);
            }
            l.push(acc / k as u32 / a0);
        }
        Ok(Self { coeffs: l })
    }

    fn atan(&self) -> Self {
        // r' (1 + a^2) = a'
        let prec = self.prec();
        let n = self.coeffs.len();
        let q = self
            .mul(self)
            .add(&self.constant_like(Float::with_val(prec, 1)));
        let mut r = vec![self.coeffs[0].clone().atan()];
        for k in 1..n {
            let mut acc = Float::with_val(prec, &self.coeffs[k] * k as u32);
            for (j, rj) in r.iter().enumerate().take(k).skip(1) {
                let jr = Float::with_val(prec, rj * j as u32);
                acc -= Float::with_val(prec, &jr * &q.coeffs[k - j]);
            }
            r.push(acc / k as u32 / &q.coeffs[0]);
        }
        Self { coeffs: r }
    }

    fn sqrt(&self) -> Result<Self, DomainError> {
        let a0 = &self.coeffs[0];
        if *a0 < 0 {
            return Err(DomainError::SqrtOfNegative);
        }
        if a0.is_zero() && self.order() > 0 {
            return Err(DomainError::NotDifferentiable);
        }
        let prec = self.prec();
        let n = self.coeffs.len();
        let mut s = vec![a0.clone().sqrt()];
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                acc -= Float::with_val(prec, &s[j] * &s[k - j]);
            }
            s.push(acc / 2u32 / &s[0]);
        }
        Ok(Self { coeffs: s })
    }

    fn abs(&self) -> Result<Self, DomainError> {
        match self.coeffs[0].cmp0() {
            Some(std::cmp::Ordering::Greater) => Ok(self.clone()),
            Some(std::cmp::Ordering::Less) => Ok(self.neg()),
            _ if self.order() == 0 => Ok(self.clone()),
            _ => Err(DomainError::NotDifferentiable),
        }
    }

    fn powi(&self, exponent: i32) -> Result<Self, DomainError> {
        let one = self.constant_like(Float::with_val(self.prec(), 1));
        let mut result = one.clone();
        let mut base = self.clone();
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if exponent < 0 {
            one.div(&result)
        } else {
            Ok(result)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: u32 = 256;

    fn var(p: f64, k: usize) -> TaylorJet {
        TaylorJet::variable(Float::with_val(BITS, p), k)
    }

    fn close(a: &Float, b: &Float, tol_log2: i32) -> bool {
        let d = Float::with_val(BITS, a - b).abs();
        d < Float::with_val(BITS, 1) >> (-tol_log2)
    }

    fn rational(num: i64, den: i64) -> Float {
        Float::with_val(BITS, num) / den
    }

    #[test]
    fn exp_maclaurin() {
        let e = var(0.0, 3).exp().unwrap();
        let want = [
            rational(1, 1),
            rational(1, 1),
            rational(1, 2),
            rational(1, 6),
        ];
        for (got, want) in e.coeffs().iter().zip(&want) {
            assert!(close(got, want, -250), "{got} vs {want}");
        }
    }

    #[test]
    fn sin_maclaurin() {
        let s = var(0.0, 3).sin();
        let want = [
            rational(0, 1),
            rational(1, 1),
            rational(0, 1),
            rational(-1, 6),
        ];
        for (got, want) in s.coeffs().iter().zip(&want) {
            assert!(close(got, want, -250), "{got} vs {want}");
        }
    }

    #[test]
    fn ln_of_one_plus_t() {
        // ln(1 + t) = t - t^2/2 + t^3/3 - t^4/4
        let l = var(1.0, 4).ln().unwrap();
        let want = [0, 1, -1, 1, -1].iter().enumerate().map(|(k, s)| {
            if k == 0 {
                rational(0, 1)
            } else {
                rational(*s, k as i64)
            }
        });
        for (got, want) in l.coeffs().iter().zip(want) {
            assert!(close(got, &want, -250));
        }
    }

    #[test]
    fn atan_maclaurin() {
        // atan t = t - t^3/3 + t^5/5
        let r = var(0.0, 5).atan();
        let want = [0, 1, 0, -1, 0, 1];
        for (k, (got, s)) in r.coeffs().iter().zip(want).enumerate() {
            let w = if s == 0 {
                rational(0, 1)
            } else {
                rational(s, k as i64)
            };
            assert!(close(got, &w, -250), "k={k}: {got}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let x = var(2.5, 6);
        let s = x.sqrt().unwrap();
        let back = s.mul(&s);
        for (got, want) in back.coeffs().iter().zip(x.coeffs()) {
            assert!(close(got, want, -248));
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = var(0.7, 8);
        let num = x.exp().unwrap();
        let den = x.cos();
        let q = num.div(&den).unwrap();
        let back = q.mul(&den);
        for (got, want) in back.coeffs().iter().zip(num.coeffs()) {
            assert!(close(got, want, -245));
        }
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = var(1.3, 5).sin();
        let p = x.powi(3).unwrap();
        let m = x.mul(&x).mul(&x);
        for (a, b) in p.coeffs().iter().zip(m.coeffs()) {
            assert!(close(a, b, -248));
        }
        let inv = x.powi(-2).unwrap().mul(&x.mul(&x));
        assert!(close(inv.coeff(0), &rational(1, 1), -248));
        for c in &inv.coeffs()[1..] {
            assert!(close(c, &rational(0, 1), -240));
        }
    }

    #[test]
    fn non_smooth_points_are_errors() {
        assert_eq!(var(0.0, 2).abs(), Err(DomainError::NotDifferentiable));
        assert_eq!(var(0.0, 2).sqrt(), Err(DomainError::NotDifferentiable));
        assert_eq!(var(-1.0, 2).ln(), Err(DomainError::LogOfNonPositive));
        let zero = TaylorJet::constant(Float::new(BITS), 2);
        assert_eq!(var(1.0, 2).div(&zero), Err(DomainError::DivisionByZero));
    }

    #[test]
    fn coefficients_are_causal() {
        // Perturbing a_5 must leave coefficients 0..5 of every result unchanged.
        let x = var(0.4, 8).exp().unwrap();
        let mut bumped = x.clone().into_coeffs();
        bumped[5] += 1u32;
        let y = TaylorJet::from_coeffs(bumped);
        let pairs = [
            (x.sin(), y.sin()),
            (x.ln().unwrap(), y.ln().unwrap()),
            (x.atan(), y.atan()),
            (x.mul(&x), y.mul(&y)),
        ];
        for (a, b) in pairs {
            assert_eq!(&a.coeffs()[..5], &b.coeffs()[..5]);
            assert_ne!(a.coeff(5), b.coeff(5));
        }
    }
}
