//! ζ-integers and ζ-dimensions at `ζ = exp(iπ/l)`, `l = ℓ + h`.
//!
//! Every sine that occurs has the form `sin(πk/l)` for an integer `k`, so a
//! [`LevelContext`] tabulates `sin(πj/l)` for the residues `j mod 2l` once and
//! all products are evaluated from the table.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::real::{MathConsts, Real, MIN_PRECISION_BITS};
use crate::rootsys::{pair, RootSystem, Weight};

/// Extra bits carried while building the sine table.
const GUARD_BITS: usize = 32;

/// Level data shared by all evaluations at a fixed `ℓ`.
#[derive(Debug, Clone)]
pub struct LevelContext<'a> {
    rs: &'a RootSystem,
    level: u32,
    shifted_level: i64,
    precision_bits: usize,
    sines: Vec<Real>,
}

/// A value together with the largest magnitude met while forming it.
#[derive(Debug, Clone, PartialEq)]
pub struct QReal {
    pub value: Real,
    pub magnitude_scale: Real,
}

impl QReal {
    pub fn exact(value: Real) -> Self {
        let prec = value.precision();
        let magnitude_scale = value.abs().max(&Real::one(prec));
        QReal {
            value,
            magnitude_scale,
        }
    }

    // The scale is carried to first order like an absolute error bound in
    // units of the working epsilon: it adds under sums and follows the
    // product rule under products.

    pub fn add(&self, other: &QReal) -> QReal {
        QReal {
            value: &self.value + &other.value,
            magnitude_scale: &self.magnitude_scale + &other.magnitude_scale,
        }
    }

    pub fn sub(&self, other: &QReal) -> QReal {
        QReal {
            value: &self.value - &other.value,
            magnitude_scale: &self.magnitude_scale + &other.magnitude_scale,
        }
    }

    pub fn mul(&self, other: &QReal) -> QReal {
        QReal {
            value: &self.value * &other.value,
            magnitude_scale: self.value.abs() * &other.magnitude_scale
                + other.value.abs() * &self.magnitude_scale,
        }
    }

    pub fn div(&self, d: &QReal) -> QReal {
        let da = d.value.abs();
        QReal {
            value: &self.value / &d.value,
            magnitude_scale: &self.magnitude_scale / &da
                + self.value.abs() * &d.magnitude_scale / da.square(),
        }
    }

    pub fn scale_by(&self, m: u64) -> QReal {
        let mr = Real::from_u64(m, self.value.precision());
        QReal {
            value: &mr * &self.value,
            magnitude_scale: &mr * &self.magnitude_scale,
        }
    }
}

impl<'a> LevelContext<'a> {
    pub fn new(rs: &'a RootSystem, level: u32, precision_bits: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::Level);
        }
        if precision_bits < MIN_PRECISION_BITS {
            return Err(Error::Precision(precision_bits));
        }
        let l = level as i64 + rs.coxeter_number();
        let mut cc = MathConsts::new();
        let wp = precision_bits + GUARD_BITS;
        let pi = cc.pi(wp);
        // sin(πj/l) for 0 ≤ j ≤ l/2, the rest from sin(π - x) = sin x and
        // sin(x + π) = -sin x.
        let half: Vec<Real> = (0..=l / 2)
            .map(|j| {
                let x = &pi * &Real::from_ratio(j, l, wp);
                x.sin(&mut cc).with_precision(precision_bits)
            })
            .collect();
        let mut sines = Vec::with_capacity(2 * l as usize);
        for j in 0..2 * l {
            let r = j % l;
            let base = if r <= l / 2 {
                half[r as usize].clone()
            } else {
                half[(l - r) as usize].clone()
            };
            sines.push(if j < l { base } else { -base });
        }
        sines[0] = Real::zero(precision_bits);
        sines[l as usize] = Real::zero(precision_bits);
        Ok(LevelContext {
            rs,
            level,
            shifted_level: l,
            precision_bits,
            sines,
        })
    }

    pub fn root_system(&self) -> &'a RootSystem {
        self.rs
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `l = ℓ + h`.
    pub fn shifted_level(&self) -> i64 {
        self.shifted_level
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// `2^{-p/2} · scale`.
    pub fn zero_tolerance(&self, scale: &Real) -> Real {
        Real::pow2(-(self.precision_bits as i32) / 2, self.precision_bits) * scale.abs()
    }

    /// `sin(πk/l)` from the residue of `k` mod `2l`.
    pub fn sin_pi_over_l(&self, k: i64) -> &Real {
        let r = k.mod_floor(&(2 * self.shifted_level));
        &self.sines[r as usize]
    }

    pub fn one(&self) -> Real {
        Real::one(self.precision_bits)
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.precision_bits)
    }
}

/// `[k]_ζ = sin(kπ/l) / sin(π/l)`.
pub fn zeta_integer(k: i64, ctx: &LevelContext<'_>) -> QReal {
    let v = ctx.sin_pi_over_l(k) / ctx.sin_pi_over_l(1);
    QReal::exact(v)
}

/// Whether some factor of the product vanishes: `(λ+ρ|β) ≡ 0 mod l`.
pub fn qdim_vanishes(lambda: &Weight, ctx: &LevelContext<'_>) -> bool {
    let rs = ctx.rs;
    let l = ctx.shifted_level;
    rs.positive_roots().iter().zip(rs.heights()).any(|(b, &ht)| {
        let p = pair(lambda.coeffs(), b);
        p != 0 && (p + ht).mod_floor(&l) == 0
    })
}

/// ζ-dimension of a dominant weight.
pub fn qdim(lambda: &Weight, ctx: &LevelContext<'_>) -> Result<QReal> {
    ctx.rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant);
    }
    Ok(qdim_product(lambda, ctx))
}

/// The same sine product evaluated at an arbitrary integral weight.
pub fn qdim_formal(lambda: &Weight, ctx: &LevelContext<'_>) -> Result<QReal> {
    ctx.rs.check_weight(lambda)?;
    Ok(qdim_product(lambda, ctx))
}

fn qdim_product(lambda: &Weight, ctx: &LevelContext<'_>) -> QReal {
    let prec = ctx.precision_bits;
    if qdim_vanishes(lambda, ctx) {
        return QReal {
            value: Real::zero(prec),
            magnitude_scale: Real::one(prec),
        };
    }
    let rs = ctx.rs;
    let mut acc = Real::one(prec);
    let mut scale = Real::one(prec);
    for (b, &ht) in rs.positive_roots().iter().zip(rs.heights()) {
        let p = pair(lambda.coeffs(), b);
        if p == 0 {
            continue;
        }
        acc = acc * ctx.sin_pi_over_l(p + ht) / ctx.sin_pi_over_l(ht);
        let m = acc.abs();
        if m > scale {
            scale = m;
        }
    }
    QReal {
        value: acc,
        magnitude_scale: scale,
    }
}

/// Weyl's dimension formula in exact integer arithmetic.
pub fn qdim_classical(rs: &RootSystem, lambda: &Weight) -> Result<BigUint> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant);
    }
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for (b, &ht) in rs.positive_roots().iter().zip(rs.heights()) {
        let p = pair(lambda.coeffs(), b);
        num *= (p + ht) as u64;
        den *= ht as u64;
    }
    let (q, r) = num.div_rem(&den);
    if r != BigUint::from(0u32) {
        return Err(Error::Internal("Weyl dimension is not an integer".into()));
    }
    Ok(q)
}

/// Checks `f(k+2l) = f(k)` and `f(k+l) = (-1)^{δ_i} f(k)` for
/// `f(k) = d_ζ(kϖ_i)` evaluated formally on `0 ≤ k ≤ 4l`.
pub fn qdim_periodicity_check(node: usize, ctx: &LevelContext<'_>) -> Result<bool> {
    let rs = ctx.rs;
    rs.check_node(node)?;
    let l = ctx.shifted_level;
    let n = rs.rank();
    let vals: Vec<QReal> = (0..=4 * l)
        .map(|k| qdim_product(&Weight::fundamental(n, node, k), ctx))
        .collect();
    let odd = rs.delta(node)? % 2 == 1;
    let close = |a: &QReal, b: &Real, sb: &Real| {
        let scale = a.magnitude_scale.max(sb);
        (&a.value - b).abs() <= ctx.zero_tolerance(&scale)
    };
    for k in 0..=2 * l as usize {
        let v = &vals[k + 2 * l as usize];
        if !close(&vals[k], &v.value, &v.magnitude_scale) {
            return Ok(false);
        }
    }
    for k in 0..=3 * l as usize {
        let v = &vals[k + l as usize];
        let expect = if odd { -&v.value } else { v.value.clone() };
        if !close(&vals[k], &expect, &v.magnitude_scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cache of ζ-dimensions keyed by weight, for one level context.
#[derive(Debug, Default, Clone)]
pub struct QdimMemo {
    map: BTreeMap<Weight, QReal>,
}

impl QdimMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, lambda: &Weight, ctx: &LevelContext<'_>) -> Result<&QReal> {
        if !self.map.contains_key(lambda) {
            let v = qdim_formal(lambda, ctx)?;
            self.map.insert(lambda.clone(), v);
        }
        Ok(&self.map[lambda])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::TypeLabel;
    use alloc::vec;

    fn rs(label: TypeLabel) -> RootSystem {
        RootSystem::exceptional(label).unwrap()
    }

    fn close_f64(x: &Real, y: f64, tol: f64) -> bool {
        (x.to_f64() - y).abs() <= tol * y.abs().max(1.0)
    }

    #[test]
    fn zeta_integers() {
        // l = 4 from A_1 at level 2.
        let a1 = RootSystem::type_a(1).unwrap();
        let ctx = LevelContext::new(&a1, 2, 128).unwrap();
        assert_eq!(ctx.shifted_level(), 4);
        let two = zeta_integer(2, &ctx).value;
        let sqrt2 = Real::from_i64(2, 128).sqrt();
        assert!((&two - &sqrt2).abs() < Real::pow2(-120, 128));
        assert!(zeta_integer(0, &ctx).value.is_zero());
        assert!(zeta_integer(4, &ctx).value.is_zero());
        assert_eq!(zeta_integer(1, &ctx).value, Real::one(128));
        for k in -9..9 {
            let a = zeta_integer(k, &ctx).value;
            let odd = zeta_integer(-k, &ctx).value;
            let shifted = zeta_integer(k + 4, &ctx).value;
            assert_eq!(a, -odd);
            assert_eq!(a, -shifted);
        }
    }

    #[test]
    fn sine_table_matches_f64() {
        let e7 = rs(TypeLabel::E7);
        let ctx = LevelContext::new(&e7, 5, 128).unwrap();
        let l = ctx.shifted_level() as f64;
        for k in -60..60 {
            let expect = (core::f64::consts::PI * k as f64 / l).sin();
            assert!((ctx.sin_pi_over_l(k).to_f64() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_context() {
        let e6 = rs(TypeLabel::E6);
        assert_eq!(LevelContext::new(&e6, 0, 128).unwrap_err(), Error::Level);
        assert_eq!(LevelContext::new(&e6, 3, 32).unwrap_err(), Error::Precision(32));
    }

    #[test]
    fn trivial_and_vanishing_weights() {
        let e6 = rs(TypeLabel::E6);
        for level in 1..6u32 {
            let ctx = LevelContext::new(&e6, level, 128).unwrap();
            assert_eq!(qdim(&Weight::zero(6), &ctx).unwrap().value, Real::one(128));
            let l = ctx.shifted_level();
            let v = qdim(&Weight::fundamental(6, 2, l), &ctx).unwrap().value;
            assert!(close_f64(&v, 1.0, 1e-25));
            if level % 2 == 1 {
                let w = Weight::fundamental(6, 2, (level as i64 + 1) / 2);
                assert!(qdim(&w, &ctx).unwrap().value.is_zero());
            }
        }
        let e7 = rs(TypeLabel::E7);
        for level in 1..5u32 {
            let ctx = LevelContext::new(&e7, level, 128).unwrap();
            let l = ctx.shifted_level();
            let v = qdim(&Weight::fundamental(7, 2, l), &ctx).unwrap().value;
            assert!(close_f64(&v, -1.0, 1e-25));
        }
        let ctx = LevelContext::new(&e7, 2, 128).unwrap();
        let mut w = Weight::zero(7).coeffs().to_vec();
        w[0] = -1;
        assert_eq!(qdim(&Weight::new(w), &ctx).unwrap_err(), Error::NotDominant);
    }

    #[test]
    fn exact_zero_rule_agrees_with_float_product() {
        let e6 = rs(TypeLabel::E6);
        let ctx = LevelContext::new(&e6, 3, 128).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let w = Weight::new(vec![a, b, 0, 0, 0, 1]);
                let v = qdim(&w, &ctx).unwrap();
                // Recompute without the congruence shortcut.
                let mut acc = 1.0f64;
                let l = ctx.shifted_level() as f64;
                for (beta, &ht) in e6.positive_roots().iter().zip(e6.heights()) {
                    let p = pair(w.coeffs(), beta) as f64;
                    let t = core::f64::consts::PI / l;
                    acc *= ((p + ht as f64) * t).sin() / (ht as f64 * t).sin();
                }
                if v.value.is_zero() {
                    assert!(acc.abs() < 1e-9);
                } else {
                    assert!(close_f64(&v.value, acc, 1e-9));
                }
            }
        }
    }

    #[test]
    fn classical_dimensions() {
        let e6 = rs(TypeLabel::E6);
        assert_eq!(qdim_classical(&e6, &Weight::zero(6)).unwrap(), BigUint::from(1u32));
        assert_eq!(
            qdim_classical(&e6, &Weight::fundamental(6, 1, 1)).unwrap(),
            BigUint::from(27u32)
        );
        for (label, dim) in [(TypeLabel::E6, 78u32), (TypeLabel::E7, 133), (TypeLabel::E8, 248)] {
            let r = rs(label);
            let d = qdim_classical(&r, &r.theta_weight()).unwrap();
            assert_eq!(d, BigUint::from(dim));
            assert_eq!(dim as usize, r.rank() + 2 * r.num_positive_roots());
        }
        let e7 = rs(TypeLabel::E7);
        assert_eq!(
            qdim_classical(&e7, &Weight::fundamental(7, 7, 1)).unwrap(),
            BigUint::from(56u32)
        );
        let e8 = rs(TypeLabel::E8);
        assert_eq!(
            qdim_classical(&e8, &Weight::fundamental(8, 1, 1)).unwrap(),
            BigUint::from(3875u32)
        );
    }

    #[test]
    fn large_level_approaches_classical() {
        let e6 = rs(TypeLabel::E6);
        let ctx = LevelContext::new(&e6, 200, 128).unwrap();
        for w in [Weight::fundamental(6, 1, 1), Weight::fundamental(6, 6, 1)] {
            let q = qdim(&w, &ctx).unwrap().value.to_f64();
            let c = qdim_classical(&e6, &w).unwrap();
            let c = c.to_u64_digits().first().copied().unwrap_or(0) as f64;
            assert!(((q - c) / c).abs() < 1e-2, "{q} vs {c}");
        }
    }

    #[test]
    fn precision_convergence() {
        let e8 = rs(TypeLabel::E8);
        let lo = LevelContext::new(&e8, 7, 128).unwrap();
        let hi = LevelContext::new(&e8, 7, 256).unwrap();
        let w = Weight::new(vec![1, 0, 0, 0, 0, 0, 0, 2]);
        let a = qdim(&w, &lo).unwrap().value;
        let b = qdim(&w, &hi).unwrap().value.with_precision(128);
        assert!(!a.is_zero());
        assert!(crate::real::rel_diff(&a, &b) < Real::pow2(-64, 128));
    }

    #[test]
    fn periodicity() {
        let e7 = rs(TypeLabel::E7);
        let e6 = rs(TypeLabel::E6);
        for level in [1u32, 4] {
            let c7 = LevelContext::new(&e7, level, 128).unwrap();
            for i in 1..=7 {
                assert!(qdim_periodicity_check(i, &c7).unwrap(), "E7 node {i}");
            }
            let c6 = LevelContext::new(&e6, level, 128).unwrap();
            for i in 1..=6 {
                assert!(qdim_periodicity_check(i, &c6).unwrap(), "E6 node {i}");
            }
            // E7 node 7 flips sign under k -> k + l.
            let l = c7.shifted_level();
            let a = qdim(&Weight::fundamental(7, 7, 1), &c7).unwrap().value;
            let b = qdim(&Weight::fundamental(7, 7, 1 + l), &c7).unwrap().value;
            assert!(close_f64(&(a + b), 0.0, 1e-25));
        }
    }

    #[test]
    fn memo_reuses_values() {
        let e6 = rs(TypeLabel::E6);
        let ctx = LevelContext::new(&e6, 2, 128).unwrap();
        let mut memo = QdimMemo::new();
        let w = Weight::fundamental(6, 1, 1);
        let a = memo.get(&w, &ctx).unwrap().clone();
        let b = memo.get(&w, &ctx).unwrap().clone();
        assert_eq!(a, b);
        assert_eq!(memo.len(), 1);
    }
}
