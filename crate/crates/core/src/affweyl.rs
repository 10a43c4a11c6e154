//! The level-`l` dot action of the affine Weyl group on integral weights.
//!
//! All maps act on `μ = λ + ρ` in fundamental coordinates and are exact
//! integer affine maps. The affine reflection `s_0` is
//! `μ ↦ μ - ((μ|θ) - l) θ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qnum::LevelContext;
use crate::rootsys::{pair, RootSystem, Weight};

/// Largest level accepted by [`enumerate_alcove`].
pub const MAX_ALCOVE_LEVEL: u32 = 12;

/// A Coxeter generator of the affine Weyl group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    S0,
    /// `s_i` for a node `i` (1-based).
    S(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    Dominant,
    OnWall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineReduction {
    pub kind: ReductionKind,
    /// Present iff `kind == Dominant`.
    pub dominant_weight: Option<Weight>,
    /// `(-1)^{length}` of the applied word.
    pub sign: i8,
    pub word_length: usize,
}

fn shifted(lambda: &Weight) -> Vec<i64> {
    lambda.coeffs().iter().map(|c| c + 1).collect()
}

fn unshifted(mu: Vec<i64>) -> Weight {
    Weight::new(mu.into_iter().map(|c| c - 1).collect())
}

fn reflect_simple(rs: &RootSystem, i: usize, mu: &mut [i64]) {
    let m = mu[i - 1];
    if m == 0 {
        return;
    }
    for (j, v) in mu.iter_mut().enumerate() {
        *v -= m * rs.cartan()[j][i - 1];
    }
}

/// `μ ↦ μ - ((μ|β) - c) β` for β given by simple-root coefficients.
fn reflect_affine(rs: &RootSystem, beta: &[i64], c: i64, mu: &mut [i64]) {
    let t = pair(mu, beta) - c;
    if t == 0 {
        return;
    }
    let bw = rs.coeffs_to_weight(beta);
    for (v, b) in mu.iter_mut().zip(bw.coeffs()) {
        *v -= t * b;
    }
}

/// Dot action of a finite simple reflection.
pub fn si_dot(rs: &RootSystem, node: usize, lambda: &Weight) -> Result<Weight> {
    rs.check_node(node)?;
    rs.check_weight(lambda)?;
    let mut mu = shifted(lambda);
    reflect_simple(rs, node, &mut mu);
    Ok(unshifted(mu))
}

/// Dot action of the affine generator `s_0` at level `l`.
pub fn s0_dot(lambda: &Weight, ctx: &LevelContext<'_>) -> Result<Weight> {
    let rs = ctx.root_system();
    rs.check_weight(lambda)?;
    let mut mu = shifted(lambda);
    reflect_affine(rs, rs.marks(), ctx.shifted_level(), &mut mu);
    Ok(unshifted(mu))
}

/// Dot action of the affine reflection in the hyperplane `(μ|β) = m l`.
/// Parity is odd.
pub fn affine_reflection_dot(
    beta_index: usize,
    m: i64,
    lambda: &Weight,
    ctx: &LevelContext<'_>,
) -> Result<Weight> {
    let rs = ctx.root_system();
    rs.check_weight(lambda)?;
    let beta = rs
        .positive_roots()
        .get(beta_index)
        .ok_or(Error::RootOutOfRange {
            index: beta_index,
            count: rs.num_positive_roots(),
        })?;
    let mut mu = shifted(lambda);
    reflect_affine(rs, beta, m * ctx.shifted_level(), &mut mu);
    Ok(unshifted(mu))
}

/// Dot action of the translation `t_{l v}` for `v` in the root lattice,
/// given by simple-root coefficients. Parity is even.
pub fn translation_dot(coeffs: &[i64], lambda: &Weight, ctx: &LevelContext<'_>) -> Result<Weight> {
    let rs = ctx.root_system();
    rs.check_weight(lambda)?;
    if coeffs.len() != rs.rank() {
        return Err(Error::WeightRank {
            got: coeffs.len(),
            expected: rs.rank(),
        });
    }
    let v = rs.coeffs_to_weight(coeffs);
    let l = ctx.shifted_level();
    Ok(Weight::new(
        lambda
            .coeffs()
            .iter()
            .zip(v.coeffs())
            .map(|(a, b)| a + l * b)
            .collect(),
    ))
}

/// Applies a word right to left (the last generator acts first), returning
/// the image and the parity sign `(-1)^{len}`.
pub fn apply_word(word: &[Generator], lambda: &Weight, ctx: &LevelContext<'_>) -> Result<(Weight, i8)> {
    let rs = ctx.root_system();
    rs.check_weight(lambda)?;
    let mut mu = shifted(lambda);
    for g in word.iter().rev() {
        match *g {
            Generator::S0 => reflect_affine(rs, rs.marks(), ctx.shifted_level(), &mut mu),
            Generator::S(i) => {
                rs.check_node(i)?;
                reflect_simple(rs, i, &mut mu)
            }
        }
    }
    let sign = if word.len() % 2 == 0 { 1 } else { -1 };
    Ok((unshifted(mu), sign))
}

/// Moves `λ + ρ` into the closed fundamental alcove by greedy reflections.
pub fn reduce_to_dominant(lambda: &Weight, ctx: &LevelContext<'_>) -> Result<AffineReduction> {
    let rs = ctx.root_system();
    rs.check_weight(lambda)?;
    let l = ctx.shifted_level();
    let mut mu = shifted(lambda);
    let mut steps = 0usize;
    loop {
        if let Some(i) = mu.iter().position(|&m| m < 0) {
            reflect_simple(rs, i + 1, &mut mu);
        } else if pair(&mu, rs.marks()) > l {
            reflect_affine(rs, rs.marks(), l, &mut mu);
        } else {
            break;
        }
        steps += 1;
    }
    let sign = if steps % 2 == 0 { 1 } else { -1 };
    let on_wall = mu.contains(&0) || pair(&mu, rs.marks()) == l;
    Ok(if on_wall {
        AffineReduction {
            kind: ReductionKind::OnWall,
            dominant_weight: None,
            sign,
            word_length: steps,
        }
    } else {
        AffineReduction {
            kind: ReductionKind::Dominant,
            dominant_weight: Some(unshifted(mu)),
            sign,
            word_length: steps,
        }
    })
}

/// `λ_i ≥ 0` and `Σ a_i λ_i ≤ ℓ`.
pub fn in_alcove(rs: &RootSystem, lambda: &Weight, level: u32) -> bool {
    lambda.rank() == rs.rank()
        && lambda.is_dominant()
        && pair(lambda.coeffs(), rs.marks()) <= level as i64
}

/// All dominant weights of `C_ℓ^0`, in lexicographic order.
pub fn enumerate_alcove(rs: &RootSystem, level: u32) -> Result<Vec<Weight>> {
    if level > MAX_ALCOVE_LEVEL {
        return Err(Error::AlcoveTooLarge {
            level,
            max: MAX_ALCOVE_LEVEL,
        });
    }
    let n = rs.rank();
    let marks = rs.marks();
    let mut out = Vec::new();
    let mut cur = alloc::vec![0i64; n];
    fn rec(i: usize, budget: i64, marks: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == cur.len() {
            out.push(Weight::new(cur.clone()));
            return;
        }
        let mut c = 0;
        while c * marks[i] <= budget {
            cur[i] = c;
            rec(i + 1, budget - c * marks[i], marks, cur, out);
            c += 1;
        }
        cur[i] = 0;
    }
    rec(0, level as i64, marks, &mut cur, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{qdim, qdim_formal, qdim_vanishes};
    use crate::real::Real;
    use crate::rootsys::TypeLabel;
    use alloc::vec;

    fn rs(label: TypeLabel) -> RootSystem {
        RootSystem::exceptional(label).unwrap()
    }

    #[test]
    fn s0_images() {
        let e6 = rs(TypeLabel::E6);
        let e8 = rs(TypeLabel::E8);
        for level in 1..8u32 {
            let ctx = LevelContext::new(&e6, level, 64).unwrap();
            for k in -3..12 {
                let w = Weight::fundamental(6, 2, k);
                let img = s0_dot(&w, &ctx).unwrap();
                assert_eq!(img, Weight::fundamental(6, 2, level as i64 + 1 - k));
                assert_eq!(s0_dot(&img, &ctx).unwrap(), w);
            }
            let ctx = LevelContext::new(&e8, level, 64).unwrap();
            for s in 0..4 {
                for r in 0..4 {
                    let w = Weight::from_terms(8, &[(1, s), (8, r)]);
                    let expect = Weight::from_terms(8, &[(1, s), (8, level as i64 + 1 - 2 * s - r)]);
                    assert_eq!(s0_dot(&w, &ctx).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn simple_reflections() {
        let e7 = rs(TypeLabel::E7);
        let w = Weight::new(vec![2, -1, 0, 3, 1, 0, 4]);
        for i in 1..=7 {
            let img = si_dot(&e7, i, &w).unwrap();
            assert_eq!(si_dot(&e7, i, &img).unwrap(), w);
        }
        // (λ+ρ)_2 = 0 is a wall fixed point.
        assert_eq!(si_dot(&e7, 2, &w).unwrap(), w);
        assert!(si_dot(&e7, 8, &w).is_err());
    }

    #[test]
    fn e7_word_on_two_parameter_family() {
        use Generator::*;
        let e7 = rs(TypeLabel::E7);
        let word = [S0, S(1), S(3), S(4), S(5), S(6), S(7), S(6), S(5), S(4), S(3), S(1), S0];
        for level in 1..7u32 {
            let ctx = LevelContext::new(&e7, level, 64).unwrap();
            let ell = level as i64;
            for p in -2..10 {
                for q in -2..10 {
                    let w = Weight::from_terms(7, &[(2, p), (7, q)]);
                    let (img, sign) = apply_word(&word, &w, &ctx).unwrap();
                    let expect = Weight::from_terms(7, &[(2, ell - p + 7), (7, 2 * p + q - ell - 7)]);
                    assert_eq!(img, expect);
                    assert_eq!(sign, -1);
                }
            }
        }
    }

    #[test]
    fn reduction_basics() {
        let e6 = rs(TypeLabel::E6);
        for level in 1..6u32 {
            let ctx = LevelContext::new(&e6, level, 64).unwrap();
            for w in enumerate_alcove(&e6, level).unwrap() {
                let r = reduce_to_dominant(&w, &ctx).unwrap();
                assert_eq!(r.kind, ReductionKind::Dominant);
                assert_eq!(r.dominant_weight.as_ref(), Some(&w));
                assert_eq!((r.sign, r.word_length), (1, 0));
            }
            // s_0 sends (ℓ+1)ϖ_2 to 0, so its ζ-dimension is -1.
            let w = Weight::fundamental(6, 2, level as i64 + 1);
            let r = reduce_to_dominant(&w, &ctx).unwrap();
            assert_eq!(r.dominant_weight, Some(Weight::zero(6)));
            assert_eq!(r.sign, -1);
            assert!(!in_alcove(&e6, &w, level));
            if level % 2 == 1 {
                let w = Weight::fundamental(6, 2, (level as i64 + 1) / 2);
                let r = reduce_to_dominant(&w, &ctx).unwrap();
                assert_eq!(r.kind, ReductionKind::OnWall);
            }
        }
    }

    #[test]
    fn e8_vanishing_family() {
        let e8 = rs(TypeLabel::E8);
        for level in 1..5u32 {
            let ctx = LevelContext::new(&e8, level, 64).unwrap();
            for m in 1..=16 {
                for r in 0..6 {
                    let w = Weight::from_terms(8, &[(1, level as i64 + 13 + m), (8, r)]);
                    assert_eq!(reduce_to_dominant(&w, &ctx).unwrap().kind, ReductionKind::OnWall);
                    assert!(qdim(&w, &ctx).unwrap().value.is_zero());
                }
            }
        }
    }

    #[test]
    fn on_wall_matches_congruence_rule() {
        let e7 = rs(TypeLabel::E7);
        let ctx = LevelContext::new(&e7, 3, 128).unwrap();
        let mut x: u64 = 12345;
        for _ in 0..400 {
            let mut c = vec![0i64; 7];
            for v in c.iter_mut() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *v = ((x >> 33) % 31) as i64 - 15;
            }
            let w = Weight::new(c);
            let r = reduce_to_dominant(&w, &ctx).unwrap();
            assert_eq!(r.kind == ReductionKind::OnWall, qdim_vanishes(&w, &ctx));
            if let Some(d) = &r.dominant_weight {
                assert!(in_alcove(&e7, d, 3));
                let again = reduce_to_dominant(d, &ctx).unwrap();
                assert_eq!(again.dominant_weight.as_ref(), Some(d));
                let lhs = qdim_formal(&w, &ctx).unwrap().value;
                let rhs = qdim(d, &ctx).unwrap().value * Real::from_i64(r.sign as i64, 128);
                assert!(crate::real::rel_diff(&lhs, &rhs) < Real::pow2(-100, 128));
            }
        }
    }

    #[test]
    fn sigma_beta_is_affine_reflection() {
        let e8 = rs(TypeLabel::E8);
        let ctx = LevelContext::new(&e8, 2, 128).unwrap();
        let b = e8.root_index(&[2, 2, 3, 4, 3, 2, 1, 0]).unwrap();
        let w = Weight::from_terms(8, &[(1, 3), (8, 1)]);
        let s_beta = affine_reflection_dot(b, 0, &w, &ctx).unwrap();
        let composed = translation_dot(&e8.positive_roots()[b], &s_beta, &ctx).unwrap();
        assert_eq!(affine_reflection_dot(b, 1, &w, &ctx).unwrap(), composed);
        // Odd parity: the ζ-dimension flips sign.
        let a = qdim_formal(&w, &ctx).unwrap().value;
        let c = qdim_formal(&composed, &ctx).unwrap().value;
        assert!(crate::real::rel_diff(&a, &(-c)) < Real::pow2(-100, 128));
    }

    #[test]
    fn alcove_enumeration() {
        let e6 = rs(TypeLabel::E6);
        assert_eq!(enumerate_alcove(&e6, 0).unwrap(), vec![Weight::zero(6)]);
        let one = enumerate_alcove(&e6, 1).unwrap();
        assert_eq!(one.len(), 3);
        assert!(one.contains(&Weight::fundamental(6, 1, 1)));
        assert!(one.contains(&Weight::fundamental(6, 6, 1)));
        let e8 = rs(TypeLabel::E8);
        let two = enumerate_alcove(&e8, 2).unwrap();
        // a_1 = a_8 = 2 and every other mark exceeds 2.
        assert_eq!(two.len(), 3);
        for w in [
            Weight::zero(8),
            Weight::fundamental(8, 8, 1),
            Weight::fundamental(8, 1, 1),
        ] {
            assert!(two.contains(&w));
        }
        assert!(matches!(enumerate_alcove(&e8, 13), Err(Error::AlcoveTooLarge { .. })));
        for level in 0..8u32 {
            for i in 1..=8 {
                let k = level as i64 / e8.mark(i);
                assert!(in_alcove(&e8, &Weight::fundamental(8, i, k), level));
            }
        }
    }
}
