//! Explicit decompositions of Kirillov-Reshetikhin modules into irreducibles.
//!
//! Only the closed formulas known for minuscule-like nodes (Chari) and the two
//! `k = 1` decompositions for E7 nodes 4 and 5 (Kleber) are provided. Every
//! other node is reached through the Q-system in [`crate::qsolver`].

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qnum::{LevelContext, QReal, QdimMemo};
use crate::real::Real;
use crate::rootsys::{RootSystem, TypeLabel, Weight};

/// `W_k^{(i)} ≅ ⊕ m_λ V(λ)` as a module over the finite-type algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRDecomposition {
    pub node: usize,
    pub box_count: usize,
    pub terms: Vec<(u64, Weight)>,
}

impl KRDecomposition {
    fn new(node: usize, box_count: usize, terms: Vec<(u64, Weight)>) -> Self {
        debug_assert!(terms.iter().all(|(m, w)| *m >= 1 && w.is_dominant()));
        KRDecomposition {
            node,
            box_count,
            terms,
        }
    }

    /// Total multiplicity `Σ m_λ`.
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m).sum()
    }

    /// Checks multiplicities, distinctness, dominance and `λ ≤ kϖ_i`.
    pub fn validate(&self, rs: &RootSystem) -> Result<()> {
        let top = Weight::fundamental(rs.rank(), self.node, self.box_count as i64);
        for (idx, (m, w)) in self.terms.iter().enumerate() {
            rs.check_weight(w)?;
            if *m == 0 || !w.is_dominant() {
                return Err(Error::Internal("invalid KR term".to_string()));
            }
            if self.terms[..idx].iter().any(|(_, v)| v == w) {
                return Err(Error::Internal(alloc::format!("repeated weight {w}")));
            }
            if !rs.dominates(&top, w) {
                return Err(Error::Internal(alloc::format!("{w} is not below {top}")));
            }
        }
        Ok(())
    }
}

/// Whether a closed decomposition formula exists for every `k`.
pub fn has_chari_formula(label: TypeLabel, node: usize) -> bool {
    matches!(
        (label, node),
        (TypeLabel::E6, 1 | 2 | 6) | (TypeLabel::E7, 1 | 2 | 7) | (TypeLabel::E8, 1 | 8)
    )
}

/// Nodes with a closed formula, in increasing order.
pub fn chari_nodes(label: TypeLabel) -> Vec<usize> {
    (1..=label.rank().unwrap_or(0))
        .filter(|&i| has_chari_formula(label, i))
        .collect()
}

/// Chari's decomposition of `W_k^{(i)}`.
pub fn chari_decomposition(rs: &RootSystem, node: usize, k: usize) -> Result<KRDecomposition> {
    rs.check_node(node)?;
    let label = rs.label();
    if !has_chari_formula(label, node) {
        return Err(Error::UnsupportedKr {
            label: label.to_string(),
            node,
        });
    }
    let n = rs.rank();
    let ki = k as i64;
    let terms: Vec<Weight> = match (label, node) {
        (TypeLabel::E6, 1 | 6) | (TypeLabel::E7, 7) => vec![Weight::fundamental(n, node, ki)],
        (TypeLabel::E6, 2) | (TypeLabel::E7, 1) | (TypeLabel::E8, 8) => {
            (0..=ki).map(|r| Weight::fundamental(n, node, r)).collect()
        }
        (TypeLabel::E7, 2) => (0..=ki)
            .map(|r| Weight::from_terms(n, &[(2, r), (7, ki - r)]))
            .collect(),
        (TypeLabel::E8, 1) => (0..=ki)
            .flat_map(|r| (0..=ki - r).map(move |s| Weight::from_terms(n, &[(1, r), (8, s)])))
            .collect(),
        _ => unreachable!(),
    };
    Ok(KRDecomposition::new(
        node,
        k,
        terms.into_iter().map(|w| (1, w)).collect(),
    ))
}

/// Kleber's decompositions of `W_1^{(4)}` and `W_1^{(5)}` in type E7.
pub fn kleber_q1(rs: &RootSystem, node: usize) -> Result<KRDecomposition> {
    let unsupported = || Error::UnsupportedKr {
        label: rs.label().to_string(),
        node,
    };
    if rs.label() != TypeLabel::E7 {
        return Err(unsupported());
    }
    let w = |t: &[(usize, i64)]| Weight::from_terms(7, t);
    let terms = match node {
        5 => vec![
            (1, w(&[(5, 1)])),
            (1, w(&[(1, 1), (7, 1)])),
            (2, w(&[(2, 1)])),
            (2, w(&[(7, 1)])),
        ],
        4 => vec![
            (2, w(&[])),
            (4, w(&[(1, 1)])),
            (1, w(&[(1, 2)])),
            (3, w(&[(3, 1)])),
            (1, w(&[(4, 1)])),
            (4, w(&[(6, 1)])),
            (1, w(&[(7, 2)])),
            (1, w(&[(1, 1), (6, 1)])),
            (2, w(&[(2, 1), (7, 1)])),
        ],
        _ => return Err(unsupported()),
    };
    Ok(KRDecomposition::new(node, 1, terms))
}

/// In type A every KR module stays irreducible: `W_k^{(i)} = V(kϖ_i)`.
pub fn type_a_kr(rank: usize, node: usize, k: usize) -> Result<KRDecomposition> {
    if node == 0 || node > rank {
        return Err(Error::NodeOutOfRange { node, rank });
    }
    Ok(KRDecomposition::new(
        node,
        k,
        vec![(1, Weight::fundamental(rank, node, k as i64))],
    ))
}

/// `d_ζ(W) = Σ m_λ d_ζ(λ)`.
pub fn qdim_kr(dec: &KRDecomposition, ctx: &LevelContext<'_>) -> Result<QReal> {
    let mut memo = QdimMemo::new();
    qdim_kr_memo(dec, ctx, &mut memo)
}

/// As [`qdim_kr`], reusing cached ζ-dimensions.
pub fn qdim_kr_memo(dec: &KRDecomposition, ctx: &LevelContext<'_>, memo: &mut QdimMemo) -> Result<QReal> {
    let mut acc = QReal {
        value: Real::zero(ctx.precision_bits()),
        magnitude_scale: Real::zero(ctx.precision_bits()),
    };
    for (m, w) in &dec.terms {
        acc = acc.add(&memo.get(w, ctx)?.scale_by(*m));
    }
    Ok(acc)
}

/// `T_k = Σ_{r+s=k} d_ζ(sϖ_1 + rϖ_8)` in type E8, so that
/// `Q_k^{(1)} = Q_{k-1}^{(1)} + T_k`.
pub fn e8_layer_sum(k: usize, ctx: &LevelContext<'_>, memo: &mut QdimMemo) -> Result<Real> {
    let rs = ctx.root_system();
    if rs.label() != TypeLabel::E8 {
        return Err(Error::GridType);
    }
    let mut acc = ctx.zero();
    let k = k as i64;
    for s in 0..=k {
        let w = Weight::from_terms(8, &[(1, s), (8, k - s)]);
        acc += &memo.get(&w, ctx)?.value;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{qdim, zeta_integer};
    use crate::real::rel_diff;

    fn rs(label: TypeLabel) -> RootSystem {
        RootSystem::exceptional(label).unwrap()
    }

    fn close(a: &Real, b: &Real) -> bool {
        rel_diff(a, b) < Real::pow2(-100, a.precision())
    }

    #[test]
    fn chari_shapes() {
        let e6 = rs(TypeLabel::E6);
        let d = chari_decomposition(&e6, 1, 3).unwrap();
        assert_eq!(d.terms, vec![(1, Weight::fundamental(6, 1, 3))]);
        let e8 = rs(TypeLabel::E8);
        let d = chari_decomposition(&e8, 1, 2).unwrap();
        assert_eq!(d.terms.len(), 6);
        for w in [
            Weight::zero(8),
            Weight::fundamental(8, 1, 1),
            Weight::fundamental(8, 8, 1),
            Weight::fundamental(8, 1, 2),
            Weight::from_terms(8, &[(1, 1), (8, 1)]),
            Weight::fundamental(8, 8, 2),
        ] {
            assert!(d.terms.contains(&(1, w)));
        }
        for label in [TypeLabel::E6, TypeLabel::E7, TypeLabel::E8] {
            let r = rs(label);
            for i in chari_nodes(label) {
                let d0 = chari_decomposition(&r, i, 0).unwrap();
                assert_eq!(d0.terms, vec![(1, Weight::zero(r.rank()))]);
                for k in 0..5 {
                    chari_decomposition(&r, i, k).unwrap().validate(&r).unwrap();
                }
            }
        }
        assert!(matches!(
            chari_decomposition(&e6, 3, 1),
            Err(Error::UnsupportedKr { node: 3, .. })
        ));
    }

    #[test]
    fn kleber_decompositions() {
        let e7 = rs(TypeLabel::E7);
        let d5 = kleber_q1(&e7, 5).unwrap();
        assert_eq!((d5.terms.len(), d5.total_multiplicity()), (4, 6));
        let d4 = kleber_q1(&e7, 4).unwrap();
        assert_eq!(d4.terms.len(), 9);
        assert_eq!(d4.terms[0], (2, Weight::zero(7)));
        d4.validate(&e7).unwrap();
        d5.validate(&e7).unwrap();
        assert!(kleber_q1(&e7, 3).is_err());
        assert!(kleber_q1(&rs(TypeLabel::E6), 4).is_err());
    }

    #[test]
    fn q_at_level_is_one() {
        let e6 = rs(TypeLabel::E6);
        let e7 = rs(TypeLabel::E7);
        for level in 1..7u32 {
            let c6 = LevelContext::new(&e6, level, 128).unwrap();
            let d = chari_decomposition(&e6, 2, level as usize).unwrap();
            assert!(close(&qdim_kr(&d, &c6).unwrap().value, &Real::one(128)));
            // Q_{ℓ+1}^{(2)} = 0.
            let d = chari_decomposition(&e6, 2, level as usize + 1).unwrap();
            assert!(qdim_kr(&d, &c6).unwrap().value.abs() < Real::pow2(-100, 128));
            let c7 = LevelContext::new(&e7, level, 128).unwrap();
            let d = chari_decomposition(&e7, 2, level as usize).unwrap();
            assert!(close(&qdim_kr(&d, &c7).unwrap().value, &Real::one(128)));
        }
    }

    #[test]
    fn chari_values_positive_in_range() {
        for label in [TypeLabel::E6, TypeLabel::E7, TypeLabel::E8] {
            let r = rs(label);
            for level in 1..7u32 {
                let ctx = LevelContext::new(&r, level, 128).unwrap();
                for i in chari_nodes(label) {
                    for k in 0..=(level as i64 / r.mark(i)) as usize {
                        let d = chari_decomposition(&r, i, k).unwrap();
                        assert!(qdim_kr(&d, &ctx).unwrap().value.is_positive(), "{label} {i} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn prefix_sums_telescope() {
        let e7 = rs(TypeLabel::E7);
        let ctx = LevelContext::new(&e7, 4, 128).unwrap();
        for k in 1..10usize {
            let a = qdim_kr(&chari_decomposition(&e7, 1, k).unwrap(), &ctx).unwrap().value;
            let b = qdim_kr(&chari_decomposition(&e7, 1, k - 1).unwrap(), &ctx).unwrap().value;
            let t = qdim(&Weight::fundamental(7, 1, k as i64), &ctx).unwrap().value;
            assert!((a - b - t).abs() < Real::pow2(-100, 128));
        }
    }

    #[test]
    fn e8_layer_antisymmetry() {
        let e8 = rs(TypeLabel::E8);
        for level in 1..7u32 {
            let ctx = LevelContext::new(&e8, level, 128).unwrap();
            let mut memo = QdimMemo::new();
            let ell = level as usize;
            for k in 0..=ell / 2 {
                let a = e8_layer_sum(k + 1, &ctx, &mut memo).unwrap();
                let b = e8_layer_sum(ell - k, &ctx, &mut memo).unwrap();
                assert!((&a + &b).abs() < Real::pow2(-100, 128), "level {level} k {k}");
            }
            for k in 1..6 {
                let q = qdim_kr(&chari_decomposition(&e8, 1, k).unwrap(), &ctx).unwrap().value;
                let p = qdim_kr(&chari_decomposition(&e8, 1, k - 1).unwrap(), &ctx).unwrap().value;
                let t = e8_layer_sum(k, &ctx, &mut memo).unwrap();
                assert!((q - p - t).abs() < Real::pow2(-100, 128));
            }
        }
    }

    #[test]
    fn type_a_matches_zeta_integers() {
        let a1 = RootSystem::type_a(1).unwrap();
        assert_eq!(type_a_kr(1, 1, 2).unwrap().terms, vec![(1, Weight::new(vec![2]))]);
        assert_eq!(type_a_kr(2, 1, 1).unwrap().terms, vec![(1, Weight::new(vec![1, 0]))]);
        assert!(type_a_kr(2, 3, 1).is_err());
        let ctx = LevelContext::new(&a1, 5, 128).unwrap();
        for k in 0..12usize {
            let q = qdim_kr(&type_a_kr(1, 1, k).unwrap(), &ctx).unwrap().value;
            let z = zeta_integer(k as i64 + 1, &ctx).value;
            assert!((q - z).abs() < Real::pow2(-110, 128));
        }
    }
}
