use proptest::prelude::*;
use qslab_core::affweyl::{enumerate_alcove, in_alcove, reduce_to_dominant, si_dot, ReductionKind};
use qslab_core::qnum::{qdim, qdim_formal, qdim_vanishes, LevelContext};
use qslab_core::real::{rel_diff, MathConsts};
use qslab_core::seqanalysis::{
    branden_criterion, is_log_concave, l_operator, log_concavity_order, palindromize, pointwise_product,
    prefix_sums, Parity, RealSequence, Rootedness,
};
use qslab_core::{Real, RootSystem, TypeLabel, Weight};

const PREC: usize = 128;

fn exceptional() -> impl Strategy<Value = TypeLabel> {
    prop_oneof![Just(TypeLabel::E6), Just(TypeLabel::E7), Just(TypeLabel::E8)]
}

fn weight_for(rank: usize, lo: i64, hi: i64) -> impl Strategy<Value = Weight> {
    proptest::collection::vec(lo..=hi, rank).prop_map(Weight::new)
}

/// `a_0 = start`, `a_{k+1} = a_k r_k` with ratios `r_k = m_k / 4`. Sorting the
/// ratios in decreasing order makes the sequence log-concave; distinct ratios
/// make it strict. All products are exact at 128 bits.
fn ratio_sequence(start: u32, mut ratios: Vec<u32>, strict: bool) -> RealSequence {
    ratios.sort_unstable_by(|a, b| b.cmp(a));
    if strict {
        ratios.dedup();
    }
    let mut xs = vec![Real::from_i64(start as i64, PREC)];
    for m in ratios {
        let next = xs.last().unwrap() * &Real::from_ratio(m as i64, 4, PREC);
        xs.push(next);
    }
    RealSequence::new(xs).unwrap()
}

fn lc_sequence(strict: bool) -> impl Strategy<Value = RealSequence> {
    (1u32..50, proptest::collection::vec(1u32..64, 1..12)).prop_map(move |(s, r)| ratio_sequence(s, r, strict))
}

/// Coefficients, lowest first, of `Π (x + r_i)`.
fn poly_from_roots(roots: &[Real]) -> Vec<Real> {
    let mut c = vec![Real::one(PREC)];
    for r in roots {
        let mut next = vec![Real::zero(PREC); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] += &(ck * r);
            next[k + 1] += ck;
        }
        c = next;
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heights_lie_in_range(label in exceptional()) {
        let rs = RootSystem::exceptional(label).unwrap();
        let rho = Weight::rho(rs.rank());
        let h = rs.coxeter_number();
        for i in 0..rs.num_positive_roots() {
            let p = rs.pairing(&rho, i).unwrap();
            prop_assert!((1..h).contains(&p));
            prop_assert_eq!(p, rs.height(i));
        }
        let theta = rs.theta_weight();
        prop_assert_eq!(theta.coeffs().iter().filter(|&&c| c != 0).count(), 1);
        prop_assert_eq!(theta.coeffs().iter().sum::<i64>(), 1);
    }

    #[test]
    fn type_a_root_count(n in 1usize..9) {
        let rs = RootSystem::type_a(n).unwrap();
        prop_assert_eq!(rs.num_positive_roots(), n * (n + 1) / 2);
        prop_assert_eq!(rs.coxeter_number(), n as i64 + 1);
    }

    #[test]
    fn zero_rule_is_the_congruence(label in exceptional(), level in 1u32..6, seed in weight_for(8, -20, 40)) {
        let rs = RootSystem::exceptional(label).unwrap();
        let ctx = LevelContext::new(&rs, level, PREC).unwrap();
        let w = Weight::new(seed.coeffs()[..rs.rank()].to_vec());
        let shifted = &w + &Weight::rho(rs.rank());
        let l = ctx.shifted_level();
        let hits = (0..rs.num_positive_roots()).any(|i| rs.pairing(&shifted, i).unwrap().rem_euclid(l) == 0);
        prop_assert_eq!(qdim_vanishes(&w, &ctx), hits);
        let v = qdim_formal(&w, &ctx).unwrap().value;
        prop_assert_eq!(v.is_zero(), hits);
    }

    #[test]
    fn reduction_is_idempotent_and_signed(label in exceptional(), level in 1u32..5, seed in weight_for(8, -30, 30)) {
        let rs = RootSystem::exceptional(label).unwrap();
        let ctx = LevelContext::new(&rs, level, PREC).unwrap();
        let w = Weight::new(seed.coeffs()[..rs.rank()].to_vec());
        let r = reduce_to_dominant(&w, &ctx).unwrap();
        prop_assert_eq!(r.kind == ReductionKind::OnWall, qdim_vanishes(&w, &ctx));
        if let Some(d) = &r.dominant_weight {
            prop_assert!(in_alcove(&rs, d, level));
            let again = reduce_to_dominant(d, &ctx).unwrap();
            prop_assert_eq!(again.dominant_weight.as_ref(), Some(d));
            prop_assert_eq!(again.word_length, 0);
            let lhs = qdim_formal(&w, &ctx).unwrap().value;
            let rhs = qdim(d, &ctx).unwrap().value * Real::from_i64(r.sign as i64, PREC);
            prop_assert!(rel_diff(&lhs, &rhs) < Real::from_f64(1e-25, PREC));
        }
    }

    #[test]
    fn simple_reflections_are_involutions(label in exceptional(), seed in weight_for(8, -10, 10), node in 1usize..9) {
        let rs = RootSystem::exceptional(label).unwrap();
        let w = Weight::new(seed.coeffs()[..rs.rank()].to_vec());
        let i = 1 + (node - 1) % rs.rank();
        let img = si_dot(&rs, i, &w).unwrap();
        prop_assert_eq!(si_dot(&rs, i, &img).unwrap(), w);
    }

    #[test]
    fn precision_doubling_is_stable(label in exceptional(), level in 1u32..12, seed in weight_for(8, 0, 3)) {
        let rs = RootSystem::exceptional(label).unwrap();
        let w = Weight::new(seed.coeffs()[..rs.rank()].to_vec());
        let lo = LevelContext::new(&rs, level, 128).unwrap();
        let hi = LevelContext::new(&rs, level, 256).unwrap();
        let a = qdim(&w, &lo).unwrap().value;
        let b = qdim(&w, &hi).unwrap().value.with_precision(128);
        prop_assert!(rel_diff(&a, &b) < Real::pow2(-64, 128));
    }

    #[test]
    fn l_operator_keeps_length_and_endpoints(xs in proptest::collection::vec(-100i64..100, 1..12)) {
        let s = RealSequence::new(xs.iter().map(|&x| Real::from_i64(x, PREC)).collect()).unwrap();
        let t = l_operator(&s);
        prop_assert_eq!(t.len(), s.len());
        prop_assert_eq!(&t.entries()[0], &s.entries()[0].square());
        prop_assert_eq!(t.entries().last().unwrap(), &s.entries().last().unwrap().square());
    }

    #[test]
    fn real_negative_rooted_polynomials(roots in proptest::collection::vec(1i64..80, 1..9)) {
        let rs: Vec<Real> = roots.iter().map(|&m| Real::from_ratio(m, 8, PREC)).collect();
        let s = RealSequence::new(poly_from_roots(&rs)).unwrap();
        let v = branden_criterion(&s).unwrap();
        prop_assert_eq!(v.status, Rootedness::RealNegative);
        prop_assert_eq!(log_concavity_order(&s, 4, false), Some(4));
    }

    #[test]
    fn complex_pairs_are_detected(roots in proptest::collection::vec(1i64..80, 0..6), b in 0i64..8, extra in 1i64..40) {
        // x^2 + b x + c with b^2 - 4c <= -1.
        let c = (b * b + 1 + 3) / 4 + extra;
        let mut coeffs = poly_from_roots(&roots.iter().map(|&m| Real::from_ratio(m, 8, PREC)).collect::<Vec<_>>());
        let quad = [Real::from_i64(c, PREC), Real::from_i64(b, PREC), Real::one(PREC)];
        let mut prod = vec![Real::zero(PREC); coeffs.len() + 2];
        for (i, x) in coeffs.iter().enumerate() {
            for (j, q) in quad.iter().enumerate() {
                prod[i + j] += &(x * q);
            }
        }
        coeffs = prod;
        let v = branden_criterion(&RealSequence::new(coeffs).unwrap()).unwrap();
        prop_assert_eq!(v.status, Rootedness::NotRealNegative);
        let w = v.witness.unwrap();
        prop_assert!(w.root.im.abs() > w.radius);
    }

    #[test]
    fn downward_closure_of_the_alcove(label in exceptional(), level in 1u32..6) {
        let rs = RootSystem::exceptional(label).unwrap();
        for w in enumerate_alcove(&rs, level).unwrap() {
            for j in rs.nodes() {
                let lower = &w - &rs.simple_root_weight(j);
                if lower.is_dominant() {
                    prop_assert!(in_alcove(&rs, &lower, level));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn products_of_log_concave_sequences(a in lc_sequence(false), b in lc_sequence(true)) {
        let n = a.len().min(b.len());
        let a = RealSequence::new(a.entries()[..n].to_vec()).unwrap();
        let b = RealSequence::new(b.entries()[..n].to_vec()).unwrap();
        prop_assert!(is_log_concave(&a, false).unwrap());
        let ab = pointwise_product(&a, &b).unwrap();
        prop_assert!(is_log_concave(&ab, false).unwrap());
        prop_assert!(is_log_concave(&ab, true).unwrap());
        let aa = pointwise_product(&a, &a).unwrap();
        prop_assert!(is_log_concave(&aa, false).unwrap());
    }

    #[test]
    fn prefix_sums_stay_strict(a in lc_sequence(true)) {
        prop_assert!(is_log_concave(&a, true).unwrap());
        prop_assert!(is_log_concave(&prefix_sums(&a), true).unwrap());
    }

    #[test]
    fn reflections_stay_strict(a in lc_sequence(true)) {
        let n = a.len() - 1;
        let rising = n >= 1 && a.entries()[n - 1] < a.entries()[n];
        for parity in [Parity::Even, Parity::Odd] {
            match palindromize(&a, parity) {
                Ok(p) => {
                    prop_assert!(rising);
                    let extra = if parity == Parity::Even { 0 } else { 1 };
                    prop_assert_eq!(p.len(), 2 * n + 1 + extra);
                    prop_assert!(is_log_concave(&p, true).unwrap());
                    let e = p.entries();
                    for r in 0..p.len() {
                        prop_assert_eq!(&e[r], &e[p.len() - 1 - r]);
                    }
                }
                Err(_) => prop_assert!(!rising),
            }
        }
    }
}

#[test]
fn per_root_factor_identity() {
    // a_k = sin(π(k p + t)/l) with p = (ϖ_i|β), t = ht β.
    let mut cc = MathConsts::new();
    let pi = cc.pi(PREC);
    let tol = Real::pow2(-110, PREC);
    for label in [TypeLabel::E6, TypeLabel::E7, TypeLabel::E8] {
        let rs = RootSystem::exceptional(label).unwrap();
        for level in [4u32, 8] {
            let ctx = LevelContext::new(&rs, level, PREC).unwrap();
            let l = ctx.shifted_level();
            for i in rs.nodes() {
                let w = Weight::fundamental(rs.rank(), i, 1);
                for b in 0..rs.num_positive_roots() {
                    let p = rs.pairing(&w, b).unwrap();
                    let t = rs.height(b);
                    let a = |k: i64| ctx.sin_pi_over_l(k * p + t).clone();
                    let angle = &pi * &Real::from_ratio(2 * p, l, PREC);
                    let expect = (Real::one(PREC) - angle.cos(&mut cc)) / Real::from_i64(2, PREC);
                    assert!(!expect.is_negative());
                    for k in 1..=(level as i64) {
                        let lhs = a(k).square() - a(k - 1) * a(k + 1);
                        assert!((&lhs - &expect).abs() < tol, "{label} node {i} root {b} k {k}");
                    }
                }
            }
        }
    }
}
