//! Log-concavity of real sequences, the operator `L`, and real-rootedness of
//! the generating polynomial.
//!
//! `L` maps `(a_k)_{0≤k≤n}` to `(a_k² - a_{k-1}a_{k+1})` with `a_{-1} = a_{n+1} = 0`.
//! A sequence is `i`-fold log-concave when `L^j(a) ≥ 0` for every `j ≤ i`.
//! If `Σ a_k x^k` has only real negative roots, the sequence is infinitely
//! log-concave.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real::{MathConsts, Real};

/// A finite sequence with an absolute error bound for every entry.
///
/// Entries start with error `τ|a_k| + 2^16 τ² max(1, max|a|)`; derived
/// sequences propagate the bounds to first order plus the product terms.
/// Every sign decision compares a value against its propagated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence {
    entries: Vec<Real>,
    errors: Vec<Real>,
    tolerance: Real,
}

fn initial_errors(entries: &[Real], tolerance: &Real) -> Vec<Real> {
    let prec = entries[0].precision();
    let m = entries.iter().fold(Real::one(prec), |m, x| m.max(&x.abs()));
    let noise = tolerance.square() * Real::from_i64(1 << 16, prec) * m;
    entries.iter().map(|x| tolerance * &x.abs() + &noise).collect()
}

impl RealSequence {
    /// Tolerance defaults to `2^{-p/2}` at the entries' precision.
    pub fn new(entries: Vec<Real>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Precondition("sequence must be nonempty".into()));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("sequence entries must be finite".into()));
        }
        let prec = entries.iter().map(|x| x.precision()).min().unwrap_or(64);
        let tolerance = Real::pow2(-(prec as i32) / 2, prec);
        let errors = initial_errors(&entries, &tolerance);
        Ok(RealSequence {
            entries,
            errors,
            tolerance,
        })
    }

    pub fn from_f64(xs: &[f64], prec: usize) -> Result<Self> {
        Self::new(crate::real::from_f64_slice(xs, prec))
    }

    /// Replaces the relative tolerance and resets the error bounds from it.
    pub fn with_tolerance(mut self, tolerance: Real) -> Self {
        self.errors = initial_errors(&self.entries, &tolerance);
        self.tolerance = tolerance;
        self
    }

    pub fn entries(&self) -> &[Real] {
        &self.entries
    }

    /// Absolute error bound of each entry.
    pub fn errors(&self) -> &[Real] {
        &self.errors
    }

    pub fn tolerance(&self) -> &Real {
        &self.tolerance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn precision(&self) -> usize {
        self.entries[0].precision()
    }

    /// Rounding allowance for a freshly computed product or sum `x`.
    fn rounding(&self, x: &Real) -> Real {
        Real::pow2(4 - self.precision() as i32, self.precision()) * x.abs()
    }

    /// `a_i a_j` and its error bound.
    fn product(&self, i: usize, j: usize) -> (Real, Real) {
        let (a, e) = (&self.entries, &self.errors);
        let p = &a[i] * &a[j];
        let err = &a[i].abs() * &e[j] + &a[j].abs() * &e[i] + &e[i] * &e[j] + self.rounding(&p);
        (p, err)
    }

    /// Decides `p ≥ q` (or `p > q`) given error bounds of both sides.
    fn dominates(p: &(Real, Real), q: &(Real, Real), strict: bool) -> bool {
        let slack = &p.1 + &q.1;
        let d = &p.0 - &q.0;
        if strict {
            d > slack
        } else {
            d >= -slack
        }
    }

    fn all_nonnegative(&self, strict: bool) -> bool {
        self.entries
            .iter()
            .zip(&self.errors)
            .all(|(x, e)| if strict { x > e } else { *x >= -e })
    }

    fn all_positive(&self) -> bool {
        self.all_nonnegative(true)
    }

    /// `a_k a_m` against `a_{k-1} a_{m+1}` with out-of-range entries zero.
    fn pair(&self, k: usize, m: usize) -> ((Real, Real), (Real, Real)) {
        let zero = Real::zero(self.precision());
        let lhs = self.product(k, m);
        let rhs = if k == 0 || m + 1 == self.len() {
            (zero.clone(), zero)
        } else {
            self.product(k - 1, m + 1)
        };
        (lhs, rhs)
    }

    /// `a_k² ≥ a_{k-1}a_{k+1}` at every `k` with zero padding, i.e.
    /// `L(a) ≥ 0` entrywise.
    fn l_nonnegative(&self, strict: bool) -> bool {
        (0..self.len()).all(|k| {
            let (p, q) = self.pair(k, k);
            Self::dominates(&p, &q, strict)
        })
    }
}

/// One application of `L`, with propagated error bounds.
pub fn l_operator(seq: &RealSequence) -> RealSequence {
    let (entries, errors) = (0..seq.len())
        .map(|k| {
            let ((p, ep), (q, eq)) = seq.pair(k, k);
            let v = p - q;
            let e = ep + eq;
            (v, e)
        })
        .unzip();
    RealSequence {
        entries,
        errors,
        tolerance: seq.tolerance.clone(),
    }
}

/// Largest `i ≤ max_order` with `L^j(seq)` (strictly) nonnegative for every
/// `j ≤ i`; `None` if the sequence itself fails.
///
/// Each entry of `L(b)` is decided as the comparison `b_k² ≥ b_{k-1}b_{k+1}`
/// on the iterate `b` it is computed from.
pub fn log_concavity_order(seq: &RealSequence, max_order: usize, strict: bool) -> Option<usize> {
    if !seq.all_nonnegative(strict) {
        return None;
    }
    let mut cur = seq.clone();
    for i in 1..=max_order {
        if !cur.l_nonnegative(strict) {
            return Some(i - 1);
        }
        cur = l_operator(&cur);
    }
    Some(max_order)
}

/// `a_k² ≥ a_{k-1}a_{k+1}` (or `>`) for `1 ≤ k ≤ n-1`.
///
/// For positive sequences the pairwise form `a_k a_m ≥ a_{k-1} a_{m+1}`,
/// `1 ≤ k ≤ m ≤ n-1`, is evaluated as well; disagreement between the two
/// characterizations is reported as an internal error.
pub fn is_log_concave(seq: &RealSequence, strict: bool) -> Result<bool> {
    let n = seq.len();
    let holds = |k: usize, m: usize| {
        let (p, q) = seq.pair(k, m);
        RealSequence::dominates(&p, &q, strict)
    };
    let local = (1..n.saturating_sub(1)).all(|k| holds(k, k));
    if n >= 3 && seq.all_positive() {
        let pairwise = (1..n - 1).all(|k| (k..n - 1).all(|m| holds(k, m)));
        if pairwise != local {
            return Err(Error::Internal(
                "local and pairwise log-concavity disagree".into(),
            ));
        }
    }
    Ok(local)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Total length `2n + 1`: `b_r = a_r = b_{2n-r}`.
    Even,
    /// Total length `2n + 2`: `c_r = a_r = c_{2n+1-r}`.
    Odd,
}

/// Reflects a strictly log-concave positive sequence with `a_{n-1} < a_n`
/// about its last entry.
pub fn palindromize(seq: &RealSequence, parity: Parity) -> Result<RealSequence> {
    let a = &seq.entries;
    let n = a.len() - 1;
    if !seq.all_positive() || !is_log_concave(seq, true)? {
        return Err(Error::Precondition(
            "input must be positive and strictly log-concave".into(),
        ));
    }
    if n == 0 || a[n - 1] >= a[n] {
        return Err(Error::Precondition("need a_{n-1} < a_n".into()));
    }
    let skip = match parity {
        Parity::Even => 1,
        Parity::Odd => 0,
    };
    let mirror = |v: &Vec<Real>| {
        let mut out = v.clone();
        out.extend(v.iter().rev().skip(skip).cloned());
        out
    };
    let res = RealSequence {
        entries: mirror(a),
        errors: mirror(&seq.errors),
        tolerance: seq.tolerance.clone(),
    };
    if !is_log_concave(&res, true)? {
        return Err(Error::Internal("reflected sequence is not strictly log-concave".into()));
    }
    Ok(res)
}

/// `(a_k b_k)`.
pub fn pointwise_product(a: &RealSequence, b: &RealSequence) -> Result<RealSequence> {
    if a.len() != b.len() {
        return Err(Error::Precondition("lengths differ".into()));
    }
    let (entries, errors) = (0..a.len())
        .map(|k| {
            let (x, y) = (&a.entries[k], &b.entries[k]);
            let (ex, ey) = (&a.errors[k], &b.errors[k]);
            let v = x * y;
            let e = &x.abs() * ey + &y.abs() * ex + ex * ey + a.rounding(&v);
            (v, e)
        })
        .unzip();
    Ok(RealSequence {
        entries,
        errors,
        tolerance: a.tolerance.max(&b.tolerance),
    })
}

/// `(Σ_{k≤d} a_k)_d`.
pub fn prefix_sums(a: &RealSequence) -> RealSequence {
    let mut acc = Real::zero(a.precision());
    let mut err = Real::zero(a.precision());
    let (entries, errors) = a
        .entries
        .iter()
        .zip(&a.errors)
        .map(|(x, e)| {
            acc += x;
            err += e;
            err += &a.rounding(&acc);
            (acc.clone(), err.clone())
        })
        .unzip();
    RealSequence {
        entries,
        errors,
        tolerance: a.tolerance.clone(),
    }
}

/// A complex number over [`Real`], just enough for polynomial root finding.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    fn real(re: Real) -> Self {
        let p = re.precision();
        Complex { re, im: Real::zero(p) }
    }

    fn add(&self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    fn div(&self, o: &Complex) -> Complex {
        let d = o.norm_sqr();
        Complex::new(
            (&self.re * &o.re + &self.im * &o.im) / &d,
            (&self.im * &o.re - &self.re * &o.im) / &d,
        )
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rootedness {
    RealNegative,
    NotRealNegative,
    Inconclusive,
}

impl Rootedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Rootedness::RealNegative => "real_negative",
            Rootedness::NotRealNegative => "not_real_negative",
            Rootedness::Inconclusive => "inconclusive",
        }
    }
}

/// An approximate root with an inclusion radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RootWitness {
    pub root: Complex,
    pub radius: Real,
    /// Number of roots in the cluster containing this one.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootednessVerdict {
    pub status: Rootedness,
    /// A non-real root, a nonnegative real root, or the undecided cluster.
    pub witness: Option<RootWitness>,
    /// All computed roots, in the order the iteration returned them.
    pub roots: Vec<Complex>,
}

impl RootednessVerdict {
    /// Largest `|Im z|` over the computed roots.
    pub fn max_imag(&self) -> Option<Real> {
        self.roots.iter().map(|z| z.im.abs()).reduce(|a, b| a.max(&b))
    }
}

/// Safety factor on rounding-level bounds.
const SAFETY: f64 = 1e6;
const MAX_ITERATIONS: usize = 2000;

fn horner(c: &[Complex], z: &Complex) -> (Complex, Complex) {
    // Highest coefficient last.
    let n = c.len() - 1;
    let mut p = c[n].clone();
    let zero = Complex::real(Real::zero(z.re.precision()));
    let mut dp = zero;
    for k in (0..n).rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(&c[k]);
    }
    (p, dp)
}

/// All complex roots of `Σ c_k x^k` (`c_n ≠ 0`) by Aberth-Ehrlich iteration.
fn aberth(c: &[Complex], prec: usize) -> Vec<Complex> {
    let n = c.len() - 1;
    let mut cc = MathConsts::new();
    // Cauchy bound for the initial circle.
    let lead = c[n].abs();
    let mut radius = Real::one(prec);
    for ck in &c[..n] {
        radius = radius.max(&(Real::one(prec) + ck.abs() / &lead));
    }
    let pi = cc.pi(prec);
    let mut z: Vec<Complex> = (0..n)
        .map(|j| {
            let t = &pi * &Real::from_ratio(2 * j as i64, n as i64, prec) + Real::from_ratio(2, 5, prec);
            Complex::new(&radius * &t.cos(&mut cc), &radius * &t.sin(&mut cc))
        })
        .collect();
    let stop = Real::pow2(-(prec as i32) + 8, prec);
    let half_prec = Real::pow2(-(prec as i32) / 2, prec);
    let two = Real::from_i64(2, prec);
    let mut prev: Vec<Option<Real>> = vec![None; n];
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        if done.iter().all(|d| *d) {
            break;
        }
        for j in 0..n {
            if done[j] {
                continue;
            }
            let (p, dp) = horner(c, &z[j]);
            if p.is_zero() {
                done[j] = true;
                continue;
            }
            let w = p.div(&dp);
            let mut s = Complex::real(Real::zero(prec));
            for k in 0..n {
                if k != j {
                    let d = z[j].sub(&z[k]);
                    if !d.is_zero() {
                        s = s.add(&Complex::real(Real::one(prec)).div(&d));
                    }
                }
            }
            let denom = Complex::real(Real::one(prec)).sub(&w.mul(&s));
            let step = if denom.is_zero() { w } else { w.div(&denom) };
            z[j] = z[j].sub(&step);
            let scale = z[j].abs().max(&Real::one(prec));
            let size = step.abs() / scale;
            // Either converged, or stalled at the rounding floor.
            if size <= stop || (size <= half_prec && prev[j].as_ref().is_some_and(|p| size > p / &two)) {
                done[j] = true;
            }
            prev[j] = Some(size);
        }
    }
    z
}

/// Decides whether `Σ a_k x^k` has only real, strictly negative roots.
pub fn branden_criterion(seq: &RealSequence) -> Result<RootednessVerdict> {
    let a = &seq.entries;
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    let base = seq.precision();
    if a[0].is_zero() {
        // x = 0 is a root.
        let z = Complex::real(Real::zero(base));
        return Ok(RootednessVerdict {
            status: Rootedness::NotRealNegative,
            witness: Some(RootWitness {
                root: z.clone(),
                radius: Real::zero(base),
                multiplicity: 1,
            }),
            roots: vec![z],
        });
    }
    let deg = a.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    if deg == 0 {
        return Ok(RootednessVerdict {
            status: Rootedness::RealNegative,
            witness: None,
            roots: Vec::new(),
        });
    }
    let prec = 2 * base.max(64);
    let m = a.iter().fold(Real::one(prec), |m, x| m.max(&x.abs().with_precision(prec)));
    let c: Vec<Complex> = a[..=deg]
        .iter()
        .map(|x| Complex::real(x.with_precision(prec) / &m))
        .collect();
    let z = aberth(&c, prec);
    let n = deg;
    let eps = Real::pow2(-(prec as i32), prec);
    let safety = Real::from_f64(SAFETY, prec);

    // Weierstrass inclusion disks D(z_j, n |W_j|); each connected component
    // of m disks holds exactly m roots.
    let radii: Vec<Real> = (0..n)
        .map(|j| {
            let (p, _) = horner(&c, &z[j]);
            let mut den = c[n].clone();
            for k in 0..n {
                if k != j {
                    den = den.mul(&z[j].sub(&z[k]));
                }
            }
            // Rounding in the Horner evaluation, bounded by ε Σ |c_k| |z|^k.
            let az = z[j].abs();
            let mut absum = Real::zero(prec);
            for ck in c.iter().rev() {
                absum = &absum * &az + ck.abs();
            }
            let p_err = &safety * &eps * &absum;
            let den = den.abs();
            if den.is_zero() {
                Real::pow2(1 << 20, prec)
            } else {
                Real::from_u64(n as u64, prec) * (p.abs() + p_err) / den
            }
        })
        .collect();
    let overlaps = |i: usize, j: usize, f: &Real| z[i].sub(&z[j]).abs() <= f * &(&radii[i] + &radii[j]);
    let one = Real::one(prec);
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = ncomp;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if comp[j] == usize::MAX && overlaps(i, j, &one) {
                    comp[j] = ncomp;
                    stack.push(j);
                }
            }
        }
        ncomp += 1;
    }

    let mut non_real: Option<RootWitness> = None;
    let mut nonneg: Option<RootWitness> = None;
    let mut undecided: Option<RootWitness> = None;
    for cidx in 0..ncomp {
        let members: Vec<usize> = (0..n).filter(|&j| comp[j] == cidx).collect();
        let mult = members.len();
        let witness = |j: usize| RootWitness {
            root: Complex::new(z[j].re.with_precision(base), z[j].im.with_precision(base)),
            radius: radii[j].with_precision(base),
            multiplicity: mult,
        };
        // Certified off the real axis.
        if members.iter().all(|&j| z[j].im.abs() > radii[j]) {
            let j = *members
                .iter()
                .max_by(|&&x, &&y| z[x].im.abs().partial_cmp(&z[y].im.abs()).unwrap())
                .unwrap();
            non_real.get_or_insert_with(|| witness(j));
            continue;
        }
        let j = members[0];
        let real_part_hi = members
            .iter()
            .map(|&k| &z[k].re + &radii[k])
            .reduce(|x, y| x.max(&y))
            .unwrap();
        let real_part_lo = members
            .iter()
            .map(|&k| &z[k].re - &radii[k])
            .reduce(|x, y| x.min(&y))
            .unwrap();
        let is_real = if mult == 1 {
            // A lone non-real root would bring its conjugate within 5r.
            (0..n).all(|k| k == j || !overlaps(j, k, &Real::from_i64(5, prec)))
        } else {
            // Perturbation of an m-fold root scales like ε^{1/m}.
            let mut bound = eps.clone();
            for _ in 1..mult {
                bound = bound.sqrt();
            }
            let bound = &safety * &bound * &members.iter().fold(one.clone(), |acc, &k| acc.max(&z[k].abs()));
            members.iter().all(|&k| z[k].im.abs() <= bound)
        };
        if !is_real {
            undecided.get_or_insert_with(|| witness(j));
        } else if real_part_hi.is_negative() {
            // Certified real and negative.
        } else if real_part_lo.is_positive() || real_part_lo.is_zero() {
            nonneg.get_or_insert_with(|| witness(j));
        } else {
            undecided.get_or_insert_with(|| witness(j));
        }
    }
    let roots = z
        .iter()
        .map(|r| Complex::new(r.re.with_precision(base), r.im.with_precision(base)))
        .collect();
    let (status, witness) = if let Some(w) = non_real.or(nonneg) {
        (Rootedness::NotRealNegative, Some(w))
    } else if let Some(w) = undecided {
        (Rootedness::Inconclusive, Some(w))
    } else {
        (Rootedness::RealNegative, None)
    };
    Ok(RootednessVerdict {
        status,
        witness,
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{qdim, LevelContext};
    use crate::rootsys::{RootSystem, TypeLabel, Weight};

    fn seq(xs: &[f64]) -> RealSequence {
        RealSequence::from_f64(xs, 128).unwrap()
    }

    fn as_f64(s: &RealSequence) -> Vec<f64> {
        s.entries().iter().map(|x| x.to_f64()).collect()
    }

    fn from_ratios(quarters: &[i64]) -> RealSequence {
        let mut xs = vec![Real::one(128)];
        for &m in quarters {
            let next = xs.last().unwrap() * &Real::from_ratio(m, 4, 128);
            xs.push(next);
        }
        RealSequence::new(xs).unwrap()
    }

    #[test]
    fn wide_range_product_stays_strict() {
        // The product spans eighteen decades; the small end must still be decided.
        let a = from_ratios(&[59, 58, 54, 42, 41, 38, 31, 26, 7, 2]);
        let b = from_ratios(&[54, 53, 49, 48, 45, 43, 42, 38, 36, 29]);
        let ab = pointwise_product(&a, &b).unwrap();
        assert!(ab.entries().last().unwrap().to_f64() > 1e18);
        assert!(is_log_concave(&ab, true).unwrap());
        assert!(is_log_concave(&prefix_sums(&ab), true).unwrap());
    }

    #[test]
    fn error_bounds_follow_l() {
        let s = seq(&[1.0, 3.0, 3.0, 1.0]);
        let l = l_operator(&s);
        assert_eq!(as_f64(&l), vec![1.0, 6.0, 6.0, 1.0]);
        for (x, e) in l.entries().iter().zip(l.errors()) {
            assert!(e.is_positive() && *e < x * &Real::pow2(-60, 128));
        }
    }

    #[test]
    fn l_operator_examples() {
        assert_eq!(as_f64(&l_operator(&seq(&[1.0, 1.0, 1.0]))), vec![1.0, 0.0, 1.0]);
        assert_eq!(as_f64(&l_operator(&seq(&[1.0, 2.0, 1.0]))), vec![1.0, 3.0, 1.0]);
        assert_eq!(as_f64(&l_operator(&seq(&[1.0, 3.0, 3.0, 1.0]))), vec![1.0, 6.0, 6.0, 1.0]);
    }

    #[test]
    fn orders() {
        assert_eq!(log_concavity_order(&seq(&[1.0, 2.0, 1.0]), 3, false), Some(3));
        assert_eq!(log_concavity_order(&seq(&[1.0, 1.0, 2.0]), 1, false), Some(0));
        for r in [0.5, 2.0, 3.0] {
            let g: Vec<f64> = (0..6).map(|k| r_pow(r, k)).collect();
            assert!(log_concavity_order(&seq(&g), 1, false).unwrap() >= 1);
            assert_eq!(log_concavity_order(&seq(&g), 1, true), Some(0));
        }
        assert_eq!(log_concavity_order(&seq(&[1.0, -1.0]), 2, false), None);
    }

    fn r_pow(r: f64, k: i32) -> f64 {
        (0..k).fold(1.0, |a, _| a * r)
    }

    #[test]
    fn log_concavity_checks() {
        assert!(is_log_concave(&seq(&[1.0, 1.0, 1.0]), false).unwrap());
        assert!(!is_log_concave(&seq(&[1.0, 1.0, 1.0]), true).unwrap());
        assert!(is_log_concave(&seq(&[1.0, 3.0, 4.0, 3.0, 1.0]), true).unwrap());
        assert!(!is_log_concave(&seq(&[1.0, 1.0, 2.0]), false).unwrap());
    }

    #[test]
    fn palindromes() {
        let s = seq(&[1.0, 2.0]);
        assert_eq!(as_f64(&palindromize(&s, Parity::Odd).unwrap()), vec![1.0, 2.0, 2.0, 1.0]);
        assert_eq!(as_f64(&palindromize(&s, Parity::Even).unwrap()), vec![1.0, 2.0, 1.0]);
        let s = seq(&[1.0, 3.0, 4.0]);
        assert_eq!(as_f64(&palindromize(&s, Parity::Even).unwrap()), vec![1.0, 3.0, 4.0, 3.0, 1.0]);
        assert!(palindromize(&seq(&[2.0, 1.0]), Parity::Even).is_err());
        assert!(palindromize(&seq(&[1.0, 1.0, 1.0]), Parity::Even).is_err());
    }

    #[test]
    fn branden_small() {
        let v = branden_criterion(&seq(&[1.0, 2.0, 1.0])).unwrap();
        assert_eq!(v.status, Rootedness::RealNegative);
        let v = branden_criterion(&seq(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(v.status, Rootedness::NotRealNegative);
        let w = v.witness.unwrap();
        assert!((w.root.im.abs().to_f64() - 0.75f64.sqrt()).abs() < 1e-12);
        // (x+1)(x+2)(x+3) = 6 + 11x + 6x² + x³.
        let v = branden_criterion(&seq(&[6.0, 11.0, 6.0, 1.0])).unwrap();
        assert_eq!(v.status, Rootedness::RealNegative);
        // (x-1)(x+2) = -2 + x + x².
        let v = branden_criterion(&seq(&[-2.0, 1.0, 1.0])).unwrap();
        assert_eq!(v.status, Rootedness::NotRealNegative);
        // Triple root at -1.
        let v = branden_criterion(&seq(&[1.0, 3.0, 3.0, 1.0])).unwrap();
        assert_eq!(v.status, Rootedness::RealNegative);
        assert_eq!(branden_criterion(&seq(&[0.0, 0.0])).unwrap_err(), Error::ZeroPolynomial);
        assert_eq!(
            branden_criterion(&seq(&[0.0, 1.0])).unwrap().status,
            Rootedness::NotRealNegative
        );
        assert_eq!(branden_criterion(&seq(&[3.0])).unwrap().status, Rootedness::RealNegative);
    }

    #[test]
    fn real_negative_implies_deep_log_concavity() {
        for s in [&[1.0, 2.0, 1.0][..], &[6.0, 11.0, 6.0, 1.0], &[1.0, 4.0, 6.0, 4.0, 1.0]] {
            let s = seq(s);
            assert_eq!(branden_criterion(&s).unwrap().status, Rootedness::RealNegative);
            assert_eq!(log_concavity_order(&s, 4, false), Some(4));
        }
    }

    #[test]
    fn e7_node7_sequences() {
        let e7 = RootSystem::exceptional(TypeLabel::E7).unwrap();
        for level in [3u32, 11, 12] {
            let ctx = LevelContext::new(&e7, level, 128).unwrap();
            let xs: Vec<Real> = (0..=level as i64)
                .map(|k| qdim(&Weight::fundamental(7, 7, k), &ctx).unwrap().value)
                .collect();
            let s = RealSequence::new(xs).unwrap();
            let v = branden_criterion(&s).unwrap();
            let expect = if level == 12 {
                Rootedness::NotRealNegative
            } else {
                Rootedness::RealNegative
            };
            assert_eq!(v.status, expect, "level {level}");
            assert!(log_concavity_order(&s, 6, false).unwrap() >= 3);
        }
    }
}
