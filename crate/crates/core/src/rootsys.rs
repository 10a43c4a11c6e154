//! Simply-laced root systems in the fundamental-weight basis.
//!
//! Nodes are numbered from 1 following Bourbaki (for E-types: 1-3-4-5-6-7-8
//! along the long arm, node 2 attached to node 4). Positive roots are indexed
//! from 0 in canonical order: by height, then lexicographically descending on
//! the simple-root coefficient vector, so `positive_roots()[i - 1] = α_i`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Sub};
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Closure stops once more positive roots than this have been produced.
pub const MAX_POSITIVE_ROOTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeLabel {
    E6,
    E7,
    E8,
    /// Any other simply-laced Cartan matrix.
    Custom,
}

impl TypeLabel {
    pub fn rank(self) -> Option<usize> {
        match self {
            TypeLabel::E6 => Some(6),
            TypeLabel::E7 => Some(7),
            TypeLabel::E8 => Some(8),
            TypeLabel::Custom => None,
        }
    }

    pub fn is_exceptional(self) -> bool {
        self != TypeLabel::Custom
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeLabel::E6 => "E6",
            TypeLabel::E7 => "E7",
            TypeLabel::E8 => "E8",
            TypeLabel::Custom => "custom",
        })
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "E6" | "e6" => Ok(TypeLabel::E6),
            "E7" | "e7" => Ok(TypeLabel::E7),
            "E8" | "e8" => Ok(TypeLabel::E8),
            other => Err(Error::UnknownType(other.to_string())),
        }
    }
}

/// An integral weight, stored by its coordinates `λ_i` on the fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Weight(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The Weyl vector ρ (all coordinates 1).
    pub fn rho(rank: usize) -> Self {
        Weight(vec![1; rank])
    }

    /// `k ϖ_node`.
    pub fn fundamental(rank: usize, node: usize, k: i64) -> Self {
        let mut w = vec![0; rank];
        w[node - 1] = k;
        Weight(w)
    }

    /// Builds `Σ c ϖ_node` from `(node, c)` pairs.
    pub fn from_terms(rank: usize, terms: &[(usize, i64)]) -> Self {
        let mut w = vec![0; rank];
        for &(node, c) in terms {
            w[node - 1] += c;
        }
        Weight(w)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Coordinate on `ϖ_node` (1-based).
    pub fn get(&self, node: usize) -> i64 {
        self.0[node - 1]
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A simply-laced root system with its positive roots enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    label: TypeLabel,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    heights: Vec<i64>,
    marks: Vec<i64>,
    coxeter_number: i64,
    highest_root_index: usize,
}

/// Bourbaki Cartan matrix of E6, E7 or E8.
pub fn exceptional_cartan(rank: usize) -> Vec<Vec<i64>> {
    let mut edges = vec![(1, 3), (3, 4), (4, 2), (4, 5)];
    edges.extend((5..rank).map(|i| (i, i + 1)));
    let mut c = vec![vec![0; rank]; rank];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        c[i - 1][j - 1] = -1;
        c[j - 1][i - 1] = -1;
    }
    c
}

/// Cartan matrix of A_n.
pub fn type_a_cartan(rank: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0; rank]; rank];
    for i in 0..rank {
        c[i][i] = 2;
        if i + 1 < rank {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    c
}

fn validate_cartan(c: &[Vec<i64>]) -> Result<()> {
    let n = c.len();
    if n == 0 {
        return Err(Error::InvalidCartan("empty matrix".to_string()));
    }
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCartan("matrix is not square".to_string()));
        }
        if row[i] != 2 {
            return Err(Error::InvalidCartan(alloc::format!(
                "diagonal entry ({},{}) is {}",
                i + 1,
                i + 1,
                row[i]
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if v != c[j][i] {
                return Err(Error::InvalidCartan("matrix is not symmetric".to_string()));
            }
            if v != 0 && v != -1 {
                return Err(Error::InvalidCartan(alloc::format!(
                    "off-diagonal entry ({},{}) is {v}; simply-laced needs 0 or -1",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    // Irreducible: the Dynkin graph is connected.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if c[i][j] == -1 && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidCartan("Dynkin diagram is disconnected".to_string()));
    }
    Ok(())
}

/// Additive closure: `β + α_j` is a root iff `(β|α_j) = -1`.
fn enumerate_positive_roots(c: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = c.len();
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut b = vec![0; n];
            b[i] = 1;
            b
        })
        .collect();
    all.extend(frontier.iter().cloned());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for j in 0..n {
                let p: i64 = (0..n).map(|i| beta[i] * c[i][j]).sum();
                if p < 0 {
                    let mut gamma = beta.clone();
                    gamma[j] += 1;
                    // Real roots of finite type have norm 2; anything else is
                    // an imaginary root of an affine or hyperbolic diagram.
                    if p < -1 || norm(c, &gamma) != 2 {
                        return Err(Error::InfiniteType {
                            bound: MAX_POSITIVE_ROOTS,
                        });
                    }
                    if all.insert(gamma.clone()) {
                        if all.len() > MAX_POSITIVE_ROOTS {
                            return Err(Error::InfiniteType {
                                bound: MAX_POSITIVE_ROOTS,
                            });
                        }
                        next.push(gamma);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut roots: Vec<Vec<i64>> = all.into_iter().collect();
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    Ok(roots)
}

fn norm(c: &[Vec<i64>], b: &[i64]) -> i64 {
    let n = c.len();
    (0..n)
        .map(|i| (0..n).map(|j| b[i] * c[i][j] * b[j]).sum::<i64>())
        .sum()
}

impl RootSystem {
    /// E6, E7 or E8 in Bourbaki numbering.
    pub fn exceptional(label: TypeLabel) -> Result<Self> {
        let rank = label
            .rank()
            .ok_or_else(|| Error::UnknownType(label.to_string()))?;
        Self::build(label, exceptional_cartan(rank))
    }

    /// Any simply-laced Cartan matrix of finite irreducible type.
    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        Self::build(TypeLabel::Custom, cartan)
    }

    pub fn type_a(rank: usize) -> Result<Self> {
        Self::from_cartan(type_a_cartan(rank))
    }

    fn build(label: TypeLabel, cartan: Vec<Vec<i64>>) -> Result<Self> {
        validate_cartan(&cartan)?;
        let positive_roots = enumerate_positive_roots(&cartan)?;
        let heights: Vec<i64> = positive_roots.iter().map(|b| b.iter().sum()).collect();
        let highest_root_index = positive_roots.len() - 1;
        let top = heights[highest_root_index];
        if heights.iter().filter(|&&h| h == top).count() != 1 {
            return Err(Error::InvalidCartan("no unique highest root".to_string()));
        }
        let marks = positive_roots[highest_root_index].clone();
        Ok(RootSystem {
            label,
            rank: cartan.len(),
            cartan,
            positive_roots,
            heights,
            marks,
            coxeter_number: top + 1,
            highest_root_index,
        })
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn height(&self, index: usize) -> i64 {
        self.heights[index]
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// Coefficients `a_i` of the highest root.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// Mark of a node (1-based).
    pub fn mark(&self, node: usize) -> i64 {
        self.marks[node - 1]
    }

    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    pub fn highest_root_index(&self) -> usize {
        self.highest_root_index
    }

    pub fn nodes(&self) -> core::ops::RangeInclusive<usize> {
        1..=self.rank
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.rank {
            Err(Error::NodeOutOfRange {
                node,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            Err(Error::WeightRank {
                got: w.rank(),
                expected: self.rank,
            })
        } else {
            Ok(())
        }
    }

    /// Index of the positive root with the given simple-root coefficients.
    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|b| b.as_slice() == coeffs)
    }

    /// `(λ|β) = Σ λ_i b_i`.
    pub fn pairing(&self, lambda: &Weight, index: usize) -> Result<i64> {
        self.check_weight(lambda)?;
        let beta = self.positive_roots.get(index).ok_or(Error::RootOutOfRange {
            index,
            count: self.positive_roots.len(),
        })?;
        Ok(pair(lambda.coeffs(), beta))
    }

    /// Nodes adjacent to `node` in the Dynkin diagram.
    pub fn neighbours(&self, node: usize) -> Vec<usize> {
        (1..=self.rank)
            .filter(|&j| self.cartan[node - 1][j - 1] == -1)
            .collect()
    }

    /// Simple root `α_node` in the fundamental basis (column of the Cartan matrix).
    pub fn simple_root_weight(&self, node: usize) -> Weight {
        Weight((0..self.rank).map(|i| self.cartan[i][node - 1]).collect())
    }

    /// A positive root, as a weight.
    pub fn root_weight(&self, index: usize) -> Weight {
        self.coeffs_to_weight(&self.positive_roots[index])
    }

    /// Converts simple-root coefficients into fundamental coordinates.
    pub fn coeffs_to_weight(&self, coeffs: &[i64]) -> Weight {
        Weight(
            (0..self.rank)
                .map(|i| (0..self.rank).map(|j| self.cartan[i][j] * coeffs[j]).sum())
                .collect(),
        )
    }

    /// The highest root θ as a weight.
    pub fn theta_weight(&self) -> Weight {
        self.coeffs_to_weight(&self.marks)
    }

    /// Number of positive roots β with `(ϖ_node|β)` odd.
    pub fn delta(&self, node: usize) -> Result<usize> {
        self.check_node(node)?;
        Ok(self
            .positive_roots
            .iter()
            .filter(|b| b[node - 1] % 2 != 0)
            .count())
    }

    /// First root (canonical order) with `(ϖ_node|β) = 1` and height `r`.
    pub fn lee_witness(&self, node: usize, r: i64) -> Result<usize> {
        self.check_node(node)?;
        if r < 1 || r > self.coxeter_number - 1 {
            return Err(Error::Precondition(alloc::format!(
                "height {r} outside [1, {}]",
                self.coxeter_number - 1
            )));
        }
        (0..self.positive_roots.len())
            .find(|&i| self.positive_roots[i][node - 1] == 1 && self.heights[i] == r)
            .ok_or(Error::NoWitness { node, height: r })
    }

    fn count_pairing_one_at_height(&self, node: usize, r: i64) -> usize {
        (0..self.positive_roots.len())
            .filter(|&i| self.positive_roots[i][node - 1] == 1 && self.heights[i] == r)
            .count()
    }

    /// Whether the roots with `(ϖ_node|β) = 1` have a height profile symmetric
    /// under `r ↦ h - r`.
    pub fn height_symmetry_check(&self, node: usize) -> Result<bool> {
        self.check_node(node)?;
        let h = self.coxeter_number;
        Ok((1..h).all(|r| {
            self.count_pairing_one_at_height(node, r) == self.count_pairing_one_at_height(node, h - r)
        }))
    }

    /// Coordinates of a weight on the simple roots, over the rationals.
    pub fn to_root_basis(&self, w: &Weight) -> Vec<Ratio<i64>> {
        let n = self.rank;
        // Solve C x = w by Gauss-Jordan elimination.
        let mut a: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> =
                    self.cartan[i].iter().map(|&v| Ratio::from_integer(v)).collect();
                row.push(Ratio::from_integer(w.coeffs()[i]));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("Cartan matrix of finite type is invertible");
            a.swap(col, piv);
            let p = a[col][col];
            for v in a[col].iter_mut() {
                *v /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for cidx in 0..=n {
                        let sub = f * a[col][cidx];
                        a[r][cidx] -= sub;
                    }
                }
            }
        }
        a.into_iter().map(|row| row[n]).collect()
    }

    /// `hi ≥ lo` in the root order: `hi - lo` is a nonnegative integer
    /// combination of simple roots.
    pub fn dominates(&self, hi: &Weight, lo: &Weight) -> bool {
        self.to_root_basis(&(hi - lo))
            .iter()
            .all(|x| x.is_integer() && *x.numer() >= 0)
    }

    /// Whether a weight lies in the root lattice.
    pub fn in_root_lattice(&self, w: &Weight) -> bool {
        self.to_root_basis(w).iter().all(|x| x.is_integer())
    }

    pub fn describe(&self) -> String {
        alloc::format!(
            "{} (rank {}, {} positive roots, h = {})",
            self.label,
            self.rank,
            self.positive_roots.len(),
            self.coxeter_number
        )
    }
}

/// `Σ λ_i b_i` for raw coordinate slices.
#[inline]
pub fn pair(lambda: &[i64], beta: &[i64]) -> i64 {
    lambda.iter().zip(beta).map(|(a, b)| a * b).sum()
}
