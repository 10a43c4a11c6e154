use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::krchar::{chari_decomposition, chari_nodes, qdim_kr_memo};
use crate::qnum::{LevelContext, QReal, QdimMemo};
use crate::real::Real;
use crate::rootsys::{RootSystem, TypeLabel};

/// How a grid cell was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// ζ-dimension of an explicit KR decomposition.
    Direct,
    /// `Q_k^{(j)} = (Q_k^{(i)})² - Q_{k-1}^{(i)} Q_{k+1}^{(i)}` at a node with one neighbour.
    Subtraction,
    /// The same numerator divided by the other neighbours' values.
    Division,
    /// Indeterminate division inside the zero window, set to 0.
    ZeroHypothesis,
    /// Fixed point of the restricted solver.
    Solver,
    /// `Q_0 = 1`, or `Q_ℓ = 1` for the restricted system.
    Boundary,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Direct => "direct",
            Provenance::Subtraction => "subtraction",
            Provenance::Division => "division",
            Provenance::ZeroHypothesis => "zero_hypothesis",
            Provenance::Solver => "solver",
            Provenance::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The table `Q_k^{(i)}` for `0 ≤ k ≤ k_max`.
#[derive(Debug, Clone)]
pub struct QGrid {
    pub type_label: TypeLabel,
    pub level: u32,
    pub shifted_level: i64,
    pub precision_bits: usize,
    pub k_max: usize,
    /// `values[i - 1][k]`; `None` for unresolved cells.
    pub values: Vec<Vec<Option<QReal>>>,
    pub provenance: Vec<Vec<Option<Provenance>>>,
    pub residual_max: Real,
    pub unresolved: Vec<(usize, usize)>,
    neighbours: Vec<Vec<usize>>,
}

impl QGrid {
    pub(crate) fn from_rows(
        rs: &RootSystem,
        level: u32,
        shifted_level: i64,
        precision_bits: usize,
        values: Vec<Vec<Option<QReal>>>,
        provenance: Vec<Vec<Option<Provenance>>>,
    ) -> Self {
        let k_max = values[0].len() - 1;
        let neighbours = rs.nodes().map(|i| rs.neighbours(i)).collect();
        let unresolved = values
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| c.is_none())
                    .map(move |(k, _)| (i + 1, k))
            })
            .collect();
        let mut g = QGrid {
            type_label: rs.label(),
            level,
            shifted_level,
            precision_bits,
            k_max,
            values,
            provenance,
            residual_max: Real::zero(precision_bits),
            unresolved,
            neighbours,
        };
        g.residual_max = residual(&g);
        g
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn cell(&self, node: usize, k: usize) -> Option<&QReal> {
        self.values.get(node - 1)?.get(k)?.as_ref()
    }

    pub fn value(&self, node: usize, k: usize) -> Option<&Real> {
        self.cell(node, k).map(|q| &q.value)
    }

    pub fn provenance_of(&self, node: usize, k: usize) -> Option<Provenance> {
        *self.provenance.get(node - 1)?.get(k)?
    }

    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.neighbours[node - 1]
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn require_resolved(&self) -> Result<()> {
        if self.unresolved.is_empty() {
            Ok(())
        } else {
            Err(Error::Unresolved(self.unresolved.clone()))
        }
    }

    /// Row `node` on `0 ≤ k ≤ upto`, if fully resolved.
    pub fn row(&self, node: usize, upto: usize) -> Option<Vec<Real>> {
        (0..=upto).map(|k| self.value(node, k).cloned()).collect()
    }

    /// All cells in (node, k) order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Option<&QReal>, Option<Provenance>)> + '_ {
        self.values.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(k, c)| (i + 1, k, c.as_ref(), self.provenance[i][k]))
        })
    }
}

/// Normalized Q-system residual
/// `|Q_k² - Q_{k-1}Q_{k+1} - Π_{j∼i} Q_k^{(j)}| / max(1, Q_k²)`, maximized over
/// every interior cell whose stencil is resolved.
pub fn residual(grid: &QGrid) -> Real {
    let prec = grid.precision_bits;
    let one = Real::one(prec);
    let mut worst = Real::zero(prec);
    for i in 1..=grid.rank() {
        for k in 1..grid.k_max {
            let (Some(q), Some(a), Some(b)) = (grid.value(i, k), grid.value(i, k - 1), grid.value(i, k + 1)) else {
                continue;
            };
            let mut prod = one.clone();
            let mut ok = true;
            for &j in grid.neighbours(i) {
                match grid.value(j, k) {
                    Some(v) => prod *= v,
                    None => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let q2 = q.square();
            let r = (&q2 - &(a * b) - prod).abs() / q2.max(&one);
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

/// Nodes whose rows come straight from KR decompositions.
pub fn direct_nodes(label: TypeLabel) -> Vec<usize> {
    chari_nodes(label)
}

struct Route {
    /// Node whose Q-system equation is solved for the target.
    source: usize,
    /// Remaining neighbours of `source`, divided out.
    divisors: &'static [usize],
}

struct Derived {
    target: usize,
    routes: Vec<Route>,
}

fn plan(label: TypeLabel) -> Option<Vec<Derived>> {
    let d = |target, routes| Derived { target, routes };
    let r = |source, divisors| Route { source, divisors };
    Some(match label {
        TypeLabel::E6 => vec![
            d(3, vec![r(1, &[])]),
            d(5, vec![r(6, &[])]),
            d(4, vec![r(2, &[])]),
        ],
        TypeLabel::E7 => vec![
            d(3, vec![r(1, &[])]),
            d(6, vec![r(7, &[])]),
            d(4, vec![r(2, &[])]),
            d(5, vec![r(6, &[7]), r(4, &[2, 3])]),
        ],
        TypeLabel::E8 => vec![
            d(3, vec![r(1, &[])]),
            d(7, vec![r(8, &[])]),
            d(6, vec![r(7, &[8])]),
            d(5, vec![r(6, &[7])]),
            d(4, vec![r(5, &[6])]),
            d(2, vec![r(4, &[3, 5])]),
        ],
        TypeLabel::Custom => return None,
    })
}

/// Direct rows are computed this far past `k_max` so the longest chain of
/// derived rows (each one level shorter than its source) still reaches it.
const EXTENSION: usize = 6;

/// Fills `Q_k^{(i)} = d_ζ(W_k^{(i)})` on `0 ≤ k ≤ k_max` from the explicit
/// decompositions and Q-system propagation.
pub fn build_qgrid(ctx: &LevelContext<'_>, k_max: usize) -> Result<QGrid> {
    let rs = ctx.root_system();
    let l = ctx.shifted_level();
    if k_max < 2 || k_max as i64 > 4 * l {
        return Err(Error::GridRange { k_max, l });
    }
    let plan = plan(rs.label()).ok_or(Error::GridType)?;
    let n = rs.rank();
    let prec = ctx.precision_bits();
    let ext = k_max + EXTENSION;
    let ell = ctx.level() as i64;
    let in_zero_window = |k: usize| {
        let r = (k as i64).mod_floor(&l);
        r >= ell + 1 && r <= l - 1
    };

    let mut rows: Vec<Vec<Option<QReal>>> = vec![Vec::new(); n];
    let mut prov: Vec<Vec<Option<Provenance>>> = vec![Vec::new(); n];
    let mut memo = QdimMemo::new();
    for i in direct_nodes(rs.label()) {
        for k in 0..=ext {
            let dec = chari_decomposition(rs, i, k)?;
            rows[i - 1].push(Some(qdim_kr_memo(&dec, ctx, &mut memo)?));
            prov[i - 1].push(Some(if k == 0 { Provenance::Boundary } else { Provenance::Direct }));
        }
    }

    for step in &plan {
        debug_assert!(step.routes.iter().all(|r| {
            let mut nb = rs.neighbours(r.source);
            nb.retain(|j| !r.divisors.contains(j));
            nb == [step.target]
        }));
        let reach = step
            .routes
            .iter()
            .map(|r| {
                let mut len = rows[r.source - 1].len();
                for &j in r.divisors {
                    len = len.min(rows[j - 1].len() + 1);
                }
                len.saturating_sub(1)
            })
            .max()
            .unwrap_or(0);
        let mut row = vec![Some(QReal::exact(Real::one(prec)))];
        let mut tags = vec![Some(Provenance::Boundary)];
        for k in 1..reach {
            let mut cell = None;
            let mut tag = None;
            for route in &step.routes {
                let s = &rows[route.source - 1];
                let (Some(Some(a)), Some(Some(b)), Some(Some(c))) = (s.get(k - 1), s.get(k), s.get(k + 1)) else {
                    continue;
                };
                let num = b.mul(b).sub(&a.mul(c));
                if route.divisors.is_empty() {
                    cell = Some(num);
                    tag = Some(Provenance::Subtraction);
                    break;
                }
                let mut d = QReal::exact(Real::one(prec));
                let mut have = true;
                for &j in route.divisors {
                    match rows[j - 1].get(k) {
                        Some(Some(q)) => d = d.mul(q),
                        _ => have = false,
                    }
                }
                if !have {
                    continue;
                }
                if d.value.abs() > ctx.zero_tolerance(&d.magnitude_scale) {
                    cell = Some(num.div(&d));
                    tag = Some(Provenance::Division);
                    break;
                }
            }
            if cell.is_none() && in_zero_window(k) {
                cell = Some(QReal::exact(Real::zero(prec)));
                tag = Some(Provenance::ZeroHypothesis);
            }
            row.push(cell);
            tags.push(tag);
        }
        rows[step.target - 1] = row;
        prov[step.target - 1] = tags;
    }

    for (row, tags) in rows.iter_mut().zip(prov.iter_mut()) {
        row.resize(k_max + 1, None);
        tags.resize(k_max + 1, None);
    }
    Ok(QGrid::from_rows(rs, ctx.level(), l, prec, rows, prov))
}
