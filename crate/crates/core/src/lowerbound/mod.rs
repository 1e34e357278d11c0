//! Lower-bound graph families for two-party reductions from set
//! disjointness, the path-gadget toolbox, and their verifiers.
//!
//! Inputs `x` and `y` are bit strings of length `k²` (or `T²`) indexed so
//! that `x[(i−1)·k + (j−1)]` is `x_ij`. Every instance records Alice's and
//! Bob's vertex sets, the edges between them, and the predicate thresholds:
//! the optimum is at most `yes_at_most` exactly when the inputs intersect,
//! and at least `no_at_least` when they are disjoint.

mod build;
mod families;
mod sets;
mod transforms;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_mds_square, exact_mds_with, exact_mvc_square, exact_mvc_with, ExactConfig};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::solution::{is_feasible, ProblemKind};

pub use families::{gen_mds_base, gen_mds_square_exact, gen_mvc_base, gen_mvc_square, gen_mwvc_square};
pub use sets::{
    gen_mds_square_approx_unweighted, gen_mwds_square_approx, gen_set_system, set_gadget, SetGadget, SetSystem,
    SET_SYSTEM_RETRIES,
};
pub use transforms::{
    dangling_transform, dangling_transform_with_gadgets, merged_dangling_transform,
    merged_dangling_transform_with_gadgets,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Family {
    MvcBase,
    MvcSq,
    MwvcSq,
    MdsBase,
    MdsSqExact,
    MwdsSqApprox,
    MdsSqApprox,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::MvcBase,
        Family::MvcSq,
        Family::MwvcSq,
        Family::MdsBase,
        Family::MdsSqExact,
        Family::MwdsSqApprox,
        Family::MdsSqApprox,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::MvcBase => "MVC-BASE",
            Family::MvcSq => "MVC-SQ",
            Family::MwvcSq => "MWVC-SQ",
            Family::MdsBase => "MDS-BASE",
            Family::MdsSqExact => "MDS-SQ-EXACT",
            Family::MwdsSqApprox => "MWDS-SQ-APPROX",
            Family::MdsSqApprox => "MDS-SQ-APPROX",
        }
    }

    /// Families parameterised by `(T, ℓ, r)` rather than `k`.
    pub fn uses_set_system(self) -> bool {
        matches!(self, Family::MwdsSqApprox | Family::MdsSqApprox)
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == norm)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alice,
    Bob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    /// Private path hanging off an edge's endpoints.
    Dangling,
    /// Path attached to a row vertex whose head carries variable edges.
    Shared,
    /// Member of a family of paths sharing the tail `[3]-[4]-[5]`.
    Merged,
}

/// A path gadget: `path[i]` is the vertex of index `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub name: String,
    pub path: Vec<usize>,
    pub attached: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub yes_at_most: Rational,
    pub no_at_least: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundInstance {
    pub family: Family,
    pub params: Params,
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub graph: Graph,
    pub labels: Vec<String>,
    /// Problem whose optimum the predicate is about.
    pub problem: ProblemKind,
    pub partition: Partition,
    pub cut: Vec<(usize, usize)>,
    pub cut_cap: usize,
    pub thresholds: Thresholds,
    pub gadgets: Vec<Gadget>,
    pub x_edges: Vec<(usize, usize)>,
    pub y_edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_system: Option<SetSystem>,
}

fn crossing(g: &Graph, sides: &[Side]) -> Vec<(usize, usize)> {
    g.edges().filter(|&(u, v)| sides[u] != sides[v]).collect()
}

impl LowerBoundInstance {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        family: Family,
        params: Params,
        x: &[bool],
        y: &[bool],
        b: build::Builder,
        weighted: bool,
        problem: ProblemKind,
        thresholds: Thresholds,
        cut_cap: usize,
    ) -> Self {
        let graph = b.graph(weighted);
        let cut = crossing(&graph, &b.sides);
        let pick = |s| (0..b.sides.len()).filter(|&v| b.sides[v] == s).collect();
        let partition = Partition { alice: pick(Side::Alice), bob: pick(Side::Bob) };
        Self {
            family,
            params,
            x: x.to_vec(),
            y: y.to_vec(),
            graph,
            labels: b.labels,
            problem,
            partition,
            cut,
            cut_cap,
            thresholds,
            gadgets: b.gadgets,
            x_edges: b.x_edges,
            y_edges: b.y_edges,
            set_system: None,
        }
    }

    /// Side of every vertex, or `None` if the partition is malformed.
    pub fn sides(&self) -> Option<Vec<Side>> {
        let n = self.graph.n();
        let mut sides = vec![None; n];
        for (list, side) in [(&self.partition.alice, Side::Alice), (&self.partition.bob, Side::Bob)] {
            for &v in list {
                if v >= n || sides[v].is_some() {
                    return None;
                }
                sides[v] = Some(side);
            }
        }
        sides.into_iter().collect()
    }

    /// Variable edges sit inside their owner's side and the recorded cut is
    /// exactly the set of crossing edges.
    pub fn partition_sane(&self) -> bool {
        let Some(sides) = self.sides() else { return false };
        let inside = |edges: &[(usize, usize)], side| {
            edges.iter().all(|&(u, v)| {
                u < sides.len() && v < sides.len() && self.graph.has_edge(u, v) && sides[u] == side && sides[v] == side
            })
        };
        let mut cut = self.cut.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect::<Vec<_>>();
        cut.sort_unstable();
        inside(&self.x_edges, Side::Alice) && inside(&self.y_edges, Side::Bob) && cut == crossing(&self.graph, &sides)
    }

    /// Rewrites a feasible solution into the gadget normal form.
    pub fn normalize(&self, members: &[usize]) -> Result<Vec<usize>> {
        normalize_cover(&self.graph, &self.gadgets, self.problem, members)
    }
}

/// `true` when no index has both bits set.
pub fn disj(x: &[bool], y: &[bool]) -> bool {
    !x.iter().zip(y).any(|(&a, &b)| a && b)
}

/// Bits of a hexadecimal number, least significant first, padded to `len`.
pub fn bits_from_hex(hex: &str, len: usize) -> Result<Vec<bool>> {
    let digits = hex.trim().trim_start_matches("0x").trim_start_matches("0X");
    let mut bits = Vec::with_capacity(len);
    for c in digits.chars().rev() {
        let d = c.to_digit(16).ok_or_else(|| Error::Domain(format!("`{hex}` is not hexadecimal")))?;
        bits.extend((0..4).map(|i| (d >> i) & 1 == 1));
    }
    if bits.iter().skip(len).any(|&b| b) {
        return Err(Error::Domain(format!("`{hex}` does not fit in {len} bits")));
    }
    bits.resize(len, false);
    Ok(bits)
}

pub fn bits_to_hex(bits: &[bool]) -> String {
    let digits: String = bits
        .chunks(4)
        .rev()
        .map(|c| {
            let d = c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | ((b as u32) << i));
            char::from_digit(d, 16).unwrap()
        })
        .collect();
    let trimmed = digits.trim_start_matches('0');
    if trimmed.is_empty() { "0".to_string() } else { trimmed.to_string() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: Family,
    pub value: Rational,
    pub thresholds: Thresholds,
    /// Optimum is at most `yes_at_most`.
    pub predicate: bool,
    pub disj: bool,
    /// Predicate holds exactly when the inputs intersect, and disjoint inputs
    /// reach `no_at_least`.
    pub agreement: bool,
    pub cut_size: usize,
    pub cut_cap: usize,
    pub cut_within_cap: bool,
    pub partition_sane: bool,
}

/// Solves the instance exactly and checks the predicate against `DISJ`.
pub fn verify_family(inst: &LowerBoundInstance, cfg: &ExactConfig) -> Result<FamilyReport> {
    let g = &inst.graph;
    let value = match inst.problem {
        ProblemKind::Vc1 => exact_mvc_with(g, cfg)?.value,
        ProblemKind::Vc2 => exact_mvc_square(g, cfg)?.value,
        ProblemKind::Ds1 => exact_mds_with(g, cfg)?.value,
        ProblemKind::Ds2 => exact_mds_square(g, cfg)?.value,
    };
    let predicate = value <= inst.thresholds.yes_at_most;
    let disj = disj(&inst.x, &inst.y);
    let agreement = predicate != disj && (!disj || value >= inst.thresholds.no_at_least);
    Ok(FamilyReport {
        family: inst.family,
        value,
        thresholds: inst.thresholds.clone(),
        predicate,
        disj,
        agreement,
        cut_size: inst.cut.len(),
        cut_cap: inst.cut_cap,
        cut_within_cap: inst.cut.len() <= inst.cut_cap,
        partition_sane: inst.partition_sane(),
    })
}

/// Rearranges a feasible cover (`Vc2`) or dominating set (`Ds2`) of `h²` so
/// that path gadgets take their canonical shape: `{[1],[2]}` for covers,
/// `[3]` for dominating sets. Each exchange is applied only if it keeps the
/// set feasible without raising its value.
pub fn normalize_cover(h: &Graph, gadgets: &[Gadget], kind: ProblemKind, members: &[usize]) -> Result<Vec<usize>> {
    if !kind.on_square() {
        return Err(Error::Contract(format!("normal form is defined for G² problems, not {}", kind.as_str())));
    }
    h.check_vertices(members)?;
    if !is_feasible(h, kind, members)? {
        return Err(Error::Contract(format!("input set is not a feasible {} solution", kind.as_str())));
    }
    let mut set = vec![false; h.n()];
    members.iter().for_each(|&v| set[v] = true);
    let listed = |set: &[bool]| (0..set.len()).filter(|&v| set[v]).collect::<Vec<_>>();
    let exchange = |set: &mut Vec<bool>, remove: &[usize], add: &[usize]| {
        if !remove.iter().any(|&v| set[v]) {
            return;
        }
        let mut next = set.clone();
        remove.iter().for_each(|&v| next[v] = false);
        add.iter().for_each(|&v| next[v] = true);
        let (old, new) = (listed(set), listed(&next));
        if h.set_value(&new) <= h.set_value(&old) && is_feasible(h, kind, &new).unwrap_or(false) {
            *set = next;
        }
    };
    if kind.is_cover() {
        for g in gadgets.iter().filter(|g| g.path.len() >= 3) {
            exchange(&mut set, &[g.path[2]], &[g.path[0], g.path[1]]);
        }
    } else {
        for g in gadgets.iter().filter(|g| g.path.len() >= 5) {
            exchange(&mut set, &[g.path[3], g.path[4]], &[g.path[2]]);
        }
        for g in gadgets.iter().filter(|g| g.path.len() >= 5) {
            match (g.kind, g.attached.first()) {
                (GadgetKind::Dangling, Some(&u)) => {
                    exchange(&mut set, &[g.path[1]], &[u]);
                    exchange(&mut set, &[g.path[0]], &[u]);
                }
                _ => exchange(&mut set, &[g.path[1]], &[g.path[0]]),
            }
        }
    }
    Ok(listed(&set))
}

/// Gadgets of `gadgets` whose vertices in `members` are not in normal form.
pub fn off_normal_gadgets(gadgets: &[Gadget], kind: ProblemKind, members: &[usize]) -> Vec<usize> {
    let has = |v: usize| members.contains(&v);
    (0..gadgets.len())
        .filter(|&i| {
            let p = &gadgets[i].path;
            if kind.is_cover() {
                p.len() >= 3 && !(has(p[0]) && has(p[1]) && !has(p[2]))
            } else if p.len() >= 5 {
                let head_ok = gadgets[i].kind != GadgetKind::Dangling || !has(p[0]);
                !(has(p[2]) && !has(p[1]) && !has(p[3]) && !has(p[4]) && head_ok)
            } else {
                false
            }
        })
        .collect()
}
