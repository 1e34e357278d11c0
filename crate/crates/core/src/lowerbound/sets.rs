//! Set systems with the r-covering property and the set-gadget families for
//! approximate dominating set on `G²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::solution::ProblemKind;

use super::build::Builder;
use super::{Family, Gadget, GadgetKind, LowerBoundInstance, Params, Side, Thresholds};

/// Sets `S_1..S_T` over the universe `{0..ℓ}`, stored as bit masks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    pub ell: usize,
    pub t: usize,
    pub r: usize,
    pub sets: Vec<u64>,
}

/// Attempts before `gen_set_system` gives up.
pub const SET_SYSTEM_RETRIES: usize = 10_000;

/// Upper bound on collections checked per verification.
const CHECK_BUDGET: u128 = 50_000_000;

impl SetSystem {
    pub fn universe(&self) -> u64 {
        if self.ell == 64 {
            u64::MAX
        } else {
            (1u64 << self.ell) - 1
        }
    }

    pub fn complement(&self, i: usize) -> u64 {
        !self.sets[i] & self.universe()
    }

    pub fn contains(&self, i: usize, e: usize) -> bool {
        (self.sets[i] >> e) & 1 == 1
    }

    /// Exhaustive check: no collection of at most `r` sets, each some `S_i`
    /// or its complement and never both for the same `i`, covers the
    /// universe.
    pub fn is_r_covering(&self) -> bool {
        let full = self.universe();
        let mut chosen = Vec::with_capacity(self.r);
        self.search(0, 0, full, &mut chosen)
    }

    fn search(&self, from: usize, union: u64, full: u64, chosen: &mut Vec<usize>) -> bool {
        if !chosen.is_empty() && union == full {
            return false;
        }
        if chosen.len() == self.r {
            return true;
        }
        for i in from..self.t {
            chosen.push(i);
            for part in [self.sets[i], self.complement(i)] {
                if !self.search(i + 1, union | part, full, chosen) {
                    chosen.pop();
                    return false;
                }
            }
            chosen.pop();
        }
        true
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k.min(n)).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Random set system, resampled until the r-covering property verifies.
pub fn gen_set_system(ell: usize, t: usize, r: usize, seed: u64) -> Result<SetSystem> {
    if ell == 0 || ell > 64 {
        return Err(Error::Domain(format!("universe size {ell} outside 1..=64")));
    }
    if t == 0 || r == 0 {
        return Err(Error::Domain("set count and covering parameter must be positive".into()));
    }
    let work: u128 = (1..=r.min(t)).map(|s| binomial(t, s) << s).sum();
    if work > CHECK_BUDGET {
        return Err(Error::Domain(format!("exhaustive check over {work} collections is too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sys = SetSystem { ell, t, r, sets: vec![0; t] };
    for _ in 0..SET_SYSTEM_RETRIES {
        let full = sys.universe();
        for set in sys.sets.iter_mut() {
            *set = rng.random::<u64>() & full;
        }
        if sys.is_r_covering() {
            return Ok(sys);
        }
    }
    Err(Error::Generation(format!(
        "no {r}-covering system of {t} sets over {ell} elements after {SET_SYSTEM_RETRIES} attempts"
    )))
}

/// Vertex ids of one set gadget inside a larger graph.
#[derive(Clone, Debug)]
struct SetGadgetIds {
    sets: Vec<usize>,
    complements: Vec<usize>,
}

/// Adds a set gadget. `hubs` carries the weight of the element vertices and
/// the two hub vertices; `None` builds the unweighted variant without hubs.
fn add_set_gadget(b: &mut Builder, sys: &SetSystem, tag: &str, hubs: Option<Rational>) -> SetGadgetIds {
    let one = Rational::from_integer(1);
    let heavy = hubs.unwrap_or(one);
    let sets: Vec<usize> = (0..sys.t).map(|i| b.vertex(format!("S{tag}{}", i + 1), Side::Alice)).collect();
    let complements: Vec<usize> = (0..sys.t).map(|i| b.vertex(format!("~S{tag}{}", i + 1), Side::Bob)).collect();
    let alphas: Vec<usize> = (0..sys.ell).map(|e| b.weighted(format!("alpha{tag}{}", e + 1), Side::Alice, heavy)).collect();
    let betas: Vec<usize> = (0..sys.ell).map(|e| b.weighted(format!("beta{tag}{}", e + 1), Side::Bob, heavy)).collect();
    for e in 0..sys.ell {
        b.edge(alphas[e], betas[e]);
        for i in 0..sys.t {
            if sys.contains(i, e) {
                b.edge(sets[i], alphas[e]);
            } else {
                b.edge(complements[i], betas[e]);
            }
        }
    }
    if hubs.is_some() {
        let alpha = b.weighted(format!("alpha{tag}"), Side::Alice, heavy);
        let beta = b.weighted(format!("beta{tag}"), Side::Bob, heavy);
        for i in 0..sys.t {
            b.edge(alpha, sets[i]);
            b.edge(beta, complements[i]);
        }
    }
    SetGadgetIds { sets, complements }
}

/// A set gadget on its own, as a weighted graph with the given hub weight.
#[derive(Clone, Debug)]
pub struct SetGadget {
    pub graph: Graph,
    pub sets: Vec<usize>,
    pub complements: Vec<usize>,
}

pub fn set_gadget(sys: &SetSystem, hub_weight: Rational) -> SetGadget {
    let mut b = Builder::default();
    let ids = add_set_gadget(&mut b, sys, "", Some(hub_weight));
    SetGadget { graph: b.graph(true), sets: ids.sets, complements: ids.complements }
}

/// Common tail `[3]-[4]-[5]` of a merged gadget family.
fn merged_tail(b: &mut Builder, name: &str, side: Side, head_weight: Rational) -> [usize; 3] {
    let c3 = b.weighted(format!("{name}[3]"), side, head_weight);
    let c4 = b.vertex(format!("{name}[4]"), side);
    let c5 = b.vertex(format!("{name}[5]"), side);
    b.edge(c3, c4);
    b.edge(c4, c5);
    [c3, c4, c5]
}

/// Member `[1]-[2]` of a merged gadget hanging off `row_vertex`; returns its
/// head `[1]`.
fn merged_member(b: &mut Builder, name: &str, row_vertex: usize, tail: [usize; 3], side: Side) -> usize {
    let m1 = b.vertex(format!("{name}[1]"), side);
    let m2 = b.vertex(format!("{name}[2]"), side);
    b.edge(m1, row_vertex);
    b.edge(m1, m2);
    b.edge(m2, tail[0]);
    b.gadgets.push(Gadget {
        kind: GadgetKind::Merged,
        name: name.to_string(),
        path: vec![m1, m2, tail[0], tail[1], tail[2]],
        attached: vec![row_vertex],
    });
    m1
}

fn check_inputs(t: usize, x: &[bool], y: &[bool]) -> Result<()> {
    if t == 0 {
        return Err(Error::Domain("row size T must be positive".into()));
    }
    if x.len() != t * t || y.len() != t * t {
        return Err(Error::Domain(format!(
            "input strings must have length T² = {}, got {} and {}",
            t * t,
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

fn approx_family(
    t: usize,
    ell: usize,
    r: usize,
    x: &[bool],
    y: &[bool],
    seed: u64,
    weighted: bool,
) -> Result<LowerBoundInstance> {
    check_inputs(t, x, y)?;
    let sys = gen_set_system(ell, t, r, seed)?;
    let mut b = Builder::default();
    let heavy = weighted.then(|| Rational::from_integer(r as i64));
    let zero = if weighted { Rational::from_integer(0) } else { Rational::from_integer(1) };
    let row = |b: &mut Builder, name: &str, side| (1..=t).map(|i| b.vertex(format!("{name}{i}"), side)).collect::<Vec<_>>();
    let a = row(&mut b, "a", Side::Alice);
    let a2 = row(&mut b, "a'", Side::Alice);
    let bb = row(&mut b, "b", Side::Bob);
    let b2 = row(&mut b, "b'", Side::Bob);
    let g = add_set_gadget(&mut b, &sys, "", heavy);
    let g2 = add_set_gadget(&mut b, &sys, "'", heavy);
    let a_tail = merged_tail(&mut b, "A*", Side::Alice, zero);
    let b_tail = merged_tail(&mut b, "B*", Side::Bob, zero);

    let heads = |b: &mut Builder, name: &str, rowv: &[usize], tail: [usize; 3], side: Side, targets: Option<&[usize]>| {
        (0..t)
            .map(|i| {
                let h = merged_member(b, &format!("{name}{}", i + 1), rowv[i], tail, side);
                if let Some(targets) = targets {
                    for (j, &s) in targets.iter().enumerate() {
                        if j != i {
                            b.edge(h, s);
                        }
                    }
                }
                h
            })
            .collect::<Vec<_>>()
    };
    let ha = heads(&mut b, "A^a_", &a, a_tail, Side::Alice, None);
    heads(&mut b, "A^S_", &a, a_tail, Side::Alice, Some(&g.sets));
    let ha2 = heads(&mut b, "A^a'_", &a2, a_tail, Side::Alice, None);
    heads(&mut b, "A^S'_", &a2, a_tail, Side::Alice, Some(&g2.sets));
    let hb = heads(&mut b, "B^b_", &bb, b_tail, Side::Bob, None);
    heads(&mut b, "B^~S_", &bb, b_tail, Side::Bob, Some(&g.complements));
    let hb2 = heads(&mut b, "B^b'_", &b2, b_tail, Side::Bob, None);
    heads(&mut b, "B^~S'_", &b2, b_tail, Side::Bob, Some(&g2.complements));

    for i in 0..t {
        for j in 0..t {
            if x[i * t + j] {
                b.edge(ha[i], ha2[j]);
                b.x_edges.push((ha[i], ha2[j]));
            }
            if y[i * t + j] {
                b.edge(hb[i], hb2[j]);
                b.y_edges.push((hb[i], hb2[j]));
            }
        }
    }
    if !weighted {
        for (gadget, tag) in [(&g, ""), (&g2, "'")] {
            for i in 0..t {
                let q = b.vertex(format!("q{tag}{}", i + 1), Side::Alice);
                b.edge(q, gadget.sets[i]);
                b.edge(q, a_tail[0]);
                let qbar = b.vertex(format!("~q{tag}{}", i + 1), Side::Bob);
                b.edge(qbar, gadget.complements[i]);
                b.edge(qbar, b_tail[0]);
            }
        }
    }
    let (family, problem, yes) = if weighted {
        (Family::MwdsSqApprox, ProblemKind::Ds2, 6)
    } else {
        (Family::MdsSqApprox, ProblemKind::Ds2, 8)
    };
    let mut inst = LowerBoundInstance::assemble(
        family,
        Params { t: Some(t), ell: Some(ell), r: Some(r), seed: Some(seed), ..Params::default() },
        x,
        y,
        b,
        weighted,
        problem,
        Thresholds { yes_at_most: Rational::from_integer(yes), no_at_least: Rational::from_integer(yes + 1) },
        2 * ell,
    );
    inst.set_system = Some(sys);
    Ok(inst)
}

/// Weighted family: minimum weight 6 when the inputs intersect, at least 7
/// when they are disjoint.
pub fn gen_mwds_square_approx(t: usize, ell: usize, r: usize, x: &[bool], y: &[bool], seed: u64) -> Result<LowerBoundInstance> {
    approx_family(t, ell, r, x, y, seed, true)
}

/// Unweighted family: at most 8 when the inputs intersect, at least 9 when
/// they are disjoint.
pub fn gen_mds_square_approx_unweighted(
    t: usize,
    ell: usize,
    r: usize,
    x: &[bool],
    y: &[bool],
    seed: u64,
) -> Result<LowerBoundInstance> {
    approx_family(t, ell, r, x, y, seed, false)
}
