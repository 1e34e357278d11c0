//! Bit-gadget families for vertex cover and dominating set, with their
//! squared variants built from path gadgets.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solution::ProblemKind;

use super::build::Builder;
use super::{Family, GadgetKind, LowerBoundInstance, Params, Side, Thresholds};

/// Row vertices and the set of bit-gadget vertices of a base construction.
struct Base {
    b: Builder,
    rows: [Vec<usize>; 4],
    bit: Vec<bool>,
}

pub(crate) fn log2_checked(k: usize, x: &[bool], y: &[bool]) -> Result<usize> {
    if k == 0 || !k.is_power_of_two() {
        return Err(Error::Domain(format!("k = {k} is not a power of two")));
    }
    if x.len() != k * k || y.len() != k * k {
        return Err(Error::Domain(format!(
            "input strings must have length k² = {}, got {} and {}",
            k * k,
            x.len(),
            y.len()
        )));
    }
    Ok(k.trailing_zeros() as usize)
}

fn rows(b: &mut Builder, k: usize) -> [Vec<usize>; 4] {
    let mut make = |name: &str, side| (1..=k).map(|i| b.vertex(format!("{name}{i}"), side)).collect::<Vec<_>>();
    [make("a1_", Side::Alice), make("a2_", Side::Alice), make("b1_", Side::Bob), make("b2_", Side::Bob)]
}

fn bit_of(i: usize, j: usize) -> bool {
    (i >> j) & 1 == 1
}

/// Cliques on each row, 4-cycle bit gadgets, variable edges where the input
/// bit is 0.
fn mvc_base_layout(k: usize, x: &[bool], y: &[bool]) -> Result<Base> {
    let logk = log2_checked(k, x, y)?;
    let mut b = Builder::default();
    let rows = rows(&mut b, k);
    for row in &rows {
        for (p, &u) in row.iter().enumerate() {
            for &v in &row[p + 1..] {
                b.edge(u, v);
            }
        }
    }
    let first = b.labels.len();
    for (pair, (ra, rb)) in [(0, 2), (1, 3)].into_iter().enumerate() {
        for j in 0..logk {
            let ta = b.vertex(format!("t{}_A{j}", pair + 1), Side::Alice);
            let fa = b.vertex(format!("f{}_A{j}", pair + 1), Side::Alice);
            let tb = b.vertex(format!("t{}_B{j}", pair + 1), Side::Bob);
            let fb = b.vertex(format!("f{}_B{j}", pair + 1), Side::Bob);
            b.edge(ta, fa);
            b.edge(fa, tb);
            b.edge(tb, fb);
            b.edge(fb, ta);
            for i in 0..k {
                let (a_end, b_end) = if bit_of(i, j) { (ta, tb) } else { (fa, fb) };
                b.edge(rows[ra][i], a_end);
                b.edge(rows[rb][i], b_end);
            }
        }
    }
    let mut bit = vec![false; b.labels.len()];
    bit[first..].iter_mut().for_each(|f| *f = true);
    for i in 0..k {
        for j in 0..k {
            if !x[i * k + j] {
                b.edge(rows[0][i], rows[1][j]);
                b.x_edges.push((rows[0][i], rows[1][j]));
            }
            if !y[i * k + j] {
                b.edge(rows[2][i], rows[3][j]);
                b.y_edges.push((rows[2][i], rows[3][j]));
            }
        }
    }
    Ok(Base { b, rows, bit })
}

/// No row cliques, 6-cycle bit gadgets wired to the complement of the row
/// index, variable edges where the input bit is 1.
fn mds_base_layout(k: usize, x: &[bool], y: &[bool]) -> Result<Base> {
    let logk = log2_checked(k, x, y)?;
    let mut b = Builder::default();
    let rows = rows(&mut b, k);
    let first = b.labels.len();
    for (pair, (ra, rb)) in [(0, 2), (1, 3)].into_iter().enumerate() {
        for j in 0..logk {
            let p = pair + 1;
            let fa = b.vertex(format!("f{p}_A{j}"), Side::Alice);
            let ta = b.vertex(format!("t{p}_A{j}"), Side::Alice);
            let ua = b.vertex(format!("u{p}_A{j}"), Side::Alice);
            let fb = b.vertex(format!("f{p}_B{j}"), Side::Bob);
            let tb = b.vertex(format!("t{p}_B{j}"), Side::Bob);
            let ub = b.vertex(format!("u{p}_B{j}"), Side::Bob);
            let cycle = [fa, ta, ua, fb, tb, ub];
            for c in 0..6 {
                b.edge(cycle[c], cycle[(c + 1) % 6]);
            }
            for i in 0..k {
                let (a_end, b_end) = if bit_of(i, j) { (fa, fb) } else { (ta, tb) };
                b.edge(rows[ra][i], a_end);
                b.edge(rows[rb][i], b_end);
            }
        }
    }
    let mut bit = vec![false; b.labels.len()];
    bit[first..].iter_mut().for_each(|f| *f = true);
    for i in 0..k {
        for j in 0..k {
            if x[i * k + j] {
                b.edge(rows[0][i], rows[1][j]);
                b.x_edges.push((rows[0][i], rows[1][j]));
            }
            if y[i * k + j] {
                b.edge(rows[2][i], rows[3][j]);
                b.y_edges.push((rows[2][i], rows[3][j]));
            }
        }
    }
    Ok(Base { b, rows, bit })
}

fn finish(
    family: Family,
    k: usize,
    x: &[bool],
    y: &[bool],
    b: Builder,
    weighted: bool,
    problem: ProblemKind,
    yes_at_most: i64,
) -> LowerBoundInstance {
    let logk = k.trailing_zeros() as usize;
    LowerBoundInstance::assemble(
        family,
        Params { k: Some(k), ..Params::default() },
        x,
        y,
        b,
        weighted,
        problem,
        Thresholds {
            yes_at_most: Rational::from_integer(yes_at_most),
            no_at_least: Rational::from_integer(yes_at_most + 1),
        },
        4 * logk,
    )
}

fn mvc_threshold(k: usize) -> i64 {
    (4 * (k - 1) + 4 * k.trailing_zeros() as usize) as i64
}

fn mds_threshold(k: usize) -> i64 {
    (4 * k.trailing_zeros() as usize + 2) as i64
}

/// Copy of the base vertices with no edges, ready for gadget replacement.
fn copy_vertices(base: &Builder) -> Builder {
    Builder {
        labels: base.labels.clone(),
        sides: base.sides.clone(),
        weights: base.weights.clone(),
        ..Builder::default()
    }
}

fn is_variable(base: &Builder, e: (usize, usize)) -> bool {
    base.x_edges.contains(&e) || base.y_edges.contains(&e)
}

/// Vertex cover base family: cover of size `4(k−1) + 4·log₂k` exists iff the
/// inputs intersect.
pub fn gen_mvc_base(k: usize, x: &[bool], y: &[bool]) -> Result<LowerBoundInstance> {
    let base = mvc_base_layout(k, x, y)?;
    Ok(finish(Family::MvcBase, k, x, y, base.b, false, ProblemKind::Vc1, mvc_threshold(k)))
}

/// Weighted square family: zero-weight connectors stand in for edges.
pub fn gen_mwvc_square(k: usize, x: &[bool], y: &[bool]) -> Result<LowerBoundInstance> {
    let Base { b: base, rows, bit } = mvc_base_layout(k, x, y)?;
    let mut b = copy_vertices(&base);
    let zero = Rational::from_integer(0);
    for &(u, v) in &base.edges {
        if bit[u] || bit[v] {
            let side = b.side_of(u, v);
            let p = b.weighted(format!("p[{},{}]", base.labels[u], base.labels[v]), side, zero);
            b.edge(p, u);
            b.edge(p, v);
            b.gadgets.push(super::Gadget {
                kind: GadgetKind::Dangling,
                name: b.labels[p].clone(),
                path: vec![p],
                attached: vec![u, v],
            });
        } else if !is_variable(&base, (u, v)) {
            b.edge(u, v);
        }
    }
    for (row, other, label, side) in [(0, 1, "pa", Side::Alice), (2, 3, "pb", Side::Bob)] {
        for i in 0..k {
            let p = b.weighted(format!("{label}{}", i + 1), side, zero);
            b.edge(p, rows[row][i]);
            b.gadgets.push(super::Gadget {
                kind: GadgetKind::Shared,
                name: b.labels[p].clone(),
                path: vec![p],
                attached: vec![rows[row][i]],
            });
            for j in 0..k {
                if is_variable(&base, (rows[row][i], rows[other][j])) {
                    b.edge(p, rows[other][j]);
                    if row == 0 {
                        b.x_edges.push((p, rows[other][j]));
                    } else {
                        b.y_edges.push((p, rows[other][j]));
                    }
                }
            }
        }
    }
    Ok(finish(Family::MwvcSq, k, x, y, b, true, ProblemKind::Vc2, mvc_threshold(k)))
}

/// Unweighted square family with 3-vertex dangling and shared path gadgets.
pub fn gen_mvc_square(k: usize, x: &[bool], y: &[bool]) -> Result<LowerBoundInstance> {
    let Base { b: base, rows, bit } = mvc_base_layout(k, x, y)?;
    let mut b = copy_vertices(&base);
    for &(u, v) in &base.edges {
        if bit[u] || bit[v] {
            let side = b.side_of(u, v);
            let name = format!("DP[{},{}]", base.labels[u], base.labels[v]);
            b.path_gadget(&name, 3, &[u, v], side, GadgetKind::Dangling);
        } else if !is_variable(&base, (u, v)) {
            b.edge(u, v);
        }
    }
    shared_rows(&mut b, &base, &rows, k, 3, &[(0, 1, "A1_", Side::Alice), (2, 3, "B1_", Side::Bob)], false);
    let w = mvc_threshold(k) + 2 * b.gadgets.len() as i64;
    Ok(finish(Family::MvcSq, k, x, y, b, false, ProblemKind::Vc2, w))
}

/// Shared path gadgets on the listed rows. Variable edges of the base move
/// to the gadgets' head vertices: to the other row's vertex directly, or to
/// the other row's own gadget head when `both_ends` is set.
fn shared_rows(
    b: &mut Builder,
    base: &Builder,
    rows: &[Vec<usize>; 4],
    k: usize,
    len: usize,
    which: &[(usize, usize, &str, Side)],
    both_ends: bool,
) {
    let mut heads = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for &(row, _, name, side) in which {
        for i in 0..k {
            let gi = b.path_gadget(&format!("{name}{}", i + 1), len, &[rows[row][i]], side, GadgetKind::Shared);
            heads[row].push(b.gadgets[gi].path[0]);
        }
    }
    for &(row, other, _, _) in which {
        for i in 0..k {
            for j in 0..k {
                let e = (rows[row][i].min(rows[other][j]), rows[row][i].max(rows[other][j]));
                if !is_variable(base, e) {
                    continue;
                }
                let target = if both_ends { heads[other][j] } else { rows[other][j] };
                b.edge(heads[row][i], target);
                if row < 2 {
                    b.x_edges.push((heads[row][i], target));
                } else {
                    b.y_edges.push((heads[row][i], target));
                }
            }
        }
    }
}

/// Dominating set base family: a dominating set of size `4·log₂k + 2`
/// exists iff the inputs intersect.
pub fn gen_mds_base(k: usize, x: &[bool], y: &[bool]) -> Result<LowerBoundInstance> {
    let base = mds_base_layout(k, x, y)?;
    Ok(finish(Family::MdsBase, k, x, y, base.b, false, ProblemKind::Ds1, mds_threshold(k)))
}

/// Square family with 5-vertex dangling gadgets on bit-gadget edges and
/// 5-vertex shared gadgets on all four rows.
pub fn gen_mds_square_exact(k: usize, x: &[bool], y: &[bool]) -> Result<LowerBoundInstance> {
    let Base { b: base, rows, bit } = mds_base_layout(k, x, y)?;
    let mut b = copy_vertices(&base);
    for &(u, v) in &base.edges {
        if bit[u] || bit[v] {
            let side = b.side_of(u, v);
            let name = format!("DP[{},{}]", base.labels[u], base.labels[v]);
            b.path_gadget(&name, 5, &[u, v], side, GadgetKind::Dangling);
        } else if !is_variable(&base, (u, v)) {
            b.edge(u, v);
        }
    }
    let which = [
        (0, 1, "A1_", Side::Alice),
        (1, 0, "A2_", Side::Alice),
        (2, 3, "B1_", Side::Bob),
        (3, 2, "B2_", Side::Bob),
    ];
    shared_rows(&mut b, &base, &rows, k, 5, &which[..], true);
    // Each variable edge was visited from both of its rows.
    b.edges.sort_unstable();
    b.edges.dedup();
    for list in [&mut b.x_edges, &mut b.y_edges] {
        list.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        list.sort_unstable();
        list.dedup();
    }
    let w = mds_threshold(k) + b.gadgets.len() as i64;
    Ok(finish(Family::MdsSqExact, k, x, y, b, false, ProblemKind::Ds2, w))
}
