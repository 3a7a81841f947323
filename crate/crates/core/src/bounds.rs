//! Bound formulas and constructive lower-bound witnesses.
//!
//! Real-valued bounds are evaluated in `f64` (relative error well under
//! 1e-9 for the parameter ranges used); the ceilings and thresholds that
//! decide behaviour are computed exactly with big integers.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use crate::graph_model::{subdivide, BaseGraph, Colour, ColouredSubdivision, GraphError, Provenance, RootedTree, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value does not fit in 128 bits")]
    Overflow,
    #[error("no anagram found although the preconditions hold; the input breaks the counting argument")]
    NoCollision,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn precondition(msg: impl Into<String>) -> BoundsError {
    BoundsError::Precondition(msg.into())
}

/// `(c! (n/c - 1))^(1/c) - c`. A non-positive inner term gives `-c`.
pub fn kn_lower_bound(n: u64, c: u64) -> f64 {
    // c! (n/c - 1) = (c-1)! (n - c)
    let inner = (1..c).map(|i| i as f64).product::<f64>() * (n as f64 - c as f64);
    inner.max(0.0).powf(1.0 / c as f64) - c as f64
}

/// Number of colour multisets of size at most `k` on `c` colours, `C(k+c, c)`.
pub fn multiset_count(k: u64, c: u64) -> Result<u128, BoundsError> {
    let mut r: u128 = 1;
    for i in 1..=u128::from(c) {
        // r = C(k + i - 1, i - 1), so r (k + i) is divisible by i
        r = r.checked_mul(u128::from(k) + i).ok_or(BoundsError::Overflow)? / i;
    }
    Ok(r)
}

/// `ceil(sqrt(h_eff / log_d h))`: the least `c` with `h^(c^2) >= d^h_eff`.
pub fn tree_lower_bound(d: u64, h_eff: u64, h: u64) -> Result<u64, BoundsError> {
    if d < 2 {
        return Err(precondition(format!("d = {d} must be at least 2")));
    }
    if h < 2 || h * h < d {
        return Err(precondition(format!("h = {h} must be at least max(2, sqrt({d}))")));
    }
    let target = BigUint::from(d).pow(u32::try_from(h_eff).map_err(|_| BoundsError::Overflow)?);
    let mut c = 0u64;
    loop {
        let exp = u32::try_from(c * c).map_err(|_| BoundsError::Overflow)?;
        if BigUint::from(h).pow(exp) >= target {
            return Ok(c);
        }
        c += 1;
    }
}

fn log_base(base: f64, x: f64) -> f64 {
    x.ln() / base.ln()
}

/// `sqrt(h / log_m(h(k+1)))` with `m = min(d, (h(k+1))^2)`.
pub fn dary_lower(d: u64, h: u64, k: u64) -> f64 {
    let hk = (h * (k + 1)) as f64;
    let m = (d as f64).min(hk * hk);
    (h as f64 / log_base(m, hk)).sqrt()
}

/// `10h / log_(d+1)(k / 2d) + 14`.
pub fn dary_upper(d: u64, h: u64, k: u64) -> f64 {
    10.0 * h as f64 / log_base(d as f64 + 1.0, k as f64 / (2 * d) as f64) + 14.0
}

/// Both sides of the bound on the anagram-free chromatic number of the
/// `k`-subdivision of the complete `d`-ary tree of height `h`.
pub fn dary_two_sided(d: u64, h: u64, k: u64) -> Result<(f64, f64), BoundsError> {
    if d < 2 || h < 1 {
        return Err(precondition(format!("need d >= 2 and h >= 1, got d = {d}, h = {h}")));
    }
    if k <= 2 * d {
        return Err(precondition(format!("k = {k} must exceed 2d = {}", 2 * d)));
    }
    Ok((dary_lower(d, h, k), dary_upper(d, h, k)))
}

/// `ceil(h / log_(d+1)(k / 2d))`, at least 1: the least `x >= 1` with
/// `(d+1)^h (2d)^x <= k^x`.
pub fn band_count(d: usize, h: usize, k: usize) -> Result<usize, BoundsError> {
    if d < 2 {
        return Err(precondition(format!("d = {d} must be at least 2")));
    }
    if k <= 2 * d {
        return Err(precondition(format!("k = {k} must exceed 2d = {}", 2 * d)));
    }
    let top = BigUint::from(d + 1).pow(u32::try_from(h).map_err(|_| BoundsError::Overflow)?);
    let (mut lhs, mut rhs) = (top, BigUint::from(1u8));
    let mut x = 0;
    loop {
        x += 1;
        lhs *= 2 * d;
        rhs *= k;
        if lhs <= rhs {
            return Ok(x);
        }
    }
}

/// Effective vertices, root and height of a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveStructure {
    /// Leaves and branch vertices (two or more children).
    pub effective: Vec<bool>,
    pub effective_root: VertexId,
    /// Minimum over leaves of the number of branch vertices on the root path.
    pub effective_height: usize,
}

pub fn effective_structure(t: &RootedTree) -> EffectiveStructure {
    let effective: Vec<bool> = (0..t.len()).map(|v| t.children(v).len() != 1).collect();
    let mut effective_root = t.root();
    while !effective[effective_root] {
        effective_root = t.children(effective_root)[0];
    }
    let mut branches = vec![0usize; t.len()];
    let mut height = usize::MAX;
    for v in t.bfs_order() {
        let own = usize::from(t.children(v).len() >= 2);
        let above = t.parent(v).map_or(0, |p| branches[p]);
        branches[v] = above + own;
        if t.is_leaf(v) {
            height = height.min(branches[v]);
        }
    }
    EffectiveStructure { effective, effective_root, effective_height: height }
}

/// True iff every branch vertex has at least `d` children.
pub fn is_d_branch(t: &RootedTree, d: usize) -> bool {
    (0..t.len()).all(|v| t.children(v).len() < 2 || t.children(v).len() >= d)
}

/// A subtree found inside a coloured tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeWitness {
    pub colour: Colour,
    /// Vertices of the host tree; `vertices[i]` is vertex `i` of `shape`.
    pub vertices: Vec<VertexId>,
    pub shape: RootedTree,
}

impl SubtreeWitness {
    fn from_parents(colour: Colour, host: &RootedTree, members: &[VertexId]) -> Self {
        let mut local: HashMap<VertexId, usize> = HashMap::new();
        let mut vertices: Vec<VertexId> = members.to_vec();
        vertices.sort_by_key(|&v| (host.depth(v), v));
        for (i, &v) in vertices.iter().enumerate() {
            local.insert(v, i);
        }
        let parents: Vec<Option<usize>> =
            vertices.iter().map(|&v| host.parent(v).and_then(|p| local.get(&p).copied())).collect();
        let shape = RootedTree::from_parents(&parents).expect("witness vertices form a subtree");
        Self { colour, vertices, shape }
    }

    /// Checks that the witness is a subtree of `host` whose effective
    /// vertices all have the witness colour, whose branch vertices have at
    /// least `d` children and whose effective height is at least `target`.
    pub fn validate(&self, host: &RootedTree, colours: &[Colour], d: usize, target: usize) -> bool {
        let local_root = self.shape.root();
        let linked = (0..self.shape.len()).all(|i| match self.shape.parent(i) {
            Some(p) => host.parent(self.vertices[i]) == Some(self.vertices[p]),
            None => i == local_root,
        });
        let eff = effective_structure(&self.shape);
        linked
            && is_d_branch(&self.shape, d)
            && eff.effective_height >= target
            && (0..self.shape.len()).filter(|&i| eff.effective[i]).all(|i| colours[self.vertices[i]] == self.colour)
    }
}

/// Finds, for some colour `i`, a `d`-branch subtree whose effective vertices
/// all have colour `i` and whose effective height is at least
/// `targets[i - 1]`. Colours must lie in `1..=targets.len()`.
pub fn extract_monochromatic_subtree(
    t: &RootedTree,
    colours: &[Colour],
    d: usize,
    targets: &[usize],
) -> Result<SubtreeWitness, BoundsError> {
    if d < 2 {
        return Err(precondition(format!("d = {d} must be at least 2")));
    }
    if colours.len() != t.len() {
        return Err(precondition("one colour per tree vertex required"));
    }
    if let Some(&c) = colours.iter().find(|&&c| c == 0 || c as usize > targets.len()) {
        return Err(precondition(format!("colour {c} outside 1..={}", targets.len())));
    }
    if !is_d_branch(t, d) {
        return Err(precondition(format!("some branch vertex has fewer than {d} children")));
    }
    let need: usize = targets.iter().sum();
    let have = effective_structure(t).effective_height;
    if have < need {
        return Err(precondition(format!("effective height {have} is below the target sum {need}")));
    }
    let mut targets = targets.to_vec();
    let (colour, members) = extract_from(t, colours, d, t.root(), &mut targets);
    Ok(SubtreeWitness::from_parents(colour, t, &members))
}

fn extract_from(
    t: &RootedTree,
    colours: &[Colour],
    d: usize,
    from: VertexId,
    targets: &mut [usize],
) -> (Colour, Vec<VertexId>) {
    let mut root = from;
    while t.children(root).len() == 1 {
        root = t.children(root)[0];
    }
    let colour = colours[root];
    let i = colour as usize - 1;
    if targets[i] == 0 || t.is_leaf(root) {
        return (colour, vec![root]);
    }
    targets[i] -= 1;
    let mut members = vec![root];
    for &child in &t.children(root)[..d] {
        let (found, sub) = extract_from(t, colours, d, child, targets);
        if found != colour {
            targets[i] += 1;
            return (found, sub);
        }
        // connect the child's witness back up to `root`
        let mut v = sub[0];
        while v != root {
            if v != sub[0] {
                members.push(v);
            }
            v = t.parent(v).expect("below root");
        }
        members.extend(sub);
    }
    targets[i] += 1;
    (colour, members)
}

/// `targets` of length `x` summing to `total`, each `floor` or `ceil` of
/// `total / x`, larger ones first.
pub fn equitable_targets(total: usize, x: usize) -> Vec<usize> {
    (0..x).map(|i| total / x + usize::from(i < total % x)).collect()
}

fn multiset_key(colours: &[Colour], path: &[VertexId]) -> Vec<(Colour, usize)> {
    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    for &v in path {
        *counts.entry(colours[v]).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// An anagram in a tree coloured with fewer colours than the lower bound
/// allows, found through two root-leaf paths of a monochromatic-branch
/// subtree with equal colour multisets. Returns the anagram's vertices in
/// path order.
pub fn find_anagram_undercoloured_tree(
    t: &RootedTree,
    colours: &[Colour],
    x: usize,
    d: usize,
    h: usize,
) -> Result<Vec<VertexId>, BoundsError> {
    if t.height() > h {
        return Err(precondition(format!("tree height {} exceeds h = {h}", t.height())));
    }
    let h_eff = effective_structure(t).effective_height;
    let bound = tree_lower_bound(d as u64, h_eff as u64, h as u64)?;
    if x == 0 || x as u64 >= bound {
        return Err(precondition(format!("x = {x} must lie in 1..{bound}")));
    }
    let mut palette: Vec<Colour> = colours.to_vec();
    palette.sort_unstable();
    palette.dedup();
    if palette.len() > x {
        return Err(precondition(format!("colouring uses {} colours, more than x = {x}", palette.len())));
    }
    let dense: Vec<Colour> =
        colours.iter().map(|c| palette.binary_search(c).expect("colour in palette") as Colour + 1).collect();
    let witness = extract_monochromatic_subtree(t, &dense, d, &equitable_targets(h_eff, x))?;
    let shape = &witness.shape;
    let host = |i: usize| witness.vertices[i];
    let mut seen: HashMap<Vec<(Colour, usize)>, usize> = HashMap::new();
    for leaf in shape.leaves() {
        let path: Vec<VertexId> = shape.root_path(leaf).into_iter().map(host).collect();
        let key = multiset_key(colours, &path);
        let Some(&other) = seen.get(&key) else {
            seen.insert(key, leaf);
            continue;
        };
        let first = shape.root_path(other);
        let second = shape.root_path(leaf);
        let lca = *first.iter().find(|v| second.contains(v)).expect("shared root");
        let below = |p: &[usize]| p.iter().take_while(|&&v| v != lca).copied().collect::<Vec<_>>();
        let (down1, down2) = (below(&first), below(&second));
        // parent(leaf 1) .. child of lca, lca, child of lca .. leaf 2
        let mut anagram: Vec<VertexId> = down1[1..].iter().map(|&v| host(v)).collect();
        anagram.push(host(lca));
        anagram.extend(down2.iter().rev().map(|&v| host(v)));
        return Ok(anagram);
    }
    Err(BoundsError::NoCollision)
}

/// An anagram `u P_a v P_b` in a coloured subdivision of a complete graph:
/// `u` and `v` share a colour, and the edges `a = uv` and `b = vw` carry
/// equal division multisets. Searches the largest colour class of original
/// vertices.
pub fn find_anagram_pigeonhole(s: &ColouredSubdivision) -> Result<Vec<VertexId>, BoundsError> {
    let g = s.graph();
    let n = g.original_count();
    if n == 0 {
        return Err(BoundsError::NoCollision);
    }
    let mut classes: BTreeMap<Colour, Vec<VertexId>> = BTreeMap::new();
    for v in 0..n {
        classes.entry(s.colour(v)).or_default().push(v);
    }
    let class_colour = classes.iter().max_by_key(|(c, vs)| (vs.len(), std::cmp::Reverse(**c))).map(|(&c, _)| c).expect("n > 0");
    let in_class = |v: VertexId| s.colour(v) == class_colour;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(a, b)) in g.base().edges().iter().enumerate() {
        if in_class(a) && in_class(b) {
            incident[a].push(e);
            incident[b].push(e);
        }
    }
    let oriented = |e: usize, from: VertexId| {
        let mut path = g.division_path(e).to_vec();
        if g.base().edges()[e].0 != from {
            path.reverse();
        }
        path
    };
    for v in 0..n {
        let mut seen: HashMap<Vec<(Colour, usize)>, usize> = HashMap::new();
        for &e in &incident[v] {
            let key = multiset_key(s.colours(), g.division_path(e));
            if let Some(&a) = seen.get(&key) {
                let (x, y) = g.base().edges()[a];
                let u = if x == v { y } else { x };
                let mut path = vec![u];
                path.extend(oriented(a, u));
                path.push(v);
                path.extend(oriented(e, v));
                return Ok(path);
            }
            seen.insert(key, e);
        }
    }
    Err(BoundsError::NoCollision)
}

/// A subdivision of `base` with independent uniform division counts in
/// `0..=k` and uniform colours in `1..=c`.
pub fn random_coloured_subdivision<R: Rng + ?Sized>(
    base: &BaseGraph,
    k: usize,
    c: Colour,
    rng: &mut R,
) -> Result<ColouredSubdivision, BoundsError> {
    let counts: Vec<usize> = (0..base.edge_count()).map(|_| rng.gen_range(0..=k)).collect();
    let s = subdivide(base, &counts)?;
    let colours = (0..s.vertex_count()).map(|_| rng.gen_range(1..=c)).collect();
    let provenance = Provenance::new("random").with("k", k).with("c", c);
    Ok(ColouredSubdivision::new(s, colours, (1..=c).collect(), provenance)?)
}
