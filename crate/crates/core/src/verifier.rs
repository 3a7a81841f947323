//! Anagram detection on coloured graphs.
//!
//! The exhaustive search walks every simple path from every start vertex and
//! keeps a rolling balance between the two halves of the current path, so
//! each path costs O(1). Counterexamples are reported with the smaller
//! endpoint first and the canonical first one is the minimum of
//! `(first, last, vertex sequence)`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph_constructions::{SequenceSubdivisionLabels, Third};
use crate::graph_model::{count_directed_paths, is_simple_path, Colour, ColouredSubdivision, VertexId};
use crate::words::{first_abelian_square, halves_match, ColourMultiset, HalfBalance};

/// Default ceiling on directed path windows examined by exhaustive search.
pub const DEFAULT_MAX_WINDOWS: u64 = 10_000_000;

/// Default cap on the length of a sampled walk.
pub const DEFAULT_MAX_WALK: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("exhaustive search needs more than {limit} path windows; raise the ceiling or force")]
    ResourceCeiling { limit: u64 },
    #[error("sample budget must be at least 1")]
    ZeroBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { budget: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The offending path, smaller endpoint first.
    pub path: Vec<VertexId>,
    /// Number of vertices in the left half.
    pub split: usize,
    /// Colour multiset shared by both halves.
    pub half_multiset: ColourMultiset,
}

impl Counterexample {
    fn new(c: &ColouredSubdivision, mut path: Vec<VertexId>) -> Self {
        if path.first() > path.last() {
            path.reverse();
        }
        let split = path.len() / 2;
        let half_multiset = path[..split].iter().map(|&v| c.colour(v)).collect();
        Self { path, split, half_multiset }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AnagramFree,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub counterexample: Option<Counterexample>,
    /// Undirected paths examined (sampled mode: walks taken).
    pub paths_checked: u64,
    pub mode: Mode,
}

impl VerificationReport {
    pub fn outcome(&self) -> Outcome {
        match self.counterexample {
            Some(_) => Outcome::Counterexample,
            None => Outcome::AnagramFree,
        }
    }

    pub fn is_anagram_free(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveOptions {
    pub max_windows: u64,
    pub force: bool,
}

impl Default for ExhaustiveOptions {
    fn default() -> Self {
        Self { max_windows: DEFAULT_MAX_WINDOWS, force: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleOptions {
    pub budget: u64,
    pub seed: u64,
    pub max_walk: usize,
}

impl SampleOptions {
    pub fn new(budget: u64, seed: u64) -> Self {
        Self { budget, seed, max_walk: DEFAULT_MAX_WALK }
    }
}

/// Re-checks a counterexample independently of the search: the path must be
/// simple in the graph and its halves must have equal colour multisets.
pub fn validate_counterexample(c: &ColouredSubdivision, path: &[VertexId]) -> bool {
    is_simple_path(c.graph().adjacency(), path) && halves_match(&c.path_colours(path))
}

fn colour_width(c: &ColouredSubdivision) -> usize {
    c.colours().iter().max().map_or(0, |&m| m as usize + 1)
}

fn ensure_within_ceiling(c: &ColouredSubdivision, options: &ExhaustiveOptions) -> Result<(), VerifyError> {
    if !options.force && count_directed_paths(c.graph().adjacency(), options.max_windows) > options.max_windows {
        return Err(VerifyError::ResourceCeiling { limit: options.max_windows });
    }
    Ok(())
}

/// Callbacks for [`PathWalker`]: `enter` runs after a vertex is appended to
/// the current path, `leave` just before it is removed.
trait PathVisitor {
    fn enter(&mut self, path: &[VertexId]);
    fn leave(&mut self, path: &[VertexId]);
}

/// Iterative depth-first walk over every simple path from one start vertex.
struct PathWalker<'a> {
    adjacency: &'a [Vec<VertexId>],
    path: Vec<VertexId>,
    cursor: Vec<usize>,
    on_path: Vec<bool>,
}

impl<'a> PathWalker<'a> {
    fn new(adjacency: &'a [Vec<VertexId>]) -> Self {
        Self { adjacency, path: Vec::new(), cursor: Vec::new(), on_path: vec![false; adjacency.len()] }
    }

    fn run<V: PathVisitor>(&mut self, start: VertexId, visitor: &mut V) {
        self.path.push(start);
        self.cursor.push(0);
        self.on_path[start] = true;
        visitor.enter(&self.path);
        while let Some(&top) = self.path.last() {
            let i = self.cursor.last_mut().expect("cursor tracks path");
            if let Some(&next) = self.adjacency[top].get(*i) {
                *i += 1;
                if !self.on_path[next] {
                    self.path.push(next);
                    self.cursor.push(0);
                    self.on_path[next] = true;
                    visitor.enter(&self.path);
                }
            } else {
                visitor.leave(&self.path);
                self.on_path[top] = false;
                self.path.pop();
                self.cursor.pop();
            }
        }
    }
}

/// Extends the half-balance of an even path of length `len - 2` to `len`, or
/// undoes that step when `sign` is -1.
#[inline]
fn shift_halves(balance: &mut HalfBalance, colours: &[Colour], sign: i64) {
    let len = colours.len();
    balance.add(colours[len / 2 - 1], 2 * sign);
    balance.add(colours[len - 2], -sign);
    balance.add(colours[len - 1], -sign);
}

fn improves(best: &Option<Vec<VertexId>>, path: &[VertexId]) -> bool {
    best.as_ref().map_or(true, |b| (path.last(), path) < (b.last(), b.as_slice()))
}

struct AnagramSearch<'a> {
    c: &'a ColouredSubdivision,
    start: VertexId,
    balance: HalfBalance,
    colours: Vec<Colour>,
    checked: u64,
    best: Option<Vec<VertexId>>,
}

impl PathVisitor for AnagramSearch<'_> {
    fn enter(&mut self, path: &[VertexId]) {
        let v = *path.last().expect("non-empty");
        self.colours.push(self.c.colour(v));
        if self.colours.len() % 2 == 0 {
            shift_halves(&mut self.balance, &self.colours, 1);
        }
        if v > self.start {
            self.checked += 1;
            if self.colours.len() % 2 == 0 && self.balance.balanced() && improves(&self.best, path) {
                self.best = Some(path.to_vec());
            }
        }
    }

    fn leave(&mut self, _path: &[VertexId]) {
        if self.colours.len() % 2 == 0 {
            shift_halves(&mut self.balance, &self.colours, -1);
        }
        self.colours.pop();
    }
}

fn search_from(c: &ColouredSubdivision, width: usize, start: VertexId) -> (u64, Option<Vec<VertexId>>) {
    let mut search = AnagramSearch {
        c,
        start,
        balance: HalfBalance::new(width),
        colours: Vec::new(),
        checked: 1,
        best: None,
    };
    PathWalker::new(c.graph().adjacency()).run(start, &mut search);
    (search.checked, search.best)
}

/// Exhaustive search for a path whose colour sequence is an anagram.
pub fn find_anagram(c: &ColouredSubdivision, options: &ExhaustiveOptions) -> Result<VerificationReport, VerifyError> {
    ensure_within_ceiling(c, options)?;
    let n = c.graph().vertex_count();
    let width = colour_width(c);
    let first_hit = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<(u64, Option<Vec<VertexId>>)>> = (0..n)
        .into_par_iter()
        .map(|s| {
            if s > first_hit.load(Ordering::Relaxed) {
                return None;
            }
            let found = search_from(c, width, s);
            if found.1.is_some() {
                first_hit.fetch_min(s, Ordering::Relaxed);
            }
            Some(found)
        })
        .collect();
    // Every start up to the first hit ran to completion, so this is
    // independent of scheduling.
    let mut paths_checked = 0;
    for (checked, hit) in results.into_iter().map_while(|r| r) {
        paths_checked += checked;
        if let Some(path) = hit {
            return Ok(VerificationReport {
                counterexample: Some(Counterexample::new(c, path)),
                paths_checked,
                mode: Mode::Exhaustive,
            });
        }
    }
    Ok(VerificationReport { counterexample: None, paths_checked, mode: Mode::Exhaustive })
}

/// Random simple walks with restart; every even window of every walk is
/// checked. Finding nothing is not a certificate.
pub fn find_anagram_sampled(c: &ColouredSubdivision, options: &SampleOptions) -> Result<VerificationReport, VerifyError> {
    if options.budget == 0 {
        return Err(VerifyError::ZeroBudget);
    }
    let mode = Mode::Sampled { budget: options.budget, seed: options.seed };
    let n = c.graph().vertex_count();
    if n == 0 {
        return Ok(VerificationReport { counterexample: None, paths_checked: 0, mode });
    }
    let adjacency = c.graph().adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut on_path = vec![false; n];
    let mut walk: Vec<VertexId> = Vec::new();
    let mut open: Vec<VertexId> = Vec::new();
    let max_walk = options.max_walk.clamp(1, n);
    for taken in 1..=options.budget {
        let target = rng.gen_range(1..=max_walk);
        walk.clear();
        let mut v = rng.gen_range(0..n);
        walk.push(v);
        on_path[v] = true;
        while walk.len() < target {
            open.clear();
            open.extend(adjacency[v].iter().copied().filter(|&w| !on_path[w]));
            match open.choose(&mut rng) {
                Some(&w) => {
                    walk.push(w);
                    on_path[w] = true;
                    v = w;
                }
                None => break,
            }
        }
        walk.iter().for_each(|&w| on_path[w] = false);
        if let Some((start, len)) = first_abelian_square(&c.path_colours(&walk)) {
            return Ok(VerificationReport {
                counterexample: Some(Counterexample::new(c, walk[start..start + len].to_vec())),
                paths_checked: taken,
                mode,
            });
        }
    }
    Ok(VerificationReport { counterexample: None, paths_checked: options.budget, mode })
}

/// Outcome of restricting every even-order path to a colour set.
///
/// A path whose restriction is non-empty and not an anagram cannot be an
/// anagram itself, so a report with no restricted anagram and no empty
/// restrictions certifies the whole colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionReport {
    pub keep: BTreeSet<Colour>,
    /// Even-order paths examined (up to reversal).
    pub paths_checked: u64,
    /// Paths refuted by their restriction.
    pub refuted: u64,
    /// Paths with no vertex coloured from `keep`.
    pub empty: u64,
    /// Canonically first path whose restriction is an anagram.
    pub restricted_anagram: Option<Vec<VertexId>>,
}

impl RestrictionReport {
    pub fn certifies_all(&self) -> bool {
        self.restricted_anagram.is_none() && self.empty == 0
    }
}

pub fn restricted_colours(c: &ColouredSubdivision, path: &[VertexId], keep: &BTreeSet<Colour>) -> Vec<Colour> {
    path.iter().map(|&v| c.colour(v)).filter(|col| keep.contains(col)).collect()
}

struct RestrictionSearch<'a> {
    c: &'a ColouredSubdivision,
    keep: &'a BTreeSet<Colour>,
    start: VertexId,
    balance: HalfBalance,
    kept: Vec<Colour>,
    checked: u64,
    refuted: u64,
    empty: u64,
    best: Option<Vec<VertexId>>,
}

impl PathVisitor for RestrictionSearch<'_> {
    fn enter(&mut self, path: &[VertexId]) {
        let v = *path.last().expect("non-empty");
        let colour = self.c.colour(v);
        if self.keep.contains(&colour) {
            self.kept.push(colour);
            if self.kept.len() % 2 == 0 {
                shift_halves(&mut self.balance, &self.kept, 1);
            }
        }
        if v > self.start && path.len() % 2 == 0 {
            self.checked += 1;
            if self.kept.is_empty() {
                self.empty += 1;
            } else if self.kept.len() % 2 == 0 && self.balance.balanced() {
                if improves(&self.best, path) {
                    self.best = Some(path.to_vec());
                }
            } else {
                self.refuted += 1;
            }
        }
    }

    fn leave(&mut self, path: &[VertexId]) {
        let v = *path.last().expect("non-empty");
        if self.keep.contains(&self.c.colour(v)) {
            if self.kept.len() % 2 == 0 {
                shift_halves(&mut self.balance, &self.kept, -1);
            }
            self.kept.pop();
        }
    }
}

/// Restricts every even-order path to `keep` and classifies the result.
pub fn check_restriction(
    c: &ColouredSubdivision,
    keep: &BTreeSet<Colour>,
    options: &ExhaustiveOptions,
) -> Result<RestrictionReport, VerifyError> {
    ensure_within_ceiling(c, options)?;
    let width = colour_width(c);
    let per_start: Vec<RestrictionSearch<'_>> = (0..c.graph().vertex_count())
        .into_par_iter()
        .map(|start| {
            let mut search = RestrictionSearch {
                c,
                keep,
                start,
                balance: HalfBalance::new(width),
                kept: Vec::new(),
                checked: 0,
                refuted: 0,
                empty: 0,
                best: None,
            };
            PathWalker::new(c.graph().adjacency()).run(start, &mut search);
            search
        })
        .collect();
    let mut report = RestrictionReport {
        keep: keep.clone(),
        paths_checked: 0,
        refuted: 0,
        empty: 0,
        restricted_anagram: None,
    };
    for search in per_start {
        report.paths_checked += search.checked;
        report.refuted += search.refuted;
        report.empty += search.empty;
        if report.restricted_anagram.is_none() {
            report.restricted_anagram = search.best;
        }
    }
    Ok(report)
}

/// A violated condition of a discriminating colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscriminatingFailure {
    /// Condition 1: originals are not coloured by the two-colouring, or its
    /// colours leak onto division vertices.
    OriginalColouring { vertex: VertexId, reason: String },
    /// Condition 2: a division path carries an anagram, given as vertices.
    DivisionAnagram { edge: usize, path: Vec<VertexId> },
    /// Condition 3: no colour is exclusive to this family of thirds.
    NoExclusiveColour { third: Third },
    /// Condition 4: the counted colours on `Q(edge)` do not outweigh those on
    /// all lower-ranked edges.
    NotDominant { third: Third, edge: usize, earlier: u64, own: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminatingReport {
    pub original_colouring: Option<DiscriminatingFailure>,
    pub division_anagram: Option<DiscriminatingFailure>,
    pub exclusive_colours: Option<DiscriminatingFailure>,
    pub dominance: Option<DiscriminatingFailure>,
    /// The inferred exclusive colour sets `C(X)`, `C(Y)`, `C(Z)`.
    pub inferred: [BTreeSet<Colour>; 3],
}

impl DiscriminatingReport {
    pub fn conditions(&self) -> [bool; 4] {
        [
            self.original_colouring.is_none(),
            self.division_anagram.is_none(),
            self.exclusive_colours.is_none(),
            self.dominance.is_none(),
        ]
    }

    pub fn passed(&self) -> bool {
        self.conditions().iter().all(|&ok| ok)
    }
}

fn check_original_colouring(c: &ColouredSubdivision, labels: &SequenceSubdivisionLabels) -> Option<DiscriminatingFailure> {
    use crate::graph_model::Side;
    let g = c.graph();
    let mut side_colour: [Option<Colour>; 2] = [None, None];
    for v in 0..g.original_count() {
        let slot = match labels.sides[v] {
            Side::Black => 0,
            Side::White => 1,
        };
        match side_colour[slot] {
            None => side_colour[slot] = Some(c.colour(v)),
            Some(col) if col != c.colour(v) => {
                return Some(DiscriminatingFailure::OriginalColouring {
                    vertex: v,
                    reason: format!("colour {} differs from {col} used on its side", c.colour(v)),
                })
            }
            Some(_) => {}
        }
    }
    if let [Some(b), Some(w)] = side_colour {
        if b == w {
            return Some(DiscriminatingFailure::OriginalColouring {
                vertex: 0,
                reason: format!("both sides use colour {b}"),
            });
        }
    }
    let reserved: Vec<Colour> = side_colour.iter().flatten().copied().collect();
    (g.original_count()..g.vertex_count()).find(|&v| reserved.contains(&c.colour(v))).map(|v| {
        DiscriminatingFailure::OriginalColouring {
            vertex: v,
            reason: format!("division vertex uses original colour {}", c.colour(v)),
        }
    })
}

/// Checks conditions (1)-(4) of a discriminating colouring. `C(Q)` is taken
/// to be every colour that occurs only on vertices of `Q`-thirds.
pub fn check_discriminating(c: &ColouredSubdivision, labels: &SequenceSubdivisionLabels) -> DiscriminatingReport {
    let g = c.graph();
    let original_colouring = check_original_colouring(c, labels);

    let division_anagram = (0..g.base().edge_count()).find_map(|e| {
        let path = g.division_path(e);
        first_abelian_square(&c.path_colours(path))
            .map(|(s, len)| DiscriminatingFailure::DivisionAnagram { edge: e, path: path[s..s + len].to_vec() })
    });

    let mut inferred: [BTreeSet<Colour>; 3] = Default::default();
    let mut exclusive_colours = None;
    for third in Third::ALL {
        let mut member = vec![false; g.vertex_count()];
        for e in 0..g.base().edge_count() {
            labels.third(third, e).iter().for_each(|&v| member[v] = true);
        }
        let inside: BTreeSet<Colour> = (0..g.vertex_count()).filter(|&v| member[v]).map(|v| c.colour(v)).collect();
        let outside: BTreeSet<Colour> = (0..g.vertex_count()).filter(|&v| !member[v]).map(|v| c.colour(v)).collect();
        inferred[third.index()] = inside.difference(&outside).copied().collect();
        if inferred[third.index()].is_empty() && exclusive_colours.is_none() {
            exclusive_colours = Some(DiscriminatingFailure::NoExclusiveColour { third });
        }
    }

    let mut dominance = None;
    let mut by_rank: Vec<usize> = (0..g.base().edge_count()).collect();
    by_rank.sort_by_key(|&e| labels.edge_rank[e]);
    'outer: for third in Third::ALL {
        let counted = &inferred[third.index()];
        let mut earlier = 0u64;
        for &e in &by_rank {
            let own = labels.third(third, e).iter().filter(|&&v| counted.contains(&c.colour(v))).count() as u64;
            if earlier >= own {
                dominance = Some(DiscriminatingFailure::NotDominant { third, edge: e, earlier, own });
                break 'outer;
            }
            earlier += own;
        }
    }

    DiscriminatingReport { original_colouring, division_anagram, exclusive_colours, dominance, inferred }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::BaseGraph;

    fn coloured_path(colours: &[Colour]) -> ColouredSubdivision {
        ColouredSubdivision::from_base(&BaseGraph::path(colours.len()), colours.to_vec()).unwrap()
    }

    #[test]
    fn square_on_p4() {
        let c = coloured_path(&[1, 2, 1, 2]);
        let report = find_anagram(&c, &ExhaustiveOptions::default()).unwrap();
        let cex = report.counterexample.expect("1212 is a square");
        assert_eq!(cex.path, vec![0, 1, 2, 3]);
        assert_eq!(cex.split, 2);
        assert_eq!(cex.half_multiset, [1, 2].into_iter().collect());
        assert!(validate_counterexample(&c, &cex.path));
    }

    #[test]
    fn p3_is_free() {
        let report = find_anagram(&coloured_path(&[1, 2, 1]), &ExhaustiveOptions::default()).unwrap();
        assert!(report.is_anagram_free());
        assert_eq!(report.paths_checked, 6);
        assert_eq!(report.outcome(), Outcome::AnagramFree);
    }

    #[test]
    fn canonical_first_counterexample() {
        // 0-1-2-3-4 coloured 3 1 1 2 2: anagrams 1-2 (11), 3-4 (22), 1..4 (1122 no).
        let report = find_anagram(&coloured_path(&[3, 1, 1, 2, 2]), &ExhaustiveOptions::default()).unwrap();
        assert_eq!(report.counterexample.unwrap().path, vec![1, 2]);
        // [1..=4] (1221) precedes [2, 3] (22) because it starts earlier
        let report = find_anagram(&coloured_path(&[4, 1, 2, 2, 1]), &ExhaustiveOptions::default()).unwrap();
        assert_eq!(report.counterexample.unwrap().path, vec![1, 2, 3, 4]);
    }

    #[test]
    fn resource_ceiling() {
        let c = ColouredSubdivision::from_base(&BaseGraph::complete(7), vec![1, 2, 3, 4, 5, 6, 7]).unwrap();
        let tight = ExhaustiveOptions { max_windows: 100, force: false };
        assert_eq!(find_anagram(&c, &tight), Err(VerifyError::ResourceCeiling { limit: 100 }));
        let forced = ExhaustiveOptions { max_windows: 100, force: true };
        assert!(find_anagram(&c, &forced).unwrap().is_anagram_free());
    }

    #[test]
    fn sampled_rejects_zero_budget() {
        let c = coloured_path(&[1, 2, 1, 2]);
        assert_eq!(find_anagram_sampled(&c, &SampleOptions::new(0, 1)), Err(VerifyError::ZeroBudget));
        let report = find_anagram_sampled(&c, &SampleOptions::new(1000, 1)).unwrap();
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn restriction_examples() {
        let c = coloured_path(&[1, 2, 1, 2]);
        let report = check_restriction(&c, &BTreeSet::from([1]), &ExhaustiveOptions::default()).unwrap();
        assert_eq!(report.restricted_anagram, Some(vec![0, 1, 2, 3]));
        assert_eq!(restricted_colours(&c, &[0, 1, 2, 3], &BTreeSet::from([1])), vec![1, 1]);

        let none = check_restriction(&c, &BTreeSet::new(), &ExhaustiveOptions::default()).unwrap();
        assert_eq!(none.restricted_anagram, None);
        assert_eq!(none.empty, none.paths_checked);
        assert!(!none.certifies_all());

        let free = coloured_path(&[1, 2, 3, 1]);
        let all = check_restriction(&free, &BTreeSet::from([1, 2, 3]), &ExhaustiveOptions::default()).unwrap();
        assert!(all.certifies_all());
    }
}
