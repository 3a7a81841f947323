use std::collections::VecDeque;

use super::VertexId;

/// Every simple path of a graph, once per reversal class.
///
/// Each path is reported with its smaller endpoint first. Paths come out
/// ordered by first vertex, then last vertex, then interior sequence; the
/// single-vertex path `[s]` precedes every longer path starting at `s`.
pub struct SimplePaths<'a> {
    adjacency: &'a [Vec<VertexId>],
    next_start: VertexId,
    pending: VecDeque<Vec<VertexId>>,
}

impl<'a> SimplePaths<'a> {
    fn fill(&mut self) -> bool {
        while self.pending.is_empty() && self.next_start < self.adjacency.len() {
            let s = self.next_start;
            self.next_start += 1;
            let mut found = Vec::new();
            let mut path = vec![s];
            let mut on_path = vec![false; self.adjacency.len()];
            on_path[s] = true;
            collect_from(self.adjacency, &mut path, &mut on_path, &mut found);
            found.sort_by(|a, b| (a.last(), a.as_slice()).cmp(&(b.last(), b.as_slice())));
            self.pending.push_back(vec![s]);
            self.pending.extend(found);
        }
        !self.pending.is_empty()
    }
}

fn collect_from(adjacency: &[Vec<VertexId>], path: &mut Vec<VertexId>, on_path: &mut [bool], out: &mut Vec<Vec<VertexId>>) {
    let last = *path.last().expect("path is non-empty");
    for &next in &adjacency[last] {
        if on_path[next] {
            continue;
        }
        path.push(next);
        on_path[next] = true;
        if next > path[0] {
            out.push(path.clone());
        }
        collect_from(adjacency, path, on_path, out);
        on_path[next] = false;
        path.pop();
    }
}

impl Iterator for SimplePaths<'_> {
    type Item = Vec<VertexId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.fill() {
            self.pending.pop_front()
        } else {
            None
        }
    }
}

pub fn enumerate_simple_paths(adjacency: &[Vec<VertexId>]) -> SimplePaths<'_> {
    SimplePaths { adjacency, next_start: 0, pending: VecDeque::new() }
}

/// Number of directed simple paths (single vertices included), counting at
/// most `cap + 1` so callers can detect overflow of a budget cheaply.
pub fn count_directed_paths(adjacency: &[Vec<VertexId>], cap: u64) -> u64 {
    fn walk(adjacency: &[Vec<VertexId>], v: VertexId, on_path: &mut [bool], count: &mut u64, cap: u64) {
        for &next in &adjacency[v] {
            if *count > cap {
                return;
            }
            if !on_path[next] {
                *count += 1;
                on_path[next] = true;
                walk(adjacency, next, on_path, count, cap);
                on_path[next] = false;
            }
        }
    }
    let mut count = 0;
    let mut on_path = vec![false; adjacency.len()];
    for s in 0..adjacency.len() {
        if count > cap {
            break;
        }
        count += 1;
        on_path[s] = true;
        walk(adjacency, s, &mut on_path, &mut count, cap);
        on_path[s] = false;
    }
    count
}

/// True iff `path` is non-empty, repeats no vertex and follows edges.
pub fn is_simple_path(adjacency: &[Vec<VertexId>], path: &[VertexId]) -> bool {
    if path.is_empty() || path.iter().any(|&v| v >= adjacency.len()) {
        return false;
    }
    let mut seen = vec![false; adjacency.len()];
    for &v in path {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    path.windows(2).all(|p| adjacency[p[0]].binary_search(&p[1]).is_ok())
}
