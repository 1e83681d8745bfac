use std::collections::VecDeque;

/// Cuthill–McKee ordering (position → node) of the graph `adjacency`, seeded with `roots`.
///
/// Nodes are numbered breadth-first from the roots; neighbours are visited by ascending
/// degree, ties by index. Components not reached from the roots are started from their
/// lowest-degree node. Reversing the result gives the reverse Cuthill–McKee ordering.
pub fn cuthill_mckee(adjacency: &[Vec<usize>], roots: &[usize]) -> Vec<usize> {
    let n = adjacency.len();
    let degree = |v: usize| adjacency[v].len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    let mut seeds: Vec<usize> = roots.to_vec();
    seeds.sort_by_key(|&v| (degree(v), v));
    seeds.dedup();
    for &s in &seeds {
        if !visited[s] {
            visited[s] = true;
            queue.push_back(s);
        }
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (degree(v), v));
    let mut next_seed = 0;
    loop {
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            nbrs.sort_by_key(|&w| (degree(w), w));
            nbrs.dedup();
            for w in nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
        while next_seed < n && visited[by_degree[next_seed]] {
            next_seed += 1;
        }
        if next_seed == n {
            break;
        }
        let s = by_degree[next_seed];
        visited[s] = true;
        queue.push_back(s);
    }
    order
}

/// Pseudo-peripheral node: the last node reached by repeated breadth-first sweeps.
pub fn peripheral_node(adjacency: &[Vec<usize>]) -> usize {
    if adjacency.is_empty() {
        return 0;
    }
    let mut start = 0;
    let mut depth = 0;
    for _ in 0..4 {
        let (far, d) = farthest(adjacency, start);
        if d <= depth {
            break;
        }
        depth = d;
        start = far;
    }
    start
}

fn farthest(adjacency: &[Vec<usize>], start: usize) -> (usize, usize) {
    let mut dist = vec![usize::MAX; adjacency.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut last = (start, 0);
    while let Some(v) = queue.pop_front() {
        last = (v, dist[v]);
        for &w in &adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    last
}
