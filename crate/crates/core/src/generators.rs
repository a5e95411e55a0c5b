//! Deterministic instance factories: Latin squares, their bipartite-graph
//! encodings, colored complete bipartite graphs, and seeded random properly
//! edge-colored graphs with a prescribed minimum degree.
//!
//! Every generator is a pure function of its arguments; the seeded ones
//! draw exclusively from [`crate::rng::SplitMix64`], so equal
//! seeds give byte-identical instances on every platform.

use crate::graph::ColoredGraph;
use crate::rng::{Seed, SplitMix64};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    /// The construction needs a positive order / side size.
    ZeroOrder,
    /// The requested minimum degree cannot be met: it must satisfy
    /// `1 <= delta <= limit` for the given vertex counts.
    InfeasibleDegree { delta: usize, limit: usize },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::ZeroOrder => write!(f, "order must be at least 1"),
            GenError::InfeasibleDegree { delta, limit } => {
                write!(
                    f,
                    "minimum degree {delta} infeasible (must be between 1 and {limit})"
                )
            }
        }
    }
}

impl std::error::Error for GenError {}

/// An n-by-n array over symbols `0..n` with each symbol exactly once per
/// row and per column; equivalently a proper n-edge-coloring of K_{n,n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    pub(crate) fn from_validated(n: usize, cells: Vec<u32>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        LatinSquare { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Symbol at (row, col). Panics on out-of-range indices.
    pub fn get(&self, row: usize, col: usize) -> u32 {
        assert!(row < self.n && col < self.n, "cell out of range");
        self.cells[row * self.n + col]
    }

    /// True iff every symbol is in range and appears exactly once per row
    /// and per column.
    pub fn is_latin(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        for row in 0..n {
            seen.fill(false);
            for col in 0..n {
                let s = self.cells[row * n + col] as usize;
                if s >= n || seen[s] {
                    return false;
                }
                seen[s] = true;
            }
        }
        for col in 0..n {
            seen.fill(false);
            for row in 0..n {
                let s = self.cells[row * n + col] as usize;
                if s >= n || seen[s] {
                    return false;
                }
                seen[s] = true;
            }
        }
        true
    }
}

/// The cyclic square of order `n`: cell (i, j) holds `(i + j) mod n`.
pub fn cyclic_latin(n: usize) -> Result<LatinSquare, GenError> {
    if n == 0 {
        return Err(GenError::ZeroOrder);
    }
    let cells = (0..n)
        .flat_map(|row| (0..n).map(move |col| ((row + col) % n) as u32))
        .collect();
    Ok(LatinSquare::from_validated(n, cells))
}

fn apply_permutations(
    square: &LatinSquare,
    rows: &[usize],
    cols: &[usize],
    symbols: &[u32],
) -> LatinSquare {
    let n = square.order();
    let cells = (0..n)
        .flat_map(|row| (0..n).map(move |col| symbols[square.get(rows[row], cols[col]) as usize]))
        .collect();
    LatinSquare::from_validated(n, cells)
}

/// Applies seeded row, column, and symbol permutations. The Latin property
/// is preserved by construction.
pub fn shuffled_latin(square: &LatinSquare, seed: Seed) -> LatinSquare {
    let n = square.order();
    let mut rng = SplitMix64::new(seed);
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut symbols: Vec<u32> = (0..n as u32).collect();
    rng.shuffle(&mut rows);
    rng.shuffle(&mut cols);
    rng.shuffle(&mut symbols);
    apply_permutations(square, &rows, &cols, &symbols)
}

/// Encodes a Latin square as a properly edge-colored K_{n,n}: rows are
/// vertices `0..n`, columns are `n..2n`, and the edge (i, n+j) gets the
/// cell symbol as its color. A transversal of the square is exactly a
/// perfect rainbow matching of this graph.
pub fn latin_to_bipartite(square: &LatinSquare) -> ColoredGraph {
    let n = square.order();
    let edges: Vec<(u32, u32, u32)> = (0..n)
        .flat_map(|row| (0..n).map(move |col| (row as u32, (n + col) as u32, square.get(row, col))))
        .collect();
    ColoredGraph::build(&edges).expect("a Latin square encodes a properly colored K_{n,n}")
}

/// K_{a,b} with the round-robin proper coloring `(i + j) mod max(a, b)`.
/// Left side is `0..a`, right side `a..a+b`.
pub fn complete_bipartite_colored(a: usize, b: usize) -> Result<ColoredGraph, GenError> {
    if a == 0 || b == 0 {
        return Err(GenError::ZeroOrder);
    }
    let modulus = a.max(b);
    let edges: Vec<(u32, u32, u32)> = (0..a)
        .flat_map(|i| (0..b).map(move |j| (i as u32, (a + j) as u32, ((i + j) % modulus) as u32)))
        .collect();
    Ok(ColoredGraph::build(&edges).expect("round-robin coloring of K_{a,b} is proper"))
}

/// Greedy proper edge coloring: edges in canonical order each take the
/// smallest color unused at both endpoints (at most 2*maxdeg - 1 colors).
fn greedy_proper_coloring(n: usize, mut pairs: Vec<(usize, usize)>) -> Vec<(u32, u32, u32)> {
    pairs.sort_unstable();
    let mut used: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut colored = Vec::with_capacity(pairs.len());
    for (u, v) in pairs {
        let mut color = 0usize;
        loop {
            let busy = |w: usize| used[w].get(color).copied().unwrap_or(false);
            if !busy(u) && !busy(v) {
                break;
            }
            color += 1;
        }
        for w in [u, v] {
            if used[w].len() <= color {
                used[w].resize(color + 1, false);
            }
            used[w][color] = true;
        }
        colored.push((u as u32, v as u32, color as u32));
    }
    colored
}

/// Augments toward minimum degree `delta`: vertices are visited in
/// ascending order and each deficient vertex is connected to uniformly
/// chosen non-neighbors (from `candidates`) until its degree reaches
/// `delta`. Adds edges only, so at most `n * delta` edges are created.
fn augment_min_degree<F>(
    n: usize,
    delta: usize,
    rng: &mut SplitMix64,
    candidates: F,
) -> Vec<(usize, usize)>
where
    F: Fn(usize) -> (usize, usize),
{
    let mut adjacent = vec![vec![false; n]; n];
    let mut degree = vec![0usize; n];
    let mut pairs = Vec::new();
    for v in 0..n {
        while degree[v] < delta {
            let (lo, hi) = candidates(v);
            let free: Vec<usize> = (lo..hi).filter(|&u| u != v && !adjacent[v][u]).collect();
            debug_assert!(!free.is_empty(), "deficient vertex with no candidates");
            let u = free[rng.next_below(free.len() as u64) as usize];
            adjacent[v][u] = true;
            adjacent[u][v] = true;
            degree[v] += 1;
            degree[u] += 1;
            pairs.push((v.min(u), v.max(u)));
        }
    }
    pairs
}

/// Random simple graph on `n` vertices with minimum degree at least
/// `delta`, properly edge-colored greedily. Vertices are `0..n`.
pub fn random_properly_colored(
    n: usize,
    delta: usize,
    seed: Seed,
) -> Result<ColoredGraph, GenError> {
    if delta == 0 || delta >= n {
        return Err(GenError::InfeasibleDegree {
            delta,
            limit: n.saturating_sub(1),
        });
    }
    let mut rng = SplitMix64::new(seed);
    let pairs = augment_min_degree(n, delta, &mut rng, |_| (0, n));
    let graph = ColoredGraph::build(&greedy_proper_coloring(n, pairs))
        .expect("greedy coloring of a simple graph is proper");
    debug_assert!(graph.validate().is_ok());
    Ok(graph)
}

/// Random bipartite graph with sides `0..na` and `na..na+nb`, both sides
/// of minimum degree at least `delta`, properly colored greedily.
/// Bipartite, hence triangle-free.
pub fn random_bipartite_colored(
    na: usize,
    nb: usize,
    delta: usize,
    seed: Seed,
) -> Result<ColoredGraph, GenError> {
    let limit = na.min(nb);
    if delta == 0 || delta > limit {
        return Err(GenError::InfeasibleDegree { delta, limit });
    }
    let n = na + nb;
    let mut rng = SplitMix64::new(seed);
    let pairs = augment_min_degree(
        n,
        delta,
        &mut rng,
        |v| if v < na { (na, n) } else { (0, na) },
    );
    let graph = ColoredGraph::build(&greedy_proper_coloring(n, pairs))
        .expect("greedy coloring of a simple graph is proper");
    debug_assert!(graph.validate().is_ok());
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_squares_match_the_formula() {
        assert_eq!(cyclic_latin(0).unwrap_err(), GenError::ZeroOrder);
        assert_eq!(cyclic_latin(1).unwrap().cells, vec![0]);
        assert_eq!(cyclic_latin(2).unwrap().cells, vec![0, 1, 1, 0]);
        assert_eq!(
            cyclic_latin(3).unwrap().cells,
            vec![0, 1, 2, 1, 2, 0, 2, 0, 1]
        );
    }

    #[test]
    fn identity_permutations_leave_square_unchanged() {
        let square = cyclic_latin(4).unwrap();
        let identity_rows: Vec<usize> = (0..4).collect();
        let identity_symbols: Vec<u32> = (0..4).collect();
        let same = apply_permutations(&square, &identity_rows, &identity_rows, &identity_symbols);
        assert_eq!(same, square);
    }

    #[test]
    fn shuffles_stay_latin_and_deterministic() {
        let square = cyclic_latin(5).unwrap();
        for seed in 0..20u64 {
            let shuffled = shuffled_latin(&square, Seed(seed));
            assert!(shuffled.is_latin(), "seed {seed} broke the Latin property");
        }
        assert_eq!(
            shuffled_latin(&square, Seed(7)),
            shuffled_latin(&square, Seed(7))
        );
    }

    #[test]
    fn latin_to_bipartite_structure() {
        let single = latin_to_bipartite(&cyclic_latin(1).unwrap());
        assert_eq!(single.edge_count(), 1);
        assert_eq!(single.edges()[0].color.0, 0);

        let k22 = latin_to_bipartite(&cyclic_latin(2).unwrap());
        let classes: Vec<_> = k22.color_classes().collect();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|&(_, size)| size == 2));

        for n in 1..=6 {
            let g = latin_to_bipartite(&cyclic_latin(n).unwrap());
            g.validate().unwrap();
            assert_eq!(g.min_degree(), n);
            assert_eq!(g.edge_count(), n * n);
            assert_eq!(g.color_classes().count(), n);
            assert!(g.color_classes().all(|(_, size)| size == n));
        }
    }

    #[test]
    fn complete_bipartite_shapes() {
        assert_eq!(complete_bipartite_colored(1, 1).unwrap().edge_count(), 1);

        let k23 = complete_bipartite_colored(2, 3).unwrap();
        k23.validate().unwrap();
        assert_eq!(k23.edge_count(), 6);
        assert_eq!(k23.color_classes().count(), 3);

        let wide = complete_bipartite_colored(4, 36).unwrap();
        wide.validate().unwrap();
        assert_eq!(wide.vertex_count(), 40);
        assert_eq!(wide.min_degree(), 4);

        assert_eq!(
            complete_bipartite_colored(0, 3).unwrap_err(),
            GenError::ZeroOrder
        );
    }

    #[test]
    fn random_graphs_meet_degree_and_validate() {
        for (n, delta, seed) in [(5, 1, 3u64), (12, 3, 0), (27, 4, 9), (40, 6, 77)] {
            let g = random_properly_colored(n, delta, Seed(seed)).unwrap();
            g.validate().unwrap();
            assert!(g.min_degree() >= delta);
            assert_eq!(g.vertex_count(), n);
            assert!(g.edge_count() <= n * delta, "augmentation exceeded n*delta");
            for v in g.vertices().collect::<Vec<_>>() {
                assert_eq!(g.color_degree(v).unwrap(), g.degree(v).unwrap());
            }
        }
        assert!(matches!(
            random_properly_colored(4, 4, Seed(0)).unwrap_err(),
            GenError::InfeasibleDegree { .. }
        ));
    }

    #[test]
    fn random_graph_at_the_dense_limit() {
        // delta = n - 1 forces the complete graph.
        let g = random_properly_colored(6, 5, Seed(2)).unwrap();
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.min_degree(), 5);
    }

    #[test]
    fn random_graphs_are_seed_deterministic() {
        let a = random_properly_colored(20, 3, Seed(11)).unwrap();
        let b = random_properly_colored(20, 3, Seed(11)).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = random_properly_colored(20, 3, Seed(12)).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn random_bipartite_is_triangle_free_with_degrees() {
        let full = random_bipartite_colored(3, 3, 3, Seed(5)).unwrap();
        assert_eq!(full.edge_count(), 9);

        for (na, nb, delta, seed) in [(4, 7, 2, 1u64), (20, 20, 4, 2), (10, 3, 3, 3)] {
            let g = random_bipartite_colored(na, nb, delta, Seed(seed)).unwrap();
            g.validate().unwrap();
            assert!(g.is_triangle_free());
            assert!(g.min_degree() >= delta);
            assert_eq!(g.vertex_count(), na + nb);
            // Both sides present: every edge crosses the side boundary.
            for e in g.edges() {
                assert!((e.u.0 as usize) < na && (e.v.0 as usize) >= na);
            }
        }
        assert!(matches!(
            random_bipartite_colored(3, 5, 4, Seed(0)).unwrap_err(),
            GenError::InfeasibleDegree { .. }
        ));
    }
}
