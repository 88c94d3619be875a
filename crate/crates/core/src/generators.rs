//! Graph families for tests and experiments, including the bipartite
//! construction showing that `k + 3` levels can be necessary.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::{greedy_partition, two_coloring};
use crate::graph::{Graph, Vertex, VertexPartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Largest `k` accepted by the tightness construction; the vertex count grows
/// like `2^k k^2`.
pub const MAX_TIGHTNESS_K: usize = 8;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Block sizes of one copy of the tightness gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessSpec {
    pub k: usize,
    pub a: usize,
    /// `|B_i|` for `i = 1..=k`.
    pub b: Vec<usize>,
    pub c: usize,
    pub d: usize,
}

impl TightnessSpec {
    pub fn new(k: usize) -> Result<Self, GenError> {
        if k == 0 || k > MAX_TIGHTNESS_K {
            return Err(GenError::BadParams(format!("k must lie in 1..={MAX_TIGHTNESS_K}")));
        }
        let per_subset = k * (k + 2) + 1;
        Ok(TightnessSpec {
            k,
            a: k,
            b: (1..=k).map(|i| per_subset * binomial(k, i)).collect(),
            c: (k + 3) * k * k,
            d: (k + 3) * k,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.a + self.b.iter().sum::<usize>() + self.c + self.d
    }
}

/// Ascending `i`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == i {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, i, &mut Vec::new(), &mut out);
    out
}

/// Edges of one gadget on vertex ids starting at `offset`, plus the ids of
/// its `A` block and its bipartition side (`true` for `A ∪ D`).
fn gadget(spec: &TightnessSpec, offset: usize) -> (Vec<(Vertex, Vertex)>, Vec<Vertex>, Vec<bool>) {
    let k = spec.k;
    let a: Vec<Vertex> = (offset..offset + k).collect();
    let mut next = offset + k;
    let mut edges = Vec::new();
    let mut side = vec![true; k];
    let per_subset = k * (k + 2) + 1;
    for i in 1..=k {
        for s in subsets(k, i) {
            for _ in 0..per_subset {
                for &x in &s {
                    edges.push((a[x], next));
                }
                side.push(false);
                next += 1;
            }
        }
    }
    let c_start = next;
    for _ in 0..spec.c {
        for &x in &a {
            edges.push((x, next));
        }
        side.push(false);
        next += 1;
    }
    for block in 0..spec.d {
        for j in 0..k {
            edges.push((c_start + block * k + j, next));
        }
        side.push(true);
        next += 1;
    }
    (edges, a, side)
}

/// One copy of the gadget: `A` (`k` vertices), the `B_i` blocks where each
/// `i`-subset of `A` gets `k(k+2)+1` private common neighbors, `C` joined
/// completely to `A`, and `D` with one vertex per block of `k` consecutive
/// `C` vertices. Part 1 is `A ∪ D`, part 2 is `B ∪ C`.
pub fn gen_tightness_g1(k: usize) -> Result<(Graph, VertexPartition), GenError> {
    let spec = TightnessSpec::new(k)?;
    let (edges, _, side) = gadget(&spec, 0);
    let g = Graph::from_edges(spec.vertex_count(), edges).expect("gadget is simple");
    let class_of = side.iter().map(|&s| if s { 1 } else { 2 }).collect();
    let part = VertexPartition::new(&g, class_of, 2).expect("gadget is bipartite");
    Ok((g, part))
}

/// Copy pairs whose `A` blocks are completely joined (1-based copy ids).
pub const LINKED_COPIES: [(usize, usize); 7] = [(1, 4), (2, 4), (3, 4), (4, 5), (5, 6), (5, 7), (5, 8)];

/// Eight gadgets with the `A` blocks of linked copies completely joined.
/// Copies 1, 2, 3 and 5 have their sides swapped so the result stays
/// bipartite.
pub fn gen_tightness_g(k: usize) -> Result<(Graph, VertexPartition), GenError> {
    let spec = TightnessSpec::new(k)?;
    let size = spec.vertex_count();
    let mut edges = Vec::new();
    let mut blocks = Vec::new();
    let mut class_of = Vec::with_capacity(8 * size);
    for copy in 1..=8 {
        let (e, a, side) = gadget(&spec, (copy - 1) * size);
        edges.extend(e);
        blocks.push(a);
        let flipped = matches!(copy, 1 | 2 | 3 | 5);
        class_of.extend(side.iter().map(|&s| if s != flipped { 1 } else { 2 }));
    }
    for &(x, y) in &LINKED_COPIES {
        for &u in &blocks[x - 1] {
            for &v in &blocks[y - 1] {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(8 * size, edges).expect("construction is simple");
    let part = VertexPartition::new(&g, class_of, 2).expect("construction is bipartite");
    Ok((g, part))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path")
}

pub fn cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::BadParams("a cycle needs at least 3 vertices".into()));
    }
    Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle"))
}

/// Center 0 with `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("complete")
}

/// Sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).expect("complete bipartite")
}

/// `rows x cols` grid, row-major ids.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).expect("grid")
}

/// Each vertex `i >= 1` attaches to a uniformly random earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Graph::from_edges(n, (1..n).map(|i| (rng.gen_range(0..i), i))).expect("tree")
}

/// Exactly `m` distinct edges between sides `0..⌈n/2⌉` and the rest.
pub fn random_bipartite(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    let left = n.div_ceil(2);
    let right = n - left;
    if m > left * right {
        return Err(GenError::BadParams(format!("at most {} edges fit", left * right)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = sample(&mut rng, left * right, m).into_vec();
    picks.sort_unstable();
    Ok(Graph::from_edges(n, picks.into_iter().map(|x| (x / right, left + x % right))).expect("bipartite"))
}

/// Hub 0 joined to the path `1 - 2 - ... - (n-1)`: a maximal outerplanar
/// graph.
pub fn maximal_outerplanar_fan(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::BadParams("a fan needs at least 3 vertices".into()));
    }
    let hub = (1..n).map(|i| (0, i));
    let rim = (2..n).map(|i| (i - 1, i));
    Ok(Graph::from_edges(n, hub.chain(rim)).expect("fan"))
}

/// The fan's 3-coloring: hub in part 1, path alternating parts 2 and 3.
pub fn fan_partition(g: &Graph) -> VertexPartition {
    let class_of = g.vertices().map(|v| if v == 0 { 1 } else { 2 + (v - 1) % 2 }).collect();
    VertexPartition::new(g, class_of, 3).expect("fan coloring is proper")
}

pub fn icosahedron() -> Graph {
    let mut edges = Vec::new();
    for i in 1..=5 {
        let next = i % 5 + 1;
        edges.push((0, i));
        edges.push((i, next));
        edges.push((i + 5, next + 5));
        edges.push((11, i + 5));
        edges.push((i, i + 5));
        edges.push((i, next + 5));
    }
    Graph::from_edges(12, edges).expect("icosahedron")
}

/// Random planar triangulation built by repeatedly inserting a vertex into a
/// random inner face of a triangle. Colors the triangle 1, 2, 3 and every
/// inserted vertex with the one color its face lacks.
pub fn random_apollonian(n: usize, seed: u64) -> Result<(Graph, VertexPartition), GenError> {
    if n < 3 {
        return Err(GenError::BadParams("needs at least 3 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut class_of = vec![1, 2, 3];
    let mut faces = vec![[0usize, 1, 2]];
    for v in 3..n {
        let f = faces.swap_remove(rng.gen_range(0..faces.len()));
        let color = 10 - f.iter().map(|&x| class_of[x]).sum::<usize>();
        class_of.push(color);
        for &x in &f {
            edges.push((x, v));
        }
        faces.push([f[0], f[1], v]);
        faces.push([f[1], f[2], v]);
        faces.push([f[0], f[2], v]);
    }
    let g = Graph::from_edges(n, edges).expect("triangulation");
    let part = VertexPartition::new(&g, class_of, 4).expect("coloring is proper");
    Ok((g, part))
}

/// Proper coloring with at most `colors` classes by backtracking in
/// smallest-last order, or `None`.
pub fn backtrack_coloring(g: &Graph, colors: usize) -> Option<VertexPartition> {
    let (order, _) = crate::coloring::smallest_last_order(g);
    let order: Vec<Vertex> = order.into_iter().rev().collect();
    let mut class_of = vec![0usize; g.vertex_count()];
    fn rec(g: &Graph, order: &[Vertex], idx: usize, colors: usize, class_of: &mut [usize]) -> bool {
        let Some(&v) = order.get(idx) else { return true };
        for c in 1..=colors {
            if g.neighbors(v).all(|u| class_of[u] != c) {
                class_of[v] = c;
                if rec(g, order, idx + 1, colors, class_of) {
                    return true;
                }
            }
        }
        class_of[v] = 0;
        false
    }
    if !rec(g, &order, 0, colors, &mut class_of) {
        return None;
    }
    VertexPartition::new(g, class_of, colors.max(1)).ok()
}

/// Parameters for [`gen_family`]; each family reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub k: Option<usize>,
    pub seed: u64,
}

pub const FAMILIES: [&str; 13] = [
    "path",
    "cycle",
    "star",
    "complete",
    "complete_bipartite",
    "grid",
    "random_tree",
    "random_bipartite",
    "maximal_outerplanar_fan",
    "icosahedron",
    "apollonian",
    "tightness",
    "tightness_g1",
];

/// Builds a named family together with a natural partition when it has one
/// (a 2-coloring for bipartite families, the stored colorings otherwise).
pub fn gen_family(name: &str, p: &FamilyParams) -> Result<(Graph, Option<VertexPartition>), GenError> {
    let need = |x: Option<usize>, what: &str| x.ok_or_else(|| GenError::BadParams(format!("`{name}` needs --{what}")));
    let bip = |g: Graph| {
        let part = two_coloring(&g);
        (g, part)
    };
    Ok(match name {
        "path" => bip(path(need(p.n, "n")?)),
        "cycle" => {
            let g = cycle(need(p.n, "n")?)?;
            let part = two_coloring(&g).or_else(|| Some(greedy_partition(&g)));
            (g, part)
        }
        "star" => bip(star(need(p.n, "n")?.saturating_sub(1))),
        "complete" => {
            let n = need(p.n, "n")?;
            let g = complete(n);
            let part = VertexPartition::new(&g, (1..=n).collect(), n.max(1)).ok();
            (g, part)
        }
        "complete_bipartite" => {
            let (a, b) = (need(p.rows, "rows")?, need(p.cols, "cols")?);
            bip(complete_bipartite(a, b))
        }
        "grid" => bip(grid(need(p.rows, "rows")?, need(p.cols, "cols")?)),
        "random_tree" => bip(random_tree(need(p.n, "n")?, p.seed)),
        "random_bipartite" => {
            let n = need(p.n, "n")?;
            let g = random_bipartite(n, need(p.m, "m")?, p.seed)?;
            let left = n.div_ceil(2);
            let part = VertexPartition::new(&g, (0..n).map(|v| if v < left { 1 } else { 2 }).collect(), 2).ok();
            (g, part)
        }
        "maximal_outerplanar_fan" => {
            let g = maximal_outerplanar_fan(need(p.n, "n")?)?;
            let part = fan_partition(&g);
            (g, Some(part))
        }
        "icosahedron" => {
            let g = icosahedron();
            let part = backtrack_coloring(&g, 4);
            (g, part)
        }
        "apollonian" => {
            let (g, part) = random_apollonian(need(p.n, "n")?, p.seed)?;
            (g, Some(part))
        }
        "tightness" => {
            let (g, part) = gen_tightness_g(need(p.k, "k")?)?;
            (g, Some(part))
        }
        "tightness_g1" => {
            let (g, part) = gen_tightness_g1(need(p.k, "k")?)?;
            (g, Some(part))
        }
        other => return Err(GenError::UnknownFamily(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::build_k_orientation;

    #[test]
    fn tightness_sizes() {
        let s = TightnessSpec::new(1).unwrap();
        assert_eq!((s.a, s.b.clone(), s.c, s.d, s.vertex_count()), (1, vec![4], 4, 4, 13));
        let s = TightnessSpec::new(2).unwrap();
        assert_eq!(
            (s.a, s.b.clone(), s.c, s.d, s.vertex_count()),
            (2, vec![18, 9], 20, 10, 59)
        );
        assert!(TightnessSpec::new(0).is_err());
    }

    #[test]
    fn g1_for_k1_is_a_tree() {
        let (g, _) = gen_tightness_g1(1).unwrap();
        assert_eq!(g.vertex_count(), 13);
        assert!(g.is_tree());
    }

    #[test]
    fn g_for_k1() {
        let (g, part) = gen_tightness_g(1).unwrap();
        assert_eq!(g.vertex_count(), 104);
        assert!(g.is_connected());
        assert!(g.edges().iter().all(|&(u, v)| part.class_of(u) != part.class_of(v)));
    }

    #[test]
    fn g1_is_k_degenerate() {
        for k in 1..=3 {
            let (g, _) = gen_tightness_g1(k).unwrap();
            assert!(build_k_orientation(&g, k).is_ok());
        }
    }

    #[test]
    fn simple_families() {
        assert_eq!(cycle(5).unwrap().edge_count(), 5);
        let g = grid(3, 3);
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        let a = random_bipartite(50, 120, 7).unwrap();
        let b = random_bipartite(50, 120, 7).unwrap();
        assert_eq!(a.edge_count(), 120);
        assert_eq!(a.edges(), b.edges());
        assert!(random_tree(40, 3).is_tree());
        assert!(matches!(
            gen_family("nope", &FamilyParams::default()),
            Err(GenError::UnknownFamily(_))
        ));
    }

    #[test]
    fn fan_and_planar_colorings() {
        let g = maximal_outerplanar_fan(10).unwrap();
        assert_eq!(g.edge_count(), 2 * 10 - 3);
        assert_eq!(fan_partition(&g).r(), 3);
        let ico = icosahedron();
        assert_eq!(ico.edge_count(), 30);
        assert!(ico.vertices().all(|v| ico.degree(v) == 5));
        assert!(backtrack_coloring(&ico, 4).is_some());
        assert!(backtrack_coloring(&ico, 3).is_none());
        let (t, part) = random_apollonian(30, 1).unwrap();
        assert_eq!(t.edge_count(), 3 * 30 - 6);
        assert_eq!(part.r(), 4);
    }
}
