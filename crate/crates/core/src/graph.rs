use crate::colouring;
use crate::error::Error;
use crate::group::{PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::par;
use crate::perm::Permutation;

/// Default bound on the vertex count accepted by the automorphism search.
pub const DEFAULT_VERTEX_LIMIT: usize = 64;

/// A finite simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        count: n,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).unwrap()
    }

    /// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }
}

/// Parse the graph file format: an `n m` header line, then m lines `u v`.
/// `#` starts a comment anywhere.
pub fn parse_graph(text: &str) -> Result<Graph, Error> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::MalformedHeader {
        detail: "empty file".into(),
    })?;
    let parse_pair = |line: &str, what: &str| -> Result<(usize, usize), Error> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(a), Ok(b)) => Ok((a, b)),
                _ => Err(Error::MalformedHeader {
                    detail: format!("bad {what} line {line:?}"),
                }),
            },
            _ => Err(Error::MalformedHeader {
                detail: format!("bad {what} line {line:?}"),
            }),
        }
    };
    let (n, m) = parse_pair(header, "header")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| Error::MalformedHeader {
            detail: format!("expected {m} edges, file ends early"),
        })?;
        edges.push(parse_pair(line, "edge")?);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::MalformedHeader {
            detail: format!("unexpected trailing line {extra:?}"),
        });
    }
    Graph::from_edges(n, &edges)
}

/// Vertex classes from two rounds of neighbour-class refinement, starting
/// from degrees. Only used to prune the search; equality of classes is
/// necessary, not sufficient, for two vertices to be swappable.
pub(crate) fn refinement_classes(adj: &[Vec<usize>]) -> Vec<u32> {
    let n = adj.len();
    let mut class: Vec<u32> = adj.iter().map(|l| l.len() as u32).collect();
    for _ in 0..2 {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut around: Vec<u32> = adj[v].iter().map(|&u| class[u]).collect();
                around.sort_unstable();
                (class[v], around)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        class = sigs
            .iter()
            .map(|s| uniq.binary_search(s).unwrap() as u32)
            .collect();
    }
    class
}

pub(crate) struct SearchOutcome {
    pub maps: Vec<Permutation>,
    pub nodes: u64,
}

struct SearchState<'a> {
    adj: &'a [Vec<usize>],
    class: &'a [u32],
    first_only: bool,
    cap: usize,
    image: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    maps: Vec<Permutation>,
    nodes: u64,
}

impl SearchState<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        self.assigned.iter().all(|&u| {
            let x = self.image[u].unwrap();
            self.adj[v].binary_search(&u).is_ok() == self.adj[w].binary_search(&x).is_ok()
        })
    }

    /// Returns Ok(true) when the search should stop (first_only hit).
    fn dfs(&mut self, cursor: usize) -> Result<bool, Error> {
        let n = self.adj.len();
        let Some(v) = (cursor..n).find(|&v| self.image[v].is_none()) else {
            let images: Vec<usize> = self.image.iter().map(|i| i.unwrap()).collect();
            self.maps.push(Permutation::from_images(images).unwrap());
            if self.maps.len() > self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            return Ok(self.first_only);
        };
        for w in 0..n {
            if self.class[w] != self.class[v] || self.used[w] {
                continue;
            }
            self.nodes += 1;
            if !self.consistent(v, w) {
                continue;
            }
            self.image[v] = Some(w);
            self.used[w] = true;
            self.assigned.push(v);
            let stop = self.dfs(v + 1)?;
            self.assigned.pop();
            self.used[w] = false;
            self.image[v] = None;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Backtracking search for adjacency-preserving bijections extending
/// `prefix`. Vertices are assigned in numeric order and candidate images
/// tried in numeric order, so the complete maps come out lexicographically
/// sorted and "first" always means lex-least. Explored node count is
/// independent of how the work is scheduled.
pub(crate) fn search_automorphisms(
    adj: &[Vec<usize>],
    prefix: &[(usize, usize)],
    first_only: bool,
    cap: usize,
) -> Result<SearchOutcome, Error> {
    let n = adj.len();
    let class = refinement_classes(adj);
    let mut st = SearchState {
        adj,
        class: &class,
        first_only,
        cap,
        image: vec![None; n],
        used: vec![false; n],
        assigned: Vec::new(),
        maps: Vec::new(),
        nodes: 0,
    };
    for &(v, w) in prefix {
        st.nodes += 1;
        let ok = v < n
            && w < n
            && st.image[v].is_none()
            && !st.used[w]
            && st.class[v] == st.class[w]
            && st.consistent(v, w);
        if !ok {
            return Ok(SearchOutcome {
                maps: Vec::new(),
                nodes: st.nodes,
            });
        }
        st.image[v] = Some(w);
        st.used[w] = true;
        st.assigned.push(v);
    }

    // With no prefix and a full enumeration wanted, fan out over the images
    // of vertex 0 and run one sequential subtree per candidate; merging in
    // candidate order reproduces the sequential result exactly.
    if prefix.is_empty() && !first_only && n > 0 {
        let candidates: Vec<usize> = (0..n).filter(|&w| class[w] == class[0]).collect();
        let branches = par::map_in_order(&candidates, |&w| {
            let mut st = SearchState {
                adj,
                class: &class,
                first_only: false,
                cap,
                image: vec![None; n],
                used: vec![false; n],
                assigned: Vec::new(),
                maps: Vec::new(),
                nodes: 1,
            };
            if !st.consistent(0, w) {
                return Ok(SearchOutcome {
                    maps: st.maps,
                    nodes: st.nodes,
                });
            }
            st.image[0] = Some(w);
            st.used[w] = true;
            st.assigned.push(0);
            st.dfs(1)?;
            Ok(SearchOutcome {
                maps: st.maps,
                nodes: st.nodes,
            })
        });
        let mut maps = Vec::new();
        let mut nodes = 0;
        for b in branches {
            let b: SearchOutcome = b?;
            nodes += b.nodes;
            maps.extend(b.maps);
            if maps.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
        }
        return Ok(SearchOutcome { maps, nodes });
    }

    st.dfs(0)?;
    Ok(SearchOutcome {
        maps: st.maps,
        nodes: st.nodes,
    })
}

#[derive(Debug, Clone)]
pub struct AutGroupResult {
    pub group: PermGroup,
    pub node_count_explored: u64,
}

pub fn automorphism_group(graph: &Graph) -> Result<AutGroupResult, Error> {
    automorphism_group_with(graph, DEFAULT_VERTEX_LIMIT, DEFAULT_ENUMERATION_CAP)
}

pub fn automorphism_group_with(
    graph: &Graph,
    vertex_limit: usize,
    cap: usize,
) -> Result<AutGroupResult, Error> {
    let n = graph.vertex_count();
    if n > vertex_limit {
        return Err(Error::LimitExceeded {
            vertices: n,
            limit: vertex_limit,
        });
    }
    let outcome = search_automorphisms(graph.adjacency(), &[], false, cap)?;
    debug_assert!(outcome.maps.iter().all(|g| {
        (0..n).all(|u| {
            graph.neighbours(u).iter().all(|&v| graph.has_edge(g.image(u), g.image(v)))
        })
    }));
    Ok(AutGroupResult {
        group: PermGroup::from_element_list(n, outcome.maps, cap),
        node_count_explored: outcome.nodes,
    })
}

/// Least k such that some k-colouring of the vertices is preserved by no
/// non-identity automorphism.
pub fn graph_distinguishing_number(graph: &Graph) -> Result<usize, Error> {
    let aut = automorphism_group(graph)?;
    colouring::distinguishing_number(&aut.group)
}
