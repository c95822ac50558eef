use std::collections::BTreeMap;

use crate::error::Error;
use crate::infinite::{Family, VertexName};

/// Default bound on window size.
pub const DEFAULT_WINDOW_LIMIT: usize = 200_000;

/// The radius-R ball around the family's root, indexed breadth-first with
/// each distance class sorted by name. Indices are therefore stable across
/// radii: the radius-R window is a prefix of every larger window.
///
/// `margin` does not change the vertex set; it marks how many outermost
/// layers are regarded as truncation boundary. Checks of asymmetry scope to
/// vertices within `radius - margin` of the root (at least 1), because an
/// automorphism supported entirely in the boundary layers is an artifact of
/// cutting the graph, not a symmetry the construction is obliged to break.
#[derive(Debug, Clone)]
pub struct BallTruncation {
    family: Family,
    radius: usize,
    margin: usize,
    names: Vec<VertexName>,
    index: BTreeMap<VertexName, usize>,
    dist: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl BallTruncation {
    pub fn build(family: Family, radius: usize, margin: usize) -> Result<Self, Error> {
        Self::build_with(family, radius, margin, DEFAULT_WINDOW_LIMIT)
    }

    pub fn build_with(
        family: Family,
        radius: usize,
        margin: usize,
        limit: usize,
    ) -> Result<Self, Error> {
        let mut names = vec![family.root()];
        let mut index = BTreeMap::new();
        index.insert(family.root(), 0usize);
        let mut dist = vec![0usize];
        let mut frontier = vec![family.root()];
        for d in 1..=radius {
            let mut level = Vec::new();
            for v in &frontier {
                for w in family.neighbours(v) {
                    if !index.contains_key(&w) {
                        index.insert(w.clone(), usize::MAX);
                        level.push(w);
                    }
                }
            }
            level.sort();
            for w in level.iter() {
                if names.len() >= limit {
                    return Err(Error::WindowTooLarge {
                        radius,
                        size: names.len() + 1,
                        limit,
                    });
                }
                *index.get_mut(w).unwrap() = names.len();
                names.push(w.clone());
                dist.push(d);
            }
            frontier = level;
        }
        let adj: Vec<Vec<usize>> = names
            .iter()
            .map(|v| {
                let mut ns: Vec<usize> = family
                    .neighbours(v)
                    .iter()
                    .filter_map(|w| index.get(w).copied())
                    .collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        Ok(BallTruncation {
            family,
            radius,
            margin,
            names,
            index,
            dist,
            adj,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &VertexName {
        &self.names[i]
    }

    pub fn names(&self) -> &[VertexName] {
        &self.names
    }

    pub fn index_of(&self, v: &VertexName) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Distance from the root.
    pub fn dist(&self, i: usize) -> usize {
        self.dist[i]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Radius of the sub-ball unaffected by the truncation boundary.
    pub fn inner_radius(&self) -> usize {
        self.radius.saturating_sub(self.margin)
    }

    /// How deep a vertex may sit for asymmetry checks to cover it: the
    /// inner radius, but never less than 1 so some movement is always in
    /// scope.
    pub fn verification_scope(&self) -> usize {
        self.inner_radius().max(1)
    }

    /// Distances from an arbitrary in-window source set, by BFS inside the
    /// window. For these families a shortest path between window vertices
    /// stays inside the window, so this agrees with the infinite graph.
    pub fn distances_from(&self, sources: &std::collections::BTreeSet<usize>) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ball_sizes_match_closed_forms() {
        assert_eq!(BallTruncation::build(Family::Path, 2, 0).unwrap().len(), 5);
        assert_eq!(BallTruncation::build(Family::Grid2, 1, 0).unwrap().len(), 5);
        assert_eq!(BallTruncation::build(Family::Grid2, 2, 0).unwrap().len(), 13);
        // 1 + 3 + 6 + 12 vertices in the 3-regular tree of radius 3.
        assert_eq!(BallTruncation::build(Family::Tree(3), 2, 0).unwrap().len(), 10);
        assert_eq!(BallTruncation::build(Family::Tree(3), 3, 0).unwrap().len(), 22);
        assert_eq!(BallTruncation::build(Family::Path, 0, 0).unwrap().len(), 1);
    }

    #[test]
    fn indices_are_prefix_stable_across_radii() {
        let small = BallTruncation::build(Family::Grid2, 2, 0).unwrap();
        let large = BallTruncation::build(Family::Grid2, 4, 0).unwrap();
        assert_eq!(small.names(), &large.names()[..small.len()]);
        let small = BallTruncation::build(Family::Tree(3), 2, 0).unwrap();
        let large = BallTruncation::build(Family::Tree(3), 4, 0).unwrap();
        assert_eq!(small.names(), &large.names()[..small.len()]);
    }

    #[test]
    fn levels_are_sorted_and_distances_recorded() {
        let t = BallTruncation::build(Family::Path, 2, 0).unwrap();
        let names: Vec<String> = t.names().iter().map(|n| n.to_string()).collect();
        assert_eq!(names, vec!["0", "-1", "1", "-2", "2"]);
        assert_eq!((0..5).map(|i| t.dist(i)).collect::<Vec<_>>(), vec![0, 1, 1, 2, 2]);
    }

    #[test]
    fn window_adjacency_is_symmetric_and_consistent() {
        for family in [Family::Path, Family::Grid2, Family::Tree(3)] {
            let t = BallTruncation::build(family, 3, 0).unwrap();
            for v in 0..t.len() {
                for &w in t.neighbours(v) {
                    assert!(t.neighbours(w).contains(&v));
                    assert_eq!(family.distance(t.name(v), t.name(w)), 1);
                }
            }
        }
    }

    #[test]
    fn window_bfs_agrees_with_infinite_distance() {
        for family in [Family::Path, Family::Grid2, Family::Tree(3)] {
            let t = BallTruncation::build(family, 4, 0).unwrap();
            for probe in [0usize, 1, t.len() / 2, t.len() - 1] {
                let d = t.distances_from(&BTreeSet::from([probe]));
                for v in 0..t.len() {
                    assert_eq!(
                        d[v],
                        family.distance(t.name(probe), t.name(v)),
                        "family {} probe {probe} v {v}",
                        family.spec_string()
                    );
                }
            }
        }
    }

    #[test]
    fn margin_sets_the_verification_scope() {
        let t = BallTruncation::build(Family::Tree(3), 3, 2).unwrap();
        assert_eq!(t.inner_radius(), 1);
        assert_eq!(t.verification_scope(), 1);
        let t = BallTruncation::build(Family::Tree(3), 2, 2).unwrap();
        assert_eq!(t.inner_radius(), 0);
        assert_eq!(t.verification_scope(), 1);
        let t = BallTruncation::build(Family::Path, 20, 2).unwrap();
        assert_eq!(t.verification_scope(), 18);
    }

    #[test]
    fn window_limit_is_enforced() {
        assert!(matches!(
            BallTruncation::build_with(Family::Tree(3), 10, 0, 1000),
            Err(Error::WindowTooLarge { .. })
        ));
    }
}
