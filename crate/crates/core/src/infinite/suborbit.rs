use std::collections::BTreeSet;

use crate::error::Error;
use crate::infinite::ball::BallTruncation;
use crate::infinite::maps::{
    cell_values, grid_candidates, grid_map, line_values, path_candidates, path_map,
};
use crate::infinite::Family;

/// Orbits of the setwise stabiliser of a base set, restricted to the window.
///
/// Only orbits that lie wholly inside the window are listed; window vertices
/// whose orbit is cut off by the boundary land in the fringe. Fringe vertices
/// are never usable as colouring material since their orbit structure is an
/// artifact of truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuborbitDecomposition {
    base: BTreeSet<usize>,
    orbits: Vec<BTreeSet<usize>>,
    fringe: BTreeSet<usize>,
}

impl SuborbitDecomposition {
    pub fn base(&self) -> &BTreeSet<usize> {
        &self.base
    }

    /// Number of wholly visible suborbits.
    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    /// The i-th suborbit, indexed from 1 in order of distance to the base.
    pub fn suborbit(&self, index: usize) -> Option<&BTreeSet<usize>> {
        if index == 0 {
            return None;
        }
        self.orbits.get(index - 1)
    }

    pub fn orbits(&self) -> &[BTreeSet<usize>] {
        &self.orbits
    }

    /// Window vertices whose orbit leaves the window.
    pub fn fringe(&self) -> &BTreeSet<usize> {
        &self.fringe
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn validate_base(t: &BallTruncation, x0: &BTreeSet<usize>) -> Result<(), Error> {
    if x0.is_empty() {
        return Err(Error::InvalidBase {
            detail: "base set is empty".into(),
        });
    }
    if let Some(&v) = x0.iter().find(|&&v| v >= t.len()) {
        return Err(Error::InvalidBase {
            detail: format!("base vertex {v} outside the window"),
        });
    }
    Ok(())
}

/// Decompose the window, minus the base set, into orbits of the setwise
/// stabiliser of the base in the automorphism group of the infinite graph.
///
/// For the path and the grid the stabiliser of a finite set is itself finite
/// (at most one reflection, at most the eight signed rotations), so its
/// elements are enumerated outright and orbits are closed by union-find. An
/// orbit counts as wholly visible exactly when every stabiliser element maps
/// every one of its members back inside the window. For trees the stabiliser
/// of a vertex is distance-transitive around it, so the orbits are the
/// spheres; the sphere of radius i around a vertex at depth d fits in the
/// window if and only if d + i does not exceed the window radius.
pub fn suborbits(t: &BallTruncation, x0: &BTreeSet<usize>) -> Result<SuborbitDecomposition, Error> {
    validate_base(t, x0)?;
    match t.family() {
        Family::Tree(_) => tree_route(t, x0),
        Family::Path | Family::Grid2 => generic_route(t, x0),
    }
}

fn tree_route(t: &BallTruncation, x0: &BTreeSet<usize>) -> Result<SuborbitDecomposition, Error> {
    if x0.len() != 1 {
        return Err(Error::InvalidBase {
            detail: "tree suborbits need singleton base sets".into(),
        });
    }
    let v0 = *x0.first().unwrap();
    let depth = t.dist(v0);
    let dw = t.distances_from(x0);
    let radius = t.radius();
    let mut orbits = Vec::new();
    let mut fringe = BTreeSet::new();
    let max_i = dw
        .iter()
        .filter(|&&d| d != usize::MAX)
        .max()
        .copied()
        .unwrap_or(0);
    for i in 1..=max_i {
        let sphere: BTreeSet<usize> = (0..t.len()).filter(|&v| dw[v] == i).collect();
        if sphere.is_empty() {
            continue;
        }
        if depth + i <= radius {
            orbits.push(sphere);
        } else {
            fringe.extend(sphere);
        }
    }
    Ok(SuborbitDecomposition {
        base: x0.clone(),
        orbits,
        fringe,
    })
}

fn generic_route(t: &BallTruncation, x0: &BTreeSet<usize>) -> Result<SuborbitDecomposition, Error> {
    let maps = match t.family() {
        Family::Path => {
            let xs = line_values(t, x0);
            path_candidates(&xs, &xs)
                .into_iter()
                .map(|(desc, param, reflect)| path_map(t, desc, param, reflect))
                .collect::<Vec<_>>()
        }
        Family::Grid2 => {
            let xs = cell_values(t, x0);
            grid_candidates(&xs, &xs)
                .into_iter()
                .map(|(rot, tr)| grid_map(t, rot, tr))
                .collect::<Vec<_>>()
        }
        Family::Tree(_) => unreachable!(),
    };

    let n = t.len();
    let mut uf = UnionFind::new(n);
    for m in &maps {
        for v in 0..n {
            if x0.contains(&v) {
                continue;
            }
            if let Some(w) = m.image(v) {
                debug_assert!(!x0.contains(&w), "stabiliser maps fix the base setwise");
                uf.union(v, w);
            }
        }
    }

    // A class is wholly visible exactly when no member is ever mapped out.
    let mut class_of: Vec<BTreeSet<usize>> = Vec::new();
    let mut root_to_class: std::collections::BTreeMap<usize, usize> =
        std::collections::BTreeMap::new();
    for v in 0..n {
        if x0.contains(&v) {
            continue;
        }
        let r = uf.find(v);
        let idx = *root_to_class.entry(r).or_insert_with(|| {
            class_of.push(BTreeSet::new());
            class_of.len() - 1
        });
        class_of[idx].insert(v);
    }

    let dw = t.distances_from(x0);
    let mut orbits = Vec::new();
    let mut fringe = BTreeSet::new();
    for class in class_of {
        let complete = class
            .iter()
            .all(|&v| maps.iter().all(|m| m.image(v).is_some()));
        if complete {
            orbits.push(class);
        } else {
            fringe.extend(class);
        }
    }
    orbits.sort_by_key(|c| {
        let d = c.iter().map(|&v| dw[v]).min().unwrap_or(usize::MAX);
        let first = c.first().copied().unwrap_or(usize::MAX);
        (d, first)
    });
    Ok(SuborbitDecomposition {
        base: x0.clone(),
        orbits,
        fringe,
    })
}
