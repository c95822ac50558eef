use std::collections::BTreeSet;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::infinite::ball::BallTruncation;
use crate::infinite::suborbit::SuborbitDecomposition;
use crate::infinite::{Family, VertexName};

/// The restriction of one automorphism of the infinite graph to the window:
/// a partial injection, defined exactly where both a vertex and its image
/// lie inside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMap {
    images: Vec<Option<usize>>,
    descriptor: String,
}

impl WindowMap {
    pub fn image(&self, v: usize) -> Option<usize> {
        self.images[v]
    }

    pub fn domain_len(&self) -> usize {
        self.images.iter().filter(|i| i.is_some()).count()
    }

    /// The image of a set, or None if any member leaves the window.
    pub fn image_of_set(&self, set: &BTreeSet<usize>) -> Option<BTreeSet<usize>> {
        set.iter().map(|&v| self.images[v]).collect()
    }

    /// Human-readable description of the underlying automorphism.
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    fn identity(t: &BallTruncation) -> Self {
        WindowMap {
            images: (0..t.len()).map(Some).collect(),
            descriptor: "id".into(),
        }
    }

    fn from_name_map(
        t: &BallTruncation,
        f: impl Fn(&VertexName) -> VertexName,
        descriptor: String,
    ) -> Self {
        WindowMap {
            images: t.names().iter().map(|v| t.index_of(&f(v))).collect(),
            descriptor,
        }
    }
}

const D4_NAMES: [&str; 8] = [
    "id",
    "rot90",
    "rot180",
    "rot270",
    "mirror_x",
    "mirror_y",
    "mirror_diag",
    "mirror_antidiag",
];

pub(super) fn d4_apply(rot: usize, x: i64, y: i64) -> (i64, i64) {
    match rot {
        0 => (x, y),
        1 => (-y, x),
        2 => (-x, -y),
        3 => (y, -x),
        4 => (x, -y),
        5 => (-x, y),
        6 => (y, x),
        7 => (-y, -x),
        _ => unreachable!(),
    }
}

pub(super) fn line_values(t: &BallTruncation, set: &BTreeSet<usize>) -> Vec<i64> {
    set.iter()
        .map(|&v| match t.name(v) {
            VertexName::Line(x) => *x,
            _ => unreachable!(),
        })
        .collect()
}

pub(super) fn cell_values(t: &BallTruncation, set: &BTreeSet<usize>) -> Vec<(i64, i64)> {
    set.iter()
        .map(|&v| match t.name(v) {
            VertexName::Cell(x, y) => (*x, *y),
            _ => unreachable!(),
        })
        .collect()
}

/// Path isometries mapping `xs` onto `ys` setwise, translations before
/// reflections, as (desc, map) builders.
pub(super) fn path_candidates(xs: &[i64], ys: &[i64]) -> Vec<(String, i64, bool)> {
    let mut out = Vec::new();
    let mut sx = xs.to_vec();
    let mut sy = ys.to_vec();
    sx.sort_unstable();
    sy.sort_unstable();
    // x -> x + t matches sorted lists pointwise.
    let t = sy[0] - sx[0];
    if sx.iter().zip(&sy).all(|(x, y)| x + t == *y) {
        out.push((format!("translate({t})"), t, false));
    }
    // x -> c - x reverses the sorted order.
    let c = sy[0] + sx[sx.len() - 1];
    if sx.iter().rev().zip(&sy).all(|(x, y)| c - x == *y) {
        out.push((format!("reflect({c})"), c, true));
    }
    out
}

/// Grid isometries v -> A v + t mapping `xs` onto `ys` setwise, as D4
/// indices with their translations, identity rotation first.
pub(super) fn grid_candidates(xs: &[(i64, i64)], ys: &[(i64, i64)]) -> Vec<(usize, (i64, i64))> {
    let mut sy = ys.to_vec();
    sy.sort_unstable();
    let mut out = Vec::new();
    for rot in 0..8 {
        let mut rx: Vec<(i64, i64)> = xs.iter().map(|&(x, y)| d4_apply(rot, x, y)).collect();
        rx.sort_unstable();
        // Translation maps lex-least to lex-least.
        let t = (sy[0].0 - rx[0].0, sy[0].1 - rx[0].1);
        if rx
            .iter()
            .zip(&sy)
            .all(|(&(x, y), &(a, b))| (x + t.0, y + t.1) == (a, b))
        {
            out.push((rot, t));
        }
    }
    out
}

pub(super) fn path_map(t: &BallTruncation, desc: String, param: i64, reflect: bool) -> WindowMap {
    WindowMap::from_name_map(
        t,
        move |v| match v {
            VertexName::Line(x) => VertexName::Line(if reflect { param - x } else { x + param }),
            _ => unreachable!(),
        },
        desc,
    )
}

pub(super) fn grid_map(t: &BallTruncation, rot: usize, tr: (i64, i64)) -> WindowMap {
    let desc = format!("{}+({},{})", D4_NAMES[rot], tr.0, tr.1);
    WindowMap::from_name_map(
        t,
        move |v| match v {
            VertexName::Cell(x, y) => {
                let (rx, ry) = d4_apply(rot, *x, *y);
                VertexName::Cell(rx + tr.0, ry + tr.1)
            }
            _ => unreachable!(),
        },
        desc,
    )
}

/// Build a tree window map sending `from` to `to` by pairing neighbourhoods
/// breadth-first. With `rng` absent the pairing is canonical (sorted zip);
/// with it, sibling pairings are shuffled. Any map produced this way is a
/// partial isomorphism on a connected domain, hence the restriction of a
/// full automorphism of the infinite tree.
fn tree_map(
    t: &BallTruncation,
    from: usize,
    to: usize,
    mut rng: Option<&mut ChaCha8Rng>,
) -> WindowMap {
    let n = t.len();
    let mut images: Vec<Option<usize>> = vec![None; n];
    let mut taken = vec![false; n];
    images[from] = Some(to);
    taken[to] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((from, to));
    while let Some((u, v)) = queue.pop_front() {
        let us: Vec<usize> = t
            .neighbours(u)
            .iter()
            .copied()
            .filter(|&x| images[x].is_none())
            .collect();
        let mut vs: Vec<usize> = t
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&x| !taken[x])
            .collect();
        if let Some(rng) = rng.as_deref_mut() {
            for i in (1..vs.len()).rev() {
                let j = (rng.next_u64() as usize) % (i + 1);
                vs.swap(i, j);
            }
        }
        for (&x, &y) in us.iter().zip(vs.iter()) {
            images[x] = Some(y);
            taken[y] = true;
            queue.push_back((x, y));
        }
    }
    WindowMap {
        images,
        descriptor: format!("match({}->{})", t.name(from), t.name(to)),
    }
}

fn check_sets(
    t: &BallTruncation,
    x0: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
) -> Result<(), Error> {
    if x0.is_empty() {
        return Err(Error::InvalidBase {
            detail: "base set is empty".into(),
        });
    }
    for (&v, what) in x0.iter().map(|v| (v, "base")).chain(y.iter().map(|v| (v, "target"))) {
        if v >= t.len() {
            return Err(Error::InvalidBase {
                detail: format!("{what} vertex {v} outside the window"),
            });
        }
    }
    if y.len() != x0.len() {
        return Err(Error::NotRealizable);
    }
    let inner = t.inner_radius();
    if let Some(&v) = y.iter().find(|&&v| t.dist(v) > inner) {
        return Err(Error::InvalidBase {
            detail: format!(
                "target vertex {} at distance {} is outside the inner ball of radius {inner}",
                t.name(v),
                t.dist(v)
            ),
        });
    }
    Ok(())
}

/// The first automorphism of the family, in a fixed canonical order, whose
/// restriction maps the base set onto the target set. For the path that
/// order is translations before reflections; for the grid, D4 rotations
/// with the identity first; for trees, the breadth-first neighbourhood
/// pairing. Targets must lie in the inner ball.
pub fn coset_representative(
    t: &BallTruncation,
    x0: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
) -> Result<WindowMap, Error> {
    check_sets(t, x0, y)?;
    if x0 == y {
        return Ok(WindowMap::identity(t));
    }
    match t.family() {
        Family::Path => {
            let xs = line_values(t, x0);
            let ys = line_values(t, y);
            let cands = path_candidates(&xs, &ys);
            match cands.into_iter().next() {
                Some((desc, param, reflect)) => Ok(path_map(t, desc, param, reflect)),
                None => Err(Error::NotRealizable),
            }
        }
        Family::Grid2 => {
            let xs = cell_values(t, x0);
            let ys = cell_values(t, y);
            let cands = grid_candidates(&xs, &ys);
            match cands.into_iter().next() {
                Some((rot, tr)) => Ok(grid_map(t, rot, tr)),
                None => Err(Error::NotRealizable),
            }
        }
        Family::Tree(_) => {
            if x0.len() != 1 {
                return Err(Error::InvalidBase {
                    detail: "tree representatives need singleton base sets".into(),
                });
            }
            let from = *x0.first().unwrap();
            let to = *y.first().unwrap();
            Ok(tree_map(t, from, to, None))
        }
    }
}

/// Sample `count` restrictions of automorphisms mapping the base onto the
/// target, deterministically from `seed`. The distribution is arbitrary;
/// what matters is variety for testing that in-window images of suborbits
/// are independent of which representative was drawn.
pub fn sample_coset_maps(
    t: &BallTruncation,
    x0: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
    seed: u64,
    count: usize,
) -> Result<Vec<WindowMap>, Error> {
    check_sets(t, x0, y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    match t.family() {
        Family::Path => {
            let xs = line_values(t, x0);
            let ys = line_values(t, y);
            let cands = path_candidates(&xs, &ys);
            if cands.is_empty() {
                return Err(Error::NotRealizable);
            }
            for _ in 0..count {
                let (desc, param, reflect) =
                    cands[(rng.next_u64() as usize) % cands.len()].clone();
                out.push(path_map(t, desc, param, reflect));
            }
        }
        Family::Grid2 => {
            let xs = cell_values(t, x0);
            let ys = cell_values(t, y);
            let cands = grid_candidates(&xs, &ys);
            if cands.is_empty() {
                return Err(Error::NotRealizable);
            }
            for _ in 0..count {
                let (rot, tr) = cands[(rng.next_u64() as usize) % cands.len()];
                out.push(grid_map(t, rot, tr));
            }
        }
        Family::Tree(_) => {
            if x0.len() != 1 {
                return Err(Error::InvalidBase {
                    detail: "tree representatives need singleton base sets".into(),
                });
            }
            let from = *x0.first().unwrap();
            let to = *y.first().unwrap();
            for _ in 0..count {
                out.push(tree_map(t, from, to, Some(&mut rng)));
            }
        }
    }
    Ok(out)
}

/// In-window image of the i-th suborbit (1-based) under a representative.
pub fn coset_suborbit_image(
    map: &WindowMap,
    s: &SuborbitDecomposition,
    index: usize,
) -> Result<BTreeSet<usize>, Error> {
    let orbit = s
        .suborbit(index)
        .ok_or(Error::OutOfWindow { index })?;
    map.image_of_set(orbit).ok_or(Error::OutOfWindow { index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_name(t: &BallTruncation, names: &[&str]) -> BTreeSet<usize> {
        names
            .iter()
            .map(|s| t.index_of(&VertexName::parse(t.family(), s).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn path_representative_prefers_translation() {
        let t = BallTruncation::build(Family::Path, 5, 2).unwrap();
        let x0 = by_name(&t, &["0"]);
        let y = by_name(&t, &["-1"]);
        let rep = coset_representative(&t, &x0, &y).unwrap();
        assert_eq!(rep.descriptor(), "translate(-1)");
        // 0 maps to -1; -5 maps out of the window.
        let minus_five = t.index_of(&VertexName::Line(-5)).unwrap();
        assert_eq!(rep.image(minus_five), None);
        let five = t.index_of(&VertexName::Line(5)).unwrap();
        let four = t.index_of(&VertexName::Line(4)).unwrap();
        assert_eq!(rep.image(five), Some(four));
        let two = t.index_of(&VertexName::Line(2)).unwrap();
        let one = t.index_of(&VertexName::Line(1)).unwrap();
        assert_eq!(rep.image(two), Some(one));
    }

    #[test]
    fn identity_base_target_yields_identity() {
        let t = BallTruncation::build(Family::Grid2, 3, 1).unwrap();
        let x0 = by_name(&t, &["0,0"]);
        let rep = coset_representative(&t, &x0, &x0).unwrap();
        assert_eq!(rep.descriptor(), "id");
        assert_eq!(rep.domain_len(), t.len());
    }

    #[test]
    fn grid_representative_is_a_translation_when_possible() {
        let t = BallTruncation::build(Family::Grid2, 4, 2).unwrap();
        let x0 = by_name(&t, &["0,0"]);
        let y = by_name(&t, &["1,0"]);
        let rep = coset_representative(&t, &x0, &y).unwrap();
        assert_eq!(rep.descriptor(), "id+(1,0)");
        let p = t.index_of(&VertexName::Cell(-1, 2)).unwrap();
        let q = t.index_of(&VertexName::Cell(0, 2)).unwrap();
        assert_eq!(rep.image(p), Some(q));
    }

    #[test]
    fn multi_point_bases_constrain_the_isometry() {
        let t = BallTruncation::build(Family::Path, 6, 2).unwrap();
        // {-1, 1} -> {0, 2} forces translate(1) or reflect(1).
        let x0 = by_name(&t, &["-1", "1"]);
        let y = by_name(&t, &["0", "2"]);
        let rep = coset_representative(&t, &x0, &y).unwrap();
        assert_eq!(rep.descriptor(), "translate(1)");
        // A spread-out target of mismatched shape is not realizable.
        let bad = by_name(&t, &["0", "3"]);
        assert_eq!(
            coset_representative(&t, &x0, &bad).unwrap_err(),
            Error::NotRealizable
        );
    }

    #[test]
    fn grid_rotation_found_when_translation_fails() {
        let t = BallTruncation::build(Family::Grid2, 4, 2).unwrap();
        // An L-shaped base has trivial setwise stabilizer among
        // translations; send it to its rotation by 90 degrees.
        let x0 = by_name(&t, &["0,0", "1,0", "0,1", "0,2"]);
        let y: BTreeSet<usize> = x0
            .iter()
            .map(|&v| {
                let VertexName::Cell(x, y) = *t.name(v) else { unreachable!() };
                t.index_of(&VertexName::Cell(-y, x)).unwrap()
            })
            .collect();
        let rep = coset_representative(&t, &x0, &y).unwrap();
        assert!(rep.descriptor().starts_with("rot90"));
        assert_eq!(rep.image_of_set(&x0), Some(y));
    }

    #[test]
    fn targets_outside_the_inner_ball_are_rejected() {
        let t = BallTruncation::build(Family::Path, 5, 2).unwrap();
        let x0 = by_name(&t, &["0"]);
        let y = by_name(&t, &["4"]);
        assert!(matches!(
            coset_representative(&t, &x0, &y),
            Err(Error::InvalidBase { .. })
        ));
    }

    #[test]
    fn tree_map_is_a_partial_isomorphism() {
        let t = BallTruncation::build(Family::Tree(3), 3, 2).unwrap();
        let x0 = by_name(&t, &["root"]);
        let y = by_name(&t, &["0"]);
        let rep = coset_representative(&t, &x0, &y).unwrap();
        let root = 0usize;
        assert_eq!(rep.image(root), y.first().copied());
        // Adjacency is preserved wherever both images exist, and the map
        // is injective on its domain.
        let mut seen = BTreeSet::new();
        for v in 0..t.len() {
            if let Some(w) = rep.image(v) {
                assert!(seen.insert(w));
                for &u in t.neighbours(v) {
                    if let Some(x) = rep.image(u) {
                        assert!(t.neighbours(w).contains(&x));
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_tree_maps_vary_but_agree_on_full_sphere_images() {
        let t = BallTruncation::build(Family::Tree(3), 3, 2).unwrap();
        let x0 = by_name(&t, &["root"]);
        let y = by_name(&t, &["0"]);
        let maps = sample_coset_maps(&t, &x0, &y, 11, 20).unwrap();
        assert!(maps.iter().any(|m| m != &maps[0]), "sampling should vary");
        // Spheres around the root that stay in the window after mapping
        // around "0" have pairing-independent images: depth 0 + i <= 3 - 1.
        let sphere1: BTreeSet<usize> = (0..t.len()).filter(|&v| t.dist(v) == 1).collect();
        let expected: BTreeSet<usize> = maps[0].image_of_set(&sphere1).unwrap();
        for m in &maps {
            assert_eq!(m.image_of_set(&sphere1), Some(expected.clone()));
        }
        // Determinism of the sampler.
        let again = sample_coset_maps(&t, &x0, &y, 11, 20).unwrap();
        assert_eq!(maps, again);
    }
}
