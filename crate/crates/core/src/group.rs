use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::Error;
use crate::par;
use crate::perm::Permutation;

/// Default bound on full element enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// A permutation group on {0, ..., degree-1}, given by generators.
///
/// Full enumeration happens lazily, is cached, and refuses to grow past
/// `enumeration_cap`. The cached element list is sorted lexicographically
/// by image table and is what every "first element such that ..." promise
/// refers to.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    enumeration_cap: usize,
    elements: OnceLock<Result<Vec<Permutation>, Error>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, Error> {
        Self::with_cap(degree, generators, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(
        degree: usize,
        generators: Vec<Permutation>,
        enumeration_cap: usize,
    ) -> Result<Self, Error> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    index,
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            enumeration_cap,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            elements: OnceLock::new(),
        }
    }

    /// Wrap an already-enumerated element list (sorted, identity included)
    /// without re-running the closure. Used for stabilizer results.
    pub(crate) fn from_element_list(
        degree: usize,
        elements: Vec<Permutation>,
        enumeration_cap: usize,
    ) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.iter().any(|e| e.is_identity()));
        let cache = OnceLock::new();
        let _ = cache.set(Ok(elements.clone()));
        PermGroup {
            degree,
            generators: elements,
            enumeration_cap,
            elements: cache,
        }
    }

    /// Cyclic group generated by the n-cycle x -> x+1 mod n.
    pub fn cyclic(n: usize) -> Self {
        if n == 0 {
            return PermGroup::trivial(0);
        }
        let rot = Permutation::from_images((0..n).map(|x| (x + 1) % n).collect()).unwrap();
        PermGroup::new(n, vec![rot]).unwrap()
    }

    /// Dihedral group on n points: rotation plus the reflection x -> n-1-x.
    pub fn dihedral(n: usize) -> Self {
        if n == 0 {
            return PermGroup::trivial(0);
        }
        let rot = Permutation::from_images((0..n).map(|x| (x + 1) % n).collect()).unwrap();
        let refl = Permutation::from_images((0..n).rev().collect()).unwrap();
        PermGroup::new(n, vec![rot, refl]).unwrap()
    }

    /// Full symmetric group on n points.
    pub fn symmetric(n: usize) -> Self {
        if n < 2 {
            return PermGroup::trivial(n);
        }
        let swap = Permutation::from_cycles(n, &[&[0, 1]]).unwrap();
        let cycle: Vec<usize> = (0..n).collect();
        let rot = Permutation::from_cycles(n, &[&cycle]).unwrap();
        PermGroup::new(n, vec![swap, rot]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn enumeration_cap(&self) -> usize {
        self.enumeration_cap
    }

    /// True when every generator is the identity; needs no enumeration.
    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.is_identity())
    }

    /// All elements, sorted lexicographically by image table.
    pub fn elements(&self) -> Result<&[Permutation], Error> {
        self.elements
            .get_or_init(|| closure_elements(self.degree, &self.generators, self.enumeration_cap))
            .as_deref()
            .map_err(|e| e.clone())
    }

    pub fn order(&self) -> Result<usize, Error> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, Error> {
        if g.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.elements()?.binary_search(g).is_ok())
    }

    /// Orbits of the given points under the group, as full orbits in the
    /// domain, deduplicated and sorted by least element. Needs only the
    /// generators, never a full enumeration.
    pub fn orbits(&self, points: &BTreeSet<usize>) -> Result<Vec<BTreeSet<usize>>, Error> {
        self.check_points(points)?;
        let mut claimed = vec![false; self.degree];
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for &p in points {
            if claimed[p] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut queue = vec![p];
            claimed[p] = true;
            orbit.insert(p);
            while let Some(x) = queue.pop() {
                for g in &self.generators {
                    let y = g.image(x);
                    if !claimed[y] {
                        claimed[y] = true;
                        orbit.insert(y);
                        queue.push(y);
                    }
                }
            }
            out.push(orbit);
        }
        out.sort_by_key(|o| o.first().copied());
        Ok(out)
    }

    /// Elements fixing every point of `y`.
    pub fn pointwise_stabilizer(&self, y: &BTreeSet<usize>) -> Result<PermGroup, Error> {
        self.check_points(y)?;
        let elements = self.elements()?.to_vec();
        let kept = par::filter_in_order(elements, |e| y.iter().all(|&p| e.image(p) == p));
        Ok(PermGroup::from_element_list(
            self.degree,
            kept,
            self.enumeration_cap,
        ))
    }

    /// Elements mapping `y` onto itself as a set.
    pub fn setwise_stabilizer(&self, y: &BTreeSet<usize>) -> Result<PermGroup, Error> {
        self.check_points(y)?;
        let elements = self.elements()?.to_vec();
        let kept = par::filter_in_order(elements, |e| y.iter().all(|&p| y.contains(&e.image(p))));
        Ok(PermGroup::from_element_list(
            self.degree,
            kept,
            self.enumeration_cap,
        ))
    }

    /// Least support size over non-identity elements; None for the trivial
    /// group, where the minimum ranges over an empty set.
    pub fn motion(&self) -> Result<Option<usize>, Error> {
        Ok(motion_of_elements(self.elements()?))
    }

    /// The action of the group on an invariant subset, reindexed onto
    /// {0, ..., |y|-1} in increasing order of the original points.
    pub fn restrict_action(&self, y: &BTreeSet<usize>) -> Result<PermGroup, Error> {
        self.check_points(y)?;
        for (index, g) in self.generators.iter().enumerate() {
            for &p in y {
                if !y.contains(&g.image(p)) {
                    return Err(Error::NotInvariant {
                        generator: index,
                        point: p,
                    });
                }
            }
        }
        // Faithfulness is a property of elements, not generators.
        let elements = self.elements()?;
        if elements
            .iter()
            .any(|e| !e.is_identity() && y.iter().all(|&p| e.image(p) == p))
        {
            return Err(Error::NotFaithful);
        }
        let points: Vec<usize> = y.iter().copied().collect();
        let index_of = |p: usize| points.binary_search(&p).unwrap();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                Permutation::from_images(points.iter().map(|&p| index_of(g.image(p))).collect())
                    .unwrap()
            })
            .collect();
        PermGroup::with_cap(points.len(), gens, self.enumeration_cap)
    }

    fn check_points(&self, points: &BTreeSet<usize>) -> Result<(), Error> {
        match points.last() {
            Some(&p) if p >= self.degree => Err(Error::PointOutOfRange {
                point: p,
                degree: self.degree,
            }),
            _ => Ok(()),
        }
    }
}

/// Parse the generator file format: a `degree n` header line, then one
/// generator per line as n space-separated images. `#` starts a comment.
pub fn parse_generators(text: &str) -> Result<PermGroup, Error> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::MalformedGenerators {
        detail: "empty file".into(),
    })?;
    let degree = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["degree", n] => n.parse::<usize>().map_err(|_| Error::MalformedGenerators {
            detail: format!("bad degree {n:?}"),
        })?,
        _ => {
            return Err(Error::MalformedGenerators {
                detail: format!("expected `degree n` header, found {header:?}"),
            })
        }
    };
    let mut generators = Vec::new();
    for (index, line) in lines.enumerate() {
        let images: Vec<usize> = line
            .split_whitespace()
            .map(|w| {
                w.parse::<usize>().map_err(|_| Error::MalformedGenerators {
                    detail: format!("bad image {w:?} in generator {index}"),
                })
            })
            .collect::<Result<_, _>>()?;
        if images.len() != degree {
            return Err(Error::DegreeMismatch {
                index,
                expected: degree,
                found: images.len(),
            });
        }
        generators.push(Permutation::from_images(images)?);
    }
    PermGroup::with_cap(degree, generators, DEFAULT_ENUMERATION_CAP)
}

/// Breadth-first closure of the generators, level-synchronous so the result
/// and the cap check are identical whichever expansion kernel runs.
fn closure_with(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
    expand: impl Fn(&[Permutation], &[Permutation]) -> Vec<Permutation>,
) -> Result<Vec<Permutation>, Error> {
    let identity = Permutation::identity(degree);
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    seen.insert(identity.clone());
    if seen.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let produced = expand(&frontier, generators);
        let mut next = Vec::new();
        for p in produced {
            if seen.insert(p.clone()) {
                next.push(p);
            }
        }
        if seen.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

fn expand_level(frontier: &[Permutation], generators: &[Permutation]) -> Vec<Permutation> {
    let products = par::map_in_order(frontier, |f| {
        generators
            .iter()
            .map(|g| Permutation::compose(f, g))
            .collect::<Vec<_>>()
    });
    products.into_iter().flatten().collect()
}

fn expand_level_seq(frontier: &[Permutation], generators: &[Permutation]) -> Vec<Permutation> {
    let products = par::map_in_order_seq(frontier, |f| {
        generators
            .iter()
            .map(|g| Permutation::compose(f, g))
            .collect::<Vec<_>>()
    });
    products.into_iter().flatten().collect()
}

pub(crate) fn closure_elements(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, Error> {
    closure_with(degree, generators, cap, expand_level)
}

pub(crate) fn closure_elements_seq(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, Error> {
    closure_with(degree, generators, cap, expand_level_seq)
}

pub(crate) fn motion_of_elements(elements: &[Permutation]) -> Option<usize> {
    // Identity maps to a sentinel above any real support size.
    let m = par::min_value(elements, |e| {
        if e.is_identity() {
            usize::MAX
        } else {
            e.support_len()
        }
    })?;
    if m == usize::MAX {
        None
    } else {
        Some(m)
    }
}

pub(crate) fn motion_of_elements_seq(elements: &[Permutation]) -> Option<usize> {
    let m = par::min_value_seq(elements, |e| {
        if e.is_identity() {
            usize::MAX
        } else {
            e.support_len()
        }
    })?;
    if m == usize::MAX {
        None
    } else {
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn closure_of_sym3_is_sorted_and_complete() {
        let g = PermGroup::symmetric(3);
        let elements = g.elements().unwrap();
        let expected: Vec<Permutation> = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .iter()
        .map(|im| perm(im))
        .collect();
        assert_eq!(elements, &expected[..]);
    }

    #[test]
    fn orders_of_standard_groups() {
        assert_eq!(PermGroup::cyclic(6).order().unwrap(), 6);
        assert_eq!(PermGroup::dihedral(5).order().unwrap(), 10);
        assert_eq!(PermGroup::symmetric(5).order().unwrap(), 120);
        assert_eq!(PermGroup::trivial(4).order().unwrap(), 1);
        assert_eq!(PermGroup::trivial(0).order().unwrap(), 1);
    }

    #[test]
    fn cap_is_checked_per_level() {
        let g = PermGroup::with_cap(5, PermGroup::symmetric(5).generators().to_vec(), 100).unwrap();
        assert_eq!(g.elements().unwrap_err(), Error::CapExceeded { cap: 100 });
        let g = PermGroup::with_cap(5, PermGroup::symmetric(5).generators().to_vec(), 120).unwrap();
        assert_eq!(g.elements().unwrap().len(), 120);
    }

    #[test]
    fn orbits_of_a_mixed_cycle() {
        // (0 1)(2 3 4): the orbit of 0 is {0,1}, the orbit of 2 is {2,3,4}.
        let g = PermGroup::new(5, vec![Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap()])
            .unwrap();
        let orbits = g.orbits(&BTreeSet::from([0, 2])).unwrap();
        assert_eq!(
            orbits,
            vec![BTreeSet::from([0, 1]), BTreeSet::from([2, 3, 4])]
        );
        // Points in one orbit produce it once.
        let orbits = g.orbits(&BTreeSet::from([2, 3, 4])).unwrap();
        assert_eq!(orbits, vec![BTreeSet::from([2, 3, 4])]);
    }

    #[test]
    fn orbit_points_out_of_range_rejected() {
        let g = PermGroup::cyclic(3);
        assert_eq!(
            g.orbits(&BTreeSet::from([5])).unwrap_err(),
            Error::PointOutOfRange {
                point: 5,
                degree: 3
            }
        );
    }

    #[test]
    fn stabilizers_of_sym3() {
        let g = PermGroup::symmetric(3);
        let point = g.pointwise_stabilizer(&BTreeSet::from([0])).unwrap();
        assert_eq!(
            point.elements().unwrap(),
            &[perm(&[0, 1, 2]), perm(&[0, 2, 1])]
        );
        let set = g.setwise_stabilizer(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(
            set.elements().unwrap(),
            &[perm(&[0, 1, 2]), perm(&[1, 0, 2])]
        );
    }

    #[test]
    fn pointwise_is_contained_in_setwise() {
        let g = PermGroup::symmetric(4);
        let y = BTreeSet::from([1, 3]);
        let pw = g.pointwise_stabilizer(&y).unwrap();
        let sw = g.setwise_stabilizer(&y).unwrap();
        for e in pw.elements().unwrap() {
            assert!(sw.contains(e).unwrap());
        }
        assert_eq!(pw.order().unwrap(), 2);
        assert_eq!(sw.order().unwrap(), 4);
    }

    #[test]
    fn motion_values() {
        // Every nonzero shift of the regular cyclic action is fixed-point-free.
        assert_eq!(PermGroup::cyclic(6).motion().unwrap(), Some(6));
        assert_eq!(PermGroup::symmetric(4).motion().unwrap(), Some(2));
        assert_eq!(PermGroup::trivial(7).motion().unwrap(), None);
        assert_eq!(PermGroup::trivial(0).motion().unwrap(), None);
        // (0 1)(2 3 4) generates elements of supports 5, 3, 2, 3, 5.
        let g = PermGroup::new(5, vec![Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap()])
            .unwrap();
        assert_eq!(g.motion().unwrap(), Some(2));
        // Klein four-group acting with every non-identity element fixed-point-free.
        let k4 = PermGroup::new(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(k4.motion().unwrap(), Some(4));
    }

    #[test]
    fn regular_cyclic_actions_have_full_motion() {
        for n in [2usize, 3, 5, 7, 11] {
            assert_eq!(PermGroup::cyclic(n).motion().unwrap(), Some(n));
        }
    }

    #[test]
    fn restrict_action_checks_invariance_then_faithfulness() {
        let g = PermGroup::new(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(4, &[&[2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            g.restrict_action(&BTreeSet::from([0, 1])).unwrap_err(),
            Error::NotFaithful
        );
        let c3 = PermGroup::cyclic(3);
        assert_eq!(
            c3.restrict_action(&BTreeSet::from([0, 1])).unwrap_err(),
            Error::NotInvariant {
                generator: 0,
                point: 1
            }
        );
        let g = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        let r = g.restrict_action(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(r.order().unwrap(), 2);
    }

    #[test]
    fn restrict_action_reindexes_in_point_order() {
        // (1 3) acting on {1, 3} becomes the swap on {0, 1}.
        let g = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[1, 3]]).unwrap()]).unwrap();
        let r = g.restrict_action(&BTreeSet::from([1, 3])).unwrap();
        assert_eq!(r.generators(), &[perm(&[1, 0])]);
    }

    #[test]
    fn parse_generator_file() {
        let text = "# symmetric group on three points\ndegree 3\n1 0 2\n1 2 0  # a 3-cycle\n";
        let g = parse_generators(text).unwrap();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.order().unwrap(), 6);
        assert!(matches!(
            parse_generators("degree 3\n0 1\n"),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(
            parse_generators("3\n0 1 2\n"),
            Err(Error::MalformedGenerators { .. })
        ));
        assert!(matches!(
            parse_generators(""),
            Err(Error::MalformedGenerators { .. })
        ));
        assert!(matches!(
            parse_generators("degree 3\n0 0 1\n"),
            Err(Error::NotAPermutation { .. })
        ));
    }

    #[test]
    fn sequential_and_dispatch_closures_agree() {
        for g in [
            PermGroup::symmetric(4),
            PermGroup::dihedral(6),
            PermGroup::cyclic(9),
        ] {
            let a = closure_elements(g.degree(), g.generators(), DEFAULT_ENUMERATION_CAP).unwrap();
            let b =
                closure_elements_seq(g.degree(), g.generators(), DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(a, b);
            assert_eq!(motion_of_elements(&a), motion_of_elements_seq(&a));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_perm(degree: usize) -> impl Strategy<Value = Permutation> {
            Just(()).prop_perturb(move |_, mut rng| {
                let mut images: Vec<usize> = (0..degree).collect();
                for i in (1..degree).rev() {
                    let j = (rng.next_u64() as usize) % (i + 1);
                    images.swap(i, j);
                }
                Permutation::from_images(images).unwrap()
            })
        }

        fn arb_group() -> impl Strategy<Value = PermGroup> {
            (2usize..=6).prop_flat_map(|degree| {
                proptest::collection::vec(arb_perm(degree), 1..=2)
                    .prop_map(move |gens| PermGroup::new(degree, gens).unwrap())
            })
        }

        proptest! {
            #[test]
            fn closure_is_a_group(g in arb_group()) {
                let elements = g.elements().unwrap();
                prop_assert!(elements.iter().any(|e| e.is_identity()));
                prop_assert!(elements.windows(2).all(|w| w[0] < w[1]));
                for a in elements {
                    prop_assert!(elements.binary_search(&a.inverse()).is_ok());
                    for b in elements {
                        prop_assert!(elements.binary_search(&Permutation::compose(a, b)).is_ok());
                    }
                }
            }

            #[test]
            fn motion_matches_direct_minimum(g in arb_group()) {
                let elements = g.elements().unwrap();
                let direct = elements
                    .iter()
                    .filter(|e| !e.is_identity())
                    .map(|e| e.support_len())
                    .min();
                prop_assert_eq!(g.motion().unwrap(), direct);
            }

            #[test]
            fn pointwise_refines_setwise(g in arb_group(), raw in proptest::collection::btree_set(0usize..6, 1..3)) {
                let y: BTreeSet<usize> = raw.into_iter().filter(|&p| p < g.degree()).collect();
                prop_assume!(!y.is_empty());
                let pw = g.pointwise_stabilizer(&y).unwrap();
                let sw = g.setwise_stabilizer(&y).unwrap();
                for e in pw.elements().unwrap() {
                    prop_assert!(sw.contains(e).unwrap());
                }
            }

            #[test]
            fn orbits_partition_their_points(g in arb_group(), raw in proptest::collection::btree_set(0usize..6, 1..4)) {
                let points: BTreeSet<usize> = raw.into_iter().filter(|&p| p < g.degree()).collect();
                prop_assume!(!points.is_empty());
                let orbits = g.orbits(&points).unwrap();
                for &p in &points {
                    prop_assert_eq!(orbits.iter().filter(|o| o.contains(&p)).count(), 1);
                }
                // Orbits are invariant under every generator.
                for orbit in &orbits {
                    for gen in g.generators() {
                        for &p in orbit {
                            prop_assert!(orbit.contains(&gen.image(p)));
                        }
                    }
                }
            }
        }
    }
}
