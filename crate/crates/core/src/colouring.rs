use std::collections::BTreeSet;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::PermGroup;
use crate::par;
use crate::perm::Permutation;

/// Where an assigned colour came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    CosetBlock,
    TowerBlock,
    Filler,
    Search,
}

/// A partial colouring of {0, ..., degree-1} with colours in {0, ..., k-1}.
/// Every assigned point remembers which stage of a construction set it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    degree: usize,
    k: usize,
    colours: Vec<Option<u32>>,
    provenance: Vec<Option<Provenance>>,
}

impl Colouring {
    pub fn new(degree: usize, k: usize) -> Self {
        Colouring {
            degree,
            k,
            colours: vec![None; degree],
            provenance: vec![None; degree],
        }
    }

    pub fn from_colour_vec(k: usize, colours: Vec<Option<u32>>) -> Result<Self, Error> {
        for c in colours.iter().flatten() {
            if *c as usize >= k {
                return Err(Error::BadColouringFile {
                    detail: format!("colour {c} out of range for k = {k}"),
                });
            }
        }
        let degree = colours.len();
        Ok(Colouring {
            degree,
            k,
            colours,
            provenance: vec![Some(Provenance::Search); degree],
        })
    }

    pub fn set(&mut self, point: usize, colour: u32, provenance: Provenance) {
        assert!((colour as usize) < self.k, "colour {colour} out of range");
        self.colours[point] = Some(colour);
        self.provenance[point] = Some(provenance);
    }

    pub fn colour(&self, point: usize) -> Option<u32> {
        self.colours[point]
    }

    pub fn provenance(&self, point: usize) -> Option<Provenance> {
        self.provenance[point]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colours(&self) -> &[Option<u32>] {
        &self.colours
    }

    pub fn provenances(&self) -> &[Option<Provenance>] {
        &self.provenance
    }

    pub fn is_total(&self) -> bool {
        self.colours.iter().all(|c| c.is_some())
    }

    pub fn assigned_count(&self) -> usize {
        self.colours.iter().filter(|c| c.is_some()).count()
    }
}

/// A point both moved by the checked element and seeing a colour change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    /// Index of the element in the checked list.
    pub element: usize,
    pub point: usize,
}

/// Outcome of checking a colouring against a list of elements. The colouring
/// is asymmetric precisely when no violator was found; `violator` is the
/// first element in list order preserving the colouring.
#[derive(Debug, Clone)]
pub struct AsymmetryReport {
    pub violator: Option<(usize, Permutation)>,
    pub witnesses: Vec<Witness>,
    pub checked: usize,
}

impl AsymmetryReport {
    pub fn asymmetric(&self) -> bool {
        self.violator.is_none()
    }
}

enum Probe {
    Identity,
    Uncoloured(usize),
    Witness(usize),
    Preserved,
}

fn probe_element(colouring: &Colouring, e: &Permutation) -> Probe {
    if e.is_identity() {
        return Probe::Identity;
    }
    // The support is invariant under e, so scanning it covers x and e(x).
    let mut witness = None;
    for x in 0..e.degree() {
        let y = e.image(x);
        if x == y {
            continue;
        }
        let Some(cx) = colouring.colour(x) else {
            return Probe::Uncoloured(x);
        };
        // e(x) lies in the support too; its colour check happens when the
        // scan reaches it. Here we only need it for the witness test.
        if witness.is_none() {
            if let Some(cy) = colouring.colour(y) {
                if cx != cy {
                    witness = Some(x);
                }
            }
        }
    }
    match witness {
        Some(x) => Probe::Witness(x),
        None => Probe::Preserved,
    }
}

/// Check a colouring against every element of the list. Requires the
/// colouring to assign every point in every support; the first uncoloured
/// support point, in element order, is reported as the error.
pub fn is_asymmetric(
    colouring: &Colouring,
    elements: &[Permutation],
) -> Result<AsymmetryReport, Error> {
    let probes = par::map_in_order(elements, |e| probe_element(colouring, e));
    report_from_probes(elements, &probes)
}

pub(crate) fn is_asymmetric_seq(
    colouring: &Colouring,
    elements: &[Permutation],
) -> Result<AsymmetryReport, Error> {
    let probes = par::map_in_order_seq(elements, |e| probe_element(colouring, e));
    report_from_probes(elements, &probes)
}

fn report_from_probes(
    elements: &[Permutation],
    probes: &[Probe],
) -> Result<AsymmetryReport, Error> {
    for p in probes {
        if let Probe::Uncoloured(point) = p {
            return Err(Error::UncolouredPoint { point: *point });
        }
    }
    let mut witnesses = Vec::new();
    let mut violator = None;
    let mut checked = 0;
    for (i, p) in probes.iter().enumerate() {
        match p {
            Probe::Identity => {}
            Probe::Witness(x) => {
                checked += 1;
                witnesses.push(Witness {
                    element: i,
                    point: *x,
                });
            }
            Probe::Preserved => {
                checked += 1;
                if violator.is_none() {
                    violator = Some((i, elements[i].clone()));
                }
            }
            Probe::Uncoloured(_) => unreachable!(),
        }
    }
    Ok(AsymmetryReport {
        violator,
        witnesses,
        checked,
    })
}

/// Exhaustive search for an asymmetric k-colouring, trying candidates in
/// lexicographic order with point 0 pinned to colour 0 (any asymmetric
/// colouring can be relabelled to one of that form). Returns the first hit.
pub fn exact_asymmetric_colouring(
    group: &PermGroup,
    k: usize,
) -> Result<Option<Colouring>, Error> {
    let elements = group.elements()?;
    let movers: Vec<&Permutation> = elements.iter().filter(|e| !e.is_identity()).collect();
    let n = group.degree();
    if k == 0 {
        // Only the empty domain admits a 0-colouring.
        return Ok(if n == 0 {
            Some(Colouring::new(0, 0))
        } else {
            None
        });
    }
    if movers.is_empty() {
        let mut c = Colouring::new(n, k);
        for p in 0..n {
            c.set(p, 0, Provenance::Search);
        }
        return Ok(Some(c));
    }
    // Bucket each element under the largest point it moves: once the search
    // has assigned that point, the element is fully determined and a
    // preserved element prunes the whole branch.
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in movers.iter().enumerate() {
        let top = (0..n).rev().find(|&x| e.image(x) != x).unwrap();
        buckets[top].push(i);
    }
    let mut colours: Vec<Option<u32>> = vec![None; n];
    if dfs_exact(&movers, &buckets, &mut colours, 0, k as u32) {
        let mut c = Colouring::new(n, k);
        for (p, col) in colours.into_iter().enumerate() {
            c.set(p, col.unwrap(), Provenance::Search);
        }
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

fn dfs_exact(
    movers: &[&Permutation],
    buckets: &[Vec<usize>],
    colours: &mut Vec<Option<u32>>,
    pos: usize,
    k: u32,
) -> bool {
    if pos == colours.len() {
        return true;
    }
    let top = if pos == 0 { 1 } else { k };
    for col in 0..top {
        colours[pos] = Some(col);
        let pruned = buckets[pos].iter().any(|&i| {
            let e = movers[i];
            (0..e.degree()).all(|x| {
                let y = e.image(x);
                x == y || colours[x] == colours[y]
            })
        });
        if !pruned && dfs_exact(movers, buckets, colours, pos + 1, k) {
            return true;
        }
    }
    colours[pos] = None;
    false
}

/// Least k admitting an asymmetric k-colouring. The all-distinct colouring
/// always works, so the scan is bounded by the degree.
pub fn distinguishing_number(group: &PermGroup) -> Result<usize, Error> {
    for k in 1..=group.degree().max(1) {
        if exact_asymmetric_colouring(group, k)?.is_some() {
            return Ok(k);
        }
    }
    unreachable!("the all-distinct colouring is asymmetric for any permutation group")
}

/// Repeatedly draw uniform 2-colourings from a seeded stream and return the
/// first asymmetric one together with its 1-based try index, or None when
/// `max_tries` draws all fail.
///
/// When the motion m of the group satisfies m >= 2 log2 |g|, a uniform draw
/// succeeds with probability at least 1/2: a non-identity element preserves
/// a uniform colouring with probability at most 2^(-m/2), and a union bound
/// over |g| - 1 elements keeps the failure mass below |g| * 2^(-m/2).
///
/// Colour bits come straight from `next_u32` of a ChaCha stream, so the
/// sequence for a given seed is identical on every platform.
pub fn random_motion_colouring(
    group: &PermGroup,
    seed: u64,
    max_tries: u32,
) -> Result<Option<(Colouring, u32)>, Error> {
    let elements = group.elements()?;
    let n = group.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 1..=max_tries {
        let mut c = Colouring::new(n, 2);
        for p in 0..n {
            c.set(p, rng.next_u32() & 1, Provenance::Search);
        }
        if is_asymmetric(&c, elements)?.asymmetric() {
            return Ok(Some((c, t)));
        }
    }
    Ok(None)
}

/// Colour the union of a chain of blocks so that every element of the group
/// acting non-trivially on the union is broken inside it. Blocks must be
/// disjoint, setwise invariant, and have pointwise stabilizers nested from
/// later blocks into earlier ones; those are exactly the hypotheses under
/// which breaking elements block by block cannot paint outside the union.
///
/// The search is exhaustive per block and exponential in the largest block,
/// which suits towers of small blocks.
pub fn blockwise_colouring(
    group: &PermGroup,
    blocks: &[BTreeSet<usize>],
) -> Result<Colouring, Error> {
    let n = group.degree();
    let mut seen_points = vec![false; n];
    for block in blocks {
        for &p in block {
            if p >= n {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: n,
                });
            }
            if seen_points[p] {
                return Err(Error::BlocksOverlap { point: p });
            }
            seen_points[p] = true;
        }
    }
    for (bi, block) in blocks.iter().enumerate() {
        for g in group.generators() {
            for &p in block {
                if !block.contains(&g.image(p)) {
                    return Err(Error::BlockNotInvariant { block: bi });
                }
            }
        }
    }
    let elements = group.elements()?;
    for later in 1..blocks.len() {
        let earlier = later - 1;
        let violated = elements.iter().any(|e| {
            !e.is_identity()
                && blocks[later].iter().all(|&p| e.image(p) == p)
                && blocks[earlier].iter().any(|&p| e.image(p) != p)
        });
        if violated {
            return Err(Error::NestingViolated { earlier, later });
        }
    }
    let union: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
    let targets: Vec<Permutation> = elements
        .iter()
        .filter(|e| !e.is_identity() && union.iter().any(|&p| e.image(p) != p))
        .cloned()
        .collect();
    let block_lists: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().copied().collect()).collect();
    match blockwise_search(&targets, &block_lists) {
        Some(assignments) => {
            let mut c = Colouring::new(n, 2);
            for (p, col) in assignments {
                c.set(p, col, Provenance::TowerBlock);
            }
            Ok(c)
        }
        None => Err(Error::NeedMoreBlocks),
    }
}

/// Backtracking core shared with the window construction: assign 2-colour
/// patterns block by block, in lexicographic order per block, keeping track
/// of which target elements are already broken. An unbroken element whose
/// last moved block is behind the frontier kills the branch.
///
/// Targets must move only points inside the blocks they are to be broken
/// in, and must fix each block setwise.
pub(crate) fn blockwise_search(
    targets: &[Permutation],
    blocks: &[Vec<usize>],
) -> Option<Vec<(usize, u32)>> {
    // Last block in which each target moves a point; targets moving no
    // block point can never be broken.
    let mut last_chance = vec![None; targets.len()];
    for (i, e) in targets.iter().enumerate() {
        for (bi, block) in blocks.iter().enumerate() {
            if block.iter().any(|&p| e.image(p) != p) {
                last_chance[i] = Some(bi);
            }
        }
        last_chance[i]?;
    }
    let first_point = blocks.iter().flatten().min().copied();
    let mut state = BlockSearch {
        targets,
        blocks,
        last_chance,
        first_point,
        colours: vec![None; targets.first().map_or(0, |e| e.degree())],
        broken: vec![false; targets.len()],
    };
    if state.colours.is_empty() {
        // No targets to break: the all-0 assignment is the first candidate.
        return Some(
            blocks
                .iter()
                .flatten()
                .map(|&p| (p, 0))
                .collect::<Vec<_>>(),
        );
    }
    if !state.descend(0) {
        return None;
    }
    let mut out = Vec::new();
    for block in blocks {
        for &p in block {
            out.push((p, state.colours[p].unwrap()));
        }
    }
    out.sort_unstable();
    Some(out)
}

struct BlockSearch<'a> {
    targets: &'a [Permutation],
    blocks: &'a [Vec<usize>],
    last_chance: Vec<Option<usize>>,
    first_point: Option<usize>,
    colours: Vec<Option<u32>>,
    broken: Vec<bool>,
}

impl BlockSearch<'_> {
    fn descend(&mut self, bi: usize) -> bool {
        if bi == self.blocks.len() {
            return self.broken.iter().all(|&b| b);
        }
        let block = self.blocks[bi].clone();
        let m = block.len();
        let patterns: u64 = 1 << m;
        'pattern: for pat in 0..patterns {
            for (j, &p) in block.iter().enumerate() {
                let colour = ((pat >> (m - 1 - j)) & 1) as u32;
                // Pin the least union point to colour 0; a global colour
                // swap makes any solution canonical.
                if Some(p) == self.first_point && colour != 0 {
                    continue 'pattern;
                }
                self.colours[p] = Some(colour);
            }
            let mut newly = Vec::new();
            let mut dead = false;
            for (i, e) in self.targets.iter().enumerate() {
                if self.broken[i] {
                    continue;
                }
                let hit = block.iter().any(|&p| {
                    let q = e.image(p);
                    q != p && self.colours[p] != self.colours[q]
                });
                if hit {
                    self.broken[i] = true;
                    newly.push(i);
                } else if self.last_chance[i] == Some(bi) {
                    dead = true;
                    break;
                }
            }
            if !dead && self.descend(bi + 1) {
                return true;
            }
            for i in newly {
                self.broken[i] = false;
            }
        }
        for &p in &block {
            self.colours[p] = None;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn total(colours: &[u32], k: usize) -> Colouring {
        let mut c = Colouring::new(colours.len(), k);
        for (p, &col) in colours.iter().enumerate() {
            c.set(p, col, Provenance::Search);
        }
        c
    }

    #[test]
    fn report_finds_first_violator_and_witnesses() {
        let g = PermGroup::cyclic(4);
        let elements = g.elements().unwrap();
        let c = total(&[0, 0, 0, 0], 2);
        let report = is_asymmetric(&c, elements).unwrap();
        assert!(!report.asymmetric());
        // Elements are sorted; the first non-identity one is the violator.
        let (idx, v) = report.violator.unwrap();
        assert!(!v.is_identity());
        assert_eq!(&elements[idx], &v);

        let c = total(&[0, 0, 0, 1], 2);
        let report = is_asymmetric(&c, elements).unwrap();
        assert!(report.asymmetric());
        assert_eq!(report.checked, 3);
        assert_eq!(report.witnesses.len(), 3);
        for w in &report.witnesses {
            let e = &elements[w.element];
            let y = e.image(w.point);
            assert_ne!(w.point, y);
            assert_ne!(c.colour(w.point), c.colour(y));
        }
    }

    #[test]
    fn report_requires_coloured_supports() {
        let g = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[1, 2]]).unwrap()]).unwrap();
        let mut c = Colouring::new(3, 2);
        c.set(0, 0, Provenance::Search);
        c.set(1, 1, Provenance::Search);
        // Point 2 is moved but uncoloured; point 0 needs no colour but has one.
        assert_eq!(
            is_asymmetric(&c, g.elements().unwrap()).unwrap_err(),
            Error::UncolouredPoint { point: 2 }
        );
    }

    #[test]
    fn exact_colouring_of_cyclic_four_is_lex_first() {
        let g = PermGroup::cyclic(4);
        let c = exact_asymmetric_colouring(&g, 2).unwrap().unwrap();
        let got: Vec<u32> = (0..4).map(|p| c.colour(p).unwrap()).collect();
        assert_eq!(got, vec![0, 0, 0, 1]);
    }

    #[test]
    fn exact_colouring_respects_k_zero_and_trivial_groups() {
        assert!(exact_asymmetric_colouring(&PermGroup::trivial(0), 0)
            .unwrap()
            .is_some());
        assert!(exact_asymmetric_colouring(&PermGroup::trivial(3), 0)
            .unwrap()
            .is_none());
        let c = exact_asymmetric_colouring(&PermGroup::trivial(3), 1)
            .unwrap()
            .unwrap();
        assert_eq!(c.colour(2), Some(0));
    }

    #[test]
    fn distinguishing_numbers_of_small_groups() {
        // The square's full symmetry group needs three colours; its
        // rotation subgroup only two.
        assert_eq!(distinguishing_number(&PermGroup::dihedral(4)).unwrap(), 3);
        assert_eq!(distinguishing_number(&PermGroup::cyclic(4)).unwrap(), 2);
        assert_eq!(distinguishing_number(&PermGroup::symmetric(3)).unwrap(), 3);
        assert_eq!(distinguishing_number(&PermGroup::symmetric(4)).unwrap(), 4);
        assert_eq!(distinguishing_number(&PermGroup::trivial(5)).unwrap(), 1);
        assert_eq!(distinguishing_number(&PermGroup::trivial(0)).unwrap(), 1);
        assert_eq!(distinguishing_number(&PermGroup::cyclic(3)).unwrap(), 2);
    }

    #[test]
    fn dihedral_two_colourings_all_fail() {
        // Exhaustive cross-check of the k = 2 failure for the square.
        let g = PermGroup::dihedral(4);
        let elements = g.elements().unwrap();
        for pat in 0u32..16 {
            let colours: Vec<u32> = (0..4).map(|p| (pat >> p) & 1).collect();
            let c = total(&colours, 2);
            assert!(!is_asymmetric(&c, elements).unwrap().asymmetric());
        }
    }

    #[test]
    fn random_colouring_is_deterministic_and_sound() {
        let g = PermGroup::cyclic(11);
        let (c1, t1) = random_motion_colouring(&g, 7, 64).unwrap().unwrap();
        let (c2, t2) = random_motion_colouring(&g, 7, 64).unwrap().unwrap();
        assert_eq!(c1, c2);
        assert_eq!(t1, t2);
        assert!(is_asymmetric(&c1, g.elements().unwrap())
            .unwrap()
            .asymmetric());
        // The trivial group succeeds on the first draw, vacuously.
        let (_, t) = random_motion_colouring(&PermGroup::trivial(3), 0, 4)
            .unwrap()
            .unwrap();
        assert_eq!(t, 1);
    }

    #[test]
    fn blockwise_breaks_a_swap_inside_its_block() {
        let g = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        let c = blockwise_colouring(&g, &[BTreeSet::from([0, 1])]).unwrap();
        assert_eq!(c.colour(0), Some(0));
        assert_eq!(c.colour(1), Some(1));
        assert_eq!(c.colour(2), None);
        assert_eq!(c.provenance(0), Some(Provenance::TowerBlock));
    }

    #[test]
    fn blockwise_square_needs_more_blocks() {
        let g = PermGroup::dihedral(4);
        assert_eq!(
            blockwise_colouring(&g, &[BTreeSet::from([0, 1, 2, 3])]).unwrap_err(),
            Error::NeedMoreBlocks
        );
    }

    #[test]
    fn blockwise_validates_its_hypotheses() {
        let g = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(
            blockwise_colouring(&g, &[BTreeSet::from([0, 1]), BTreeSet::from([1, 2])]).unwrap_err(),
            Error::BlocksOverlap { point: 1 }
        );
        assert_eq!(
            blockwise_colouring(&g, &[BTreeSet::from([0, 2])]).unwrap_err(),
            Error::BlockNotInvariant { block: 0 }
        );
        // (0 1) fixes {2, 3} pointwise yet moves the earlier block.
        assert_eq!(
            blockwise_colouring(&g, &[BTreeSet::from([0, 1]), BTreeSet::from([2, 3])]).unwrap_err(),
            Error::NestingViolated {
                earlier: 0,
                later: 1
            }
        );
    }

    #[test]
    fn blockwise_trivial_group_gets_all_zero() {
        let g = PermGroup::trivial(4);
        let c = blockwise_colouring(&g, &[BTreeSet::from([1, 2])]).unwrap();
        assert_eq!(c.colour(1), Some(0));
        assert_eq!(c.colour(2), Some(0));
        assert_eq!(c.assigned_count(), 2);
    }

    #[test]
    fn blockwise_tower_over_two_blocks() {
        // a = (0 1)(2 3 4 5) has a^2 moving only the second block, while
        // anything moving the first block also moves the second, so the
        // pointwise stabilizers nest and both blocks are genuinely needed.
        let g = PermGroup::new(
            6,
            vec![Permutation::from_cycles(6, &[&[0, 1], &[2, 3, 4, 5]]).unwrap()],
        )
        .unwrap();
        let blocks = [BTreeSet::from([0, 1]), BTreeSet::from([2, 3, 4, 5])];
        let c = blockwise_colouring(&g, &blocks).unwrap();
        let elements = g.elements().unwrap();
        let report = is_asymmetric(&c, elements).unwrap();
        assert!(report.asymmetric());
        // Restricted to the first block alone, a^2 acts trivially and drops
        // out of the checked set; the union of both blocks pulls it back in.
        let narrow = blockwise_colouring(&g, &blocks[..1]).unwrap();
        assert_eq!(narrow.assigned_count(), 2);
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
            (2usize..=5).prop_flat_map(|degree| {
                proptest::collection::vec(arb_perm(degree), 1..=2)
                    .prop_map(move |gens| PermGroup::new(degree, gens).unwrap())
            })
        }

        proptest! {
            #[test]
            fn report_matches_direct_check(g in arb_group(), pat in 0u32..1024) {
                let n = g.degree();
                let colours: Vec<u32> = (0..n).map(|p| (pat >> p) & 1).collect();
                let c = total(&colours, 2);
                let elements = g.elements().unwrap();
                let report = is_asymmetric(&c, elements).unwrap();
                let preserved: Vec<&Permutation> = elements
                    .iter()
                    .filter(|e| {
                        !e.is_identity()
                            && (0..n).all(|x| colours[x] == colours[e.image(x)])
                    })
                    .collect();
                prop_assert_eq!(report.asymmetric(), preserved.is_empty());
                if let Some((idx, v)) = &report.violator {
                    prop_assert_eq!(&elements[*idx], v);
                    prop_assert_eq!(preserved[0], v);
                }
                prop_assert_eq!(
                    is_asymmetric_seq(&c, elements).unwrap().asymmetric(),
                    report.asymmetric()
                );
            }

            #[test]
            fn exact_solutions_verify_and_normalize(g in arb_group(), k in 1usize..4) {
                if let Some(c) = exact_asymmetric_colouring(&g, k).unwrap() {
                    prop_assert!(is_asymmetric(&c, g.elements().unwrap()).unwrap().asymmetric());
                    prop_assert_eq!(c.colour(0), Some(0));
                    prop_assert!(c.colours().iter().all(|col| (col.unwrap() as usize) < k));
                    // Monotonicity: a solution for k extends to k+1.
                    prop_assert!(exact_asymmetric_colouring(&g, k + 1).unwrap().is_some());
                }
            }

            #[test]
            fn distinguishing_number_is_the_threshold(g in arb_group()) {
                let d = distinguishing_number(&g).unwrap();
                prop_assert!(exact_asymmetric_colouring(&g, d).unwrap().is_some());
                if d > 1 {
                    prop_assert!(exact_asymmetric_colouring(&g, d - 1).unwrap().is_none());
                }
            }

            #[test]
            fn random_solutions_verify(g in arb_group(), seed in 0u64..1000) {
                if let Some((c, _)) = random_motion_colouring(&g, seed, 16).unwrap() {
                    prop_assert!(is_asymmetric(&c, g.elements().unwrap()).unwrap().asymmetric());
                }
            }
        }
    }
}
