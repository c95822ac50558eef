use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::infinite::ball::BallTruncation;
use crate::infinite::Family;

/// Two children of `parent` whose coloured subtrees are indistinguishable,
/// so swapping them extends to a colour-preserving automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralWitness {
    pub parent: usize,
    pub child_a: usize,
    pub child_b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralReport {
    /// First sibling collision in index order, if any.
    pub witness: Option<StructuralWitness>,
    /// Vertices within scope whose children were compared.
    pub checked_parents: usize,
}

impl StructuralReport {
    pub fn asymmetric(&self) -> bool {
        self.witness.is_none()
    }
}

/// Decide whether a total window colouring of a tree admits a root-fixing
/// colour-preserving automorphism moving some vertex within the
/// verification scope.
///
/// Every automorphism of a tree window fixes the root and permutes sibling
/// subtrees, so such an automorphism exists exactly when two siblings below
/// a parent at depth less than the scope carry isomorphic coloured
/// subtrees. Subtree isomorphism codes are interned bottom-up from
/// (own colour, sorted child codes).
pub fn tree_structural_check(
    t: &BallTruncation,
    colours: &[u32],
) -> Result<StructuralReport, Error> {
    if !matches!(t.family(), Family::Tree(_)) {
        return Err(Error::InvalidBase {
            detail: "structural sibling checks need a tree window".into(),
        });
    }
    let n = t.len();
    if colours.len() != n {
        return Err(Error::BadColouringFile {
            detail: format!("expected {n} colours, found {}", colours.len()),
        });
    }
    let mut code = vec![0u64; n];
    let mut intern: BTreeMap<(u32, Vec<u64>), u64> = BTreeMap::new();
    // Children sit one level deeper, hence at larger indices; a reverse
    // sweep sees them before their parent.
    for v in (0..n).rev() {
        let child_codes: Vec<u64> = {
            let mut cs: Vec<u64> = t
                .neighbours(v)
                .iter()
                .copied()
                .filter(|&w| t.dist(w) == t.dist(v) + 1)
                .map(|w| code[w])
                .collect();
            cs.sort_unstable();
            cs
        };
        let next = intern.len() as u64;
        code[v] = *intern.entry((colours[v], child_codes)).or_insert(next);
    }
    let scope = t.verification_scope();
    let mut checked_parents = 0;
    let mut witness = None;
    'outer: for p in 0..n {
        if t.dist(p) >= scope {
            continue;
        }
        let mut children: Vec<usize> = t
            .neighbours(p)
            .iter()
            .copied()
            .filter(|&w| t.dist(w) == t.dist(p) + 1)
            .collect();
        if children.len() < 2 {
            continue;
        }
        checked_parents += 1;
        children.sort_by_key(|&w| (code[w], w));
        for pair in children.windows(2) {
            if code[pair[0]] == code[pair[1]] {
                let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                witness = Some(StructuralWitness {
                    parent: p,
                    child_a: a,
                    child_b: b,
                });
                break 'outer;
            }
        }
    }
    Ok(StructuralReport {
        witness,
        checked_parents,
    })
}

/// Binomial coefficient clamped at `bound`. The running product never
/// decreases, so clamping as soon as it crosses the bound is sound.
fn binomial_clamped(n: u64, k: u64, bound: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut prod: u128 = 1;
    for i in 1..=k.min(n - k) {
        if prod >= bound as u128 {
            return bound;
        }
        prod = prod * (n - k.min(n - k) + i) as u128 / i as u128;
    }
    prod.min(bound as u128) as u64
}

/// Number of sorted `c`-tuples over `a` code values: strictly increasing
/// when distinctness is demanded, non-decreasing otherwise.
fn tuple_count(a: u64, c: u64, distinct: bool, bound: u64) -> u64 {
    if c == 0 {
        return 1;
    }
    if distinct {
        binomial_clamped(a, c, bound)
    } else {
        binomial_clamped(a.saturating_add(c).saturating_sub(1), c, bound)
    }
}

/// Lexicographic unranking of the sorted `c`-tuple with the given rank over
/// values `lo..a`. Counts are clamped, which is harmless: the ranks that
/// reach here are small, and a clamped count only ever wins the comparison
/// that keeps the current component smallest.
fn unrank_tuple(mut rank: u64, a: u64, c: u64, distinct: bool, bound: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(c as usize);
    let mut lo = 0u64;
    for pos in 0..c {
        let rest = c - pos - 1;
        let mut v = lo;
        loop {
            let next_lo = if distinct { v + 1 } else { v };
            let with_v = tuple_count(a - next_lo, rest, distinct, bound);
            if rank < with_v {
                break;
            }
            rank -= with_v;
            v += 1;
            debug_assert!(v < a, "rank exceeds tuple space");
        }
        out.push(v);
        lo = if distinct { v + 1 } else { v };
    }
    out
}

const CODE_SPACE_BOUND: u64 = 1 << 40;

/// Colour the spheres at the chosen depths so that sibling subtrees below
/// every parent within the verification scope get pairwise distinct codes.
///
/// Only the chosen depths contribute a free colour bit; all other depths
/// are treated as uniform. Distinctness under that coarse view survives any
/// refinement, so whatever the rest of the window ends up carrying, the
/// final colouring still separates the siblings. Returns the assignments
/// for exactly the vertices at the chosen depths, or `NeedMoreBlocks` when
/// the code space is too small for the root's children.
pub(crate) fn structural_tree_colouring(
    t: &BallTruncation,
    depths: &BTreeSet<usize>,
) -> Result<Vec<(usize, u32)>, Error> {
    let Family::Tree(deg) = t.family() else {
        return Err(Error::InvalidBase {
            detail: "structural colourings need a tree window".into(),
        });
    };
    let radius = t.radius();
    debug_assert!(depths.iter().all(|&d| d >= 1 && d <= radius));
    let scope = t.verification_scope();
    let arity = deg as u64 - 1;

    // a[d] counts realizable subtree codes at depth d.
    let mut a = vec![0u64; radius + 2];
    a[radius + 1] = 1;
    for d in (1..=radius).rev() {
        let own: u64 = if depths.contains(&d) { 2 } else { 1 };
        let children = if d == radius { 0 } else { arity };
        let distinct = d + 1 <= scope;
        a[d] = own.saturating_mul(tuple_count(a[d + 1], children, distinct, CODE_SPACE_BOUND));
    }
    if radius == 0 || a[1] < deg as u64 {
        return Err(Error::NeedMoreBlocks);
    }

    let children_of = |v: usize| -> Vec<usize> {
        t.neighbours(v)
            .iter()
            .copied()
            .filter(|&w| t.dist(w) == t.dist(v) + 1)
            .collect()
    };

    let mut out = Vec::new();
    // (vertex, rank of the code its subtree must realize)
    let mut stack: Vec<(usize, u64)> = children_of(0)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i as u64))
        .collect();
    while let Some((v, rank)) = stack.pop() {
        let d = t.dist(v);
        let own_count: u64 = if depths.contains(&d) { 2 } else { 1 };
        if depths.contains(&d) {
            out.push((v, (rank % own_count) as u32));
        }
        let rest = rank / own_count;
        let kids = children_of(v);
        if kids.is_empty() {
            debug_assert_eq!(rest, 0);
            continue;
        }
        let parts = unrank_tuple(
            rest,
            a[d + 1],
            kids.len() as u64,
            d + 1 <= scope,
            CODE_SPACE_BOUND,
        );
        for (kid, part) in kids.into_iter().zip(parts) {
            stack.push((kid, part));
        }
    }
    out.sort_unstable();
    Ok(out)
}
