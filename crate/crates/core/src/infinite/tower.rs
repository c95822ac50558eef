use std::collections::BTreeSet;

use crate::error::Error;
use crate::infinite::stabilizer::StabilizerRestriction;
use crate::infinite::suborbit::SuborbitDecomposition;
use crate::perm::Permutation;

/// A nested sequence of blocks cut from consecutive runs of suborbits.
///
/// Block i is the union of the suborbits strictly after breakpoint i and up
/// to breakpoint i + 1. The defining property, guaranteed by construction,
/// is that any residual element moving some block also moves every later
/// block, so a blockwise colouring may stop refining as soon as each element
/// is broken once; the property survives taking subsequences of the blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTower {
    n: usize,
    breakpoints: Vec<usize>,
    blocks: Vec<BTreeSet<usize>>,
}

impl BlockTower {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Suborbit indices bounding the blocks; one longer than the block list.
    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn union_of(s: &SuborbitDecomposition, lo: usize, hi: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for j in lo + 1..=hi {
        out.extend(s.suborbit(j).unwrap().iter().copied());
    }
    out
}

fn moves_set(e: &Permutation, set: &BTreeSet<usize>) -> bool {
    set.iter().any(|&v| e.image(v) != v)
}

/// Build the maximal block tower for level `r.n()` over the suborbits.
///
/// The first block is the n-th suborbit alone. Each extension scans forward
/// for the shortest run of further suborbits that every mover of the last
/// block moves; when no residual element moves the last block at all, a
/// single suborbit suffices. In the families at hand an element moving one
/// sphere always moves the next, so every block degenerates to one
/// suborbit, but nothing in the contract promises that, and the search is
/// what makes the nesting guarantee unconditional.
pub fn build_block_tower(
    r: &StabilizerRestriction,
    s: &SuborbitDecomposition,
) -> Result<BlockTower, Error> {
    let n = r.n();
    if n > s.count() {
        return Err(Error::RadiusExhausted {
            detail: format!(
                "tower level {n} needs suborbit {n} but only {} fit in the window",
                s.count()
            ),
        });
    }
    let non_id: Vec<&Permutation> = r.elements().iter().filter(|e| !e.is_identity()).collect();
    let mut breakpoints = vec![n - 1, n];
    let mut blocks = vec![union_of(s, n - 1, n)];
    loop {
        let kcur = *breakpoints.last().unwrap();
        if kcur >= s.count() {
            break;
        }
        let movers: Vec<&&Permutation> = non_id
            .iter()
            .filter(|e| moves_set(e, blocks.last().unwrap()))
            .collect();
        let next = (kcur + 1..=s.count()).find_map(|cap| {
            let candidate = union_of(s, kcur, cap);
            if movers.iter().all(|e| moves_set(e, &candidate)) {
                Some((cap, candidate))
            } else {
                None
            }
        });
        match next {
            Some((cap, candidate)) => {
                breakpoints.push(cap);
                blocks.push(candidate);
            }
            None => break,
        }
    }
    Ok(BlockTower {
        n,
        breakpoints,
        blocks,
    })
}

/// Single-sphere tower for rooted trees, usable when the residual group is
/// too large to enumerate. A root-fixing automorphism moving a vertex moves
/// all of its children, which lie one sphere further out, so consecutive
/// spheres nest unconditionally.
pub(crate) fn structural_single_sphere_tower(
    s: &SuborbitDecomposition,
    n: usize,
) -> Result<BlockTower, Error> {
    if n == 0 || n > s.count() {
        return Err(Error::RadiusExhausted {
            detail: format!(
                "tower level {n} needs suborbit {n} but only {} fit in the window",
                s.count()
            ),
        });
    }
    let breakpoints: Vec<usize> = (n - 1..=s.count()).collect();
    let blocks: Vec<BTreeSet<usize>> = (n..=s.count())
        .map(|j| s.suborbit(j).unwrap().clone())
        .collect();
    Ok(BlockTower {
        n,
        breakpoints,
        blocks,
    })
}
