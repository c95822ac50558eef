use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::colouring::blockwise_search;
use crate::error::Error;
use crate::infinite::ball::BallTruncation;
use crate::infinite::extend::extendable_automorphisms;
use crate::infinite::maps::{cell_values, coset_representative, d4_apply, line_values};
use crate::infinite::stabilizer::StabilizerRestriction;
use crate::infinite::suborbit::{suborbits, SuborbitDecomposition};
use crate::infinite::tower::{build_block_tower, structural_single_sphere_tower, BlockTower};
use crate::infinite::tree_code::structural_tree_colouring;
use crate::infinite::Family;
use crate::perm::Permutation;

/// How many coset targets the construction must service.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetBudget {
    /// Service targets greedily and stop at the first that cannot be
    /// placed; fails only when not even one target fits.
    Auto,
    /// Service exactly this many targets or fail.
    Exactly(usize),
}

/// One serviced coset target: the window got a 0-coloured suborbit, the
/// 1-coloured remainder of its image, and a block reserved for the tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRecord {
    pub k: usize,
    pub target: Vec<String>,
    pub rep: String,
    pub suborbit: usize,
    pub zero_part: Vec<usize>,
    pub one_part: Vec<usize>,
    pub tower_n: usize,
    pub tower_block: Vec<usize>,
}

/// Everything needed to re-derive and audit the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavePlan {
    pub base: Vec<usize>,
    pub serviced: Vec<CosetRecord>,
    /// Blocks coloured for each tower level, reservation order, including
    /// blocks pulled in later when a level needed more room.
    pub towers: BTreeMap<usize, Vec<Vec<usize>>>,
    /// Why the greedy budget stopped, when it did.
    pub stopped: Option<String>,
}

/// A complete 2-coloured window with its construction plan; the on-disk
/// format of the colour and verify subcommands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowColouring {
    pub family: String,
    pub radius: usize,
    pub margin: usize,
    pub vertex_names: Vec<String>,
    pub colours: Vec<u32>,
    pub provenance: Vec<String>,
    pub plan: InterleavePlan,
}

impl WindowColouring {
    /// Rebuild the window this colouring describes.
    pub fn truncation(&self) -> Result<BallTruncation, Error> {
        let family = Family::parse(&self.family)?;
        BallTruncation::build(family, self.radius, self.margin)
    }
}

#[derive(Debug, Clone)]
pub struct InterleaveOutcome {
    pub window: WindowColouring,
    pub serviced: usize,
    pub stopped: Option<String>,
}

/// Tower level for the k-th serviced target (1-based): the diagonal
/// schedule 1, 1, 2, 1, 2, 3, ... revisits every level infinitely often,
/// which is what lets finitely many turns feed arbitrarily many levels.
pub(crate) fn schedule_level(k: usize) -> usize {
    let mut block = 1usize;
    let mut cum = 0usize;
    loop {
        if k <= cum + block {
            return k - cum;
        }
        cum += block;
        block += 1;
    }
}

fn names_of(t: &BallTruncation, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter().map(|&v| t.name(v).to_string()).collect()
}

/// Coset targets in servicing order: nearest to the base first. Singleton
/// bases target every inner-ball vertex; larger bases target their images
/// under the family isometries, deduplicated.
fn enumerate_targets(t: &BallTruncation, base: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let inner = t.inner_radius();
    let dw = t.distances_from(base);
    if base.len() == 1 {
        let b = *base.first().unwrap();
        let mut vs: Vec<usize> = (0..t.len())
            .filter(|&v| v != b && t.dist(v) <= inner)
            .collect();
        vs.sort_by_key(|&v| (dw[v], v));
        return vs.into_iter().map(|v| BTreeSet::from([v])).collect();
    }
    let span = 2 * t.radius() as i64 + 1;
    let mut images: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let in_inner = |set: &BTreeSet<usize>| set.iter().all(|&v| t.dist(v) <= inner);
    match t.family() {
        Family::Path => {
            let xs = line_values(t, base);
            for tr in -span..=span {
                let img: Option<BTreeSet<usize>> = xs
                    .iter()
                    .map(|&x| t.index_of(&crate::infinite::VertexName::Line(x + tr)))
                    .collect();
                if let Some(img) = img {
                    if in_inner(&img) {
                        images.insert(img);
                    }
                }
            }
            for c in -span..=span {
                let img: Option<BTreeSet<usize>> = xs
                    .iter()
                    .map(|&x| t.index_of(&crate::infinite::VertexName::Line(c - x)))
                    .collect();
                if let Some(img) = img {
                    if in_inner(&img) {
                        images.insert(img);
                    }
                }
            }
        }
        Family::Grid2 => {
            let xs = cell_values(t, base);
            for rot in 0..8 {
                for a in -span..=span {
                    for b in -span..=span {
                        let img: Option<BTreeSet<usize>> = xs
                            .iter()
                            .map(|&(x, y)| {
                                let (rx, ry) = d4_apply(rot, x, y);
                                t.index_of(&crate::infinite::VertexName::Cell(rx + a, ry + b))
                            })
                            .collect();
                        if let Some(img) = img {
                            if in_inner(&img) {
                                images.insert(img);
                            }
                        }
                    }
                }
            }
        }
        Family::Tree(_) => unreachable!("tree bases are singletons"),
    }
    images.remove(base);
    let mut out: Vec<BTreeSet<usize>> = images.into_iter().collect();
    out.sort_by_key(|set| {
        let far = set.iter().map(|&v| dw[v]).max().unwrap_or(usize::MAX);
        (far, set.iter().copied().collect::<Vec<_>>())
    });
    out
}

struct TowerState {
    source: BlockTower,
    /// Non-identity residual elements for the blockwise search; None on
    /// trees, which are coloured structurally.
    residual: Option<Vec<Permutation>>,
    used_blocks: Vec<BTreeSet<usize>>,
}

struct Builder<'a> {
    t: &'a BallTruncation,
    s: &'a SuborbitDecomposition,
    certified: Option<Vec<Permutation>>,
    colours: Vec<Option<u32>>,
    provenance: Vec<Option<String>>,
    reserved: Vec<bool>,
    towers: BTreeMap<usize, TowerState>,
    records: Vec<CosetRecord>,
}

impl Builder<'_> {
    fn is_free(&self, v: usize) -> bool {
        self.colours[v].is_none() && !self.reserved[v]
    }

    fn all_free(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&v| self.is_free(v))
    }

    fn ensure_tower(&mut self, n: usize) -> Result<(), String> {
        if self.towers.contains_key(&n) {
            return Ok(());
        }
        let state = if matches!(self.t.family(), Family::Tree(_)) {
            let source = structural_single_sphere_tower(self.s, n)
                .map_err(|e| format!("tower level {n}: {e}"))?;
            TowerState {
                source,
                residual: None,
                used_blocks: Vec::new(),
            }
        } else {
            let certified = self.certified.as_ref().expect("certified set precomputed");
            let r = StabilizerRestriction::from_certified(certified, self.s, n)
                .map_err(|e| format!("tower level {n}: {e}"))?;
            let source =
                build_block_tower(&r, self.s).map_err(|e| format!("tower level {n}: {e}"))?;
            let residual: Vec<Permutation> = r
                .elements()
                .iter()
                .filter(|e| !e.is_identity())
                .cloned()
                .collect();
            TowerState {
                source,
                residual: Some(residual),
                used_blocks: Vec::new(),
            }
        };
        self.towers.insert(n, state);
        Ok(())
    }

    fn service(&mut self, k: usize, target: &BTreeSet<usize>) -> Result<(), String> {
        let rep = coset_representative(self.t, self.s.base(), target)
            .map_err(|e| format!("turn {k}: {e}"))?;
        let mut pick = None;
        for i in 1..=self.s.count() {
            let orbit = self.s.suborbit(i).unwrap();
            let Some(img) = rep.image_of_set(orbit) else {
                continue;
            };
            if img == *orbit {
                continue;
            }
            if self.all_free(orbit) && img.iter().all(|&v| orbit.contains(&v) || self.is_free(v)) {
                pick = Some((i, img));
                break;
            }
        }
        let Some((i, img)) = pick else {
            return Err(format!(
                "turn {k}: no suborbit has a free, fully visible, distinguishing image"
            ));
        };
        let n = schedule_level(k);
        self.ensure_tower(n)?;
        let orbit = self.s.suborbit(i).unwrap().clone();
        let zone: BTreeSet<usize> = orbit.union(&img).copied().collect();
        let tower = self.towers.get(&n).unwrap();
        let block = tower
            .source
            .blocks()
            .iter()
            .find(|b| self.all_free(b) && b.is_disjoint(&zone))
            .cloned();
        let Some(block) = block else {
            return Err(format!("turn {k}: tower level {n} has no free block left"));
        };
        for &v in &orbit {
            self.colours[v] = Some(0);
            self.provenance[v] = Some(format!("coset({k}):zero"));
        }
        for &v in img.difference(&orbit) {
            self.colours[v] = Some(1);
            self.provenance[v] = Some(format!("coset({k}):one"));
        }
        for &v in &block {
            self.reserved[v] = true;
        }
        self.records.push(CosetRecord {
            k,
            target: names_of(self.t, target),
            rep: rep.descriptor().to_string(),
            suborbit: i,
            zero_part: orbit.iter().copied().collect(),
            one_part: img.difference(&orbit).copied().collect(),
            tower_n: n,
            tower_block: block.iter().copied().collect(),
        });
        self.towers.get_mut(&n).unwrap().used_blocks.push(block);
        Ok(())
    }

    fn sphere_depth(&self, block: &BTreeSet<usize>) -> usize {
        let d = self.t.dist(*block.first().unwrap());
        debug_assert!(block.iter().all(|&v| self.t.dist(v) == d));
        d
    }

    fn colour_tower(&mut self, n: usize) -> Result<(), Error> {
        let mut blocks = self.towers[&n].used_blocks.clone();
        loop {
            let attempt: Result<Vec<(usize, u32)>, Error> = if self.towers[&n].residual.is_none() {
                let depths: BTreeSet<usize> = blocks.iter().map(|b| self.sphere_depth(b)).collect();
                structural_tree_colouring(self.t, &depths)
            } else {
                let union: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
                let targets: Vec<Permutation> = self.towers[&n]
                    .residual
                    .as_ref()
                    .unwrap()
                    .iter()
                    .filter(|e| union.iter().any(|&v| e.image(v) != v))
                    .cloned()
                    .collect();
                let lists: Vec<Vec<usize>> =
                    blocks.iter().map(|b| b.iter().copied().collect()).collect();
                blockwise_search(&targets, &lists).ok_or(Error::NeedMoreBlocks)
            };
            match attempt {
                Ok(assignments) => {
                    for (v, c) in assignments {
                        debug_assert!(self.colours[v].is_none());
                        self.colours[v] = Some(c);
                        self.provenance[v] = Some(format!("tower({n})"));
                    }
                    self.towers.get_mut(&n).unwrap().used_blocks = blocks;
                    return Ok(());
                }
                Err(Error::NeedMoreBlocks) => {
                    let extension = self.towers[&n]
                        .source
                        .blocks()
                        .iter()
                        .find(|b| self.all_free(b) && !blocks.contains(b))
                        .cloned();
                    match extension {
                        Some(b) => {
                            for &v in &b {
                                self.reserved[v] = true;
                            }
                            blocks.push(b);
                        }
                        None => {
                            return Err(Error::RadiusExhausted {
                                detail: format!(
                                    "tower level {n} ran out of blocks before breaking its \
                                     residual symmetries"
                                ),
                            })
                        }
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
}

/// Build a 2-coloured window by interleaving coset gadgets with tower
/// blocks.
///
/// Each serviced target k gets a gadget: a free suborbit whose image under
/// the chosen representative is fully visible and different from itself,
/// coloured 0 on the suborbit and 1 on the rest of the image. The same turn
/// reserves one free block for tower level `schedule_level(k)`. After the
/// turns, each tower level colours its blocks so that every residual
/// symmetry of that level acting on them is broken: structurally on trees,
/// by blockwise search elsewhere. Uncommitted vertices get colour 0.
pub fn interleave_construct(
    t: &BallTruncation,
    base: &BTreeSet<usize>,
    budget: CosetBudget,
    cap: usize,
) -> Result<InterleaveOutcome, Error> {
    let s = suborbits(t, base)?;
    if matches!(t.family(), Family::Tree(_)) && *base.first().unwrap() != 0 {
        return Err(Error::InvalidBase {
            detail: "tree window colourings need the root as base".into(),
        });
    }
    let certified = match t.family() {
        Family::Tree(_) => None,
        _ => Some(extendable_automorphisms(t, cap)?),
    };
    let targets = enumerate_targets(t, base);
    if let CosetBudget::Exactly(want) = budget {
        if targets.len() < want {
            return Err(Error::RadiusExhausted {
                detail: format!(
                    "{want} coset targets requested but only {} fit in the inner ball",
                    targets.len()
                ),
            });
        }
    }
    let n = t.len();
    let mut b = Builder {
        t,
        s: &s,
        certified,
        colours: vec![None; n],
        provenance: vec![None; n],
        reserved: vec![false; n],
        towers: BTreeMap::new(),
        records: Vec::new(),
    };
    let mut stopped = None;
    for (idx, target) in targets.iter().enumerate() {
        let k = idx + 1;
        if let CosetBudget::Exactly(want) = budget {
            if k > want {
                break;
            }
        }
        match b.service(k, target) {
            Ok(()) => {}
            Err(reason) => match budget {
                CosetBudget::Auto => {
                    stopped = Some(reason);
                    break;
                }
                CosetBudget::Exactly(_) => {
                    return Err(Error::RadiusExhausted { detail: reason })
                }
            },
        }
    }
    if b.records.is_empty() {
        return Err(Error::RadiusExhausted {
            detail: stopped.unwrap_or_else(|| "no coset target fits in the window".into()),
        });
    }
    let levels: Vec<usize> = b.towers.keys().copied().collect();
    for nlevel in levels {
        if !b.towers[&nlevel].used_blocks.is_empty() {
            b.colour_tower(nlevel)?;
        }
    }
    let towers_out: BTreeMap<usize, Vec<Vec<usize>>> = b
        .towers
        .iter()
        .filter(|(_, st)| !st.used_blocks.is_empty())
        .map(|(&nlevel, st)| {
            (
                nlevel,
                st.used_blocks
                    .iter()
                    .map(|blk| blk.iter().copied().collect())
                    .collect(),
            )
        })
        .collect();
    let colours: Vec<u32> = b.colours.iter().map(|c| c.unwrap_or(0)).collect();
    let provenance: Vec<String> = b
        .provenance
        .iter()
        .map(|p| p.clone().unwrap_or_else(|| "filler".into()))
        .collect();
    let serviced = b.records.len();
    let window = WindowColouring {
        family: t.family().spec_string(),
        radius: t.radius(),
        margin: t.margin(),
        vertex_names: t.names().iter().map(|v| v.to_string()).collect(),
        colours,
        provenance,
        plan: InterleavePlan {
            base: base.iter().copied().collect(),
            serviced: b.records,
            towers: towers_out,
            stopped: stopped.clone(),
        },
    };
    Ok(InterleaveOutcome {
        window,
        serviced,
        stopped,
    })
}
