use std::collections::BTreeSet;

use crate::error::Error;
use crate::infinite::ball::BallTruncation;
use crate::infinite::extend::extendable_automorphisms;
use crate::infinite::interleave::{schedule_level, WindowColouring};
use crate::infinite::maps::coset_representative;
use crate::infinite::suborbit::suborbits;
use crate::infinite::tree_code::{tree_structural_check, StructuralWitness};
use crate::infinite::{Family, VertexName};
use crate::perm::Permutation;

/// How the element check was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationRoute {
    /// Every extendable window symmetry was enumerated and tested.
    Exhaustive,
    /// The symmetry group was too large to enumerate; the tree code
    /// criterion stood in for it.
    Structural,
    /// Both routes ran and were cross-checked against each other.
    Both,
}

/// Audit result for one serviced coset target.
#[derive(Debug, Clone)]
pub struct CosetCheck {
    pub k: usize,
    pub ok: bool,
    pub detail: Option<String>,
}

/// Outcome of verifying a coloured window.
///
/// The element side answers whether any extendable symmetry that moves a
/// vertex inside the verification scope preserves the colouring; the plan
/// side audits that the recorded construction is honest about what it
/// coloured and why.
#[derive(Debug, Clone)]
pub struct TruncationVerdict {
    pub violator: Option<Permutation>,
    pub checked_elements: usize,
    pub exempt_elements: usize,
    pub structural_witness: Option<StructuralWitness>,
    pub route: VerificationRoute,
    pub coset_checks: Vec<CosetCheck>,
    pub plan_issues: Vec<String>,
}

impl TruncationVerdict {
    /// No in-scope symmetry survives the colouring.
    pub fn asymmetric(&self) -> bool {
        self.violator.is_none() && self.structural_witness.is_none()
    }

    /// The recorded plan re-derives cleanly and matches the colours.
    pub fn plan_sound(&self) -> bool {
        self.plan_issues.is_empty() && self.coset_checks.iter().all(|c| c.ok)
    }
}

fn consistency(t: &BallTruncation, wc: &WindowColouring) -> Result<(), Error> {
    let bad = |detail: String| Error::BadColouringFile { detail };
    if wc.family != t.family().spec_string() {
        return Err(bad(format!(
            "family {:?} does not match the window family {:?}",
            wc.family,
            t.family().spec_string()
        )));
    }
    if wc.radius != t.radius() || wc.margin != t.margin() {
        return Err(bad(format!(
            "radius/margin {}/{} do not match the window {}/{}",
            wc.radius,
            wc.margin,
            t.radius(),
            t.margin()
        )));
    }
    if wc.colours.len() != t.len() {
        return Err(bad(format!(
            "{} colours for {} vertices",
            wc.colours.len(),
            t.len()
        )));
    }
    if wc.provenance.len() != t.len() {
        return Err(bad(format!(
            "{} provenance entries for {} vertices",
            wc.provenance.len(),
            t.len()
        )));
    }
    if wc.vertex_names.len() != t.len() {
        return Err(bad(format!(
            "{} vertex names for {} vertices",
            wc.vertex_names.len(),
            t.len()
        )));
    }
    for (i, name) in wc.vertex_names.iter().enumerate() {
        if *name != t.name(i).to_string() {
            return Err(bad(format!(
                "vertex {i} is named {:?} but the window calls it {:?}",
                name,
                t.name(i).to_string()
            )));
        }
    }
    if let Some(v) = wc.colours.iter().position(|&c| c > 1) {
        return Err(bad(format!("vertex {v} has colour {}, not 0 or 1", wc.colours[v])));
    }
    Ok(())
}

struct ElementCheck {
    violator: Option<Permutation>,
    checked: usize,
    exempt: usize,
}

fn check_elements(t: &BallTruncation, colours: &[u32], certified: &[Permutation]) -> ElementCheck {
    let scope = t.verification_scope();
    let n = t.len();
    let mut out = ElementCheck {
        violator: None,
        checked: 0,
        exempt: 0,
    };
    for g in certified {
        if g.is_identity() {
            continue;
        }
        let in_scope = (0..n).any(|v| t.dist(v) <= scope && g.image(v) != v);
        if !in_scope {
            out.exempt += 1;
            continue;
        }
        out.checked += 1;
        let preserving = (0..n).all(|v| colours[v] == colours[g.image(v)]);
        if preserving && out.violator.is_none() {
            out.violator = Some(g.clone());
        }
    }
    out
}

/// Claims each planned vertex for a provenance tag, reporting overlaps,
/// then audits tags, filler colours, and every coset record.
fn audit_plan(
    t: &BallTruncation,
    wc: &WindowColouring,
) -> (Vec<CosetCheck>, Vec<String>) {
    let mut issues = Vec::new();
    let mut checks = Vec::new();
    let n = t.len();
    let plan = &wc.plan;
    let mut owner: Vec<Option<String>> = vec![None; n];
    let mut claim = |v: usize, tag: String, issues: &mut Vec<String>| {
        if v >= n {
            issues.push(format!("plan references vertex {v}, outside the window"));
            return;
        }
        match &owner[v] {
            Some(prev) => issues.push(format!(
                "vertex {v} claimed by both {prev} and {tag}"
            )),
            None => owner[v] = Some(tag),
        }
    };
    for r in &plan.serviced {
        for &v in &r.zero_part {
            claim(v, format!("coset({}):zero", r.k), &mut issues);
        }
        for &v in &r.one_part {
            claim(v, format!("coset({}):one", r.k), &mut issues);
        }
    }
    for (&level, blocks) in &plan.towers {
        for block in blocks {
            for &v in block {
                claim(v, format!("tower({level})"), &mut issues);
            }
        }
    }
    for v in 0..n {
        let expected = owner[v].clone().unwrap_or_else(|| "filler".into());
        if wc.provenance[v] != expected {
            issues.push(format!(
                "vertex {v} has provenance {:?}, expected {expected:?}",
                wc.provenance[v]
            ));
        }
        if owner[v].is_none() && wc.colours[v] != 0 {
            issues.push(format!("filler vertex {v} is coloured {}", wc.colours[v]));
        }
    }

    let base: BTreeSet<usize> = plan.base.iter().copied().collect();
    if base.is_empty() {
        issues.push("plan has an empty base".into());
        return (checks, issues);
    }
    let s = match suborbits(t, &base) {
        Ok(s) => s,
        Err(e) => {
            issues.push(format!("plan base does not decompose: {e}"));
            return (checks, issues);
        }
    };
    for (pos, r) in plan.serviced.iter().enumerate() {
        let mut fail: Option<String> = None;
        let note = |msg: String, fail: &mut Option<String>| {
            if fail.is_none() {
                *fail = Some(msg);
            }
        };
        if r.k != pos + 1 {
            note(format!("record {pos} carries turn number {}", r.k), &mut fail);
        }
        if schedule_level(r.k) != r.tower_n {
            note(
                format!(
                    "turn {} should feed tower level {}, not {}",
                    r.k,
                    schedule_level(r.k),
                    r.tower_n
                ),
                &mut fail,
            );
        }
        let target: Option<BTreeSet<usize>> = r
            .target
            .iter()
            .map(|name| {
                VertexName::parse(t.family(), name)
                    .ok()
                    .and_then(|v| t.index_of(&v))
            })
            .collect();
        let target = match target {
            Some(set) if !set.is_empty() => set,
            _ => {
                note(format!("target {:?} does not name window vertices", r.target), &mut fail);
                checks.push(CosetCheck {
                    k: r.k,
                    ok: false,
                    detail: fail,
                });
                continue;
            }
        };
        match coset_representative(t, &base, &target) {
            Err(e) => note(format!("representative failed: {e}"), &mut fail),
            Ok(rep) => {
                if rep.descriptor() != r.rep {
                    note(
                        format!(
                            "representative {:?} differs from recorded {:?}",
                            rep.descriptor(),
                            r.rep
                        ),
                        &mut fail,
                    );
                }
                match s.suborbit(r.suborbit) {
                    None => note(format!("suborbit {} does not exist", r.suborbit), &mut fail),
                    Some(orbit) => match rep.image_of_set(orbit) {
                        None => note(
                            format!("suborbit {} leaves the window", r.suborbit),
                            &mut fail,
                        ),
                        Some(img) => {
                            if img == *orbit {
                                note(
                                    format!("suborbit {} is fixed setwise, no coset signal", r.suborbit),
                                    &mut fail,
                                );
                            }
                            let zero: Vec<usize> = orbit.iter().copied().collect();
                            let one: Vec<usize> = img.difference(orbit).copied().collect();
                            if zero != r.zero_part {
                                note("recorded zero part differs from the suborbit".into(), &mut fail);
                            }
                            if one != r.one_part {
                                note("recorded one part differs from the image remainder".into(), &mut fail);
                            }
                            if let Some(&v) = r.zero_part.iter().find(|&&v| wc.colours[v] != 0) {
                                note(format!("zero part vertex {v} is not coloured 0"), &mut fail);
                            }
                            if let Some(&v) = r.one_part.iter().find(|&&v| wc.colours[v] != 1) {
                                note(format!("one part vertex {v} is not coloured 1"), &mut fail);
                            }
                        }
                    },
                }
            }
        }
        match plan.towers.get(&r.tower_n) {
            Some(blocks) if blocks.contains(&r.tower_block) => {}
            _ => note(
                format!("reserved block for turn {} missing from tower {}", r.k, r.tower_n),
                &mut fail,
            ),
        }
        checks.push(CosetCheck {
            k: r.k,
            ok: fail.is_none(),
            detail: fail,
        });
    }
    (checks, issues)
}

/// Verify a coloured window against the file that claims to colour it.
///
/// The element check enumerates the window symmetries that extend `margin`
/// layers beyond the window and tests every one that moves a vertex within
/// the verification scope. On trees the sibling-code criterion runs as
/// well; when enumeration would exceed `cap` it takes over entirely, which
/// is the only route on windows whose symmetry count is out of reach.
pub fn verify_truncation(
    t: &BallTruncation,
    wc: &WindowColouring,
    cap: usize,
) -> Result<TruncationVerdict, Error> {
    consistency(t, wc)?;
    let is_tree = matches!(t.family(), Family::Tree(_));
    let structural = if is_tree {
        Some(tree_structural_check(t, &wc.colours)?)
    } else {
        None
    };
    let (route, element) = match extendable_automorphisms(t, cap) {
        Ok(certified) => {
            let element = check_elements(t, &wc.colours, &certified);
            let route = if is_tree {
                VerificationRoute::Both
            } else {
                VerificationRoute::Exhaustive
            };
            (route, element)
        }
        Err(Error::CapExceeded { .. }) if is_tree => (
            VerificationRoute::Structural,
            ElementCheck {
                violator: None,
                checked: 0,
                exempt: 0,
            },
        ),
        Err(e) => return Err(e),
    };
    if route == VerificationRoute::Both {
        let witness = structural.as_ref().unwrap().witness.is_some();
        assert_eq!(
            element.violator.is_some(),
            witness,
            "exhaustive and structural tree checks disagree"
        );
    }
    let (coset_checks, plan_issues) = audit_plan(t, wc);
    Ok(TruncationVerdict {
        violator: element.violator,
        checked_elements: element.checked,
        exempt_elements: element.exempt,
        structural_witness: structural.and_then(|rep| rep.witness),
        route,
        coset_checks,
        plan_issues,
    })
}
