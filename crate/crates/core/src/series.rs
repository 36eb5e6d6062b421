//! Upper and lower central series, hypercenter and nilpotent residual.

use serde::Serialize;

use crate::error::Result;
use crate::group::{
    center, commutator_subgroup, generating_set, preimage, quotient, GroupTable, Subgroup,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascending,
    Descending,
}

/// A central series iterated until two consecutive terms agree.
///
/// The repeated term is stored once, so consecutive terms are strictly
/// nested and the last term is the stable one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralSeries {
    pub direction: Direction,
    pub terms: Vec<Subgroup>,
    pub stabilized: bool,
}

impl CentralSeries {
    /// Number of proper steps taken before the series became stable.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn stable_term(&self) -> &Subgroup {
        self.terms.last().expect("a series has at least one term")
    }

    /// `ζ_i(G)` for an ascending series (`ζ_0 = 1`), `γ_i(G)` for a descending
    /// one (`γ_1 = G`). Indices past the end return the stable term.
    pub fn term(&self, index: usize) -> &Subgroup {
        let i = match self.direction {
            Direction::Ascending => index,
            Direction::Descending => {
                assert!(index >= 1, "the lower central series starts at γ_1");
                index - 1
            }
        };
        &self.terms[i.min(self.terms.len() - 1)]
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Subgroup::order).collect()
    }
}

fn iterate(
    direction: Direction,
    first: Subgroup,
    mut step: impl FnMut(&Subgroup) -> Subgroup,
) -> CentralSeries {
    // A chain of distinct nested subgroups has at most `order + 1` terms; a
    // corrupted table can make the step non-monotone, hence the guard.
    let limit = first.parent_order() + 1;
    let mut terms = vec![first];
    let mut stabilized = false;
    while terms.len() <= limit {
        let next = step(terms.last().unwrap());
        if &next == terms.last().unwrap() {
            stabilized = true;
            break;
        }
        terms.push(next);
    }
    CentralSeries {
        direction,
        terms,
        stabilized,
    }
}

/// Next upper term by the commutator criterion:
/// `{g : [g, x] ∈ current for all x}`.
///
/// The `x` with `[g, x] ∈ current` form a subgroup, so testing a generating
/// set of `G` is enough.
pub(crate) fn next_upper_term(group: &GroupTable, gens: &[usize], current: &Subgroup) -> Subgroup {
    let mask = group
        .elements()
        .map(|g| {
            gens.iter()
                .all(|&x| current.contains(group.commutator(g, x)))
        })
        .collect();
    Subgroup::from_mask(mask)
}

pub fn upper_central_series(group: &GroupTable) -> CentralSeries {
    let gens = generating_set(group);
    iterate(Direction::Ascending, group.trivial(), |z| {
        next_upper_term(group, &gens, z)
    })
}

/// Upper central series by the definition: quotient by the current term,
/// take the center, pull it back. Much slower than
/// [`upper_central_series`]; kept as an independent cross-check.
///
/// Fails only if some term is not normal, which cannot happen on a valid
/// table.
pub fn upper_central_series_by_quotients(group: &GroupTable) -> Result<CentralSeries> {
    let mut failure = None;
    let series = iterate(Direction::Ascending, group.trivial(), |z| {
        match quotient(group, z) {
            Ok(map) => preimage(&map, &center(map.target())),
            Err(e) => {
                failure.get_or_insert(e);
                z.clone()
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(series),
    }
}

pub fn lower_central_series(group: &GroupTable) -> CentralSeries {
    let whole = group.whole();
    iterate(Direction::Descending, group.whole(), |g| {
        commutator_subgroup(group, g, &whole)
    })
}

pub fn hypercenter(group: &GroupTable) -> Subgroup {
    upper_central_series(group).stable_term().clone()
}

pub fn nilpotent_residual(group: &GroupTable) -> Subgroup {
    lower_central_series(group).stable_term().clone()
}

pub fn is_nilpotent(group: &GroupTable) -> bool {
    nilpotent_residual(group).is_trivial()
}

/// Both series of a group, summarized.
#[derive(Debug, Clone)]
pub struct NilpotencyProfile {
    pub order: usize,
    pub upper: CentralSeries,
    pub lower: CentralSeries,
    /// Length of the upper central series.
    pub zl: usize,
    pub nilpotent: bool,
    /// Nilpotency class, present iff the group is nilpotent.
    pub class: Option<usize>,
}

impl NilpotencyProfile {
    pub fn hypercenter(&self) -> &Subgroup {
        self.upper.stable_term()
    }

    pub fn residual(&self) -> &Subgroup {
        self.lower.stable_term()
    }
}

pub fn nilpotency_profile(group: &GroupTable) -> NilpotencyProfile {
    let upper = upper_central_series(group);
    let lower = lower_central_series(group);
    let nilpotent = upper.stable_term().is_whole();
    let zl = upper.length();
    NilpotencyProfile {
        order: group.order(),
        zl,
        nilpotent,
        class: nilpotent.then_some(zl),
        upper,
        lower,
    }
}
