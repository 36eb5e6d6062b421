//! Finite ℤG-modules: a finite abelian group `A = Z_{d₁} × … × Z_{d_r}`
//! acted on from the right by integer matrices.
//!
//! A tuple `a` maps to `a·M` (row vector times matrix), coordinate `j`
//! reduced mod `d_j`. The acting group is the closure of the generator maps
//! inside `Aut(A)`.
//!
//! The upper module-central series climbs by `A_{i+1} = {a : a(g−1) ∈ A_i}`
//! and stops at the hypercenter `ζ(A)`. The augmentation series descends by
//! `B_{k+1} = ⟨B_k(g−1)⟩` and its stable term is the candidate for the
//! largest hypereccentric submodule `E(A)`. `A` has the Z-decomposition when
//! `A = ζ(A) ⊕ E(A)`.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{Caps, GroupTable};
use crate::perm::{close_permutation_generators, Permutation};
use crate::series::is_nilpotent;
use crate::theorems::CheckReport;

#[derive(Debug, Clone)]
pub struct FiniteModule {
    invariants: Vec<u64>,
    action: Vec<Vec<Vec<i64>>>,
    /// Generator maps as permutations of element indices.
    maps: Vec<Permutation>,
    acting: GroupTable,
    strides: Vec<usize>,
    order: usize,
    label: String,
}

/// A submodule, as a sorted list of element indices.
#[derive(Debug, Clone)]
pub struct Submodule {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Submodule {}

impl std::hash::Hash for Submodule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Submodule {
    fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Submodule { members, mask }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn intersection(&self, other: &Submodule) -> Submodule {
        Submodule::from_mask(
            self.mask
                .iter()
                .zip(&other.mask)
                .map(|(&a, &b)| a && b)
                .collect(),
        )
    }
}

/// Validates the action and closes the acting group.
///
/// Each matrix must be well defined on `A` (`d_i·M[i][j] ≡ 0 mod d_j`) and
/// bijective; both are checked by scanning. `|A|` is capped by
/// `caps.max_module_order`, the acting group by `caps.max_order`.
pub fn build_module(
    invariants: &[u64],
    action: &[Vec<Vec<i64>>],
    caps: &Caps,
) -> Result<FiniteModule> {
    if let Some(d) = invariants.iter().find(|&&d| d < 2) {
        return Err(Error::input(format!(
            "cyclic factor orders must be >= 2, got {d}"
        )));
    }
    let mut order: usize = 1;
    for &d in invariants {
        order = order
            .checked_mul(d as usize)
            .filter(|&n| n <= caps.max_module_order)
            .ok_or_else(|| {
                Error::resource(
                    format!("module with invariants {invariants:?}"),
                    caps.max_module_order,
                )
            })?;
    }
    let r = invariants.len();
    let mut strides = vec![1usize; r];
    for i in (0..r.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * invariants[i + 1] as usize;
    }
    let mut module = FiniteModule {
        invariants: invariants.to_vec(),
        action: action.to_vec(),
        maps: Vec::new(),
        acting: close_permutation_generators(1, &[], 1)?,
        strides,
        order,
        label: format!("module{invariants:?}"),
    };
    for (k, matrix) in action.iter().enumerate() {
        let map = element_map(&module, matrix, k)?;
        module.maps.push(map);
    }
    module.acting = close_permutation_generators(order, &module.maps, caps.max_order)?
        .with_label(format!("acting group of module{invariants:?}"));
    Ok(module)
}

/// The permutation of element indices induced by `matrix`, after checking
/// it is well defined and bijective. `k` only labels error messages.
fn element_map(module: &FiniteModule, matrix: &[Vec<i64>], k: usize) -> Result<Permutation> {
    let invariants = &module.invariants;
    let r = invariants.len();
    if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
        return Err(Error::input(format!("matrix {k} is not {r}×{r}")));
    }
    for i in 0..r {
        for j in 0..r {
            let d_i = invariants[i] as i128;
            let d_j = invariants[j] as i128;
            if (d_i * matrix[i][j] as i128).rem_euclid(d_j) != 0 {
                return Err(Error::input(format!(
                    "matrix {k} is not well defined: entry ({i},{j}) = {} times {} is not 0 mod {}",
                    matrix[i][j], invariants[i], invariants[j]
                )));
            }
        }
    }
    let map: Permutation = (0..module.order)
        .map(|x| module.apply_matrix(matrix, x) as u32)
        .collect();
    let mut hit = vec![false; module.order];
    for &y in &map {
        if std::mem::replace(&mut hit[y as usize], true) {
            return Err(Error::input(format!(
                "matrix {k} {matrix:?} is not an automorphism (not bijective)"
            )));
        }
    }
    Ok(map)
}

impl FiniteModule {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn action(&self) -> &[Vec<Vec<i64>>] {
        &self.action
    }

    pub fn acting_group(&self) -> &GroupTable {
        &self.acting
    }

    pub fn generator_count(&self) -> usize {
        self.maps.len()
    }

    pub fn coordinates(&self, x: usize) -> Vec<u64> {
        self.invariants
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (x / s) as u64 % d)
            .collect()
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.invariants)
            .zip(&self.strides)
            .map(|((&c, &d), &s)| (c % d) as usize * s)
            .sum()
    }

    fn apply_matrix(&self, matrix: &[Vec<i64>], x: usize) -> usize {
        let a = self.coordinates(x);
        let image: Vec<u64> = (0..a.len())
            .map(|j| {
                let d = self.invariants[j] as i128;
                let v: i128 = (0..a.len())
                    .map(|i| a[i] as i128 * matrix[i][j] as i128)
                    .sum();
                v.rem_euclid(d) as u64
            })
            .collect();
        self.index_of(&image)
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.invariants
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| {
                let d = d as usize;
                ((x / s % d + y / s % d) % d) * s
            })
            .sum()
    }

    pub fn neg(&self, x: usize) -> usize {
        self.invariants
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| {
                let d = d as usize;
                ((d - x / s % d) % d) * s
            })
            .sum()
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// `x` acted on by generator `g`.
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.maps[g][x] as usize
    }

    /// `x(g − 1)`
    pub fn difference(&self, x: usize, g: usize) -> usize {
        self.sub(self.act(x, g), x)
    }

    pub fn whole(&self) -> Submodule {
        Submodule::from_mask(vec![true; self.order])
    }

    pub fn zero_submodule(&self) -> Submodule {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        Submodule::from_mask(mask)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label,
            "invariants": self.invariants,
            "action": self.action,
            "order": self.order,
            "acting_order": self.acting.order(),
        })
    }
}

/// Incremental submodule closure: an additive span of generators that is
/// closed under the action once every generator's images are in it.
struct SubmoduleBuilder<'m> {
    module: &'m FiniteModule,
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl<'m> SubmoduleBuilder<'m> {
    fn new(module: &'m FiniteModule) -> Self {
        let mut mask = vec![false; module.order()];
        mask[0] = true;
        SubmoduleBuilder {
            module,
            mask,
            members: vec![0],
        }
    }

    fn from_submodule(module: &'m FiniteModule, sub: &Submodule) -> Self {
        SubmoduleBuilder {
            module,
            mask: sub.mask.clone(),
            members: sub.members.clone(),
        }
    }

    /// Adds `x` to the additive span: the new span is the union of the
    /// cosets `S + j·x`.
    fn add_to_span(&mut self, x: usize) {
        let old = self.members.len();
        let mut shift = x;
        while !self.mask[shift] {
            for i in 0..old {
                let y = self.module.add(self.members[i], shift);
                self.mask[y] = true;
                self.members.push(y);
            }
            shift = self.module.add(shift, x);
        }
    }

    fn extend(&mut self, x: usize) {
        let mut pending = vec![x];
        while let Some(y) = pending.pop() {
            if self.mask[y] {
                continue;
            }
            self.add_to_span(y);
            for g in 0..self.module.generator_count() {
                let z = self.module.act(y, g);
                if !self.mask[z] {
                    pending.push(z);
                }
            }
        }
    }

    fn finish(self) -> Submodule {
        Submodule::from_mask(self.mask)
    }
}

/// The least submodule containing `seed`.
pub fn submodule_generated(module: &FiniteModule, seed: &[usize]) -> Result<Submodule> {
    if let Some(x) = seed.iter().find(|&&x| x >= module.order()) {
        return Err(Error::input(format!("element index {x} out of range")));
    }
    let mut builder = SubmoduleBuilder::new(module);
    for &x in seed {
        builder.extend(x);
    }
    Ok(builder.finish())
}

/// `{a : a·g = a for every generator g}`
pub fn fixed_submodule(module: &FiniteModule) -> Submodule {
    let mask = (0..module.order())
        .map(|a| (0..module.generator_count()).all(|g| module.act(a, g) == a))
        .collect();
    Submodule::from_mask(mask)
}

/// A chain of submodules, strictly nested, the last term stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSeries {
    pub terms: Vec<Submodule>,
}

impl ModuleSeries {
    pub fn stable_term(&self) -> &Submodule {
        self.terms.last().expect("a series has at least one term")
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Submodule::order).collect()
    }
}

fn iterate(first: Submodule, mut step: impl FnMut(&Submodule) -> Submodule) -> ModuleSeries {
    let mut terms = vec![first];
    loop {
        let next = step(terms.last().unwrap());
        if &next == terms.last().unwrap() {
            break;
        }
        terms.push(next);
    }
    ModuleSeries { terms }
}

/// `0 = A_0 ≤ A_1 ≤ …` with `A_{i+1} = {a : a(g−1) ∈ A_i}`; the stable term
/// is the upper hypercenter of the module.
///
/// Testing generators suffices: `a(gh − 1) = a(g−1)h + a(h−1)` and every
/// `A_i` is invariant.
pub fn upper_module_series(module: &FiniteModule) -> ModuleSeries {
    iterate(module.zero_submodule(), |current| {
        let mask = (0..module.order())
            .map(|a| {
                (0..module.generator_count()).all(|g| current.contains(module.difference(a, g)))
            })
            .collect();
        Submodule::from_mask(mask)
    })
}

/// `A = B_0 ≥ B_1 ≥ …` with `B_{k+1}` generated by `{b(g−1)}`.
pub fn augmentation_series(module: &FiniteModule) -> ModuleSeries {
    iterate(module.whole(), |current| {
        let mut builder = SubmoduleBuilder::new(module);
        for &b in current.members() {
            for g in 0..module.generator_count() {
                builder.extend(module.difference(b, g));
            }
        }
        builder.finish()
    })
}

/// Whether `sub` has a composition series whose simple factors all carry a
/// nontrivial action.
///
/// Builds a composition series bottom up: over the current term `C`, the
/// smallest `⟨C, x⟩` is a minimal over-module, so its factor is simple. By
/// Jordan–Hölder any composition series decides the question.
pub fn is_hypereccentric(module: &FiniteModule, sub: &Submodule) -> bool {
    let mut current = module.zero_submodule();
    while current.order() < sub.order() {
        let mut best: Option<Submodule> = None;
        for &x in sub.members() {
            if current.contains(x)
                || best
                    .as_ref()
                    .is_some_and(|b| b.contains(x) && b.order() == 2 * current.order())
            {
                continue;
            }
            let mut builder = SubmoduleBuilder::from_submodule(module, &current);
            builder.extend(x);
            let candidate = builder.finish();
            if best.as_ref().is_none_or(|b| candidate.order() < b.order()) {
                best = Some(candidate);
            }
        }
        let next = best.expect("a proper submodule has elements outside it");
        let eccentric = next.members().iter().any(|&c| {
            (0..module.generator_count()).any(|g| !current.contains(module.difference(c, g)))
        });
        if !eccentric {
            return false;
        }
        current = next;
    }
    true
}

/// The two halves of a Z-decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZDecomposition {
    pub hypercenter: Submodule,
    pub eccentric: Submodule,
}

/// `A = ζ(A) ⊕ E(A)` when it holds: `ζ(A)` is the stable upper term, `E(A)`
/// the stable augmentation term, and the pair is returned when they meet in
/// 0, their orders multiply to `|A|`, and `E(A)` is hypereccentric.
pub fn z_decomposition(module: &FiniteModule) -> Option<ZDecomposition> {
    let z = upper_module_series(module).stable_term().clone();
    let e = augmentation_series(module).stable_term().clone();
    let complementary = z.intersection(&e).is_zero() && z.order() * e.order() == module.order();
    (complementary && is_hypereccentric(module, &e)).then_some(ZDecomposition {
        hypercenter: z,
        eccentric: e,
    })
}

/// Every submodule, as the join-closure of cyclic submodules. Sorted by
/// order, then members.
pub fn enumerate_submodules(module: &FiniteModule, caps: &Caps) -> Result<Vec<Submodule>> {
    if module.order() > caps.oracle_module_order {
        return Err(Error::resource(
            format!(
                "submodule enumeration of a module of order {}",
                module.order()
            ),
            caps.oracle_module_order,
        ));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut found = Vec::new();
    let mut cyclic = Vec::new();
    for x in 0..module.order() {
        let sub = submodule_generated(module, &[x])?;
        if seen.insert(sub.members().to_vec()) {
            cyclic.push(x);
            found.push(sub);
        }
    }
    let mut next = 0;
    while next < found.len() {
        for &x in &cyclic {
            if found[next].contains(x) {
                continue;
            }
            let mut builder = SubmoduleBuilder::from_submodule(module, &found[next]);
            builder.extend(x);
            let join = builder.finish();
            if seen.insert(join.members().to_vec()) {
                if found.len() >= caps.max_subgroup_count {
                    return Err(Error::resource(
                        "number of submodules",
                        caps.max_subgroup_count,
                    ));
                }
                found.push(join);
            }
        }
        next += 1;
    }
    found.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members().cmp(b.members()))
    });
    Ok(found)
}

/// Result of the brute-force search for hypereccentric submodules.
#[derive(Debug, Clone)]
pub struct HypereccentricCensus {
    /// Every hypereccentric submodule, in enumeration order.
    pub all: Vec<Submodule>,
    /// The one containing all others, if there is one.
    pub maximum: Option<Submodule>,
}

/// Enumerates all submodules and keeps the hypereccentric ones.
pub fn brute_force_max_hypereccentric(
    module: &FiniteModule,
    caps: &Caps,
) -> Result<HypereccentricCensus> {
    let all: Vec<Submodule> = enumerate_submodules(module, caps)?
        .into_iter()
        .filter(|s| is_hypereccentric(module, s))
        .collect();
    let maximum = all
        .iter()
        .find(|m| all.iter().all(|s| s.is_subset(m)))
        .cloned();
    Ok(HypereccentricCensus { all, maximum })
}

/// Z-decomposition for a nilpotent acting group, cross-checked against the
/// brute-force census when the module is small enough.
pub fn check_lemma2(module: &FiniteModule, caps: &Caps) -> CheckReport {
    let mut report = CheckReport::new("lemma2", module.label());
    let upper = upper_module_series(module);
    let aug = augmentation_series(module);
    report
        .measure("module_order", module.order())
        .measure("acting_order", module.acting_group().order())
        .measure("upper_orders", upper.orders())
        .measure("augmentation_orders", aug.orders());
    let nilpotent = is_nilpotent(module.acting_group());
    report.measure("acting_nilpotent", nilpotent);
    let decomposition = z_decomposition(module);
    report.measure("decomposes", decomposition.is_some());
    if !nilpotent {
        report.skip("acting group is not nilpotent; the decomposition is not guaranteed");
        return report;
    }
    let Some(dec) = decomposition else {
        report.violate(format!(
            "no Z-decomposition: hypercenter {:?}, augmentation stable term {:?}",
            upper.stable_term().members(),
            aug.stable_term().members()
        ));
        return report;
    };
    report
        .measure("z_order", dec.hypercenter.order())
        .measure("e_order", dec.eccentric.order());
    if &dec.hypercenter != upper.stable_term() || &dec.eccentric != aug.stable_term() {
        report.violate("decomposition does not match the stable series terms");
    }
    if module.order() <= caps.oracle_module_order {
        match brute_force_max_hypereccentric(module, caps) {
            Ok(census) => {
                report.measure("hypereccentric_count", census.all.len());
                match census.maximum {
                    Some(max) if max == dec.eccentric => {}
                    Some(max) => {
                        report.violate(format!(
                            "E = {:?} but the largest hypereccentric submodule is {:?}",
                            dec.eccentric.members(),
                            max.members()
                        ));
                    }
                    None => {
                        report.violate("hypereccentric submodules have no unique maximum");
                    }
                }
                if let Some(stray) = census.all.iter().find(|s| !s.is_subset(&dec.eccentric)) {
                    report.violate(format!(
                        "hypereccentric submodule {:?} is not inside E",
                        stray.members()
                    ));
                }
            }
            Err(e) => {
                report.note(format!("brute-force oracle not run: {e}"));
            }
        }
    } else {
        report.note("module above the oracle cap; brute-force comparison not run");
    }
    report
}

/// Limits for [`search_decomposition_failure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    pub max_module_order: usize,
    pub max_acting_order: usize,
    /// Pairs of generators are tried only when `Aut(A)` has at most this many
    /// elements; single generators are always tried.
    pub pair_limit: usize,
    /// Also test nilpotent acting groups; a failure there is reported as a
    /// violation instead of a finding.
    pub include_nilpotent: bool,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_module_order: 16,
            max_acting_order: 2048,
            pair_limit: 256,
            include_nilpotent: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchOutcome {
    /// Modules without a Z-decomposition, each with a non-nilpotent acting
    /// group.
    pub findings: Vec<FiniteModule>,
    /// Nilpotent acting groups without a Z-decomposition. Always empty on a
    /// correct engine.
    pub violations: Vec<FiniteModule>,
    pub invariant_vectors: usize,
    /// Distinct acting groups examined.
    pub acting_groups: usize,
    pub nilpotent: usize,
    pub decomposed: usize,
    /// Invariant vectors whose generator pairs were not tried.
    pub pairs_skipped: Vec<Vec<u64>>,
}

/// Abelian group types of order at most `max`, as sorted prime-power
/// factor lists.
fn abelian_types(max: usize) -> Vec<Vec<u64>> {
    let prime_powers: Vec<u64> = (2..=max as u64)
        .filter(|&q| crate::group::prime_power(q).is_some())
        .collect();
    let mut out = vec![Vec::new()];
    fn grow(acc: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>, from: usize, pp: &[u64], left: u64) {
        for (i, &q) in pp.iter().enumerate().skip(from) {
            if q > left {
                break;
            }
            cur.push(q);
            acc.push(cur.clone());
            grow(acc, cur, i, pp, left / q);
            cur.pop();
        }
    }
    if max >= 1 {
        grow(&mut out, &mut Vec::new(), 0, &prime_powers, max as u64);
    } else {
        out.clear();
    }
    out.sort_by(|a, b| {
        let order = |v: &Vec<u64>| v.iter().product::<u64>();
        order(a).cmp(&order(b)).then_with(|| a.cmp(b))
    });
    out
}

/// All automorphism matrices of `A` with their element maps, entries
/// `M[i][j]` in `0..d_j`, in lexicographic order.
fn automorphisms(invariants: &[u64], caps: &Caps) -> Result<Vec<(Vec<Vec<i64>>, Permutation)>> {
    let shell = build_module(invariants, &[], caps)?;
    let r = invariants.len();
    let mut out = Vec::new();
    let mut digits = vec![0i64; r * r];
    loop {
        let matrix: Vec<Vec<i64>> = digits.chunks(r.max(1)).map(<[i64]>::to_vec).collect();
        if let Ok(map) = element_map(&shell, &matrix, 0) {
            out.push((matrix, map));
        }
        // odometer; column j of every row runs over 0..d_j
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < invariants[k % r] as i64 {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Sweeps small modules for failures of the Z-decomposition.
///
/// For every abelian group of order up to the cap, every automorphism and
/// (when `Aut(A)` is small enough) every pair of automorphisms generates an
/// acting group. Each distinct acting group is tested once.
pub fn search_decomposition_failure(search: &SearchCaps, caps: &Caps) -> SearchOutcome {
    let mut outcome = SearchOutcome::default();
    for invariants in abelian_types(search.max_module_order) {
        outcome.invariant_vectors += 1;
        let Ok(auts) = automorphisms(&invariants, caps) else {
            continue;
        };
        let mut gen_sets: Vec<Vec<usize>> = (0..auts.len()).map(|i| vec![i]).collect();
        if auts.len() <= search.pair_limit {
            for i in 0..auts.len() {
                for j in i + 1..auts.len() {
                    gen_sets.push(vec![i, j]);
                }
            }
        } else {
            outcome.pairs_skipped.push(invariants.clone());
        }
        let mut seen: HashSet<BTreeSet<Permutation>> = HashSet::new();
        let acting_caps = Caps {
            max_order: search.max_acting_order,
            ..*caps
        };
        for gens in gen_sets {
            let maps: Vec<&Permutation> = gens.iter().map(|&i| &auts[i].1).collect();
            let Some(key) = permutation_closure(&maps, search.max_acting_order) else {
                continue;
            };
            if !seen.insert(key) {
                continue;
            }
            let matrices: Vec<Vec<Vec<i64>>> = gens.iter().map(|&i| auts[i].0.clone()).collect();
            let Ok(module) = build_module(&invariants, &matrices, &acting_caps) else {
                continue;
            };
            outcome.acting_groups += 1;
            let nilpotent = is_nilpotent(module.acting_group());
            if nilpotent {
                outcome.nilpotent += 1;
                if !search.include_nilpotent {
                    continue;
                }
            }
            match z_decomposition(&module) {
                Some(_) => outcome.decomposed += 1,
                None if nilpotent => outcome.violations.push(module),
                None => outcome.findings.push(module),
            }
        }
    }
    outcome
}

/// The group generated by `maps`, as a set of permutations; `None` past
/// `cap` elements.
fn permutation_closure(maps: &[&Permutation], cap: usize) -> Option<BTreeSet<Permutation>> {
    let degree = maps.first().map_or(0, |m| m.len());
    let mut elements = BTreeSet::new();
    let mut frontier = vec![crate::perm::identity_permutation(degree)];
    while let Some(p) = frontier.pop() {
        if elements.contains(&p) {
            continue;
        }
        for m in maps {
            frontier.push(crate::perm::compose(&p, m));
        }
        elements.insert(p);
        if elements.len() > cap {
            return None;
        }
    }
    Some(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(invariants: &[u64], action: &[&[&[i64]]]) -> FiniteModule {
        let action: Vec<Vec<Vec<i64>>> = action
            .iter()
            .map(|mat| mat.iter().map(|row| row.to_vec()).collect())
            .collect();
        build_module(invariants, &action, &Caps::default()).unwrap()
    }

    fn elems(module: &FiniteModule, sub: &Submodule) -> Vec<Vec<u64>> {
        sub.members()
            .iter()
            .map(|&x| module.coordinates(x))
            .collect()
    }

    #[test]
    fn build_examples() {
        let c3 = m(&[3], &[&[&[-1]]]);
        assert_eq!(c3.acting_group().order(), 2);
        let triv = m(&[5], &[&[&[1]]]);
        assert_eq!(triv.acting_group().order(), 1);
        let err = build_module(&[2, 2], &[vec![vec![1, 1], vec![1, 1]]], &Caps::default());
        assert!(
            matches!(err, Err(Error::Input(ref s)) if s.contains("matrix 0")),
            "{err:?}"
        );
        let err = build_module(&[2, 3], &[vec![vec![1, 1], vec![0, 1]]], &Caps::default());
        assert!(
            matches!(err, Err(Error::Input(ref s)) if s.contains("well defined")),
            "{err:?}"
        );
        let err = build_module(&[64, 128], &[], &Caps::default());
        assert!(matches!(err, Err(Error::Resource { .. })));
        assert!(build_module(&[2], &[vec![vec![1, 0]]], &Caps::default()).is_err());
    }

    #[test]
    fn fixed_points() {
        assert_eq!(fixed_submodule(&m(&[4], &[&[&[1]]])).order(), 4);
        assert!(fixed_submodule(&m(&[3], &[&[&[-1]]])).is_zero());
        let z4 = m(&[4], &[&[&[-1]]]);
        assert_eq!(elems(&z4, &fixed_submodule(&z4)), vec![vec![0], vec![2]]);
    }

    #[test]
    fn series_examples() {
        let z4 = m(&[4], &[&[&[-1]]]);
        assert_eq!(upper_module_series(&z4).orders(), vec![1, 2, 4]);
        assert_eq!(augmentation_series(&z4).orders(), vec![4, 2, 1]);
        let c3 = m(&[3], &[&[&[-1]]]);
        assert_eq!(upper_module_series(&c3).orders(), vec![1]);
        assert_eq!(augmentation_series(&c3).orders(), vec![3]);
        let triv = m(&[2, 3], &[&[&[1, 0], &[0, 1]]]);
        assert_eq!(upper_module_series(&triv).orders(), vec![1, 6]);
        assert_eq!(augmentation_series(&triv).orders(), vec![6, 1]);
    }

    #[test]
    fn hypereccentric_examples() {
        let c3 = m(&[3], &[&[&[-1]]]);
        assert!(is_hypereccentric(&c3, &c3.zero_submodule()));
        assert!(is_hypereccentric(&c3, &c3.whole()));
        let mixed = m(&[3, 3], &[&[&[1, 0], &[0, -1]]]);
        assert!(!is_hypereccentric(&mixed, &fixed_submodule(&mixed)));
        assert!(!is_hypereccentric(&mixed, &mixed.whole()));
    }

    #[test]
    fn decomposition_examples() {
        let z4 = m(&[4], &[&[&[-1]]]);
        let d = z_decomposition(&z4).unwrap();
        assert_eq!((d.hypercenter.order(), d.eccentric.order()), (4, 1));
        let c3 = m(&[3], &[&[&[-1]]]);
        let d = z_decomposition(&c3).unwrap();
        assert_eq!((d.hypercenter.order(), d.eccentric.order()), (1, 3));
        let triv = m(&[2, 2], &[]);
        let d = z_decomposition(&triv).unwrap();
        assert_eq!((d.hypercenter.order(), d.eccentric.order()), (4, 1));
    }

    #[test]
    fn brute_force_examples() {
        let caps = Caps::default();
        let triv = m(&[4], &[&[&[1]]]);
        assert!(brute_force_max_hypereccentric(&triv, &caps)
            .unwrap()
            .maximum
            .unwrap()
            .is_zero());
        let c3 = m(&[3], &[&[&[-1]]]);
        let census = brute_force_max_hypereccentric(&c3, &caps).unwrap();
        assert_eq!(census.maximum.unwrap().order(), 3);
        let mixed = m(&[3, 3], &[&[&[-1, 0], &[0, 1]]]);
        let max = brute_force_max_hypereccentric(&mixed, &caps)
            .unwrap()
            .maximum
            .unwrap();
        assert_eq!(
            elems(&mixed, &max),
            vec![vec![0, 0], vec![1, 0], vec![2, 0]]
        );
        let big = m(&[5, 5, 5], &[]);
        assert!(matches!(
            brute_force_max_hypereccentric(&big, &caps),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn abelian_types_are_canonical() {
        assert_eq!(abelian_types(0), Vec::<Vec<u64>>::new());
        assert_eq!(abelian_types(1), vec![Vec::<u64>::new()]);
        assert_eq!(
            abelian_types(8),
            vec![
                vec![],
                vec![2],
                vec![3],
                vec![2, 2],
                vec![4],
                vec![5],
                vec![2, 3],
                vec![7],
                vec![2, 2, 2],
                vec![2, 4],
                vec![8],
            ]
        );
    }

    #[test]
    fn automorphism_counts() {
        let caps = Caps::default();
        assert_eq!(automorphisms(&[2, 2], &caps).unwrap().len(), 6);
        assert_eq!(automorphisms(&[3, 3], &caps).unwrap().len(), 48);
        assert_eq!(automorphisms(&[2, 4], &caps).unwrap().len(), 8);
        assert_eq!(automorphisms(&[8], &caps).unwrap().len(), 4);
        assert_eq!(automorphisms(&[2, 3], &caps).unwrap().len(), 2);
    }

    #[test]
    fn z4_series_members() {
        let z4 = m(&[4], &[&[&[-1]]]);
        let up = upper_module_series(&z4);
        assert_eq!(elems(&z4, &up.terms[1]), vec![vec![0], vec![2]]);
        let aug = augmentation_series(&z4);
        assert_eq!(elems(&z4, &aug.terms[1]), vec![vec![0], vec![2]]);
    }

    #[test]
    fn reflection_module_has_no_decomposition() {
        let s3 = m(&[3, 3], &[&[&[0, 1], &[1, 0]], &[&[0, 1], &[-1, -1]]]);
        assert_eq!(s3.acting_group().order(), 6);
        assert!(!is_nilpotent(s3.acting_group()));
        assert!(z_decomposition(&s3).is_none());
        let r = check_lemma2(&s3, &Caps::default());
        assert_eq!(r.verdict, crate::theorems::Verdict::Skipped);
    }

    #[test]
    fn search_small_orders() {
        let caps = Caps::default();
        let tiny = SearchCaps {
            max_module_order: 4,
            include_nilpotent: true,
            ..SearchCaps::default()
        };
        let out = search_decomposition_failure(&tiny, &caps);
        assert!(out.findings.is_empty() && out.violations.is_empty());
        assert_eq!(out.invariant_vectors, 5);
        let nine = SearchCaps {
            max_module_order: 9,
            ..SearchCaps::default()
        };
        let out = search_decomposition_failure(&nine, &caps);
        assert!(out.violations.is_empty());
        assert!(out
            .findings
            .iter()
            .any(|f| f.invariants() == [3, 3] && f.acting_group().order() == 6));
        assert!(out.findings.iter().all(|f| !is_nilpotent(f.acting_group())));
    }

    fn unit(d: u64) -> impl Strategy<Value = i64> {
        (1..d as i64).prop_filter("unit", move |&u| gcd(u as u64, d) == 1)
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    fn direct_sum(a: &FiniteModule, b: &FiniteModule) -> FiniteModule {
        let (ra, rb) = (a.invariants().len(), b.invariants().len());
        let mut invariants = a.invariants().to_vec();
        invariants.extend_from_slice(b.invariants());
        let action = a
            .action()
            .iter()
            .zip(b.action())
            .map(|(x, y)| {
                let mut mat = vec![vec![0i64; ra + rb]; ra + rb];
                for i in 0..ra {
                    mat[i][..ra].copy_from_slice(&x[i]);
                }
                for i in 0..rb {
                    mat[ra + i][ra..].copy_from_slice(&y[i]);
                }
                mat
            })
            .collect::<Vec<_>>();
        build_module(&invariants, &action, &Caps::default()).unwrap()
    }

    proptest! {
        #[test]
        fn cyclic_modules_decompose(d in 2u64..40, seed in any::<u64>()) {
            let units: Vec<i64> = (1..d as i64).filter(|&u| gcd(u as u64, d) == 1).collect();
            let u = units[(seed % units.len() as u64) as usize];
            let module = build_module(&[d], &[vec![vec![u]]], &Caps::default()).unwrap();
            // The acting group is abelian, so the decomposition must exist.
            let dec = z_decomposition(&module).unwrap();
            prop_assert_eq!(dec.hypercenter.order() * dec.eccentric.order(), d as usize);
            let up = upper_module_series(&module);
            prop_assert!(up.terms.windows(2).all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]));
            let aug = augmentation_series(&module);
            prop_assert!(aug.terms.windows(2).all(|w| w[1].is_subset(&w[0]) && w[0] != w[1]));
            prop_assert!(fixed_submodule(&module) == up.terms.get(1).cloned().unwrap_or_else(|| module.zero_submodule()));
        }

        #[test]
        fn direct_sum_is_componentwise(u in unit(9), v in unit(8)) {
            let a = build_module(&[9], &[vec![vec![u]]], &Caps::default()).unwrap();
            let b = build_module(&[8], &[vec![vec![v]]], &Caps::default()).unwrap();
            let sum = direct_sum(&a, &b);
            let da = z_decomposition(&a).unwrap();
            let db = z_decomposition(&b).unwrap();
            let ds = z_decomposition(&sum).unwrap();
            prop_assert_eq!(ds.hypercenter.order(), da.hypercenter.order() * db.hypercenter.order());
            prop_assert_eq!(ds.eccentric.order(), da.eccentric.order() * db.eccentric.order());
        }

        #[test]
        fn generated_submodules_are_closed(x in 0usize..36, y in 0usize..36) {
            let module = build_module(&[4, 9], &[vec![vec![-1, 0], vec![0, 2]]], &Caps::default()).unwrap();
            let s = submodule_generated(&module, &[x, y]).unwrap();
            for &a in s.members() {
                for &b in s.members() {
                    prop_assert!(s.contains(module.add(a, b)));
                }
                prop_assert!(s.contains(module.act(a, 0)));
            }
            prop_assert_eq!(module.order() % s.order(), 0);
            prop_assert_eq!(&submodule_generated(&module, s.members()).unwrap(), &s);
        }
    }
}
