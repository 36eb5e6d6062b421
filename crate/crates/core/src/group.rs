//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..order`. Subgroups are sorted index sets with a
//! membership mask. Every routine here is a pure function of its inputs and
//! enumerates in a fixed order, so repeated runs give identical results.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Above this order the full associativity scan is skipped and the table is
/// trusted.
pub const ASSOCIATIVITY_SCAN_LIMIT: usize = 512;

/// Size limits applied across the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest group order any constructor will build.
    pub max_order: usize,
    /// Largest group order for which the full subgroup lattice is enumerated.
    pub max_subgroup_order: usize,
    /// Largest number of subgroups an enumeration may return.
    pub max_subgroup_count: usize,
    /// Largest additive order of a finite module.
    pub max_module_order: usize,
    /// Largest module order handed to the brute-force submodule oracle.
    pub oracle_module_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: 2048,
            max_subgroup_order: 64,
            max_subgroup_count: 10_000,
            max_module_order: 4096,
            oracle_module_order: 64,
        }
    }
}

/// A validated finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    product: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    label: String,
}

impl GroupTable {
    /// Builds a table without checking any axiom.
    ///
    /// Only meant for tests that need a corrupted table to drive the
    /// violation path of the harness.
    #[doc(hidden)]
    pub fn from_raw_unchecked(
        rows: &[Vec<usize>],
        identity: usize,
        inverse: Vec<usize>,
        label: impl Into<String>,
    ) -> Self {
        let order = rows.len();
        let product = rows.iter().flatten().map(|&x| x as u32).collect();
        GroupTable {
            order,
            product,
            identity,
            inverse,
            label: label.into(),
        }
    }

    /// Builds a table whose axioms are guaranteed by the caller's
    /// construction (permutation closure, products of valid tables).
    pub(crate) fn trusted(order: usize, product: Vec<u32>, identity: usize, label: String) -> Self {
        debug_assert_eq!(product.len(), order * order);
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            if inverse[a] != usize::MAX {
                continue;
            }
            let row = &product[a * order..(a + 1) * order];
            let b = row
                .iter()
                .position(|&x| x as usize == identity)
                .expect("trusted table has inverses");
            inverse[a] = b;
            inverse[b] = a;
        }
        GroupTable {
            order,
            product,
            identity,
            inverse,
            label,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a⁻¹ b⁻¹ a b`
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.product
            .chunks(self.order)
            .map(|row| row.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = generating_set(self);
        gens.iter().enumerate().all(|(i, &a)| {
            gens[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self.order, (0..self.order).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_members(self.order, vec![self.identity])
    }

    /// Re-checks every axiom, scanning associativity up to
    /// [`ASSOCIATIVITY_SCAN_LIMIT`].
    pub fn check_axioms(&self) -> Result<()> {
        validate_cayley_table(&self.rows(), usize::MAX).map(|_| ())
    }
}

/// A subgroup of some parent table, kept as a sorted member list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent_order == other.parent_order && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.parent_order.hash(state);
        self.members.hash(state);
    }
}

impl Subgroup {
    pub(crate) fn from_members(parent_order: usize, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; parent_order];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup {
            parent_order,
            members,
            mask,
        }
    }

    pub(crate) fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Subgroup {
            parent_order: mask.len(),
            members,
            mask,
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Subgroup::from_members(self.parent_order, members)
    }

    /// True when the member set contains the identity and is closed under
    /// the product, which for a finite set is enough to be a subgroup. The
    /// stored inverses are checked too, since an unchecked table may carry
    /// wrong ones.
    pub fn is_closed_in(&self, group: &GroupTable) -> bool {
        self.contains(group.identity())
            && self.members.iter().all(|&a| self.contains(group.inv(a)))
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(group.mul(a, b))))
    }
}

/// Incremental subgroup closure.
///
/// Maintains the set reachable from the identity by right multiplication
/// with the collected generators. Each new generator at least doubles the
/// subgroup, so a subgroup of order `n` needs at most `log2 n` of them.
pub(crate) struct SubgroupBuilder<'g> {
    group: &'g GroupTable,
    mask: Vec<bool>,
    members: Vec<usize>,
    gens: Vec<usize>,
}

impl<'g> SubgroupBuilder<'g> {
    pub(crate) fn new(group: &'g GroupTable) -> Self {
        let mut mask = vec![false; group.order()];
        mask[group.identity()] = true;
        SubgroupBuilder {
            group,
            mask,
            members: vec![group.identity()],
            gens: Vec::new(),
        }
    }

    pub(crate) fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub(crate) fn len(&self) -> usize {
        self.members.len()
    }

    fn push(&mut self, x: usize) {
        self.mask[x] = true;
        self.members.push(x);
    }

    pub(crate) fn extend(&mut self, x: usize) {
        if self.mask[x] {
            return;
        }
        self.gens.push(x);
        let old = self.members.len();
        for i in 0..old {
            let y = self.group.mul(self.members[i], x);
            if !self.mask[y] {
                self.push(y);
            }
        }
        let mut next = old;
        while next < self.members.len() {
            let m = self.members[next];
            for gi in 0..self.gens.len() {
                let y = self.group.mul(m, self.gens[gi]);
                if !self.mask[y] {
                    self.push(y);
                }
            }
            next += 1;
        }
    }

    pub(crate) fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub(crate) fn finish(self) -> Subgroup {
        Subgroup::from_mask(self.mask)
    }
}

/// A small generating set of the whole group, greedily chosen in index order.
pub fn generating_set(group: &GroupTable) -> Vec<usize> {
    let mut builder = SubgroupBuilder::new(group);
    for g in group.elements() {
        if builder.len() == group.order() {
            break;
        }
        builder.extend(g);
    }
    builder.gens
}

/// A small generating set of `sub`, chosen in member order.
pub fn subgroup_generators(group: &GroupTable, sub: &Subgroup) -> Vec<usize> {
    let mut builder = SubgroupBuilder::new(group);
    for &g in sub.members() {
        if builder.len() == sub.order() {
            break;
        }
        builder.extend(g);
    }
    builder.gens
}

/// Checks the group axioms of a raw table and returns the validated group.
///
/// Associativity is scanned over all triples when `n <=`
/// [`ASSOCIATIVITY_SCAN_LIMIT`]. `max_order` is the group-order cap.
pub fn validate_cayley_table(raw: &[Vec<usize>], max_order: usize) -> Result<GroupTable> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::input("empty table"));
    }
    if n > max_order {
        return Err(Error::resource(format!("table of order {n}"), max_order));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::input(format!(
                "row {i} has length {} but the table has {n} rows",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|&x| x >= n) {
            return Err(Error::input(format!(
                "entry ({i},{j}) = {} is out of range",
                row[j]
            )));
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| raw[e][x] == x && raw[x][e] == x))
        .ok_or_else(|| Error::input("no two-sided identity element"))?;
    let inverse = raw
        .iter()
        .enumerate()
        .map(|(a, row)| {
            (0..n)
                .find(|&b| row[b] == identity && raw[b][a] == identity)
                .ok_or_else(|| Error::input(format!("element {a} has no two-sided inverse")))
        })
        .collect::<Result<Vec<_>>>()?;
    if n <= ASSOCIATIVITY_SCAN_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = raw[a][b];
                for c in 0..n {
                    if raw[ab][c] != raw[a][raw[b][c]] {
                        return Err(Error::input(format!(
                            "associativity fails for (a,b,c) = ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
    }
    let product = raw.iter().flatten().map(|&x| x as u32).collect();
    Ok(GroupTable {
        order: n,
        product,
        identity,
        inverse,
        label: format!("table({n})"),
    })
}

/// Componentwise product; the pair `(g, h)` gets index `g·|H| + h`.
pub fn direct_product(g: &GroupTable, h: &GroupTable, max_order: usize) -> Result<GroupTable> {
    let n = g
        .order()
        .checked_mul(h.order())
        .filter(|&n| n <= max_order)
        .ok_or_else(|| {
            Error::resource(
                format!("direct product of orders {} and {}", g.order(), h.order()),
                max_order,
            )
        })?;
    let m = h.order();
    let mut product = Vec::with_capacity(n * n);
    for a in 0..n {
        let (ga, ha) = (a / m, a % m);
        for b in 0..n {
            let (gb, hb) = (b / m, b % m);
            product.push((g.mul(ga, gb) * m + h.mul(ha, hb)) as u32);
        }
    }
    let identity = g.identity() * m + h.identity();
    let inverse = (0..n).map(|a| g.inv(a / m) * m + h.inv(a % m)).collect();
    Ok(GroupTable {
        order: n,
        product,
        identity,
        inverse,
        label: format!("{}×{}", g.label(), h.label()),
    })
}

fn check_indices(group: &GroupTable, seed: &[usize]) -> Result<()> {
    match seed.iter().find(|&&x| x >= group.order()) {
        Some(x) => Err(Error::input(format!(
            "element index {x} out of range for group of order {}",
            group.order()
        ))),
        None => Ok(()),
    }
}

/// The least subgroup containing `seed`.
pub fn subgroup_generated(group: &GroupTable, seed: &[usize]) -> Result<Subgroup> {
    check_indices(group, seed)?;
    let mut builder = SubgroupBuilder::new(group);
    for &x in seed {
        builder.extend(x);
    }
    Ok(builder.finish())
}

/// The least normal subgroup containing `seed`: the subgroup generated by all
/// conjugates of the seed elements.
pub fn normal_closure(group: &GroupTable, seed: &[usize]) -> Result<Subgroup> {
    check_indices(group, seed)?;
    let mut builder = SubgroupBuilder::new(group);
    for &s in seed {
        for g in group.elements() {
            builder.extend(group.conjugate(s, g));
        }
    }
    Ok(builder.finish())
}

/// Elements commuting with every member of `sub`.
pub fn centralizer(group: &GroupTable, sub: &Subgroup) -> Subgroup {
    let gens = subgroup_generators(group, sub);
    let mask = group
        .elements()
        .map(|g| gens.iter().all(|&s| group.mul(g, s) == group.mul(s, g)))
        .collect();
    Subgroup::from_mask(mask)
}

pub fn center(group: &GroupTable) -> Subgroup {
    centralizer(group, &group.whole())
}

/// `[A, B]`, generated by the raw commutators `a⁻¹b⁻¹ab`.
///
/// The result is normal in the parent whenever `A` or `B` is; callers that
/// need normality pass normal arguments.
pub fn commutator_subgroup(group: &GroupTable, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut builder = SubgroupBuilder::new(group);
    for &x in a.members() {
        for &y in b.members() {
            let c = group.commutator(x, y);
            if !builder.contains(c) {
                builder.extend(c);
            }
        }
    }
    builder.finish()
}

pub fn is_normal(group: &GroupTable, sub: &Subgroup) -> bool {
    let gens = generating_set(group);
    sub.members()
        .iter()
        .all(|&s| gens.iter().all(|&g| sub.contains(group.conjugate(s, g))))
}

/// `K·N` as a set, for arbitrary subsets.
pub fn product_set(group: &GroupTable, k: &Subgroup, n: &Subgroup) -> Subgroup {
    let mut mask = vec![false; group.order()];
    for &x in k.members() {
        for &y in n.members() {
            mask[group.mul(x, y)] = true;
        }
    }
    Subgroup::from_mask(mask)
}

/// The natural surjection onto a quotient by a normal subgroup.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source_order: usize,
    kernel: Subgroup,
    target: GroupTable,
    projection: Vec<usize>,
    representatives: Vec<usize>,
}

impl QuotientMap {
    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &GroupTable {
        &self.target
    }

    pub fn project(&self, g: usize) -> usize {
        self.projection[g]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Minimal element of each coset, in target index order.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }
}

/// `G/N`. Cosets are numbered by their minimal element, ascending.
pub fn quotient(group: &GroupTable, normal: &Subgroup) -> Result<QuotientMap> {
    if normal.parent_order() != group.order() {
        return Err(Error::input("subgroup does not belong to this group"));
    }
    if !is_normal(group, normal) {
        return Err(Error::input(format!(
            "subgroup of order {} is not normal in {}",
            normal.order(),
            group.label()
        )));
    }
    let n = group.order();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for g in group.elements() {
        if projection[g] != usize::MAX {
            continue;
        }
        let coset = representatives.len();
        representatives.push(g);
        for &k in normal.members() {
            projection[group.mul(g, k)] = coset;
        }
    }
    let raw: Vec<Vec<usize>> = representatives
        .iter()
        .map(|&x| {
            representatives
                .iter()
                .map(|&y| projection[group.mul(x, y)])
                .collect()
        })
        .collect();
    let target = validate_cayley_table(&raw, usize::MAX)?.with_label(format!(
        "{}/N{}",
        group.label(),
        normal.order()
    ));
    Ok(QuotientMap {
        source_order: n,
        kernel: normal.clone(),
        target,
        projection,
        representatives,
    })
}

/// Elements of the source whose image lies in `sub`.
pub fn preimage(map: &QuotientMap, sub: &Subgroup) -> Subgroup {
    let mask = map.projection.iter().map(|&c| sub.contains(c)).collect();
    Subgroup::from_mask(mask)
}

/// `sub` as a standalone group, together with the embedding of its indices
/// back into the parent.
pub fn subgroup_table(group: &GroupTable, sub: &Subgroup) -> (GroupTable, Vec<usize>) {
    let embedding = sub.members().to_vec();
    let k = embedding.len();
    let mut local = vec![usize::MAX; group.order()];
    for (i, &m) in embedding.iter().enumerate() {
        local[m] = i;
    }
    let mut product = Vec::with_capacity(k * k);
    for &a in &embedding {
        for &b in &embedding {
            product.push(local[group.mul(a, b)] as u32);
        }
    }
    let identity = local[group.identity()];
    let inverse = embedding.iter().map(|&a| local[group.inv(a)]).collect();
    let table = GroupTable {
        order: k,
        product,
        identity,
        inverse,
        label: format!("{}≥K{}", group.label(), k),
    };
    (table, embedding)
}

/// Maps a subgroup of an extracted table back into the parent.
pub fn embed_subgroup(parent_order: usize, embedding: &[usize], sub: &Subgroup) -> Subgroup {
    Subgroup::from_members(
        parent_order,
        sub.members().iter().map(|&i| embedding[i]).collect(),
    )
}

/// Every subgroup, as the join-closure of the cyclic subgroups. Sorted by
/// order, then member list.
pub fn enumerate_subgroups(group: &GroupTable, caps: &Caps) -> Result<Vec<Subgroup>> {
    if group.order() > caps.max_subgroup_order {
        return Err(Error::resource(
            format!("subgroup enumeration of a group of order {}", group.order()),
            caps.max_subgroup_order,
        ));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    // (subgroup, a generating set for it)
    let mut found: Vec<(Subgroup, Vec<usize>)> = Vec::new();
    let mut cyclic_gens = Vec::new();
    for g in group.elements() {
        let sub = subgroup_generated(group, &[g])?;
        if seen.insert(sub.members().to_vec()) {
            cyclic_gens.push(g);
            found.push((sub, vec![g]));
        }
    }
    let mut next = 0;
    while next < found.len() {
        for &c in &cyclic_gens {
            if found[next].0.contains(c) {
                continue;
            }
            let mut builder = SubgroupBuilder::new(group);
            for &x in &found[next].1 {
                builder.extend(x);
            }
            builder.extend(c);
            let gens = builder.generators().to_vec();
            let join = builder.finish();
            if seen.insert(join.members().to_vec()) {
                if found.len() >= caps.max_subgroup_count {
                    return Err(Error::resource(
                        "number of subgroups",
                        caps.max_subgroup_count,
                    ));
                }
                found.push((join, gens));
            }
        }
        next += 1;
    }
    let mut subgroups: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
    sort_subgroups(&mut subgroups);
    Ok(subgroups)
}

pub(crate) fn sort_subgroups(subgroups: &mut [Subgroup]) {
    subgroups.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members().cmp(b.members()))
    });
}

/// Every subgroup, found by testing every subset that contains the
/// identity for closure. Exponential; an independent check of
/// [`enumerate_subgroups`] for groups of order at most 16.
pub fn subgroups_by_subset_scan(group: &GroupTable) -> Result<Vec<Subgroup>> {
    let n = group.order();
    if n > 16 {
        return Err(Error::resource(
            format!("subset scan of a group of order {n}"),
            16,
        ));
    }
    let others: Vec<usize> = group
        .elements()
        .filter(|&x| x != group.identity())
        .collect();
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << others.len()) {
        let mut members = vec![group.identity()];
        members.extend(
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &x)| x),
        );
        let candidate = Subgroup::from_members(n, members);
        if candidate.is_closed_in(group) {
            out.push(candidate);
        }
    }
    sort_subgroups(&mut out);
    Ok(out)
}

/// Smallest prime factor of `t >= 2`.
pub fn least_prime_divisor(t: u64) -> Result<u64> {
    if t < 2 {
        return Err(Error::input(format!(
            "least prime divisor is undefined for {t}"
        )));
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= t {
        if t.is_multiple_of(d) {
            return Ok(d);
        }
        d += 1;
    }
    Ok(t)
}

/// `Some((p, n))` when `t = pⁿ` with `n >= 1`.
pub fn prime_power(t: u64) -> Option<(u64, u32)> {
    let p = least_prime_divisor(t).ok()?;
    let mut rest = t;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}
