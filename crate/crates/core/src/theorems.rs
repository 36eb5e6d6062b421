//! Per-group verdicts for the bounds and identities relating central series.
//!
//! Every check returns a [`CheckReport`]. A `violated` verdict on a valid
//! group means the engine is wrong, since each statement checked here is a
//! theorem about finite groups.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{
    compare_against_bound, theorem_b_bound, wiegold_bound, BoundNumber, BoundValue, Comparison,
};
use crate::error::{Error, Result};
use crate::group::{
    center, centralizer, commutator_subgroup, embed_subgroup, enumerate_subgroups, is_normal,
    normal_closure, product_set, quotient, subgroup_table, subgroups_by_subset_scan, Caps,
    GroupTable, Subgroup,
};
use crate::series::{
    is_nilpotent, lower_central_series, nilpotency_profile, upper_central_series,
    upper_central_series_by_quotients, CentralSeries,
};

/// Recorded on every report that relies on it.
pub const HYPERCENTRAL_NOTE: &str =
    "finite group: hypercentral is equivalent to nilpotent, and the hypercentral residual is the nilpotent residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Marginal,
    Violated,
    Skipped,
}

impl From<Comparison> for Verdict {
    fn from(c: Comparison) -> Self {
        match c {
            Comparison::Holds => Verdict::Holds,
            Comparison::Marginal => Verdict::Marginal,
            Comparison::Violated => Verdict::Violated,
        }
    }
}

/// Outcome of one check on one group or module.
///
/// A violated report always carries at least one witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub group: String,
    pub measured: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, group: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            group: group.to_string(),
            measured: BTreeMap::new(),
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn measure(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.measured.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn violate(&mut self, witness: impl Into<String>) -> &mut Self {
        self.verdict = Verdict::Violated;
        self.witnesses.push(witness.into());
        self
    }

    pub fn skip(&mut self, note: impl Into<String>) -> &mut Self {
        self.verdict = Verdict::Skipped;
        self.notes.push(note.into());
        self
    }

    /// Folds a bound comparison in; never upgrades an existing verdict.
    fn compare(&mut self, value: usize, bound: &BoundValue) -> Comparison {
        let outcome = compare_against_bound(value as u64, bound);
        self.measure("bound", bound_json(bound));
        self.measure("bound_exact", bound.value.is_exact());
        self.measure("slack", bound.value.approx() / value as f64);
        match outcome {
            Comparison::Holds => {}
            Comparison::Marginal => {
                if self.verdict == Verdict::Holds {
                    self.verdict = Verdict::Marginal;
                }
                self.note("value lies within the marginal band of a real-valued bound");
            }
            Comparison::Violated => {
                self.violate(format!(
                    "{value} exceeds the {:?} bound {} for t = {}",
                    bound.kind,
                    bound_json(bound),
                    bound.t
                ));
            }
        }
        outcome
    }
}

/// Exact bounds as integers (strings past `u64`), real ones as floats.
fn bound_json(bound: &BoundValue) -> Value {
    match &bound.value {
        BoundNumber::Exact(v) => match u64::try_from(v) {
            Ok(x) => x.into(),
            Err(_) => v.to_string().into(),
        },
        BoundNumber::Real(x) => (*x).into(),
    }
}

fn members(sub: &Subgroup) -> String {
    format!("{:?}", sub.members())
}

fn index(group: &GroupTable, sub: &Subgroup) -> u64 {
    (group.order() / sub.order()) as u64
}

/// Schur's finiteness and Wiegold's bound `|[G,G]| <= w(t)`, `t = |G/ζ(G)|`,
/// recording whether the bound is attained.
pub fn check_schur_wiegold(group: &GroupTable) -> CheckReport {
    let mut report = CheckReport::new("schur-wiegold", group.label());
    let z = center(group);
    let derived = commutator_subgroup(group, &group.whole(), &group.whole());
    let t = index(group, &z);
    report
        .measure("t", t)
        .measure("center_order", z.order())
        .measure("derived_order", derived.order());
    if t == 1 {
        if !derived.is_trivial() {
            report.violate(format!(
                "abelian group with derived subgroup {}",
                members(&derived)
            ));
        }
        report
            .measure("attained", false)
            .note("t = 1: abelian group");
        return report;
    }
    let bound = wiegold_bound(t).expect("t >= 2");
    let outcome = report.compare(derived.order(), &bound);
    if outcome == Comparison::Violated {
        report
            .witnesses
            .push(format!("derived subgroup {}", members(&derived)));
    }
    let attained = match &bound.value {
        BoundNumber::Exact(b) => *b == (derived.order() as u64).into(),
        BoundNumber::Real(_) => false,
    };
    report.measure("attained", attained);
    report
}

/// The residual bound: with `Z` the hypercenter and `t = |G/Z|`, the
/// nilpotent residual `L` is normal, `G/L` is nilpotent, and
/// `|L| <= t^k`.
pub fn check_theorem_b(group: &GroupTable) -> CheckReport {
    let mut report = CheckReport::new("theorem-b", group.label());
    let profile = nilpotency_profile(group);
    let z = profile.hypercenter();
    let l = profile.residual();
    let t = index(group, z);
    report
        .measure("t", t)
        .measure("hypercenter_order", z.order())
        .measure("residual_order", l.order())
        .measure("zl", profile.zl)
        .note(HYPERCENTRAL_NOTE);
    if !profile.upper.stabilized || !profile.lower.stabilized {
        report.violate("a central series failed to stabilize");
    }
    residual_is_sound(group, l, &mut report);
    if (t == 1) != profile.nilpotent {
        report.violate(format!("t = {t} but nilpotent = {}", profile.nilpotent));
    }
    if t == 1 {
        if !l.is_trivial() {
            report.violate(format!("hypercentral group with residual {}", members(l)));
        }
        report.note("t = 1: nilpotent group, residual is trivial");
        return report;
    }
    let bound = theorem_b_bound(t).expect("t >= 1");
    report.compare(l.order(), &bound);
    report
}

/// `L` must be normal with nilpotent quotient.
fn residual_is_sound(group: &GroupTable, l: &Subgroup, report: &mut CheckReport) {
    if !is_normal(group, l) {
        report.violate(format!("residual {} is not normal", members(l)));
        return;
    }
    match quotient(group, l) {
        Ok(map) if is_nilpotent(map.target()) => {}
        Ok(_) => {
            report.violate(format!("G/L is not nilpotent for L = {}", members(l)));
        }
        Err(e) => {
            report.violate(format!("G/L could not be formed: {e}"));
        }
    }
}

/// Finite form of Baer's theorem at level `n`: `ζ_n(G) = G` exactly when
/// `γ_{n+1}(G) = 1`.
pub fn check_baer_duality(group: &GroupTable, n: usize) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::input("Baer duality needs n >= 1"));
    }
    let upper = upper_central_series(group);
    let lower = lower_central_series(group);
    Ok(baer_duality_with(group, &upper, &lower, n))
}

fn baer_duality_with(
    group: &GroupTable,
    upper: &CentralSeries,
    lower: &CentralSeries,
    n: usize,
) -> CheckReport {
    let mut report = CheckReport::new("baer-duality", group.label());
    let zeta = upper.term(n);
    let gamma = lower.term(n + 1);
    report
        .measure("n", n)
        .measure("quotient_order", index(group, zeta))
        .measure("gamma_order", gamma.order());
    let full = zeta.is_whole();
    let trivial = gamma.is_trivial();
    if full != trivial {
        report.violate(format!(
            "ζ_{n} = G is {full} but γ_{} = 1 is {trivial}",
            n + 1
        ));
    } else if full {
        report.note("both sides hold: G is nilpotent of class at most n");
    }
    report
}

/// Series-level duality: for nilpotent `G` both series have the same
/// length; otherwise both stop short.
pub fn check_series_duality(group: &GroupTable) -> CheckReport {
    let mut report = CheckReport::new("baer-duality", group.label());
    let upper = upper_central_series(group);
    let lower = lower_central_series(group);
    let upper_full = upper.stable_term().is_whole();
    let lower_trivial = lower.stable_term().is_trivial();
    report
        .measure("upper_orders", upper.orders())
        .measure("lower_orders", lower.orders())
        .measure("nilpotent", upper_full);
    if upper_full != lower_trivial {
        report.violate(format!(
            "upper series reaches G: {upper_full}, lower series reaches 1: {lower_trivial}"
        ));
    } else if upper_full {
        report
            .measure("class_upper", upper.length())
            .measure("class_lower", lower.length());
        if upper.length() != lower.length() {
            report.violate(format!(
                "class {} from the upper series, {} from the lower",
                upper.length(),
                lower.length()
            ));
        }
    } else {
        report
            .measure("hypercenter_order", upper.stable_term().order())
            .measure("residual_order", lower.stable_term().order());
    }
    report
}

/// Baer duality at every level up to one past the longer series, plus the
/// series-level comparison.
pub fn baer_reports(group: &GroupTable) -> Vec<CheckReport> {
    let upper = upper_central_series(group);
    let lower = lower_central_series(group);
    let top = upper.length().max(lower.length()) + 1;
    let mut reports = vec![check_series_duality(group)];
    reports.extend((1..=top).map(|n| baer_duality_with(group, &upper, &lower, n)));
    reports
}

/// All `(K, n)` with `K·ζ_n(G) = G`, for `1 <= n <= zl(G) + 1`; ordered by
/// `n`, then by the subgroup order of [`enumerate_subgroups`].
pub fn find_hekster_pairs(group: &GroupTable, caps: &Caps) -> Result<Vec<(Subgroup, usize)>> {
    let subgroups = enumerate_subgroups(group, caps)?;
    let upper = upper_central_series(group);
    let mut pairs = Vec::new();
    for n in 1..=upper.length() + 1 {
        let zeta = upper.term(n);
        for k in &subgroups {
            if product_set(group, k, zeta).is_whole() {
                pairs.push((k.clone(), n));
            }
        }
    }
    Ok(pairs)
}

/// Hekster's identities for `G = K·ζ_n(G)`:
/// `γ_{n+1}(G) = γ_{n+1}(K)`, `ζ_n(K) = K ∩ ζ_n(G)` and
/// `γ_{n+1}(G) ∩ ζ_n(G) = γ_{n+1}(K) ∩ ζ_n(K)`.
pub fn check_hekster(group: &GroupTable, k: &Subgroup, n: usize) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::input("Hekster's lemma needs n >= 1"));
    }
    if !k.is_closed_in(group) {
        return Err(Error::input(format!(
            "K = {} is not a subgroup of {}",
            members(k),
            group.label()
        )));
    }
    let upper_g = upper_central_series(group);
    let lower_g = lower_central_series(group);
    let zeta_g = upper_g.term(n);
    if !product_set(group, k, zeta_g).is_whole() {
        return Err(Error::input(format!(
            "K of order {} does not satisfy G = K·ζ_{n}(G)",
            k.order()
        )));
    }
    let (k_table, embedding) = subgroup_table(group, k);
    let lift = |s: &Subgroup| embed_subgroup(group.order(), &embedding, s);
    let zeta_k = lift(upper_central_series(&k_table).term(n));
    let gamma_k = lift(lower_central_series(&k_table).term(n + 1));
    let gamma_g = lower_g.term(n + 1);

    let mut report = CheckReport::new("hekster", group.label());
    report
        .measure("n", n)
        .measure("k_order", k.order())
        .measure("k_members", k.members().to_vec())
        .measure("gamma_order", gamma_g.order())
        .measure("zeta_order", zeta_g.order());
    let identities = [
        ("γ_{n+1}(G) = γ_{n+1}(K)", gamma_g.clone(), gamma_k.clone()),
        (
            "ζ_n(K) = K ∩ ζ_n(G)",
            zeta_k.clone(),
            k.intersection(zeta_g),
        ),
        (
            "γ_{n+1}(G) ∩ ζ_n(G) = γ_{n+1}(K) ∩ ζ_n(K)",
            gamma_g.intersection(zeta_g),
            gamma_k.intersection(&zeta_k),
        ),
    ];
    for (name, left, right) in identities {
        if left != right {
            report.violate(format!("{name}: {} vs {}", members(&left), members(&right)));
        }
    }
    Ok(report)
}

/// Every pair from [`find_hekster_pairs`] checked, folded into one report.
/// Groups past the subgroup-enumeration cap are skipped.
pub fn hekster_sweep(group: &GroupTable, caps: &Caps) -> CheckReport {
    let mut report = CheckReport::new("hekster", group.label());
    let pairs = match find_hekster_pairs(group, caps) {
        Ok(pairs) => pairs,
        Err(e) => {
            report.skip(format!("pairs not enumerated: {e}"));
            return report;
        }
    };
    let nontrivial = pairs.iter().filter(|(k, _)| !k.is_whole()).count();
    report
        .measure("pairs", pairs.len())
        .measure("nontrivial_pairs", nontrivial);
    for (k, n) in &pairs {
        match check_hekster(group, k, *n) {
            Ok(r) if r.verdict == Verdict::Violated => {
                for w in r.witnesses {
                    report.violate(format!("K = {}, n = {n}: {w}", members(k)));
                }
            }
            Ok(_) => {}
            Err(e) => {
                report.violate(format!("K = {}, n = {n}: {e}", members(k)));
            }
        }
    }
    report
}

fn require_hypercentral_normal(group: &GroupTable, w: &Subgroup) -> Result<()> {
    if !is_normal(group, w) {
        return Err(Error::input(format!(
            "W of order {} is not normal in {}",
            w.order(),
            group.label()
        )));
    }
    let z = upper_central_series(group).stable_term().clone();
    if !w.is_subset(&z) {
        return Err(Error::input(format!(
            "W of order {} is not inside the hypercenter of {}",
            w.order(),
            group.label()
        )));
    }
    Ok(())
}

/// Kaloujnine: for a normal `W` inside the hypercenter, `G/C_G(W)` is
/// nilpotent.
pub fn check_kaloujnine(group: &GroupTable, w: &Subgroup) -> Result<CheckReport> {
    require_hypercentral_normal(group, w)?;
    let mut report = CheckReport::new("kaloujnine", group.label());
    let c = centralizer(group, w);
    report
        .measure("w_order", w.order())
        .measure("centralizer_order", c.order());
    match quotient(group, &c) {
        Ok(map) => {
            let profile = nilpotency_profile(map.target());
            report.measure("quotient_order", map.target().order());
            match profile.class {
                Some(class) => {
                    report.measure("quotient_class", class);
                }
                None => {
                    report.violate(format!(
                        "G/C_G(W) of order {} is not nilpotent for W = {}",
                        map.target().order(),
                        members(w)
                    ));
                }
            }
        }
        Err(e) => {
            report.violate(format!("C_G(W) = {} gives no quotient: {e}", members(&c)));
        }
    }
    Ok(report)
}

/// For a normal `W` inside the hypercenter and `t = |G/W|`, the nilpotent
/// residual has order at most `t^k`.
pub fn check_lemma3_pipeline(group: &GroupTable, w: &Subgroup) -> Result<CheckReport> {
    require_hypercentral_normal(group, w)?;
    let mut report = CheckReport::new("lemma3", group.label());
    let l = lower_central_series(group).stable_term().clone();
    let t = index(group, w);
    report
        .measure("t", t)
        .measure("w_order", w.order())
        .measure("residual_order", l.order())
        .note(HYPERCENTRAL_NOTE);
    if t == 1 {
        if !l.is_trivial() {
            report.violate(format!("G = W is hypercentral but L = {}", members(&l)));
        }
        return Ok(report);
    }
    let bound = theorem_b_bound(t).expect("t >= 1");
    report.compare(l.order(), &bound);
    Ok(report)
}

/// Normal closures of single hypercenter elements, deduplicated, in
/// first-seen order.
pub fn hypercentral_normal_subgroups(group: &GroupTable) -> Vec<Subgroup> {
    let z = upper_central_series(group).stable_term().clone();
    let mut out: Vec<Subgroup> = Vec::new();
    for &x in z.members() {
        let w = normal_closure(group, &[x]).expect("hypercenter members are in range");
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// [`check_kaloujnine`] for every subgroup of [`hypercentral_normal_subgroups`].
pub fn kaloujnine_reports(group: &GroupTable) -> Vec<CheckReport> {
    per_hypercentral_subgroup(group, "kaloujnine", check_kaloujnine)
}

/// [`check_lemma3_pipeline`] for every subgroup of
/// [`hypercentral_normal_subgroups`].
pub fn lemma3_reports(group: &GroupTable) -> Vec<CheckReport> {
    per_hypercentral_subgroup(group, "lemma3", check_lemma3_pipeline)
}

fn per_hypercentral_subgroup(
    group: &GroupTable,
    check: &str,
    f: fn(&GroupTable, &Subgroup) -> Result<CheckReport>,
) -> Vec<CheckReport> {
    hypercentral_normal_subgroups(group)
        .iter()
        .map(|w| {
            f(group, w).unwrap_or_else(|e| {
                // The subgroups come from the engine itself, so a rejected
                // hypothesis is an engine fault.
                let mut r = CheckReport::new(check, group.label());
                r.violate(format!("W = {}: {e}", members(w)));
                r
            })
        })
        .collect()
}

/// Upper series by the commutator criterion against the quotient
/// definition, and, for `|G| <= 16`, subgroup enumeration against a subset
/// scan.
pub fn check_oracle_equivalence(group: &GroupTable, caps: &Caps) -> CheckReport {
    let mut report = CheckReport::new("oracle-equivalence", group.label());
    let fast = upper_central_series(group);
    report.measure("upper_orders", fast.orders());
    match upper_central_series_by_quotients(group) {
        Err(e) => {
            report.violate(format!("definitional upper series failed: {e}"));
        }
        Ok(slow) => {
            report.measure("oracle_upper_orders", slow.orders());
            if fast != slow {
                let at = fast
                    .terms
                    .iter()
                    .zip(&slow.terms)
                    .position(|(a, b)| a != b)
                    .unwrap_or(fast.terms.len().min(slow.terms.len()));
                report.violate(format!("upper central series differ from term {at}"));
            }
        }
    }
    if group.order() <= 16 && group.order() <= caps.max_subgroup_order {
        let lattice = enumerate_subgroups(group, caps);
        let scan = subgroups_by_subset_scan(group);
        match (lattice, scan) {
            (Ok(lattice), Ok(scan)) => {
                report.measure("subgroup_count", lattice.len());
                report.measure("oracle_subgroup_count", scan.len());
                if lattice != scan {
                    report.violate(format!(
                        "join-closure found {} subgroups, subset scan {}",
                        lattice.len(),
                        scan.len()
                    ));
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                report.violate(format!("subgroup enumeration failed: {e}"));
            }
        }
    } else {
        report.note("subgroup lattice comparison only runs for |G| <= 16");
    }
    report
}

/// Structured summary of a group: both series, hypercenter, residual.
pub fn analysis_json(group: &GroupTable) -> Value {
    let profile = nilpotency_profile(group);
    let z = center(group);
    json!({
        "group": group.label(),
        "order": group.order(),
        "center_order": z.order(),
        "center": z.members(),
        "upper_series": profile.upper.terms.iter().map(Subgroup::members).collect::<Vec<_>>(),
        "upper_orders": profile.upper.orders(),
        "lower_series": profile.lower.terms.iter().map(Subgroup::members).collect::<Vec<_>>(),
        "lower_orders": profile.lower.orders(),
        "zl": profile.zl,
        "hypercenter_order": profile.hypercenter().order(),
        "residual_order": profile.residual().order(),
        "nilpotent": profile.nilpotent,
        "class": profile.class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_group_spec;

    fn g(spec: &str) -> GroupTable {
        parse_group_spec(spec, 2048).unwrap()
    }

    fn num(r: &CheckReport, key: &str) -> u64 {
        r.measured[key]
            .as_u64()
            .unwrap_or_else(|| panic!("{key} in {:?}", r.measured))
    }

    #[test]
    fn wiegold_examples() {
        let r = check_schur_wiegold(&g("Q8()"));
        assert_eq!((num(&r, "t"), num(&r, "derived_order")), (4, 2));
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.measured["attained"], true);

        let r = check_schur_wiegold(&g("ESP(3)"));
        assert_eq!((num(&r, "t"), num(&r, "derived_order")), (9, 3));
        assert_eq!(r.measured["attained"], true);

        let r = check_schur_wiegold(&g("S(3)"));
        assert_eq!((num(&r, "t"), num(&r, "derived_order")), (6, 3));
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.measured["attained"], false);
        let bound = r.measured["bound"].as_f64().unwrap();
        assert!((bound - 4.136854781603211).abs() < 1e-12);
    }

    #[test]
    fn theorem_b_examples() {
        let r = check_theorem_b(&g("C(2) x S(3)"));
        assert_eq!((num(&r, "t"), num(&r, "residual_order")), (6, 3));
        assert_eq!(r.verdict, Verdict::Holds);
        let r = check_theorem_b(&g("SL23()"));
        assert_eq!((num(&r, "t"), num(&r, "residual_order")), (12, 8));
        assert!((r.measured["bound"].as_f64().unwrap() - 297.8535442754312).abs() < 1e-9);
        let r = check_theorem_b(&g("D(8)"));
        assert_eq!((num(&r, "t"), num(&r, "residual_order")), (1, 1));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn baer_examples() {
        let d4 = g("D(4)");
        let r = check_baer_duality(&d4, 1).unwrap();
        assert_eq!((num(&r, "quotient_order"), num(&r, "gamma_order")), (4, 2));
        assert_eq!(r.verdict, Verdict::Holds);
        let r = check_baer_duality(&d4, 2).unwrap();
        assert_eq!((num(&r, "quotient_order"), num(&r, "gamma_order")), (1, 1));
        for n in 1..5 {
            let r = check_baer_duality(&g("S(3)"), n).unwrap();
            assert_eq!((num(&r, "quotient_order"), num(&r, "gamma_order")), (6, 3));
            assert_eq!(r.verdict, Verdict::Holds);
        }
        assert!(check_baer_duality(&d4, 0).is_err());
    }

    #[test]
    fn hekster_pairs() {
        let s3 = g("S(3)");
        let pairs = find_hekster_pairs(&s3, &Caps::default()).unwrap();
        assert!(pairs.iter().all(|(k, _)| k.is_whole()));
        assert_eq!(pairs.len(), 1);

        let c6 = g("C(6)");
        let pairs = find_hekster_pairs(&c6, &Caps::default()).unwrap();
        assert_eq!(pairs.iter().filter(|(_, n)| *n == 1).count(), 4);

        let g12 = g("C(2) x S(3)");
        let pairs = find_hekster_pairs(&g12, &Caps::default()).unwrap();
        let s3_factor = pairs
            .iter()
            .find(|(k, n)| {
                *n == 1 && k.order() == 6 && !k.is_whole() && {
                    let (t, _) = subgroup_table(&g12, k);
                    !t.is_abelian()
                }
            })
            .expect("S3 factor pairs with ζ_1");
        let r = check_hekster(&g12, &s3_factor.0, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(num(&r, "gamma_order"), 3);
    }

    #[test]
    fn hekster_hypothesis_failure_is_an_error() {
        let s3 = g("S(3)");
        let a3 = commutator_subgroup(&s3, &s3.whole(), &s3.whole());
        assert!(matches!(check_hekster(&s3, &a3, 1), Err(Error::Input(_))));
    }

    #[test]
    fn kaloujnine_and_lemma3() {
        let g12 = g("C(2) x S(3)");
        let z = upper_central_series(&g12).stable_term().clone();
        let r = check_kaloujnine(&g12, &z).unwrap();
        assert_eq!(num(&r, "quotient_order"), 1);
        let r = check_kaloujnine(&g12, &g12.trivial()).unwrap();
        assert_eq!(num(&r, "quotient_order"), 1);

        let r = check_lemma3_pipeline(&g12, &g12.trivial()).unwrap();
        assert_eq!((num(&r, "t"), num(&r, "residual_order")), (12, 3));
        assert_eq!(r.verdict, Verdict::Holds);

        let sl = g("SL23()");
        let z1 = center(&sl);
        let r = check_lemma3_pipeline(&sl, &z1).unwrap();
        assert_eq!((num(&r, "t"), num(&r, "residual_order")), (12, 8));

        let s3 = g("S(3)");
        let a3 = commutator_subgroup(&s3, &s3.whole(), &s3.whole());
        assert!(check_kaloujnine(&s3, &a3).is_err());
        assert!(check_lemma3_pipeline(&s3, &a3).is_err());
    }

    #[test]
    fn lemma3_with_full_hypercenter_matches_theorem_b() {
        for spec in ["C(2) x S(3)", "SL23()", "D(4) x S(3)"] {
            let grp = g(spec);
            let z = upper_central_series(&grp).stable_term().clone();
            let a = check_lemma3_pipeline(&grp, &z).unwrap();
            let b = check_theorem_b(&grp);
            assert_eq!(a.verdict, b.verdict);
            assert_eq!(a.measured["t"], b.measured["t"]);
            assert_eq!(a.measured["bound"], b.measured["bound"]);
        }
    }

    #[test]
    fn violated_reports_have_witnesses() {
        let mut r = CheckReport::new("x", "y");
        r.violate("w");
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(!r.witnesses.is_empty());
    }
}
