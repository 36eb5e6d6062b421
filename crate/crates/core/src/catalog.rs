//! Named group constructors and the default verification catalogs.
//!
//! `D(n)` is the dihedral group of order `2n`, the symmetry group of an
//! `n`-gon.

use crate::dsl::GroupSpec;
use crate::error::{Error, Result};
use crate::group::{validate_cayley_table, Caps, GroupTable};
use crate::perm::{close_permutation_generators, from_cycles};
use crate::zg_module::{build_module, FiniteModule};

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn table_from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| mul(a, b)).collect())
        .collect()
}

fn cyclic(n: usize, max_order: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::input("C(n) needs n >= 1"));
    }
    if n > max_order {
        return Err(Error::resource(format!("C({n})"), max_order));
    }
    validate_cayley_table(&table_from_fn(n, |a, b| (a + b) % n), max_order)
}

/// Index `k + n·e` stands for `rᵏ sᵉ`, with `s r s = r⁻¹`.
fn dihedral(n: usize, max_order: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::input("D(n) needs n >= 1"));
    }
    if 2 * n > max_order {
        return Err(Error::resource(
            format!("D({n}) of order {}", 2 * n),
            max_order,
        ));
    }
    let table = table_from_fn(2 * n, |a, b| {
        let (ka, ea) = (a % n, a / n);
        let (kb, eb) = (b % n, b / n);
        let k = if ea == 0 { ka + kb } else { ka + n - kb } % n;
        k + n * ((ea + eb) % 2)
    });
    validate_cayley_table(&table, max_order)
}

fn symmetric(n: usize, max_order: usize) -> Result<GroupTable> {
    if !(1..=6).contains(&n) {
        return Err(Error::input(format!("S(n) needs 1 <= n <= 6, got {n}")));
    }
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(from_cycles(n, &[vec![1, 2]])?);
    }
    if n >= 3 {
        gens.push(from_cycles(n, &[(1..=n).collect()])?);
    }
    close_permutation_generators(n, &gens, max_order)
}

fn alternating(n: usize, max_order: usize) -> Result<GroupTable> {
    if !(1..=6).contains(&n) {
        return Err(Error::input(format!("A(n) needs 1 <= n <= 6, got {n}")));
    }
    let gens = (3..=n)
        .map(|k| from_cycles(n, &[vec![1, 2, k]]))
        .collect::<Result<Vec<_>>>()?;
    close_permutation_generators(n.max(1), &gens, max_order)
}

/// Index `4·s + u` stands for `(-1)ˢ·u` with `u ∈ {1, i, j, k}`.
fn quaternion(max_order: usize) -> Result<GroupTable> {
    // unit products (sign, unit) for 1, i, j, k
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table = table_from_fn(8, |a, b| {
        let (sign, unit) = UNITS[a % 4][b % 4];
        4 * ((a / 4 + b / 4 + sign) % 2) + unit
    });
    validate_cayley_table(&table, max_order)
}

/// 2×2 matrices of determinant 1 over GF(3), in lexicographic entry order.
fn sl23(max_order: usize) -> Result<GroupTable> {
    let mut mats = Vec::new();
    for code in 0..81usize {
        let m = [code / 27 % 3, code / 9 % 3, code / 3 % 3, code % 3];
        if (m[0] * m[3] + 2 * m[1] * m[2]) % 3 == 1 {
            mats.push(m);
        }
    }
    let mul = |x: [usize; 4], y: [usize; 4]| {
        [
            (x[0] * y[0] + x[1] * y[2]) % 3,
            (x[0] * y[1] + x[1] * y[3]) % 3,
            (x[2] * y[0] + x[3] * y[2]) % 3,
            (x[2] * y[1] + x[3] * y[3]) % 3,
        ]
    };
    let table = table_from_fn(mats.len(), |a, b| {
        let c = mul(mats[a], mats[b]);
        mats.iter()
            .position(|&m| m == c)
            .expect("SL(2,3) is closed")
    });
    validate_cayley_table(&table, max_order)
}

fn extraspecial_prime(p: u64, max_order: usize) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::input(format!(
            "extraspecial groups need a prime, got {p}"
        )));
    }
    let p = p as usize;
    match p.checked_pow(3) {
        Some(n) if n <= max_order => Ok(p),
        _ => Err(Error::resource(
            format!("extraspecial group of order {p}³"),
            max_order,
        )),
    }
}

/// Extraspecial group of order p³, plus type: exponent p for odd p
/// (Heisenberg group mod p), D(4) for p = 2.
fn extraspecial_plus(p: u64, max_order: usize) -> Result<GroupTable> {
    let p = extraspecial_prime(p, max_order)?;
    if p == 2 {
        return dihedral(4, max_order);
    }
    // (a, b, c)·(a', b', c') = (a + a', b + b', c + c' + a·b')
    let split = |x: usize| (x / (p * p), x / p % p, x % p);
    let table = table_from_fn(p * p * p, |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
    });
    validate_cayley_table(&table, max_order)
}

/// Extraspecial group of order p³, minus type: exponent p² for odd p
/// (`C(p²) ⋊ C(p)` acting by `x ↦ (1+p)x`), Q8 for p = 2.
fn extraspecial_minus(p: u64, max_order: usize) -> Result<GroupTable> {
    let p = extraspecial_prime(p, max_order)?;
    if p == 2 {
        return quaternion(max_order);
    }
    let q = p * p;
    let twist: Vec<usize> = (0..p)
        .scan(1usize, |acc, _| {
            let cur = *acc;
            *acc = *acc * (1 + p) % q;
            Some(cur)
        })
        .collect();
    // index x·p + y stands for (x, y), x ∈ C(p²), y ∈ C(p)
    let table = table_from_fn(q * p, |a, b| {
        let (x1, y1) = (a / p, a % p);
        let (x2, y2) = (b / p, b % p);
        ((x1 + twist[y1] * x2) % q) * p + (y1 + y2) % p
    });
    validate_cayley_table(&table, max_order)
}

fn param(name: &str, params: &[u64], arity: usize) -> Result<()> {
    if params.len() != arity {
        return Err(Error::input(format!(
            "{name} takes {arity} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Builds a named family member.
///
/// Families: `C(n)`, `D(n)` (order 2n), `S(n)` and `A(n)` for n ≤ 6, `Q8()`,
/// `SL23()`, `ESP(p)` and `ESM(p)` for the two extraspecial groups of order
/// p³.
pub fn construct_named(name: &str, params: &[u64], max_order: usize) -> Result<GroupTable> {
    let group = match name {
        "C" | "D" | "S" | "A" | "ESP" | "ESM" => {
            param(name, params, 1)?;
            let n = usize::try_from(params[0]).map_err(|_| Error::input("parameter too large"))?;
            match name {
                "C" => cyclic(n, max_order)?,
                "D" => dihedral(n, max_order)?,
                "S" => symmetric(n, max_order)?,
                "A" => alternating(n, max_order)?,
                "ESP" => extraspecial_plus(params[0], max_order)?,
                _ => extraspecial_minus(params[0], max_order)?,
            }
        }
        "Q8" => {
            param(name, params, 0)?;
            quaternion(max_order)?
        }
        "SL23" => {
            param(name, params, 0)?;
            sl23(max_order)?
        }
        _ => return Err(Error::input(format!("unknown group family '{name}'"))),
    };
    let params: Vec<String> = params.iter().map(u64::to_string).collect();
    Ok(group.with_label(format!("{name}({})", params.join(", "))))
}

/// Spec text of every builtin catalog entry, in catalog order.
pub const BUILTIN_CATALOG: &[&str] = &[
    "C(1)",
    "C(2)",
    "C(3)",
    "C(4)",
    "C(5)",
    "C(6)",
    "C(7)",
    "C(8)",
    "C(9)",
    "C(10)",
    "C(11)",
    "C(12)",
    "D(3)",
    "D(4)",
    "D(5)",
    "D(6)",
    "D(7)",
    "D(8)",
    "S(3)",
    "S(4)",
    "A(4)",
    "A(5)",
    "Q8()",
    "ESP(3)",
    "ESM(3)",
    "SL23()",
    "C(2) x S(3)",
    "C(3) x S(3)",
    "C(4) x A(4)",
    "D(4) x S(3)",
    "C(2) x SL23()",
    "Q8() x S(3)",
];

pub fn builtin_catalog_specs() -> Vec<GroupSpec> {
    BUILTIN_CATALOG
        .iter()
        .map(|s| GroupSpec::parse(s).expect("builtin specs parse"))
        .collect()
}

pub fn builtin_catalog() -> Vec<GroupTable> {
    builtin_catalog_specs()
        .iter()
        .map(|s| s.build(2048).expect("builtin specs build"))
        .collect()
}

/// A module catalog entry: a name plus the data handed to [`build_module`].
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    pub name: &'static str,
    pub invariants: Vec<u64>,
    pub action: Vec<Vec<Vec<i64>>>,
}

impl ModuleSpec {
    pub fn build(&self, caps: &Caps) -> Result<FiniteModule> {
        build_module(&self.invariants, &self.action, caps).map(|m| m.with_label(self.name))
    }
}

fn module(name: &'static str, invariants: &[u64], action: &[&[&[i64]]]) -> ModuleSpec {
    ModuleSpec {
        name,
        invariants: invariants.to_vec(),
        action: action
            .iter()
            .map(|m| m.iter().map(|row| row.to_vec()).collect())
            .collect(),
    }
}

pub fn builtin_module_specs() -> Vec<ModuleSpec> {
    vec![
        module("trivial", &[], &[]),
        module("C4 trivial", &[4], &[&[&[1]]]),
        module("C2xC2 trivial", &[2, 2], &[&[&[1, 0], &[0, 1]]]),
        module("C3 negation", &[3], &[&[&[-1]]]),
        module("Z4 negation", &[4], &[&[&[-1]]]),
        module("C5 negation", &[5], &[&[&[-1]]]),
        module("Z8 times 3", &[8], &[&[&[3]]]),
        module("C5 times 2", &[5], &[&[&[2]]]),
        module("C7 times 2", &[7], &[&[&[2]]]),
        module("C3xC3 swap", &[3, 3], &[&[&[0, 1], &[1, 0]]]),
        module(
            "C2xC2 GL(2,2)",
            &[2, 2],
            &[&[&[0, 1], &[1, 0]], &[&[1, 1], &[0, 1]]],
        ),
        module("C3 central + C3 negation", &[3, 3], &[&[&[1, 0], &[0, -1]]]),
        module("Z4 + C3 negation", &[4, 3], &[&[&[-1, 0], &[0, -1]]]),
        module("C4 trivial + C5 times 2", &[4, 5], &[&[&[1, 0], &[0, 2]]]),
        module(
            "C2xC2 swap + C3 negation",
            &[2, 2, 3],
            &[&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]],
        ),
        module(
            "C3xC3 reflection group S3",
            &[3, 3],
            &[&[&[0, 1], &[1, 0]], &[&[0, 1], &[-1, -1]]],
        ),
    ]
}

pub fn builtin_module_catalog() -> Vec<FiniteModule> {
    builtin_module_specs()
        .iter()
        .map(|s| s.build(&Caps::default()).expect("builtin modules build"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center, commutator_subgroup};
    use crate::series::is_nilpotent;

    #[test]
    fn named_orders() {
        let cases = [
            ("C", vec![6], 6),
            ("C", vec![1], 1),
            ("D", vec![4], 8),
            ("D", vec![1], 2),
            ("S", vec![4], 24),
            ("S", vec![6], 720),
            ("A", vec![5], 60),
            ("A", vec![2], 1),
            ("Q8", vec![], 8),
            ("SL23", vec![], 24),
            ("ESP", vec![5], 125),
            ("ESM", vec![5], 125),
        ];
        for (name, params, order) in cases {
            let g = construct_named(name, &params, 2048).unwrap();
            assert_eq!(g.order(), order, "{name}{params:?}");
            assert_eq!(g.label(), GroupSpec::parse(g.label()).unwrap().to_string());
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            construct_named("S", &[7], 10_000),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            construct_named("ESP", &[4], 2048),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            construct_named("ESP", &[13], 2048),
            Err(Error::Resource { .. })
        ));
        assert!(matches!(
            construct_named("Q8", &[1], 2048),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            construct_named("C", &[0], 2048),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            construct_named("Z", &[2], 2048),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn extraspecial_groups_are_extraspecial() {
        for p in [2u64, 3, 5] {
            for name in ["ESP", "ESM"] {
                let g = construct_named(name, &[p], 2048).unwrap();
                let p = p as usize;
                assert_eq!(g.order(), p * p * p);
                let z = center(&g);
                let d = commutator_subgroup(&g, &g.whole(), &g.whole());
                assert_eq!((z.order(), d.order()), (p, p), "{name}({p})");
                assert_eq!(z, d);
            }
        }
    }

    #[test]
    fn extraspecial_exponents() {
        let exponent = |g: &GroupTable| {
            g.elements()
                .map(|x| {
                    let mut y = x;
                    let mut k = 1;
                    while y != g.identity() {
                        y = g.mul(y, x);
                        k += 1;
                    }
                    k
                })
                .max()
                .unwrap()
        };
        assert_eq!(exponent(&construct_named("ESP", &[3], 2048).unwrap()), 3);
        assert_eq!(exponent(&construct_named("ESM", &[3], 2048).unwrap()), 9);
        assert_eq!(exponent(&construct_named("ESP", &[5], 2048).unwrap()), 5);
        assert_eq!(exponent(&construct_named("ESM", &[5], 2048).unwrap()), 25);
    }

    #[test]
    fn d4_center_and_products() {
        let d4 = construct_named("D", &[4], 2048).unwrap();
        assert_eq!(center(&d4).order(), 2);
        let g = crate::dsl::parse_group_spec("D(4) x C(3)", 2048).unwrap();
        assert_eq!((g.order(), center(&g).order()), (24, 6));
    }

    #[test]
    fn catalog_is_pinned() {
        let orders: Vec<usize> = builtin_catalog().iter().map(GroupTable::order).collect();
        assert_eq!(
            orders,
            vec![
                1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 6, 8, 10, 12, 14, 16, 6, 24, 12, 60, 8, 27,
                27, 24, 12, 18, 48, 48, 48, 48
            ]
        );
        for g in builtin_catalog() {
            g.check_axioms().unwrap();
        }
    }

    #[test]
    fn catalog_has_non_nilpotent_group_with_nontrivial_hypercenter() {
        let found = builtin_catalog().iter().any(|g| {
            let z = crate::series::hypercenter(g);
            !z.is_trivial() && !z.is_whole()
        });
        assert!(found);
    }

    #[test]
    fn module_catalog_shape() {
        let modules = builtin_module_catalog();
        assert_eq!(modules[0].order(), 1);
        let gl22 = modules
            .iter()
            .find(|m| m.label() == "C2xC2 GL(2,2)")
            .unwrap();
        assert_eq!(gl22.acting_group().order(), 6);
        assert!(!is_nilpotent(gl22.acting_group()));
    }
}
