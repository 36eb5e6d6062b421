//! Permutation groups closed into multiplication tables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::GroupTable;

/// A permutation of `0..degree`, stored as its image list.
///
/// Products compose left to right: `(x·y)(i) = y(x(i))`.
pub type Permutation = Vec<u32>;

pub fn identity_permutation(degree: usize) -> Permutation {
    (0..degree as u32).collect()
}

pub fn compose(x: &[u32], y: &[u32]) -> Permutation {
    x.iter().map(|&i| y[i as usize]).collect()
}

pub fn check_permutation(degree: usize, p: &[u32]) -> Result<()> {
    if p.len() != degree {
        return Err(Error::input(format!(
            "permutation has {} images but the degree is {degree}",
            p.len()
        )));
    }
    let mut hit = vec![false; degree];
    for &i in p {
        let i = i as usize;
        if i >= degree || hit[i] {
            return Err(Error::input(format!(
                "{p:?} is not a bijection on 0..{degree}"
            )));
        }
        hit[i] = true;
    }
    Ok(())
}

/// Builds a permutation from cycles over 1-based points. Cycles are applied
/// left to right.
pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
    let mut perm = identity_permutation(degree);
    for cycle in cycles {
        let mut seen = Vec::with_capacity(cycle.len());
        for &pt in cycle {
            if pt == 0 || pt > degree {
                return Err(Error::input(format!(
                    "cycle point {pt} outside 1..={degree}"
                )));
            }
            if seen.contains(&pt) {
                return Err(Error::input(format!("cycle repeats the point {pt}")));
            }
            seen.push(pt);
        }
        let mut step = identity_permutation(degree);
        for (i, &pt) in cycle.iter().enumerate() {
            let next = cycle[(i + 1) % cycle.len()];
            step[pt - 1] = (next - 1) as u32;
        }
        perm = compose(&perm, &step);
    }
    Ok(perm)
}

/// The elements of a closed permutation group in breadth-first order from
/// the identity, with the generator step that first reached each element.
pub(crate) struct Closure {
    pub(crate) elements: Vec<Permutation>,
    /// `right[x * k + s]` is the index of `elements[x] · generators[s]`.
    right: Vec<usize>,
    /// For every non-identity element, (BFS parent, generator index).
    parent: Vec<(usize, usize)>,
    generators: usize,
}

pub(crate) fn close(
    degree: usize,
    generators: &[Permutation],
    max_order: usize,
) -> Result<Closure> {
    for g in generators {
        check_permutation(degree, g)?;
    }
    let k = generators.len();
    let start = identity_permutation(degree);
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut elements = vec![start];
    let mut parent = vec![(0, 0)];
    let mut right = Vec::new();
    let mut next = 0;
    while next < elements.len() {
        for (s, g) in generators.iter().enumerate() {
            let y = compose(&elements[next], g);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    if j >= max_order {
                        return Err(Error::resource(
                            format!("permutation group on {degree} points"),
                            max_order,
                        ));
                    }
                    index.insert(y.clone(), j);
                    elements.push(y);
                    parent.push((next, s));
                    j
                }
            };
            right.push(j);
        }
        next += 1;
    }
    Ok(Closure {
        elements,
        right,
        parent,
        generators: k,
    })
}

impl Closure {
    /// Fills the multiplication table from the Cayley graph: writing
    /// `y = parent(y)·s`, we get `x·y = (x·parent(y))·s`.
    fn table(&self) -> Vec<u32> {
        let n = self.elements.len();
        let mut product = vec![0u32; n * n];
        for x in 0..n {
            let row = x * n;
            product[row] = x as u32;
            for y in 1..n {
                let (p, s) = self.parent[y];
                let xp = product[row + p] as usize;
                product[row + y] = self.right[xp * self.generators + s] as u32;
            }
        }
        product
    }
}

/// The group generated by `generators`, elements in breadth-first order from
/// the identity with generators tried in the given order.
pub fn close_permutation_generators(
    degree: usize,
    generators: &[Permutation],
    max_order: usize,
) -> Result<GroupTable> {
    let closure = close(degree, generators, max_order)?;
    let label = if generators.is_empty() {
        format!("perm({degree};)")
    } else {
        let gens: Vec<String> = generators.iter().map(|g| cycle_string(g)).collect();
        format!("perm({degree}; {})", gens.join(", "))
    };
    Ok(GroupTable::trusted(
        closure.elements.len(),
        closure.table(),
        0,
        label,
    ))
}

/// Cycle notation over 1-based points, `()` for the identity.
pub fn cycle_string(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_compose_left_to_right() {
        // (1 2) then (1 3): 1 -> 2, 2 -> 1 -> 3, 3 -> 1
        let p = from_cycles(3, &[vec![1, 2], vec![1, 3]]).unwrap();
        assert_eq!(p, vec![1, 2, 0]);
        assert_eq!(cycle_string(&p), "(1 2 3)");
    }

    #[test]
    fn rejects_non_bijections() {
        let err = close_permutation_generators(3, &[vec![0, 0, 1]], 2048).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        let err = close_permutation_generators(3, &[vec![0, 1]], 2048).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn cap_is_a_resource_error() {
        let s5 = [
            from_cycles(5, &[vec![1, 2]]).unwrap(),
            from_cycles(5, &[vec![1, 2, 3, 4, 5]]).unwrap(),
        ];
        let err = close_permutation_generators(5, &s5, 100).unwrap_err();
        assert!(matches!(err, Error::Resource { limit: 100, .. }));
        assert_eq!(
            close_permutation_generators(5, &s5, 120).unwrap().order(),
            120
        );
    }

    #[test]
    fn table_matches_direct_composition() {
        let gens = [
            from_cycles(4, &[vec![1, 2]]).unwrap(),
            from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap(),
        ];
        let closure = close(4, &gens, 2048).unwrap();
        let table = closure.table();
        let n = closure.elements.len();
        assert_eq!(n, 24);
        for x in 0..n {
            for y in 0..n {
                let direct = compose(&closure.elements[x], &closure.elements[y]);
                assert_eq!(closure.elements[table[x * n + y] as usize], direct);
            }
        }
    }
}
