//! Finite-type detection by searching the mutation class of an exchange
//! matrix up to simultaneous row/column permutation.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ExchangeMatrix, Quiver};

/// Simply-laced Dynkin type of a connected tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl std::fmt::Display for DynkinType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl DynkinType {
    pub fn rank(&self) -> usize {
        match *self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    /// Number of positive roots.
    pub fn positive_roots(&self) -> usize {
        match *self {
            DynkinType::A(n) => n * (n + 1) / 2,
            DynkinType::D(n) => n * (n - 1),
            DynkinType::E(6) => 36,
            DynkinType::E(7) => 63,
            DynkinType::E(8) => 120,
            DynkinType::E(_) => unreachable!(),
        }
    }
}

/// Dynkin types of the connected components of `q`'s underlying graph, or
/// `None` if some component is not an A/D/E tree.
pub fn dynkin_components(q: &Quiver) -> Option<Vec<DynkinType>> {
    let n = q.n();
    let b = q.to_matrix();
    if b.max_abs_entry() > 1 {
        return None;
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| b.get(i, j) != 0).collect()).collect();
    let mut comp = vec![usize::MAX; n];
    let mut types = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![];
        let mut stack = vec![s];
        comp[s] = s;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
        let edges: usize = members.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        if edges + 1 != members.len() {
            return None;
        }
        types.push(tree_type(&members, &adj)?);
    }
    types.sort();
    Some(types)
}

fn tree_type(members: &[usize], adj: &[Vec<usize>]) -> Option<DynkinType> {
    let m = members.len();
    let branch: Vec<usize> = members.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
    if branch.is_empty() {
        return Some(DynkinType::A(m));
    }
    if branch.len() > 1 || adj[branch[0]].len() > 3 {
        return None;
    }
    let c = branch[0];
    let mut legs: Vec<usize> = adj[c]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (c, start, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => return len,
                    [w] => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => unreachable!("single branch vertex"),
                }
            }
        })
        .collect();
    legs.sort_unstable();
    match legs.as_slice() {
        [1, 1, _] => Some(DynkinType::D(m)),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Some(DynkinType::E(m)),
        _ => None,
    }
}

/// Outcome of the finite-type search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteTypeReport {
    pub finite: bool,
    /// A member of the mutation class whose components are all Dynkin.
    pub dynkin_member: Option<ExchangeMatrix>,
    pub dynkin_types: Vec<DynkinType>,
    /// Number of matrices in the class up to permutation, when the search
    /// closed.
    pub class_size: Option<usize>,
}

/// Lexicographically least matrix obtained by simultaneously permuting rows
/// and columns.
///
/// Vertices are first split by a permutation-invariant signature; only
/// permutations respecting the split are tried.
pub fn canonical_form(b: &ExchangeMatrix) -> ExchangeMatrix {
    let n = b.n();
    let mut sig: Vec<(Vec<i64>, usize)> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..n).map(|j| b.get(i, j)).collect();
            row.sort_unstable();
            (row, i)
        })
        .collect();
    sig.sort();
    // classes of equal signature, in signature order
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, (s, v)) in sig.iter().enumerate() {
        if i > 0 && sig[i - 1].0 == *s {
            classes.last_mut().unwrap().push(*v);
        } else {
            classes.push(vec![*v]);
        }
    }
    let slot_class: Vec<usize> = classes.iter().enumerate().flat_map(|(ci, c)| std::iter::repeat_n(ci, c.len())).collect();
    let mut best: Option<ExchangeMatrix> = None;
    let mut perm = Vec::with_capacity(n);
    search_perms(b, &classes, &slot_class, &mut perm, &mut vec![false; n], &mut best);
    best.unwrap_or_else(|| b.clone())
}

fn search_perms(
    b: &ExchangeMatrix,
    classes: &[Vec<usize>],
    slot_class: &[usize],
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut Option<ExchangeMatrix>,
) {
    if perm.len() == b.n() {
        let cand = b.permute(perm);
        if best.as_ref().is_none_or(|cur| cand < *cur) {
            *best = Some(cand);
        }
        return;
    }
    for &v in &classes[slot_class[perm.len()]] {
        if used[v] {
            continue;
        }
        perm.push(v);
        used[v] = true;
        if !prefix_worse(b, perm, best) {
            search_perms(b, classes, slot_class, perm, used, best);
        }
        used[v] = false;
        perm.pop();
    }
}

/// True when every completion of the partial permutation is strictly worse
/// than `best` in row-major lexicographic order.
fn prefix_worse(b: &ExchangeMatrix, perm: &[usize], best: &Option<ExchangeMatrix>) -> bool {
    let Some(best) = best else { return false };
    let k = perm.len();
    // only the leading part of row 0 is a prefix of row-major order
    for j in 0..k {
        let v = b.get(perm[0], perm[j]);
        let w = best.get(0, j);
        if v != w {
            return v > w;
        }
    }
    false
}

/// Searches the mutation class of `b0` for a Dynkin member.
///
/// Returns `finite = false` as soon as an entry of absolute value at least 2
/// appears (finite-type classes only contain entries in `{-1, 0, 1}`), or when
/// the class closes without a Dynkin member. Fails with
/// [`Error::CapExceeded`] if more than `cap` classes are visited.
pub fn is_finite_type(b0: &ExchangeMatrix, cap: usize) -> Result<FiniteTypeReport> {
    let n = b0.n();
    let mut seen: HashSet<ExchangeMatrix> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = canonical_form(b0);
    seen.insert(start.clone());
    queue.push_back(b0.clone());
    let mut dynkin: Option<(ExchangeMatrix, Vec<DynkinType>)> = None;
    let infinite = FiniteTypeReport { finite: false, dynkin_member: None, dynkin_types: vec![], class_size: None };
    while let Some(b) = queue.pop_front() {
        if b.max_abs_entry() >= 2 {
            return Ok(infinite);
        }
        if dynkin.is_none() {
            if let Some(types) = dynkin_components(&b.to_quiver()) {
                dynkin = Some((b.clone(), types));
            }
        }
        for k in 0..n {
            let m = b.mutate(k)?;
            let c = canonical_form(&m);
            if seen.insert(c) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                queue.push_back(m);
            }
        }
    }
    Ok(match dynkin {
        Some((member, types)) => FiniteTypeReport {
            finite: true,
            dynkin_member: Some(member),
            dynkin_types: types,
            class_size: Some(seen.len()),
        },
        None => FiniteTypeReport { class_size: Some(seen.len()), ..infinite },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(n: usize, arrows: &[(usize, usize)]) -> Quiver {
        Quiver::new(n, arrows.to_vec()).unwrap()
    }

    #[test]
    fn recognizes_dynkin_shapes() {
        assert_eq!(dynkin_components(&quiver(3, &[(0, 1), (2, 1)])), Some(vec![DynkinType::A(3)]));
        assert_eq!(dynkin_components(&quiver(4, &[(0, 1), (2, 1), (3, 1)])), Some(vec![DynkinType::D(4)]));
        let e6 = quiver(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 2)]);
        assert_eq!(dynkin_components(&e6), Some(vec![DynkinType::E(6)]));
        assert_eq!(dynkin_components(&quiver(3, &[(0, 1), (1, 2), (2, 0)])), None);
        assert_eq!(dynkin_components(&quiver(3, &[(0, 1)])), Some(vec![DynkinType::A(1), DynkinType::A(2)]));
        // affine D4~: center of degree 4
        assert_eq!(dynkin_components(&quiver(5, &[(0, 4), (1, 4), (2, 4), (3, 4)])), None);
    }

    #[test]
    fn three_cycle_is_finite_a3() {
        let b = quiver(3, &[(0, 1), (1, 2), (2, 0)]).to_matrix();
        let r = is_finite_type(&b, 1000).unwrap();
        assert!(r.finite);
        assert_eq!(r.dynkin_types, vec![DynkinType::A(3)]);
        let member = r.dynkin_member.unwrap();
        assert_eq!(dynkin_components(&member.to_quiver()), Some(vec![DynkinType::A(3)]));
    }

    #[test]
    fn kronecker_is_not_finite() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 2], vec![-2, 0]]).unwrap();
        assert!(!is_finite_type(&b, 1000).unwrap().finite);
    }

    #[test]
    fn a2_is_its_own_member() {
        let b = quiver(2, &[(0, 1)]).to_matrix();
        let r = is_finite_type(&b, 10).unwrap();
        assert!(r.finite);
        assert_eq!(r.dynkin_member, Some(b));
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let b = quiver(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).to_matrix();
        let c = canonical_form(&b);
        for perm in [[1, 2, 3, 0], [3, 2, 1, 0], [0, 2, 1, 3]] {
            assert_eq!(canonical_form(&b.permute(&perm)), c);
        }
    }

    #[test]
    fn d4_class_sizes() {
        let d4 = quiver(4, &[(0, 1), (2, 1), (3, 1)]).to_matrix();
        let r = is_finite_type(&d4, 1000).unwrap();
        assert!(r.finite);
        assert_eq!(r.dynkin_types, vec![DynkinType::D(4)]);
    }
}
