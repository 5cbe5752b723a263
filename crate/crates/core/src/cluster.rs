//! Seeds, seed mutation and exchange-graph enumeration.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::ExchangeMatrix;
use crate::par;

/// Default cap on the number of seeds visited by a breadth-first search.
pub const DEFAULT_CAP: usize = 100_000;

/// Exchange matrix together with a cluster of Laurent expansions in the
/// initial variables, plus the walk of directions that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub matrix: ExchangeMatrix,
    pub cluster: Vec<LaurentPoly>,
    pub walk: Vec<usize>,
}

impl Seed {
    /// Seed with cluster `x_1, …, x_n`.
    pub fn initial(matrix: ExchangeMatrix) -> Seed {
        let n = matrix.n();
        Seed { cluster: (0..n).map(|k| LaurentPoly::var(n, k)).collect(), matrix, walk: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Mutation in direction `k`; the new variable is computed by exact
    /// division, so a failure signals an inconsistent seed.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        let n = self.n();
        let matrix = self.matrix.mutate(k)?;
        let mut plus = LaurentPoly::one(self.cluster[0].nvars());
        let mut minus = plus.clone();
        for i in 0..n {
            let b = self.matrix.get(i, k);
            if b > 0 {
                plus = &plus * &self.cluster[i].pow(b as u32);
            } else if b < 0 {
                minus = &minus * &self.cluster[i].pow((-b) as u32);
            }
        }
        let new_var = (&plus + &minus).div_exact(&self.cluster[k])?;
        let mut cluster = self.cluster.clone();
        cluster[k] = new_var;
        let mut walk = self.walk.clone();
        walk.push(k);
        Ok(Seed { matrix, cluster, walk })
    }

    pub fn mutate_along(&self, walk: &[usize]) -> Result<Seed> {
        walk.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }

    /// Cluster sorted by the canonical polynomial order, with the matrix
    /// permuted to match.
    pub fn canonical(&self) -> Seed {
        let mut perm: Vec<usize> = (0..self.n()).collect();
        perm.sort_by(|&a, &b| self.cluster[a].cmp(&self.cluster[b]));
        Seed {
            matrix: self.matrix.permute(&perm),
            cluster: perm.iter().map(|&i| self.cluster[i].clone()).collect(),
            walk: self.walk.clone(),
        }
    }

    pub fn cluster_key(&self) -> Vec<LaurentPoly> {
        let mut key = self.cluster.clone();
        key.sort();
        key
    }
}

/// Laurent expansion of the `k`-th cluster variable of the seed reached from
/// the initial seed of `b0` by `walk`.
pub fn expand_along_walk(b0: &ExchangeMatrix, walk: &[usize], k: usize) -> Result<LaurentPoly> {
    let n = b0.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(Seed::initial(b0.clone()).mutate_along(walk)?.cluster.swap_remove(k))
}

/// One vertex of the exchange graph.
#[derive(Clone, Debug)]
pub struct ClusterNode {
    /// Sorted indices into [`ExchangeGraph::variables`].
    pub variables: Vec<usize>,
    /// A positional seed for this cluster, reached by a shortest walk.
    pub seed: Seed,
    /// `neighbors[k]` is the cluster obtained by mutating `seed` at `k`.
    pub neighbors: Vec<usize>,
}

/// Exchange graph of a finite-type cluster pattern.
///
/// Clusters are listed in canonical order (sorted by their sorted cluster),
/// variables in the canonical polynomial order.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub initial: ExchangeMatrix,
    pub clusters: Vec<ClusterNode>,
    pub variables: Vec<LaurentPoly>,
    lookup: HashMap<Vec<LaurentPoly>, usize>,
}

impl ExchangeGraph {
    pub fn rank(&self) -> usize {
        self.initial.n()
    }

    /// Cluster index of a seed, if the seed's cluster is in the graph.
    pub fn find(&self, seed: &Seed) -> Option<usize> {
        self.lookup.get(&seed.cluster_key()).copied()
    }

    pub fn variable_index(&self, v: &LaurentPoly) -> Option<usize> {
        self.variables.binary_search(v).ok()
    }

    /// Index of the initial cluster `x_1, …, x_n`.
    pub fn initial_cluster(&self) -> usize {
        self.find(&Seed::initial(self.initial.clone())).expect("initial cluster is enumerated")
    }

    pub fn edge_count(&self) -> usize {
        self.clusters.iter().map(|c| c.neighbors.len()).sum::<usize>() / 2
    }

    /// Checks n-regularity and connectivity.
    pub fn is_regular_and_connected(&self) -> bool {
        let n = self.rank();
        if self.clusters.iter().any(|c| {
            let mut nb = c.neighbors.clone();
            nb.sort_unstable();
            nb.dedup();
            nb.len() != n
        }) {
            return false;
        }
        let mut seen = vec![false; self.clusters.len()];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(self.clusters[v].neighbors.iter().copied());
        }
        seen.into_iter().all(|s| s)
    }

    /// Expansions of every cluster variable in the cluster `root`, with the
    /// variables of `root`'s seed as formal generators. Indexed like
    /// [`ExchangeGraph::variables`].
    ///
    /// The search mutates a global and a local seed in lockstep, so variable
    /// identities come from the global side and no rational function is ever
    /// inverted.
    pub fn local_expansions(&self, root: usize) -> Result<Vec<LaurentPoly>> {
        let n = self.rank();
        let global = self.clusters[root].seed.clone();
        let local = Seed::initial(global.matrix.clone());
        let mut out: Vec<Option<LaurentPoly>> = vec![None; self.variables.len()];
        let mut visited = vec![false; self.clusters.len()];
        visited[root] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back((global, local));
        while let Some((g, l)) = queue.pop_front() {
            for i in 0..n {
                let vi = self.variable_index(&g.cluster[i]).expect("enumerated variable");
                if out[vi].is_none() {
                    out[vi] = Some(l.cluster[i].clone());
                }
            }
            for k in 0..n {
                let g2 = g.mutate(k)?;
                let idx = self.find(&g2).ok_or_else(|| Error::InvariantViolation("mutation left the graph".into()))?;
                if !visited[idx] {
                    visited[idx] = true;
                    let l2 = l.mutate(k)?;
                    queue.push_back((g2, l2));
                }
            }
        }
        out.into_iter()
            .map(|v| v.ok_or_else(|| Error::InvariantViolation("unreached variable".into())))
            .collect()
    }
}

/// Breadth-first enumeration of all clusters reachable from the initial seed
/// of `b0`. Fails with [`Error::CapExceeded`] once more than `cap` clusters
/// have been found, or as soon as an exchange matrix with an entry of
/// absolute value at least 2 shows up: such a class is infinite, so no cap
/// would suffice.
pub fn enumerate_exchange_graph(b0: &ExchangeMatrix, cap: usize) -> Result<ExchangeGraph> {
    let n = b0.n();
    if b0.max_abs_entry() >= 2 {
        return Err(Error::CapExceeded { cap });
    }
    let start = Seed::initial(b0.clone());
    let mut seeds: Vec<Seed> = vec![start.clone()];
    let mut index: HashMap<Vec<LaurentPoly>, usize> = HashMap::new();
    index.insert(start.cluster_key(), 0);
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![0usize];

    while !frontier.is_empty() {
        let jobs: Vec<(usize, usize)> = frontier.iter().flat_map(|&s| (0..n).map(move |k| (s, k))).collect();
        let mutated = par::try_map(&jobs, |&(s, k)| seeds[s].mutate(k))?;
        let mut next = Vec::new();
        for ((s, _), seed) in jobs.into_iter().zip(mutated) {
            let key = seed.cluster_key();
            let idx = match index.get(&key) {
                Some(&i) => i,
                None => {
                    let i = seeds.len();
                    if i >= cap || seed.matrix.max_abs_entry() >= 2 {
                        return Err(Error::CapExceeded { cap });
                    }
                    index.insert(key, i);
                    seeds.push(seed);
                    neighbors.push(Vec::new());
                    next.push(i);
                    i
                }
            };
            neighbors[s].push(idx);
        }
        frontier = next;
    }

    // Renumber into canonical order.
    let mut keys: Vec<(Vec<LaurentPoly>, usize)> = seeds.iter().enumerate().map(|(i, s)| (s.cluster_key(), i)).collect();
    keys.sort();
    let mut new_id = vec![0; seeds.len()];
    for (pos, (_, old)) in keys.iter().enumerate() {
        new_id[*old] = pos;
    }
    let mut variables: Vec<LaurentPoly> = seeds.iter().flat_map(|s| s.cluster.iter().cloned()).collect();
    variables.sort();
    variables.dedup();
    let mut clusters = Vec::with_capacity(seeds.len());
    let mut lookup = HashMap::with_capacity(seeds.len());
    for (pos, (key, old)) in keys.into_iter().enumerate() {
        let mut vars: Vec<usize> = key.iter().map(|v| variables.binary_search(v).unwrap()).collect();
        vars.sort_unstable();
        lookup.insert(key, pos);
        clusters.push(ClusterNode {
            variables: vars,
            seed: seeds[old].clone(),
            neighbors: neighbors[old].iter().map(|&o| new_id[o]).collect(),
        });
    }
    Ok(ExchangeGraph { initial: b0.clone(), clusters, variables, lookup })
}

/// Serializable summary of an exchange graph.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeGraphReport {
    pub clusters: usize,
    pub variables: usize,
    pub cluster_list: Vec<Vec<String>>,
    pub variable_list: Vec<String>,
    pub adjacency: Vec<Vec<usize>>,
}

impl From<&ExchangeGraph> for ExchangeGraphReport {
    fn from(g: &ExchangeGraph) -> Self {
        ExchangeGraphReport {
            clusters: g.clusters.len(),
            variables: g.variables.len(),
            cluster_list: g
                .clusters
                .iter()
                .map(|c| c.variables.iter().map(|&v| g.variables[v].to_string()).collect())
                .collect(),
            variable_list: g.variables.iter().map(|v| v.to_string()).collect(),
            adjacency: g
                .clusters
                .iter()
                .map(|c| {
                    let mut nb = c.neighbors.clone();
                    nb.sort_unstable();
                    nb
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Quiver;

    fn a2() -> ExchangeMatrix {
        Quiver::new(2, vec![(0, 1)]).unwrap().to_matrix()
    }

    fn p(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n).unwrap()
    }

    #[test]
    fn a2_first_mutation() {
        let s = Seed::initial(a2()).mutate(0).unwrap();
        assert_eq!(s.cluster[0], p("x1^-1*x2 + x1^-1", 2));
        assert_eq!(s.cluster[1], p("x2", 2));
        assert_eq!(s.walk, vec![0]);
    }

    #[test]
    fn a2_walk_one_two() {
        let s = Seed::initial(a2()).mutate_along(&[0, 1]).unwrap();
        assert_eq!(s.cluster[1], p("x1^-1*x2^-1 + x1^-1 + x2^-1", 2));
        assert_eq!(s.cluster[1], (&p("x1^-1*x2^-1", 2) * &p("x1 + x2 + 1", 2)));
    }

    #[test]
    fn seed_mutation_is_an_involution() {
        let s = Seed::initial(a2()).mutate_along(&[0, 1, 0]).unwrap();
        for k in 0..2 {
            let back = s.mutate(k).unwrap().mutate(k).unwrap();
            assert_eq!(back.matrix, s.matrix);
            assert_eq!(back.cluster, s.cluster);
        }
    }

    #[test]
    fn expand_along_walk_examples() {
        assert_eq!(expand_along_walk(&a2(), &[], 0).unwrap(), p("x1", 2));
        assert_eq!(expand_along_walk(&a2(), &[0], 0).unwrap(), p("x1^-1*x2 + x1^-1", 2));
        assert_eq!(expand_along_walk(&a2(), &[0, 1], 1).unwrap(), p("x1^-1*x2^-1 + x1^-1 + x2^-1", 2));
        assert!(expand_along_walk(&a2(), &[], 2).is_err());
    }

    #[test]
    fn a2_pentagon() {
        let g = enumerate_exchange_graph(&a2(), DEFAULT_CAP).unwrap();
        assert_eq!(g.clusters.len(), 5);
        let expected: Vec<LaurentPoly> = ["x1", "x2", "x1^-1*x2 + x1^-1", "x1^-1*x2^-1 + x1^-1 + x2^-1", "x1*x2^-1 + x2^-1"]
            .iter()
            .map(|s| p(s, 2))
            .collect();
        let mut expected_sorted = expected.clone();
        expected_sorted.sort();
        assert_eq!(g.variables, expected_sorted);
        assert!(g.is_regular_and_connected());
    }

    #[test]
    fn kronecker_exceeds_cap() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 2], vec![-2, 0]]).unwrap();
        assert_eq!(enumerate_exchange_graph(&b, 100).unwrap_err(), Error::CapExceeded { cap: 100 });
    }

    #[test]
    fn canonical_seed_sorts_and_permutes() {
        let s = Seed::initial(a2()).mutate(0).unwrap();
        let c = s.canonical();
        let mut sorted = s.cluster.clone();
        sorted.sort();
        assert_eq!(c.cluster, sorted);
        for i in 0..2 {
            for j in 0..2 {
                let pi = s.cluster.iter().position(|v| *v == c.cluster[i]).unwrap();
                let pj = s.cluster.iter().position(|v| *v == c.cluster[j]).unwrap();
                assert_eq!(c.matrix.get(i, j), s.matrix.get(pi, pj));
            }
        }
    }

    #[test]
    fn local_expansions_at_the_initial_cluster_are_global() {
        let g = enumerate_exchange_graph(&a2(), DEFAULT_CAP).unwrap();
        let root = g.initial_cluster();
        assert_eq!(g.local_expansions(root).unwrap(), g.variables);
    }
}
