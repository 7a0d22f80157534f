//! Double-cover depth-first search over difference cycles.
//!
//! Every triangle orbit must end up in exactly zero or two facets per triangle. The
//! search repeatedly takes the smallest triangle orbit covered once and branches over
//! the cycles that cover it once more. Siblings already tried are forbidden in later
//! branches, so every cycle set is produced at most once.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{all_difference_cycles, ridge_orbits};
use crate::cycle::{CyclicComplex, DifferenceCycle};
use crate::topology::is_combinatorial_manifold;

/// Counters collected while searching.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub universe: usize,
    pub nodes: u64,
    /// Leaves whose union is a closed pseudomanifold.
    pub pseudomanifolds: u64,
    /// Closed pseudomanifold leaves rejected by the manifold check.
    pub rejected: u64,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.pseudomanifolds += other.pseudomanifolds;
        self.rejected += other.rejected;
    }
}

pub(crate) struct Universe {
    pub(crate) n: u32,
    pub(crate) cycles: Vec<DifferenceCycle>,
    /// Per cycle, `(triangle orbit, facets of the cycle on each triangle of the orbit)`.
    inc: Vec<Vec<(usize, u8)>>,
    /// Per triangle orbit, the cycles meeting each of its triangles exactly once.
    single: Vec<Vec<usize>>,
    triangles: usize,
}

impl Universe {
    pub(crate) fn new(n: u32) -> Self {
        let mut triangle_ids: BTreeMap<DifferenceCycle, usize> = BTreeMap::new();
        let mut cycles = Vec::new();
        let mut inc = Vec::new();
        for c in all_difference_cycles(n) {
            let orbits = ridge_orbits(&c).expect("dimension 3");
            // a cycle covering some triangle three or more times can never be used
            if orbits.iter().any(|r| r.multiplicity > 2) {
                continue;
            }
            for r in &orbits {
                let next = triangle_ids.len();
                triangle_ids.entry(r.triangle.clone()).or_insert(next);
            }
            inc.push(orbits);
            cycles.push(c);
        }
        // renumber triangles in lexicographic order
        let order: Vec<usize> = {
            let mut ids: Vec<(&DifferenceCycle, usize)> =
                triangle_ids.iter().map(|(t, &i)| (t, i)).collect();
            ids.sort();
            let mut rank = vec![0; ids.len()];
            for (r, (_, i)) in ids.into_iter().enumerate() {
                rank[i] = r;
            }
            rank
        };
        let inc: Vec<Vec<(usize, u8)>> = inc
            .into_iter()
            .map(|orbits| {
                orbits
                    .into_iter()
                    .map(|r| (order[triangle_ids[&r.triangle]], r.multiplicity as u8))
                    .collect()
            })
            .collect();
        let triangles = triangle_ids.len();
        let mut single = vec![Vec::new(); triangles];
        for (ci, row) in inc.iter().enumerate() {
            for &(t, m) in row {
                if m == 1 {
                    single[t].push(ci);
                }
            }
        }
        Universe {
            n,
            cycles,
            inc,
            single,
            triangles,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.cycles.len()
    }
}

struct State {
    counts: Vec<u8>,
    chosen: Vec<usize>,
    forbidden: Vec<bool>,
}

pub(crate) struct Search<'a> {
    universe: &'a Universe,
    abort: &'a AtomicBool,
    deadline: Option<Instant>,
    pub(crate) stats: SearchStats,
    pub(crate) found: Vec<CyclicComplex>,
    pub(crate) aborted: bool,
}

impl<'a> Search<'a> {
    pub(crate) fn new(
        universe: &'a Universe,
        abort: &'a AtomicBool,
        deadline: Option<Instant>,
    ) -> Self {
        Search {
            universe,
            abort,
            deadline,
            stats: SearchStats::default(),
            found: Vec::new(),
            aborted: false,
        }
    }

    fn fits(&self, st: &State, c: usize) -> bool {
        self.universe.inc[c]
            .iter()
            .all(|&(t, m)| st.counts[t] + m <= 2)
    }

    fn add(&self, st: &mut State, c: usize) {
        for &(t, m) in &self.universe.inc[c] {
            st.counts[t] += m;
        }
        st.chosen.push(c);
    }

    fn remove(&self, st: &mut State, c: usize) {
        for &(t, m) in &self.universe.inc[c] {
            st.counts[t] -= m;
        }
        st.chosen.pop();
    }

    fn should_stop(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if self.stats.nodes % 1024 == 1 {
            let late = self.deadline.is_some_and(|d| Instant::now() >= d);
            if late {
                self.abort.store(true, Ordering::Relaxed);
            }
            if self.abort.load(Ordering::Relaxed) {
                self.aborted = true;
            }
        }
        self.aborted
    }

    /// All manifolds whose smallest cycle is `seed`. Returns `false` if interrupted.
    pub(crate) fn run_seed(&mut self, seed: usize) -> bool {
        let u = self.universe;
        let mut st = State {
            counts: vec![0; u.triangles],
            chosen: Vec::new(),
            forbidden: (0..u.len()).map(|c| c <= seed).collect(),
        };
        self.add(&mut st, seed);
        self.dfs(&mut st);
        !self.aborted
    }

    fn dfs(&mut self, st: &mut State) {
        self.stats.nodes += 1;
        if self.should_stop() {
            return;
        }
        let Some(t) = st.counts.iter().position(|&x| x == 1) else {
            self.leaf(st);
            return;
        };
        let u = self.universe;
        let mut tried = Vec::new();
        for &c in &u.single[t] {
            if st.forbidden[c] || !self.fits(st, c) {
                continue;
            }
            st.forbidden[c] = true;
            tried.push(c);
            self.add(st, c);
            self.dfs(st);
            self.remove(st, c);
            if self.aborted {
                break;
            }
        }
        for c in tried {
            st.forbidden[c] = false;
        }
    }

    fn leaf(&mut self, st: &State) {
        self.stats.pseudomanifolds += 1;
        let cycles = st.chosen.iter().map(|&c| self.universe.cycles[c].clone());
        let complex =
            CyclicComplex::new(self.universe.n, 3, cycles).expect("distinct cycles of one modulus");
        if is_combinatorial_manifold(&complex).expect("dimension 3") {
            self.found.push(complex);
        } else {
            self.stats.rejected += 1;
        }
    }
}
