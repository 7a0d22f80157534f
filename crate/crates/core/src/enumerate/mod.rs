//! Exhaustive classification of cyclic combinatorial 3-manifolds on `n` vertices.
//!
//! The search universe is the set of canonical 4-part difference cycles of `n`.
//! Cycle sets whose expansion covers every triangle zero or two times are found by
//! an exact double-cover search ([`search`]), filtered by the manifold test,
//! grouped by multipliers and by full combinatorial isomorphism ([`iso`]), and
//! persisted in a registry ([`store`]).

pub mod iso;
mod search;
pub mod store;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;
use std::sync::atomic::AtomicBool;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::FVector;
use crate::cycle::{CyclicComplex, DifferenceCycle};
use crate::error::{Error, Result};
use crate::invariants::{homology, HomologyGroups};
use crate::topology::UnionFind;

pub use iso::{are_isomorphic, find_isomorphism, Fingerprint};
pub use search::SearchStats;
pub use store::{parse_address, Checkpoint, Registry, StoredEntry, SCHEMA_VERSION};

use search::{Search, Universe};

/// Canonical 3-dimensional cycles on `n` vertices, sorted; empty below 5 vertices.
pub fn all_difference_cycles(n: u32) -> Vec<DifferenceCycle> {
    difference_cycles(n, 3).unwrap_or_default()
}

/// Canonical cycles of dimension `d` on `n` vertices, i.e. necklaces of `d + 1`
/// positive parts summing to `n`, in ascending order.
pub fn difference_cycles(n: u32, d: usize) -> Result<Vec<DifferenceCycle>> {
    if d == 0 || (n as usize) < d + 2 {
        return Err(Error::NotApplicable(format!(
            "difference cycles of dimension {d} need at least {} vertices, got {n}",
            d + 2
        )));
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(d + 1);
    compositions(n, d + 1, &mut parts, &mut out);
    Ok(out)
}

fn compositions(rest: u32, slots: usize, parts: &mut Vec<u32>, out: &mut Vec<DifferenceCycle>) {
    if slots == 1 {
        parts.push(rest);
        // keep only the minimal rotation of each necklace
        if crate::cycle::min_rotation(parts) == *parts {
            out.push(DifferenceCycle::new(parts).unwrap());
        }
        parts.pop();
        return;
    }
    // the first entry of a minimal rotation is a minimum, so it never exceeds the rest
    for a in 1..=rest - (slots as u32 - 1) {
        if let Some(&first) = parts.first() {
            if a < first {
                continue;
            }
        }
        parts.push(a);
        compositions(rest - a, slots - 1, parts, out);
        parts.pop();
    }
}

/// A triangle orbit in the boundary of a tetrahedral cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RidgeOrbit {
    pub triangle: DifferenceCycle,
    /// Facets of the cycle containing any one triangle of the orbit.
    pub multiplicity: u32,
    /// How many of the four vertex deletions of the generator land in this orbit.
    pub hits: u32,
}

/// Triangle orbits of the four vertex deletions of `c`, merged and sorted.
pub fn ridge_orbits(c: &DifferenceCycle) -> Result<Vec<RidgeOrbit>> {
    if c.dim() != 3 {
        return Err(Error::UnsupportedDimension(c.dim()));
    }
    let a = c.parts();
    let deletions = [
        [a[0] + a[1], a[2], a[3]],
        [a[0], a[1] + a[2], a[3]],
        [a[0], a[1], a[2] + a[3]],
        [a[1], a[2], a[3] + a[0]],
    ];
    let mut hits: BTreeMap<DifferenceCycle, u32> = BTreeMap::new();
    for t in deletions {
        *hits.entry(DifferenceCycle::new(&t)?).or_default() += 1;
    }
    Ok(hits
        .into_iter()
        .map(|(triangle, h)| {
            let multiplicity = h * c.orbit_length() / triangle.orbit_length();
            RidgeOrbit {
                triangle,
                multiplicity,
                hits: h,
            }
        })
        .collect())
}

/// Limits and persistence for [`classify_with`].
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    pub time_limit: Option<Duration>,
    /// Resume from and save progress to this file.
    pub checkpoint: Option<PathBuf>,
    /// Completed seeds between checkpoint writes.
    pub checkpoint_every: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            jobs: 0,
            time_limit: None,
            checkpoint: None,
            checkpoint_every: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedComplex {
    pub complex: CyclicComplex,
    pub fvector: FVector,
    pub homology: HomologyGroups,
    /// Index of the multiplier orbit, numbered by first occurrence.
    pub multiplier_class: usize,
    /// Index of the isomorphism class, numbered by first occurrence.
    pub iso_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    pub n: u32,
    /// Sorted by the text of the cycle set.
    pub entries: Vec<ClassifiedComplex>,
    pub stats: SearchStats,
    pub elapsed_ms: u128,
    /// False when a time limit interrupted the search; entries then cover only
    /// the completed seeds.
    pub complete: bool,
}

impl EnumerationResult {
    pub fn complex_count(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplier_class_count(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.multiplier_class)
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn iso_class_count(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.iso_class)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Distinct homology groups among the isomorphism classes.
    pub fn homology_type_count(&self) -> usize {
        self.entries
            .iter()
            .map(|e| &e.homology)
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn complexes(&self) -> impl Iterator<Item = &CyclicComplex> + '_ {
        self.entries.iter().map(|e| &e.complex)
    }

    /// `n  #complexes  #distinct`.
    pub fn table_row(&self) -> String {
        format!(
            "{} {} {}",
            self.n,
            self.complex_count(),
            self.iso_class_count()
        )
    }
}

/// All connected combinatorial 3-manifolds on `n` vertices given by difference cycles.
pub fn classify(n: u32) -> Result<EnumerationResult> {
    classify_with(n, &ClassifyOptions::default())
}

struct SeedOutcome {
    seed: usize,
    found: Vec<CyclicComplex>,
    stats: SearchStats,
    complete: bool,
}

pub fn classify_with(n: u32, opts: &ClassifyOptions) -> Result<EnumerationResult> {
    if n < 5 {
        return Err(Error::NotApplicable(format!(
            "a closed 3-manifold needs at least 5 vertices, got {n}"
        )));
    }
    let start = Instant::now();
    let universe = Universe::new(n);
    let mut done: BTreeSet<usize> = BTreeSet::new();
    let mut found: Vec<CyclicComplex> = Vec::new();
    let mut stats = SearchStats {
        universe: universe.len(),
        ..SearchStats::default()
    };
    if let Some(path) = opts.checkpoint.as_ref().filter(|p| p.exists()) {
        let cp = Checkpoint::read(path)?;
        if cp.n != n || cp.universe != universe.len() {
            return Err(Error::Registry(format!(
                "checkpoint {} belongs to a different search (n = {}, universe {})",
                path.display(),
                cp.n,
                cp.universe
            )));
        }
        log::info!(
            "resuming n = {n} with {} seeds done",
            cp.completed_seeds.len()
        );
        done.extend(cp.completed_seeds.iter().copied());
        for text in &cp.found {
            found.push(text.parse()?);
        }
        stats.absorb(&cp.stats);
    }
    let pending: Vec<usize> = (0..universe.len()).filter(|s| !done.contains(s)).collect();
    let abort = AtomicBool::new(false);
    let deadline = opts.time_limit.map(|t| start + t);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;

    let (tx, rx) = mpsc::channel::<SeedOutcome>();
    let mut complete = true;
    let mut since_save = 0usize;
    std::thread::scope(|scope| -> Result<()> {
        let universe = &universe;
        let abort = &abort;
        let pending = &pending;
        scope.spawn(move || {
            pool.install(|| {
                pending.par_iter().for_each_with(tx, |tx, &seed| {
                    let mut s = Search::new(universe, abort, deadline);
                    let ok = s.run_seed(seed);
                    let _ = tx.send(SeedOutcome {
                        seed,
                        found: s.found,
                        stats: s.stats,
                        complete: ok,
                    });
                });
            })
        });
        // single writer: merge outcomes and save progress here
        for out in rx {
            if !out.complete {
                complete = false;
                continue;
            }
            done.insert(out.seed);
            found.extend(out.found);
            stats.absorb(&out.stats);
            since_save += 1;
            if let Some(path) = &opts.checkpoint {
                if since_save >= opts.checkpoint_every.max(1) {
                    since_save = 0;
                    checkpoint_of(n, universe.len(), &done, &found, &stats).write(path)?;
                }
            }
        }
        Ok(())
    })?;
    if done.len() < universe.len() {
        complete = false;
    }
    if let Some(path) = &opts.checkpoint {
        if complete {
            if path.exists() {
                std::fs::remove_file(path)?;
            }
        } else {
            checkpoint_of(n, universe.len(), &done, &found, &stats).write(path)?;
        }
    }

    let entries = classify_found(found);
    Ok(EnumerationResult {
        n,
        entries,
        stats,
        elapsed_ms: start.elapsed().as_millis(),
        complete,
    })
}

fn checkpoint_of(
    n: u32,
    universe: usize,
    done: &BTreeSet<usize>,
    found: &[CyclicComplex],
    stats: &SearchStats,
) -> Checkpoint {
    let mut texts: Vec<String> = found.iter().map(|c| c.to_string()).collect();
    texts.sort();
    Checkpoint {
        n,
        universe,
        completed_seeds: done.iter().copied().collect(),
        found: texts,
        stats: stats.clone(),
    }
}

/// Sorts, deduplicates and annotates a list of complexes on the same vertex count.
pub fn classify_found(mut found: Vec<CyclicComplex>) -> Vec<ClassifiedComplex> {
    found.sort_by_cached_key(|c| c.to_string());
    found.dedup();
    let multiplier = dedupe_multipliers(&found);
    let homologies: Vec<HomologyGroups> = found.par_iter().map(|c| homology(&c.expand())).collect();
    let iso = iso_classes_with(&found, &multiplier, &homologies);
    found
        .into_iter()
        .zip(homologies)
        .enumerate()
        .map(|(i, (complex, homology))| ClassifiedComplex {
            fvector: complex.expand().f_vector(),
            complex,
            homology,
            multiplier_class: multiplier[i],
            iso_class: iso[i],
        })
        .collect()
}

fn renumber(keys: &[usize]) -> Vec<usize> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    keys.iter()
        .map(|&k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

/// Class index of each complex under the action of the units of `Z_n`.
pub fn dedupe_multipliers(list: &[CyclicComplex]) -> Vec<usize> {
    let keys: Vec<String> = list.par_iter().map(|c| c.multiplier_orbit_key()).collect();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let raw: Vec<usize> = keys
        .iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.as_str()).or_insert(next)
        })
        .collect();
    renumber(&raw)
}

/// Class index of each complex under combinatorial isomorphism of the expansions.
pub fn iso_classes(list: &[CyclicComplex]) -> Vec<usize> {
    let multiplier = dedupe_multipliers(list);
    let homologies: Vec<HomologyGroups> = list.par_iter().map(|c| homology(&c.expand())).collect();
    iso_classes_with(list, &multiplier, &homologies)
}

fn iso_classes_with(
    list: &[CyclicComplex],
    multiplier: &[usize],
    homologies: &[HomologyGroups],
) -> Vec<usize> {
    // one representative per multiplier class; multiples are isomorphic already
    let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &m) in multiplier.iter().enumerate() {
        reps.entry(m).or_insert(i);
    }
    let rep_list: Vec<usize> = reps.values().copied().collect();
    let prints: Vec<Fingerprint> = rep_list
        .par_iter()
        .map(|&i| Fingerprint::new(&list[i].expand(), homologies[i].clone()))
        .collect();
    let mut buckets: BTreeMap<&Fingerprint, Vec<usize>> = BTreeMap::new();
    for (r, fp) in prints.iter().enumerate() {
        buckets.entry(fp).or_default().push(r);
    }
    let mut uf = UnionFind::new(rep_list.len());
    for bucket in buckets.values() {
        let expanded: Vec<_> = bucket.iter().map(|&r| list[rep_list[r]].expand()).collect();
        for x in 0..bucket.len() {
            for y in 0..x {
                if uf.find(bucket[x]) == uf.find(bucket[y]) {
                    continue;
                }
                if are_isomorphic(&expanded[x], &expanded[y]) {
                    uf.union(bucket[x], bucket[y]);
                }
            }
        }
    }
    let rep_index: HashMap<usize, usize> =
        rep_list.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let raw: Vec<usize> = multiplier
        .iter()
        .map(|m| uf.find(rep_index[&reps[m]]))
        .collect();
    renumber(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::units;

    fn necklaces_by_rotation(n: u32) -> usize {
        // brute force: all compositions, then distinct rotation classes
        let mut seen = BTreeSet::new();
        for a in 1..n {
            for b in 1..n {
                for c in 1..n {
                    if a + b + c < n {
                        let p = [a, b, c, n - a - b - c];
                        seen.insert(crate::cycle::min_rotation(&p));
                    }
                }
            }
        }
        seen.len()
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(all_difference_cycles(5), vec!["(1:1:1:2)".parse().unwrap()]);
        // (1:1:1:3), (1:1:2:2), (1:2:1:2)
        assert_eq!(all_difference_cycles(6).len(), 3);
        assert_eq!(all_difference_cycles(8).len(), 10);
        for n in 5..30 {
            assert_eq!(
                all_difference_cycles(n).len(),
                necklaces_by_rotation(n),
                "n = {n}"
            );
        }
        assert!(difference_cycles(4, 3).is_err());
        assert_eq!(difference_cycles(7, 2).unwrap().len(), 5);
    }

    #[test]
    fn ridge_orbits_of_boundary_simplex() {
        let c: DifferenceCycle = "(1:1:1:2)".parse().unwrap();
        let r = ridge_orbits(&c).unwrap();
        let got: Vec<(String, u32)> = r
            .iter()
            .map(|o| (o.triangle.to_string(), o.multiplicity))
            .collect();
        assert_eq!(got, vec![("(1:1:3)".into(), 2), ("(1:2:2)".into(), 2)]);
    }

    #[test]
    fn ridge_incidence_totals() {
        for n in 5..=20 {
            for c in all_difference_cycles(n) {
                let total: u32 = ridge_orbits(&c)
                    .unwrap()
                    .iter()
                    .map(|o| o.multiplicity * o.triangle.orbit_length())
                    .sum();
                assert_eq!(total, 4 * c.orbit_length(), "{c}");
            }
        }
        let short: DifferenceCycle = "(2:2:2:2)".parse().unwrap();
        let r = ridge_orbits(&short).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].multiplicity, r[0].hits), (1, 4));
        assert!(ridge_orbits(&"(1:2:4)".parse().unwrap()).is_err());
    }

    #[test]
    fn small_classifications() {
        let r = classify(5).unwrap();
        assert_eq!(r.table_row(), "5 1 1");
        assert_eq!(r.entries[0].complex.to_string(), "{(1:1:1:2)}");
        assert_eq!(r.entries[0].fvector.0, vec![5, 10, 10, 5]);
        assert!(r.complete);
        assert_eq!(classify(7).unwrap().table_row(), "7 3 1");
        assert!(classify(4).is_err());
    }

    #[test]
    fn class_counts_are_monotone() {
        let r = classify(9).unwrap();
        assert!(r.complex_count() >= r.multiplier_class_count());
        assert!(r.multiplier_class_count() >= r.iso_class_count());
        // every unit multiple lands in the same classes
        for e in &r.entries {
            for l in units(9) {
                let m = e.complex.multiply(l).unwrap();
                let other = r.entries.iter().find(|x| x.complex == m).unwrap();
                assert_eq!(other.multiplier_class, e.multiplier_class);
                assert_eq!(other.iso_class, e.iso_class);
            }
        }
    }

    #[test]
    fn expired_time_limit_is_incomplete() {
        let opts = ClassifyOptions {
            time_limit: Some(Duration::ZERO),
            ..ClassifyOptions::default()
        };
        let r = classify_with(11, &opts).unwrap();
        assert!(!r.complete);
    }
}
