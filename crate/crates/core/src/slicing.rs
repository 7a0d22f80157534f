//! Polyhedral slicings: the surface separating a vertex bipartition of a 3-complex.
//!
//! Each edge `{u, v}` with `u` in part A and `v` in part B becomes a cut vertex
//! `(u, v)`. A tetrahedron split 1-3 contributes a triangle, a tetrahedron split
//! 2-2 as `{a, b | c, d}` contributes the quadrilateral `(a,c), (a,d), (b,d), (b,c)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::FacetComplex;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedralSlicing {
    /// Cut vertices `(u, v)` with `u` in A and `v` in B, sorted.
    pub cut_vertices: Vec<(u32, u32)>,
    /// Cells as cyclically ordered indices into `cut_vertices`.
    pub cells: Vec<Vec<usize>>,
    /// Ambient facet each cell came from.
    pub provenance: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    pub orientable: bool,
    /// Handles when orientable, cross-caps otherwise.
    pub genus: u32,
}

/// `(f_0, f_1, triangles, quadrilaterals)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicingFVector {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub quadrilaterals: usize,
}

impl std::fmt::Display for SlicingFVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {} triangles, {} quadrilaterals)",
            self.vertices, self.edges, self.triangles, self.quadrilaterals
        )
    }
}

impl SlicingFVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + (self.triangles + self.quadrilaterals) as i64
    }
}

pub fn slicing(k: &FacetComplex, part_a: &BTreeSet<u32>) -> Result<PolyhedralSlicing> {
    let verts = k.vertices();
    let in_a = verts.iter().filter(|v| part_a.contains(v)).count();
    if in_a == 0 || in_a == verts.len() {
        return Err(Error::InvalidBipartition);
    }
    let mut raw_cells: Vec<(Vec<(u32, u32)>, Vec<u32>)> = Vec::new();
    for f in k.facets() {
        let (a, b): (Vec<u32>, Vec<u32>) = f.iter().partition(|v| part_a.contains(v));
        let cell = match (a.len(), b.len()) {
            (1, _) if !b.is_empty() => b.iter().map(|&y| (a[0], y)).collect(),
            (_, 1) if !a.is_empty() => a.iter().map(|&x| (x, b[0])).collect(),
            (2, 2) => vec![(a[0], b[0]), (a[0], b[1]), (a[1], b[1]), (a[1], b[0])],
            (0, _) | (_, 0) => continue,
            _ => return Err(Error::UnsupportedDimension(f.len() - 1)),
        };
        raw_cells.push((cell, f.clone()));
    }
    let cut: BTreeSet<(u32, u32)> = raw_cells
        .iter()
        .flat_map(|(c, _)| c.iter().copied())
        .collect();
    let cut_vertices: Vec<(u32, u32)> = cut.into_iter().collect();
    let index: HashMap<(u32, u32), usize> = cut_vertices
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let (cells, provenance) = raw_cells
        .into_iter()
        .map(|(c, f)| (c.iter().map(|p| index[p]).collect(), f))
        .unzip();
    Ok(PolyhedralSlicing {
        cut_vertices,
        cells,
        provenance,
    })
}

impl PolyhedralSlicing {
    fn edge_incidences(&self) -> BTreeMap<(usize, usize), Vec<(usize, bool)>> {
        let mut edges: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for i in 0..cell.len() {
                let (a, b) = (cell[i], cell[(i + 1) % cell.len()]);
                let key = (a.min(b), a.max(b));
                edges.entry(key).or_default().push((ci, a < b));
            }
        }
        edges
    }

    pub fn f_vector(&self) -> SlicingFVector {
        SlicingFVector {
            vertices: self.cut_vertices.len(),
            edges: self.edge_incidences().len(),
            triangles: self.cells.iter().filter(|c| c.len() == 3).count(),
            quadrilaterals: self.cells.iter().filter(|c| c.len() == 4).count(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = crate::topology::UnionFind::new(self.cut_vertices.len());
        for cell in &self.cells {
            for w in cell.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let roots: BTreeSet<usize> = (0..self.cut_vertices.len()).map(|i| uf.find(i)).collect();
        roots.len() == 1
    }

    /// Orientability and genus. Requires every cell edge to lie in exactly two cells.
    pub fn surface_type(&self) -> Result<SurfaceType> {
        let edges = self.edge_incidences();
        let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); self.cells.len()];
        for (e, inc) in &edges {
            if inc.len() != 2 {
                return Err(Error::NotASurface(format!(
                    "edge {:?}-{:?} lies in {} cells",
                    self.cut_vertices[e.0],
                    self.cut_vertices[e.1],
                    inc.len()
                )));
            }
            let (c1, fwd1) = inc[0];
            let (c2, fwd2) = inc[1];
            // coherent iff the shared edge is traversed in opposite directions
            let rel = if fwd1 != fwd2 { 1 } else { -1 };
            adj[c1].push((c2, rel));
            adj[c2].push((c1, rel));
        }
        let mut sign = vec![0i8; self.cells.len()];
        let mut orientable = true;
        for start in 0..self.cells.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                for &(b, rel) in &adj[a] {
                    let want = sign[a] * rel;
                    if sign[b] == 0 {
                        sign[b] = want;
                        queue.push_back(b);
                    } else if sign[b] != want {
                        orientable = false;
                    }
                }
            }
        }
        let chi = self.euler_characteristic();
        let genus = if orientable { (2 - chi) / 2 } else { 2 - chi };
        if genus < 0 {
            return Err(Error::NotASurface(format!(
                "Euler characteristic {chi} is too large for a connected surface"
            )));
        }
        Ok(SurfaceType {
            orientable,
            genus: genus as u32,
        })
    }

    /// JSON document with cut vertices, cells, f-vector and (when defined) surface type.
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.f_vector();
        let surface = self.surface_type().ok();
        serde_json::json!({
            "cut_vertices": self.cut_vertices.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
            "cells": self.cells,
            "fvector": [f.vertices, f.edges, f.triangles, f.quadrilaterals],
            "euler_characteristic": f.euler_characteristic(),
            "surface": surface,
        })
    }
}

/// Convenience: vertices of `0..n` with the given parity.
pub fn parity_class(n: u32, odd: bool) -> BTreeSet<u32> {
    (0..n).filter(|v| (v % 2 == 1) == odd).collect()
}
