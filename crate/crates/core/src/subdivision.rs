//! Subdivisions with exact rational embeddings.
//!
//! A subdivision bundles four things: the base complex, the subdividing
//! complex, a carrier map sending each subdivision vertex to the smallest
//! base simplex containing it, and an exact embedding of every subdivision
//! vertex as a point of the base realization. Chromatic and barycentric
//! subdivisions are built here, chromatic ones iterate through a tower, and
//! arbitrary (generic) subdivisions can be assembled from parts and are
//! validated against the same invariants.
//!
//! The canonical chromatic embedding places the vertex named by color `i`
//! and face `s` at `(2/3) * barycenter(s) + (1/3) * barycenter(s minus its
//! color-i vertex)`, i.e. displaced from the barycenter *away* from the
//! like-colored corner. On an edge this yields breakpoints at exactly 1/3
//! and 2/3 with the solo vertex's cell hugging its own corner, and the
//! embedded facets tile the base exactly; displacing *toward* the corner
//! would make cells overlap, because the cell pairing a corner with a
//! central vertex must pick up the central vertex of the *other* color.

use crate::complex::{Color, Complex, ComplexError, Simplex, Vertex, VertexId};
use crate::geometry::{affine_combination, tv_distance, Point};
use crate::rational::{ratio, Rational};
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
    #[error("{0} is not a subcomplex of the base")]
    NotASubcomplex(String),
    #[error("cannot refine from depth {from} down to depth {to}")]
    DepthDecrease { from: u32, to: u32 },
    #[error("refinement is only defined for iterated chromatic subdivisions")]
    UnsupportedRefinement,
    #[error("vertex {0} lacks a carrier or embedding")]
    MissingVertexData(VertexId),
    #[error("carrier of {0} is not a simplex of the base")]
    CarrierNotASimplex(String),
    #[error("embedding of vertex {0} leaves its carrier")]
    EmbeddingOutsideCarrier(VertexId),
    #[error("embedded facet {0} is affinely degenerate")]
    DegenerateFacet(String),
    #[error("malformed subdivision: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdivisionKind {
    /// `Ch^depth` of the base; depth 0 is the identity subdivision.
    IteratedChromatic { depth: u32 },
    Barycentric,
    /// Any other subdivision, e.g. a breakpoint refinement of edges.
    Generic,
}

/// A subdivision of a base complex with an exact embedding.
#[derive(Debug, Clone)]
pub struct Subdivision {
    base: Complex,
    complex: Complex,
    carrier: BTreeMap<VertexId, Simplex>,
    embedding: BTreeMap<VertexId, Point>,
    facet_carriers: Vec<Simplex>,
    kind: SubdivisionKind,
}

impl Subdivision {
    /// Assembles and validates a subdivision from raw parts.
    pub fn from_parts(
        base: Complex,
        complex: Complex,
        carrier: BTreeMap<VertexId, Simplex>,
        embedding: BTreeMap<VertexId, Point>,
        kind: SubdivisionKind,
    ) -> Result<Subdivision, SubdivisionError> {
        for v in complex.vertices() {
            let c = carrier
                .get(&v.id)
                .ok_or(SubdivisionError::MissingVertexData(v.id))?;
            if !base.contains_simplex(c) {
                return Err(SubdivisionError::CarrierNotASimplex(c.to_string()));
            }
            let p = embedding
                .get(&v.id)
                .ok_or(SubdivisionError::MissingVertexData(v.id))?;
            if p.ambient() != base.id() {
                return Err(SubdivisionError::Malformed(format!(
                    "embedding of vertex {} targets a different ambient complex",
                    v.id
                )));
            }
            if !p.support().is_face_of(c) {
                return Err(SubdivisionError::EmbeddingOutsideCarrier(v.id));
            }
        }
        let mut facet_carriers = Vec::with_capacity(complex.facets().len());
        for f in complex.facets() {
            let mut union: Option<Simplex> = None;
            for v in f.vertices() {
                let c = &carrier[v];
                union = Some(match union {
                    None => c.clone(),
                    Some(u) => u.union(c),
                });
            }
            let u = union.expect("facets are nonempty");
            if !base.contains_simplex(&u) {
                return Err(SubdivisionError::CarrierNotASimplex(u.to_string()));
            }
            let pts: Vec<&Point> = f.vertices().iter().map(|v| &embedding[v]).collect();
            if !affinely_independent(&pts) {
                return Err(SubdivisionError::DegenerateFacet(f.to_string()));
            }
            facet_carriers.push(u);
        }
        Ok(Subdivision {
            base,
            complex,
            carrier,
            embedding,
            facet_carriers,
            kind,
        })
    }

    /// The identity subdivision: depth 0, every vertex its own cell.
    pub fn identity(base: &Complex) -> Subdivision {
        let complex = base.clone();
        let carrier = complex
            .vertices()
            .map(|v| (v.id, Simplex::singleton(v.id)))
            .collect();
        let embedding = complex
            .vertices()
            .map(|v| {
                let p = Point::vertex(base, v.id).expect("vertex point");
                (v.id, p)
            })
            .collect();
        Subdivision::from_parts(
            base.clone(),
            complex,
            carrier,
            embedding,
            SubdivisionKind::IteratedChromatic { depth: 0 },
        )
        .expect("identity subdivision is valid")
    }

    /// One chromatic subdivision step.
    ///
    /// Vertices are the pairs (color, face) with the color occurring in the
    /// face; facets are the color-distinct chains of faces obtained from
    /// ordered set partitions of each base facet. Vertex ids are assigned
    /// in ascending (color, face) order.
    pub fn chromatic(base: &Complex) -> Subdivision {
        let mut keys: BTreeSet<(Color, Simplex)> = BTreeSet::new();
        for face in base.all_faces() {
            for v in face.vertices() {
                keys.insert((base.color_of(*v).expect("vertex exists"), face.clone()));
            }
        }
        let index: BTreeMap<(Color, Simplex), VertexId> = keys
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, VertexId(i as u32)))
            .collect();

        let vertices: Vec<Vertex> = index
            .iter()
            .map(|((color, face), id)| Vertex {
                id: *id,
                color: *color,
                payload: face.to_string(),
            })
            .collect();

        let mut facets: Vec<Vec<VertexId>> = Vec::new();
        for f in base.facets() {
            for partition in ordered_set_partitions(f.vertices()) {
                let mut prefix: Vec<VertexId> = Vec::new();
                let mut chain: Vec<VertexId> = Vec::new();
                for block in &partition {
                    prefix.extend(block.iter().copied());
                    let face = Simplex::new(prefix.clone());
                    for v in block {
                        let color = base.color_of(*v).expect("vertex exists");
                        chain.push(index[&(color, face.clone())]);
                    }
                }
                facets.push(chain);
            }
        }

        let complex = Complex::build(vertices, facets).expect("chromatic subdivision is proper");

        let mut carrier = BTreeMap::new();
        let mut embedding = BTreeMap::new();
        for ((color, face), id) in &index {
            carrier.insert(*id, face.clone());
            embedding.insert(*id, chromatic_position(base, *color, face));
        }
        Subdivision::from_parts(
            base.clone(),
            complex,
            carrier,
            embedding,
            SubdivisionKind::IteratedChromatic { depth: 1 },
        )
        .expect("chromatic subdivision is valid")
    }

    /// Barycentric subdivision: vertices are the faces of the base, colored
    /// by dimension and embedded at barycenters; facets are the maximal
    /// flags of faces. Generally not chromatic over the base.
    pub fn barycentric(base: &Complex) -> Subdivision {
        let faces = base.all_faces();
        let index: BTreeMap<(Color, Simplex), VertexId> = faces
            .iter()
            .map(|f| (Color(f.dim() as u32), f.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, VertexId(i as u32)))
            .collect();

        let vertices: Vec<Vertex> = index
            .iter()
            .map(|((color, face), id)| Vertex {
                id: *id,
                color: *color,
                payload: face.to_string(),
            })
            .collect();

        let mut facets: Vec<Vec<VertexId>> = Vec::new();
        for f in base.facets() {
            for perm in permutations(f.vertices()) {
                let flag: Vec<VertexId> = (1..=perm.len())
                    .map(|k| {
                        let face = Simplex::new(perm[..k].to_vec());
                        index[&(Color(face.dim() as u32), face)]
                    })
                    .collect();
                facets.push(flag);
            }
        }

        let complex = Complex::build(vertices, facets).expect("barycentric subdivision is proper");

        let mut carrier = BTreeMap::new();
        let mut embedding = BTreeMap::new();
        for ((_, face), id) in &index {
            carrier.insert(*id, face.clone());
            embedding.insert(*id, Point::barycenter(base, face).expect("barycenter"));
        }
        Subdivision::from_parts(
            base.clone(),
            complex,
            carrier,
            embedding,
            SubdivisionKind::Barycentric,
        )
        .expect("barycentric subdivision is valid")
    }

    pub fn base(&self) -> &Complex {
        &self.base
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn kind(&self) -> SubdivisionKind {
        self.kind
    }

    /// Depth for iterated chromatic subdivisions, `None` otherwise.
    pub fn depth(&self) -> Option<u32> {
        match self.kind {
            SubdivisionKind::IteratedChromatic { depth } => Some(depth),
            _ => None,
        }
    }

    pub fn vertex_carrier(&self, v: VertexId) -> &Simplex {
        &self.carrier[&v]
    }

    pub fn vertex_point(&self, v: VertexId) -> &Point {
        &self.embedding[&v]
    }

    /// Smallest base simplex whose realization contains the simplex.
    pub fn carrier_of_simplex(&self, s: &Simplex) -> Simplex {
        let mut union: Option<Simplex> = None;
        for v in s.vertices() {
            let c = &self.carrier[v];
            union = Some(match union {
                None => c.clone(),
                Some(u) => u.union(c),
            });
        }
        union.expect("simplices are nonempty")
    }

    /// Base carrier of the facet at `idx` in facet order.
    pub fn facet_carrier(&self, idx: usize) -> &Simplex {
        &self.facet_carriers[idx]
    }

    /// True when every subdivision vertex's color occurs in its carrier.
    pub fn is_chromatic(&self) -> bool {
        self.complex.vertices().all(|v| {
            self.base
                .simplex_colors(&self.carrier[&v.id])
                .contains(&v.color)
        })
    }

    /// The subdivision vertex with the given color and carrier, when unique.
    pub fn vertex_by_color_carrier(&self, color: Color, carrier: &Simplex) -> Option<VertexId> {
        let mut found = None;
        for v in self.complex.vertices() {
            if v.color == color && &self.carrier[&v.id] == carrier {
                if found.is_some() {
                    return None;
                }
                found = Some(v.id);
            }
        }
        found
    }

    /// Maximum tv-distance between two embedded vertices of one facet.
    pub fn mesh(&self) -> Rational {
        let mut best = Rational::zero();
        for f in self.complex.facets() {
            let vs = f.vertices();
            for i in 0..vs.len() {
                for j in (i + 1)..vs.len() {
                    let d = tv_distance(&self.base, &self.embedding[&vs[i]], &self.embedding[&vs[j]])
                        .expect("facet vertices share the embedded cell");
                    if d > best {
                        best = d;
                    }
                }
            }
        }
        best
    }

    /// Barycentric coordinates of `x` with respect to the embedded facet at
    /// `idx`, or `None` when `x` lies outside its affine span or the closed
    /// cell. All coordinates are nonnegative when `Some`.
    pub fn facet_coordinates(&self, idx: usize, x: &Point) -> Option<Vec<Rational>> {
        let f = &self.complex.facets()[idx];
        if !x.support().is_face_of(&self.facet_carriers[idx]) {
            return None;
        }
        let cols: Vec<&Point> = f.vertices().iter().map(|v| &self.embedding[v]).collect();
        let coords = solve_affine(&cols, x)?;
        if coords.iter().any(|c| c.is_negative()) {
            return None;
        }
        Some(coords)
    }

    /// Indices and coordinates of every facet whose closed embedded cell
    /// contains `x`. Interior points of the base hit exactly one facet;
    /// points on shared cell boundaries hit each incident facet.
    pub fn locate(&self, x: &Point) -> Vec<(usize, Vec<Rational>)> {
        (0..self.complex.facets().len())
            .filter_map(|i| self.facet_coordinates(i, x).map(|c| (i, c)))
            .collect()
    }

    /// Restricts the subdivision to a subcomplex of the base: keeps the
    /// cells whose base carrier lies in `l`. Vertex ids are preserved.
    pub fn restrict(&self, l: &Complex) -> Result<Subdivision, SubdivisionError> {
        if !l.is_subcomplex_of(&self.base) {
            return Err(SubdivisionError::NotASubcomplex(format!(
                "complex with {} facets",
                l.facets().len()
            )));
        }
        let kept: Vec<Simplex> = self
            .complex
            .facets()
            .iter()
            .enumerate()
            .filter(|(i, _)| l.contains_simplex(&self.facet_carriers[*i]))
            .map(|(_, f)| f.clone())
            .collect();
        let complex = self.complex.subcomplex_from_facets(kept)?;
        let carrier: BTreeMap<VertexId, Simplex> = complex
            .vertices()
            .map(|v| (v.id, self.carrier[&v.id].clone()))
            .collect();
        let embedding: BTreeMap<VertexId, Point> = complex
            .vertices()
            .map(|v| {
                let p = Point::new(l, self.embedding[&v.id].weights().clone())
                    .expect("restricted embedding stays in the subcomplex");
                (v.id, p)
            })
            .collect();
        Subdivision::from_parts(l.clone(), complex, carrier, embedding, self.kind)
    }

    /// Compares two subdivisions of the same base up to vertex renumbering,
    /// matching vertices by (color, embedded point).
    pub fn isomorphic_by_embedding(&self, other: &Subdivision) -> bool {
        if self.base != other.base || self.kind != other.kind {
            return false;
        }
        if self.complex.vertex_count() != other.complex.vertex_count() {
            return false;
        }
        let key = |s: &Subdivision, id: VertexId| {
            let v = s.complex.vertex(id).expect("vertex exists");
            (v.color, s.embedding[&id].weights().clone())
        };
        let theirs: BTreeMap<_, VertexId> = other
            .complex
            .vertices()
            .map(|v| (key(other, v.id), v.id))
            .collect();
        let mut translate: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for v in self.complex.vertices() {
            match theirs.get(&key(self, v.id)) {
                Some(o) => {
                    translate.insert(v.id, *o);
                }
                None => return false,
            }
        }
        for v in self.complex.vertices() {
            if self.carrier[&v.id] != other.carrier[&translate[&v.id]] {
                return false;
            }
        }
        let mapped: BTreeSet<Simplex> = self
            .complex
            .facets()
            .iter()
            .map(|f| Simplex::new(f.vertices().iter().map(|v| translate[v]).collect()))
            .collect();
        let other_facets: BTreeSet<Simplex> = other.complex.facets().iter().cloned().collect();
        mapped == other_facets
    }

    pub fn to_json(&self) -> serde_json::Value {
        let embedding: BTreeMap<String, serde_json::Value> = self
            .embedding
            .iter()
            .map(|(v, p)| (v.0.to_string(), p.to_json()))
            .collect();
        let carrier: BTreeMap<String, Vec<u32>> = self
            .carrier
            .iter()
            .map(|(v, s)| (v.0.to_string(), s.vertices().iter().map(|u| u.0).collect()))
            .collect();
        let (kind, depth) = match self.kind {
            SubdivisionKind::IteratedChromatic { depth } => ("chromatic", Some(depth)),
            SubdivisionKind::Barycentric => ("barycentric", None),
            SubdivisionKind::Generic => ("generic", None),
        };
        let mut value = serde_json::json!({
            "base": self.base.to_json(),
            "complex": self.complex.to_json(),
            "kind": kind,
            "embedding": embedding,
            "carrier": carrier,
        });
        if let Some(d) = depth {
            value["depth"] = serde_json::json!(d);
        }
        value
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Subdivision, String> {
        let obj = value
            .as_object()
            .ok_or_else(|| "subdivision must be an object".to_string())?;
        for k in obj.keys() {
            if !["base", "complex", "kind", "depth", "embedding", "carrier"].contains(&k.as_str()) {
                return Err(format!("subdivision has unknown field {k:?}"));
            }
        }
        let base = Complex::from_json(obj.get("base").ok_or("missing \"base\"")?)?;
        let complex = Complex::from_json(obj.get("complex").ok_or("missing \"complex\"")?)?;
        let kind = match obj.get("kind").and_then(|k| k.as_str()) {
            Some("chromatic") => {
                let depth = obj
                    .get("depth")
                    .and_then(|d| d.as_u64())
                    .ok_or("chromatic subdivision requires a \"depth\"")?;
                SubdivisionKind::IteratedChromatic {
                    depth: depth as u32,
                }
            }
            Some("barycentric") => SubdivisionKind::Barycentric,
            Some("generic") => SubdivisionKind::Generic,
            _ => return Err("missing or unknown \"kind\"".to_string()),
        };
        let mut carrier = BTreeMap::new();
        for (k, ids) in obj
            .get("carrier")
            .and_then(|c| c.as_object())
            .ok_or("missing \"carrier\" object")?
        {
            let id: u32 = k.parse().map_err(|_| format!("bad vertex id {k:?}"))?;
            let ids: Vec<u32> = serde_json::from_value(ids.clone())
                .map_err(|e| format!("bad carrier for vertex {k}: {e}"))?;
            carrier.insert(
                VertexId(id),
                Simplex::new(ids.into_iter().map(VertexId).collect()),
            );
        }
        let mut embedding = BTreeMap::new();
        for (k, p) in obj
            .get("embedding")
            .and_then(|c| c.as_object())
            .ok_or("missing \"embedding\" object")?
        {
            let id: u32 = k.parse().map_err(|_| format!("bad vertex id {k:?}"))?;
            embedding.insert(VertexId(id), Point::from_json(&base, p)?);
        }
        Subdivision::from_parts(base, complex, carrier, embedding, kind).map_err(|e| e.to_string())
    }
}

/// Canonical position of the chromatic subdivision vertex (color, face).
fn chromatic_position(base: &Complex, color: Color, face: &Simplex) -> Point {
    if face.len() == 1 {
        return Point::vertex(base, face.vertices()[0]).expect("vertex point");
    }
    let own = base
        .colored_vertex(face, color)
        .expect("color occurs in the face");
    let opposite = Simplex::new(face.minus(&Simplex::singleton(own)));
    let bary = Point::barycenter(base, face).expect("barycenter");
    let opp = Point::barycenter(base, &opposite).expect("barycenter");
    affine_combination(base, &[(ratio(2, 3), bary), (ratio(1, 3), opp)])
        .expect("positions stay inside the face")
}

/// All ordered set partitions of `items`, each a list of disjoint nonempty
/// blocks covering the input.
fn ordered_set_partitions(items: &[VertexId]) -> Vec<Vec<Vec<VertexId>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let n = items.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let block: Vec<VertexId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i])
            .collect();
        let rest: Vec<VertexId> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| items[i])
            .collect();
        for tail in ordered_set_partitions(&rest) {
            let mut partition = Vec::with_capacity(tail.len() + 1);
            partition.push(block.clone());
            partition.extend(tail);
            out.push(partition);
        }
    }
    out
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        let rest: Vec<VertexId> = items
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| *v)
            .collect();
        for mut tail in permutations(&rest) {
            let mut perm = Vec::with_capacity(items.len());
            perm.push(*first);
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

/// Solves `sum_j coeff_j * cols_j = target` with `sum_j coeff_j = 1` by
/// exact Gaussian elimination over the union of the supports. Returns
/// `None` when the system is inconsistent or the columns are affinely
/// dependent.
pub(crate) fn solve_affine(cols: &[&Point], target: &Point) -> Option<Vec<Rational>> {
    let mut row_ids: BTreeSet<VertexId> = target.weights().keys().copied().collect();
    for c in cols {
        row_ids.extend(c.weights().keys().copied());
    }
    let n_cols = cols.len();
    let mut m: Vec<Vec<Rational>> = Vec::with_capacity(row_ids.len() + 1);
    for v in &row_ids {
        let mut row: Vec<Rational> = cols.iter().map(|c| c.weight(*v)).collect();
        row.push(target.weight(*v));
        m.push(row);
    }
    m.push(vec![Rational::one(); n_cols + 1]);

    let n_rows = m.len();
    let mut pivot_row_of_col: Vec<usize> = Vec::with_capacity(n_cols);
    let mut rank = 0usize;
    for c in 0..n_cols {
        let pivot = (rank..n_rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(rank, pivot);
        let p = m[rank][c].clone();
        for j in c..=n_cols {
            let val = m[rank][j].clone() / p.clone();
            m[rank][j] = val;
        }
        for i in 0..n_rows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n_cols {
                    let val = m[i][j].clone() - f.clone() * m[rank][j].clone();
                    m[i][j] = val;
                }
            }
        }
        pivot_row_of_col.push(rank);
        rank += 1;
    }
    for row in m.iter().skip(rank) {
        if !row[n_cols].is_zero() {
            return None;
        }
    }
    Some(
        (0..n_cols)
            .map(|c| m[pivot_row_of_col[c]][n_cols].clone())
            .collect(),
    )
}

/// True when the points span a nondegenerate simplex.
pub(crate) fn affinely_independent(pts: &[&Point]) -> bool {
    if pts.len() <= 1 {
        return true;
    }
    // Rank of the homogeneous (weights + normalization) column system.
    let mut row_ids: BTreeSet<VertexId> = BTreeSet::new();
    for p in pts {
        row_ids.extend(p.weights().keys().copied());
    }
    let n_cols = pts.len();
    let mut m: Vec<Vec<Rational>> = row_ids
        .iter()
        .map(|v| pts.iter().map(|p| p.weight(*v)).collect())
        .collect();
    m.push(vec![Rational::one(); n_cols]);
    let n_rows = m.len();
    let mut rank = 0usize;
    for c in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&i| !m[i][c].is_zero()) else {
            return false;
        };
        m.swap(rank, pivot);
        let p = m[rank][c].clone();
        for j in c..n_cols {
            let val = m[rank][j].clone() / p.clone();
            m[rank][j] = val;
        }
        for i in 0..n_rows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..n_cols {
                    let val = m[i][j].clone() - f.clone() * m[rank][j].clone();
                    m[i][j] = val;
                }
            }
        }
        rank += 1;
    }
    true
}

/// A lazily grown tower of chromatic subdivisions over a fixed base.
///
/// `level(t)` is the single chromatic step over the complex of level `t-1`;
/// `composed(t)` is `Ch^t` over the original base, with carriers and
/// embeddings composed down. The tower keeps both so that callers can walk
/// carriers level by level (e.g. matching protocol rounds) or work against
/// the base directly.
pub struct ChromaticTower {
    levels: Vec<Subdivision>,
    composed: Vec<Subdivision>,
}

impl ChromaticTower {
    pub fn new(base: &Complex) -> ChromaticTower {
        ChromaticTower {
            levels: Vec::new(),
            composed: vec![Subdivision::identity(base)],
        }
    }

    pub fn base(&self) -> &Complex {
        self.composed[0].base()
    }

    pub fn max_depth(&self) -> u32 {
        (self.composed.len() - 1) as u32
    }

    pub fn ensure_depth(&mut self, depth: u32) {
        while self.max_depth() < depth {
            let top = self.composed.last().expect("tower is never empty");
            let next = Subdivision::chromatic(top.complex());
            let composed = compose(top, &next);
            self.levels.push(next);
            self.composed.push(composed);
        }
    }

    /// The chromatic step from depth `t - 1` to depth `t` (1-based).
    pub fn level(&self, t: u32) -> &Subdivision {
        &self.levels[(t - 1) as usize]
    }

    /// `Ch^t` of the base.
    pub fn composed(&self, t: u32) -> &Subdivision {
        &self.composed[t as usize]
    }
}

/// Composes a subdivision of a subdivision onto the original base.
fn compose(outer: &Subdivision, inner: &Subdivision) -> Subdivision {
    assert_eq!(
        inner.base().id(),
        outer.complex().id(),
        "inner subdivision must refine the outer complex"
    );
    let depth = outer.depth().expect("composition is chromatic")
        + inner.depth().expect("composition is chromatic");
    let carrier: BTreeMap<VertexId, Simplex> = inner
        .complex()
        .vertices()
        .map(|v| {
            (
                v.id,
                outer.carrier_of_simplex(inner.vertex_carrier(v.id)),
            )
        })
        .collect();
    let embedding: BTreeMap<VertexId, Point> = inner
        .complex()
        .vertices()
        .map(|v| {
            let mid = inner.vertex_point(v.id);
            let terms: Vec<(Rational, Point)> = mid
                .weights()
                .iter()
                .map(|(u, w)| (w.clone(), outer.vertex_point(*u).clone()))
                .collect();
            let p = affine_combination(outer.base(), &terms)
                .expect("composed embedding stays in the base cell");
            (v.id, p)
        })
        .collect();
    Subdivision::from_parts(
        outer.base().clone(),
        inner.complex().clone(),
        carrier,
        embedding,
        SubdivisionKind::IteratedChromatic { depth },
    )
    .expect("composed subdivision is valid")
}

/// `Ch^depth` of a complex.
pub fn iterate_chromatic(base: &Complex, depth: u32) -> Subdivision {
    let mut tower = ChromaticTower::new(base);
    tower.ensure_depth(depth);
    tower.composed(depth).clone()
}

/// Refines an iterated chromatic subdivision of some base to a deeper one
/// over the same base. The result is freshly numbered.
pub fn refine_to_depth(s: &Subdivision, depth: u32) -> Result<Subdivision, SubdivisionError> {
    match s.kind() {
        SubdivisionKind::IteratedChromatic { depth: d } => {
            if depth < d {
                return Err(SubdivisionError::DepthDecrease { from: d, to: depth });
            }
            Ok(iterate_chromatic(s.base(), depth))
        }
        _ => Err(SubdivisionError::UnsupportedRefinement),
    }
}
