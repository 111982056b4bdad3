//! Abstract chromatic simplicial complexes.
//!
//! A complex is stored as its vertices plus its maximal simplices (facets);
//! downward closure is implicit. Every vertex carries a color (a process
//! index) and an opaque payload (an input/output value or a view label).
//! Within any facet all colors are pairwise distinct, so the coloring is a
//! proper coloring in the graph-theoretic sense.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

/// Process color. Stored 0-indexed; displayed 1-indexed as `p1`, `p2`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0 + 1)
    }
}

/// Vertex identifier, unique within one complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub color: Color,
    pub payload: String,
}

/// A simplex as a strictly ascending list of vertex ids.
///
/// The ordering derived from the id list is lexicographic; it is the order
/// used everywhere a "first" or "smallest" simplex is promised.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Builds a simplex from arbitrary-order ids. Panics on duplicates:
    /// callers validate user input before constructing simplices.
    pub fn new(mut ids: Vec<VertexId>) -> Self {
        ids.sort_unstable();
        assert!(
            ids.windows(2).all(|w| w[0] != w[1]),
            "duplicate vertex id in simplex"
        );
        Simplex(ids)
    }

    pub fn singleton(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Geometric dimension: one less than the vertex count.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// All nonempty subsets, as simplices.
    pub fn faces(&self) -> Vec<Simplex> {
        (1..=self.0.len())
            .flat_map(|k| self.0.iter().copied().combinations(k))
            .map(Simplex)
            .collect()
    }

    /// Vertices of `self` not in `other`.
    pub fn minus(&self, other: &Simplex) -> Vec<VertexId> {
        self.0
            .iter()
            .copied()
            .filter(|v| !other.contains(*v))
            .collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut ids: Vec<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
        ids.sort_unstable();
        ids.dedup();
        Simplex(ids)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().map(|v| v.0.to_string()).join(","))
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex id {0} defined more than once")]
    DuplicateVertexId(VertexId),
    #[error("facet {facet} repeats color {color}")]
    DuplicateColorInFacet { facet: String, color: Color },
    #[error("facet references undefined vertex id {0}")]
    DanglingVertexId(VertexId),
    #[error("facet {inner} is contained in facet {outer}")]
    NonMaximalFacet { inner: String, outer: String },
    #[error("vertex id {0} does not occur in any facet")]
    VertexNotInAnyFacet(VertexId),
    #[error("skeleton rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("simplex {0} is not a simplex of the complex")]
    UnknownSimplex(String),
    #[error("complex is not pure")]
    NotPure,
}

static NEXT_COMPLEX_ID: AtomicU64 = AtomicU64::new(1);

/// Cheap identity token distinguishing ambient complexes. Clones of a
/// complex share the token; independently built complexes never do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplexId(u64);

fn fresh_complex_id() -> ComplexId {
    ComplexId(NEXT_COMPLEX_ID.fetch_add(1, Ordering::Relaxed))
}

/// A finite chromatic simplicial complex.
#[derive(Debug, Clone)]
pub struct Complex {
    id: ComplexId,
    vertices: BTreeMap<VertexId, Vertex>,
    facets: Vec<Simplex>,
    dim: usize,
    pure: bool,
}

/// Content equality; the ambient identity token is ignored.
impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.facets == other.facets
    }
}
impl Eq for Complex {}

impl Complex {
    /// Validated constructor. Facet lists may be in any order; exact
    /// duplicate facets are collapsed.
    pub fn build(
        vertices: Vec<Vertex>,
        facet_ids: Vec<Vec<VertexId>>,
    ) -> Result<Complex, ComplexError> {
        let mut vmap: BTreeMap<VertexId, Vertex> = BTreeMap::new();
        for v in vertices {
            if vmap.insert(v.id, v.clone()).is_some() {
                return Err(ComplexError::DuplicateVertexId(v.id));
            }
        }

        let mut facets: Vec<Simplex> = Vec::new();
        for ids in facet_ids {
            let mut sorted = ids;
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    // A repeated id repeats its color as well.
                    let color = vmap
                        .get(&w[0])
                        .map(|v| v.color)
                        .ok_or(ComplexError::DanglingVertexId(w[0]))?;
                    return Err(ComplexError::DuplicateColorInFacet {
                        facet: format!("{{{}}}", sorted.iter().map(|v| v.0.to_string()).join(",")),
                        color,
                    });
                }
            }
            let simplex = Simplex(sorted);
            let mut seen: BTreeSet<Color> = BTreeSet::new();
            for id in simplex.vertices() {
                let v = vmap
                    .get(id)
                    .ok_or(ComplexError::DanglingVertexId(*id))?;
                if !seen.insert(v.color) {
                    return Err(ComplexError::DuplicateColorInFacet {
                        facet: simplex.to_string(),
                        color: v.color,
                    });
                }
            }
            facets.push(simplex);
        }
        facets.sort();
        facets.dedup();

        for (i, a) in facets.iter().enumerate() {
            for (j, b) in facets.iter().enumerate() {
                if i != j && a.is_face_of(b) {
                    return Err(ComplexError::NonMaximalFacet {
                        inner: a.to_string(),
                        outer: b.to_string(),
                    });
                }
            }
        }

        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        for f in &facets {
            used.extend(f.vertices().iter().copied());
        }
        for id in vmap.keys() {
            if !used.contains(id) {
                return Err(ComplexError::VertexNotInAnyFacet(*id));
            }
        }

        let dim = facets.iter().map(|f| f.dim()).max().unwrap_or(0);
        let pure = facets.iter().all(|f| f.dim() == dim);
        Ok(Complex {
            id: fresh_complex_id(),
            vertices: vmap,
            facets,
            dim,
            pure,
        })
    }

    pub fn id(&self) -> ComplexId {
        self.id
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Maximum facet dimension. Panics on the empty complex.
    pub fn dimension(&self) -> usize {
        assert!(!self.is_empty(), "dimension of empty complex");
        self.dim
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn color_of(&self, id: VertexId) -> Option<Color> {
        self.vertices.get(&id).map(|v| v.color)
    }

    /// Facets in ascending lexicographic order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Colors occurring anywhere in the complex.
    pub fn colors(&self) -> BTreeSet<Color> {
        self.vertices.values().map(|v| v.color).collect()
    }

    /// Colors of a simplex's vertices; one per vertex by proper coloring.
    pub fn simplex_colors(&self, s: &Simplex) -> BTreeSet<Color> {
        s.vertices()
            .iter()
            .filter_map(|v| self.color_of(*v))
            .collect()
    }

    /// The vertex of `s` with color `c`, unique when present.
    pub fn colored_vertex(&self, s: &Simplex, c: Color) -> Option<VertexId> {
        s.vertices()
            .iter()
            .copied()
            .find(|v| self.color_of(*v) == Some(c))
    }

    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        !s.is_empty()
            && s.vertices().iter().all(|v| self.vertices.contains_key(v))
            && self.facets.iter().any(|f| s.is_face_of(f))
    }

    /// All simplices, every dimension, ascending (dim, lexicographic).
    pub fn all_faces(&self) -> Vec<Simplex> {
        let set: BTreeSet<Simplex> = self.facets.iter().flat_map(|f| f.faces()).collect();
        let mut faces: Vec<Simplex> = set.into_iter().collect();
        faces.sort_by_key(|s| (s.len(), s.clone()));
        faces
    }

    pub fn faces_of_dim(&self, r: usize) -> Vec<Simplex> {
        let set: BTreeSet<Simplex> = self
            .facets
            .iter()
            .filter(|f| f.dim() >= r)
            .flat_map(|f| f.vertices().iter().copied().combinations(r + 1))
            .map(Simplex)
            .collect();
        set.into_iter().collect()
    }

    /// Subcomplex of all simplices of dimension at most `r` that lie in
    /// some `r`-simplex. Its facets are exactly the `r`-simplices.
    pub fn skeleton(&self, r: usize) -> Result<Complex, ComplexError> {
        if self.is_empty() || r > self.dim {
            return Err(ComplexError::RankOutOfRange {
                rank: r,
                dim: if self.is_empty() { 0 } else { self.dim },
            });
        }
        let facets = self.faces_of_dim(r);
        self.subcomplex_from_facets(facets)
    }

    /// Subcomplex generated by the facets of this complex containing `v`.
    pub fn star(&self, v: VertexId) -> Result<Complex, ComplexError> {
        if !self.vertices.contains_key(&v) {
            return Err(ComplexError::UnknownVertex(v));
        }
        let facets: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| f.contains(v))
            .cloned()
            .collect();
        self.subcomplex_from_facets(facets)
    }

    /// Link of a simplex: all simplices disjoint from `s` whose union with
    /// `s` is again a simplex. May be empty (when `s` is a facet).
    pub fn link(&self, s: &Simplex) -> Result<Complex, ComplexError> {
        if !self.contains_simplex(s) {
            return Err(ComplexError::UnknownSimplex(s.to_string()));
        }
        let mut facets: Vec<Simplex> = Vec::new();
        for f in &self.facets {
            if s.is_face_of(f) {
                let rest = f.minus(s);
                if !rest.is_empty() {
                    facets.push(Simplex::new(rest));
                }
            }
        }
        self.subcomplex_from_facets(facets)
    }

    /// Builds a subcomplex of this complex from the given facet list,
    /// carrying vertex colors and payloads over. The facets must be
    /// simplices over this complex's vertices, mutually incomparable.
    pub fn subcomplex_from_facets(&self, facets: Vec<Simplex>) -> Result<Complex, ComplexError> {
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        for f in &facets {
            used.extend(f.vertices().iter().copied());
        }
        let vertices: Vec<Vertex> = used
            .iter()
            .map(|id| {
                self.vertices
                    .get(id)
                    .cloned()
                    .ok_or(ComplexError::DanglingVertexId(*id))
            })
            .collect::<Result<_, _>>()?;
        Complex::build(vertices, facets.into_iter().map(|f| f.0).collect())
    }

    /// True when every vertex of `self` occurs identically in `other` and
    /// every facet of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.vertices.values().all(|v| other.vertex(v.id) == Some(v))
            && self.facets.iter().all(|f| other.contains_simplex(f))
    }

    /// Removes all vertices of color `c`, keeping the maximal remainders of
    /// the facets. Returns an empty complex if nothing remains.
    pub fn without_color(&self, c: Color) -> Complex {
        let mut facets: Vec<Simplex> = Vec::new();
        for f in &self.facets {
            let rest: Vec<VertexId> = f
                .vertices()
                .iter()
                .copied()
                .filter(|v| self.color_of(*v) != Some(c))
                .collect();
            if !rest.is_empty() {
                facets.push(Simplex::new(rest));
            }
        }
        facets.sort();
        facets.dedup();
        let maximal: Vec<Simplex> = facets
            .iter()
            .filter(|a| !facets.iter().any(|b| *a != b && a.is_face_of(b)))
            .cloned()
            .collect();
        self.subcomplex_from_facets(maximal)
            .expect("facet remainders are simplices of the ambient complex")
    }

    /// Graded link-connectivity verdict, checked degree by degree:
    /// a simplex `s` with `dim(K) - dim(s) - 2 >= 0` needs a graph-connected
    /// link, and one with `dim(K) - dim(s) - 2 == -1` needs a nonempty link.
    /// Higher connectivity degrees are outside the scope of this check.
    pub fn is_link_connected(&self) -> Result<LinkVerdict, ComplexError> {
        if !self.pure {
            return Err(ComplexError::NotPure);
        }
        let k = self.dim as i64;
        for s in self.all_faces() {
            let grade = k - s.dim() as i64 - 2;
            if grade < -1 {
                continue;
            }
            let link = self.link(&s)?;
            let ok = if grade == -1 {
                !link.is_empty()
            } else {
                link.is_graph_connected()
            };
            if !ok {
                return Ok(LinkVerdict {
                    connected: false,
                    witness: Some(s),
                });
            }
        }
        Ok(LinkVerdict {
            connected: true,
            witness: None,
        })
    }

    /// Nonempty and connected through the 1-skeleton.
    pub fn is_graph_connected(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let start = *self.vertices.keys().next().unwrap();
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for f in &self.facets {
                if f.contains(v) {
                    for w in f.vertices() {
                        if !seen.contains(w) {
                            stack.push(*w);
                        }
                    }
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

/// Outcome of the graded link-connectivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkVerdict {
    pub connected: bool,
    /// First failing simplex in ascending (dimension, lexicographic) order.
    pub witness: Option<Simplex>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDto {
    vertices: Vec<Vertex>,
    facets: Vec<Vec<u32>>,
}

impl Complex {
    /// Canonical JSON form: vertices ascending by id, facets ascending
    /// lexicographically, each facet's ids ascending.
    pub fn to_json(&self) -> serde_json::Value {
        let dto = ComplexDto {
            vertices: self.vertices.values().cloned().collect(),
            facets: self
                .facets
                .iter()
                .map(|f| f.vertices().iter().map(|v| v.0).collect())
                .collect(),
        };
        serde_json::to_value(dto).expect("complex serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Complex, String> {
        let dto: ComplexDto =
            serde_json::from_value(value.clone()).map_err(|e| format!("malformed complex: {e}"))?;
        let facets = dto
            .facets
            .into_iter()
            .map(|ids| ids.into_iter().map(VertexId).collect())
            .collect();
        Complex::build(dto.vertices, facets).map_err(|e| e.to_string())
    }
}

/// Shorthand for tests and builders: vertex from raw parts.
pub fn vertex(id: u32, color: u32, payload: &str) -> Vertex {
    Vertex {
        id: VertexId(id),
        color: Color(color),
        payload: payload.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(raw: &[u32]) -> Vec<VertexId> {
        raw.iter().map(|i| VertexId(*i)).collect()
    }

    fn triangle() -> Complex {
        Complex::build(
            vec![vertex(0, 0, "a"), vertex(1, 1, "b"), vertex(2, 2, "c")],
            vec![ids(&[0, 1, 2])],
        )
        .unwrap()
    }

    /// Two triangles sharing the edge {1,2}.
    fn two_triangles() -> Complex {
        Complex::build(
            vec![
                vertex(0, 0, "a"),
                vertex(1, 1, "b"),
                vertex(2, 2, "c"),
                vertex(3, 0, "d"),
            ],
            vec![ids(&[0, 1, 2]), ids(&[1, 2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn builds_and_reports_shape() {
        let k = two_triangles();
        assert_eq!(k.dimension(), 2);
        assert!(k.is_pure());
        assert_eq!(k.facets().len(), 2);
        assert_eq!(k.colors().len(), 3);
    }

    #[test]
    fn rejects_duplicate_color() {
        let err = Complex::build(
            vec![vertex(0, 0, "a"), vertex(1, 0, "b")],
            vec![ids(&[0, 1])],
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::DuplicateColorInFacet { .. }));
    }

    #[test]
    fn rejects_dangling_id() {
        let err = Complex::build(vec![vertex(0, 0, "a")], vec![ids(&[0, 7])]).unwrap_err();
        assert_eq!(err, ComplexError::DanglingVertexId(VertexId(7)));
    }

    #[test]
    fn rejects_non_maximal_facet() {
        let err = Complex::build(
            vec![vertex(0, 0, "a"), vertex(1, 1, "b"), vertex(2, 2, "c")],
            vec![ids(&[0, 1, 2]), ids(&[0, 1])],
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::NonMaximalFacet { .. }));
    }

    #[test]
    fn rejects_unused_vertex() {
        let err = Complex::build(
            vec![vertex(0, 0, "a"), vertex(1, 1, "b"), vertex(2, 2, "c")],
            vec![ids(&[0, 1])],
        )
        .unwrap_err();
        assert_eq!(err, ComplexError::VertexNotInAnyFacet(VertexId(2)));
    }

    #[test]
    fn skeleton_of_two_triangles() {
        let k = two_triangles();
        let s0 = k.skeleton(0).unwrap();
        assert_eq!(s0.facets().len(), 4);
        assert!(s0.facets().iter().all(|f| f.dim() == 0));

        let s1 = k.skeleton(1).unwrap();
        assert_eq!(s1.facets().len(), 5);
        assert!(s1.is_pure());
        assert_eq!(s1.dimension(), 1);

        assert!(matches!(
            k.skeleton(3),
            Err(ComplexError::RankOutOfRange { rank: 3, dim: 2 })
        ));
    }

    #[test]
    fn skeleton_is_idempotent() {
        let k = two_triangles();
        for r in 0..=2 {
            let s = k.skeleton(r).unwrap();
            assert_eq!(s.skeleton(r).unwrap(), s);
        }
    }

    #[test]
    fn star_collects_incident_facets() {
        let k = two_triangles();
        let st = k.star(VertexId(1)).unwrap();
        assert_eq!(st.facets().len(), 2);
        let st0 = k.star(VertexId(0)).unwrap();
        assert_eq!(st0.facets().len(), 1);
        assert!(matches!(
            k.star(VertexId(9)),
            Err(ComplexError::UnknownVertex(_))
        ));
    }

    #[test]
    fn link_of_shared_edge_and_of_vertex() {
        let k = two_triangles();
        let e = Simplex::new(ids(&[1, 2]));
        let link = k.link(&e).unwrap();
        let mut vs: Vec<VertexId> = link.vertices().map(|v| v.id).collect();
        vs.sort();
        assert_eq!(vs, ids(&[0, 3]));
        assert!(link.facets().iter().all(|f| f.dim() == 0));

        let lv = k.link(&Simplex::singleton(VertexId(0))).unwrap();
        assert_eq!(lv.facets(), &[Simplex::new(ids(&[1, 2]))]);

        // Link of a facet is empty.
        let lf = k.link(&Simplex::new(ids(&[0, 1, 2]))).unwrap();
        assert!(lf.is_empty());
    }

    #[test]
    fn link_of_unknown_simplex_errors() {
        let k = two_triangles();
        let bad = Simplex::new(ids(&[0, 3]));
        assert!(matches!(
            k.link(&bad),
            Err(ComplexError::UnknownSimplex(_))
        ));
    }

    #[test]
    fn path_is_link_connected() {
        // Path on 4 vertices, alternating colors.
        let k = Complex::build(
            vec![
                vertex(0, 0, ""),
                vertex(1, 1, ""),
                vertex(2, 0, ""),
                vertex(3, 1, ""),
            ],
            vec![ids(&[0, 1]), ids(&[1, 2]), ids(&[2, 3])],
        )
        .unwrap();
        let verdict = k.is_link_connected().unwrap();
        assert!(verdict.connected);
        assert_eq!(verdict.witness, None);
    }

    #[test]
    fn shared_vertex_pinch_is_not_link_connected() {
        // Two triangles glued at vertex 0 only: its link is two disjoint
        // edges, which is not graph-connected.
        let k = Complex::build(
            vec![
                vertex(0, 0, ""),
                vertex(1, 1, ""),
                vertex(2, 2, ""),
                vertex(3, 1, ""),
                vertex(4, 2, ""),
            ],
            vec![ids(&[0, 1, 2]), ids(&[0, 3, 4])],
        )
        .unwrap();
        let verdict = k.is_link_connected().unwrap();
        assert!(!verdict.connected);
        assert_eq!(verdict.witness, Some(Simplex::singleton(VertexId(0))));
    }

    #[test]
    fn impure_complex_rejected_by_link_check() {
        let k = Complex::build(
            vec![vertex(0, 0, ""), vertex(1, 1, ""), vertex(2, 2, "")],
            vec![ids(&[0, 1]), ids(&[2])],
        )
        .unwrap();
        assert!(!k.is_pure());
        assert_eq!(k.is_link_connected().unwrap_err(), ComplexError::NotPure);
    }

    #[test]
    fn without_color_keeps_maximal_remainders() {
        let k = triangle();
        let rest = k.without_color(Color(0));
        assert_eq!(rest.facets().len(), 1);
        assert_eq!(rest.facets()[0], Simplex::new(ids(&[1, 2])));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let k = two_triangles();
        let json = k.to_json();
        let back = Complex::from_json(&json).unwrap();
        assert_eq!(back, k);
        assert_eq!(back.to_json(), json);
        // Facet lists appear sorted.
        let facets = json.get("facets").unwrap().as_array().unwrap();
        assert_eq!(facets[0], serde_json::json!([0, 1, 2]));
        assert_eq!(facets[1], serde_json::json!([1, 2, 3]));
    }

    #[test]
    fn from_json_rejects_unknown_fields() {
        let v = serde_json::json!({"vertices": [], "facets": [], "extra": 1});
        assert!(Complex::from_json(&v).is_err());
    }
}
