//! Piecewise-affine maps between realizations and their color behavior.
//!
//! A map is stored as a subdivision of its input complex together with one
//! image point per subdivision vertex; on each cell it interpolates
//! affinely. The color analysis asks whether the map respects process
//! colors pointwise: around every point, images must show every color of
//! the point's carrier, and each point's own image must share a color with
//! its carrier. On 1-dimensional inputs the check is exact; on higher
//! dimensions a color-preserving simplicial witness certifies the property
//! and otherwise a seeded search hunts for counterexamples.

use crate::complex::{Color, Complex, ComplexError, Simplex, VertexId};
use crate::geometry::{affine_combination, GeometryError, Point};
use crate::rational::{ratio, Rational};
use crate::subdivision::{Subdivision, SubdivisionError, SubdivisionKind};
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum MapError {
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("subdivision error: {0}")]
    Subdivision(#[from] SubdivisionError),
    #[error("vertex {0} has no image")]
    MissingImage(VertexId),
    #[error("image of vertex {0} does not lie in the output complex")]
    ImageOutsideCodomain(VertexId),
    #[error("images of cell {0} do not span a simplex of the output complex")]
    FacetImageNotASimplex(String),
    #[error("vertex images of cell {0} do not form a simplex of the output complex")]
    NotSimplicial(String),
    #[error("point lies outside the map's domain")]
    PointOutsideDomain,
    #[error("point belongs to a different complex than expected")]
    MixedAmbients,
    #[error("projection undefined: {0} is exactly the vertex of the dropped color")]
    UndefinedAtColorVertex(String),
    #[error("cell {0} does not lie within a single cell of the map's domain")]
    DomainNotRefined(String),
}

/// A piecewise-affine map from the realization of a subdivided complex
/// into the realization of an output complex.
#[derive(Debug, Clone)]
pub struct PAMap {
    domain: Subdivision,
    codomain: Complex,
    images: BTreeMap<VertexId, Point>,
    simplicial_witness: Option<BTreeMap<VertexId, VertexId>>,
}

impl PAMap {
    pub fn new(
        domain: Subdivision,
        codomain: Complex,
        images: BTreeMap<VertexId, Point>,
    ) -> Result<PAMap, MapError> {
        for v in domain.complex().vertices() {
            let p = images.get(&v.id).ok_or(MapError::MissingImage(v.id))?;
            if p.ambient() != codomain.id() {
                return Err(MapError::ImageOutsideCodomain(v.id));
            }
        }
        let m = PAMap {
            domain,
            codomain,
            images,
            simplicial_witness: None,
        };
        for f in m.domain.complex().facets() {
            let union = m.face_image_support(f);
            if !m.codomain.contains_simplex(&union) {
                return Err(MapError::FacetImageNotASimplex(f.to_string()));
            }
        }
        Ok(m)
    }

    /// Realizes a vertex-to-vertex assignment as a piecewise-affine map.
    /// Fails unless every cell's image vertex set spans a simplex of the
    /// output complex. The assignment is retained as a witness.
    pub fn realize_simplicial(
        domain: Subdivision,
        codomain: &Complex,
        assignment: &BTreeMap<VertexId, VertexId>,
    ) -> Result<PAMap, MapError> {
        for f in domain.complex().facets() {
            let mut targets = BTreeSet::new();
            for v in f.vertices() {
                let t = assignment.get(v).ok_or(MapError::MissingImage(*v))?;
                targets.insert(*t);
            }
            let s = Simplex::new(targets.into_iter().collect());
            if !codomain.contains_simplex(&s) {
                return Err(MapError::NotSimplicial(f.to_string()));
            }
        }
        let mut images = BTreeMap::new();
        for v in domain.complex().vertices() {
            let t = assignment[&v.id];
            if codomain.vertex(t).is_none() {
                return Err(MapError::ImageOutsideCodomain(v.id));
            }
            images.insert(v.id, Point::vertex(codomain, t)?);
        }
        let mut m = PAMap::new(domain, codomain.clone(), images)?;
        m.simplicial_witness = Some(assignment.clone());
        Ok(m)
    }

    pub fn domain(&self) -> &Subdivision {
        &self.domain
    }

    pub fn codomain(&self) -> &Complex {
        &self.codomain
    }

    pub fn image_of_vertex(&self, v: VertexId) -> &Point {
        &self.images[&v]
    }

    pub fn simplicial_witness(&self) -> Option<&BTreeMap<VertexId, VertexId>> {
        self.simplicial_witness.as_ref()
    }

    /// Simplicial maps serialize their vertex table; general maps
    /// serialize per-vertex image points.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("domain".into(), self.domain.to_json());
        obj.insert("codomain".into(), self.codomain.to_json());
        if let Some(w) = &self.simplicial_witness {
            let table: BTreeMap<String, u32> =
                w.iter().map(|(v, t)| (v.0.to_string(), t.0)).collect();
            obj.insert("witness".into(), serde_json::json!(table));
        } else {
            let images: BTreeMap<String, serde_json::Value> = self
                .images
                .iter()
                .map(|(v, p)| (v.0.to_string(), p.to_json()))
                .collect();
            obj.insert("images".into(), serde_json::json!(images));
        }
        serde_json::Value::Object(obj)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<PAMap, String> {
        let obj = value.as_object().ok_or("map must be an object")?;
        for k in obj.keys() {
            if !["domain", "codomain", "witness", "images"].contains(&k.as_str()) {
                return Err(format!("map has unknown field {k:?}"));
            }
        }
        let domain = Subdivision::from_json(obj.get("domain").ok_or("missing \"domain\"")?)?;
        let codomain = Complex::from_json(obj.get("codomain").ok_or("missing \"codomain\"")?)?;
        match (obj.get("witness"), obj.get("images")) {
            (Some(w), None) => {
                let table: BTreeMap<String, u32> =
                    serde_json::from_value(w.clone()).map_err(|e| format!("bad witness: {e}"))?;
                let assignment: BTreeMap<VertexId, VertexId> = table
                    .iter()
                    .map(|(v, t)| {
                        let v: u32 = v.parse().map_err(|_| format!("bad vertex key {v:?}"))?;
                        Ok((VertexId(v), VertexId(*t)))
                    })
                    .collect::<Result<_, String>>()?;
                PAMap::realize_simplicial(domain, &codomain, &assignment)
                    .map_err(|e| e.to_string())
            }
            (None, Some(imgs)) => {
                let raw = imgs.as_object().ok_or("\"images\" must be an object")?;
                let mut images = BTreeMap::new();
                for (v, p) in raw {
                    let v: u32 = v.parse().map_err(|_| format!("bad vertex key {v:?}"))?;
                    images.insert(VertexId(v), Point::from_json(&codomain, p)?);
                }
                PAMap::new(domain, codomain, images).map_err(|e| e.to_string())
            }
            _ => Err("map needs exactly one of \"witness\" or \"images\"".into()),
        }
    }

    /// True when a simplicial witness exists and preserves colors.
    pub fn is_color_preserving(&self) -> bool {
        match &self.simplicial_witness {
            None => false,
            Some(w) => w.iter().all(|(v, t)| {
                self.domain.complex().color_of(*v) == self.codomain.color_of(*t)
            }),
        }
    }

    /// Union of the image supports over the vertices of a domain cell: the
    /// support of the image of any relative-interior point of that cell.
    pub fn face_image_support(&self, g: &Simplex) -> Simplex {
        let mut union: Option<Simplex> = None;
        for v in g.vertices() {
            let s = self.images[v].support();
            union = Some(match union {
                None => s,
                Some(u) => u.union(&s),
            });
        }
        union.expect("cells are nonempty")
    }

    /// Union of the embedded supports over the vertices of a domain cell:
    /// the support of any relative-interior point of the embedded cell.
    pub fn face_domain_support(&self, g: &Simplex) -> Simplex {
        let mut union: Option<Simplex> = None;
        for v in g.vertices() {
            let s = self.domain.vertex_point(*v).support();
            union = Some(match union {
                None => s,
                Some(u) => u.union(&s),
            });
        }
        union.expect("cells are nonempty")
    }

    /// Evaluates the map at a point of the input realization.
    pub fn evaluate(&self, x: &Point) -> Result<Point, MapError> {
        if x.ambient() != self.domain.base().id() {
            return Err(MapError::MixedAmbients);
        }
        let hits = self.domain.locate(x);
        let (idx, coords) = hits.first().ok_or(MapError::PointOutsideDomain)?;
        let f = &self.domain.complex().facets()[*idx];
        let terms: Vec<(Rational, Point)> = f
            .vertices()
            .iter()
            .zip(coords.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (c.clone(), self.images[v].clone()))
            .collect();
        Ok(affine_combination(&self.codomain, &terms)?)
    }
}

/// Removes the coordinate of the color-`c` vertex from a point's support
/// and renormalizes. Points without the color are returned unchanged; the
/// pure color vertex itself has no image.
pub fn project_point(ambient: &Complex, x: &Point, c: Color) -> Result<Point, MapError> {
    if x.ambient() != ambient.id() {
        return Err(MapError::MixedAmbients);
    }
    let dropped: Vec<VertexId> = x
        .weights()
        .keys()
        .filter(|v| ambient.color_of(**v) == Some(c))
        .copied()
        .collect();
    let Some(&w) = dropped.first() else {
        return Ok(x.clone());
    };
    if x.weights().len() == 1 {
        return Err(MapError::UndefinedAtColorVertex(x.support().to_string()));
    }
    let alpha = x.weight(w);
    let scale = Rational::one() - alpha;
    let weights: BTreeMap<VertexId, Rational> = x
        .weights()
        .iter()
        .filter(|(v, _)| **v != w)
        .map(|(v, wt)| (*v, wt.clone() / scale.clone()))
        .collect();
    Ok(Point::new(ambient, weights)?)
}

/// Pushes a map through the color-`c` projection, restricted to a complex
/// of cells drawn inside the map's input space.
///
/// `new_base` becomes the input complex of the result; `base_embedding`
/// places each of its vertices in the original input realization. Every
/// cell of `new_base` must land inside a single cell of the original map,
/// so the result interpolates projected vertex images. Interpolation and
/// pointwise projection can differ in exact position within a cell, but
/// they agree on supports everywhere (endpoints exactly; relative
/// interiors have the union of the endpoint supports either way), so any
/// consumer reading carriers, colors, or supports sees the projection
/// itself.
pub fn project_map(
    f: &PAMap,
    c: Color,
    new_base: &Complex,
    base_embedding: &BTreeMap<VertexId, Point>,
    new_codomain: &Complex,
) -> Result<PAMap, MapError> {
    let mut images = BTreeMap::new();
    for v in new_base.vertices() {
        let p = base_embedding
            .get(&v.id)
            .ok_or(MapError::MissingImage(v.id))?;
        let value = f.evaluate(p)?;
        let projected = project_point(f.codomain(), &value, c)?;
        let rebuilt = Point::new(new_codomain, projected.weights().clone())
            .map_err(|_| MapError::ImageOutsideCodomain(v.id))?;
        images.insert(v.id, rebuilt);
    }
    for cell in new_base.facets() {
        let aligned = (0..f.domain().complex().facets().len()).any(|idx| {
            cell.vertices()
                .iter()
                .all(|v| f.domain().facet_coordinates(idx, &base_embedding[v]).is_some())
        });
        if !aligned {
            return Err(MapError::DomainNotRefined(cell.to_string()));
        }
    }
    let carrier: BTreeMap<VertexId, Simplex> = new_base
        .vertices()
        .map(|v| (v.id, Simplex::singleton(v.id)))
        .collect();
    let embedding: BTreeMap<VertexId, Point> = new_base
        .vertices()
        .map(|v| (v.id, Point::vertex(new_base, v.id).expect("vertex point")))
        .collect();
    let domain = Subdivision::from_parts(
        new_base.clone(),
        new_base.clone(),
        carrier,
        embedding,
        SubdivisionKind::IteratedChromatic { depth: 0 },
    )?;
    PAMap::new(domain, new_codomain.clone(), images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// The point's image shares no color with the point's carrier.
    NoSharedColor,
    /// Images around the point miss a color of the point's carrier.
    UncoveredColor(Color),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChromaticityViolation {
    pub at: Point,
    pub region_colors: BTreeSet<Color>,
    pub image_colors: BTreeSet<Color>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chromaticity {
    Chromatic {
        certificate: Option<BTreeMap<VertexId, VertexId>>,
    },
    Violation(Box<ChromaticityViolation>),
    NoViolationFound {
        samples: u64,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct ChromaticityOptions {
    pub samples: u64,
    pub seed: u64,
}

impl Default for ChromaticityOptions {
    fn default() -> Self {
        ChromaticityOptions {
            samples: 10_000,
            seed: 0,
        }
    }
}

/// Decides or probes whether a map respects colors pointwise.
///
/// Inputs of dimension at most 1 are decided exactly: corner and interior
/// vertices must have images sharing a color with their carrier, and each
/// cell's interior images must together show every carrier color. Higher
/// dimensions return a certificate when the map realizes a
/// color-preserving vertex assignment; otherwise vertex, cell, and seeded
/// random probes report either a verified counterexample or the absence of
/// one after the configured number of samples.
pub fn check_chromatic(f: &PAMap, options: &ChromaticityOptions) -> Chromaticity {
    if f.is_color_preserving() {
        return Chromaticity::Chromatic {
            certificate: f.simplicial_witness.clone(),
        };
    }
    if let Some(v) = face_sweep(f) {
        debug_assert!(violation_holds(f, &v));
        return Chromaticity::Violation(Box::new(v));
    }
    let exact = f.domain.base().dimension() <= 1;
    if exact {
        return Chromaticity::Chromatic { certificate: None };
    }
    if let Some(v) = random_sweep(f, options) {
        debug_assert!(violation_holds(f, &v));
        return Chromaticity::Violation(Box::new(v));
    }
    Chromaticity::NoViolationFound {
        samples: options.samples,
    }
}

/// Checks every cell and face of the domain: facets must cover their
/// region's colors, proper faces and vertices must share one.
fn face_sweep(f: &PAMap) -> Option<ChromaticityViolation> {
    let facets: BTreeSet<&Simplex> = f.domain.complex().facets().iter().collect();
    for g in f.domain.complex().all_faces() {
        let region: BTreeSet<Color> = f
            .domain
            .base()
            .simplex_colors(&f.face_domain_support(&g));
        let image: BTreeSet<Color> = f.codomain.simplex_colors(&f.face_image_support(&g));
        if facets.contains(&g) {
            let missing = region.difference(&image).next().copied();
            if let Some(missing) = missing {
                return Some(ChromaticityViolation {
                    at: interior_point(f, &g),
                    region_colors: region,
                    image_colors: image,
                    kind: ViolationKind::UncoveredColor(missing),
                });
            }
        } else if region.intersection(&image).next().is_none() {
            return Some(ChromaticityViolation {
                at: interior_point(f, &g),
                region_colors: region,
                image_colors: image,
                kind: ViolationKind::NoSharedColor,
            });
        }
    }
    None
}

fn random_sweep(f: &PAMap, options: &ChromaticityOptions) -> Option<ChromaticityViolation> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(options.seed);
    let facets = f.domain.complex().facets();
    for _ in 0..options.samples {
        let g = &facets[rng.gen_range(0..facets.len())];
        let coords: Vec<Rational> = g
            .vertices()
            .iter()
            .map(|_| Rational::from_integer(rng.gen_range(1i64..=997).into()))
            .collect();
        let total: Rational = coords.iter().cloned().sum();
        let terms_dom: Vec<(Rational, Point)> = g
            .vertices()
            .iter()
            .zip(&coords)
            .map(|(v, c)| (c.clone() / total.clone(), f.domain.vertex_point(*v).clone()))
            .collect();
        let terms_img: Vec<(Rational, Point)> = g
            .vertices()
            .iter()
            .zip(&coords)
            .map(|(v, c)| (c.clone() / total.clone(), f.images[v].clone()))
            .collect();
        let x = affine_combination(f.domain.base(), &terms_dom).expect("interior point");
        let y = affine_combination(&f.codomain, &terms_img).expect("image point");
        let region = f.domain.base().simplex_colors(&x.support());
        let image = f.codomain.simplex_colors(&y.support());
        let missing = region.difference(&image).next().copied();
        if let Some(missing) = missing {
            return Some(ChromaticityViolation {
                at: x,
                region_colors: region,
                image_colors: image,
                kind: ViolationKind::UncoveredColor(missing),
            });
        }
    }
    None
}

/// A relative-interior point of the embedded cell: the average of its
/// embedded vertices.
fn interior_point(f: &PAMap, g: &Simplex) -> Point {
    let k = g.len() as i64;
    let terms: Vec<(Rational, Point)> = g
        .vertices()
        .iter()
        .map(|v| (ratio(1, k), f.domain.vertex_point(*v).clone()))
        .collect();
    affine_combination(f.domain.base(), &terms).expect("interior point")
}

/// Re-derives a reported violation from the map itself, independently of
/// the sweep that found it.
pub fn violation_holds(f: &PAMap, v: &ChromaticityViolation) -> bool {
    let region = f.domain.base().simplex_colors(&v.at.support());
    if region != v.region_colors {
        return false;
    }
    match &v.kind {
        ViolationKind::NoSharedColor => {
            let Ok(y) = f.evaluate(&v.at) else {
                return false;
            };
            let image = f.codomain.simplex_colors(&y.support());
            image.intersection(&region).next().is_none()
        }
        ViolationKind::UncoveredColor(missing) => {
            if !region.contains(missing) {
                return false;
            }
            // The color must be missing from the images of a full cell
            // whose interior contains the point.
            f.domain.locate(&v.at).iter().any(|(idx, coords)| {
                coords.iter().all(|c| c.is_positive()) && {
                    let cell = &f.domain.complex().facets()[*idx];
                    !f.codomain
                        .simplex_colors(&f.face_image_support(cell))
                        .contains(missing)
                }
            })
        }
    }
}
