//! Simplicial approximation of maps, preserving colors.
//!
//! Given a map into an output complex, the goal is a color-preserving
//! simplicial map on a deep enough chromatic subdivision of the input that
//! stays within the carrier of the image of each cell. The search
//! escalates depth until three gates pass: every cell's image sits inside
//! the open star of some output vertex, the color-matched vertex choices
//! assemble into a simplicial map, and the result verifies against the
//! original map cell by cell. Inputs of dimension 2 recurse: the cells are
//! partitioned by covering color, each part drops that color and recurses
//! on the remaining 1-dimensional boundary through the color projection of
//! the map, and the partial answers are globalized on a deeper
//! subdivision.
//!
//! All tests here are exact. A cell's image lies in the open star of `w`
//! exactly when the `w`-weight is positive throughout the cell's relative
//! interior; since weights are nonnegative and affine on each piece, that
//! reduces to support checks at piece corners and split points.

use crate::chromap::{project_map, project_point, MapError, PAMap};
use crate::complex::{Color, ComplexError, Simplex, VertexId};
use crate::geometry::{GeometryError, Point};
use crate::rational::Rational;
use crate::subdivision::{ChromaticTower, Subdivision, SubdivisionError, SubdivisionKind};
use num::Signed;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ApproxError {
    #[error("approximation is implemented for inputs of dimension at most 2, got {0}")]
    DimensionUnsupported(usize),
    #[error("no approximation found up to depth {max_depth}")]
    DepthExhausted { max_depth: u32 },
    #[error("image carrier of vertex {vertex} has no {color} vertex")]
    MissingColorInCarrier { vertex: VertexId, color: Color },
    #[error("map error: {0}")]
    Map(#[from] MapError),
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("subdivision error: {0}")]
    Subdivision(#[from] SubdivisionError),
}

#[derive(Debug, Clone, Copy)]
pub struct ApproxOptions {
    /// Smallest subdivision depth to try.
    pub min_depth: u32,
    /// Largest subdivision depth to try before giving up.
    pub max_depth: u32,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            min_depth: 0,
            max_depth: 4,
        }
    }
}

/// A subdivision together with, per cell, the output vertices whose open
/// star contains the image of the cell's relative interior.
#[derive(Debug, Clone)]
pub struct StarCover {
    pub depth: u32,
    pub subdivision: Subdivision,
    pub assignment: Vec<BTreeSet<VertexId>>,
}

impl StarCover {
    pub fn fully_covered(&self) -> bool {
        self.assignment.iter().all(|a| !a.is_empty())
    }

    pub fn uncovered_cells(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_empty())
            .map(|(i, _)| i)
            .collect()
    }
}

/// A color-preserving simplicial map approximating a given map.
#[derive(Debug, Clone)]
pub struct ChromaticApproximation {
    pub depth: u32,
    pub subdivision: Subdivision,
    pub assignment: BTreeMap<VertexId, VertexId>,
    pub realization: PAMap,
}

/// Cached per-vertex data for exact piecewise analysis of a map over the
/// cells of a finer subdivision.
struct Probe<'a> {
    f: &'a PAMap,
    values: BTreeMap<VertexId, Point>,
    cells: BTreeMap<VertexId, BTreeSet<usize>>,
}

impl<'a> Probe<'a> {
    fn new(f: &'a PAMap, s: &Subdivision) -> Result<Probe<'a>, ApproxError> {
        let mut values = BTreeMap::new();
        let mut cells = BTreeMap::new();
        for v in s.complex().vertices() {
            let x = s.vertex_point(v.id);
            values.insert(v.id, f.evaluate(x)?);
            cells.insert(
                v.id,
                f.domain().locate(x).into_iter().map(|(i, _)| i).collect(),
            );
        }
        Ok(Probe { f, values, cells })
    }

    fn common_cell(&self, vs: &[VertexId]) -> bool {
        let mut iter = vs.iter();
        let Some(first) = iter.next() else {
            return false;
        };
        let mut common = self.cells[first].clone();
        for v in iter {
            common = common.intersection(&self.cells[v]).copied().collect();
        }
        !common.is_empty()
    }

    /// Split points of the segment between two embedded vertices: map
    /// domain vertices strictly inside it. Only meaningful when the
    /// segment lies inside a 1-dimensional base cell, where consecutive
    /// split points always bound a single map cell.
    fn segment_breaks(&self, s: &Subdivision, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        let pa = s.vertex_point(a);
        let pb = s.vertex_point(b);
        let seg = pa.support().union(&pb.support());
        if seg.dim() != 1 {
            return None;
        }
        let axis = seg.vertices()[1];
        let (lo, hi) = {
            let ta = pa.weight(axis);
            let tb = pb.weight(axis);
            if ta < tb {
                (ta, tb)
            } else {
                (tb, ta)
            }
        };
        let mut breaks: Vec<(Rational, VertexId)> = Vec::new();
        for u in self.f.domain().complex().vertices() {
            let pu = self.f.domain().vertex_point(u.id);
            if !pu.support().is_face_of(&seg) {
                continue;
            }
            let t = pu.weight(axis);
            if t > lo && t < hi {
                breaks.push((t, u.id));
            }
        }
        breaks.sort();
        Some(breaks.into_iter().map(|(_, u)| u).collect())
    }

    /// Output vertices whose weight stays positive on the relative
    /// interior of the embedded cell. Empty when uncoverable or when the
    /// cell cannot be certified against the map's pieces.
    fn cover_set(&self, s: &Subdivision, cell: &Simplex) -> BTreeSet<VertexId> {
        let vs = cell.vertices();
        if vs.len() == 1 {
            return self.values[&vs[0]].support().vertices().iter().copied().collect();
        }
        if self.common_cell(vs) {
            let mut union = BTreeSet::new();
            for v in vs {
                union.extend(self.values[v].support().vertices().iter().copied());
            }
            return union;
        }
        if vs.len() == 2 {
            if let Some(breaks) = self.segment_breaks(s, vs[0], vs[1]) {
                let mut iter = breaks.iter();
                let Some(first) = iter.next() else {
                    return BTreeSet::new();
                };
                let mut inter: BTreeSet<VertexId> = self
                    .f
                    .image_of_vertex(*first)
                    .support()
                    .vertices()
                    .iter()
                    .copied()
                    .collect();
                for m in iter {
                    let supp: BTreeSet<VertexId> = self
                        .f
                        .image_of_vertex(*m)
                        .support()
                        .vertices()
                        .iter()
                        .copied()
                        .collect();
                    inter = inter.intersection(&supp).copied().collect();
                }
                return inter;
            }
        }
        BTreeSet::new()
    }

    /// Supports of the image over the embedded cell, one generator per
    /// affine piece. `None` when the cell cannot be certified.
    fn piece_supports(&self, s: &Subdivision, cell: &Simplex) -> Option<Vec<Simplex>> {
        let vs = cell.vertices();
        if vs.len() == 1 {
            return Some(vec![self.values[&vs[0]].support()]);
        }
        if self.common_cell(vs) {
            let mut union: Option<Simplex> = None;
            for v in vs {
                let supp = self.values[v].support();
                union = Some(match union {
                    None => supp,
                    Some(u) => u.union(&supp),
                });
            }
            return Some(vec![union.expect("cells are nonempty")]);
        }
        if vs.len() == 2 {
            if let Some(breaks) = self.segment_breaks(s, vs[0], vs[1]) {
                let mut stops: Vec<Simplex> = Vec::with_capacity(breaks.len() + 2);
                stops.push(self.values[&vs[0]].support());
                stops.extend(breaks.iter().map(|m| self.f.image_of_vertex(*m).support()));
                stops.push(self.values[&vs[1]].support());
                return Some(
                    stops
                        .windows(2)
                        .map(|w| w[0].union(&w[1]))
                        .collect(),
                );
            }
        }
        None
    }
}

/// Computes the open-star cover of a map over the cells of a subdivision
/// of its input complex.
pub fn star_cover(f: &PAMap, s: &Subdivision) -> Result<Vec<BTreeSet<VertexId>>, ApproxError> {
    let probe = Probe::new(f, s)?;
    Ok(s.complex()
        .facets()
        .iter()
        .map(|cell| probe.cover_set(s, cell))
        .collect())
}

/// Finds the smallest depth in the configured range at which every cell of
/// the iterated chromatic subdivision is star-covered.
pub fn star_covered_subdivide(
    f: &PAMap,
    options: &ApproxOptions,
) -> Result<StarCover, ApproxError> {
    let mut tower = ChromaticTower::new(f.domain().base());
    for depth in options.min_depth..=options.max_depth {
        tower.ensure_depth(depth);
        let s = tower.composed(depth);
        let assignment = star_cover(f, s)?;
        if assignment.iter().all(|a| !a.is_empty()) {
            return Ok(StarCover {
                depth,
                subdivision: s.clone(),
                assignment,
            });
        }
    }
    Err(ApproxError::DepthExhausted {
        max_depth: options.max_depth,
    })
}

/// On an input of dimension at most 1: sends each subdivision vertex to
/// the vertex of its own color in the carrier of its image. The choice
/// depends only on the map; covering and depth decide whether it works.
pub fn approximate_dim1(
    f: &PAMap,
    s: &Subdivision,
) -> Result<BTreeMap<VertexId, VertexId>, ApproxError> {
    let mut assignment = BTreeMap::new();
    for v in s.complex().vertices() {
        let y = f.evaluate(s.vertex_point(v.id))?;
        let target = y
            .support()
            .vertices()
            .iter()
            .copied()
            .find(|w| f.codomain().color_of(*w) == Some(v.color))
            .ok_or(ApproxError::MissingColorInCarrier {
                vertex: v.id,
                color: v.color,
            })?;
        assignment.insert(v.id, target);
    }
    Ok(assignment)
}

/// Searches for a color-preserving simplicial approximation of a map,
/// escalating subdivision depth until the result verifies.
pub fn chromatic_approximation(
    f: &PAMap,
    options: &ApproxOptions,
) -> Result<ChromaticApproximation, ApproxError> {
    let base = f.domain().base().clone();
    if base.is_empty() {
        return Err(ApproxError::DimensionUnsupported(0));
    }
    match base.dimension() {
        0 | 1 => approximation_low_dim(f, options),
        2 => approximation_dim2(f, options),
        d => Err(ApproxError::DimensionUnsupported(d)),
    }
}

fn attempt(
    f: &PAMap,
    s: &Subdivision,
    depth: u32,
    assignment: BTreeMap<VertexId, VertexId>,
) -> Option<ChromaticApproximation> {
    let realization =
        PAMap::realize_simplicial(s.clone(), f.codomain(), &assignment).ok()?;
    let approx = ChromaticApproximation {
        depth,
        subdivision: s.clone(),
        assignment,
        realization,
    };
    match verify_chromatic_approximation(f, &approx) {
        Ok(true) => Some(approx),
        _ => None,
    }
}

fn approximation_low_dim(
    f: &PAMap,
    options: &ApproxOptions,
) -> Result<ChromaticApproximation, ApproxError> {
    let mut tower = ChromaticTower::new(f.domain().base());
    for depth in options.min_depth..=options.max_depth {
        tower.ensure_depth(depth);
        let s = tower.composed(depth);
        let cover = star_cover(f, s)?;
        if cover.iter().any(|a| a.is_empty()) {
            continue;
        }
        let Ok(assignment) = approximate_dim1(f, s) else {
            continue;
        };
        if let Some(approx) = attempt(f, s, depth, assignment) {
            return Ok(approx);
        }
    }
    Err(ApproxError::DepthExhausted {
        max_depth: options.max_depth,
    })
}

fn approximation_dim2(
    f: &PAMap,
    options: &ApproxOptions,
) -> Result<ChromaticApproximation, ApproxError> {
    let base = f.domain().base().clone();
    let floor = match f.domain().kind() {
        SubdivisionKind::IteratedChromatic { depth } => depth,
        _ => 0,
    };
    let start = options.min_depth.max(floor);
    let mut tower = ChromaticTower::new(&base);
    'outer: for r0 in start..=options.max_depth {
        tower.ensure_depth(r0);
        let s = tower.composed(r0).clone();
        let cover = star_cover(f, &s)?;
        if cover.iter().any(|a| a.is_empty()) {
            continue;
        }

        // Partition the cells by the smallest color that covers them.
        let mut parts: Vec<(Color, Vec<usize>)> = Vec::new();
        let mut taken: BTreeSet<usize> = BTreeSet::new();
        for c in base.colors() {
            let mine: Vec<usize> = (0..cover.len())
                .filter(|i| !taken.contains(i))
                .filter(|i| {
                    cover[*i]
                        .iter()
                        .any(|w| f.codomain().color_of(*w) == Some(c))
                })
                .collect();
            if !mine.is_empty() {
                taken.extend(mine.iter().copied());
                parts.push((c, mine));
            }
        }
        if taken.len() != cover.len() {
            continue;
        }

        // Per part: anchor the part color's vertices to star centers, then
        // recurse on the part boundary with that color projected away.
        let mut anchors: BTreeMap<Color, BTreeMap<VertexId, VertexId>> = BTreeMap::new();
        let mut inner: BTreeMap<Color, ChromaticApproximation> = BTreeMap::new();
        let mut inner_depth_max = 0u32;
        for (c, cells) in &parts {
            let part_facets: Vec<Simplex> = cells
                .iter()
                .map(|i| s.complex().facets()[*i].clone())
                .collect();
            let Ok(k0) = s.complex().subcomplex_from_facets(part_facets) else {
                continue 'outer;
            };
            let mut mu0: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            for v in k0.vertices().filter(|v| v.color == *c) {
                let mut candidates: BTreeSet<VertexId> = BTreeSet::new();
                for i in cells {
                    if s.complex().facets()[*i].contains(v.id) {
                        candidates.extend(
                            cover[*i]
                                .iter()
                                .filter(|w| f.codomain().color_of(**w) == Some(*c)),
                        );
                    }
                }
                match candidates.into_iter().next() {
                    Some(w) => {
                        mu0.insert(v.id, w);
                    }
                    None => continue 'outer,
                }
            }
            anchors.insert(*c, mu0);

            let k1 = k0.without_color(*c);
            if k1.is_empty() {
                continue;
            }
            let o1 = f.codomain().without_color(*c);
            let embedding: BTreeMap<VertexId, Point> = k1
                .vertices()
                .map(|v| (v.id, s.vertex_point(v.id).clone()))
                .collect();
            let Ok(projected) = project_map(f, *c, &k1, &embedding, &o1) else {
                continue 'outer;
            };
            let inner_options = ApproxOptions {
                min_depth: 0,
                max_depth: options.max_depth,
            };
            let Ok(part_approx) = chromatic_approximation(&projected, &inner_options) else {
                continue 'outer;
            };
            inner_depth_max = inner_depth_max.max(part_approx.depth);
            inner.insert(*c, part_approx);
        }

        // Globalize at a depth deep enough for every part's recursion.
        let k = r0 + inner_depth_max;
        tower.ensure_depth(k);
        let t = tower.composed(k).clone();
        let mut assignment: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for v in t.complex().vertices() {
            let x = t.vertex_point(v.id);
            let hits = s.locate(x);
            let Some((idx, coords)) = hits.first() else {
                continue 'outer;
            };
            let cell = &s.complex().facets()[*idx];
            let g = Simplex::new(
                cell.vertices()
                    .iter()
                    .zip(coords)
                    .filter(|(_, c)| c.is_positive())
                    .map(|(u, _)| *u)
                    .collect(),
            );
            let Some((part_color, _)) = parts.iter().find(|(_, cells)| {
                cells
                    .iter()
                    .any(|i| g.is_face_of(&s.complex().facets()[*i]))
            }) else {
                continue 'outer;
            };
            let target = if v.color == *part_color {
                let Some(u) = s.complex().colored_vertex(&g, *part_color) else {
                    continue 'outer;
                };
                let Some(w) = anchors[part_color].get(&u) else {
                    continue 'outer;
                };
                *w
            } else {
                let Ok(y) = f.evaluate(x) else {
                    continue 'outer;
                };
                let Ok(p) = project_point(f.codomain(), &y, *part_color) else {
                    continue 'outer;
                };
                match p
                    .support()
                    .vertices()
                    .iter()
                    .copied()
                    .find(|w| f.codomain().color_of(*w) == Some(v.color))
                {
                    Some(w) => w,
                    None => continue 'outer,
                }
            };
            assignment.insert(v.id, target);
        }
        if let Some(approx) = attempt(f, &t, k, assignment) {
            return Ok(approx);
        }
    }
    Err(ApproxError::DepthExhausted {
        max_depth: options.max_depth,
    })
}

/// Checks an approximation against its map: the approximation must be a
/// color-preserving simplicial map on a subdivision of the map's input,
/// and on every face its image simplex must lie inside the carrier of the
/// map's image of that face.
pub fn verify_chromatic_approximation(
    f: &PAMap,
    approx: &ChromaticApproximation,
) -> Result<bool, ApproxError> {
    if approx.subdivision.base().id() != f.domain().base().id() {
        return Ok(false);
    }
    if !approx.realization.is_color_preserving() {
        return Ok(false);
    }
    let probe = Probe::new(f, &approx.subdivision)?;
    for face in approx.subdivision.complex().all_faces() {
        let Some(pieces) = probe.piece_supports(&approx.subdivision, &face) else {
            return Ok(false);
        };
        let image: BTreeSet<VertexId> = face
            .vertices()
            .iter()
            .map(|v| approx.assignment[v])
            .collect();
        let image = Simplex::new(image.into_iter().collect());
        if !pieces.iter().any(|u| image.is_face_of(u)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromap::PAMap;
    use crate::complex::{vertex, Complex};
    use crate::subdivision::iterate_chromatic;

    fn edge() -> Complex {
        Complex::build(
            vec![vertex(0, 0, ""), vertex(1, 1, "")],
            vec![vec![VertexId(0), VertexId(1)]],
        )
        .unwrap()
    }

    fn triangle() -> Complex {
        Complex::build(
            vec![vertex(0, 0, ""), vertex(1, 1, ""), vertex(2, 2, "")],
            vec![vec![VertexId(0), VertexId(1), VertexId(2)]],
        )
        .unwrap()
    }

    fn collapse(s: &Subdivision) -> BTreeMap<VertexId, VertexId> {
        s.complex()
            .vertices()
            .map(|v| {
                (
                    v.id,
                    s.base()
                        .colored_vertex(s.vertex_carrier(v.id), v.color)
                        .unwrap(),
                )
            })
            .collect()
    }

    fn identity_map(c: &Complex) -> PAMap {
        let s = Subdivision::identity(c);
        let assignment: BTreeMap<VertexId, VertexId> =
            c.vertices().map(|v| (v.id, v.id)).collect();
        PAMap::realize_simplicial(s, c, &assignment).unwrap()
    }

    #[test]
    fn identity_on_triangle_is_covered_at_depth_zero() {
        let t = triangle();
        let f = identity_map(&t);
        let s = Subdivision::identity(&t);
        let cover = star_cover(&f, &s).unwrap();
        assert_eq!(cover.len(), 1);
        // Every vertex of the cell covers it: the identity image of the
        // open cell has full support.
        assert_eq!(cover[0].len(), 3);
    }

    #[test]
    fn approximation_of_identity_on_triangle_is_identity_at_depth_zero() {
        let t = triangle();
        let f = identity_map(&t);
        let approx = chromatic_approximation(&f, &ApproxOptions::default()).unwrap();
        assert_eq!(approx.depth, 0);
        for v in t.vertices() {
            assert_eq!(approx.assignment[&v.id], v.id);
        }
        assert!(verify_chromatic_approximation(&f, &approx).unwrap());
    }

    #[test]
    fn approximation_recovers_collapse_on_edge() {
        let e = edge();
        let s = iterate_chromatic(&e, 2);
        let mu = collapse(&s);
        let f = PAMap::realize_simplicial(s, &e, &mu).unwrap();
        let approx = chromatic_approximation(&f, &ApproxOptions::default()).unwrap();
        assert_eq!(approx.depth, 2);
        assert_eq!(approx.assignment, mu);
        assert!(verify_chromatic_approximation(&f, &approx).unwrap());
    }

    #[test]
    fn approximation_recovers_collapse_on_triangle() {
        let t = triangle();
        let s = iterate_chromatic(&t, 1);
        let mu = collapse(&s);
        let f = PAMap::realize_simplicial(s, &t, &mu).unwrap();
        let approx = chromatic_approximation(&f, &ApproxOptions::default()).unwrap();
        assert_eq!(approx.depth, 1);
        assert_eq!(approx.assignment, mu);
    }

    #[test]
    fn min_depth_is_honored() {
        let e = edge();
        let s = iterate_chromatic(&e, 1);
        let mu = collapse(&s);
        let f = PAMap::realize_simplicial(s, &e, &mu).unwrap();
        let approx = chromatic_approximation(
            &f,
            &ApproxOptions {
                min_depth: 3,
                max_depth: 4,
            },
        )
        .unwrap();
        assert_eq!(approx.depth, 3);
    }

    #[test]
    fn verification_rejects_tampering() {
        // Output is a path with two color-0 vertices, so a color-preserving
        // tamper can point at the wrong one.
        let e = edge();
        let path = Complex::build(
            vec![vertex(0, 0, ""), vertex(1, 1, ""), vertex(2, 0, "")],
            vec![
                vec![VertexId(0), VertexId(1)],
                vec![VertexId(1), VertexId(2)],
            ],
        )
        .unwrap();
        let s = iterate_chromatic(&e, 1);
        let mut walk: Vec<(VertexId, Rational)> = s
            .complex()
            .vertices()
            .map(|v| (v.id, s.vertex_point(v.id).weight(VertexId(1))))
            .collect();
        walk.sort_by(|a, b| a.1.cmp(&b.1));
        // 0, 1/3, 2/3, 1 walk onto w0, w1, w2, w1.
        let targets = [VertexId(0), VertexId(1), VertexId(2), VertexId(1)];
        let mu: BTreeMap<VertexId, VertexId> = walk
            .iter()
            .zip(targets)
            .map(|((v, _), t)| (*v, t))
            .collect();
        let f = PAMap::realize_simplicial(s, &path, &mu).unwrap();
        let approx = chromatic_approximation(&f, &ApproxOptions::default()).unwrap();
        assert_eq!(approx.assignment, mu);
        let at_two_thirds = walk[2].0;
        let mut tampered_assignment = approx.assignment.clone();
        tampered_assignment.insert(at_two_thirds, VertexId(0));
        let realization =
            PAMap::realize_simplicial(approx.subdivision.clone(), &path, &tampered_assignment)
                .unwrap();
        let tampered = ChromaticApproximation {
            depth: approx.depth,
            subdivision: approx.subdivision.clone(),
            assignment: tampered_assignment,
            realization,
        };
        assert!(!verify_chromatic_approximation(&f, &tampered).unwrap());
    }

    #[test]
    fn color_reversal_has_no_approximation() {
        let e = edge();
        let s = Subdivision::identity(&e);
        let swap = BTreeMap::from([(VertexId(0), VertexId(1)), (VertexId(1), VertexId(0))]);
        let f = PAMap::realize_simplicial(s, &e, &swap).unwrap();
        assert!(matches!(
            chromatic_approximation(
                &f,
                &ApproxOptions {
                    min_depth: 0,
                    max_depth: 2
                }
            ),
            Err(ApproxError::DepthExhausted { max_depth: 2 })
        ));
    }

    #[test]
    fn dimension_three_is_unsupported() {
        let tetra = Complex::build(
            vec![
                vertex(0, 0, ""),
                vertex(1, 1, ""),
                vertex(2, 2, ""),
                vertex(3, 3, ""),
            ],
            vec![vec![VertexId(0), VertexId(1), VertexId(2), VertexId(3)]],
        )
        .unwrap();
        let f = identity_map(&tetra);
        assert!(matches!(
            chromatic_approximation(&f, &ApproxOptions::default()),
            Err(ApproxError::DimensionUnsupported(3))
        ));
    }

    #[test]
    fn cover_escalates_to_the_map_depth_on_edges() {
        let e = edge();
        let s = iterate_chromatic(&e, 2);
        let mu = collapse(&s);
        let f = PAMap::realize_simplicial(s, &e, &mu).unwrap();
        let cover = star_covered_subdivide(&f, &ApproxOptions::default()).unwrap();
        assert_eq!(cover.depth, 2);
        assert!(cover.fully_covered());
        // At depth 1 the middle cell's interior meets collapse boundaries
        // with disjoint supports, so nothing covers it.
        let s1 = iterate_chromatic(&e, 1);
        let cover1 = star_cover(&f, &s1).unwrap();
        assert!(cover1.iter().any(|a| a.is_empty()));
    }
}
