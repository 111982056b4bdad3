//! Exact points of a geometric realization.
//!
//! A point of `|K|` is a finite map from vertex ids to strictly positive
//! rational weights summing to one, whose support spans a simplex of `K`.
//! Every operation is exact; there is no floating point in this crate.

use crate::complex::{Color, Complex, ComplexId, Simplex, VertexId};
use crate::rational::{abs_diff, one_half, parse_rational, Rational, WireRational};
use num::{One, Signed, Zero};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("weight references unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("weight of vertex {0} is not strictly positive")]
    WeightNotPositive(VertexId),
    #[error("weights sum to {0}, expected 1")]
    WeightsNotNormalized(String),
    #[error("support {0} does not span a simplex of the complex")]
    SupportNotASimplex(String),
    #[error("points belong to different ambient complexes")]
    MixedAmbients,
    #[error("supports {0} and {1} do not lie in a common cell")]
    NoCommonCell(String, String),
    #[error("empty point set")]
    EmptyPointSet,
}

/// A point of the realization of a fixed ambient complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    ambient: ComplexId,
    weights: BTreeMap<VertexId, Rational>,
}

impl Point {
    /// Validated constructor: weights strictly positive, summing to one,
    /// with support spanning a simplex of `ambient`.
    pub fn new(
        ambient: &Complex,
        weights: BTreeMap<VertexId, Rational>,
    ) -> Result<Point, GeometryError> {
        let mut total = Rational::zero();
        for (v, w) in &weights {
            if ambient.vertex(*v).is_none() {
                return Err(GeometryError::UnknownVertex(*v));
            }
            if !w.is_positive() {
                return Err(GeometryError::WeightNotPositive(*v));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(GeometryError::WeightsNotNormalized(
                crate::rational::format_rational(&total),
            ));
        }
        let support = Simplex::new(weights.keys().copied().collect());
        if !ambient.contains_simplex(&support) {
            return Err(GeometryError::SupportNotASimplex(support.to_string()));
        }
        Ok(Point {
            ambient: ambient.id(),
            weights,
        })
    }

    /// The vertex `v` as a point.
    pub fn vertex(ambient: &Complex, v: VertexId) -> Result<Point, GeometryError> {
        Point::new(ambient, BTreeMap::from([(v, Rational::one())]))
    }

    /// Uniform weights over the vertices of `s`.
    pub fn barycenter(ambient: &Complex, s: &Simplex) -> Result<Point, GeometryError> {
        let n = s.len() as i64;
        let w = crate::rational::ratio(1, n);
        Point::new(
            ambient,
            s.vertices().iter().map(|v| (*v, w.clone())).collect(),
        )
    }

    pub fn ambient(&self) -> ComplexId {
        self.ambient
    }

    pub fn weights(&self) -> &BTreeMap<VertexId, Rational> {
        &self.weights
    }

    /// Weight of `v`, zero when outside the support.
    pub fn weight(&self, v: VertexId) -> Rational {
        self.weights.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    /// The support as a simplex; this is the carrier of the point.
    pub fn support(&self) -> Simplex {
        Simplex::new(self.weights.keys().copied().collect())
    }

    /// True when the point is a vertex of the ambient complex.
    pub fn as_vertex(&self) -> Option<VertexId> {
        if self.weights.len() == 1 {
            self.weights.keys().next().copied()
        } else {
            None
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let support: BTreeMap<String, WireRational> = self
            .weights
            .iter()
            .map(|(v, w)| (v.0.to_string(), WireRational(w.clone())))
            .collect();
        serde_json::json!({ "support": support })
    }

    pub fn from_json(ambient: &Complex, value: &serde_json::Value) -> Result<Point, String> {
        let obj = value
            .as_object()
            .ok_or_else(|| "point must be an object".to_string())?;
        let support = obj
            .get("support")
            .and_then(|s| s.as_object())
            .ok_or_else(|| "point must have a \"support\" object".to_string())?;
        if obj.len() != 1 {
            return Err("point has unknown fields".to_string());
        }
        let mut weights = BTreeMap::new();
        for (k, v) in support {
            let id: u32 = k.parse().map_err(|_| format!("bad vertex id key {k:?}"))?;
            let s = v
                .as_str()
                .ok_or_else(|| format!("weight of vertex {k} must be a \"p/q\" string"))?;
            let w = parse_rational(s).map_err(|e| e.to_string())?;
            weights.insert(VertexId(id), w);
        }
        Point::new(ambient, weights).map_err(|e| e.to_string())
    }
}

fn check_ambient(ambient: &Complex, p: &Point) -> Result<(), GeometryError> {
    if p.ambient != ambient.id() {
        return Err(GeometryError::MixedAmbients);
    }
    Ok(())
}

/// Carrier of a point: the unique simplex containing it in its interior.
pub fn carrier_of_point(ambient: &Complex, p: &Point) -> Result<Simplex, GeometryError> {
    check_ambient(ambient, p)?;
    Ok(p.support())
}

/// Carrier of a point set: the subcomplex generated by the carriers.
pub fn carrier_of_set(ambient: &Complex, points: &[Point]) -> Result<Complex, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    for p in points {
        check_ambient(ambient, p)?;
    }
    let supports: BTreeSet<Simplex> = points.iter().map(|p| p.support()).collect();
    let maximal: Vec<Simplex> = supports
        .iter()
        .filter(|a| !supports.iter().any(|b| *a != b && a.is_face_of(b)))
        .cloned()
        .collect();
    ambient
        .subcomplex_from_facets(maximal)
        .map_err(|_| GeometryError::SupportNotASimplex("carrier set".into()))
}

/// Colors of the carrier: the extended coloring of the point.
pub fn extended_coloring(ambient: &Complex, p: &Point) -> Result<BTreeSet<Color>, GeometryError> {
    check_ambient(ambient, p)?;
    Ok(ambient.simplex_colors(&p.support()))
}

/// Membership in the open star of `w`: the carrier contains `w`.
pub fn in_open_star(ambient: &Complex, p: &Point, w: VertexId) -> Result<bool, GeometryError> {
    check_ambient(ambient, p)?;
    if ambient.vertex(w).is_none() {
        return Err(GeometryError::UnknownVertex(w));
    }
    Ok(p.weights.contains_key(&w))
}

/// Membership in the closed star of `w`: support plus `w` spans a simplex.
pub fn in_closed_star(ambient: &Complex, p: &Point, w: VertexId) -> Result<bool, GeometryError> {
    check_ambient(ambient, p)?;
    if ambient.vertex(w).is_none() {
        return Err(GeometryError::UnknownVertex(w));
    }
    let joined = p.support().union(&Simplex::singleton(w));
    Ok(ambient.contains_simplex(&joined))
}

/// Total-variation distance `(1/2) * sum_v |x_v - y_v|` between two points
/// of a common cell. On an edge this is the absolute parameter difference.
pub fn tv_distance(ambient: &Complex, x: &Point, y: &Point) -> Result<Rational, GeometryError> {
    check_ambient(ambient, x)?;
    check_ambient(ambient, y)?;
    let joint = x.support().union(&y.support());
    if !ambient.contains_simplex(&joint) {
        return Err(GeometryError::NoCommonCell(
            x.support().to_string(),
            y.support().to_string(),
        ));
    }
    let mut sum = Rational::zero();
    for v in joint.vertices() {
        sum += abs_diff(&x.weight(*v), &y.weight(*v));
    }
    Ok(one_half() * sum)
}

/// Affine combination of points of a common cell. Coefficients must be
/// nonnegative and sum to one; zero-weight vertices are dropped, so the
/// result is a valid point whenever the supports share a cell.
pub fn affine_combination(
    ambient: &Complex,
    terms: &[(Rational, Point)],
) -> Result<Point, GeometryError> {
    if terms.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    let mut weights: BTreeMap<VertexId, Rational> = BTreeMap::new();
    for (coeff, p) in terms {
        check_ambient(ambient, p)?;
        if coeff.is_negative() {
            return Err(GeometryError::WeightNotPositive(
                p.support().vertices()[0],
            ));
        }
        if coeff.is_zero() {
            continue;
        }
        for (v, w) in &p.weights {
            *weights.entry(*v).or_insert_with(Rational::zero) += coeff.clone() * w;
        }
    }
    weights.retain(|_, w| w.is_positive());
    Point::new(ambient, weights)
}

/// A reproducible interior point of `|s|` with bounded denominators.
/// Weights are positive with overwhelming margin: each raw weight is drawn
/// uniformly from `1..=denominator_bound` before normalization.
pub fn random_point_in_simplex<R: Rng>(
    ambient: &Complex,
    s: &Simplex,
    rng: &mut R,
    denominator_bound: u32,
) -> Point {
    let raws: Vec<i64> = s
        .vertices()
        .iter()
        .map(|_| rng.gen_range(1..=denominator_bound as i64))
        .collect();
    let total: i64 = raws.iter().sum();
    let weights = s
        .vertices()
        .iter()
        .zip(&raws)
        .map(|(v, r)| (*v, crate::rational::ratio(*r, total)))
        .collect();
    Point::new(ambient, weights).expect("random weights are positive and normalized")
}
