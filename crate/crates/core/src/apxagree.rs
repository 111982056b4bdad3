//! Two-process 1/3-approximate agreement with a consensus preference.
//!
//! A piecewise affine map from the binary input square into the thirds
//! grid encodes a preference for exact agreement: most of each mixed
//! edge is flattened onto a constant-value output edge, with short
//! sloped transitions between plateaus. Its chromatic approximation at
//! a suitable depth is a wait-free decision rule whose executions agree
//! exactly on a guaranteed fraction of runs while always landing within
//! 1/3 of each other.

use crate::approx::{chromatic_approximation, ApproxError, ApproxOptions};
use crate::chromap::{MapError, PAMap};
use crate::complex::{vertex, Color, Complex, ComplexError, Simplex, VertexId};
use crate::geometry::{GeometryError, Point};
use crate::rational::{int, parse_rational, ratio, Rational};
use crate::subdivision::{Subdivision, SubdivisionError, SubdivisionKind};
use crate::task::{induced_task, verify_solution, DecisionMap, Task, TaskError};
use num::traits::Pow;
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ApxError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("approximation error: {0}")]
    Approx(#[from] ApproxError),
    #[error("map error: {0}")]
    Map(#[from] MapError),
    #[error("task error: {0}")]
    Task(#[from] TaskError),
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
    #[error("subdivision error: {0}")]
    Subdivision(#[from] SubdivisionError),
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("guarantee violated: {0}")]
    GuaranteeViolated(String),
}

/// Tuning knobs for the preference map.
///
/// `k` is the fraction of runs that must end in exact agreement;
/// `m1` is the total input mass flattened onto the two constant-value
/// plateaus, so each sloped piece has width `(1 - m1)/3`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceParams {
    k: Rational,
    m1: Rational,
}

impl PreferenceParams {
    pub fn new(k: Rational, m1: Rational) -> Result<PreferenceParams, ApxError> {
        if !(Rational::zero() < k && k < m1 && m1 < Rational::one()) {
            return Err(ApxError::BadParameters(format!(
                "need 0 < k < m1 < 1, got k = {k}, m1 = {m1}"
            )));
        }
        Ok(PreferenceParams { k, m1 })
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn m1(&self) -> &Rational {
        &self.m1
    }

    /// Width of each sloped piece: (1 - m1)/3.
    pub fn slope_width(&self) -> Rational {
        (Rational::one() - &self.m1) / int(3)
    }
}

/// The i-th thirds value 0, 1/3, 2/3, 1 as a payload string.
fn third_payload(i: u32) -> String {
    match i {
        0 => "0".to_string(),
        3 => "1".to_string(),
        i => format!("{i}/3"),
    }
}

/// Input square and output thirds-grid path.
///
/// Inputs: both processes hold a bit; every mixed or matching pair is a
/// top cell. Outputs: both processes hold a thirds value; pairs within
/// 1/3 of each other are top cells.
pub fn build_io() -> (Complex, Complex) {
    let input = Complex::build(
        vec![
            vertex(0, 0, "0"),
            vertex(1, 0, "1"),
            vertex(2, 1, "0"),
            vertex(3, 1, "1"),
        ],
        vec![
            vec![VertexId(0), VertexId(2)],
            vec![VertexId(1), VertexId(3)],
            vec![VertexId(0), VertexId(3)],
            vec![VertexId(1), VertexId(2)],
        ],
    )
    .expect("input square is well formed");

    let mut out_vertices = Vec::new();
    for i in 0..4u32 {
        out_vertices.push(vertex(i, 0, &third_payload(i)));
    }
    for j in 0..4u32 {
        out_vertices.push(vertex(4 + j, 1, &third_payload(j)));
    }
    let mut out_facets = Vec::new();
    for i in 0..4u32 {
        for j in 0..4u32 {
            if i.abs_diff(j) <= 1 {
                out_facets.push(vec![VertexId(i), VertexId(4 + j)]);
            }
        }
    }
    let output = Complex::build(out_vertices, out_facets).expect("output path is well formed");
    (input, output)
}

/// Output vertex id for (process color, thirds value index).
fn out_id(color: u32, value: u32) -> VertexId {
    VertexId(color * 4 + value)
}

/// The preference map itself.
///
/// Matching-input edges map affinely onto the matching constant-value
/// output edge. Each mixed edge is cut at four points and mapped as a
/// five-piece zigzag; walking from the process-one corner, the pieces
/// have widths slope, m1/2, slope, m1/2, slope, and the two wide
/// pieces land on the constant-value edges at 1/3 and 2/3 (mirrored on
/// the other mixed edge). Cut vertices alternate colors to match the
/// zigzag's turning vertices, so the domain is a chromatic subdivision
/// and the map is simplicial on it.
pub fn build_preference_map(params: &PreferenceParams) -> Result<PAMap, ApxError> {
    let (input, output) = build_io();
    let slope = params.slope_width();
    let m1 = params.m1.clone();
    // Process-one corner weights of the cut points, walking away from
    // that corner.
    let cuts: [Rational; 4] = [
        int(2) * &slope + &m1,
        int(2) * &slope + &m1 / int(2),
        &slope + &m1 / int(2),
        slope.clone(),
    ];

    let mut vertices = vec![
        vertex(0, 0, "0"),
        vertex(1, 0, "1"),
        vertex(2, 1, "0"),
        vertex(3, 1, "1"),
    ];
    let mut carrier: BTreeMap<VertexId, Simplex> = BTreeMap::new();
    let mut embedding: BTreeMap<VertexId, Point> = BTreeMap::new();
    let mut images: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (corner, image_value) in [(0u32, 0u32), (1, 3), (2, 0), (3, 3)] {
        carrier.insert(VertexId(corner), Simplex::singleton(VertexId(corner)));
        embedding.insert(VertexId(corner), Point::vertex(&input, VertexId(corner))?);
        images.insert(VertexId(corner), out_id(corner / 2, image_value));
    }

    // Zigzag turning vertices per mixed edge: color and output value of
    // each cut, walking from the process-one corner. The first mixed
    // edge rises 0 to 1, the second falls 1 to 0.
    let rising = [(1u32, 1u32), (0, 1), (1, 2), (0, 2)];
    let falling = [(1u32, 2u32), (0, 2), (1, 1), (0, 1)];
    let mut facets = vec![
        vec![VertexId(0), VertexId(2)],
        vec![VertexId(1), VertexId(3)],
    ];
    let mut next_id = 4u32;
    for (p1_corner, p2_corner, turns) in
        [(VertexId(0), VertexId(3), rising), (VertexId(1), VertexId(2), falling)]
    {
        let edge = Simplex::new(vec![p1_corner, p2_corner]);
        let mut chain = vec![p1_corner];
        for ((color, value), alpha) in turns.iter().zip(&cuts) {
            let id = VertexId(next_id);
            next_id += 1;
            vertices.push(vertex(id.0, *color, &format!("{alpha}")));
            carrier.insert(id, edge.clone());
            embedding.insert(
                id,
                Point::new(
                    &input,
                    BTreeMap::from([
                        (p1_corner, alpha.clone()),
                        (p2_corner, Rational::one() - alpha),
                    ]),
                )?,
            );
            images.insert(id, out_id(*color, *value));
            chain.push(id);
        }
        chain.push(p2_corner);
        for pair in chain.windows(2) {
            facets.push(vec![pair[0], pair[1]]);
        }
    }

    let complex = Complex::build(vertices, facets)?;
    let domain = Subdivision::from_parts(
        input,
        complex,
        carrier,
        embedding,
        SubdivisionKind::Generic,
    )?;
    Ok(PAMap::realize_simplicial(domain, &output, &images)?)
}

/// Fewest subdivision rounds making every cell smaller than
/// (m1 - k)/4.
pub fn required_rounds(params: &PreferenceParams) -> u32 {
    let bound = (&params.m1 - &params.k) / int(4);
    let mut r = 0u32;
    let mut mesh = Rational::one();
    let third = ratio(1, 3);
    while mesh >= bound {
        mesh *= &third;
        r += 1;
    }
    r
}

/// The carrier map for plain 1/3-approximate agreement over the same
/// complexes: any output pair within 1/3 whose values lie between the
/// participants' inputs; a solo process outputs its own input.
pub fn one_third_agreement_task() -> Task {
    let (input, output) = build_io();
    let mut entries: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for face in input.all_faces() {
        let bits: Vec<u32> = face
            .vertices()
            .iter()
            .map(|v| input.vertex(*v).unwrap().payload.parse::<u32>().unwrap())
            .collect();
        let (lo, hi) = (
            3 * bits.iter().min().unwrap(),
            3 * bits.iter().max().unwrap(),
        );
        let mut gens = Vec::new();
        if face.len() == 1 {
            let color = input.color_of(face.vertices()[0]).unwrap();
            gens.push(Simplex::singleton(out_id(color.0, lo)));
        } else {
            for facet in output.facets() {
                let values: Vec<u32> = facet.vertices().iter().map(|v| v.0 % 4).collect();
                if values.iter().all(|v| lo <= *v && *v <= hi) {
                    gens.push(facet.clone());
                }
            }
        }
        entries.insert(face, gens);
    }
    let task = Task::new(input, output, entries);
    task.expect("agreement carrier map is well formed")
}

/// Exact-agreement accounting for one decision rule.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDensity {
    pub base: Simplex,
    pub total: usize,
    pub exact: usize,
    /// Positions of agreeing cells along the edge, counted from the
    /// process-two corner.
    pub agreeing_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub rounds: u32,
    pub mesh: Rational,
    pub per_edge: Vec<EdgeDensity>,
    pub overall: Rational,
    pub within_one_third: bool,
    pub carried: bool,
}

impl DensityReport {
    pub fn to_json(&self) -> serde_json::Value {
        let per_edge: Vec<serde_json::Value> = self
            .per_edge
            .iter()
            .map(|e| {
                serde_json::json!({
                    "base": e.base.vertices().iter().map(|v| v.0).collect::<Vec<_>>(),
                    "total": e.total,
                    "exact": e.exact,
                    "agreeing_indices": e.agreeing_indices,
                })
            })
            .collect();
        serde_json::json!({
            "rounds": self.rounds,
            "mesh": format!("{}", self.mesh),
            "overall": format!("{}", self.overall),
            "within_one_third": self.within_one_third,
            "carried": self.carried,
            "per_edge": per_edge,
        })
    }
}

/// End-to-end solve: build the preference map, approximate it at the
/// required depth, and account for every cell of every input edge.
///
/// The returned report has been checked: the overall exact-agreement
/// fraction reaches `k`, each mixed edge reaches `m1` minus four cells,
/// all output pairs are within 1/3, and the rule solves the map's own
/// induced task. Any of those failing is an error, not a report entry.
pub fn solve(params: &PreferenceParams) -> Result<(DecisionMap, DensityReport), ApxError> {
    let f = build_preference_map(params)?;
    let rounds = required_rounds(params);
    let approx = chromatic_approximation(
        &f,
        &ApproxOptions {
            min_depth: rounds,
            max_depth: rounds + 4,
        },
    )?;
    let rule = DecisionMap {
        depth: approx.depth,
        map: approx.assignment.clone(),
    };
    let s = &approx.subdivision;
    let base = s.base().clone();
    let output = approx.realization.codomain().clone();
    let mesh = ratio(1, 3).pow(approx.depth as i32);

    let value_of = |w: VertexId| -> Rational {
        parse_rational(&output.vertex(w).unwrap().payload).unwrap()
    };

    let mut per_edge = Vec::new();
    let mut within = true;
    let mut exact_sum = 0usize;
    let mut total_sum = 0usize;
    for base_facet in base.facets() {
        // Order the edge's cells by the process-one corner weight of
        // their midpoints.
        let p1_corner = *base_facet
            .vertices()
            .iter()
            .find(|v| base.color_of(**v) == Some(Color(0)))
            .expect("edges are properly colored");
        let mut cells: Vec<(Rational, &Simplex)> = Vec::new();
        for (idx, cell) in s.complex().facets().iter().enumerate() {
            if s.facet_carrier(idx) != base_facet {
                continue;
            }
            let weight: Rational = cell
                .vertices()
                .iter()
                .map(|v| s.vertex_point(*v).weight(p1_corner))
                .sum();
            cells.push((weight, cell));
        }
        cells.sort_by(|a, b| a.0.cmp(&b.0));

        let mut agreeing = Vec::new();
        for (pos, (_, cell)) in cells.iter().enumerate() {
            let values: Vec<Rational> = cell
                .vertices()
                .iter()
                .map(|v| value_of(rule.map[v]))
                .collect();
            let spread = values.iter().max().unwrap() - values.iter().min().unwrap();
            if spread > ratio(1, 3) {
                within = false;
            }
            if spread.is_zero() {
                agreeing.push(pos);
            }
        }
        exact_sum += agreeing.len();
        total_sum += cells.len();
        per_edge.push(EdgeDensity {
            base: base_facet.clone(),
            total: cells.len(),
            exact: agreeing.len(),
            agreeing_indices: agreeing,
        });
    }

    let overall = ratio(exact_sum as i64, total_sum as i64);
    let induced = induced_task(&approx.realization);
    let carried = verify_solution(&induced, s, &rule)?;

    if !within {
        return Err(ApxError::GuaranteeViolated(
            "an output pair exceeds 1/3".into(),
        ));
    }
    if !carried {
        return Err(ApxError::GuaranteeViolated(
            "the rule leaves its own induced carrier".into(),
        ));
    }
    if overall < params.k {
        return Err(ApxError::GuaranteeViolated(format!(
            "overall agreement {overall} below the target {}",
            params.k
        )));
    }
    let cell_bound = &params.m1 - int(4) * &mesh;
    for edge in &per_edge {
        let mixed = base.simplex_colors(&edge.base).len() == 2
            && {
                let payloads: Vec<&str> = edge
                    .base
                    .vertices()
                    .iter()
                    .map(|v| base.vertex(*v).unwrap().payload.as_str())
                    .collect();
                payloads[0] != payloads[1]
            };
        if mixed && ratio(edge.exact as i64, edge.total as i64) < cell_bound {
            return Err(ApxError::GuaranteeViolated(format!(
                "edge {} agreement {}/{} below the per-edge bound",
                edge.base, edge.exact, edge.total
            )));
        }
    }

    Ok((
        rule,
        DensityReport {
            rounds: approx.depth,
            mesh,
            per_edge,
            overall,
            within_one_third: within,
            carried,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromap::{check_chromatic, Chromaticity, ChromaticityOptions};
    use crate::geometry::tv_distance;
    use crate::task::cact_condition;

    fn canonical() -> PreferenceParams {
        PreferenceParams::new(ratio(1, 2), ratio(3, 5)).unwrap()
    }

    #[test]
    fn io_shapes() {
        let (input, output) = build_io();
        assert_eq!(input.facets().len(), 4);
        assert_eq!(input.vertices().count(), 4);
        assert_eq!(output.facets().len(), 10);
        assert_eq!(output.vertices().count(), 8);
        assert!(input.is_pure() && output.is_pure());
        assert_eq!(input.dimension(), 1);
        assert_eq!(output.dimension(), 1);
    }

    #[test]
    fn parameter_validation() {
        assert!(PreferenceParams::new(ratio(1, 2), ratio(1, 2)).is_err());
        assert!(PreferenceParams::new(ratio(0, 1), ratio(1, 2)).is_err());
        assert!(PreferenceParams::new(ratio(1, 2), ratio(1, 1)).is_err());
        assert!(PreferenceParams::new(ratio(3, 5), ratio(1, 2)).is_err());
    }

    #[test]
    fn cut_positions_for_canonical_parameters() {
        let f = build_preference_map(&canonical()).unwrap();
        let s = f.domain();
        // Cut vertices on the first mixed edge, walking from the
        // process-one corner: ids 4..=7.
        let expected = [ratio(13, 15), ratio(17, 30), ratio(13, 30), ratio(2, 15)];
        for (i, alpha) in expected.iter().enumerate() {
            let p = s.vertex_point(VertexId(4 + i as u32));
            assert_eq!(&p.weight(VertexId(0)), alpha);
        }
        // The two wide pieces have exactly half of m1 each.
        let base = s.base();
        for (a, b) in [(4u32, 5u32), (6, 7)] {
            let d = tv_distance(
                base,
                s.vertex_point(VertexId(a)),
                s.vertex_point(VertexId(b)),
            )
            .unwrap();
            assert_eq!(d, ratio(3, 10));
        }
    }

    #[test]
    fn preference_map_is_chromatic() {
        let f = build_preference_map(&canonical()).unwrap();
        assert!(f.is_color_preserving());
        assert!(matches!(
            check_chromatic(&f, &ChromaticityOptions::default()),
            Chromaticity::Chromatic { .. }
        ));
    }

    #[test]
    fn induced_carriers_trace_the_zigzag() {
        let f = build_preference_map(&canonical()).unwrap();
        let task = induced_task(&f);
        let zigzag: Vec<Simplex> = [
            (0u32, 5u32),
            (1, 5),
            (1, 6),
            (2, 6),
            (2, 7),
        ]
        .iter()
        .map(|(a, b)| Simplex::new(vec![VertexId(*a), VertexId(*b)]))
        .collect();
        let mut got = task
            .carrier(&Simplex::new(vec![VertexId(0), VertexId(3)]))
            .unwrap()
            .to_vec();
        got.sort();
        let mut want = zigzag;
        want.sort();
        assert_eq!(got, want);
        // A matching-input edge maps onto its single output edge.
        assert_eq!(
            task.carrier(&Simplex::new(vec![VertexId(0), VertexId(2)]))
                .unwrap(),
            &[Simplex::new(vec![VertexId(0), VertexId(4)])]
        );
    }

    #[test]
    fn carrier_conditions_for_agreement_and_consensus() {
        let f = build_preference_map(&canonical()).unwrap();
        assert!(cact_condition(&one_third_agreement_task(), &f).unwrap());

        // Consensus over the same complexes: only the two constant
        // edges are allowed on mixed inputs.
        let (input, output) = build_io();
        let zero = Simplex::new(vec![out_id(0, 0), out_id(1, 0)]);
        let one = Simplex::new(vec![out_id(0, 3), out_id(1, 3)]);
        let mut entries: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
        for face in input.all_faces() {
            let gens = if face.len() == 1 {
                let v = face.vertices()[0];
                let bit: u32 = input.vertex(v).unwrap().payload.parse().unwrap();
                vec![Simplex::singleton(out_id(
                    input.color_of(v).unwrap().0,
                    bit * 3,
                ))]
            } else {
                let bits: std::collections::BTreeSet<&str> = face
                    .vertices()
                    .iter()
                    .map(|v| input.vertex(*v).unwrap().payload.as_str())
                    .collect();
                let mut g = Vec::new();
                if bits.contains("0") {
                    g.push(zero.clone());
                }
                if bits.contains("1") {
                    g.push(one.clone());
                }
                g
            };
            entries.insert(face, gens);
        }
        let consensus = Task::new(input, output, entries).unwrap();
        assert!(!cact_condition(&consensus, &f).unwrap());
    }

    #[test]
    fn round_bound() {
        assert_eq!(required_rounds(&canonical()), 4);
        assert_eq!(
            required_rounds(&PreferenceParams::new(ratio(1, 2), ratio(9, 10)).unwrap()),
            3
        );
        let mut last = 0;
        for i in 2..6 {
            let gap = ratio(1, 10i64.pow(i));
            let p = PreferenceParams::new(ratio(1, 2), ratio(1, 2) + gap).unwrap();
            let r = required_rounds(&p);
            assert!(r >= last, "rounds must grow as the gap shrinks");
            last = r;
        }
        assert!(last > required_rounds(&canonical()));
    }

    #[test]
    fn canonical_solve_meets_every_guarantee() {
        let (rule, report) = solve(&canonical()).unwrap();
        assert_eq!(report.rounds, 4);
        assert_eq!(report.mesh, ratio(1, 81));
        assert_eq!(rule.depth, 4);
        assert!(report.within_one_third);
        assert!(report.carried);
        assert!(report.overall >= ratio(43, 54));

        let base = build_io().0;
        for edge in &report.per_edge {
            assert_eq!(edge.total, 81);
            let payloads: std::collections::BTreeSet<&str> = edge
                .base
                .vertices()
                .iter()
                .map(|v| base.vertex(*v).unwrap().payload.as_str())
                .collect();
            if payloads.len() == 1 {
                assert_eq!(edge.exact, 81, "matching-input edges always agree");
            } else {
                assert!(edge.exact >= 48, "mixed edge {} has {}", edge.base, edge.exact);
                for want in (11..=34).chain(46..=69) {
                    assert!(
                        edge.agreeing_indices.contains(&want),
                        "cell {want} of {} must agree",
                        edge.base
                    );
                }
            }
        }
    }
}
