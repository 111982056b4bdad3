//! Decision tasks over colored complexes and maps that solve them.
//!
//! A task pairs an input and an output complex with a carrier map: for
//! every input face, the subcomplex of allowed outputs, stored
//! extensionally as generator lists. Tasks can be checked for
//! monotonicity (always), rigidity and strictness (on demand), induced
//! from a continuous map, and attacked by a backtracking search for
//! color-preserving simplicial decision maps on iterated chromatic
//! subdivisions of the input. An exhausted search at a given depth is a
//! refutation for that depth: no decision map of that depth exists, in
//! any vertex order.

use crate::chromap::{MapError, PAMap};
use crate::complex::{Color, Complex, ComplexError, Simplex, VertexId};
use crate::subdivision::{Subdivision, SubdivisionError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum TaskError {
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
    #[error("map error: {0}")]
    Map(#[from] MapError),
    #[error("subdivision error: {0}")]
    Subdivision(#[from] SubdivisionError),
    #[error("carrier map lacks an entry for input face {0}")]
    MissingFace(String),
    #[error("carrier map mentions {0}, which is not an input face")]
    UnknownFace(String),
    #[error("carrier generator {0} is not a simplex of the output complex")]
    GeneratorNotASimplex(String),
    #[error("carrier of {small} is not contained in the carrier of {large}")]
    MonotonicityViolation { small: String, large: String },
    #[error("the map's complexes do not match the task")]
    ComplexMismatch,
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// Keeps only the inclusion-maximal simplices, deduplicated.
fn maximalize(mut gens: Vec<Simplex>) -> Vec<Simplex> {
    gens.sort();
    gens.dedup();
    let kept: Vec<Simplex> = gens
        .iter()
        .filter(|g| !gens.iter().any(|h| *g != h && g.is_face_of(h)))
        .cloned()
        .collect();
    kept
}

/// A task: input and output complexes plus, for every input face, the
/// maximal output simplices allowed for that face.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    input: Complex,
    output: Complex,
    delta: BTreeMap<Simplex, Vec<Simplex>>,
}

impl Task {
    /// Validates entries: one per input face, generators must be output
    /// simplices, and carriers must grow with the face.
    pub fn new(
        input: Complex,
        output: Complex,
        entries: BTreeMap<Simplex, Vec<Simplex>>,
    ) -> Result<Task, TaskError> {
        if !input.is_pure() || !output.is_pure() || input.dimension() != output.dimension() {
            return Err(TaskError::BadParameters(
                "input and output must be pure complexes of the same dimension".into(),
            ));
        }
        let faces: BTreeSet<Simplex> = input.all_faces().into_iter().collect();
        for key in entries.keys() {
            if !faces.contains(key) {
                return Err(TaskError::UnknownFace(key.to_string()));
            }
        }
        let mut delta = BTreeMap::new();
        for face in &faces {
            let gens = entries
                .get(face)
                .ok_or_else(|| TaskError::MissingFace(face.to_string()))?;
            for g in gens {
                if !output.contains_simplex(g) {
                    return Err(TaskError::GeneratorNotASimplex(g.to_string()));
                }
            }
            delta.insert(face.clone(), maximalize(gens.clone()));
        }
        let task = Task {
            input,
            output,
            delta,
        };
        for small in &faces {
            for large in &faces {
                if small != large && small.is_face_of(large) {
                    for g in &task.delta[small] {
                        if !task.allows(large, g) {
                            return Err(TaskError::MonotonicityViolation {
                                small: small.to_string(),
                                large: large.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(task)
    }

    /// The task that allows every output everywhere.
    pub fn unconstrained(input: Complex, output: Complex) -> Task {
        let all: Vec<Simplex> = output.facets().to_vec();
        let delta = input
            .all_faces()
            .into_iter()
            .map(|f| (f, all.clone()))
            .collect();
        Task {
            input,
            output,
            delta,
        }
    }

    pub fn input(&self) -> &Complex {
        &self.input
    }

    pub fn output(&self) -> &Complex {
        &self.output
    }

    /// Maximal allowed output simplices for an input face.
    pub fn carrier(&self, face: &Simplex) -> Result<&[Simplex], TaskError> {
        self.delta
            .get(face)
            .map(|v| v.as_slice())
            .ok_or_else(|| TaskError::UnknownFace(face.to_string()))
    }

    /// Whether the output simplex is allowed for the input face.
    pub fn allows(&self, face: &Simplex, s: &Simplex) -> bool {
        self.delta
            .get(face)
            .is_some_and(|gens| gens.iter().any(|g| s.is_face_of(g)))
    }

    /// Every carrier is pure of the same dimension as its face.
    pub fn is_rigid(&self) -> bool {
        self.delta
            .iter()
            .all(|(face, gens)| gens.iter().all(|g| g.dim() == face.dim()))
    }

    /// Carriers of intersecting faces intersect in the carrier of the
    /// intersection.
    pub fn is_strict(&self) -> bool {
        let faces: Vec<&Simplex> = self.delta.keys().collect();
        let face_set = |gens: &[Simplex]| -> BTreeSet<Simplex> {
            gens.iter().flat_map(|g| g.faces()).collect()
        };
        for a in &faces {
            for b in &faces {
                let meet: Vec<VertexId> = a
                    .vertices()
                    .iter()
                    .filter(|v| b.contains(**v))
                    .copied()
                    .collect();
                if meet.is_empty() {
                    continue;
                }
                let meet = Simplex::new(meet);
                let lhs: BTreeSet<Simplex> = face_set(&self.delta[*a])
                    .intersection(&face_set(&self.delta[*b]))
                    .cloned()
                    .collect();
                if lhs != face_set(&self.delta[&meet]) {
                    return false;
                }
            }
        }
        true
    }

    /// Every generator uses only the colors of its input face.
    pub fn is_chromatic(&self) -> bool {
        self.delta.iter().all(|(face, gens)| {
            let allowed = self.input.simplex_colors(face);
            gens.iter()
                .all(|g| self.output.simplex_colors(g).is_subset(&allowed))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let delta: BTreeMap<String, Vec<Vec<u32>>> = self
            .delta
            .iter()
            .map(|(face, gens)| {
                let key = face
                    .vertices()
                    .iter()
                    .map(|v| v.0.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let gens = gens
                    .iter()
                    .map(|g| g.vertices().iter().map(|v| v.0).collect())
                    .collect();
                (key, gens)
            })
            .collect();
        serde_json::json!({
            "input": self.input.to_json(),
            "output": self.output.to_json(),
            "delta": delta,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Task, String> {
        let obj = value.as_object().ok_or("task must be an object")?;
        for k in obj.keys() {
            if !["input", "output", "delta"].contains(&k.as_str()) {
                return Err(format!("task has unknown field {k:?}"));
            }
        }
        let input = Complex::from_json(obj.get("input").ok_or("missing \"input\"")?)?;
        let output = Complex::from_json(obj.get("output").ok_or("missing \"output\"")?)?;
        let raw = obj
            .get("delta")
            .and_then(|d| d.as_object())
            .ok_or("missing \"delta\" object")?;
        let mut entries = BTreeMap::new();
        for (key, gens) in raw {
            let ids: Result<Vec<u32>, _> = key.split(',').map(str::parse).collect();
            let ids = ids.map_err(|_| format!("bad face key {key:?}"))?;
            let face = Simplex::new(ids.into_iter().map(VertexId).collect());
            let gens: Vec<Vec<u32>> = serde_json::from_value(gens.clone())
                .map_err(|e| format!("bad generators for {key}: {e}"))?;
            let gens = gens
                .into_iter()
                .map(|g| Simplex::new(g.into_iter().map(VertexId).collect()))
                .collect();
            entries.insert(face, gens);
        }
        Task::new(input, output, entries).map_err(|e| e.to_string())
    }
}

/// A task specified by a continuous map instead of a carrier map.
#[derive(Debug, Clone)]
pub struct ContinuousTask {
    pub input: Complex,
    pub output: Complex,
    pub map: PAMap,
}

impl ContinuousTask {
    pub fn new(input: Complex, output: Complex, map: PAMap) -> Result<ContinuousTask, TaskError> {
        if map.domain().base() != &input || map.codomain() != &output {
            return Err(TaskError::ComplexMismatch);
        }
        if !input.is_pure() || !output.is_pure() || input.dimension() != output.dimension() {
            return Err(TaskError::BadParameters(
                "input and output must be pure complexes of the same dimension".into(),
            ));
        }
        Ok(ContinuousTask { input, output, map })
    }
}

/// The task induced by a map: each input face allows exactly the carrier
/// of its image, generated by the image supports of the map cells lying
/// inside the face.
pub fn induced_task(f: &PAMap) -> Task {
    let input = f.domain().base().clone();
    let output = f.codomain().clone();
    let mut delta = BTreeMap::new();
    let domain_faces = f.domain().complex().all_faces();
    for face in input.all_faces() {
        let gens: Vec<Simplex> = domain_faces
            .iter()
            .filter(|g| f.domain().carrier_of_simplex(g).is_face_of(&face))
            .map(|g| f.face_image_support(g))
            .collect();
        delta.insert(face, maximalize(gens));
    }
    Task {
        input,
        output,
        delta,
    }
}

/// Whether the map's image of every input face stays inside the carrier
/// the task allows for that face.
pub fn cact_condition(task: &Task, f: &PAMap) -> Result<bool, TaskError> {
    if f.domain().base() != task.input() || f.codomain() != task.output() {
        return Err(TaskError::ComplexMismatch);
    }
    for g in f.domain().complex().all_faces() {
        let base = f.domain().carrier_of_simplex(&g);
        if !task.allows(&base, &f.face_image_support(&g)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A vertex-for-vertex decision rule on the depth-`depth` chromatic
/// subdivision of a task's input complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionMap {
    pub depth: u32,
    #[serde(with = "decision_entries")]
    pub map: BTreeMap<VertexId, VertexId>,
}

mod decision_entries {
    use super::VertexId;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<VertexId, VertexId>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let plain: BTreeMap<String, u32> =
            map.iter().map(|(k, v)| (k.0.to_string(), v.0)).collect();
        plain.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<VertexId, VertexId>, D::Error> {
        let plain = BTreeMap::<String, u32>::deserialize(de)?;
        plain
            .into_iter()
            .map(|(k, v)| {
                let k: u32 = k.parse().map_err(serde::de::Error::custom)?;
                Ok((VertexId(k), VertexId(v)))
            })
            .collect()
    }
}

/// Checks a decision rule against a task: it must be a color-preserving
/// simplicial map on the subdivision, and every subdivision face must
/// decide inside the carrier of its base face.
pub fn verify_solution(
    task: &Task,
    subdivision: &Subdivision,
    decision: &DecisionMap,
) -> Result<bool, TaskError> {
    if subdivision.base() != task.input() {
        return Err(TaskError::ComplexMismatch);
    }
    let realized =
        match PAMap::realize_simplicial(subdivision.clone(), task.output(), &decision.map) {
            Ok(m) => m,
            Err(MapError::NotSimplicial(_)) => return Ok(false),
            Err(e) => return Err(e.into()),
        };
    if !realized.is_color_preserving() {
        return Ok(false);
    }
    for face in subdivision.complex().all_faces() {
        let base = subdivision.carrier_of_simplex(&face);
        let image: BTreeSet<VertexId> = face.vertices().iter().map(|v| decision.map[v]).collect();
        let image = Simplex::new(image.into_iter().collect());
        if !task.allows(&base, &image) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Candidate ordering for the decision-map search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Smallest output vertex id first: the first solution found is the
    /// lexicographically least along the fixed vertex order.
    Lexicographic,
    /// Candidates shuffled per vertex by a seeded generator: explores the
    /// same space in a different order, e.g. to sample varied solutions.
    Seeded(u64),
}

/// Backtracking search for a decision rule on the given subdivision of
/// the task's input.
///
/// Vertices are ordered by walking cells outward from the first cell,
/// which keeps partial assignments connected so carrier pruning can cut
/// early. Returns the first solution found, or `None` after exhausting
/// the space: a refutation for this subdivision only, independent of
/// the ordering.
pub fn search_decision_map(
    task: &Task,
    s: &Subdivision,
    order: Order,
) -> Result<Option<DecisionMap>, TaskError> {
    if s.base() != task.input() {
        return Err(TaskError::ComplexMismatch);
    }
    let depth = match s.kind() {
        crate::subdivision::SubdivisionKind::IteratedChromatic { depth } => depth,
        _ => 0,
    };
    let complex = s.complex();
    let facets = complex.facets();

    let mut facets_of_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        for v in f.vertices() {
            facets_of_vertex.entry(*v).or_default().push(i);
        }
    }

    // Cell-connected vertex order: breadth-first over cells sharing a
    // vertex, starting from the first cell of each component.
    let mut vertex_order: Vec<VertexId> = Vec::new();
    let mut seen_vertices: BTreeSet<VertexId> = BTreeSet::new();
    let mut seen_facets: Vec<bool> = vec![false; facets.len()];
    for start in 0..facets.len() {
        if seen_facets[start] {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        seen_facets[start] = true;
        while let Some(i) = queue.pop_front() {
            for v in facets[i].vertices() {
                if seen_vertices.insert(*v) {
                    vertex_order.push(*v);
                }
                for j in &facets_of_vertex[v] {
                    if !seen_facets[*j] {
                        seen_facets[*j] = true;
                        queue.push_back(*j);
                    }
                }
            }
        }
    }

    let mut generators: Vec<&[Simplex]> = Vec::with_capacity(facets.len());
    for i in 0..facets.len() {
        generators.push(task.carrier(s.facet_carrier(i))?);
    }

    let mut by_color: BTreeMap<Color, Vec<VertexId>> = BTreeMap::new();
    for w in task.output().vertices() {
        by_color.entry(w.color).or_default().push(w.id);
    }
    let mut candidates: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut rng = match order {
        Order::Lexicographic => None,
        Order::Seeded(seed) => Some(rand_chacha::ChaCha8Rng::seed_from_u64(seed)),
    };
    for v in &vertex_order {
        let color = complex.color_of(*v).expect("vertex exists");
        let mut list = by_color.get(&color).cloned().unwrap_or_default();
        if let Some(rng) = rng.as_mut() {
            list.shuffle(rng);
        }
        candidates.insert(*v, list);
    }

    fn feasible(
        assigned: &BTreeMap<VertexId, VertexId>,
        v: VertexId,
        w: VertexId,
        facets: &[Simplex],
        facets_of_vertex: &BTreeMap<VertexId, Vec<usize>>,
        generators: &[&[Simplex]],
    ) -> bool {
        facets_of_vertex[&v].iter().all(|i| {
            let mut image: Vec<VertexId> = facets[*i]
                .vertices()
                .iter()
                .filter_map(|u| assigned.get(u).copied())
                .collect();
            image.push(w);
            image.sort();
            image.dedup();
            generators[*i]
                .iter()
                .any(|g| image.iter().all(|x| g.contains(*x)))
        })
    }

    fn backtrack(
        idx: usize,
        vertex_order: &[VertexId],
        assigned: &mut BTreeMap<VertexId, VertexId>,
        candidates: &BTreeMap<VertexId, Vec<VertexId>>,
        facets: &[Simplex],
        facets_of_vertex: &BTreeMap<VertexId, Vec<usize>>,
        generators: &[&[Simplex]],
    ) -> bool {
        let Some(v) = vertex_order.get(idx) else {
            return true;
        };
        for w in &candidates[v] {
            if feasible(assigned, *v, *w, facets, facets_of_vertex, generators) {
                assigned.insert(*v, *w);
                if backtrack(
                    idx + 1,
                    vertex_order,
                    assigned,
                    candidates,
                    facets,
                    facets_of_vertex,
                    generators,
                ) {
                    return true;
                }
                assigned.remove(v);
            }
        }
        false
    }

    let mut assigned = BTreeMap::new();
    let found = backtrack(
        0,
        &vertex_order,
        &mut assigned,
        &candidates,
        facets,
        &facets_of_vertex,
        &generators,
    );
    Ok(found.then_some(DecisionMap {
        depth,
        map: assigned,
    }))
}

/// The consensus variant in which up to `bound` processes may abstain:
/// inputs are bits, outputs are a common input bit or an abstention, with
/// at most `bound` abstentions overall.
pub fn generate_failsafe_consensus(n: u32, bound: u32) -> Result<Task, TaskError> {
    if n == 0 || bound > n {
        return Err(TaskError::BadParameters(format!(
            "need 1 or more processes and at most as many abstainers, got n={n}, bound={bound}"
        )));
    }
    let in_id = |p: u32, b: u32| VertexId(p * 2 + b);
    let mut in_vertices = Vec::new();
    for p in 0..n {
        for b in 0..2 {
            in_vertices.push(crate::complex::vertex(in_id(p, b).0, p, &b.to_string()));
        }
    }
    let in_facets: Vec<Vec<VertexId>> = (0..1u32 << n)
        .map(|mask| {
            (0..n)
                .map(|p| in_id(p, (mask >> p) & 1))
                .collect()
        })
        .collect();
    let input = Complex::build(in_vertices, in_facets)?;

    // Output value 2 encodes abstention.
    let out_id = |p: u32, d: u32| VertexId(p * 3 + d);
    let mut out_facets: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for value in 0..2u32 {
        for mask in 0..1u32 << n {
            if mask.count_ones() > bound {
                continue;
            }
            let facet: Vec<VertexId> = (0..n)
                .map(|p| {
                    if (mask >> p) & 1 == 1 {
                        out_id(p, 2)
                    } else {
                        out_id(p, value)
                    }
                })
                .collect();
            out_facets.insert(facet);
        }
    }
    let used: BTreeSet<VertexId> = out_facets.iter().flatten().copied().collect();
    let out_vertices = used
        .iter()
        .map(|id| {
            let (p, d) = (id.0 / 3, id.0 % 3);
            let payload = if d == 2 { "⊥".to_string() } else { d.to_string() };
            crate::complex::vertex(id.0, p, &payload)
        })
        .collect();
    let output = Complex::build(out_vertices, out_facets.into_iter().collect())?;

    let mut entries: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for face in input.all_faces() {
        let participants: Vec<(u32, u32)> = face
            .vertices()
            .iter()
            .map(|v| (v.0 / 2, v.0 % 2))
            .collect();
        let values: BTreeSet<u32> = participants.iter().map(|(_, b)| *b).collect();
        let m = participants.len() as u32;
        let mut gens: BTreeSet<Simplex> = BTreeSet::new();
        for value in &values {
            for mask in 0..1u32 << m {
                if mask.count_ones() > bound {
                    continue;
                }
                let gen: Vec<VertexId> = participants
                    .iter()
                    .enumerate()
                    .map(|(i, (p, _))| {
                        if (mask >> i) & 1 == 1 {
                            out_id(*p, 2)
                        } else {
                            out_id(*p, *value)
                        }
                    })
                    .collect();
                gens.insert(Simplex::new(gen));
            }
        }
        if m <= bound {
            gens.insert(Simplex::new(
                participants.iter().map(|(p, _)| out_id(*p, 2)).collect(),
            ));
        }
        entries.insert(face, gens.into_iter().collect());
    }
    Task::new(input, output, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::vertex;
    use crate::subdivision::{iterate_chromatic, Subdivision};

    fn search_at_depth(task: &Task, depth: u32, order: Order) -> Option<DecisionMap> {
        let s = iterate_chromatic(task.input(), depth);
        search_decision_map(task, &s, order).unwrap()
    }

    fn triangle() -> Complex {
        Complex::build(
            vec![vertex(0, 0, ""), vertex(1, 1, ""), vertex(2, 2, "")],
            vec![vec![VertexId(0), VertexId(1), VertexId(2)]],
        )
        .unwrap()
    }

    fn identity_map(c: &Complex) -> PAMap {
        let s = Subdivision::identity(c);
        let assignment: BTreeMap<VertexId, VertexId> =
            c.vertices().map(|v| (v.id, v.id)).collect();
        PAMap::realize_simplicial(s, c, &assignment).unwrap()
    }

    #[test]
    fn consensus_structure() {
        let task = generate_failsafe_consensus(2, 0).unwrap();
        assert_eq!(task.input().facets().len(), 4);
        assert_eq!(task.output().facets().len(), 2);
        assert!(task.is_rigid());
        assert!(task.is_chromatic());
        // The output complex is two disjoint edges.
        assert!(!task.output().is_graph_connected());
    }

    #[test]
    fn consensus_is_refuted_at_small_depths() {
        let task = generate_failsafe_consensus(2, 0).unwrap();
        for depth in 0..=2 {
            let found = search_at_depth(&task, depth, Order::Lexicographic);
            assert!(found.is_none(), "no decision rule should exist at depth {depth}");
        }
    }

    #[test]
    fn refutation_is_order_independent() {
        let task = generate_failsafe_consensus(2, 0).unwrap();
        for seed in [0u64, 1, 7] {
            let found = search_at_depth(&task, 1, Order::Seeded(seed));
            assert!(found.is_none());
        }
    }

    #[test]
    fn failsafe_output_shape_and_disconnected_links() {
        let task = generate_failsafe_consensus(3, 1).unwrap();
        assert_eq!(task.output().facets().len(), 8);
        let verdict = task.output().is_link_connected().unwrap();
        assert!(!verdict.connected);
        // First failing simplex: the abstention vertex of the first
        // process, whose link is two disjoint edges.
        assert_eq!(verdict.witness, Some(Simplex::singleton(VertexId(2))));
    }

    #[test]
    fn failsafe_consensus_has_solutions_once_abstentions_allowed() {
        // With one abstention allowed among two processes, a rule exists:
        // abstain on conflict.
        let task = generate_failsafe_consensus(2, 1).unwrap();
        let found =
            search_at_depth(&task, 1, Order::Lexicographic).expect("depth-1 rule should exist");
        assert_eq!(found.depth, 1);
        let s = iterate_chromatic(task.input(), 1);
        assert!(verify_solution(&task, &s, &found).unwrap());
    }

    #[test]
    fn unconstrained_search_yields_valid_solutions_for_any_seed() {
        let t = triangle();
        let task = Task::unconstrained(t.clone(), t.clone());
        for seed in [0u64, 3, 11] {
            let found = search_at_depth(&task, 1, Order::Seeded(seed))
                .expect("unconstrained search always succeeds");
            let s = iterate_chromatic(&t, 1);
            assert!(verify_solution(&task, &s, &found).unwrap());
            // A found rule realizes to a map whose own induced task it
            // also solves.
            let realized = PAMap::realize_simplicial(s.clone(), &t, &found.map).unwrap();
            let induced = induced_task(&realized);
            assert!(verify_solution(&induced, &s, &found).unwrap());
        }
    }

    #[test]
    fn induced_task_of_identity_is_rigid_and_strict() {
        let t = triangle();
        let f = identity_map(&t);
        let task = induced_task(&f);
        for face in t.all_faces() {
            assert_eq!(task.carrier(&face).unwrap(), &[face.clone()]);
        }
        assert!(task.is_rigid());
        assert!(task.is_strict());
        assert!(task.is_chromatic());
        assert!(cact_condition(&task, &f).unwrap());
    }

    #[test]
    fn carrier_condition_rejects_value_invention() {
        let task = generate_failsafe_consensus(2, 0).unwrap();
        // Decide 0 everywhere, even when only input 1 was seen.
        let all_zero: BTreeMap<VertexId, VertexId> = task
            .input()
            .vertices()
            .map(|v| (v.id, VertexId(v.color.0 * 3)))
            .collect();
        let s = Subdivision::identity(task.input());
        let f = PAMap::realize_simplicial(s, task.output(), &all_zero).unwrap();
        assert!(!cact_condition(&task, &f).unwrap());
        let decision = DecisionMap {
            depth: 0,
            map: all_zero,
        };
        let sub = Subdivision::identity(task.input());
        assert!(!verify_solution(&task, &sub, &decision).unwrap());
    }

    #[test]
    fn monotonicity_violations_are_rejected() {
        let t = triangle();
        let mut entries: BTreeMap<Simplex, Vec<Simplex>> = t
            .all_faces()
            .into_iter()
            .map(|f| (f.clone(), vec![f]))
            .collect();
        // Shrink the full face's carrier below a vertex's carrier.
        entries.insert(
            Simplex::new(vec![VertexId(0), VertexId(1), VertexId(2)]),
            vec![Simplex::new(vec![VertexId(1), VertexId(2)])],
        );
        assert!(matches!(
            Task::new(t.clone(), t, entries),
            Err(TaskError::MonotonicityViolation { .. })
        ));
    }

    #[test]
    fn task_json_round_trip() {
        let task = generate_failsafe_consensus(3, 1).unwrap();
        let json = task.to_json();
        let back = Task::from_json(&json).unwrap();
        assert_eq!(back, task);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn decision_map_json_round_trip() {
        let d = DecisionMap {
            depth: 2,
            map: BTreeMap::from([(VertexId(0), VertexId(3)), (VertexId(5), VertexId(1))]),
        };
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"depth":2,"map":{"0":3,"5":1}}"#);
        let back: DecisionMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
