//! Round-based snapshot executions and their correspondence with
//! subdivision cells.
//!
//! One communication round is an ordered partition of the processes:
//! blocks write in sequence, and each process reads everything written
//! up to and including its own block. An r-round execution therefore
//! determines, per process, a nested chain of views, and exactly one
//! cell of the depth-r chromatic subdivision of the input cell. This
//! module enumerates schedules, realizes the execution-to-cell map
//! through a subdivision tower, and runs decision rules over all
//! executions to tabulate outcomes.
//!
//! Views are kept as plain value types (sets of colors per round); the
//! cell correspondence only ever needs the per-round view sets, so no
//! interning or shared state tree is required at this scale.

use crate::complex::{Color, Complex, ComplexError, Simplex, VertexId};
use crate::subdivision::{ChromaticTower, SubdivisionError};
use crate::task::DecisionMap;
use std::collections::{BTreeMap, BTreeSet};

/// Hard ceiling for outcome enumeration unless the caller overrides it.
pub const DEFAULT_EXECUTION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum IisError {
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
    #[error("subdivision error: {0}")]
    Subdivision(#[from] SubdivisionError),
    #[error("malformed execution: {0}")]
    MalformedExecution(String),
    #[error("decision rule has depth {rule}, execution has {execution} rounds")]
    DepthMismatch { rule: u32, execution: u32 },
    #[error("decision rule does not fit the subdivision: {0}")]
    DecisionMismatch(String),
    #[error("enumeration needs {needed} executions, over the cap of {cap}")]
    TooManyExecutions { needed: usize, cap: usize },
}

/// One round: the processes partitioned into blocks, ordered by when
/// they write. Every process in a block sees all earlier blocks and its
/// own.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RoundSchedule {
    blocks: Vec<BTreeSet<Color>>,
}

impl RoundSchedule {
    pub fn new(blocks: Vec<BTreeSet<Color>>) -> Result<RoundSchedule, IisError> {
        let mut seen = BTreeSet::new();
        for block in &blocks {
            if block.is_empty() {
                return Err(IisError::MalformedExecution("empty schedule block".into()));
            }
            for p in block {
                if !seen.insert(*p) {
                    return Err(IisError::MalformedExecution(format!(
                        "process {p} appears in two blocks"
                    )));
                }
            }
        }
        Ok(RoundSchedule { blocks })
    }

    pub fn blocks(&self) -> &[BTreeSet<Color>] {
        &self.blocks
    }

    pub fn participants(&self) -> BTreeSet<Color> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Everything `p` sees this round: the union of blocks up to and
    /// including the one containing `p`.
    pub fn view(&self, p: Color) -> Option<BTreeSet<Color>> {
        let mut seen = BTreeSet::new();
        for block in &self.blocks {
            seen.extend(block.iter().copied());
            if block.contains(&p) {
                return Some(seen);
            }
        }
        None
    }
}

/// All round schedules over a process set, in sorted order.
///
/// Built by inserting one process at a time into every position of
/// every smaller schedule: joining an existing block or forming a new
/// block at any point in the order.
pub fn enumerate_round_schedules(participants: &BTreeSet<Color>) -> Vec<RoundSchedule> {
    let mut schedules: Vec<Vec<BTreeSet<Color>>> = vec![vec![]];
    for p in participants {
        let mut extended = Vec::new();
        for schedule in &schedules {
            for i in 0..schedule.len() {
                let mut grown = schedule.clone();
                grown[i].insert(*p);
                extended.push(grown);
            }
            for i in 0..=schedule.len() {
                let mut grown = schedule.clone();
                grown.insert(i, BTreeSet::from([*p]));
                extended.push(grown);
            }
        }
        schedules = extended;
    }
    let mut out: Vec<RoundSchedule> = schedules
        .into_iter()
        .map(|blocks| RoundSchedule { blocks })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A complete multi-round execution from one input cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    input: Simplex,
    rounds: Vec<RoundSchedule>,
}

impl Execution {
    /// The input must be a top cell of the complex and every round must
    /// schedule exactly its processes.
    pub fn new(
        complex: &Complex,
        input: Simplex,
        rounds: Vec<RoundSchedule>,
    ) -> Result<Execution, IisError> {
        if !complex.facets().contains(&input) {
            return Err(IisError::MalformedExecution(format!(
                "{input} is not a top cell of the input complex"
            )));
        }
        let participants = complex.simplex_colors(&input);
        for (t, round) in rounds.iter().enumerate() {
            if round.participants() != participants {
                return Err(IisError::MalformedExecution(format!(
                    "round {t} does not schedule exactly the participants"
                )));
            }
        }
        Ok(Execution { input, rounds })
    }

    pub fn input(&self) -> &Simplex {
        &self.input
    }

    pub fn rounds(&self) -> &[RoundSchedule] {
        &self.rounds
    }

    /// View of `p` in round `t` (0-based): the processes whose round-t
    /// states p read.
    pub fn view(&self, p: Color, t: usize) -> Option<BTreeSet<Color>> {
        self.rounds.get(t).and_then(|r| r.view(p))
    }
}

/// The cell of the depth-r subdivision that the execution traces out.
///
/// Round by round, process `p`'s new vertex is the one colored `p`
/// whose carrier is spanned by the previous-round vertices of the
/// processes in `p`'s view.
pub fn execution_to_facet(
    tower: &mut ChromaticTower,
    e: &Execution,
) -> Result<Simplex, IisError> {
    let base = tower.base().clone();
    if !base.facets().contains(&e.input) {
        return Err(IisError::MalformedExecution(format!(
            "{} is not a top cell of the tower base",
            e.input
        )));
    }
    let r = e.rounds.len() as u32;
    tower.ensure_depth(r);
    let mut current: BTreeMap<Color, VertexId> = e
        .input
        .vertices()
        .iter()
        .map(|v| (base.color_of(*v).expect("facet vertex exists"), *v))
        .collect();
    for (t, round) in e.rounds.iter().enumerate() {
        let level = tower.level(t as u32 + 1);
        let mut next = BTreeMap::new();
        for p in current.keys() {
            let view = round.view(*p).expect("participants validated");
            let carrier = Simplex::new(view.iter().map(|q| current[q]).collect());
            let vertex = level.vertex_by_color_carrier(*p, &carrier).ok_or_else(|| {
                IisError::MalformedExecution(format!(
                    "no vertex of color {p} over carrier {carrier} in round {}",
                    t + 1
                ))
            })?;
            next.insert(*p, vertex);
        }
        current = next;
    }
    Ok(Simplex::new(current.into_values().collect()))
}

/// Runs a decision rule on one execution: per process, the payload of
/// the output vertex chosen at the execution's cell.
pub fn decide(
    tower: &mut ChromaticTower,
    e: &Execution,
    rule: &DecisionMap,
    output: &Complex,
) -> Result<BTreeMap<Color, String>, IisError> {
    let rounds = e.rounds.len() as u32;
    if rule.depth != rounds {
        return Err(IisError::DepthMismatch {
            rule: rule.depth,
            execution: rounds,
        });
    }
    let facet = execution_to_facet(tower, e)?;
    let complex = tower.composed(rounds).complex().clone();
    let mut outputs = BTreeMap::new();
    for v in facet.vertices() {
        let p = complex.color_of(*v).expect("cell vertex exists");
        let w = rule.map.get(v).ok_or_else(|| {
            IisError::DecisionMismatch(format!("no decision for vertex {}", v.0))
        })?;
        let out = output
            .vertex(*w)
            .ok_or_else(|| IisError::DecisionMismatch(format!("no output vertex {}", w.0)))?;
        if out.color != p {
            return Err(IisError::DecisionMismatch(format!(
                "vertex {} of color {p} decides a vertex of color {}",
                v.0, out.color
            )));
        }
        outputs.insert(p, out.payload.clone());
    }
    Ok(outputs)
}

/// One enumerated execution with its decided outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeRow {
    pub input: Simplex,
    pub rounds: Vec<RoundSchedule>,
    pub outputs: BTreeMap<Color, String>,
}

/// Per-input-cell aggregate counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSummary {
    pub input: Simplex,
    pub total: usize,
    pub exact_agreement: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeTable {
    pub rounds: u32,
    pub rows: Vec<OutcomeRow>,
    pub per_input: Vec<OutcomeSummary>,
}

impl OutcomeTable {
    pub fn to_json(&self) -> serde_json::Value {
        let schedule_json = |s: &RoundSchedule| -> serde_json::Value {
            serde_json::json!(s
                .blocks()
                .iter()
                .map(|b| b.iter().map(|c| c.0).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        };
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let outputs: BTreeMap<String, String> = row
                    .outputs
                    .iter()
                    .map(|(c, s)| (c.to_string(), s.clone()))
                    .collect();
                serde_json::json!({
                    "input": row.input.vertices().iter().map(|v| v.0).collect::<Vec<_>>(),
                    "rounds": row.rounds.iter().map(schedule_json).collect::<Vec<_>>(),
                    "outputs": outputs,
                })
            })
            .collect();
        let per_input: Vec<serde_json::Value> = self
            .per_input
            .iter()
            .map(|s| {
                serde_json::json!({
                    "input": s.input.vertices().iter().map(|v| v.0).collect::<Vec<_>>(),
                    "total": s.total,
                    "exact_agreement": s.exact_agreement,
                })
            })
            .collect();
        serde_json::json!({
            "rounds": self.rounds,
            "rows": rows,
            "per_input": per_input,
        })
    }
}

/// Runs a decision rule over every execution of every input cell.
///
/// The execution count is checked against `cap` up front and exceeding
/// it is an error, never a silent truncation.
pub fn enumerate_outcomes(
    input: &Complex,
    rounds: u32,
    rule: &DecisionMap,
    output: &Complex,
    cap: usize,
) -> Result<OutcomeTable, IisError> {
    let mut needed: usize = 0;
    let mut per_facet_schedules: Vec<(Simplex, Vec<RoundSchedule>)> = Vec::new();
    for facet in input.facets() {
        let schedules = enumerate_round_schedules(&input.simplex_colors(facet));
        let count = schedules.len().pow(rounds);
        needed = needed.saturating_add(count);
        per_facet_schedules.push((facet.clone(), schedules));
    }
    if needed > cap {
        return Err(IisError::TooManyExecutions { needed, cap });
    }

    let mut tower = ChromaticTower::new(input);
    tower.ensure_depth(rounds);
    let mut rows = Vec::with_capacity(needed);
    let mut per_input = Vec::new();
    for (facet, schedules) in &per_facet_schedules {
        let total = schedules.len().pow(rounds);
        let mut exact = 0;
        // Odometer over r-tuples of schedules, earliest round varying
        // slowest.
        let mut indices = vec![0usize; rounds as usize];
        loop {
            let chosen: Vec<RoundSchedule> =
                indices.iter().map(|i| schedules[*i].clone()).collect();
            let e = Execution::new(input, facet.clone(), chosen.clone())?;
            let outputs = decide(&mut tower, &e, rule, output)?;
            let values: BTreeSet<&String> = outputs.values().collect();
            if values.len() <= 1 {
                exact += 1;
            }
            rows.push(OutcomeRow {
                input: facet.clone(),
                rounds: chosen,
                outputs,
            });
            let mut pos = rounds as usize;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < schedules.len() {
                    break;
                }
                indices[pos] = 0;
            }
            if indices.iter().all(|i| *i == 0) {
                break;
            }
        }
        per_input.push(OutcomeSummary {
            input: facet.clone(),
            total,
            exact_agreement: exact,
        });
    }
    Ok(OutcomeTable {
        rounds,
        rows,
        per_input,
    })
}
