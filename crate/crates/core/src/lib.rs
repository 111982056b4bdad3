//! Chromatic simplicial complexes and decision-task solvability.
//!
//! This crate models distributed decision tasks through the topology of
//! colored (process-indexed) simplicial complexes:
//!
//! * [`complex`]: abstract chromatic complexes, skeleta, stars, links, and a
//!   graded link-connectivity check.
//! * [`geometry`]: exact rational points of a geometric realization,
//!   carriers, stars, and the total-variation metric.
//! * [`subdivision`]: chromatic and barycentric subdivisions with exact
//!   rational embeddings, iteration, mesh, and restriction.
//! * [`chromap`]: piecewise-affine colored maps, chromatic projections, and a
//!   chromaticity checker.
//! * [`approx`]: star coverings and the chromatic approximation algorithm
//!   that turns a colored continuous map into a simplicial decision map.
//! * [`task`]: decision tasks as carrier maps, induced tasks of continuous
//!   maps, solution verification, and an exhaustive decision-map search.
//! * [`iis`]: an iterated immediate-snapshot round simulator tied to facets
//!   of the iterated chromatic subdivision.
//! * [`apxagree`]: a two-process approximate-agreement protocol family with
//!   consensus-preferent decision maps and density reports.
//!
//! All geometric computation is exact: coordinates are arbitrary-precision
//! rationals and no floating point is used anywhere.

pub mod apxagree;
pub mod approx;
pub mod chromap;
pub mod complex;
pub mod geometry;
pub mod iis;
pub mod rational;
pub mod subdivision;
pub mod task;
