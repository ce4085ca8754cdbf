//! Graph Voronoi cells, the simultaneous-growth process that produces them,
//! and the two-species competition process.
//!
//! Cells use closed inequalities: a vertex equidistant from several sites
//! belongs to every one of those cells.

use std::collections::BTreeMap;
use std::hash::BuildHasherDefault;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet, FxHasher};

use crate::error::{Error, Result};
use crate::graphs::{GraphSpec, Vertex};
use crate::metric::{ball, BallTable, FxIndexMap, Limits};

pub type VertexSet = std::collections::HashSet<Vertex, BuildHasherDefault<FxHasher>>;

/// A finite set of distinct Voronoi sites.
#[derive(Clone, Debug)]
pub struct SiteSet {
    spec: GraphSpec,
    sites: Vec<Vertex>,
}

impl SiteSet {
    pub fn new(spec: GraphSpec, sites: Vec<Vertex>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Invalid("site set is empty".into()));
        }
        for (i, s) in sites.iter().enumerate() {
            spec.validate(s)?;
            if sites[..i].contains(s) {
                return Err(Error::Invalid(format!("site {s} listed twice")));
            }
        }
        Ok(SiteSet { spec, sites })
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn sites(&self) -> &[Vertex] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Distance to the nearest site and the indices of every site achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellEntry {
    pub dist: u32,
    pub nearest: Vec<usize>,
}

impl CellEntry {
    pub fn is_tie(&self) -> bool {
        self.nearest.len() > 1
    }
}

/// Voronoi assignment of every vertex of the window `B(origin, R)`.
#[derive(Clone, Debug)]
pub struct VoronoiAssignment {
    window: BallTable,
    site_count: usize,
    entries: Vec<CellEntry>,
}

impl VoronoiAssignment {
    pub fn window(&self) -> &BallTable {
        &self.window
    }

    pub fn radius(&self) -> u32 {
        self.window.radius()
    }

    pub fn spec(&self) -> &GraphSpec {
        self.window.spec()
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn get(&self, v: &Vertex) -> Option<&CellEntry> {
        self.window.index_of(v).map(|i| &self.entries[i])
    }

    /// `(vertex, distance from origin, entry)` in window BFS order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, u32, &CellEntry)> {
        self.window
            .iter()
            .zip(&self.entries)
            .map(|((v, d), e)| (v, d, e))
    }

    pub fn cell(&self, i: usize) -> impl Iterator<Item = &Vertex> {
        self.iter()
            .filter(move |(_, _, e)| e.nearest.contains(&i))
            .map(|(v, _, _)| v)
    }

    /// Ties count toward every cell they belong to.
    pub fn cell_size(&self, i: usize) -> usize {
        self.cell(i).count()
    }

    pub fn tie_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_tie()).count()
    }

    /// True when cell `i` reaches the rim of the window.
    pub fn touches_boundary(&self, i: usize) -> bool {
        let r = self.radius();
        self.iter()
            .any(|(_, d, e)| d == r && e.nearest.contains(&i))
    }
}

fn window_and_site_depths(
    sites: &SiteSet,
    radius: u32,
    limits: &Limits,
) -> Result<(BallTable, Vec<u32>)> {
    let spec = sites.spec();
    let window = ball(spec, &spec.origin(), radius, limits)?;
    let depths = sites
        .sites()
        .iter()
        .map(|s| {
            window.get(s).ok_or_else(|| {
                Error::Invalid(format!(
                    "site {s} lies outside the window B(origin, {radius})"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((window, depths))
}

/// Exact metric Voronoi cells on `B(origin, radius)`.
///
/// Distances come from one BFS per site of radius `radius + |site|`, which
/// reaches every window vertex, so the result uses true graph distances
/// rather than distances inside the window.
pub fn voronoi_cells(sites: &SiteSet, radius: u32, limits: &Limits) -> Result<VoronoiAssignment> {
    let spec = sites.spec();
    let (window, depths) = window_and_site_depths(sites, radius, limits)?;
    let tables = sites
        .sites()
        .par_iter()
        .zip(depths.par_iter())
        .map(|(s, &depth)| ball(spec, s, radius + depth, limits))
        .collect::<Result<Vec<_>>>()?;
    let entries = window
        .iter()
        .map(|(v, _)| {
            let ds: Vec<u32> = tables
                .iter()
                .map(|t| t.get(v).expect("site ball covers the window"))
                .collect();
            let dist = *ds.iter().min().unwrap();
            let nearest = (0..ds.len()).filter(|&i| ds[i] == dist).collect();
            CellEntry { dist, nearest }
        })
        .collect();
    Ok(VoronoiAssignment {
        window,
        site_count: sites.len(),
        entries,
    })
}

/// Simultaneous unit-speed growth from every site: at each step, every
/// unclaimed vertex adjacent to some cell joins all cells that reach it at
/// that step.
///
/// The process runs on `B(origin, radius + ρ)` where `ρ` is the largest
/// site depth; every geodesic from a window vertex to its nearest site stays
/// inside that region, so clipping there leaves the window unchanged.
pub fn growth_process(sites: &SiteSet, radius: u32, limits: &Limits) -> Result<VoronoiAssignment> {
    let spec = sites.spec();
    let (window, depths) = window_and_site_depths(sites, radius, limits)?;
    let rho = *depths.iter().max().unwrap();
    let region = ball(spec, &spec.origin(), radius + rho, limits)?;

    let mut claimed: FxHashMap<Vertex, CellEntry> = FxHashMap::default();
    let mut frontier: Vec<Vertex> = Vec::new();
    let mut window_left = window.len();
    for (i, s) in sites.sites().iter().enumerate() {
        claimed.insert(
            s.clone(),
            CellEntry {
                dist: 0,
                nearest: vec![i],
            },
        );
        frontier.push(s.clone());
        window_left -= 1;
    }
    let mut step = 0;
    while !frontier.is_empty() && window_left > 0 {
        step += 1;
        let mut reached: FxIndexMap<Vertex, Vec<usize>> = FxIndexMap::default();
        for f in &frontier {
            let cells = &claimed[f].nearest;
            spec.for_each_neighbor(f, |w| {
                if claimed.contains_key(&w) || !region.contains(&w) {
                    return;
                }
                let slot = reached.entry(w).or_default();
                for &c in cells {
                    if let Err(pos) = slot.binary_search(&c) {
                        slot.insert(pos, c);
                    }
                }
            });
        }
        frontier = Vec::with_capacity(reached.len());
        for (w, cells) in reached {
            if window.contains(&w) {
                window_left -= 1;
            }
            claimed.insert(
                w.clone(),
                CellEntry {
                    dist: step,
                    nearest: cells,
                },
            );
            frontier.push(w);
        }
    }
    let entries = window
        .iter()
        .map(|(v, _)| {
            claimed
                .get(v)
                .cloned()
                .expect("growth reaches every window vertex")
        })
        .collect();
    Ok(VoronoiAssignment {
        window,
        site_count: sites.len(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Difference {
    pub vertex: Vertex,
    pub metric: CellEntry,
    pub growth: CellEntry,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub identical: bool,
    /// First differing vertex in window BFS order.
    pub first_difference: Option<Difference>,
    pub metric: VoronoiAssignment,
    pub growth: VoronoiAssignment,
}

/// Computes both assignments independently and compares them vertexwise.
pub fn check_growth_equivalence(
    sites: &SiteSet,
    radius: u32,
    limits: &Limits,
) -> Result<EquivalenceReport> {
    let metric = voronoi_cells(sites, radius, limits)?;
    let growth = growth_process(sites, radius, limits)?;
    let first_difference = metric
        .iter()
        .zip(growth.entries.iter())
        .find(|((_, _, a), b)| a != b)
        .map(|((v, _, a), b)| Difference {
            vertex: v.clone(),
            metric: a.clone(),
            growth: b.clone(),
        });
    Ok(EquivalenceReport {
        identical: first_difference.is_none(),
        first_difference,
        metric,
        growth,
    })
}

/// Evidence label for a finite-window competition run. A window can never
/// prove a set infinite, so `BothEscaping` only means both sets reached the
/// window rim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompetitionStatus {
    Running,
    YTrapped,
    XTrapped,
    BothEscaping,
}

impl CompetitionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompetitionStatus::Running => "running",
            CompetitionStatus::YTrapped => "y_trapped",
            CompetitionStatus::XTrapped => "x_trapped",
            CompetitionStatus::BothEscaping => "both_escaping",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u32,
    pub x_size: usize,
    pub y_size: usize,
    pub x_added: usize,
    pub y_added: usize,
}

#[derive(Clone, Debug)]
pub struct CompetitionState {
    pub x: VertexSet,
    pub y: VertexSet,
    pub m: u32,
    pub step: u32,
    pub window_radius: u32,
    pub status: CompetitionStatus,
    pub x_touches_boundary: bool,
    pub y_touches_boundary: bool,
    pub history: Vec<StepRecord>,
}

/// Runs the two-species competition inside `B(origin, window_radius)`.
///
/// For `m >= 2`, X first grows by `m` neighbor rounds avoiding Y, then Y
/// grows by one round avoiding the updated X. For `m = 1` both grow at once
/// and a vertex reached by both joins both, which yields the two Voronoi
/// cells. The run stops at the first trap, when the window is exhausted, or
/// after `max_steps`.
pub fn competition_run(
    spec: &GraphSpec,
    x0: &Vertex,
    y0: &Vertex,
    m: u32,
    window_radius: u32,
    max_steps: u32,
    limits: &Limits,
) -> Result<CompetitionState> {
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    if x0 == y0 {
        return Err(Error::Invalid("x0 and y0 must differ".into()));
    }
    let window = ball(spec, &spec.origin(), window_radius, limits)?;
    for v in [x0, y0] {
        if !window.contains(v) {
            return Err(Error::Invalid(format!(
                "start vertex {v} lies outside the window B(origin, {window_radius})"
            )));
        }
    }
    let on_rim = |v: &Vertex| window.get(v) == Some(window_radius);
    let mut x: VertexSet = VertexSet::default();
    let mut y: VertexSet = VertexSet::default();
    x.insert(x0.clone());
    y.insert(y0.clone());
    let mut fx = vec![x0.clone()];
    let mut fy = vec![y0.clone()];
    let mut x_touch = on_rim(x0);
    let mut y_touch = on_rim(y0);
    let mut status = CompetitionStatus::Running;
    let mut history = Vec::new();
    let mut step = 0;

    // Unclaimed in-window neighbors of `from`, deduplicated, in discovery order.
    let grow = |from: &[Vertex], x: &VertexSet, y: &VertexSet| -> Vec<Vertex> {
        let mut seen = FxHashSet::default();
        let mut out = Vec::new();
        for f in from {
            spec.for_each_neighbor(f, |w| {
                if !x.contains(&w)
                    && !y.contains(&w)
                    && window.contains(&w)
                    && seen.insert(w.clone())
                {
                    out.push(w);
                }
            });
        }
        out
    };

    while step < max_steps {
        step += 1;
        let (x_added, y_added);
        if m == 1 {
            let nx = grow(&fx, &x, &y);
            let ny = grow(&fy, &x, &y);
            x_added = nx.len();
            y_added = ny.len();
            x.extend(nx.iter().cloned());
            y.extend(ny.iter().cloned());
            fx = nx;
            fy = ny;
        } else {
            let mut added = 0;
            for _ in 0..m {
                let next = grow(&fx, &x, &y);
                if next.is_empty() {
                    fx = next;
                    break;
                }
                added += next.len();
                x_touch |= next.iter().any(on_rim);
                x.extend(next.iter().cloned());
                fx = next;
            }
            x_added = added;
            let ny = grow(&fy, &x, &y);
            y_added = ny.len();
            y.extend(ny.iter().cloned());
            fy = ny;
        }
        // Only vertices added this step can be new rim vertices.
        x_touch |= fx.iter().any(on_rim);
        y_touch |= fy.iter().any(on_rim);
        history.push(StepRecord {
            step,
            x_size: x.len(),
            y_size: y.len(),
            x_added,
            y_added,
        });

        let x_stuck = x_added == 0 && !x_touch;
        let y_stuck = y_added == 0 && !y_touch;
        if y_stuck && !x_stuck {
            status = CompetitionStatus::YTrapped;
            break;
        }
        if x_stuck && !y_stuck {
            status = CompetitionStatus::XTrapped;
            break;
        }
        if x_stuck && y_stuck {
            break;
        }
        if fx.is_empty() && fy.is_empty() {
            break;
        }
    }
    if status == CompetitionStatus::Running && x_touch && y_touch {
        status = CompetitionStatus::BothEscaping;
    }
    Ok(CompetitionState {
        x,
        y,
        m,
        step,
        window_radius,
        status,
        x_touches_boundary: x_touch,
        y_touches_boundary: y_touch,
        history,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub cell: usize,
    pub cell_size: usize,
    /// Within-cell degree → number of interior vertices with that degree.
    pub histogram: BTreeMap<usize, usize>,
    /// Interior vertices with exactly one neighbor in the same cell.
    pub degree_one: Vec<Vertex>,
    /// Rim vertices, whose degree is not fully observable.
    pub boundary_excluded: usize,
}

/// Within-cell degree statistics for cell `i`, over interior window vertices.
pub fn cell_degree_profile(assign: &VoronoiAssignment, i: usize) -> DegreeProfile {
    let spec = assign.spec();
    let r = assign.radius();
    let mut histogram = BTreeMap::new();
    let mut degree_one = Vec::new();
    let mut boundary_excluded = 0;
    let mut cell_size = 0;
    for (v, d, e) in assign.iter() {
        if !e.nearest.contains(&i) {
            continue;
        }
        cell_size += 1;
        if d == r {
            boundary_excluded += 1;
            continue;
        }
        let mut deg = 0;
        spec.for_each_neighbor(v, |w| {
            if assign.get(&w).is_some_and(|we| we.nearest.contains(&i)) {
                deg += 1;
            }
        });
        *histogram.entry(deg).or_insert(0) += 1;
        if deg == 1 {
            degree_one.push(v.clone());
        }
    }
    degree_one.sort();
    DegreeProfile {
        cell: i,
        cell_size,
        histogram,
        degree_one,
        boundary_excluded,
    }
}
