//! Sphere covers with separated centers.
//!
//! `∂B(origin, r)` is covered by balls of radius `radius_budget < r` whose
//! centers are pairwise at least `sep` apart and at least `sep` from the
//! origin. The survival number is at least `n` exactly when, for some
//! separation, infinitely many spheres need `n` such balls; everything here
//! produces finite-radius evidence for that quantity.
//!
//! Any center within `radius_budget` of a sphere vertex lies in
//! `B(origin, r + radius_budget) ⊆ B(origin, 2r − 1)`, so the candidate set
//! built by [`candidate_centers`] is complete and a `NoCover` answer from
//! [`min_cover`] is a certificate.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graphs::{GraphSpec, Vertex};
use crate::metric::{ball, distance, sphere, BallTable, Distance, FxIndexMap, Limits};

/// One sphere-cover question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    spec: GraphSpec,
    r: u32,
    sep: u32,
    radius_budget: u32,
    max_balls: Option<usize>,
}

impl CoverInstance {
    /// Sphere radius `r >= 1`, separation `sep`, balls of radius `r − 1`.
    ///
    /// `sep = d` means distances `>= d`; a strict `> d` requirement is
    /// `sep = d + 1`.
    pub fn new(spec: GraphSpec, r: u32, sep: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("sphere radius must be at least 1".into()));
        }
        Ok(CoverInstance {
            spec,
            r,
            sep,
            radius_budget: r - 1,
            max_balls: None,
        })
    }

    pub fn with_radius_budget(mut self, budget: u32) -> Result<Self> {
        if budget >= self.r {
            return Err(Error::Invalid(format!(
                "ball radius {budget} must be less than the sphere radius {}",
                self.r
            )));
        }
        self.radius_budget = budget;
        Ok(self)
    }

    pub fn with_max_balls(mut self, max_balls: usize) -> Self {
        self.max_balls = Some(max_balls);
        self
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn sep(&self) -> u32 {
        self.sep
    }

    pub fn radius_budget(&self) -> u32 {
        self.radius_budget
    }

    pub fn max_balls(&self) -> Option<usize> {
        self.max_balls
    }
}

/// Outcome of [`cover_check`]; anything but `Covered` carries a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverCheck {
    Covered,
    /// Smallest uncovered sphere vertex by canonical encoding.
    Uncovered(Vertex),
    TooManyBalls {
        count: usize,
        max: usize,
    },
    TooCloseToOrigin {
        center: Vertex,
        dist: u32,
    },
    TooClose {
        a: Vertex,
        b: Vertex,
        dist: u32,
    },
}

impl CoverCheck {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverCheck::Covered)
    }
}

/// Verifies coverage and both separation conditions for explicit centers.
pub fn cover_check(
    instance: &CoverInstance,
    centers: &[Vertex],
    limits: &Limits,
) -> Result<CoverCheck> {
    let spec = instance.spec();
    for (i, c) in centers.iter().enumerate() {
        spec.validate(c)?;
        if centers[..i].contains(c) {
            return Err(Error::Invalid(format!("center {c} listed twice")));
        }
    }
    if let Some(max) = instance.max_balls {
        if centers.len() > max {
            return Ok(CoverCheck::TooManyBalls {
                count: centers.len(),
                max,
            });
        }
    }
    if let Some(v) = separation_violation(spec, centers, instance.sep, limits)? {
        return Ok(v);
    }
    let tables = centers
        .par_iter()
        .map(|c| ball(spec, c, instance.radius_budget, limits))
        .collect::<Result<Vec<_>>>()?;
    let sphere = sphere(spec, &spec.origin(), instance.r, limits)?;
    Ok(sphere
        .into_iter()
        .find(|u| !tables.iter().any(|t| t.contains(u)))
        .map_or(CoverCheck::Covered, CoverCheck::Uncovered))
}

fn separation_violation(
    spec: &GraphSpec,
    centers: &[Vertex],
    sep: u32,
    limits: &Limits,
) -> Result<Option<CoverCheck>> {
    if sep == 0 {
        return Ok(None);
    }
    let origin = spec.origin();
    for c in centers {
        if let Distance::Exact(dist) = distance(spec, &origin, c, sep - 1, limits)? {
            return Ok(Some(CoverCheck::TooCloseToOrigin {
                center: c.clone(),
                dist,
            }));
        }
    }
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            if let Distance::Exact(dist) = distance(spec, a, b, sep - 1, limits)? {
                return Ok(Some(CoverCheck::TooClose {
                    a: a.clone(),
                    b: b.clone(),
                    dist,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub vertex: Vertex,
    pub origin_dist: u32,
    /// Bit `i` set iff `sphere[i]` is within the ball radius.
    pub coverage: Bits,
}

/// Every vertex that covers at least one sphere vertex, with its coverage.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub r: u32,
    pub radius_budget: u32,
    /// `∂B(origin, r)` sorted by canonical encoding.
    pub sphere: Vec<Vertex>,
    /// Sorted by canonical encoding.
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    /// Drops candidates whose coverage is contained in another's, keeping the
    /// smallest vertex among equal coverages. Only sound when separation
    /// imposes nothing beyond distinctness (`sep <= 1`): then any cover using
    /// a dropped candidate can swap in its dominator, or drop it if the
    /// dominator is already present.
    pub fn dominance_reduce(&mut self) -> usize {
        let before = self.candidates.len();
        let mut seen: FxHashSet<Bits> = FxHashSet::default();
        let mut unique: Vec<Candidate> = Vec::new();
        for c in std::mem::take(&mut self.candidates) {
            if seen.insert(c.coverage.clone()) {
                unique.push(c);
            }
        }
        // Larger sets first: a set can only be dominated by a larger one.
        let mut order: Vec<usize> = (0..unique.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(unique[i].coverage.count()));
        let mut kept: Vec<usize> = Vec::new();
        for &i in &order {
            let dominated = kept
                .iter()
                .any(|&k| unique[i].coverage.is_subset_of(&unique[k].coverage));
            if !dominated {
                kept.push(i);
            }
        }
        kept.sort_unstable();
        let mut slots: Vec<Option<Candidate>> = unique.into_iter().map(Some).collect();
        self.candidates = kept.into_iter().map(|i| slots[i].take().unwrap()).collect();
        before - self.candidates.len()
    }
}

/// The complete candidate list for covering `∂B(origin, r)` with balls of
/// radius `radius_budget`.
pub fn candidate_centers(
    spec: &GraphSpec,
    r: u32,
    radius_budget: u32,
    limits: &Limits,
) -> Result<CandidateSet> {
    if r == 0 || radius_budget >= r {
        return Err(Error::Invalid(format!(
            "need 0 <= radius_budget < r, got budget {radius_budget}, r {r}"
        )));
    }
    let origin_table = ball(spec, &spec.origin(), r + radius_budget, limits)?;
    let mut sphere: Vec<Vertex> = origin_table.layer(r).cloned().collect();
    sphere.sort();
    let balls = sphere
        .par_iter()
        .map(|u| ball(spec, u, radius_budget, limits))
        .collect::<Result<Vec<BallTable>>>()?;
    let n = sphere.len();
    let mut coverage: FxIndexMap<Vertex, Bits> = FxIndexMap::default();
    for (i, t) in balls.iter().enumerate() {
        for (c, _) in t.iter() {
            if let Some(bits) = coverage.get_mut(c) {
                bits.set(i);
            } else {
                let mut bits = Bits::new(n);
                bits.set(i);
                coverage.insert(c.clone(), bits);
            }
        }
    }
    let mut candidates: Vec<Candidate> = coverage
        .into_iter()
        .map(|(vertex, coverage)| Candidate {
            origin_dist: origin_table
                .get(&vertex)
                .expect("candidates lie within r + radius_budget of the origin"),
            vertex,
            coverage,
        })
        .collect();
    candidates.sort_by(|a, b| a.vertex.cmp(&b.vertex));
    Ok(CandidateSet {
        r,
        radius_budget,
        sphere,
        candidates,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverStatus {
    /// A minimum cover, centers sorted by canonical encoding.
    Cover(Vec<Vertex>),
    /// The candidate space was exhausted: no cover with at most `max_balls`.
    NoCover,
    /// The node budget ran out first. Never reported as `NoCover`.
    BudgetExceeded { best_known: Option<Vec<Vertex>> },
}

impl CoverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverStatus::Cover(_) => "cover",
            CoverStatus::NoCover => "no_cover",
            CoverStatus::BudgetExceeded { .. } => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub status: CoverStatus,
    pub min_size: Option<usize>,
    pub sphere_size: usize,
    /// Candidates entering the search, after separation filtering and any
    /// dominance reduction.
    pub candidate_count: usize,
    pub nodes_explored: u64,
    pub wall_ms: u128,
}

/// Exact minimum sphere cover by branch and bound.
pub fn min_cover(instance: &CoverInstance, limits: &Limits) -> Result<CoverResult> {
    let started = Instant::now();
    let spec = instance.spec();
    let mut cs = candidate_centers(spec, instance.r, instance.radius_budget, limits)?;
    cs.candidates.retain(|c| c.origin_dist >= instance.sep);
    if instance.sep <= 1 {
        cs.dominance_reduce();
    }
    let n = cs.sphere.len();
    let m = cs.candidates.len();

    let conflicts = if instance.sep >= 2 {
        let index: FxHashMap<&Vertex, usize> = cs
            .candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (&c.vertex, i))
            .collect();
        let rows = cs
            .candidates
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let near = ball(spec, &c.vertex, instance.sep - 1, limits)?;
                let mut row = Bits::new(m);
                for (v, _) in near.iter() {
                    if let Some(&j) = index.get(v) {
                        row.set(j);
                    }
                }
                row.set(i);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(rows)
    } else {
        None
    };

    let mut elem_cands = vec![Bits::new(m); n];
    for (j, c) in cs.candidates.iter().enumerate() {
        for e in c.coverage.ones() {
            elem_cands[e].set(j);
        }
    }

    let mut search = Search {
        cover: cs.candidates.iter().map(|c| &c.coverage).collect(),
        elem_cands,
        conflicts,
        n,
        m,
        best: None,
        best_size: instance
            .max_balls
            .map_or(usize::MAX, |k| k.saturating_add(1)),
        floor: 0,
        nodes: 0,
        max_nodes: limits.max_nodes,
        exceeded: false,
        done: false,
    };
    if let Some(g) = search.greedy() {
        if g.len() < search.best_size {
            search.best_size = g.len();
            search.best = Some(g);
        }
    }
    let covered = Bits::new(n);
    let allowed = Bits::full(m);
    search.floor = search.lower_bound(&covered, &allowed).unwrap_or(usize::MAX);
    if search.floor >= search.best_size {
        search.done = true;
    }
    if !search.done {
        search.dfs(&covered, &allowed, &mut Vec::new());
    }

    let to_vertices = |idx: &[usize]| {
        let mut v: Vec<Vertex> = idx
            .iter()
            .map(|&i| cs.candidates[i].vertex.clone())
            .collect();
        v.sort();
        v
    };
    let (status, min_size) = if search.exceeded {
        (
            CoverStatus::BudgetExceeded {
                best_known: search.best.as_deref().map(to_vertices),
            },
            None,
        )
    } else if let Some(b) = &search.best {
        (CoverStatus::Cover(to_vertices(b)), Some(b.len()))
    } else {
        (CoverStatus::NoCover, None)
    };
    Ok(CoverResult {
        status,
        min_size,
        sphere_size: n,
        candidate_count: m,
        nodes_explored: search.nodes,
        wall_ms: started.elapsed().as_millis(),
    })
}

struct Search<'a> {
    cover: Vec<&'a Bits>,
    elem_cands: Vec<Bits>,
    conflicts: Option<Vec<Bits>>,
    n: usize,
    m: usize,
    best: Option<Vec<usize>>,
    /// Solutions must be strictly smaller than this.
    best_size: usize,
    /// Root lower bound; reaching it ends the search.
    floor: usize,
    nodes: u64,
    max_nodes: u64,
    exceeded: bool,
    done: bool,
}

impl Search<'_> {
    fn allowed_after(&self, allowed: &Bits, c: usize) -> Bits {
        let mut a = allowed.clone();
        match &self.conflicts {
            Some(rows) => a.subtract(&rows[c]),
            None => a.clear(c),
        }
        a
    }

    fn greedy(&self) -> Option<Vec<usize>> {
        let mut covered = Bits::new(self.n);
        let mut allowed = Bits::full(self.m);
        let mut chosen = Vec::new();
        while covered.count() < self.n {
            let best = allowed
                .ones()
                .map(|c| (self.cover[c].and_not_count(&covered), c))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))?;
            if best.0 == 0 {
                return None;
            }
            covered.union_with(self.cover[best.1]);
            allowed = self.allowed_after(&allowed, best.1);
            chosen.push(best.1);
        }
        Some(chosen)
    }

    /// Packing bound: uncovered elements no two of which share an allowed
    /// candidate each need their own ball. `None` if some uncovered element
    /// has no allowed candidate at all.
    fn lower_bound(&self, covered: &Bits, allowed: &Bits) -> Option<usize> {
        self.branch_info(covered, allowed).map(|(lb, _)| lb)
    }

    /// Returns the packing bound and the uncovered element with the fewest
    /// allowed candidates.
    fn branch_info(&self, covered: &Bits, allowed: &Bits) -> Option<(usize, usize)> {
        let mut elems: Vec<(usize, usize)> = Vec::new();
        for e in 0..self.n {
            if covered.get(e) {
                continue;
            }
            let k = self.elem_cands[e].and_count(allowed);
            if k == 0 {
                return None;
            }
            elems.push((k, e));
        }
        elems.sort_unstable();
        let mut used = Bits::new(self.m);
        let mut packing = 0;
        for &(_, e) in &elems {
            let mut ce = self.elem_cands[e].clone();
            ce.intersect_with(allowed);
            if !ce.intersects(&used) {
                packing += 1;
                used.union_with(&ce);
            }
        }
        Some((packing, elems.first().map_or(usize::MAX, |&(_, e)| e)))
    }

    fn dfs(&mut self, covered: &Bits, allowed: &Bits, chosen: &mut Vec<usize>) {
        if self.done || self.exceeded {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exceeded = true;
            return;
        }
        if covered.count() == self.n {
            if chosen.len() < self.best_size {
                self.best_size = chosen.len();
                self.best = Some(chosen.clone());
                if self.best_size <= self.floor {
                    self.done = true;
                }
            }
            return;
        }
        let Some((lb, elem)) = self.branch_info(covered, allowed) else {
            return;
        };
        if chosen.len() + lb.max(1) >= self.best_size {
            return;
        }
        let mut options = self.elem_cands[elem].clone();
        options.intersect_with(allowed);
        let mut order: Vec<(usize, usize)> = options
            .ones()
            .map(|c| (self.cover[c].and_not_count(covered), c))
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut allowed_here = allowed.clone();
        for (_, c) in order {
            let mut next_cov = covered.clone();
            next_cov.union_with(self.cover[c]);
            let next_allowed = self.allowed_after(&allowed_here, c);
            chosen.push(c);
            self.dfs(&next_cov, &next_allowed, chosen);
            chosen.pop();
            if self.done || self.exceeded {
                return;
            }
            // Every cover containing `c` has been explored.
            allowed_here.clear(c);
            if chosen.len() + 1 >= self.best_size {
                return;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub r: u32,
    pub result: CoverResult,
}

/// Finite-radius evidence about the survival number. Never a proof: the
/// covering characterization quantifies over infinitely many radii.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    /// Smallest exact minimum cover size over the sampled radii.
    pub lower: Option<usize>,
    /// Largest exact minimum over the sampled radii, present only when every
    /// sampled radius admitted a cover.
    pub upper: Option<usize>,
}

impl Evidence {
    pub const LABEL: &'static str = "EVIDENCE";
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub sep: u32,
    pub rows: Vec<ProbeRow>,
    pub evidence: Evidence,
}

/// Exact minimum cover size `k(r)` for each sampled radius.
pub fn survival_probe(
    spec: &GraphSpec,
    sep: u32,
    radii: &[u32],
    limits: &Limits,
) -> Result<ProbeReport> {
    if radii.is_empty() {
        return Err(Error::Invalid("radius list is empty".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "radius list must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let inst = CoverInstance::new(spec.clone(), r, sep)?;
        rows.push(ProbeRow {
            r,
            result: min_cover(&inst, limits)?,
        });
    }
    let sizes: Vec<usize> = rows.iter().filter_map(|row| row.result.min_size).collect();
    let all_covered = rows
        .iter()
        .all(|row| matches!(row.result.status, CoverStatus::Cover(_)));
    let evidence = Evidence {
        lower: sizes.iter().min().copied(),
        upper: if all_covered {
            sizes.iter().max().copied()
        } else {
            None
        },
    };
    Ok(ProbeReport {
        sep,
        rows,
        evidence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntipodalPair {
    pub u: Vertex,
    pub v: Vertex,
    pub distance: u32,
}

/// Two vertices of `∂B(origin, r)` at distance exactly `2r`, or `None`
/// after exhausting the sphere.
pub fn antipodal_witness(
    spec: &GraphSpec,
    r: u32,
    limits: &Limits,
) -> Result<Option<AntipodalPair>> {
    if r == 0 {
        return Err(Error::Invalid("radius must be at least 1".into()));
    }
    let table = ball(spec, &spec.origin(), r, limits)?;
    let on_sphere = |v: &Vertex| table.get(v) == Some(r);
    let verify = |u: &Vertex, v: &Vertex| -> Result<bool> {
        Ok(on_sphere(u)
            && on_sphere(v)
            && distance(spec, u, v, 2 * r, limits)? == Distance::Exact(2 * r))
    };
    if let Some((u, v)) = spec.geodesic_line_hint(r) {
        if spec.validate(&u).is_ok() && spec.validate(&v).is_ok() && verify(&u, &v)? {
            return Ok(Some(AntipodalPair {
                u,
                v,
                distance: 2 * r,
            }));
        }
    }
    let mut sphere: Vec<Vertex> = table.layer(r).cloned().collect();
    sphere.sort();
    for u in &sphere {
        let near = ball(spec, u, 2 * r - 1, limits)?;
        if let Some(v) = sphere.iter().find(|v| !near.contains(v)) {
            debug_assert!(verify(u, v)?);
            return Ok(Some(AntipodalPair {
                u: u.clone(),
                v: v.clone(),
                distance: 2 * r,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpreadPool {
    /// The planar lamplighter uses geodesic configurations, everything else
    /// the full sphere.
    Auto,
    /// Every vertex of the sphere; `NotFound` is then exhaustive.
    Sphere,
    /// Planar lamplighter only: `(x_γ, u)` for monotone lattice geodesics γ
    /// from the origin to `u`, with every lamp on γ lit.
    GeodesicConfigurations,
}

#[derive(Clone, Debug)]
pub struct SpreadResult {
    pub witnesses: Option<Vec<Vertex>>,
    /// Exact pairwise distances of the witnesses, `(i, j, d)` with `i < j`.
    pub pairwise: Vec<(usize, usize, u32)>,
    pub pool: SpreadPool,
    pub pool_size: usize,
    /// True when a `None` answer rules out every `n`-subset of the sphere.
    pub exhaustive: bool,
}

/// `n` vertices of `∂B(origin, r)` with pairwise distances at least
/// `min_pair`, found by backtracking over a candidate pool.
pub fn spread_witness(
    spec: &GraphSpec,
    r: u32,
    n: usize,
    min_pair: u32,
    pool: SpreadPool,
    limits: &Limits,
) -> Result<SpreadResult> {
    if n < 2 {
        return Err(Error::Invalid("need at least two witnesses".into()));
    }
    if r == 0 {
        return Err(Error::Invalid("radius must be at least 1".into()));
    }
    let pool = match pool {
        SpreadPool::Auto if *spec == GraphSpec::LamplighterPlane => {
            SpreadPool::GeodesicConfigurations
        }
        SpreadPool::Auto => SpreadPool::Sphere,
        p => p,
    };
    let (candidates, exhaustive) = match pool {
        SpreadPool::Sphere => (sphere(spec, &spec.origin(), r, limits)?, true),
        SpreadPool::GeodesicConfigurations => {
            if *spec != GraphSpec::LamplighterPlane {
                return Err(Error::Invalid(
                    "geodesic configurations exist only for ll-z2".into(),
                ));
            }
            (geodesic_configurations(r), false)
        }
        SpreadPool::Auto => unreachable!(),
    };

    let origin = spec.origin();
    let mut on_sphere: Vec<Option<bool>> =
        vec![if exhaustive { Some(true) } else { None }; candidates.len()];
    let mut far: FxHashMap<(usize, usize), bool> = FxHashMap::default();
    let mut chosen: Vec<usize> = Vec::new();
    let mut nodes = 0u64;

    // Iterative backtracking over increasing pool indices.
    let mut next = 0usize;
    let found = loop {
        if chosen.len() == n {
            break true;
        }
        if next >= candidates.len() {
            match chosen.pop() {
                Some(last) => {
                    next = last + 1;
                    continue;
                }
                None => break false,
            }
        }
        nodes += 1;
        if nodes > limits.max_nodes {
            return Err(Error::Capacity {
                what: "spread search nodes",
                cap: limits.max_nodes,
            });
        }
        let i = next;
        next += 1;
        if on_sphere[i].is_none() {
            on_sphere[i] =
                Some(distance(spec, &origin, &candidates[i], r, limits)? == Distance::Exact(r));
        }
        if on_sphere[i] != Some(true) {
            continue;
        }
        let mut ok = true;
        for &j in &chosen {
            let key = (j.min(i), j.max(i));
            let is_far = match far.get(&key) {
                Some(&f) => f,
                None => {
                    let f = min_pair == 0
                        || matches!(
                            distance(spec, &candidates[j], &candidates[i], min_pair - 1, limits)?,
                            Distance::Beyond(_)
                        );
                    far.insert(key, f);
                    f
                }
            };
            if !is_far {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(i);
        }
    };

    let witnesses: Option<Vec<Vertex>> =
        found.then(|| chosen.iter().map(|&i| candidates[i].clone()).collect());
    let mut pairwise = Vec::new();
    if let Some(w) = &witnesses {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let d = distance(spec, &w[i], &w[j], 2 * r, limits)?
                    .exact()
                    .expect("sphere vertices are at most 2r apart");
                pairwise.push((i, j, d));
            }
        }
    }
    Ok(SpreadResult {
        witnesses,
        pairwise,
        pool,
        pool_size: candidates.len(),
        exhaustive,
    })
}

/// Planar lamplighter vertices `(x_γ, u)` for every monotone geodesic γ of
/// length `r` in Z², ordered by number of turns, then canonically.
pub fn geodesic_configurations(r: u32) -> Vec<Vertex> {
    let r = r as i32;
    let mut out: Vec<(u32, Vertex)> = Vec::new();
    let mut seen = FxHashSet::default();
    for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        for mask in 0u64..(1u64 << r) {
            let mut p = [0i32, 0];
            let mut lamps = vec![p];
            let mut turns = 0;
            for k in 0..r {
                let horizontal = mask >> k & 1 == 1;
                if k > 0 && horizontal != (mask >> (k - 1) & 1 == 1) {
                    turns += 1;
                }
                if horizontal {
                    p[0] += sx;
                } else {
                    p[1] += sy;
                }
                lamps.push(p);
            }
            lamps.sort();
            let v = Vertex::LampPlane { lamps, pos: p };
            if seen.insert(v.clone()) {
                out.push((turns, v));
            }
        }
    }
    out.sort();
    out.into_iter().map(|(_, v)| v).collect()
}

/// The eight LL(Z) centers for separation `d`, each `(position, lit lamps)`.
///
/// The last center lights `−3d−1, …, −4d` when `corrected`, and
/// `−3d−1, …, 4d` otherwise.
pub fn ll_z_eight_centers(d: u32, corrected: bool) -> Vec<Vertex> {
    let d = d as i32;
    let span = |a: i32, b: i32| -> Vec<i32> { (a.min(b)..=a.max(b)).collect() };
    let last = if corrected {
        span(-3 * d - 1, -4 * d)
    } else {
        span(-3 * d - 1, 4 * d)
    };
    let rows: [(i32, bool, Vec<i32>); 8] = [
        (1, false, span(1, d)),
        (1, false, span(-1, -d)),
        (1, true, span(d + 1, 2 * d)),
        (1, true, span(-d - 1, -2 * d)),
        (-1, false, span(2 * d + 1, 3 * d)),
        (-1, false, span(-2 * d - 1, -3 * d)),
        (-1, true, span(3 * d + 1, 4 * d)),
        (-1, true, last),
    ];
    rows.into_iter()
        .map(|(pos, zero_lit, mut lamps)| {
            if zero_lit {
                lamps.push(0);
            }
            lamps.sort_unstable();
            lamps.dedup();
            Vertex::LampLine { lamps, pos }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct EightCoverReport {
    pub d: u32,
    pub r: u32,
    pub centers: Vec<Vertex>,
    /// Exact `|c|` for each center.
    pub origin_distances: Vec<u32>,
    /// Smallest pairwise center distance, capped at `4d + 1`.
    pub min_pairwise: Distance,
    pub check: CoverCheck,
}

/// Checks the eight LL(Z) centers against `∂B(origin, r)` with balls of
/// radius `r − 1` and separation `d`.
pub fn ll_z_eight_cover(
    d: u32,
    r: u32,
    corrected: bool,
    limits: &Limits,
) -> Result<EightCoverReport> {
    if d == 0 {
        return Err(Error::Invalid("d must be at least 1".into()));
    }
    let spec = GraphSpec::LamplighterLine;
    let centers = ll_z_eight_centers(d, corrected);
    let origin = spec.origin();
    let origin_distances = centers
        .iter()
        .map(|c| {
            distance(&spec, &origin, c, 32 * d + 8, limits)?
                .exact()
                .ok_or_else(|| Error::Invalid(format!("center {c} is unexpectedly far")))
        })
        .collect::<Result<Vec<_>>>()?;
    let cap = 4 * d + 1;
    let mut min_pairwise = Distance::Beyond(cap);
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let dij = distance(&spec, &centers[i], &centers[j], cap, limits)?;
            if let Distance::Exact(x) = dij {
                if min_pairwise.exact().is_none_or(|m| x < m) {
                    min_pairwise = dij;
                }
            }
        }
    }
    let inst = CoverInstance::new(spec, r, d)?;
    let check = cover_check(&inst, &centers, limits)?;
    Ok(EightCoverReport {
        d,
        r,
        centers,
        origin_distances,
        min_pairwise,
        check,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SprawlMode {
    /// Every ordered pair of sphere vertices, including `x = y`.
    Exact,
    Sampled {
        pairs: u64,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SprawlEstimate {
    pub r: u32,
    pub mean: f64,
    /// Standard error of the mean; `None` in exact mode.
    pub std_error: Option<f64>,
    pub pairs: u64,
    pub sphere_size: usize,
}

/// Mean of `d(x, y) / r` over pairs of `∂B(origin, r)`.
pub fn sprawl_estimate(
    spec: &GraphSpec,
    r: u32,
    mode: SprawlMode,
    limits: &Limits,
) -> Result<SprawlEstimate> {
    if r == 0 {
        return Err(Error::Invalid("radius must be at least 1".into()));
    }
    match mode {
        SprawlMode::Exact => {
            // |x⁻¹y| <= 2r, so one table of B(origin, 2r) answers every pair.
            let table = ball(spec, &spec.origin(), 2 * r, limits)?;
            let sphere: Vec<&Vertex> = table.layer(r).collect();
            let total: u64 = sphere
                .par_iter()
                .map(|x| {
                    sphere
                        .iter()
                        .map(|y| {
                            let rel = spec.relative(x, y).expect("same family");
                            table.get(&rel).expect("within 2r") as u64
                        })
                        .sum::<u64>()
                })
                .sum();
            let s = sphere.len() as u64;
            Ok(SprawlEstimate {
                r,
                mean: total as f64 / ((s * s) as f64 * r as f64),
                std_error: None,
                pairs: s * s,
                sphere_size: sphere.len(),
            })
        }
        SprawlMode::Sampled { pairs, seed } => {
            if pairs == 0 {
                return Err(Error::Invalid("need at least one sample pair".into()));
            }
            let sphere = sphere(spec, &spec.origin(), r, limits)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
            for _ in 0..pairs {
                let x = &sphere[rng.random_range(0..sphere.len())];
                let y = &sphere[rng.random_range(0..sphere.len())];
                let d = distance(spec, x, y, 2 * r, limits)?
                    .exact()
                    .expect("sphere vertices are at most 2r apart");
                let v = d as f64 / r as f64;
                sum += v;
                sum_sq += v * v;
            }
            let k = pairs as f64;
            let mean = sum / k;
            let var = if pairs > 1 {
                ((sum_sq - k * mean * mean) / (k - 1.0)).max(0.0)
            } else {
                0.0
            };
            Ok(SprawlEstimate {
                r,
                mean,
                std_error: Some((var / k).sqrt()),
                pairs,
                sphere_size: sphere.len(),
            })
        }
    }
}
