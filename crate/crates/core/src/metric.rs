//! Exact word-metric computations by breadth-first search.
//!
//! Nothing here truncates silently: a search that would exceed
//! [`Limits::max_vertices`] returns [`Error::Capacity`] instead of a
//! partial table.

use std::hash::BuildHasherDefault;

use indexmap::IndexMap;
use rustc_hash::{FxHashMap, FxHasher};

use crate::error::{Error, Result};
use crate::graphs::{GraphSpec, Vertex};

pub(crate) type FxIndexMap<K, V> = IndexMap<K, V, BuildHasherDefault<FxHasher>>;

/// Resource caps shared by every search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum entries in any single BFS table.
    pub max_vertices: usize,
    /// Maximum branch-and-bound nodes for one cover search.
    pub max_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 50_000_000,
            max_nodes: 20_000_000,
        }
    }
}

/// Result of a capped distance query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    Exact(u32),
    /// The distance is strictly greater than the cap.
    Beyond(u32),
}

impl Distance {
    pub fn exact(self) -> Option<u32> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::Beyond(_) => None,
        }
    }

    /// True when the distance is known to be at least `k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Distance::Exact(d) => d >= k,
            Distance::Beyond(cap) => cap + 1 >= k,
        }
    }
}

/// Exact distances from `center` to every vertex of `B(center, radius)`.
///
/// Entries are stored in BFS order, so each sphere is a contiguous range.
#[derive(Clone, Debug)]
pub struct BallTable {
    spec: GraphSpec,
    center: Vertex,
    radius: u32,
    dist: FxIndexMap<Vertex, u32>,
    layer_start: Vec<usize>,
}

impl BallTable {
    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn center(&self) -> &Vertex {
        &self.center
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn get(&self, v: &Vertex) -> Option<u32> {
        self.dist.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.dist.contains_key(v)
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.dist.get_index_of(v)
    }

    pub fn entry(&self, index: usize) -> (&Vertex, u32) {
        let (v, d) = self.dist.get_index(index).expect("index in range");
        (v, *d)
    }

    /// All `(vertex, distance)` pairs in BFS order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, u32)> {
        self.dist.iter().map(|(v, d)| (v, *d))
    }

    /// Vertices at exactly distance `t` from the center, in BFS order.
    pub fn layer(&self, t: u32) -> impl Iterator<Item = &Vertex> {
        let t = t as usize;
        let range = if t + 1 < self.layer_start.len() {
            self.layer_start[t]..self.layer_start[t + 1]
        } else {
            0..0
        };
        range.map(move |i| self.dist.get_index(i).unwrap().0)
    }

    pub fn layer_len(&self, t: u32) -> usize {
        let t = t as usize;
        if t + 1 < self.layer_start.len() {
            self.layer_start[t + 1] - self.layer_start[t]
        } else {
            0
        }
    }
}

/// `B(center, r)` with exact distances.
pub fn ball(spec: &GraphSpec, center: &Vertex, r: u32, limits: &Limits) -> Result<BallTable> {
    spec.validate(center)?;
    let mut dist: FxIndexMap<Vertex, u32> = FxIndexMap::default();
    dist.insert(center.clone(), 0);
    let mut layer_start = vec![0, 1];
    for t in 0..r {
        let (a, b) = (layer_start[t as usize], layer_start[t as usize + 1]);
        for i in a..b {
            let v = dist.get_index(i).unwrap().0.clone();
            let mut overflow = false;
            spec.for_each_neighbor(&v, |w| {
                if overflow {
                    return;
                }
                let len = dist.len();
                if let indexmap::map::Entry::Vacant(e) = dist.entry(w) {
                    if len >= limits.max_vertices {
                        overflow = true;
                    } else {
                        e.insert(t + 1);
                    }
                }
            });
            if overflow {
                return Err(Error::Capacity {
                    what: "ball table",
                    cap: limits.max_vertices as u64,
                });
            }
        }
        layer_start.push(dist.len());
    }
    Ok(BallTable {
        spec: spec.clone(),
        center: center.clone(),
        radius: r,
        dist,
        layer_start,
    })
}

/// `∂B(center, r)`, sorted by canonical encoding.
pub fn sphere(spec: &GraphSpec, center: &Vertex, r: u32, limits: &Limits) -> Result<Vec<Vertex>> {
    let table = ball(spec, center, r, limits)?;
    let mut s: Vec<Vertex> = table.layer(r).cloned().collect();
    s.sort();
    Ok(s)
}

/// Exact `d(u, v)` when it is at most `cap`, by bidirectional BFS.
pub fn distance(
    spec: &GraphSpec,
    u: &Vertex,
    v: &Vertex,
    cap: u32,
    limits: &Limits,
) -> Result<Distance> {
    spec.validate(u)?;
    spec.validate(v)?;
    if u == v {
        return Ok(Distance::Exact(0));
    }
    let mut side = [Side::new(u), Side::new(v)];
    loop {
        let (da, db) = (side[0].depth, side[1].depth);
        if da + db >= cap {
            return Ok(Distance::Beyond(cap));
        }
        // Visited sets are B(u, da) and B(v, db) and are disjoint, so
        // d > da + db. Any meet while growing one side pins d = da + db + 1.
        let grow = if side[0].frontier.len() <= side[1].frontier.len() {
            0
        } else {
            1
        };
        let (left, right) = side.split_at_mut(1);
        let (me, other) = if grow == 0 {
            (&mut left[0], &right[0])
        } else {
            (&mut right[0], &left[0])
        };
        if me.frontier.is_empty() {
            return Ok(Distance::Beyond(cap));
        }
        if me.expand(spec, other, limits)? {
            return Ok(Distance::Exact(da + db + 1));
        }
    }
}

struct Side {
    seen: FxHashMap<Vertex, ()>,
    frontier: Vec<Vertex>,
    depth: u32,
}

impl Side {
    fn new(start: &Vertex) -> Self {
        let mut seen = FxHashMap::default();
        seen.insert(start.clone(), ());
        Side {
            seen,
            frontier: vec![start.clone()],
            depth: 0,
        }
    }

    /// Grows one level. Returns true if the new level meets `other`.
    fn expand(&mut self, spec: &GraphSpec, other: &Side, limits: &Limits) -> Result<bool> {
        let mut next = Vec::new();
        let mut met = false;
        for v in std::mem::take(&mut self.frontier) {
            spec.for_each_neighbor(&v, |w| {
                if met || self.seen.contains_key(&w) {
                    return;
                }
                if other.seen.contains_key(&w) {
                    met = true;
                    return;
                }
                self.seen.insert(w.clone(), ());
                next.push(w);
            });
            if met {
                return Ok(true);
            }
            if self.seen.len() + other.seen.len() > limits.max_vertices {
                return Err(Error::Capacity {
                    what: "bidirectional search",
                    cap: limits.max_vertices as u64,
                });
            }
        }
        self.frontier = next;
        self.depth += 1;
        Ok(false)
    }
}
