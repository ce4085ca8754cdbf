//! Implicit vertex-transitive graph families.
//!
//! Every graph here is infinite and is never materialized: a [`GraphSpec`]
//! names the family, a [`Vertex`] is a canonical group element, and
//! [`GraphSpec::neighbors`] is the only adjacency primitive. All families
//! are Cayley graphs with right multiplication by generators, so
//! [`GraphSpec::compose`] and [`GraphSpec::inverse`] give the group law
//! and `d(u, v) = |u⁻¹v|`.
//!
//! Canonical forms are enforced at every boundary (literal parsing and byte
//! decoding) so derived equality and hashing agree with equality of the
//! byte encodings.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const TAG_LATTICE: u8 = 0x01;
const TAG_LAMP_LINE: u8 = 0x02;
const TAG_LAMP_PLANE: u8 = 0x03;
const TAG_FREE23: u8 = 0x04;
const TAG_TREE: u8 = 0x05;
const TAG_LADDER: u8 = 0x06;

/// Letters of the C₂∗C₃ words. `B` stands for `b⁻¹`.
pub const FREE23_A: u8 = b'a';
pub const FREE23_B: u8 = b'b';
pub const FREE23_BINV: u8 = b'B';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenStyle {
    Std,
    Diag,
    Custom,
}

/// Z^d with a symmetric generating set of integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    dim: usize,
    style: GenStyle,
    gens: Vec<Vec<i32>>,
}

impl LatticeSpec {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn style(&self) -> GenStyle {
        self.style
    }

    pub fn generators(&self) -> &[Vec<i32>] {
        &self.gens
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Lattice,
    LamplighterLine,
    LamplighterPlane,
    FreeProduct23,
    RegularTree,
    LadderDiag,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    Lattice(LatticeSpec),
    /// LL(Z) with switch-walk-switch moves.
    LamplighterLine,
    /// LL(Z²) over the standard square lattice.
    LamplighterPlane,
    /// C₂∗C₃ = ⟨a, b | a² = b³ = 1⟩ with generators {a, b, b⁻¹}.
    FreeProduct23,
    /// The k-regular tree as the free product of k copies of Z₂.
    RegularTree {
        degree: u8,
    },
    /// Infinite ladder with both diagonals in every square.
    LadderDiag,
}

/// A canonical vertex. Construct through [`GraphSpec::parse_vertex`],
/// [`GraphSpec::decode`] or graph operations; hand-built values must pass
/// [`GraphSpec::validate`] before use.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Lattice(Vec<i32>),
    LampLine {
        lamps: Vec<i32>,
        pos: i32,
    },
    LampPlane {
        lamps: Vec<[i32; 2]>,
        pos: [i32; 2],
    },
    /// Reduced alternating word over `a`, `b`, `B`.
    Free23(Vec<u8>),
    /// Word over letters `0..k` with no letter repeated consecutively.
    Tree(Vec<u8>),
    Ladder {
        n: i32,
        side: u8,
    },
}

impl GraphSpec {
    /// Z^d with the standard unit-vector generators.
    pub fn lattice_std(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Spec("lattice dimension must be at least 1".into()));
        }
        let mut gens = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [1, -1] {
                let mut g = vec![0; dim];
                g[i] = s;
                gens.push(g);
            }
        }
        Ok(GraphSpec::Lattice(LatticeSpec {
            dim,
            style: GenStyle::Std,
            gens,
        }))
    }

    /// Z² with {(±1,0), (0,±1), (1,1), (−1,−1)}.
    pub fn lattice_diag() -> Self {
        GraphSpec::Lattice(LatticeSpec {
            dim: 2,
            style: GenStyle::Diag,
            gens: vec![
                vec![1, 0],
                vec![-1, 0],
                vec![0, 1],
                vec![0, -1],
                vec![1, 1],
                vec![-1, -1],
            ],
        })
    }

    pub fn lattice_custom(dim: usize, gens: Vec<Vec<i32>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Spec("lattice dimension must be at least 1".into()));
        }
        if gens.is_empty() {
            return Err(Error::Spec("generator set is empty".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.len() != dim {
                return Err(Error::Spec(format!(
                    "generator {g:?} has {} coordinates, expected {dim}",
                    g.len()
                )));
            }
            if g.iter().all(|&c| c == 0) {
                return Err(Error::Spec("generator set contains the zero vector".into()));
            }
            if gens[..i].contains(g) {
                return Err(Error::Spec(format!("generator {g:?} listed twice")));
            }
            let neg: Vec<i32> = g.iter().map(|c| -c).collect();
            if !gens.contains(&neg) {
                return Err(Error::Spec(format!(
                    "generator set is not symmetric: {g:?} has no inverse"
                )));
            }
        }
        Ok(GraphSpec::Lattice(LatticeSpec {
            dim,
            style: GenStyle::Custom,
            gens,
        }))
    }

    pub fn tree(degree: u8) -> Result<Self> {
        if degree < 3 {
            return Err(Error::Spec(format!(
                "tree degree must be >= 3, got {degree}"
            )));
        }
        Ok(GraphSpec::RegularTree { degree })
    }

    pub fn family(&self) -> Family {
        match self {
            GraphSpec::Lattice(_) => Family::Lattice,
            GraphSpec::LamplighterLine => Family::LamplighterLine,
            GraphSpec::LamplighterPlane => Family::LamplighterPlane,
            GraphSpec::FreeProduct23 => Family::FreeProduct23,
            GraphSpec::RegularTree { .. } => Family::RegularTree,
            GraphSpec::LadderDiag => Family::LadderDiag,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            GraphSpec::Lattice(l) => l.gens.len(),
            GraphSpec::LamplighterLine => 8,
            GraphSpec::LamplighterPlane => 16,
            GraphSpec::FreeProduct23 => 3,
            GraphSpec::RegularTree { degree } => *degree as usize,
            GraphSpec::LadderDiag => 5,
        }
    }

    pub fn origin(&self) -> Vertex {
        match self {
            GraphSpec::Lattice(l) => Vertex::Lattice(vec![0; l.dim]),
            GraphSpec::LamplighterLine => Vertex::LampLine {
                lamps: Vec::new(),
                pos: 0,
            },
            GraphSpec::LamplighterPlane => Vertex::LampPlane {
                lamps: Vec::new(),
                pos: [0, 0],
            },
            GraphSpec::FreeProduct23 => Vertex::Free23(Vec::new()),
            GraphSpec::RegularTree { .. } => Vertex::Tree(Vec::new()),
            GraphSpec::LadderDiag => Vertex::Ladder { n: 0, side: 0 },
        }
    }

    /// Checks that `v` belongs to this family and is in canonical form.
    pub fn validate(&self, v: &Vertex) -> Result<()> {
        match (self, v) {
            (GraphSpec::Lattice(l), Vertex::Lattice(c)) => {
                if c.len() != l.dim {
                    return Err(Error::Encoding(format!(
                        "lattice vertex has {} coordinates, expected {}",
                        c.len(),
                        l.dim
                    )));
                }
            }
            (GraphSpec::LamplighterLine, Vertex::LampLine { lamps, .. }) => {
                if !lamps.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::Encoding(
                        "lamps must be strictly increasing (sorted, no duplicates)".into(),
                    ));
                }
            }
            (GraphSpec::LamplighterPlane, Vertex::LampPlane { lamps, .. }) => {
                if !lamps.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::Encoding(
                        "lamps must be strictly increasing (sorted, no duplicates)".into(),
                    ));
                }
            }
            (GraphSpec::FreeProduct23, Vertex::Free23(w)) => {
                for &c in w {
                    if !matches!(c, FREE23_A | FREE23_B | FREE23_BINV) {
                        return Err(Error::Encoding(format!(
                            "letter {:?} is not one of a, b, B",
                            c as char
                        )));
                    }
                }
                for p in w.windows(2) {
                    if (p[0] == FREE23_A) == (p[1] == FREE23_A) {
                        let rule = if p[0] == FREE23_A {
                            "aa reduces (a² = 1)"
                        } else {
                            "adjacent b-letters reduce (b³ = 1)"
                        };
                        return Err(Error::Encoding(format!(
                            "word is not reduced: \"{}{}\", {rule}",
                            p[0] as char, p[1] as char
                        )));
                    }
                }
            }
            (GraphSpec::RegularTree { degree }, Vertex::Tree(w)) => {
                if let Some(&c) = w.iter().find(|&&c| c >= *degree) {
                    return Err(Error::Encoding(format!(
                        "letter g{} out of range for degree {degree}",
                        c as u32 + 1
                    )));
                }
                if w.windows(2).any(|p| p[0] == p[1]) {
                    return Err(Error::Encoding(
                        "word is not reduced: repeated consecutive letter".into(),
                    ));
                }
            }
            (GraphSpec::LadderDiag, Vertex::Ladder { side, .. }) => {
                if *side > 1 {
                    return Err(Error::Encoding(format!(
                        "ladder side must be 0 or 1, got {side}"
                    )));
                }
            }
            _ => {
                return Err(Error::Encoding(format!(
                    "vertex {v} does not belong to graph {self}"
                )))
            }
        }
        Ok(())
    }

    /// All adjacent vertices, in a fixed deterministic order.
    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        self.validate(v)?;
        let mut out = Vec::with_capacity(self.degree());
        self.for_each_neighbor(v, |w| out.push(w));
        Ok(out)
    }

    /// Neighbor enumeration for vertices already known to be canonical.
    pub(crate) fn for_each_neighbor(&self, v: &Vertex, mut f: impl FnMut(Vertex)) {
        match (self, v) {
            (GraphSpec::Lattice(l), Vertex::Lattice(c)) => {
                for g in &l.gens {
                    f(Vertex::Lattice(
                        c.iter().zip(g).map(|(a, b)| a + b).collect(),
                    ));
                }
            }
            (GraphSpec::LamplighterLine, Vertex::LampLine { lamps, pos }) => {
                for step in [1, -1] {
                    let next = pos + step;
                    for pattern in 0..4u8 {
                        let mut l = lamps.clone();
                        if pattern & 1 != 0 {
                            toggle(&mut l, *pos);
                        }
                        if pattern & 2 != 0 {
                            toggle(&mut l, next);
                        }
                        f(Vertex::LampLine {
                            lamps: l,
                            pos: next,
                        });
                    }
                }
            }
            (GraphSpec::LamplighterPlane, Vertex::LampPlane { lamps, pos }) => {
                for step in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                    let next = [pos[0] + step[0], pos[1] + step[1]];
                    for pattern in 0..4u8 {
                        let mut l = lamps.clone();
                        if pattern & 1 != 0 {
                            toggle(&mut l, *pos);
                        }
                        if pattern & 2 != 0 {
                            toggle(&mut l, next);
                        }
                        f(Vertex::LampPlane {
                            lamps: l,
                            pos: next,
                        });
                    }
                }
            }
            (GraphSpec::FreeProduct23, Vertex::Free23(w)) => {
                for g in [FREE23_A, FREE23_B, FREE23_BINV] {
                    let mut x = w.clone();
                    free23_push(&mut x, g);
                    f(Vertex::Free23(x));
                }
            }
            (GraphSpec::RegularTree { degree }, Vertex::Tree(w)) => {
                for g in 0..*degree {
                    let mut x = w.clone();
                    tree_push(&mut x, g);
                    f(Vertex::Tree(x));
                }
            }
            (GraphSpec::LadderDiag, Vertex::Ladder { n, side }) => {
                f(Vertex::Ladder {
                    n: *n,
                    side: 1 - side,
                });
                for dn in [1, -1] {
                    f(Vertex::Ladder {
                        n: n + dn,
                        side: *side,
                    });
                    f(Vertex::Ladder {
                        n: n + dn,
                        side: 1 - side,
                    });
                }
            }
            _ => unreachable!("vertex family mismatch; validate first"),
        }
    }

    /// Group product `u·v`. Left multiplication by `u` is a graph automorphism.
    pub fn compose(&self, u: &Vertex, v: &Vertex) -> Result<Vertex> {
        self.validate(u)?;
        self.validate(v)?;
        Ok(match (u, v) {
            (Vertex::Lattice(a), Vertex::Lattice(b)) => {
                Vertex::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Vertex::LampLine { lamps: a, pos: p }, Vertex::LampLine { lamps: b, pos: q }) => {
                let mut lamps = a.clone();
                for &x in b {
                    toggle(&mut lamps, x + p);
                }
                Vertex::LampLine { lamps, pos: p + q }
            }
            (Vertex::LampPlane { lamps: a, pos: p }, Vertex::LampPlane { lamps: b, pos: q }) => {
                let mut lamps = a.clone();
                for x in b {
                    toggle(&mut lamps, [x[0] + p[0], x[1] + p[1]]);
                }
                Vertex::LampPlane {
                    lamps,
                    pos: [p[0] + q[0], p[1] + q[1]],
                }
            }
            (Vertex::Free23(a), Vertex::Free23(b)) => {
                let mut w = a.clone();
                for &g in b {
                    free23_push(&mut w, g);
                }
                Vertex::Free23(w)
            }
            (Vertex::Tree(a), Vertex::Tree(b)) => {
                let mut w = a.clone();
                for &g in b {
                    tree_push(&mut w, g);
                }
                Vertex::Tree(w)
            }
            (Vertex::Ladder { n: a, side: s }, Vertex::Ladder { n: b, side: t }) => {
                Vertex::Ladder {
                    n: a + b,
                    side: s ^ t,
                }
            }
            _ => unreachable!("validated above"),
        })
    }

    pub fn inverse(&self, v: &Vertex) -> Result<Vertex> {
        self.validate(v)?;
        Ok(match v {
            Vertex::Lattice(c) => Vertex::Lattice(c.iter().map(|x| -x).collect()),
            Vertex::LampLine { lamps, pos } => Vertex::LampLine {
                lamps: lamps.iter().map(|x| x - pos).collect(),
                pos: -pos,
            },
            Vertex::LampPlane { lamps, pos } => Vertex::LampPlane {
                lamps: lamps
                    .iter()
                    .map(|x| [x[0] - pos[0], x[1] - pos[1]])
                    .collect(),
                pos: [-pos[0], -pos[1]],
            },
            Vertex::Free23(w) => Vertex::Free23(
                w.iter()
                    .rev()
                    .map(|&c| match c {
                        FREE23_B => FREE23_BINV,
                        FREE23_BINV => FREE23_B,
                        other => other,
                    })
                    .collect(),
            ),
            Vertex::Tree(w) => Vertex::Tree(w.iter().rev().copied().collect()),
            Vertex::Ladder { n, side } => Vertex::Ladder { n: -n, side: *side },
        })
    }

    /// `u⁻¹v`: the vertex that `v` is carried to when `u` is moved to the
    /// origin. `d(u, v) = d(origin, relative(u, v))`.
    pub fn relative(&self, u: &Vertex, v: &Vertex) -> Result<Vertex> {
        let inv = self.inverse(u)?;
        self.compose(&inv, v)
    }

    /// A pair `(u, v)` on a bi-infinite geodesic through the origin, each at
    /// distance `r` from it on opposite sides. Used only as a search hint;
    /// callers verify distances by BFS.
    pub fn geodesic_line_hint(&self, r: u32) -> Option<(Vertex, Vertex)> {
        let r = r as i32;
        Some(match self {
            GraphSpec::Lattice(l) => {
                let g = &l.gens[0];
                (
                    Vertex::Lattice(g.iter().map(|c| c * r).collect()),
                    Vertex::Lattice(g.iter().map(|c| -c * r).collect()),
                )
            }
            GraphSpec::LamplighterLine => (
                Vertex::LampLine {
                    lamps: vec![],
                    pos: r,
                },
                Vertex::LampLine {
                    lamps: vec![],
                    pos: -r,
                },
            ),
            GraphSpec::LamplighterPlane => (
                Vertex::LampPlane {
                    lamps: vec![],
                    pos: [r, 0],
                },
                Vertex::LampPlane {
                    lamps: vec![],
                    pos: [-r, 0],
                },
            ),
            GraphSpec::FreeProduct23 => {
                let alt = |first: u8, second: u8| -> Vec<u8> {
                    (0..r)
                        .map(|i| if i % 2 == 0 { first } else { second })
                        .collect()
                };
                (
                    Vertex::Free23(alt(FREE23_A, FREE23_B)),
                    Vertex::Free23(alt(FREE23_B, FREE23_A)),
                )
            }
            GraphSpec::RegularTree { .. } => {
                let alt = |first: u8, second: u8| -> Vec<u8> {
                    (0..r)
                        .map(|i| if i % 2 == 0 { first } else { second })
                        .collect()
                };
                (Vertex::Tree(alt(0, 1)), Vertex::Tree(alt(1, 0)))
            }
            GraphSpec::LadderDiag => (
                Vertex::Ladder { n: r, side: 0 },
                Vertex::Ladder { n: -r, side: 0 },
            ),
        })
    }

    /// Decodes a canonical byte encoding, rejecting non-canonical input.
    pub fn decode(&self, bytes: &[u8]) -> Result<Vertex> {
        let (&tag, body) = bytes
            .split_first()
            .ok_or_else(|| Error::Encoding("empty encoding".into()))?;
        let expected = match self.family() {
            Family::Lattice => TAG_LATTICE,
            Family::LamplighterLine => TAG_LAMP_LINE,
            Family::LamplighterPlane => TAG_LAMP_PLANE,
            Family::FreeProduct23 => TAG_FREE23,
            Family::RegularTree => TAG_TREE,
            Family::LadderDiag => TAG_LADDER,
        };
        if tag != expected {
            return Err(Error::Encoding(format!(
                "family tag {tag:#04x} does not match graph {self} (expected {expected:#04x})"
            )));
        }
        let v = match self {
            GraphSpec::Lattice(_) => Vertex::Lattice(read_i32s(body)?),
            GraphSpec::LamplighterLine => {
                let ints = read_i32s(body)?;
                let (pos, lamps) = ints
                    .split_first()
                    .ok_or_else(|| Error::Encoding("missing lamplighter position".into()))?;
                Vertex::LampLine {
                    lamps: lamps.to_vec(),
                    pos: *pos,
                }
            }
            GraphSpec::LamplighterPlane => {
                let ints = read_i32s(body)?;
                if ints.len() < 2 || ints.len() % 2 != 0 {
                    return Err(Error::Encoding(
                        "truncated planar lamplighter encoding".into(),
                    ));
                }
                let pts: Vec<[i32; 2]> = ints.chunks(2).map(|c| [c[0], c[1]]).collect();
                Vertex::LampPlane {
                    pos: pts[0],
                    lamps: pts[1..].to_vec(),
                }
            }
            GraphSpec::FreeProduct23 => Vertex::Free23(body.to_vec()),
            GraphSpec::RegularTree { .. } => Vertex::Tree(body.to_vec()),
            GraphSpec::LadderDiag => {
                if body.len() != 5 {
                    return Err(Error::Encoding("ladder encoding must be 6 bytes".into()));
                }
                Vertex::Ladder {
                    n: i32::from_le_bytes(body[..4].try_into().unwrap()),
                    side: body[4],
                }
            }
        };
        self.validate(&v)?;
        Ok(v)
    }

    /// Parses a family-native vertex literal, or `hex:<bytes>` for a raw
    /// canonical encoding.
    pub fn parse_vertex(&self, s: &str) -> Result<Vertex> {
        let s = s.trim();
        if let Some(hex) = s.strip_prefix("hex:") {
            return self.decode(&parse_hex(hex)?);
        }
        let v = match self {
            GraphSpec::Lattice(l) => {
                let c = parse_int_list(s)?;
                if c.len() != l.dim {
                    return Err(Error::Encoding(format!(
                        "expected {} coordinates in {s:?}",
                        l.dim
                    )));
                }
                Vertex::Lattice(c)
            }
            GraphSpec::LamplighterLine => {
                let (pos, lamps) = split_lamp_literal(s)?;
                Vertex::LampLine {
                    pos: parse_int(pos)?,
                    lamps: if lamps.is_empty() {
                        vec![]
                    } else {
                        parse_int_list(lamps)?
                    },
                }
            }
            GraphSpec::LamplighterPlane => {
                let (pos, lamps) = split_lamp_literal(s)?;
                let pos = parse_point_list(pos)?;
                if pos.len() != 1 {
                    return Err(Error::Encoding(format!(
                        "expected one position point in {s:?}"
                    )));
                }
                Vertex::LampPlane {
                    pos: pos[0],
                    lamps: parse_point_list(lamps)?,
                }
            }
            GraphSpec::FreeProduct23 => {
                if s == "e" || s.is_empty() {
                    Vertex::Free23(vec![])
                } else {
                    Vertex::Free23(s.as_bytes().to_vec())
                }
            }
            GraphSpec::RegularTree { .. } => {
                if s == "e" || s.is_empty() {
                    Vertex::Tree(vec![])
                } else {
                    let mut w = Vec::new();
                    for part in s.split('g').skip(1) {
                        let i: u32 = part
                            .parse()
                            .map_err(|_| Error::Encoding(format!("bad tree word {s:?}")))?;
                        if i == 0 || i > 255 {
                            return Err(Error::Encoding(format!("bad tree letter g{i}")));
                        }
                        w.push((i - 1) as u8);
                    }
                    if !s.starts_with('g') {
                        return Err(Error::Encoding(format!(
                            "tree words look like g1g2, got {s:?}"
                        )));
                    }
                    Vertex::Tree(w)
                }
            }
            GraphSpec::LadderDiag => {
                let c = parse_int_list(s)?;
                if c.len() != 2 || !(0..=1).contains(&c[1]) {
                    return Err(Error::Encoding(format!(
                        "ladder vertices look like n,side with side in {{0,1}}, got {s:?}"
                    )));
                }
                Vertex::Ladder {
                    n: c[0],
                    side: c[1] as u8,
                }
            }
        };
        self.validate(&v)?;
        Ok(v)
    }
}

impl Vertex {
    /// Canonical byte encoding: a family tag byte followed by little-endian
    /// i32 fields (or letter bytes for words).
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            Vertex::Lattice(c) => {
                out.push(TAG_LATTICE);
                c.iter().for_each(|x| out.extend(x.to_le_bytes()));
            }
            Vertex::LampLine { lamps, pos } => {
                out.push(TAG_LAMP_LINE);
                out.extend(pos.to_le_bytes());
                lamps.iter().for_each(|x| out.extend(x.to_le_bytes()));
            }
            Vertex::LampPlane { lamps, pos } => {
                out.push(TAG_LAMP_PLANE);
                std::iter::once(pos)
                    .chain(lamps)
                    .flatten()
                    .for_each(|x| out.extend(x.to_le_bytes()));
            }
            Vertex::Free23(w) => {
                out.push(TAG_FREE23);
                out.extend(w);
            }
            Vertex::Tree(w) => {
                out.push(TAG_TREE);
                out.extend(w);
            }
            Vertex::Ladder { n, side } => {
                out.push(TAG_LADDER);
                out.extend(n.to_le_bytes());
                out.push(*side);
            }
        }
        out
    }

    pub fn to_hex(&self) -> String {
        self.encode().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Vertices are ordered by their canonical byte encodings.
impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encode().cmp(&other.encode())
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Lattice(c) => write!(f, "{}", join(c)),
            Vertex::LampLine { lamps, pos } => write!(f, "pos={pos};lamps={}", join(lamps)),
            Vertex::LampPlane { lamps, pos } => {
                let pts: Vec<String> = lamps
                    .iter()
                    .map(|p| format!("({},{})", p[0], p[1]))
                    .collect();
                write!(f, "pos=({},{});lamps={}", pos[0], pos[1], pts.join(","))
            }
            Vertex::Free23(w) | Vertex::Tree(w) if w.is_empty() => write!(f, "e"),
            Vertex::Free23(w) => write!(f, "{}", String::from_utf8_lossy(w)),
            Vertex::Tree(w) => {
                for g in w {
                    write!(f, "g{}", *g as u32 + 1)?;
                }
                Ok(())
            }
            Vertex::Ladder { n, side } => write!(f, "{n},{side}"),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Lattice(l) => match l.style {
                GenStyle::Std => write!(f, "z:{}:std", l.dim),
                GenStyle::Diag => write!(f, "z:{}:diag", l.dim),
                GenStyle::Custom => {
                    let gens: Vec<String> =
                        l.gens.iter().map(|g| format!("({})", join(g))).collect();
                    write!(f, "z:{}:custom={}", l.dim, gens.join(";"))
                }
            },
            GraphSpec::LamplighterLine => write!(f, "ll-z"),
            GraphSpec::LamplighterPlane => write!(f, "ll-z2"),
            GraphSpec::FreeProduct23 => write!(f, "free23"),
            GraphSpec::RegularTree { degree } => write!(f, "tree:{degree}"),
            GraphSpec::LadderDiag => write!(f, "ladder"),
        }
    }
}

/// Grammar: `z:<d>[:std|diag|custom=(x,y);(x,y);...]`, `ll-z`, `ll-z2`,
/// `free23`, `tree:<k>`, `ladder`.
impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "ll-z" => return Ok(GraphSpec::LamplighterLine),
            "ll-z2" => return Ok(GraphSpec::LamplighterPlane),
            "free23" => return Ok(GraphSpec::FreeProduct23),
            "ladder" => return Ok(GraphSpec::LadderDiag),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("tree:") {
            let k: u8 = k
                .parse()
                .map_err(|_| Error::Spec(format!("bad tree degree in {s:?}")))?;
            return GraphSpec::tree(k);
        }
        if let Some(rest) = s.strip_prefix("z:") {
            let (dim, gens) = match rest.split_once(':') {
                Some((d, g)) => (d, g),
                None => (rest, "std"),
            };
            let dim: usize = dim
                .parse()
                .map_err(|_| Error::Spec(format!("bad lattice dimension in {s:?}")))?;
            return match gens {
                "std" => GraphSpec::lattice_std(dim),
                "diag" if dim == 2 => Ok(GraphSpec::lattice_diag()),
                "diag" => Err(Error::Spec("diag generators exist only for z:2".into())),
                g => {
                    let list = g
                        .strip_prefix("custom=")
                        .ok_or_else(|| Error::Spec(format!("unknown generator set {g:?}")))?;
                    let gens = list
                        .split(';')
                        .map(|t| {
                            let t = t.trim();
                            let inner = t
                                .strip_prefix('(')
                                .and_then(|t| t.strip_suffix(')'))
                                .ok_or_else(|| {
                                    Error::Spec(format!("generator {t:?} must be parenthesized"))
                                })?;
                            parse_int_list(inner).map_err(|e| Error::Spec(e.to_string()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    GraphSpec::lattice_custom(dim, gens)
                }
            };
        }
        Err(Error::Spec(format!(
            "unknown graph {s:?}; expected z:<d>[:std|diag|custom=...], ll-z, ll-z2, free23, tree:<k> or ladder"
        )))
    }
}

fn toggle<T: Ord + Copy>(lamps: &mut Vec<T>, at: T) {
    match lamps.binary_search(&at) {
        Ok(i) => {
            lamps.remove(i);
        }
        Err(i) => lamps.insert(i, at),
    }
}

/// Right-multiplies a reduced C₂∗C₃ word by one generator letter.
fn free23_push(w: &mut Vec<u8>, g: u8) {
    match (w.last().copied(), g) {
        (Some(FREE23_A), FREE23_A) => {
            w.pop();
        }
        (Some(FREE23_B), FREE23_B) => *w.last_mut().unwrap() = FREE23_BINV,
        (Some(FREE23_BINV), FREE23_BINV) => *w.last_mut().unwrap() = FREE23_B,
        (Some(FREE23_B), FREE23_BINV) | (Some(FREE23_BINV), FREE23_B) => {
            w.pop();
        }
        _ => w.push(g),
    }
}

fn tree_push(w: &mut Vec<u8>, g: u8) {
    if w.last() == Some(&g) {
        w.pop();
    } else {
        w.push(g);
    }
}

fn read_i32s(body: &[u8]) -> Result<Vec<i32>> {
    if !body.len().is_multiple_of(4) {
        return Err(Error::Encoding(format!(
            "integer payload of {} bytes is not a multiple of 4",
            body.len()
        )));
    }
    Ok(body
        .chunks_exact(4)
        .map(|c| i32::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

fn parse_hex(s: &str) -> Result<Vec<u8>> {
    if !s.len().is_multiple_of(2) {
        return Err(Error::Encoding("hex encoding has odd length".into()));
    }
    (0..s.len())
        .step_by(2)
        .map(|i| {
            u8::from_str_radix(&s[i..i + 2], 16)
                .map_err(|_| Error::Encoding(format!("bad hex byte {:?}", &s[i..i + 2])))
        })
        .collect()
}

fn parse_int(s: &str) -> Result<i32> {
    s.trim()
        .parse()
        .map_err(|_| Error::Encoding(format!("bad integer {s:?}")))
}

fn parse_int_list(s: &str) -> Result<Vec<i32>> {
    s.split(',').map(parse_int).collect()
}

fn split_lamp_literal(s: &str) -> Result<(&str, &str)> {
    let (pos, lamps) = match s.split_once(';') {
        Some((p, l)) => (p, Some(l)),
        None => (s, None),
    };
    let pos = pos.trim().strip_prefix("pos=").ok_or_else(|| {
        Error::Encoding(format!(
            "lamplighter literals look like pos=3;lamps=-1,0,4, got {s:?}"
        ))
    })?;
    let lamps = match lamps {
        Some(l) => l
            .trim()
            .strip_prefix("lamps=")
            .ok_or_else(|| Error::Encoding(format!("expected lamps=... in {s:?}")))?,
        None => "",
    };
    Ok((pos, lamps.trim()))
}

/// Parses `(x,y),(x,y),...`.
fn parse_point_list(s: &str) -> Result<Vec<[i32; 2]>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Encoding(format!("points look like (x,y),(x,y), got {s:?}")))?;
    inner
        .split("),(")
        .map(|p| {
            let c = parse_int_list(p)?;
            if c.len() != 2 {
                return Err(Error::Encoding(format!(
                    "point {p:?} must have two coordinates"
                )));
            }
            Ok([c[0], c[1]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn all_families() -> Vec<GraphSpec> {
        vec![
            GraphSpec::lattice_std(1).unwrap(),
            GraphSpec::lattice_std(2).unwrap(),
            GraphSpec::lattice_diag(),
            GraphSpec::LamplighterLine,
            GraphSpec::LamplighterPlane,
            GraphSpec::FreeProduct23,
            GraphSpec::tree(3).unwrap(),
            GraphSpec::tree(4).unwrap(),
            GraphSpec::LadderDiag,
        ]
    }

    fn ball_vertices(spec: &GraphSpec, r: u32) -> Vec<Vertex> {
        let mut seen: HashSet<Vertex> = HashSet::new();
        let mut order = vec![spec.origin()];
        seen.insert(spec.origin());
        let mut frontier = vec![spec.origin()];
        for _ in 0..r {
            let mut next = vec![];
            for v in &frontier {
                for w in spec.neighbors(v).unwrap() {
                    if seen.insert(w.clone()) {
                        next.push(w.clone());
                        order.push(w);
                    }
                }
            }
            frontier = next;
        }
        order
    }

    #[test]
    fn origins() {
        assert_eq!(
            GraphSpec::lattice_std(2).unwrap().origin(),
            Vertex::Lattice(vec![0, 0])
        );
        assert_eq!(
            GraphSpec::LamplighterLine.origin(),
            Vertex::LampLine {
                lamps: vec![],
                pos: 0
            }
        );
        assert_eq!(GraphSpec::FreeProduct23.origin(), Vertex::Free23(vec![]));
    }

    #[test]
    fn lattice_neighbors_of_origin() {
        let spec = GraphSpec::lattice_std(2).unwrap();
        let n: HashSet<_> = spec
            .neighbors(&spec.origin())
            .unwrap()
            .into_iter()
            .collect();
        let want: HashSet<_> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|c| Vertex::Lattice(c.to_vec()))
            .collect();
        assert_eq!(n, want);
    }

    #[test]
    fn lamplighter_line_neighbors_of_origin() {
        let spec = GraphSpec::LamplighterLine;
        let n: HashSet<_> = spec
            .neighbors(&spec.origin())
            .unwrap()
            .into_iter()
            .collect();
        let mut want = HashSet::new();
        for pos in [1, -1] {
            for lamps in [vec![], vec![0], vec![pos], vec![0, pos]] {
                let mut lamps = lamps;
                lamps.sort();
                want.insert(Vertex::LampLine { lamps, pos });
            }
        }
        assert_eq!(n.len(), 8);
        assert_eq!(n, want);
    }

    #[test]
    fn free23_neighbors_of_identity() {
        let spec = GraphSpec::FreeProduct23;
        let n: HashSet<_> = spec
            .neighbors(&spec.origin())
            .unwrap()
            .into_iter()
            .collect();
        let want: HashSet<_> = ["a", "b", "B"]
            .iter()
            .map(|w| Vertex::Free23(w.as_bytes().to_vec()))
            .collect();
        assert_eq!(n, want);
    }

    #[test]
    fn free23_relations_hold() {
        let spec = GraphSpec::FreeProduct23;
        let b = spec.parse_vertex("b").unwrap();
        let bb = spec.compose(&b, &b).unwrap();
        assert_eq!(bb, spec.parse_vertex("B").unwrap());
        assert_eq!(spec.compose(&bb, &b).unwrap(), spec.origin());
        let a = spec.parse_vertex("a").unwrap();
        assert_eq!(spec.compose(&a, &a).unwrap(), spec.origin());
    }

    #[test]
    fn degrees_match_family() {
        let expect = [2, 4, 6, 8, 16, 3, 3, 4, 5];
        for (spec, d) in all_families().iter().zip(expect) {
            assert_eq!(spec.degree(), d, "{spec}");
            let r = if matches!(spec, GraphSpec::LamplighterPlane) {
                3
            } else {
                6
            };
            for v in ball_vertices(spec, r) {
                let n = spec.neighbors(&v).unwrap();
                let set: HashSet<_> = n.iter().cloned().collect();
                assert_eq!(set.len(), d, "{spec} at {v}");
                assert!(!set.contains(&v));
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric() {
        for spec in all_families() {
            let r = match spec {
                GraphSpec::LamplighterPlane => 3,
                GraphSpec::LamplighterLine => 6,
                _ => 8,
            };
            for v in ball_vertices(&spec, r) {
                for w in spec.neighbors(&v).unwrap() {
                    assert!(
                        spec.neighbors(&w).unwrap().contains(&v),
                        "{spec}: {v} -> {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn neighbors_are_right_translates() {
        for spec in all_families() {
            let gens = spec.neighbors(&spec.origin()).unwrap();
            for v in ball_vertices(&spec, 3) {
                let direct = spec.neighbors(&v).unwrap();
                let translated: Vec<_> =
                    gens.iter().map(|g| spec.compose(&v, g).unwrap()).collect();
                assert_eq!(direct, translated, "{spec} at {v}");
                let inv = spec.inverse(&v).unwrap();
                assert_eq!(spec.compose(&v, &inv).unwrap(), spec.origin());
            }
        }
    }

    #[test]
    fn encoding_is_injective_and_round_trips() {
        for spec in all_families() {
            let r = match spec {
                GraphSpec::LamplighterPlane => 3,
                GraphSpec::LamplighterLine => 6,
                _ => 8,
            };
            let vs = ball_vertices(&spec, r);
            let codes: HashSet<Vec<u8>> = vs.iter().map(|v| v.encode()).collect();
            assert_eq!(codes.len(), vs.len(), "{spec}");
            for v in &vs {
                assert_eq!(&spec.decode(&v.encode()).unwrap(), v);
                assert_eq!(&spec.parse_vertex(&v.to_string()).unwrap(), v);
            }
        }
    }

    #[test]
    fn lamplighter_round_trip_example() {
        let spec = GraphSpec::LamplighterLine;
        let v = Vertex::LampLine {
            lamps: vec![-2, 1],
            pos: 3,
        };
        assert_eq!(spec.decode(&v.encode()).unwrap(), v);
        assert_eq!(v.to_string(), "pos=3;lamps=-2,1");
    }

    #[test]
    fn decode_rejects_unsorted_lamps() {
        let spec = GraphSpec::LamplighterLine;
        let bad = Vertex::LampLine {
            lamps: vec![1, -2],
            pos: 0,
        };
        let err = spec.decode(&bad.encode()).unwrap_err();
        assert!(err.to_string().contains("strictly increasing"), "{err}");
        assert!(spec.parse_vertex("pos=0;lamps=1,-2").is_err());
        assert!(spec.parse_vertex("pos=0;lamps=1,1").is_err());
    }

    #[test]
    fn decode_rejects_unreduced_words() {
        let spec = GraphSpec::FreeProduct23;
        let err = spec.decode(&[TAG_FREE23, b'a', b'a']).unwrap_err();
        assert!(err.to_string().contains("a² = 1"), "{err}");
        assert!(spec.parse_vertex("abb").is_err());
        assert!(spec.parse_vertex("bB").is_err());
        assert!(spec.parse_vertex("abaB").is_ok());
        let tree = GraphSpec::tree(3).unwrap();
        assert!(tree.parse_vertex("g1g1").is_err());
        assert!(tree.parse_vertex("g4").is_err());
        assert!(tree.parse_vertex("g1g3g2").is_ok());
    }

    #[test]
    fn decode_rejects_wrong_family() {
        let z2 = GraphSpec::lattice_std(2).unwrap();
        let v = GraphSpec::LadderDiag.origin();
        assert!(z2.decode(&v.encode()).is_err());
        assert!(z2.neighbors(&v).is_err());
        assert!(z2.decode(&[TAG_LATTICE, 0, 0, 0]).is_err());
    }

    #[test]
    fn spec_grammar() {
        for s in [
            "z:1:std", "z:2:std", "z:2:diag", "z:3:std", "ll-z", "ll-z2", "free23", "tree:3",
            "tree:5", "ladder",
        ] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(
            "z:2".parse::<GraphSpec>().unwrap(),
            GraphSpec::lattice_std(2).unwrap()
        );
        let custom: GraphSpec = "z:2:custom=(1,0);(-1,0);(0,2);(0,-2)".parse().unwrap();
        assert_eq!(custom.degree(), 4);
        assert_eq!(custom.to_string(), "z:2:custom=(1,0);(-1,0);(0,2);(0,-2)");
        assert!("z:2:custom=(1,0);(0,1)".parse::<GraphSpec>().is_err());
        assert!("z:2:custom=(0,0);(0,0)".parse::<GraphSpec>().is_err());
        assert!("z:3:diag".parse::<GraphSpec>().is_err());
        assert!("tree:2".parse::<GraphSpec>().is_err());
        assert!("z:0".parse::<GraphSpec>().is_err());
        assert!("hyperbolic".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn vertex_literals() {
        let plane = GraphSpec::LamplighterPlane;
        let v = plane.parse_vertex("pos=(1,2);lamps=(0,0),(1,0)").unwrap();
        assert_eq!(
            v,
            Vertex::LampPlane {
                lamps: vec![[0, 0], [1, 0]],
                pos: [1, 2]
            }
        );
        assert_eq!(v.to_string(), "pos=(1,2);lamps=(0,0),(1,0)");
        assert!(plane.parse_vertex("pos=(1,2);lamps=(1,0),(0,0)").is_err());
        let line = GraphSpec::LamplighterLine;
        assert_eq!(
            line.parse_vertex("pos=3;lamps=-1,0,4").unwrap().to_string(),
            "pos=3;lamps=-1,0,4"
        );
        assert_eq!(line.parse_vertex("pos=0").unwrap(), line.origin());
        let ladder = GraphSpec::LadderDiag;
        assert!(ladder.parse_vertex("3,2").is_err());
        let hex = format!("hex:{}", Vertex::Ladder { n: -4, side: 1 }.to_hex());
        assert_eq!(
            ladder.parse_vertex(&hex).unwrap(),
            Vertex::Ladder { n: -4, side: 1 }
        );
    }

    #[test]
    fn ordering_follows_encoding() {
        let a = Vertex::Lattice(vec![-5, 0]);
        let b = Vertex::Lattice(vec![-4, 1]);
        assert_eq!(a.cmp(&b), a.encode().cmp(&b.encode()));
        assert!(a < b);
    }
}
