//! Plain-text pictures for planar families.

use std::collections::HashMap;

use survival_core::voronoi::{CompetitionState, VoronoiAssignment};
use survival_core::{GraphSpec, Limits, Vertex};

/// Planar position of a vertex: `(column, row)` with rows growing upward.
fn place(spec: &GraphSpec, v: &Vertex) -> Option<(i32, i32)> {
    match (spec, v) {
        (GraphSpec::Lattice(l), Vertex::Lattice(c)) if l.dim() == 2 => Some((c[0], c[1])),
        (GraphSpec::LadderDiag, Vertex::Ladder { n, side }) => Some((*n, *side as i32)),
        _ => None,
    }
}

fn render(cells: &HashMap<(i32, i32), char>) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for &(x, y) in cells.keys() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let mut s = String::new();
    for y in (y0..=y1).rev() {
        let row: String = (x0..=x1)
            .map(|x| cells.get(&(x, y)).copied().unwrap_or(' '))
            .collect();
        s.push_str(&row);
        s.push('\n');
    }
    s
}

/// One character per window vertex: `A`, `B`, ... for the owning site,
/// `*` for ties.
pub fn voronoi(assign: &VoronoiAssignment) -> Option<String> {
    let spec = assign.spec();
    let mut cells = HashMap::new();
    for (v, _, e) in assign.iter() {
        let c = if e.is_tie() {
            '*'
        } else {
            let i = e.nearest[0];
            if i < 26 {
                (b'A' + i as u8) as char
            } else {
                '#'
            }
        };
        cells.insert(place(spec, v)?, c);
    }
    Some(render(&cells))
}

/// `X` and `Y` for the two species, `*` for vertices in both, `.` for
/// unclaimed window vertices.
pub fn competition(spec: &GraphSpec, st: &CompetitionState, limits: &Limits) -> Option<String> {
    let window = survival_core::ball(spec, &spec.origin(), st.window_radius, limits).ok()?;
    let mut cells = HashMap::new();
    for (v, _) in window.iter() {
        let c = match (st.x.contains(v), st.y.contains(v)) {
            (true, true) => '*',
            (true, false) => 'X',
            (false, true) => 'Y',
            (false, false) => '.',
        };
        cells.insert(place(spec, v)?, c);
    }
    Some(render(&cells))
}
