//! Window partition of a polygon by link distance from a start vertex.
//!
//! Level 1 is the visibility polygon of the start vertex. Every constructed
//! edge of a level-i window cuts off a pocket; the part of that pocket weakly
//! visible from the edge is a level-(i+1) window.

use crate::geom_kernel::Rational;
use crate::polygon::{BoundaryPoint, Chord, Polygon, Ring};
use crate::visibility::{gap_to_edge, ring_chord_region, ring_point_region, ConstructedEdge, RingRegion};

#[derive(Clone, Debug)]
pub struct Window {
    /// `(level, index)`, both starting at 1.
    pub id: (usize, usize),
    /// Window boundary, clockwise, labelled with host boundary points. For
    /// child windows the last edge is the entry chord.
    pub region: Ring,
    /// The sub-polygon the window was computed in: the whole polygon for the
    /// root, else the pocket of the entry edge.
    pub pocket: Ring,
    pub entry_edge: Option<ConstructedEdge>,
    /// Entry chord oriented so that the pocket is clockwise from `u` to `v`.
    pub entry_chord: Option<Chord>,
    pub child_edges: Vec<ConstructedEdge>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl Window {
    pub fn level(&self) -> usize {
        self.id.0
    }

    pub fn area2(&self) -> Rational {
        self.region.area2()
    }

    /// Host vertices on the window boundary.
    pub fn host_vertices(&self) -> Vec<usize> {
        self.region
            .labels
            .iter()
            .filter_map(|l| match l {
                BoundaryPoint::Vertex(i) => Some(*i),
                BoundaryPoint::OnEdge { .. } => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct PartitionTree {
    pub start_vertex: usize,
    pub windows: Vec<Window>,
    /// Window indices per level; `levels[0]` holds the root.
    pub levels: Vec<Vec<usize>>,
}

impl PartitionTree {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn root(&self) -> &Window {
        &self.windows[0]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Window containing `p` in its closed region, preferring the lowest level.
    pub fn window_of(&self, p: &crate::geom_kernel::Point) -> Option<usize> {
        self.levels
            .iter()
            .flatten()
            .copied()
            .find(|&w| self.windows[w].region.locate(p) != crate::geom_kernel::Location::Outside)
    }
}

fn region_ring(host: &Polygon, ring: &Ring, rr: &RingRegion, chord_last: bool) -> Ring {
    let pts: Vec<_> = rr.boundary.iter().map(|(_, p)| p.clone()).collect();
    let labels = rr.boundary.iter().map(|(pos, p)| ring.label_at(host, pos, p)).collect();
    let chord_edge = chord_last.then(|| pts.len() - 1);
    Ring {
        pts,
        labels,
        chord_edge,
    }
}

pub fn window_partition(host: &Polygon, start_vertex: usize) -> PartitionTree {
    let whole = host.ring();
    let rr = ring_point_region(&whole.pts, host.vertex(start_vertex), start_vertex);
    let mut windows = vec![Window {
        id: (1, 1),
        region: region_ring(host, &whole, &rr, false),
        pocket: whole.clone(),
        entry_edge: None,
        entry_chord: None,
        child_edges: rr.gaps.iter().map(|g| gap_to_edge(host, &whole, g)).collect(),
        parent: None,
        children: Vec::new(),
    }];
    let mut pending = vec![(0usize, whole, rr)];
    let mut levels = vec![vec![0usize]];
    while !pending.is_empty() {
        let mut next = Vec::new();
        let mut level = Vec::new();
        for (parent, ring, rr) in pending {
            for g in &rr.gaps {
                let la = ring.label_at(host, &g.a, &g.pa);
                let lb = ring.label_at(host, &g.b, &g.pb);
                let pocket = ring.sub_ring(&g.a, &g.pa, &la, &g.b, &g.pb, &lb);
                let ce = pocket.chord_edge.expect("pockets carry their chord");
                let crr = ring_chord_region(&pocket.pts, ce);
                let idx = windows.len();
                level.push(idx);
                windows[parent].children.push(idx);
                windows.push(Window {
                    id: (levels.len() + 1, level.len()),
                    region: region_ring(host, &pocket, &crr, true),
                    entry_edge: Some(gap_to_edge(host, &ring, g)),
                    entry_chord: Some(Chord { u: la, v: lb }),
                    child_edges: crr.gaps.iter().map(|cg| gap_to_edge(host, &pocket, cg)).collect(),
                    pocket: pocket.clone(),
                    parent: Some(parent),
                    children: Vec::new(),
                });
                next.push((idx, pocket, crr));
            }
        }
        if !level.is_empty() {
            levels.push(level);
        }
        pending = next;
    }
    PartitionTree {
        start_vertex,
        windows,
        levels,
    }
}
