//! Guard placement for the region weakly visible from one or more chords.
//!
//! Each round picks an unmarked target `z` whose last visible point `l'(z)`
//! comes first counterclockwise from `u`, places inside guards at the
//! shortest-path parents of `z` (plus one more inside guard if unmarked
//! targets share inward visible vertices with `z`), then places up to three
//! outside guards from the vertices `z` sees across the chord.

use std::collections::{BTreeSet, HashMap};

use crate::error::GuardError;
use num_traits::{One, Zero};

use crate::geom_kernel::{param_on, refine_pieces, ConvexPiece, Location, Point, Rational};
use crate::partition::PartitionTree;
use crate::polygon::{half, BoundaryPoint, BoundaryPos, Chord, Polygon, Ring};
use crate::shortest_paths::{PathNode, Sleeves};
use crate::visibility::{
    point_edge_intervals, ring_point_region, visibility_polygon_from_point, visible_vertex_sets, weakly_visible, Side,
    VisibleVertexSets,
};
use crate::Mode;

/// A point that has to be seen: a polygon vertex or a pseudo-vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub point: Point,
    pub label: BoundaryPoint,
    /// Host vertex index, `None` for pseudo-vertices.
    pub vertex: Option<usize>,
    /// Window (index into the partition tree) the target is assigned to.
    pub window: usize,
}

impl Target {
    pub fn is_pseudo(&self) -> bool {
        self.vertex.is_none()
    }

    /// Host edge of a pseudo-vertex.
    pub fn edge(&self) -> Option<usize> {
        match &self.label {
            BoundaryPoint::OnEdge { edge, .. } if self.vertex.is_none() => Some(*edge),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    Repair,
    Start,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::S1 => "s1",
            Role::S2 => "s2",
            Role::S3 => "s3",
            Role::S4 => "s4",
            Role::S5 => "s5",
            Role::S6 => "s6",
            Role::Repair => "repair",
            Role::Start => "start",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        [
            Role::S1,
            Role::S2,
            Role::S3,
            Role::S4,
            Role::S5,
            Role::S6,
            Role::Repair,
            Role::Start,
        ]
        .into_iter()
        .find(|r| r.name() == s)
    }

    pub fn is_outside(self) -> bool {
        matches!(self, Role::S1 | Role::S2 | Role::S3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub guard: usize,
    pub role: Role,
    /// Primary target that caused the placement.
    pub primary: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GuardSet {
    pub guards: BTreeSet<usize>,
    pub placements: Vec<Placement>,
}

impl GuardSet {
    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn add(&mut self, guard: usize, role: Role, primary: Option<usize>) {
        self.guards.insert(guard);
        self.placements.push(Placement { guard, role, primary });
    }

    pub fn extend(&mut self, other: GuardSet) {
        self.guards.extend(other.guards);
        self.placements.extend(other.placements);
    }

    pub fn as_vec(&self) -> Vec<usize> {
        self.guards.iter().copied().collect()
    }
}

/// Switches used by mutation tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub skip_s3: bool,
}

#[derive(Clone, Debug)]
pub struct RunChord {
    /// Oriented so that the child window lies clockwise from `u` to `v`.
    pub chord: Chord,
    pub u: Point,
    pub v: Point,
    pub window: usize,
    /// Boundary of the chord's window.
    pub region: Ring,
}

#[derive(Clone, Debug)]
pub struct TargetInfo {
    pub chord: usize,
    pub pu: (PathNode, Point),
    pub pv: (PathNode, Point),
    pub sets: VisibleVertexSets,
}

/// An overlap-set member with its own outward visible vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub target: usize,
    pub vvp_minus: Vec<usize>,
    pub f: Option<usize>,
    pub l: Option<usize>,
}

/// A member not visible from `l(z)`, with the constructed edge `t t'` of its
/// visibility polygon whose pocket holds `l(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocked {
    pub target: usize,
    pub t: usize,
    pub t_prime: BoundaryPoint,
    /// Classified by pocket side because neither interval rule applied.
    pub by_side: bool,
}

/// The A, B and C parts of an overlap set.
pub type AbcSplit = (Vec<Blocked>, Vec<usize>, Vec<Blocked>);

#[derive(Clone, Debug)]
pub struct PrimaryRecord {
    pub z: usize,
    pub chord: usize,
    pub window: usize,
    pub entry: Chord,
    pub sets: VisibleVertexSets,
    pub ovv_plus: Vec<usize>,
    pub ovv_minus: Vec<Member>,
    pub a_set: Vec<Blocked>,
    pub b_set: Vec<usize>,
    pub c_set: Vec<Blocked>,
    pub case1: bool,
    pub placed: Vec<(Role, usize)>,
}

/// Guards and records produced by one region.
#[derive(Clone, Debug, Default)]
pub struct RegionOutcome {
    pub guards: GuardSet,
    pub records: Vec<PrimaryRecord>,
    pub repair_guards: usize,
}

pub struct GuardContext<'a> {
    pub host: &'a Polygon,
    pub sleeves: &'a Sleeves,
    pub targets: &'a [Target],
    pub marks: &'a mut [bool],
    pub chords: Vec<RunChord>,
    pub mode: Mode,
    pub options: Options,
    /// Host vertices weakly visible from some chord of the region.
    pub in_union: Vec<bool>,
    /// Targets assigned to the chords' windows.
    pub members: Vec<usize>,
    pub info: HashMap<usize, TargetInfo>,
    /// Guards placed before this region, for residual-cell repair.
    pub prior: BTreeSet<usize>,
    pub outcome: RegionOutcome,
}

impl<'a> GuardContext<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        host: &'a Polygon,
        sleeves: &'a Sleeves,
        targets: &'a [Target],
        marks: &'a mut [bool],
        chords: Vec<RunChord>,
        mode: Mode,
        options: Options,
        prior: BTreeSet<usize>,
    ) -> Result<Self, GuardError> {
        let ring = host.vertices();
        let in_union: Vec<bool> = (0..host.n())
            .map(|w| chords.iter().any(|c| weakly_visible(ring, &c.u, &c.v, host.vertex(w))))
            .collect();
        let mut members = Vec::new();
        let mut info = HashMap::new();
        for (t, tg) in targets.iter().enumerate() {
            let Some(ci) = chords.iter().position(|c| c.window == tg.window) else {
                continue;
            };
            let c = &chords[ci];
            let pu = sleeves.parent_of(&c.u, &tg.point)?;
            let pv = sleeves.parent_of(&c.v, &tg.point)?;
            let sets = visible_vertex_sets(host, &c.chord, &in_union, &tg.point, tg.vertex, &pu.1, &pv.1);
            members.push(t);
            info.insert(
                t,
                TargetInfo {
                    chord: ci,
                    pu,
                    pv,
                    sets,
                },
            );
        }
        Ok(GuardContext {
            host,
            sleeves,
            targets,
            marks,
            chords,
            mode,
            options,
            in_union,
            members,
            info,
            prior,
            outcome: RegionOutcome::default(),
        })
    }

    fn sees(&self, g: usize, t: usize) -> bool {
        self.host.visible(self.host.vertex(g), &self.targets[t].point)
    }

    fn place(&mut self, g: usize, role: Role, primary: Option<usize>) {
        self.outcome.guards.add(g, role, primary);
        let gp = self.host.vertex(g).clone();
        for (t, tg) in self.targets.iter().enumerate() {
            if !self.marks[t] && self.host.visible(&gp, &tg.point) {
                self.marks[t] = true;
            }
        }
    }

    fn ccw_from_u(&self, chord: usize, bp: &BoundaryPoint) -> (u8, std::cmp::Reverse<BoundaryPos>) {
        let from = self.host.pos(&self.chords[chord].chord.u);
        self.host.ccw_key(&from, &self.host.pos(bp))
    }

    fn cw_from_u(&self, chord: usize, bp: &BoundaryPoint) -> (u8, BoundaryPos) {
        let from = self.host.pos(&self.chords[chord].chord.u);
        self.host.cw_key(&from, &self.host.pos(bp))
    }

    fn l_prime_key(&self, t: usize) -> impl Ord {
        let inf = &self.info[&t];
        (
            inf.chord,
            self.ccw_from_u(inf.chord, &inf.sets.l_prime),
            self.cw_from_u(inf.chord, &self.targets[t].label),
        )
    }

    /// Unmarked target whose `l'` comes first counterclockwise from `u`.
    pub fn select_primary(&self) -> Option<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&t| !self.marks[t])
            .min_by(|&a, &b| self.l_prime_key(a).cmp(&self.l_prime_key(b)))
    }

    fn node_vertex(node: PathNode, root: &BoundaryPoint) -> Option<usize> {
        match (node, root) {
            (PathNode::Vertex(i), _) => Some(i),
            (PathNode::Root, BoundaryPoint::Vertex(i)) => Some(*i),
            (PathNode::Root, BoundaryPoint::OnEdge { .. }) => None,
        }
    }

    fn same_chord_unmarked(&self, z: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.info[&z].chord;
        self.members
            .iter()
            .copied()
            .filter(move |&x| x != z && !self.marks[x] && self.info[&x].chord == c)
    }

    /// Places `s4 = p(u,z)`, `s5 = p(v,z)` and possibly `s6`; returns the
    /// inward overlap set computed after `s4`/`s5` marked what they see.
    pub fn place_inside_guards(&mut self, z: usize) -> (Vec<(Role, usize)>, Vec<usize>) {
        let inf = self.info[&z].clone();
        let c = self.chords[inf.chord].chord.clone();
        let mut placed = Vec::new();
        let s4 = Self::node_vertex(inf.pu.0, &c.u);
        let s5 = Self::node_vertex(inf.pv.0, &c.v);
        for (role, g) in [(Role::S4, s4), (Role::S5, s5)] {
            if let Some(g) = g {
                self.place(g, role, Some(z));
                placed.push((role, g));
            }
        }
        let plus_z: &[usize] = &inf.sets.vvp_plus;
        let ovv_plus: Vec<usize> = self
            .same_chord_unmarked(z)
            .filter(|x| self.info[x].sets.vvp_plus.iter().any(|w| plus_z.contains(w)))
            .collect();
        if ovv_plus.is_empty() {
            return (placed, ovv_plus);
        }
        let ci = plus_z
            .iter()
            .copied()
            .find(|w| ovv_plus.iter().all(|x| self.info[x].sets.vvp_plus.contains(w)));
        let s6 = ci.or_else(|| {
            let seen = |w: usize| -> BTreeSet<usize> {
                ovv_plus
                    .iter()
                    .copied()
                    .filter(|x| self.info[x].sets.vvp_plus.contains(&w))
                    .collect()
            };
            let start = s4.and_then(|g| plus_z.iter().position(|&w| w == g)).unwrap_or(0);
            let mut scan = plus_z[start..].iter().copied().skip_while(|&w| seen(w).is_empty());
            let mut cur = scan.next()?;
            let mut have = seen(cur);
            for w in scan {
                let s = seen(w);
                if !s.is_superset(&have) {
                    break;
                }
                cur = w;
                have = s;
            }
            Some(cur)
        });
        if let Some(g) = s6 {
            self.place(g, Role::S6, Some(z));
            placed.push((Role::S6, g));
        }
        (placed, ovv_plus)
    }

    fn member(&self, x: usize) -> Member {
        let s = &self.info[&x].sets;
        Member {
            target: x,
            vvp_minus: s.vvp_minus.clone(),
            f: s.f,
            l: s.l,
        }
    }

    /// `z` followed by the unmarked same-chord targets sharing an outward
    /// visible vertex with it, ordered by `l'`.
    pub fn overlap_set_minus(&self, z: usize) -> Vec<usize> {
        let minus_z = &self.info[&z].sets.vvp_minus;
        let mut out: Vec<usize> = self
            .same_chord_unmarked(z)
            .filter(|x| self.info[x].sets.vvp_minus.iter().any(|w| minus_z.contains(w)))
            .collect();
        out.push(z);
        out.sort_by(|&a, &b| self.l_prime_key(a).cmp(&self.l_prime_key(b)));
        out
    }

    /// Vertices seen across the chord by every member of `xs`, in
    /// counterclockwise order from `u`.
    pub fn common_intersection(&self, xs: &[usize]) -> Vec<usize> {
        let Some(&first) = xs.first() else {
            return Vec::new();
        };
        self.info[&first]
            .sets
            .vvp_minus
            .iter()
            .copied()
            .filter(|w| xs.iter().all(|x| self.info[x].sets.vvp_minus.contains(w)))
            .collect()
    }

    /// Splits the overlap set into members blocked on the `u` side (A),
    /// members seen from `l(z)` (B) and members blocked on the `v` side (C).
    pub fn abc_partition(&self, z: usize, ovv: &[usize]) -> Result<AbcSplit, GuardError> {
        let inf = &self.info[&z];
        let Some(l) = inf.sets.l else {
            return Ok((Vec::new(), ovv.to_vec(), Vec::new()));
        };
        let f = inf.sets.f.expect("f exists when l does");
        let c = &self.chords[inf.chord];
        let key = |bp: &BoundaryPoint| self.ccw_from_u(inf.chord, bp);
        let (kf, kl, klp, kv) = (
            key(&BoundaryPoint::Vertex(f)),
            key(&BoundaryPoint::Vertex(l)),
            key(&inf.sets.l_prime),
            key(&c.chord.v),
        );
        let (mut a, mut b, mut cc) = (Vec::new(), Vec::new(), Vec::new());
        for &x in ovv {
            if x == z || self.sees(l, x) {
                b.push(x);
                continue;
            }
            let region = visibility_polygon_from_point(self.host, &self.targets[x].point)?;
            let lbp = BoundaryPoint::Vertex(l);
            let Some(ce) = region
                .constructed_edges
                .iter()
                .find(|ce| self.host.in_range(&ce.pocket, &lbp))
            else {
                return Err(GuardError::UnclassifiableVertex {
                    primary: format!("{}", self.targets[z].point),
                    vertex: format!("{}", self.targets[x].point),
                });
            };
            let kt = key(&BoundaryPoint::Vertex(ce.v));
            let ktp = key(&ce.u);
            let is_a = kf <= kt && kt <= klp && kl <= ktp && ktp <= kv;
            let is_c = klp <= kt && kt <= kv && kf <= ktp && ktp <= klp;
            let mut blocked = Blocked {
                target: x,
                t: ce.v,
                t_prime: ce.u.clone(),
                by_side: false,
            };
            if is_a {
                a.push(blocked);
            } else if is_c {
                cc.push(blocked);
            } else {
                blocked.by_side = true;
                match ce.side {
                    Side::Right => a.push(blocked),
                    Side::Left => cc.push(blocked),
                }
            }
        }
        Ok((a, b, cc))
    }

    /// First vertex of `scan` that sees some member of `xs` which no later
    /// vertex of `scan` sees.
    fn scan_stop(&self, xs: &[usize], scan: &[usize]) -> Option<usize> {
        (0..scan.len()).find_map(|k| {
            xs.iter()
                .any(|&x| self.sees(scan[k], x) && scan[k + 1..].iter().all(|&y| !self.sees(y, x)))
                .then_some(scan[k])
        })
    }

    pub fn place_outside_guards(
        &mut self,
        z: usize,
        a: &[Blocked],
        b: &[usize],
        c: &[Blocked],
    ) -> (bool, Vec<(Role, usize)>) {
        let inf = self.info[&z].clone();
        let mut placed = Vec::new();
        let av: Vec<usize> = a.iter().map(|x| x.target).collect();
        let cv: Vec<usize> = c.iter().map(|x| x.target).collect();
        let all: Vec<usize> = av.iter().chain(b).chain(&cv).copied().collect();
        let ci = self.common_intersection(&all);
        if let Some(&g) = ci.first() {
            if !self.options.skip_s3 {
                self.place(g, Role::S3, Some(z));
                placed.push((Role::S3, g));
            }
            return (true, placed);
        }
        if let (Some(l), false) = (inf.sets.l, self.options.skip_s3) {
            self.place(l, Role::S3, Some(z));
            placed.push((Role::S3, l));
        }
        let minus = &inf.sets.vvp_minus;
        if !av.is_empty() {
            let s1 = self
                .common_intersection(&av)
                .first()
                .copied()
                .or_else(|| self.scan_stop(&av, minus));
            if let Some(g) = s1 {
                self.place(g, Role::S1, Some(z));
                placed.push((Role::S1, g));
            }
        }
        if !cv.is_empty() {
            let rev: Vec<usize> = minus.iter().rev().copied().collect();
            let s2 = self
                .common_intersection(&cv)
                .first()
                .copied()
                .or_else(|| self.scan_stop(&cv, &rev));
            if let Some(g) = s2 {
                self.place(g, Role::S2, Some(z));
                placed.push((Role::S2, g));
            }
        }
        (false, placed)
    }

    /// Runs rounds until every target of the region is marked.
    pub fn guard_weak_region(&mut self) -> Result<(), GuardError> {
        while let Some(z) = self.select_primary() {
            let (mut placed, ovv_plus) = self.place_inside_guards(z);
            let inf = self.info[&z].clone();
            let mut record = PrimaryRecord {
                z,
                chord: inf.chord,
                window: self.chords[inf.chord].window,
                entry: self.chords[inf.chord].chord.clone(),
                sets: inf.sets.clone(),
                ovv_plus,
                ovv_minus: Vec::new(),
                a_set: Vec::new(),
                b_set: Vec::new(),
                c_set: Vec::new(),
                case1: false,
                placed: Vec::new(),
            };
            if !inf.sets.vvp_minus.is_empty() {
                let ovv = self.overlap_set_minus(z);
                let (a, b, c) = self.abc_partition(z, &ovv)?;
                let (case1, outside) = self.place_outside_guards(z, &a, &b, &c);
                placed.extend(outside);
                record.ovv_minus = ovv.iter().map(|&x| self.member(x)).collect();
                record.a_set = a;
                record.b_set = b;
                record.c_set = c;
                record.case1 = case1;
            }
            record.placed = placed;
            self.outcome.records.push(record);
            if !self.marks[z] {
                return Err(GuardError::NonTermination(format!("{}", self.targets[z].point)));
            }
        }
        Ok(())
    }

    fn all_guards(&self) -> Vec<usize> {
        self.prior
            .iter()
            .chain(&self.outcome.guards.guards)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Uncovered pieces of the chord's window, given the current guards.
    pub fn residual_pieces(&self, chord: usize, cuts: &mut HashMap<usize, Vec<(Point, Point)>>) -> Vec<ConvexPiece> {
        let guards = self.all_guards();
        let ring = self.host.vertices();
        let mut segs = Vec::new();
        for &g in &guards {
            let e = cuts.entry(g).or_insert_with(|| {
                ring_point_region(ring, &ring[g], g)
                    .gaps
                    .into_iter()
                    .map(|gap| (gap.pa, gap.pb))
                    .collect()
            });
            segs.extend(e.iter().cloned());
        }
        let pieces: Vec<ConvexPiece> = self.chords[chord]
            .region
            .triangles()
            .iter()
            .map(|[a, b, c]| ConvexPiece::from_triangle(a, b, c))
            .collect();
        refine_pieces(pieces, &segs)
            .into_iter()
            .filter(|pc| {
                let w = pc.centroid();
                !guards.iter().any(|&g| self.host.visible(&ring[g], &w))
            })
            .collect()
    }

    /// Adds `p(u,w)` or `p(v,w)` for a point `w` of each uncovered piece until
    /// every window of the region is covered.
    pub fn repair_residual_cells(&mut self) -> Result<(), GuardError> {
        let mut cuts = HashMap::new();
        for ci in 0..self.chords.len() {
            loop {
                let open = self.residual_pieces(ci, &mut cuts);
                let Some(first) = open.first() else {
                    break;
                };
                let w = first.centroid();
                let c = &self.chords[ci];
                let pu = self.sleeves.parent_of(&c.u, &w)?;
                let pv = self.sleeves.parent_of(&c.v, &w)?;
                let cands: Vec<usize> = [Self::node_vertex(pu.0, &c.chord.u), Self::node_vertex(pv.0, &c.chord.v)]
                    .into_iter()
                    .flatten()
                    .filter(|&g| !self.prior.contains(&g) && !self.outcome.guards.guards.contains(&g))
                    .collect();
                let centroids: Vec<Point> = open.iter().map(ConvexPiece::centroid).collect();
                let seen = |g: usize| {
                    centroids
                        .iter()
                        .filter(|q| self.host.visible(self.host.vertex(g), q))
                        .count()
                };
                let Some(g) = cands.iter().copied().max_by_key(|&g| (seen(g), std::cmp::Reverse(g))) else {
                    return Err(GuardError::IrreparableCell(Box::new(w)));
                };
                self.place(g, Role::Repair, None);
                self.outcome.repair_guards += 1;
            }
        }
        Ok(())
    }

    /// Guards every target of the region, then repairs interior cells when
    /// the mode asks for it.
    pub fn run(mut self) -> Result<RegionOutcome, GuardError> {
        self.guard_weak_region()?;
        if self.mode == Mode::Interior {
            self.repair_residual_cells()?;
        }
        Ok(self.outcome)
    }
}

fn deepest_window(tree: &PartitionTree, p: &Point) -> usize {
    tree.levels
        .iter()
        .rev()
        .flatten()
        .copied()
        .find(|&w| tree.windows[w].region.locate(p) != Location::Outside)
        .unwrap_or(0)
}

/// One target per host vertex, assigned to the deepest window holding it.
pub fn vertex_targets(host: &Polygon, tree: &PartitionTree) -> Vec<Target> {
    (0..host.n())
        .map(|i| {
            let label = BoundaryPoint::Vertex(i);
            let window = tree
                .levels
                .iter()
                .rev()
                .flatten()
                .copied()
                .find(|&w| tree.windows[w].region.labels.contains(&label))
                .unwrap_or_else(|| deepest_window(tree, host.vertex(i)));
            Target {
                point: host.vertex(i).clone(),
                label,
                vertex: Some(i),
                window,
            }
        })
        .collect()
}

/// Splits every edge at the ends of the interval each vertex sees and at the
/// given boundary points; returns `(edge, lo, hi)` per piece.
pub fn minimal_visible_intervals(host: &Polygon, extra: &[BoundaryPoint]) -> Vec<(usize, Rational, Rational)> {
    let ring = host.vertices();
    let n = host.n();
    let mut cuts: Vec<Vec<Rational>> = vec![vec![Rational::zero(), Rational::one()]; n];
    for g in 0..n {
        for (e, iv) in point_edge_intervals(ring, &ring[g]).into_iter().enumerate() {
            if let Some((lo, hi)) = iv {
                cuts[e].push(lo);
                cuts[e].push(hi);
            }
        }
    }
    for l in extra {
        if let BoundaryPoint::OnEdge { edge, point } = l {
            let (a, b) = host.edge(*edge);
            cuts[*edge].push(param_on(a, b, point));
        }
    }
    let mut out = Vec::new();
    for (e, mut c) in cuts.into_iter().enumerate() {
        c.sort();
        c.dedup();
        for pair in c.windows(2) {
            out.push((e, pair[0].clone(), pair[1].clone()));
        }
    }
    out
}

/// Midpoints of the minimal visible intervals, as `(edge, point)`.
pub fn pseudo_vertices(host: &Polygon, extra: &[BoundaryPoint]) -> Vec<(usize, Point)> {
    minimal_visible_intervals(host, extra)
        .into_iter()
        .map(|(e, lo, hi)| {
            let (a, b) = host.edge(e);
            (e, a.lerp(b, &((lo + hi) * half())))
        })
        .collect()
}

/// Pseudo-vertex targets, with window corners as extra split points.
pub fn pseudo_vertex_targets(host: &Polygon, tree: &PartitionTree) -> Vec<Target> {
    let corners: Vec<BoundaryPoint> = tree
        .windows
        .iter()
        .flat_map(|w| w.region.labels.iter().cloned())
        .collect();
    pseudo_vertices(host, &corners)
        .into_iter()
        .map(|(edge, point)| Target {
            label: BoundaryPoint::OnEdge {
                edge,
                point: point.clone(),
            },
            window: deepest_window(tree, &point),
            point,
            vertex: None,
        })
        .collect()
}

/// Targets for a mode: vertices, plus pseudo-vertices unless only vertices
/// have to be seen.
pub fn targets_for(host: &Polygon, tree: &PartitionTree, mode: Mode) -> Vec<Target> {
    let mut t = vertex_targets(host, tree);
    if mode != Mode::Vertices {
        t.extend(pseudo_vertex_targets(host, tree));
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_kernel::rat;
    use crate::partition::window_partition;

    fn poly(c: &[(i64, i64)]) -> Polygon {
        Polygon::validate(c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    /// Room above a floor of spikes; the chord `y = 0` joins the side walls.
    fn spiked_room() -> (Polygon, Chord) {
        let p = poly(&[
            (0, -20),
            (0, 20),
            (3, 8),
            (6, 11),
            (10, 19),
            (12, 11),
            (16, 10),
            (19, 11),
            (22, 9),
            (26, 8),
            (30, 15),
            (33, 17),
            (35, 11),
            (40, 20),
            (40, -20),
            (34, -20),
            (34, -4),
            (32, -20),
            (25, -20),
            (25, -16),
            (23, -20),
            (17, -20),
            (16, -18),
            (15, -20),
            (8, -20),
            (7, -6),
            (6, -20),
        ]);
        let u = p.boundary_point(0, &Point::from_ints(0, 0));
        let v = p.boundary_point(13, &Point::from_ints(40, 0));
        (p, Chord { u, v })
    }

    fn upper_targets(p: &Polygon) -> Vec<Target> {
        (0..p.n())
            .filter(|&i| *p.vertex(i).y() > rat(0))
            .map(|i| Target {
                point: p.vertex(i).clone(),
                label: BoundaryPoint::Vertex(i),
                vertex: Some(i),
                window: 0,
            })
            .collect()
    }

    fn run_room(mode: Mode) -> (Polygon, Chord, Vec<Target>, Vec<bool>, RegionOutcome) {
        let (p, chord) = spiked_room();
        let sleeves = Sleeves::new(&p);
        let targets = upper_targets(&p);
        let mut marks = vec![false; targets.len()];
        let (upper, _) = p.split_by_chord(&chord).unwrap();
        let rc = RunChord {
            u: p.point(&chord.u),
            v: p.point(&chord.v),
            chord: chord.clone(),
            window: 0,
            region: upper,
        };
        let ctx = GuardContext::new(
            &p,
            &sleeves,
            &targets,
            &mut marks,
            vec![rc],
            mode,
            Options::default(),
            BTreeSet::new(),
        )
        .unwrap();
        let out = ctx.run().unwrap();
        (p, chord, targets, marks, out)
    }

    #[test]
    fn spiked_room_classifies_a_and_c() {
        let (p, chord, targets, marks, out) = run_room(Mode::Vertices);
        assert!(marks.iter().all(|&m| m));
        let a: usize = out.records.iter().map(|r| r.a_set.len()).sum();
        let c: usize = out.records.iter().map(|r| r.c_set.len()).sum();
        assert!(a >= 1 && c >= 1, "{a} {c}");
        assert!(out.guards.len() <= 6 * out.records.len());
        let from = p.pos(&chord.u);
        let key = |bp: &BoundaryPoint| p.ccw_key(&from, &p.pos(bp));
        for r in &out.records {
            assert!(r.b_set.contains(&r.z));
            let Some(l) = r.sets.l else { continue };
            for &b in &r.b_set {
                assert!(p.visible(p.vertex(l), &targets[b].point));
            }
            let (kf, kl, klp) = (
                key(&BoundaryPoint::Vertex(r.sets.f.unwrap())),
                key(&BoundaryPoint::Vertex(l)),
                key(&r.sets.l_prime),
            );
            assert!(kf <= kl && kl <= klp);
            for x in &r.a_set {
                assert!(!x.by_side);
                let kt = key(&BoundaryPoint::Vertex(x.t));
                assert!(kf <= kt && kt <= klp);
            }
            for x in &r.c_set {
                assert!(!x.by_side);
                assert!(key(&x.t_prime) <= klp);
            }
        }
    }

    #[test]
    fn primary_has_earliest_l_prime() {
        let (p, chord) = spiked_room();
        let sleeves = Sleeves::new(&p);
        let targets = upper_targets(&p);
        let mut marks = vec![false; targets.len()];
        let rc = RunChord {
            u: p.point(&chord.u),
            v: p.point(&chord.v),
            chord: chord.clone(),
            window: 0,
            region: p.ring(),
        };
        let ctx = GuardContext::new(
            &p,
            &sleeves,
            &targets,
            &mut marks,
            vec![rc],
            Mode::Vertices,
            Options::default(),
            BTreeSet::new(),
        )
        .unwrap();
        let z = ctx.select_primary().unwrap();
        let from = p.pos(&chord.u);
        let lp = |t: usize| p.ccw_key(&from, &p.pos(&ctx.info[&t].sets.l_prime));
        assert!((0..targets.len()).all(|t| lp(z) <= lp(t)));
    }

    #[test]
    fn interval_counts() {
        let convex = poly(&[(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]);
        assert_eq!(minimal_visible_intervals(&convex, &[]).len(), 5);
        let ell = poly(&[(0, 0), (0, 4), (2, 4), (2, 2), (4, 2), (4, 0)]);
        assert_eq!(minimal_visible_intervals(&ell, &[]).len(), 8);
        assert!(pseudo_vertices(&ell, &[]).iter().all(|(e, q)| {
            let (a, b) = ell.edge(*e);
            crate::geom_kernel::strictly_inside_segment(a, b, q)
        }));
    }

    #[test]
    fn repair_covers_child_windows_from_scratch() {
        let p = crate::io::generate_polygon(20, 0, crate::io::Style::Spiral).unwrap();
        let tree = window_partition(&p, 0);
        let sleeves = Sleeves::new(&p);
        let w = tree.levels[1][0];
        let win = &tree.windows[w];
        let chord = win.entry_chord.clone().unwrap();
        let rc = RunChord {
            u: p.point(&chord.u),
            v: p.point(&chord.v),
            chord,
            window: w,
            region: win.region.clone(),
        };
        // every target pre-marked: only the repair loop places guards
        let targets = vertex_targets(&p, &tree);
        let mut marks = vec![true; targets.len()];
        let ctx = GuardContext::new(
            &p,
            &sleeves,
            &targets,
            &mut marks,
            vec![rc],
            Mode::Interior,
            Options::default(),
            BTreeSet::new(),
        )
        .unwrap();
        let out = ctx.run().unwrap();
        assert!(out.records.is_empty());
        assert!(out.repair_guards >= 1);
        assert_eq!(out.repair_guards, out.guards.len());
        let guards = out.guards.as_vec();
        for q in crate::properties::window_samples(&tree, w, 30) {
            assert!(guards.iter().any(|&g| p.visible(p.vertex(g), &q)), "{q}");
        }
    }

    #[test]
    fn skip_s3_leaves_no_s3() {
        let (p, chord) = spiked_room();
        let sleeves = Sleeves::new(&p);
        let targets = upper_targets(&p);
        let mut marks = vec![false; targets.len()];
        let rc = RunChord {
            u: p.point(&chord.u),
            v: p.point(&chord.v),
            chord,
            window: 0,
            region: p.ring(),
        };
        let opts = Options { skip_s3: true };
        let ctx = GuardContext::new(
            &p,
            &sleeves,
            &targets,
            &mut marks,
            vec![rc],
            Mode::Vertices,
            opts,
            BTreeSet::new(),
        )
        .unwrap();
        if let Ok(out) = ctx.run() {
            assert!(out.guards.placements.iter().all(|pl| pl.role != Role::S3));
        }
    }
}
