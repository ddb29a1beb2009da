//! Euclidean shortest paths inside a polygon: triangulate, walk the dual
//! tree to get the sleeve, then run the funnel with exact orientation tests.

use std::collections::{HashMap, VecDeque};

use crate::error::PolygonError;
use crate::geom_kernel::{orient, Location, Orientation, Point};
use crate::polygon::{BoundaryPoint, Polygon};

/// A path node: the tree root or a polygon vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathNode {
    Root,
    Vertex(usize),
}

#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub root: Point,
    pub root_label: Option<BoundaryPoint>,
    /// `parent[x]` is `p(s, x)`; a vertex equal to the root has parent `Root`.
    pub parent: Vec<PathNode>,
    /// Floating approximation of each geodesic length.
    pub length: Vec<f64>,
}

impl ShortestPathTree {
    pub fn parent_point(&self, p: &Polygon, x: usize) -> Point {
        match self.parent[x] {
            PathNode::Root => self.root.clone(),
            PathNode::Vertex(i) => p.vertex(i).clone(),
        }
    }

    /// Nodes from `x` (exclusive) up to the root (inclusive).
    pub fn path(&self, x: usize) -> Vec<PathNode> {
        let mut out = Vec::new();
        let mut cur = x;
        for _ in 0..=self.parent.len() {
            let p = self.parent[cur];
            out.push(p);
            match p {
                PathNode::Root => return out,
                PathNode::Vertex(i) if i == cur => return out,
                PathNode::Vertex(i) => cur = i,
            }
        }
        panic!("shortest path tree has a cycle");
    }
}

/// A triangulated polygon ready for geodesic queries.
#[derive(Clone, Debug)]
pub struct Sleeves {
    pts: Vec<Point>,
    tris: Vec<[usize; 3]>,
    adj: Vec<[Option<usize>; 3]>,
}

#[derive(Clone, Debug)]
struct FPt {
    p: Point,
    idx: Option<usize>,
}

impl Sleeves {
    pub fn new(poly: &Polygon) -> Self {
        let tris = poly.triangulate();
        let mut by_edge: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut adj = vec![[None; 3]; tris.len()];
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                if let Some(&(t2, k2)) = by_edge.get(&key) {
                    adj[t][k] = Some(t2);
                    adj[t2][k2] = Some(t);
                } else {
                    by_edge.insert(key, (t, k));
                }
            }
        }
        Sleeves {
            pts: poly.vertices().to_vec(),
            tris,
            adj,
        }
    }

    fn tri_contains(&self, t: usize, p: &Point) -> bool {
        let [a, b, c] = self.tris[t].map(|i| &self.pts[i]);
        // clockwise triangle: inside points are never to the left of an edge
        orient(a, b, p) != Orientation::CounterClockwise
            && orient(b, c, p) != Orientation::CounterClockwise
            && orient(c, a, p) != Orientation::CounterClockwise
    }

    fn locate(&self, p: &Point) -> Option<usize> {
        (0..self.tris.len()).find(|&t| self.tri_contains(t, p))
    }

    /// Dual-tree parents of a BFS from `start`.
    fn bfs(&self, start: usize) -> Vec<Option<usize>> {
        let mut par = vec![None; self.tris.len()];
        let mut seen = vec![false; self.tris.len()];
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(t) = q.pop_front() {
            for &nb in self.adj[t].iter().flatten() {
                if !seen[nb] {
                    seen[nb] = true;
                    par[nb] = Some(t);
                    q.push_back(nb);
                }
            }
        }
        par
    }

    fn sleeve(&self, par: &[Option<usize>], target: usize) -> Vec<usize> {
        let mut chain = vec![target];
        let mut cur = target;
        while let Some(p) = par[cur] {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    /// Funnel over the triangle chain, with the chain trimmed so that no
    /// portal contains an endpoint.
    fn funnel(&self, s: &Point, t: &Point, chain: &[usize]) -> Vec<FPt> {
        let last_s = chain.iter().rposition(|&c| self.tri_contains(c, s)).unwrap_or(0);
        let first_t = chain[last_s..]
            .iter()
            .position(|&c| self.tri_contains(c, t))
            .map(|k| k + last_s)
            .unwrap_or(chain.len() - 1);
        let chain = &chain[last_s..=first_t];
        let start = FPt {
            p: s.clone(),
            idx: None,
        };
        let end = FPt {
            p: t.clone(),
            idx: None,
        };
        // portals as (left, right) seen walking along the chain
        let mut portals: Vec<(FPt, FPt)> = vec![(start.clone(), start.clone())];
        for w in chain.windows(2) {
            let (ta, tb) = (&self.tris[w[0]], &self.tris[w[1]]);
            let shared: Vec<usize> = ta.iter().copied().filter(|i| tb.contains(i)).collect();
            let third = ta.iter().copied().find(|i| !tb.contains(i)).unwrap();
            let (p, q) = (shared[0], shared[1]);
            let mk = |i: usize| FPt {
                p: self.pts[i].clone(),
                idx: Some(i),
            };
            if orient(&self.pts[third], &self.pts[p], &self.pts[q]) == Orientation::CounterClockwise {
                portals.push((mk(q), mk(p)));
            } else {
                portals.push((mk(p), mk(q)));
            }
        }
        portals.push((end.clone(), end.clone()));

        let cross = |a: &Point, b: &Point, c: &Point| orient(a, b, c).sign();
        let mut path = vec![start.clone()];
        let (mut apex, mut left, mut right) = (start.clone(), start.clone(), start);
        let (mut left_i, mut right_i) = (0usize, 0usize);
        let mut i = 1;
        while i < portals.len() {
            let (l, r) = &portals[i];
            if cross(&apex.p, &right.p, &r.p) >= 0 {
                if apex.p == right.p || cross(&apex.p, &left.p, &r.p) < 0 {
                    right = r.clone();
                    right_i = i;
                } else {
                    path.push(left.clone());
                    apex = left.clone();
                    right = apex.clone();
                    right_i = left_i;
                    i = left_i + 1;
                    continue;
                }
            }
            if cross(&apex.p, &left.p, &l.p) <= 0 {
                if apex.p == left.p || cross(&apex.p, &right.p, &l.p) > 0 {
                    left = l.clone();
                    left_i = i;
                } else {
                    path.push(right.clone());
                    apex = right.clone();
                    left = apex.clone();
                    left_i = right_i;
                    i = right_i + 1;
                    continue;
                }
            }
            i += 1;
        }
        if path.last().unwrap().p != end.p {
            path.push(end);
        }
        drop_straight(path)
    }

    /// Geodesic from `s` to `t` as a list of points, both ends included.
    pub fn geodesic(&self, s: &Point, t: &Point) -> Result<Vec<Point>, PolygonError> {
        let ts = self
            .locate(s)
            .ok_or_else(|| PolygonError::PointOutside(Box::new(s.clone())))?;
        let tt = self
            .locate(t)
            .ok_or_else(|| PolygonError::PointOutside(Box::new(t.clone())))?;
        if s == t {
            return Ok(vec![s.clone()]);
        }
        let par = self.bfs(ts);
        let chain = self.sleeve(&par, tt);
        Ok(self.funnel(s, t, &chain).into_iter().map(|f| f.p).collect())
    }

    /// The node preceding `t` on the geodesic from `s`.
    pub fn parent_of(&self, s: &Point, t: &Point) -> Result<(PathNode, Point), PolygonError> {
        let ts = self
            .locate(s)
            .ok_or_else(|| PolygonError::PointOutside(Box::new(s.clone())))?;
        let tt = self
            .locate(t)
            .ok_or_else(|| PolygonError::PointOutside(Box::new(t.clone())))?;
        if s == t {
            return Ok((PathNode::Root, s.clone()));
        }
        let par = self.bfs(ts);
        let chain = self.sleeve(&par, tt);
        let path = self.funnel(s, t, &chain);
        let prev = &path[path.len() - 2];
        Ok(match prev.idx {
            Some(i) => (PathNode::Vertex(i), prev.p.clone()),
            None => (PathNode::Root, prev.p.clone()),
        })
    }

    pub fn tree(&self, poly: &Polygon, s: &Point) -> Result<ShortestPathTree, PolygonError> {
        let ts = self
            .locate(s)
            .ok_or_else(|| PolygonError::PointOutside(Box::new(s.clone())))?;
        let par = self.bfs(ts);
        let n = self.pts.len();
        let mut parent = Vec::with_capacity(n);
        let mut length = Vec::with_capacity(n);
        for x in 0..n {
            let target = &self.pts[x];
            if target == s {
                parent.push(PathNode::Root);
                length.push(0.0);
                continue;
            }
            let tt = (0..self.tris.len())
                .find(|&t| self.tris[t].contains(&x))
                .expect("every vertex belongs to a triangle");
            let chain = self.sleeve(&par, tt);
            let path = self.funnel(s, target, &chain);
            let prev = &path[path.len() - 2];
            parent.push(match prev.idx {
                Some(i) => PathNode::Vertex(i),
                None => PathNode::Root,
            });
            length.push(path_length(&path.iter().map(|f| f.p.clone()).collect::<Vec<_>>()));
        }
        Ok(ShortestPathTree {
            root: s.clone(),
            root_label: poly.find_boundary_point(s),
            parent,
            length,
        })
    }
}

fn drop_straight(mut path: Vec<FPt>) -> Vec<FPt> {
    let mut k = 1;
    while k + 1 < path.len() {
        if orient(&path[k - 1].p, &path[k].p, &path[k + 1].p) == Orientation::Collinear {
            path.remove(k);
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    path
}

pub fn path_length(path: &[Point]) -> f64 {
    path.windows(2)
        .map(|w| {
            let (ax, ay) = w[0].approx();
            let (bx, by) = w[1].approx();
            (ax - bx).hypot(ay - by)
        })
        .sum()
}

pub fn shortest_path_tree(poly: &Polygon, s: &Point) -> Result<ShortestPathTree, PolygonError> {
    if poly.locate(s) == Location::Outside {
        return Err(PolygonError::PointOutside(Box::new(s.clone())));
    }
    Sleeves::new(poly).tree(poly, s)
}
