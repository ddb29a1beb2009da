//! End-to-end guarding: partition, then place guards level by level from the
//! deepest parent windows up, then the start vertex.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::error::GuardError;
use crate::guard_placement::{targets_for, GuardContext, GuardSet, Options, PrimaryRecord, Role, RunChord, Target};
use crate::oracle::verify_coverage;
use crate::partition::{window_partition, PartitionTree};
use crate::polygon::{BoundaryPoint, Polygon};
use crate::shortest_paths::Sleeves;
use crate::Mode;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    pub start_vertex: usize,
    pub guard: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    /// Level of the parent windows processed.
    pub level: usize,
    pub windows: usize,
    pub primaries: usize,
    /// Guards placed at this level, counted with repetition across regions.
    pub guards: usize,
}

/// Guard counts of one region run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionBudget {
    pub window: usize,
    pub primaries: usize,
    pub before_repair: usize,
    pub after_repair: usize,
}

/// A guard lying in no window within one level of the parent window whose
/// run placed it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityViolation {
    pub guard: usize,
    pub run_level: usize,
    pub guard_levels: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub mode: Mode,
    pub start_vertex: usize,
    pub tree: PartitionTree,
    pub targets: Vec<Target>,
    pub guard_set: GuardSet,
    pub records: Vec<PrimaryRecord>,
    pub per_level: Vec<LevelStats>,
    pub budgets: Vec<RegionBudget>,
    pub locality: Vec<LocalityViolation>,
    pub covered: bool,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn guards(&self) -> Vec<usize> {
        self.guard_set.as_vec()
    }

    pub fn primaries(&self) -> usize {
        self.records.len()
    }

    /// Distinct guards other than the start vertex, before and after repair.
    pub fn budget_counts(&self) -> (usize, usize) {
        let mut before = BTreeSet::new();
        let mut after = BTreeSet::new();
        for pl in &self.guard_set.placements {
            match pl.role {
                Role::Start => {}
                Role::Repair => {
                    after.insert(pl.guard);
                }
                _ => {
                    before.insert(pl.guard);
                    after.insert(pl.guard);
                }
            }
        }
        (before.len(), after.len())
    }
}

/// Levels of the windows whose boundary holds vertex `g`.
pub fn vertex_levels(tree: &PartitionTree, g: usize) -> Vec<usize> {
    let label = BoundaryPoint::Vertex(g);
    let mut out: Vec<usize> = tree
        .windows
        .iter()
        .filter(|w| w.region.labels.contains(&label))
        .map(|w| w.level())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn guard_polygon(p: &Polygon, mode: Mode, opts: PipelineOptions) -> Result<RunReport, GuardError> {
    let clock = Instant::now();
    let tree = window_partition(p, opts.start_vertex);
    let sleeves = Sleeves::new(p);
    let targets = targets_for(p, &tree, mode);
    let mut marks = vec![false; targets.len()];
    let mut guard_set = GuardSet::default();
    let mut records = Vec::new();
    let mut per_level = Vec::new();
    let mut budgets = Vec::new();
    let mut locality = Vec::new();
    for li in (0..tree.depth().saturating_sub(1)).rev() {
        let mut stats = LevelStats {
            level: li + 1,
            windows: 0,
            primaries: 0,
            guards: 0,
        };
        for &w in &tree.levels[li] {
            let win = &tree.windows[w];
            if win.children.is_empty() {
                continue;
            }
            let chords = win
                .children
                .iter()
                .map(|&c| {
                    let cw = &tree.windows[c];
                    let chord = cw.entry_chord.clone().expect("child windows have an entry chord");
                    RunChord {
                        u: p.point(&chord.u),
                        v: p.point(&chord.v),
                        chord,
                        window: c,
                        region: cw.region.clone(),
                    }
                })
                .collect();
            let ctx = GuardContext::new(
                p,
                &sleeves,
                &targets,
                &mut marks,
                chords,
                mode,
                opts.guard,
                guard_set.guards.clone(),
            )?;
            let out = ctx.run()?;
            let distinct = out.guards.guards.len();
            budgets.push(RegionBudget {
                window: w,
                primaries: out.records.len(),
                before_repair: distinct - out.repair_guards.min(distinct),
                after_repair: distinct,
            });
            for pl in &out.guards.placements {
                let levels = vertex_levels(&tree, pl.guard);
                if !levels.iter().any(|l| (li..=li + 2).contains(l)) {
                    locality.push(LocalityViolation {
                        guard: pl.guard,
                        run_level: li + 1,
                        guard_levels: levels,
                    });
                }
            }
            stats.windows += 1;
            stats.primaries += out.records.len();
            stats.guards += out.guards.placements.len();
            records.extend(out.records);
            guard_set.extend(out.guards);
        }
        per_level.push(stats);
    }
    guard_set.add(opts.start_vertex, Role::Start, None);
    let covered = verify_coverage(p, &guard_set.as_vec(), mode).covered;
    Ok(RunReport {
        mode,
        start_vertex: opts.start_vertex,
        tree,
        targets,
        guard_set,
        records,
        per_level,
        budgets,
        locality,
        covered,
        elapsed: clock.elapsed(),
    })
}

/// Drops guards, latest placement first, while coverage in `mode` holds.
pub fn prune_redundant(p: &Polygon, guards: &[usize], mode: Mode) -> Vec<usize> {
    let mut keep: Vec<usize> = guards.to_vec();
    for &g in guards.iter().rev() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&x| x != g).collect();
        if !trial.is_empty() && verify_coverage(p, &trial, mode).covered {
            keep = trial;
        }
    }
    keep.sort_unstable();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_kernel::Point;
    use crate::io::{generate_polygon, Style};

    fn poly(c: &[(i64, i64)]) -> Polygon {
        Polygon::validate(c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn convex_gets_start_vertex_only() {
        let p = poly(&[(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]);
        for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
            let r = guard_polygon(&p, mode, PipelineOptions::default()).unwrap();
            assert_eq!(r.guards(), vec![0]);
            assert!(r.covered);
        }
    }

    #[test]
    fn notch_and_spiral_are_covered() {
        let notch = poly(&[(0, 0), (0, 10), (4, 10), (4, 6), (6, 6), (6, 10), (10, 10), (10, 0)]);
        let spiral = generate_polygon(20, 0, Style::Spiral).unwrap();
        for p in [&notch, &spiral] {
            for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
                let r = guard_polygon(
                    p,
                    mode,
                    PipelineOptions {
                        start_vertex: 1,
                        ..Default::default()
                    },
                )
                .unwrap();
                assert!(r.covered, "{mode:?} {:?}", r.guards());
                let (before, after) = r.budget_counts();
                assert!(before <= 6 * r.primaries());
                assert!(after <= 9 * r.primaries().max(1));
                assert!(r.locality.is_empty(), "{:?}", r.locality);
            }
        }
    }

    #[test]
    fn pruning_keeps_coverage() {
        let p = generate_polygon(20, 0, Style::Spiral).unwrap();
        let r = guard_polygon(&p, Mode::Boundary, PipelineOptions::default()).unwrap();
        let pruned = prune_redundant(&p, &r.guards(), Mode::Boundary);
        assert!(pruned.len() <= r.guards().len());
        assert!(verify_coverage(&p, &pruned, Mode::Boundary).covered);
    }
}
