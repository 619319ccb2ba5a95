//! The exact-3-SAT temporal gadget in the plane.
//!
//! Each variable is a rigid pair `x_i, ¬x_i` at distance `r0/2`. Gadget `i`
//! rests on the x-axis with its midpoint at `i · (ρ r0/2 + r0/2)`, so facing
//! ends of neighbouring gadgets are exactly `ρ r0/2` apart. For every clause
//! the three gadgets are rotated in place and moved, one at a time, so that
//! the clause literals meet at a staging point `Q` below the axis and the
//! unused literals sit at 90°, 210° and 330° on the circle of radius `r0/2`
//! about `Q`. An extra point then travels from `Q` straight down (away from
//! the 90° literal) for `ρ r0` and back, and the assembly is undone.
//!
//! Every motion is split into equal steps strictly shorter than `δ0`.
//! Coordinates are snapped to a `1e-9` grid and identical coordinates share
//! a point id, so the literals meeting at `Q` form a single point.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::generators::dimacs::{Cnf3, Literal};
use crate::instance::TemporalSampling;
use crate::metric::{FiniteMetric, PointId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GadgetParams {
    pub r0: f64,
    pub delta0: f64,
    pub rho: f64,
}

impl GadgetParams {
    pub fn new(r0: f64, delta0: f64, rho: f64) -> Result<Self> {
        let params = GadgetParams { r0, delta0, rho };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let GadgetParams { r0, delta0, rho } = *self;
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
        }
        if !(delta0 > 0.0 && delta0 < r0 * 3f64.sqrt() / 4.0) {
            return Err(Error::InvalidParameter(format!(
                "delta0 must lie in (0, r0·√3/4) = (0, {}), got {delta0}",
                r0 * 3f64.sqrt() / 4.0
            )));
        }
        if !(rho.is_finite() && rho >= 1.0) {
            return Err(Error::InvalidParameter(format!("rho must be at least 1, got {rho}")));
        }
        Ok(())
    }
}

/// Level ranges of the three phases of one clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClausePhases {
    pub assembly: Range<usize>,
    pub check: Range<usize>,
    pub disassembly: Range<usize>,
}

#[derive(Clone, Debug)]
pub struct Sat3Instance {
    pub sampling: TemporalSampling,
    /// Number of clusters the reduction targets: one per variable.
    pub k: usize,
    /// `literals[level][var] = (x_var, ¬x_var)`.
    pub literals: Vec<Vec<(PointId, PointId)>>,
    /// The moving extra point, on check-phase levels.
    pub extra: Vec<Option<PointId>>,
    pub clauses: Vec<ClausePhases>,
}

type Pt = [f64; 2];

fn dir(angle: f64) -> Pt {
    [angle.cos(), angle.sin()]
}

fn add(a: Pt, b: Pt, s: f64) -> Pt {
    [a[0] + s * b[0], a[1] + s * b[1]]
}

fn lerp(a: Pt, b: Pt, j: usize, m: usize) -> Pt {
    if j == m {
        return b;
    }
    let s = j as f64 / m as f64;
    [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
}

fn norm(a: Pt, b: Pt) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Wraps an angle into `(-π, π]`.
fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

#[derive(Clone, Copy, Debug)]
struct Gadget {
    mid: Pt,
    phi: f64,
}

impl Gadget {
    /// `(x, ¬x)` for a pair of length `h`.
    fn ends(self, h: f64) -> (Pt, Pt) {
        let e = dir(self.phi);
        (add(self.mid, e, -h / 2.0), add(self.mid, e, h / 2.0))
    }
}

struct Builder {
    delta0: f64,
    h: f64,
    index: HashMap<(i64, i64), PointId>,
    coords: Vec<Vec<f64>>,
    levels: Vec<Vec<PointId>>,
    literals: Vec<Vec<(PointId, PointId)>>,
    extra: Vec<Option<PointId>>,
}

const GRID: f64 = 1e9;

impl Builder {
    fn point(&mut self, p: Pt) -> PointId {
        let key = ((p[0] * GRID).round() as i64, (p[1] * GRID).round() as i64);
        *self.index.entry(key).or_insert_with(|| {
            self.coords
                .push(vec![key.0 as f64 / GRID, key.1 as f64 / GRID]);
            PointId(self.coords.len() - 1)
        })
    }

    fn emit(&mut self, gadgets: &[Gadget], extra: Option<Pt>) {
        let mut level = Vec::with_capacity(2 * gadgets.len() + 1);
        let mut lits = Vec::with_capacity(gadgets.len());
        for g in gadgets {
            let (a, b) = g.ends(self.h);
            let (a, b) = (self.point(a), self.point(b));
            lits.push((a, b));
            for q in [a, b] {
                if !level.contains(&q) {
                    level.push(q);
                }
            }
        }
        let extra = extra.map(|e| self.point(e));
        if let Some(e) = extra {
            if !level.contains(&e) {
                level.push(e);
            }
        }
        self.levels.push(level);
        self.literals.push(lits);
        self.extra.push(extra);
    }

    /// Equal steps strictly shorter than `δ0` covering `length`.
    fn step_count(&self, length: f64) -> usize {
        (length / self.delta0 + 1e-6).floor() as usize + 1
    }

    /// Frames of gadget `v` rotating to `phi` and then following `waypoints`.
    fn move_gadget(&self, gadgets: &mut [Gadget], v: usize, phi: f64, waypoints: &[Pt]) -> Vec<Vec<Gadget>> {
        let mut frames = Vec::new();
        let start = gadgets[v].phi;
        let turn = wrap(phi - start);
        if turn != 0.0 {
            let m = self.step_count(turn.abs() * self.h / 2.0);
            for j in 1..=m {
                gadgets[v].phi = if j == m {
                    phi
                } else {
                    start + turn * j as f64 / m as f64
                };
                frames.push(gadgets.to_vec());
            }
        }
        for &target in waypoints {
            let from = gadgets[v].mid;
            let length = norm(from, target);
            if length == 0.0 {
                continue;
            }
            let m = self.step_count(length);
            for j in 1..=m {
                gadgets[v].mid = lerp(from, target, j, m);
                frames.push(gadgets.to_vec());
            }
        }
        frames
    }
}

pub fn gen_sat3(cnf: &Cnf3, params: GadgetParams) -> Result<Sat3Instance> {
    params.validate()?;
    let l = cnf.num_vars();
    if l == 0 {
        return Err(Error::Cnf("formula has no variables".into()));
    }
    let GadgetParams { r0, delta0, rho } = params;
    let h = r0 / 2.0;
    let sep = rho * r0 / 2.0;
    let pitch = sep + h;
    let home: Vec<Gadget> = (0..l)
        .map(|i| Gadget {
            mid: [i as f64 * pitch, 0.0],
            phi: 0.0,
        })
        .collect();

    let mut b = Builder {
        delta0,
        h,
        index: HashMap::new(),
        coords: Vec::new(),
        levels: Vec::new(),
        literals: Vec::new(),
        extra: Vec::new(),
    };
    b.emit(&home, None);

    let mut phases = Vec::with_capacity(cnf.clauses().len());
    for clause in cnf.clauses() {
        let mut lits: Vec<Literal> = clause.to_vec();
        lits.sort_by_key(|lit| lit.var);
        let (left, middle, right) = (lits[0], lits[1], lits[2]);
        let q: Pt = [home[middle.var].mid[0], -(sep + 2.0 * h)];

        let mut gadgets = home.clone();
        let mut frames: Vec<Vec<Gadget>> = Vec::new();
        // The middle literal drops straight down; the outer two drop to their
        // ray through Q and then slide along it.
        for (lit, angle) in [
            (middle, PI / 2.0),
            (left, 7.0 * PI / 6.0),
            (right, -PI / 6.0),
        ] {
            let e = dir(angle);
            let phi = wrap(if lit.positive { angle } else { angle + PI });
            let target = add(q, e, h / 2.0);
            let x = home[lit.var].mid[0];
            let waypoints = if lit.var == middle.var {
                vec![target]
            } else {
                let s = (x - q[0]) / e[0];
                vec![add(q, e, s), target]
            };
            frames.extend(b.move_gadget(&mut gadgets, lit.var, phi, &waypoints));
        }

        let first = b.levels.len();
        for f in &frames {
            b.emit(f, None);
        }
        let assembled = b.levels.len();

        let m = b.step_count(rho * r0);
        let bottom = add(q, [0.0, -1.0], rho * r0);
        for j in (0..=m).chain((0..m).rev()) {
            b.emit(&gadgets, Some(lerp(q, bottom, j, m)));
        }
        let checked = b.levels.len();

        for f in frames.iter().rev().skip(1) {
            b.emit(f, None);
        }
        b.emit(&home, None);
        phases.push(ClausePhases {
            assembly: first..assembled,
            check: assembled..checked,
            disassembly: checked..b.levels.len(),
        });
    }

    let metric = FiniteMetric::euclidean(2, b.coords)?;
    let sampling = TemporalSampling::new(metric, b.levels)?;
    Ok(Sat3Instance {
        sampling,
        k: l,
        literals: b.literals,
        extra: b.extra,
        clauses: phases,
    })
}
