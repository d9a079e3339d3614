use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};

use super::CutError;
use crate::model::{edge_index, Edge};
use crate::rational::{fmt_rat, parse_rat, to_f64, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    Sec,
    Rci,
    Sri,
    AggregatedSri,
    ProjectedSri,
    ProjectedAggregatedSri,
    SetCut,
    PartialRouteCut,
    PathCut,
    RouteCut,
}

impl CutKind {
    pub fn label(self) -> &'static str {
        match self {
            CutKind::Sec => "SEC",
            CutKind::Rci => "RCI",
            CutKind::Sri => "SRI",
            CutKind::AggregatedSri => "AGG_SRI",
            CutKind::ProjectedSri => "PROJ_SRI",
            CutKind::ProjectedAggregatedSri => "PROJ_AGG_SRI",
            CutKind::SetCut => "SET",
            CutKind::PartialRouteCut => "PARTIAL_ROUTE",
            CutKind::PathCut => "PATH",
            CutKind::RouteCut => "ROUTE",
        }
    }

    const ALL: [CutKind; 10] = [
        CutKind::Sec,
        CutKind::Rci,
        CutKind::Sri,
        CutKind::AggregatedSri,
        CutKind::ProjectedSri,
        CutKind::ProjectedAggregatedSri,
        CutKind::SetCut,
        CutKind::PartialRouteCut,
        CutKind::PathCut,
        CutKind::RouteCut,
    ];
}

impl FromStr for CutKind {
    type Err = CutError;

    fn from_str(s: &str) -> Result<Self, CutError> {
        CutKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| CutError::Parse(format!("unknown cut kind {s:?}")))
    }
}

/// Affine function of `x`: `constant + Σ_e coeff_e x_e`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffineForm {
    pub constant: Rat,
    pub x: BTreeMap<Edge, Rat>,
}

impl AffineForm {
    pub fn constant(c: Rat) -> Self {
        AffineForm { constant: c, x: BTreeMap::new() }
    }

    pub fn add_edge(&mut self, e: Edge, coef: &Rat) {
        let entry = self.x.entry(e).or_insert_with(Rat::zero);
        *entry += coef;
        if entry.is_zero() {
            self.x.remove(&e);
        }
    }

    /// Adds `coef · x(E(set))`.
    pub fn add_inner(&mut self, set: &[usize], coef: &Rat) {
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                self.add_edge(Edge::new(a, b), coef);
            }
        }
    }

    /// Adds `coef · x(E(left, right))`.
    pub fn add_cross(&mut self, left: &[usize], right: &[usize], coef: &Rat) {
        for &a in left {
            for &b in right {
                self.add_edge(Edge::new(a, b), coef);
            }
        }
    }

    pub fn scaled(&self, factor: &Rat) -> AffineForm {
        let mut out = AffineForm::constant(&self.constant * factor);
        if !factor.is_zero() {
            out.x = self.x.iter().map(|(e, c)| (*e, c * factor)).collect();
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        to_f64(&self.constant) + self.x.iter().map(|(e, c)| to_f64(c) * x[e.index()]).sum::<f64>()
    }

    pub fn eval_exact(&self, x: &[u8]) -> Rat {
        let mut v = self.constant.clone();
        for (e, c) in &self.x {
            v += c * Rat::from_integer(x[e.index()].into());
        }
        v
    }
}

/// Linear inequality `Σ θ-terms + Σ x-terms + Σ y-terms ≥ rhs`.
///
/// `y` is keyed by `(scenario, customer)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCut {
    pub kind: CutKind,
    pub support: Vec<usize>,
    pub theta: BTreeMap<usize, Rat>,
    pub x: BTreeMap<Edge, Rat>,
    pub y: BTreeMap<(usize, usize), Rat>,
    pub rhs: Rat,
}

/// A point `(x, θ, y)` in floating point; θ and y are vertex-indexed.
#[derive(Debug, Clone, Copy)]
pub struct Point<'a> {
    pub x: &'a [f64],
    pub theta: &'a [f64],
    pub y: Option<&'a [Vec<f64>]>,
}

impl LinearCut {
    pub fn new(kind: CutKind, support: Vec<usize>) -> Self {
        LinearCut {
            kind,
            support,
            theta: BTreeMap::new(),
            x: BTreeMap::new(),
            y: BTreeMap::new(),
            rhs: Rat::zero(),
        }
    }

    /// `Σ_{v∈S} θ_v ≥ L · W(x)`.
    pub fn theta_bound(kind: CutKind, set: &[usize], lower: &Rat, activation: &AffineForm) -> Self {
        let mut cut = LinearCut::new(kind, sorted(set));
        for &v in set {
            cut.theta.insert(v, Rat::from_integer(1.into()));
        }
        for (e, c) in &activation.x {
            let coef = -(lower * c);
            if !coef.is_zero() {
                cut.x.insert(*e, coef);
            }
        }
        cut.rhs = lower * &activation.constant;
        cut
    }

    /// `x(E(S)) ≤ |S| − k`, stored as `−x(E(S)) ≥ k − |S|`.
    pub fn capacity(kind: CutKind, set: &[usize], vehicles: i64) -> Self {
        let mut cut = LinearCut::new(kind, sorted(set));
        let minus_one = Rat::from_integer((-1).into());
        let mut form = AffineForm::default();
        form.add_inner(set, &minus_one);
        cut.x = form.x;
        cut.rhs = Rat::from_integer((vehicles - set.len() as i64).into());
        cut
    }

    pub fn lhs(&self, p: Point<'_>) -> f64 {
        let mut v: f64 = self.theta.iter().map(|(&k, c)| to_f64(c) * p.theta[k]).sum();
        v += self.x.iter().map(|(e, c)| to_f64(c) * p.x[e.index()]).sum::<f64>();
        if let Some(y) = p.y {
            v += self.y.iter().map(|(&(s, k), c)| to_f64(c) * y[s][k]).sum::<f64>();
        }
        v
    }

    /// `rhs − lhs`; positive when the point violates the cut.
    pub fn violation(&self, p: Point<'_>) -> f64 {
        to_f64(&self.rhs) - self.lhs(p)
    }

    /// Exact check at an integer `x` with rational θ and integer `y`.
    pub fn holds_exact(&self, x: &[u8], theta: &[Rat], y: Option<&[Vec<i64>]>) -> bool {
        let mut lhs = Rat::zero();
        for (&v, c) in &self.theta {
            lhs += c * &theta[v];
        }
        for (e, c) in &self.x {
            lhs += c * Rat::from_integer(x[edge_index(e.u, e.v)].into());
        }
        for (&(s, v), c) in &self.y {
            let val = y.map_or(0, |y| y[s][v]);
            lhs += c * Rat::from_integer(val.into());
        }
        lhs >= self.rhs
    }

    pub fn involves_recourse(&self) -> bool {
        !self.theta.is_empty() || !self.y.is_empty()
    }

    pub fn is_vacuous(&self) -> bool {
        self.theta.is_empty() && self.x.is_empty() && self.y.is_empty() && !self.rhs.is_positive()
    }
}

fn sorted(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s
}

/// `KIND; v1 v2 …; theta[v]=c x[u,v]=c y[s,v]=c …; rhs`
impl fmt::Display for LinearCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support.iter().map(|v| v.to_string()).collect();
        let mut terms: Vec<String> = Vec::new();
        terms.extend(self.theta.iter().map(|(v, c)| format!("theta[{v}]={}", fmt_rat(c))));
        terms.extend(self.x.iter().map(|(e, c)| format!("x[{},{}]={}", e.u, e.v, fmt_rat(c))));
        terms.extend(self.y.iter().map(|((s, v), c)| format!("y[{s},{v}]={}", fmt_rat(c))));
        write!(f, "{}; {}; {}; {}", self.kind.label(), support.join(" "), terms.join(" "), fmt_rat(&self.rhs))
    }
}

impl FromStr for LinearCut {
    type Err = CutError;

    fn from_str(line: &str) -> Result<Self, CutError> {
        let bad = |m: &str| CutError::Parse(format!("{m}: {line:?}"));
        let parts: Vec<&str> = line.split(';').map(str::trim).collect();
        let [kind, support, terms, rhs] = parts[..] else {
            return Err(bad("expected four ';'-separated fields"));
        };
        let mut cut = LinearCut::new(kind.parse()?, Vec::new());
        for tok in support.split_whitespace() {
            cut.support.push(tok.parse().map_err(|_| bad("support"))?);
        }
        for term in terms.split_whitespace() {
            let (name, value) = term.split_once('=').ok_or_else(|| bad("term"))?;
            let value = parse_rat(value).ok_or_else(|| bad("coefficient"))?;
            let (var, idx) = name.trim_end_matches(']').split_once('[').ok_or_else(|| bad("term name"))?;
            let nums: Vec<usize> =
                idx.split(',').map(|t| t.parse().map_err(|_| bad("index"))).collect::<Result<_, _>>()?;
            match (var, &nums[..]) {
                ("theta", [v]) => {
                    cut.theta.insert(*v, value);
                }
                ("x", [u, v]) if u != v => {
                    cut.x.insert(Edge::new(*u, *v), value);
                }
                ("y", [s, v]) => {
                    cut.y.insert((*s, *v), value);
                }
                _ => return Err(bad("unknown variable")),
            }
        }
        cut.rhs = parse_rat(rhs).ok_or_else(|| bad("rhs"))?;
        Ok(cut)
    }
}
