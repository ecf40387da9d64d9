//! Pseudo-equivalence relations on finite carriers.
//!
//! A [`Setoid`] has a finite point set `X0` and a possibly infinite witness
//! set `X1` with source, target, reflexivity, symmetry and transitivity
//! operations and no axioms. Witnesses are symbolic [`Wit`] values, so free
//! setoids (whose witnesses are zigzag words) are handled without
//! enumerating `X1`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::verdict::Verdict;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SetoidError {
    #[error("{setoid}: {equation} fails at {at}")]
    Equation { setoid: String, equation: String, at: String },
    #[error("{0}")]
    Malformed(String),
    #[error("relation is not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("morphism representative {name}: {detail}")]
    Morphism { name: String, detail: String },
    #[error("setoids do not match: {0}")]
    Mismatch(String),
    #[error("witness of equality fails at point {0}")]
    BadWitness(usize),
}

/// A witness in some setoid's `X1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wit {
    /// An element of a tabular `X1`.
    Tab(usize),
    /// A related pair of a relational setoid.
    Rel(usize, usize),
    /// A zigzag word in a free setoid.
    Word(Word),
    /// A family of component witnesses between two points of a joint setoid.
    Joint { src: usize, dst: usize, parts: Vec<Wit> },
    /// A witness in summand `k` of a sum.
    Inj(usize, Box<Wit>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub start: usize,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub gen: Gen,
    pub forward: bool,
}

/// A generating witness of a free setoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub src: usize,
    pub dst: usize,
    pub label: GenLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenLabel {
    /// Edge `k` of an explicit edge list.
    Edge(usize),
    /// A colimit generator `(α, x, ξ)`: `x` in the source setoid of `α`
    /// and `ξ` a witness in the target setoid starting at `X_α(x)`.
    Cocone { arrow: usize, point: usize, wit: Box<Wit> },
}

impl Step {
    pub fn from(&self) -> usize {
        if self.forward { self.gen.src } else { self.gen.dst }
    }

    pub fn to(&self) -> usize {
        if self.forward { self.gen.dst } else { self.gen.src }
    }
}

impl Word {
    pub fn empty(at: usize) -> Self {
        Word { start: at, steps: vec![] }
    }

    pub fn single(gen: Gen) -> Self {
        Word { start: gen.src, steps: vec![Step { gen, forward: true }] }
    }

    pub fn end(&self) -> usize {
        self.steps.last().map(|s| s.to()).unwrap_or(self.start)
    }

    pub fn reversed(&self) -> Word {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Step { gen: s.gen.clone(), forward: !s.forward })
            .collect();
        Word { start: self.end(), steps }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Word { start: self.start, steps }
    }
}

impl fmt::Display for Wit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wit::Tab(i) => write!(f, "w{}", i),
            Wit::Rel(a, b) => write!(f, "({},{})", a, b),
            Wit::Word(w) => {
                write!(f, "[{}", w.start)?;
                for s in &w.steps {
                    write!(f, "{}{}", if s.forward { ">" } else { "<" }, s.to())?;
                }
                write!(f, "]")
            }
            Wit::Joint { src, dst, parts } => {
                write!(f, "{}~{}{{", src, dst)?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", p)?;
                }
                write!(f, "}}")
            }
            Wit::Inj(k, w) => write!(f, "in{}({})", k, w),
        }
    }
}

/// The generating graph of a free setoid.
pub trait GeneratorSet: Send + Sync {
    fn n_points(&self) -> usize;

    /// Whether `g` is one of the generators.
    fn contains(&self, g: &Gen) -> bool;

    /// Generators incident to `p` (as source or target), enough to witness
    /// every adjacency in the generating graph.
    fn canonical_at(&self, p: usize) -> Vec<Gen>;

    /// Every generator, when there are finitely many.
    fn all(&self) -> Option<Vec<Gen>>;

    fn describe(&self) -> String {
        "generators".into()
    }
}

/// An explicit finite edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn gen(&self, k: usize) -> Gen {
        Gen { src: self.edges[k].0, dst: self.edges[k].1, label: GenLabel::Edge(k) }
    }
}

impl GeneratorSet for EdgeList {
    fn n_points(&self) -> usize {
        self.n
    }

    fn contains(&self, g: &Gen) -> bool {
        match g.label {
            GenLabel::Edge(k) => k < self.edges.len() && self.edges[k] == (g.src, g.dst),
            _ => false,
        }
    }

    fn canonical_at(&self, p: usize) -> Vec<Gen> {
        (0..self.edges.len())
            .filter(|&k| self.edges[k].0 == p || self.edges[k].1 == p)
            .map(|k| self.gen(k))
            .collect()
    }

    fn all(&self) -> Option<Vec<Gen>> {
        Some((0..self.edges.len()).map(|k| self.gen(k)).collect())
    }

    fn describe(&self) -> String {
        format!("{} edges", self.edges.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tabular {
    pub n0: usize,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub r: Vec<usize>,
    pub v: Vec<usize>,
    pub m: HashMap<(usize, usize), usize>,
}

pub struct Free {
    n: usize,
    gens: Arc<dyn GeneratorSet>,
    adj: OnceLock<Vec<Vec<Step>>>,
}

/// Points are tuples of component points plus extra witness coordinates;
/// witnesses between two points are families of component witnesses.
#[derive(Clone, Debug)]
pub struct Joint {
    pub comps: Vec<Setoid>,
    pub coords: Vec<Vec<usize>>,
    pub extra: Vec<Vec<Wit>>,
    index: HashMap<(Vec<usize>, Vec<Wit>), usize>,
}

#[derive(Clone, Debug)]
pub struct Sum {
    pub summands: Vec<Setoid>,
    pub offsets: Vec<usize>,
}

enum Repr {
    Tabular(Tabular),
    Relational { n: usize, pairs: HashSet<(usize, usize)> },
    Free(Free),
    Joint(Joint),
    Sum(Sum),
}

struct Inner {
    name: String,
    repr: Repr,
}

/// A pseudo-equivalence relation. Cheap to clone.
#[derive(Clone)]
pub struct Setoid(Arc<Inner>);

impl fmt::Debug for Setoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Setoid({}, |X0|={}, {})", self.0.name, self.size0(), self.kind())
    }
}

impl fmt::Debug for Free {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Free({} points, {})", self.n, self.gens.describe())
    }
}

pub const DEFAULT_CAP: usize = 4;
const VALIDATION_CAP: usize = 3;
const JOINT_POOL_LIMIT: usize = 16;

impl Setoid {
    fn wrap(name: impl Into<String>, repr: Repr) -> Self {
        Setoid(Arc::new(Inner { name: name.into(), repr }))
    }

    /// A tabular setoid; every structure equation is checked.
    pub fn tabular(name: impl Into<String>, tab: Tabular) -> Result<Self, SetoidError> {
        let name = name.into();
        check_tabular(&name, &tab)?;
        Ok(Self::wrap(name, Repr::Tabular(tab)))
    }

    /// The discrete setoid: only reflexivity witnesses.
    pub fn discrete(name: impl Into<String>, n: usize) -> Self {
        Self::wrap(name, Repr::Relational { n, pairs: (0..n).map(|x| (x, x)).collect() })
    }

    /// The full relation on `n` points.
    pub fn full(name: impl Into<String>, n: usize) -> Self {
        let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
        Self::wrap(name, Repr::Relational { n, pairs })
    }

    pub fn terminal() -> Self {
        Self::discrete("TERM", 1)
    }

    pub fn empty() -> Self {
        Self::discrete("EMPTY", 0)
    }

    pub fn free_on(name: impl Into<String>, gens: Arc<dyn GeneratorSet>) -> Self {
        let n = gens.n_points();
        Self::wrap(name, Repr::Free(Free { n, gens, adj: OnceLock::new() }))
    }

    /// Points given by component coordinates and extra witness coordinates.
    pub fn joint(
        name: impl Into<String>,
        comps: Vec<Setoid>,
        coords: Vec<Vec<usize>>,
        extra: Vec<Vec<Wit>>,
    ) -> Self {
        let index = coords.iter().cloned().zip(extra.iter().cloned()).enumerate().map(|(i, k)| (k, i)).collect();
        Self::wrap(name, Repr::Joint(Joint { comps, coords, extra, index }))
    }

    /// Binary product.
    pub fn product(x: &Setoid, y: &Setoid) -> Self {
        let mut coords = Vec::new();
        for a in 0..x.size0() {
            for b in 0..y.size0() {
                coords.push(vec![a, b]);
            }
        }
        let extra = vec![vec![]; coords.len()];
        Self::joint(format!("{}x{}", x.name(), y.name()), vec![x.clone(), y.clone()], coords, extra)
    }

    /// Product of a family; points in lexicographic order.
    pub fn product_of(name: impl Into<String>, fs: &[Setoid]) -> Self {
        let mut coords = vec![vec![]];
        for f in fs {
            let mut next = Vec::new();
            for c in &coords {
                for p in 0..f.size0() {
                    let mut c2 = c.clone();
                    c2.push(p);
                    next.push(c2);
                }
            }
            coords = next;
        }
        let extra = vec![vec![]; coords.len()];
        Self::joint(name, fs.to_vec(), coords, extra)
    }

    pub fn sum(name: impl Into<String>, summands: Vec<Setoid>) -> Self {
        let mut offsets = Vec::with_capacity(summands.len() + 1);
        let mut acc = 0;
        for s in &summands {
            offsets.push(acc);
            acc += s.size0();
        }
        offsets.push(acc);
        Self::wrap(name, Repr::Sum(Sum { summands, offsets }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Setoid {
        let repr = match &self.0.repr {
            Repr::Tabular(t) => Repr::Tabular(t.clone()),
            Repr::Relational { n, pairs } => Repr::Relational { n: *n, pairs: pairs.clone() },
            Repr::Free(f) => Repr::Free(Free { n: f.n, gens: f.gens.clone(), adj: OnceLock::new() }),
            Repr::Joint(j) => Repr::Joint(j.clone()),
            Repr::Sum(s) => Repr::Sum(s.clone()),
        };
        Self::wrap(name, repr)
    }

    pub fn kind(&self) -> &'static str {
        match &self.0.repr {
            Repr::Tabular(_) => "tabular",
            Repr::Relational { .. } => "relational",
            Repr::Free(_) => "free",
            Repr::Joint(_) => "joint",
            Repr::Sum(_) => "sum",
        }
    }

    pub fn as_tabular(&self) -> Option<&Tabular> {
        match &self.0.repr {
            Repr::Tabular(t) => Some(t),
            _ => None,
        }
    }

    pub fn relation(&self) -> Option<Vec<(usize, usize)>> {
        match &self.0.repr {
            Repr::Relational { pairs, .. } => {
                let mut v: Vec<_> = pairs.iter().copied().collect();
                v.sort();
                Some(v)
            }
            _ => None,
        }
    }

    pub fn edges(&self) -> Option<EdgeList> {
        match &self.0.repr {
            Repr::Free(f) => {
                let gens = f.gens.all()?;
                if gens.iter().all(|g| matches!(g.label, GenLabel::Edge(_))) {
                    let mut edges = vec![(0, 0); gens.len()];
                    for g in gens {
                        if let GenLabel::Edge(k) = g.label {
                            edges[k] = (g.src, g.dst);
                        }
                    }
                    Some(EdgeList { n: f.n, edges })
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn as_joint(&self) -> Option<&Joint> {
        match &self.0.repr {
            Repr::Joint(j) => Some(j),
            _ => None,
        }
    }

    pub fn as_sum(&self) -> Option<&Sum> {
        match &self.0.repr {
            Repr::Sum(s) => Some(s),
            _ => None,
        }
    }

    pub fn generators(&self) -> Option<&Arc<dyn GeneratorSet>> {
        match &self.0.repr {
            Repr::Free(f) => Some(&f.gens),
            _ => None,
        }
    }

    /// Identity of the underlying object, or structural equality for the
    /// finitely presented representations.
    pub fn same(&self, other: &Setoid) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.repr, &other.0.repr) {
            (Repr::Tabular(a), Repr::Tabular(b)) => a == b,
            (Repr::Relational { n: n1, pairs: p1 }, Repr::Relational { n: n2, pairs: p2 }) => n1 == n2 && p1 == p2,
            (Repr::Free(a), Repr::Free(b)) => {
                Arc::ptr_eq(&a.gens, &b.gens) || (self.edges().is_some() && self.edges() == other.edges())
            }
            (Repr::Joint(a), Repr::Joint(b)) => {
                a.comps.len() == b.comps.len()
                    && a.comps.iter().zip(&b.comps).all(|(x, y)| x.same(y))
                    && a.coords == b.coords
                    && a.extra == b.extra
            }
            (Repr::Sum(a), Repr::Sum(b)) => {
                a.summands.len() == b.summands.len() && a.summands.iter().zip(&b.summands).all(|(x, y)| x.same(y))
            }
            _ => false,
        }
    }

    pub fn size0(&self) -> usize {
        match &self.0.repr {
            Repr::Tabular(t) => t.n0,
            Repr::Relational { n, .. } => *n,
            Repr::Free(f) => f.n,
            Repr::Joint(j) => j.coords.len(),
            Repr::Sum(s) => *s.offsets.last().unwrap(),
        }
    }

    pub fn s(&self, w: &Wit) -> usize {
        match (&self.0.repr, w) {
            (Repr::Tabular(t), Wit::Tab(i)) => t.s[*i],
            (Repr::Relational { .. }, Wit::Rel(a, _)) => *a,
            (Repr::Free(_), Wit::Word(w)) => w.start,
            (Repr::Joint(_), Wit::Joint { src, .. }) => *src,
            (Repr::Sum(s), Wit::Inj(k, w)) => s.offsets[*k] + s.summands[*k].s(w),
            _ => panic!("{}: witness {} has the wrong representation", self.name(), w),
        }
    }

    pub fn t(&self, w: &Wit) -> usize {
        match (&self.0.repr, w) {
            (Repr::Tabular(t), Wit::Tab(i)) => t.t[*i],
            (Repr::Relational { .. }, Wit::Rel(_, b)) => *b,
            (Repr::Free(_), Wit::Word(w)) => w.end(),
            (Repr::Joint(_), Wit::Joint { dst, .. }) => *dst,
            (Repr::Sum(s), Wit::Inj(k, w)) => s.offsets[*k] + s.summands[*k].t(w),
            _ => panic!("{}: witness {} has the wrong representation", self.name(), w),
        }
    }

    pub fn r(&self, x: usize) -> Wit {
        match &self.0.repr {
            Repr::Tabular(t) => Wit::Tab(t.r[x]),
            Repr::Relational { .. } => Wit::Rel(x, x),
            Repr::Free(_) => Wit::Word(Word::empty(x)),
            Repr::Joint(j) => Wit::Joint {
                src: x,
                dst: x,
                parts: j.comps.iter().zip(&j.coords[x]).map(|(c, &p)| c.r(p)).collect(),
            },
            Repr::Sum(s) => {
                let (k, y) = s.locate(x);
                Wit::Inj(k, Box::new(s.summands[k].r(y)))
            }
        }
    }

    pub fn v(&self, w: &Wit) -> Wit {
        match (&self.0.repr, w) {
            (Repr::Tabular(t), Wit::Tab(i)) => Wit::Tab(t.v[*i]),
            (Repr::Relational { .. }, Wit::Rel(a, b)) => Wit::Rel(*b, *a),
            (Repr::Free(_), Wit::Word(w)) => Wit::Word(w.reversed()),
            (Repr::Joint(j), Wit::Joint { src, dst, parts }) => Wit::Joint {
                src: *dst,
                dst: *src,
                parts: j.comps.iter().zip(parts).map(|(c, p)| c.v(p)).collect(),
            },
            (Repr::Sum(s), Wit::Inj(k, w)) => Wit::Inj(*k, Box::new(s.summands[*k].v(w))),
            _ => panic!("{}: witness {} has the wrong representation", self.name(), w),
        }
    }

    /// Transitivity. Panics unless `t(a) = s(b)`.
    pub fn m(&self, a: &Wit, b: &Wit) -> Wit {
        self.try_m(a, b).unwrap_or_else(|| panic!("{}: witnesses {} and {} are not composable", self.name(), a, b))
    }

    pub fn try_m(&self, a: &Wit, b: &Wit) -> Option<Wit> {
        if self.t(a) != self.s(b) {
            return None;
        }
        Some(match (&self.0.repr, a, b) {
            (Repr::Tabular(t), Wit::Tab(i), Wit::Tab(j)) => Wit::Tab(t.m[&(*i, *j)]),
            (Repr::Relational { .. }, Wit::Rel(x, _), Wit::Rel(_, z)) => Wit::Rel(*x, *z),
            (Repr::Free(_), Wit::Word(u), Wit::Word(w)) => Wit::Word(u.concat(w)),
            (Repr::Joint(j), Wit::Joint { src, parts: p, .. }, Wit::Joint { dst, parts: q, .. }) => Wit::Joint {
                src: *src,
                dst: *dst,
                parts: j.comps.iter().zip(p.iter().zip(q)).map(|(c, (x, y))| c.m(x, y)).collect(),
            },
            (Repr::Sum(s), Wit::Inj(k, u), Wit::Inj(l, w)) if k == l => {
                Wit::Inj(*k, Box::new(s.summands[*k].m(u, w)))
            }
            _ => return None,
        })
    }

    /// Left-associated composite of a nonempty chain.
    pub fn m_chain(&self, ws: &[Wit]) -> Wit {
        let mut acc = ws[0].clone();
        for w in &ws[1..] {
            acc = self.m(&acc, w);
        }
        acc
    }

    /// Whether `w` is a well-formed element of `X1`.
    pub fn is_witness(&self, w: &Wit) -> bool {
        match (&self.0.repr, w) {
            (Repr::Tabular(t), Wit::Tab(i)) => *i < t.s.len(),
            (Repr::Relational { pairs, .. }, Wit::Rel(a, b)) => pairs.contains(&(*a, *b)),
            (Repr::Free(f), Wit::Word(word)) => {
                if word.start >= f.n {
                    return false;
                }
                let mut at = word.start;
                for st in &word.steps {
                    if st.from() != at || !f.gens.contains(&st.gen) {
                        return false;
                    }
                    at = st.to();
                }
                true
            }
            (Repr::Joint(j), Wit::Joint { src, dst, parts }) => {
                *src < j.coords.len()
                    && *dst < j.coords.len()
                    && parts.len() == j.comps.len()
                    && j.comps.iter().enumerate().all(|(k, c)| {
                        c.is_witness(&parts[k]) && c.s(&parts[k]) == j.coords[*src][k] && c.t(&parts[k]) == j.coords[*dst][k]
                    })
            }
            (Repr::Sum(s), Wit::Inj(k, w)) => *k < s.summands.len() && s.summands[*k].is_witness(w),
            _ => false,
        }
    }

    /// Whether `X1` is finite.
    pub fn x1_finite(&self) -> bool {
        match &self.0.repr {
            Repr::Tabular(_) | Repr::Relational { .. } => true,
            Repr::Free(f) => f.adjacency().iter().all(|a| a.is_empty()),
            Repr::Joint(j) => j.coords.is_empty() || j.comps.iter().all(|c| c.x1_finite()),
            Repr::Sum(s) => s.summands.iter().all(|c| c.x1_finite()),
        }
    }

    /// Some witness from `x` to `y`, if one exists.
    pub fn related(&self, x: usize, y: usize) -> Option<Wit> {
        if x == y {
            return Some(self.r(x));
        }
        match &self.0.repr {
            Repr::Tabular(t) => (0..t.s.len()).find(|&i| t.s[i] == x && t.t[i] == y).map(Wit::Tab),
            Repr::Relational { pairs, .. } => pairs.contains(&(x, y)).then_some(Wit::Rel(x, y)),
            Repr::Free(f) => f.search(x, y).map(Wit::Word),
            Repr::Joint(j) => {
                let parts: Option<Vec<Wit>> = j
                    .comps
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.related(j.coords[x][k], j.coords[y][k]))
                    .collect();
                parts.map(|parts| Wit::Joint { src: x, dst: y, parts })
            }
            Repr::Sum(s) => {
                let (k, a) = s.locate(x);
                let (l, b) = s.locate(y);
                if k != l {
                    return None;
                }
                s.summands[k].related(a, b).map(|w| Wit::Inj(k, Box::new(w)))
            }
        }
    }

    /// All witnesses when `X1` is finite; otherwise words of length at most
    /// `cap` (and products of such) as a finite sample.
    pub fn witness_pool(&self, cap: usize) -> Vec<Wit> {
        match &self.0.repr {
            Repr::Tabular(t) => (0..t.s.len()).map(Wit::Tab).collect(),
            Repr::Relational { pairs, .. } => {
                let mut v: Vec<_> = pairs.iter().map(|&(a, b)| Wit::Rel(a, b)).collect();
                v.sort();
                v
            }
            Repr::Free(f) => (0..f.n).flat_map(|p| f.words_from(p, cap)).collect(),
            Repr::Joint(_) => {
                let mut out = Vec::new();
                for x in 0..self.size0() {
                    for y in 0..self.size0() {
                        out.extend(self.witnesses_between(x, y, cap));
                    }
                }
                out
            }
            Repr::Sum(s) => s
                .summands
                .iter()
                .enumerate()
                .flat_map(|(k, c)| c.witness_pool(cap).into_iter().map(move |w| Wit::Inj(k, Box::new(w))))
                .collect(),
        }
    }

    /// Pool witnesses from `x` to `y`.
    pub fn witnesses_between(&self, x: usize, y: usize, cap: usize) -> Vec<Wit> {
        match &self.0.repr {
            Repr::Tabular(t) => (0..t.s.len()).filter(|&i| t.s[i] == x && t.t[i] == y).map(Wit::Tab).collect(),
            Repr::Relational { pairs, .. } => {
                if pairs.contains(&(x, y)) {
                    vec![Wit::Rel(x, y)]
                } else {
                    vec![]
                }
            }
            Repr::Free(f) => f.words_from(x, cap).into_iter().filter(|w| self.t(w) == y).collect(),
            Repr::Joint(j) => {
                let mut acc: Vec<Vec<Wit>> = vec![vec![]];
                for (k, c) in j.comps.iter().enumerate() {
                    let opts = c.witnesses_between(j.coords[x][k], j.coords[y][k], cap);
                    let mut next = Vec::new();
                    for a in &acc {
                        for o in &opts {
                            if next.len() >= JOINT_POOL_LIMIT {
                                break;
                            }
                            let mut a2 = a.clone();
                            a2.push(o.clone());
                            next.push(a2);
                        }
                    }
                    acc = next;
                }
                acc.into_iter().map(|parts| Wit::Joint { src: x, dst: y, parts }).collect()
            }
            Repr::Sum(s) => {
                let (k, a) = s.locate(x);
                let (l, b) = s.locate(y);
                if k != l {
                    return vec![];
                }
                s.summands[k].witnesses_between(a, b, cap).into_iter().map(|w| Wit::Inj(k, Box::new(w))).collect()
            }
        }
    }

    /// Witness choices used when enumerating data indexed by witnesses from
    /// `x` to `y`: all of them when `X1` is finite, else a single canonical one.
    pub fn witness_choices(&self, x: usize, y: usize) -> Vec<Wit> {
        if self.x1_finite() {
            self.witnesses_between(x, y, 0)
        } else {
            self.related(x, y).into_iter().collect()
        }
    }

    /// Point of a joint setoid with the given coordinates.
    pub fn joint_point(&self, coords: &[usize], extra: &[Wit]) -> Option<usize> {
        match &self.0.repr {
            Repr::Joint(j) => j.index.get(&(coords.to_vec(), extra.to_vec())).copied(),
            _ => None,
        }
    }

    /// Quotient by the equivalence relation generated by the witnesses.
    pub fn quotient(&self) -> Quotient {
        let n = self.size0();
        let mut uf = UnionFind::<usize>::new(n);
        match &self.0.repr {
            Repr::Tabular(t) => {
                for i in 0..t.s.len() {
                    uf.union(t.s[i], t.t[i]);
                }
            }
            Repr::Relational { pairs, .. } => {
                for &(a, b) in pairs {
                    uf.union(a, b);
                }
            }
            Repr::Free(f) => {
                for (p, steps) in f.adjacency().iter().enumerate() {
                    for st in steps {
                        uf.union(p, st.to());
                    }
                }
            }
            Repr::Joint(j) => {
                let qs: Vec<Quotient> = j.comps.iter().map(|c| c.quotient()).collect();
                let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
                for (p, c) in j.coords.iter().enumerate() {
                    let key: Vec<usize> = c.iter().enumerate().map(|(k, &x)| qs[k].class[x]).collect();
                    match seen.get(&key) {
                        Some(&q) => {
                            uf.union(p, q);
                        }
                        None => {
                            seen.insert(key, p);
                        }
                    }
                }
            }
            Repr::Sum(s) => {
                for (k, c) in s.summands.iter().enumerate() {
                    let q = c.quotient();
                    for x in 0..c.size0() {
                        uf.union(s.offsets[k] + x, s.offsets[k] + q.rep[q.class[x]]);
                    }
                }
            }
        }
        Quotient::from_union_find(n, &mut uf)
    }
}

fn check_tabular(name: &str, t: &Tabular) -> Result<(), SetoidError> {
    let eq = |equation: &str, at: String| {
        Err(SetoidError::Equation { setoid: name.to_string(), equation: equation.to_string(), at })
    };
    let k = t.s.len();
    if t.t.len() != k || t.v.len() != k || t.r.len() != t.n0 {
        return Err(SetoidError::Malformed(format!("{}: table lengths disagree", name)));
    }
    if t.s.iter().chain(&t.t).any(|&x| x >= t.n0) || t.r.iter().chain(&t.v).any(|&w| w >= k) {
        return Err(SetoidError::Malformed(format!("{}: table entry out of range", name)));
    }
    for x in 0..t.n0 {
        if t.s[t.r[x]] != x {
            return eq("s r = 1", format!("point {}", x));
        }
        if t.t[t.r[x]] != x {
            return eq("t r = 1", format!("point {}", x));
        }
    }
    for w in 0..k {
        if t.s[t.v[w]] != t.t[w] {
            return eq("s v = t", format!("witness {}", w));
        }
        if t.t[t.v[w]] != t.s[w] {
            return eq("t v = s", format!("witness {}", w));
        }
    }
    for a in 0..k {
        for b in 0..k {
            let composable = t.t[a] == t.s[b];
            match (composable, t.m.get(&(a, b))) {
                (true, None) => return eq("m total on composable pairs", format!("({}, {})", a, b)),
                (false, Some(_)) => return eq("m defined only on composable pairs", format!("({}, {})", a, b)),
                (true, Some(&c)) => {
                    if c >= k {
                        return Err(SetoidError::Malformed(format!("{}: m out of range", name)));
                    }
                    if t.s[c] != t.s[a] {
                        return eq("s m = s π1", format!("({}, {})", a, b));
                    }
                    if t.t[c] != t.t[b] {
                        return eq("t m = t π2", format!("({}, {})", a, b));
                    }
                }
                (false, None) => {}
            }
        }
    }
    Ok(())
}

impl Sum {
    /// Summand index and local point of a global point.
    pub fn locate(&self, x: usize) -> (usize, usize) {
        let k = self.offsets.partition_point(|&o| o <= x) - 1;
        let k = (0..=k).rev().find(|&k| self.summands[k].size0() > x - self.offsets[k]).unwrap_or(k);
        (k, x - self.offsets[k])
    }
}

impl Free {
    fn adjacency(&self) -> &Vec<Vec<Step>> {
        self.adj.get_or_init(|| {
            let mut adj = vec![Vec::new(); self.n];
            for (p, slot) in adj.iter_mut().enumerate() {
                let mut steps = Vec::new();
                for g in self.gens.canonical_at(p) {
                    if g.src == p {
                        steps.push(Step { gen: g.clone(), forward: true });
                    }
                    if g.dst == p {
                        steps.push(Step { gen: g, forward: false });
                    }
                }
                steps.sort();
                steps.dedup();
                *slot = steps;
            }
            adj
        })
    }

    /// Shortest word from `x` to `y`, first in adjacency order.
    fn search(&self, x: usize, y: usize) -> Option<Word> {
        let adj = self.adjacency();
        let mut parent: Vec<Option<(usize, Step)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[x] = true;
        let mut q = VecDeque::from([x]);
        while let Some(p) = q.pop_front() {
            for st in &adj[p] {
                let to = st.to();
                if !seen[to] {
                    seen[to] = true;
                    parent[to] = Some((p, st.clone()));
                    if to == y {
                        let mut steps = Vec::new();
                        let mut at = y;
                        while let Some((prev, st)) = parent[at].clone() {
                            steps.push(st);
                            at = prev;
                        }
                        steps.reverse();
                        return Some(Word { start: x, steps });
                    }
                    q.push_back(to);
                }
            }
        }
        None
    }

    fn pool_adjacency(&self) -> Vec<Vec<Step>> {
        match self.gens.all() {
            Some(all) => {
                let mut adj = vec![Vec::new(); self.n];
                for g in all {
                    adj[g.src].push(Step { gen: g.clone(), forward: true });
                    adj[g.dst].push(Step { gen: g, forward: false });
                }
                for a in adj.iter_mut() {
                    a.sort();
                }
                adj
            }
            None => self.adjacency().clone(),
        }
    }

    fn words_from(&self, p: usize, cap: usize) -> Vec<Wit> {
        let adj = self.pool_adjacency();
        let mut out = vec![Wit::Word(Word::empty(p))];
        let mut frontier = vec![Word::empty(p)];
        for _ in 0..cap {
            let mut next = Vec::new();
            for w in &frontier {
                for st in &adj[w.end()] {
                    let mut w2 = w.clone();
                    w2.steps.push(st.clone());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned().map(Wit::Word));
            frontier = next;
        }
        out
    }
}

/// A partition of `0..n` with classes numbered by least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub size: usize,
    pub class: Vec<usize>,
    /// Least element of each class.
    pub rep: Vec<usize>,
}

impl Quotient {
    pub fn from_union_find(n: usize, uf: &mut UnionFind<usize>) -> Self {
        let mut label = HashMap::new();
        let mut class = Vec::with_capacity(n);
        let mut rep = Vec::new();
        for x in 0..n {
            let root = uf.find(x);
            let next = label.len();
            let c = *label.entry(root).or_insert_with(|| {
                rep.push(x);
                next
            });
            class.push(c);
        }
        Quotient { size: label.len(), class, rep }
    }

    /// The partition as sorted blocks.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut b = vec![Vec::new(); self.size];
        for (x, &c) in self.class.iter().enumerate() {
            b[c].push(x);
        }
        b
    }
}

// ---------------------------------------------------------------------------
// Morphism representatives

pub type Map1 = Arc<dyn Fn(&Wit) -> Wit + Send + Sync>;

#[derive(Clone)]
pub struct MorRep {
    pub dom: Setoid,
    pub cod: Setoid,
    pub f0: Vec<usize>,
    pub f1: Map1,
}

impl fmt::Debug for MorRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MorRep({} → {}, f0 {:?})", self.dom.name(), self.cod.name(), self.f0)
    }
}

impl MorRep {
    pub fn new(dom: Setoid, cod: Setoid, f0: Vec<usize>, f1: Map1) -> Result<Self, SetoidError> {
        let f = Self::new_unchecked(dom, cod, f0, f1);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(dom: Setoid, cod: Setoid, f0: Vec<usize>, f1: Map1) -> Self {
        MorRep { dom, cod, f0, f1 }
    }

    pub fn from_fn(
        dom: Setoid,
        cod: Setoid,
        f0: Vec<usize>,
        f1: impl Fn(&Wit) -> Wit + Send + Sync + 'static,
    ) -> Result<Self, SetoidError> {
        Self::new(dom, cod, f0, Arc::new(f1))
    }

    /// A representative given by an explicit witness table over a finite `X1`.
    pub fn from_table(dom: Setoid, cod: Setoid, f0: Vec<usize>, table: Vec<(Wit, Wit)>) -> Result<Self, SetoidError> {
        let map: HashMap<Wit, Wit> = table.into_iter().collect();
        let name = dom.name().to_string();
        let f1 = move |w: &Wit| match map.get(w) {
            Some(x) => x.clone(),
            None => panic!("witness {} of {} missing from the table", w, name),
        };
        Self::from_fn(dom, cod, f0, f1)
    }

    /// A representative into a setoid whose witnesses can be found by search
    /// (relational, tabular, or any other), choosing `f1` by `related`.
    pub fn by_search(dom: Setoid, cod: Setoid, f0: Vec<usize>) -> Result<Self, SetoidError> {
        let (d, c, g) = (dom.clone(), cod.clone(), f0.clone());
        let f1 = move |w: &Wit| {
            let (a, b) = (g[d.s(w)], g[d.t(w)]);
            c.related(a, b).unwrap_or_else(|| panic!("{} does not relate {} and {}", c.name(), a, b))
        };
        Self::from_fn(dom, cod, f0, f1)
    }

    pub fn identity(x: &Setoid) -> Self {
        Self::new_unchecked(x.clone(), x.clone(), (0..x.size0()).collect(), Arc::new(|w: &Wit| w.clone()))
    }

    pub fn apply(&self, w: &Wit) -> Wit {
        (self.f1)(w)
    }

    /// `f0` preserves relatedness and `f1` lies over `f0 × f0`, on the
    /// validation pool of `X1`.
    pub fn validate(&self) -> Result<(), SetoidError> {
        let err = |detail: String| {
            Err(SetoidError::Morphism { name: format!("{} → {}", self.dom.name(), self.cod.name()), detail })
        };
        if self.f0.len() != self.dom.size0() {
            return err("f0 has the wrong length".into());
        }
        if let Some(x) = self.f0.iter().find(|&&y| y >= self.cod.size0()) {
            return err(format!("f0 value {} out of range", x));
        }
        for w in self.dom.witness_pool(VALIDATION_CAP) {
            let img = self.apply(&w);
            if !self.cod.is_witness(&img) {
                return err(format!("f1({}) = {} is not a witness", w, img));
            }
            if self.cod.s(&img) != self.f0[self.dom.s(&w)] {
                return err(format!("s f1 = f0 s fails at {}", w));
            }
            if self.cod.t(&img) != self.f0[self.dom.t(&w)] {
                return err(format!("t f1 = f0 t fails at {}", w));
            }
        }
        Ok(())
    }

    /// The induced function on quotients.
    pub fn on_quotients(&self) -> (Quotient, Quotient, Vec<usize>) {
        let qd = self.dom.quotient();
        let qc = self.cod.quotient();
        let map = qd.rep.iter().map(|&x| qc.class[self.f0[x]]).collect();
        (qd, qc, map)
    }
}

/// Composite `g ∘ f` of representatives, componentwise.
pub fn compose_mor(f: &MorRep, g: &MorRep) -> Result<MorRep, SetoidError> {
    if !f.cod.same(&g.dom) {
        return Err(SetoidError::Mismatch(format!("{} vs {}", f.cod.name(), g.dom.name())));
    }
    Ok(compose_unchecked(f, g))
}

pub fn compose_unchecked(f: &MorRep, g: &MorRep) -> MorRep {
    let (f1, g1) = (f.f1.clone(), g.f1.clone());
    MorRep::new_unchecked(
        f.dom.clone(),
        g.cod.clone(),
        f.f0.iter().map(|&x| g.f0[x]).collect(),
        Arc::new(move |w: &Wit| g1(&f1(w))),
    )
}

/// A witness of equality `h: X0 → Y1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqWitness {
    pub h: Vec<Wit>,
}

impl EqWitness {
    /// `s h = f0` and `t h = g0`.
    pub fn validate(&self, f: &MorRep, g: &MorRep) -> Result<(), SetoidError> {
        if self.h.len() != f.dom.size0() {
            return Err(SetoidError::Malformed("witness of equality has the wrong length".into()));
        }
        for (x, w) in self.h.iter().enumerate() {
            if !f.cod.is_witness(w) || f.cod.s(w) != f.f0[x] || f.cod.t(w) != g.f0[x] {
                return Err(SetoidError::BadWitness(x));
            }
        }
        Ok(())
    }

    pub fn reflexive(f: &MorRep) -> Self {
        EqWitness { h: f.f0.iter().map(|&y| f.cod.r(y)).collect() }
    }

    pub fn symmetric(&self, cod: &Setoid) -> Self {
        EqWitness { h: self.h.iter().map(|w| cod.v(w)).collect() }
    }

    pub fn transitive(&self, other: &EqWitness, cod: &Setoid) -> Self {
        EqWitness { h: self.h.iter().zip(&other.h).map(|(a, b)| cod.m(a, b)).collect() }
    }
}

/// A witness that `f ∼ g`, assembled pointwise by search.
pub fn equal_mor(f: &MorRep, g: &MorRep) -> Result<Option<EqWitness>, SetoidError> {
    if !f.dom.same(&g.dom) || !f.cod.same(&g.cod) {
        return Err(SetoidError::Mismatch("representatives are not parallel".into()));
    }
    Ok(equal_pointwise(&f.cod, &f.f0, &g.f0))
}

/// Pointwise witnesses `f0 x ∼ g0 x` in `cod`.
pub fn equal_pointwise(cod: &Setoid, f0: &[usize], g0: &[usize]) -> Option<EqWitness> {
    let h: Option<Vec<Wit>> = f0.iter().zip(g0).map(|(&a, &b)| cod.related(a, b)).collect();
    h.map(|h| EqWitness { h })
}

/// An inverse representative with both round-trip witnesses.
#[derive(Clone, Debug)]
pub struct IsoData {
    pub inverse: MorRep,
    /// `g ∘ f ∼ 1` on the domain.
    pub left: EqWitness,
    /// `f ∘ g ∼ 1` on the codomain.
    pub right: EqWitness,
}

/// Invertibility, decided by bijectivity on quotients; when it holds an
/// inverse and both witnesses are constructed by search.
pub fn is_iso(f: &MorRep) -> Verdict<IsoData> {
    let (qd, qc, map) = f.on_quotients();
    let mut hit = vec![false; qc.size];
    for &c in &map {
        if hit[c] {
            return Verdict::fail(format!("not injective on quotients ({} → {})", qd.size, qc.size));
        }
        hit[c] = true;
    }
    if qd.size != qc.size {
        return Verdict::fail(format!("quotient sizes {} and {}", qd.size, qc.size));
    }
    let mut back = vec![0; qc.size];
    for (cd, &cc) in map.iter().enumerate() {
        back[cc] = qd.rep[cd];
    }
    let g0: Vec<usize> = (0..f.cod.size0()).map(|y| back[qc.class[y]]).collect();
    let (dom, g0c) = (f.dom.clone(), g0.clone());
    let cod = f.cod.clone();
    let g1 = move |w: &Wit| {
        let (a, b) = (g0c[cod.s(w)], g0c[cod.t(w)]);
        dom.related(a, b).expect("quotient injectivity guarantees a witness")
    };
    let inverse = MorRep::new_unchecked(f.cod.clone(), f.dom.clone(), g0.clone(), Arc::new(g1));
    let gf: Vec<usize> = f.f0.iter().map(|&y| g0[y]).collect();
    let fg: Vec<usize> = g0.iter().map(|&x| f.f0[x]).collect();
    let id_d: Vec<usize> = (0..f.dom.size0()).collect();
    let id_c: Vec<usize> = (0..f.cod.size0()).collect();
    match (equal_pointwise(&f.dom, &gf, &id_d), equal_pointwise(&f.cod, &fg, &id_c)) {
        (Some(left), Some(right)) => Verdict::pass(IsoData { inverse, left, right }, "bijective on quotients"),
        _ => Verdict::fail("round-trip witnesses not found"),
    }
}

// ---------------------------------------------------------------------------
// Constructors

/// The relational setoid of an equivalence relation given by its pairs.
pub fn relational_setoid(name: impl Into<String>, n: usize, pairs: &[(usize, usize)]) -> Result<Setoid, SetoidError> {
    let set: HashSet<(usize, usize)> = pairs.iter().copied().collect();
    if let Some(&(a, b)) = set.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(SetoidError::NotEquivalence(format!("pair ({}, {}) out of range", a, b)));
    }
    for x in 0..n {
        if !set.contains(&(x, x)) {
            return Err(SetoidError::NotEquivalence(format!("not reflexive at {}", x)));
        }
    }
    for &(a, b) in &set {
        if !set.contains(&(b, a)) {
            return Err(SetoidError::NotEquivalence(format!("not symmetric at ({}, {})", a, b)));
        }
        for c in 0..n {
            if set.contains(&(b, c)) && !set.contains(&(a, c)) {
                return Err(SetoidError::NotEquivalence(format!("not transitive at ({}, {}, {})", a, b, c)));
            }
        }
    }
    Ok(Setoid::wrap(name, Repr::Relational { n, pairs: set }))
}

/// The relational setoid whose classes are the given blocks.
pub fn relational_from_blocks(name: impl Into<String>, n: usize, blocks: &[Vec<usize>]) -> Result<Setoid, SetoidError> {
    let mut pairs = Vec::new();
    for b in blocks {
        for &x in b {
            for &y in b {
                pairs.push((x, y));
            }
        }
    }
    relational_setoid(name, n, &pairs)
}

/// The free setoid on a graph.
pub fn free_setoid(name: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Result<Setoid, SetoidError> {
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(SetoidError::Malformed(format!("edge ({}, {}) out of range", a, b)));
    }
    Ok(Setoid::free_on(name, Arc::new(EdgeList { n, edges: edges.to_vec() })))
}

/// The length-one forward word on a generator.
pub fn eta(gen: Gen) -> Wit {
    Wit::Word(Word::single(gen))
}

/// Extends `g` on generators to words: each generator goes to `g`, backward
/// steps get `v`, the results are combined by left-associated `m`, and the
/// empty word at `x` goes to `r(f0 x)`.
pub fn free_extend(
    dom: &Setoid,
    cod: &Setoid,
    f0: Vec<usize>,
    g: impl Fn(&Gen) -> Wit + Send + Sync + 'static,
) -> Result<MorRep, SetoidError> {
    let gens = dom
        .generators()
        .ok_or_else(|| SetoidError::Malformed(format!("{} is not free", dom.name())))?
        .clone();
    let sample: Vec<Gen> = match gens.all() {
        Some(all) => all,
        None => (0..dom.size0()).flat_map(|p| gens.canonical_at(p)).collect(),
    };
    for gen in &sample {
        let img = g(gen);
        if !cod.is_witness(&img) || cod.s(&img) != f0[gen.src] || cod.t(&img) != f0[gen.dst] {
            return Err(SetoidError::Morphism {
                name: format!("{} → {}", dom.name(), cod.name()),
                detail: format!("generator image {} is not over f0 × f0", img),
            });
        }
    }
    Ok(free_extend_unchecked(dom, cod, f0, g))
}

pub fn free_extend_unchecked(
    dom: &Setoid,
    cod: &Setoid,
    f0: Vec<usize>,
    g: impl Fn(&Gen) -> Wit + Send + Sync + 'static,
) -> MorRep {
    let (c, f0c) = (cod.clone(), f0.clone());
    let f1 = move |w: &Wit| match w {
        Wit::Word(word) => {
            let mut acc = c.r(f0c[word.start]);
            for (i, st) in word.steps.iter().enumerate() {
                let img = g(&st.gen);
                let img = if st.forward { img } else { c.v(&img) };
                acc = if i == 0 { img } else { c.m(&acc, &img) };
            }
            acc
        }
        other => panic!("free_extend applied to non-word {}", other),
    };
    MorRep::new_unchecked(dom.clone(), cod.clone(), f0, Arc::new(f1))
}

/// The tabular setoid `{0, 1}` with witnesses `e0`, `e1`, `p: 0 → 1`,
/// `q: 1 → 0` and a full composition table (a groupoid with two composites
/// collapsed), used to exercise multiple parallel witnesses.
pub fn tab2() -> Setoid {
    // e0 = 0, e1 = 1, p = 2, q = 3
    let mut m = HashMap::new();
    m.insert((0, 0), 0);
    m.insert((0, 2), 2);
    m.insert((2, 1), 2);
    m.insert((2, 3), 0);
    m.insert((1, 1), 1);
    m.insert((1, 3), 3);
    m.insert((3, 0), 3);
    m.insert((3, 2), 1);
    Setoid::tabular(
        "TAB2",
        Tabular { n0: 2, s: vec![0, 1, 0, 1], t: vec![0, 1, 1, 0], r: vec![0, 1], v: vec![0, 1, 3, 2], m },
    )
    .expect("TAB2 tables are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel3() -> Setoid {
        relational_from_blocks("REL3", 3, &[vec![0, 1], vec![2]]).unwrap()
    }

    fn chain3() -> Setoid {
        free_setoid("CHAIN3", 3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn point_of(y: &Setoid, p: usize) -> MorRep {
        MorRep::by_search(Setoid::terminal(), y.clone(), vec![p]).unwrap()
    }

    #[test]
    fn relational_examples() {
        assert_eq!(Setoid::terminal().witness_pool(0).len(), 1);
        assert_eq!(rel3().witness_pool(0).len(), 5);
        assert_eq!(Setoid::full("F", 2).witness_pool(0).len(), 4);
        assert!(relational_setoid("bad", 2, &[(0, 0), (1, 1), (0, 1)]).is_err());
    }

    #[test]
    fn free_examples() {
        let d = free_setoid("D", 3, &[]).unwrap();
        assert!(d.related(0, 1).is_none());
        assert!(d.x1_finite());
        let c = chain3();
        let w = c.related(0, 2).unwrap();
        match &w {
            Wit::Word(word) => assert_eq!(word.steps.len(), 2),
            _ => unreachable!(),
        }
        assert!(c.is_witness(&w));
        let l = free_setoid("L", 1, &[(0, 0)]).unwrap();
        assert!(l.related(0, 0).is_some());
        assert!(!l.x1_finite());
        assert_eq!(l.quotient().size, 1);
    }

    #[test]
    fn structure_equations_on_free() {
        let c = chain3();
        for a in c.witness_pool(3) {
            let inv = c.v(&a);
            assert_eq!(c.s(&inv), c.t(&a));
            assert_eq!(c.t(&inv), c.s(&a));
            for b in c.witnesses_between(c.t(&a), c.t(&a), 1) {
                let ab = c.m(&a, &b);
                assert_eq!(c.s(&ab), c.s(&a));
                assert_eq!(c.t(&ab), c.t(&b));
            }
        }
        for x in 0..3 {
            assert_eq!(c.s(&c.r(x)), x);
            assert_eq!(c.t(&c.r(x)), x);
        }
    }

    #[test]
    fn free_extend_examples() {
        let c = chain3();
        let y = Setoid::full("F3", 3);
        let f0 = vec![0, 1, 2];
        let f = free_extend(&c, &y, f0, |g: &Gen| Wit::Rel(g.src, g.dst)).unwrap();
        assert_eq!(f.apply(&c.r(1)), Wit::Rel(1, 1));
        let e0 = EdgeList { n: 3, edges: vec![(0, 1), (1, 2)] }.gen(0);
        assert_eq!(f.apply(&eta(e0.clone())), Wit::Rel(0, 1));
        let word = Wit::Word(Word {
            start: 1,
            steps: vec![Step { gen: e0.clone(), forward: false }, Step { gen: e0, forward: true }],
        });
        assert!(c.is_witness(&word));
        let direct = y.m(&y.v(&Wit::Rel(0, 1)), &Wit::Rel(0, 1));
        assert_eq!(f.apply(&word), direct);
        assert_eq!(direct, Wit::Rel(1, 1));
        assert!(free_extend(&c, &y, vec![0, 1, 2], |g: &Gen| Wit::Rel(g.dst, g.src)).is_err());
    }

    #[test]
    fn related_and_quotient_examples() {
        assert!(rel3().related(0, 2).is_none());
        assert_eq!(Setoid::terminal().quotient().size, 1);
        assert_eq!(rel3().quotient().size, 2);
        assert_eq!(chain3().quotient().size, 1);
    }

    #[test]
    fn compose_and_equal_examples() {
        let c = chain3();
        let to_pt = MorRep::by_search(c.clone(), Setoid::discrete("P", 1), vec![0, 0, 0]).unwrap();
        let to_t = MorRep::by_search(Setoid::discrete("P", 1), Setoid::terminal(), vec![0]).unwrap();
        let k = compose_mor(&to_pt, &to_t).unwrap();
        assert_eq!(k.f0, vec![0, 0, 0]);
        let fid = compose_mor(&to_pt, &MorRep::identity(&to_pt.cod)).unwrap();
        assert_eq!(fid.f0, to_pt.f0);

        let r = rel3();
        let a = point_of(&r, 0);
        assert_eq!(equal_mor(&a, &a).unwrap().unwrap(), EqWitness::reflexive(&a));
        assert!(equal_mor(&a, &point_of(&r, 1)).unwrap().is_some());
        assert!(equal_mor(&a, &point_of(&r, 2)).unwrap().is_none());
    }

    #[test]
    fn is_iso_examples() {
        let r = rel3();
        let id = MorRep::identity(&r);
        let v = is_iso(&id);
        assert!(v.holds);
        assert_eq!(v.witness.unwrap().inverse.f0, vec![0, 0, 2]);

        let c = chain3();
        let collapse = MorRep::by_search(c.clone(), Setoid::terminal(), vec![0, 0, 0]).unwrap();
        let v = is_iso(&collapse);
        assert!(v.holds);
        let d = v.witness.unwrap();
        d.inverse.validate().unwrap();
        let gf = compose_unchecked(&collapse, &d.inverse);
        d.left.validate(&gf, &MorRep::identity(&c)).unwrap();
        let fg = compose_unchecked(&d.inverse, &collapse);
        d.right.validate(&fg, &MorRep::identity(&Setoid::terminal())).unwrap();

        assert!(!is_iso(&point_of(&r, 0)).holds);
    }

    #[test]
    fn tab2_is_valid_and_connected() {
        let t = tab2();
        assert_eq!(t.quotient().size, 1);
        assert_eq!(t.witnesses_between(0, 1, 0), vec![Wit::Tab(2)]);
    }

    #[test]
    fn tabular_rejects_broken_tables() {
        let mut tab = tab2().as_tabular().unwrap().clone();
        tab.m.insert((2, 3), 1);
        assert!(matches!(Setoid::tabular("bad", tab), Err(SetoidError::Equation { .. })));
    }

    #[test]
    fn joint_and_sum() {
        let p = Setoid::product(&rel3(), &rel3());
        assert_eq!(p.quotient().size, 4);
        let w = p.related(0, 4).unwrap();
        assert!(p.is_witness(&w));
        let s = Setoid::sum("S", vec![rel3(), Setoid::terminal(), chain3()]);
        assert_eq!(s.size0(), 7);
        assert_eq!(s.quotient().size, 4);
        assert!(s.related(3, 4).is_none());
        assert!(s.related(4, 6).is_some());
        let e = Setoid::sum("E", vec![Setoid::empty(), Setoid::terminal()]);
        assert_eq!(e.as_sum().unwrap().locate(0), (1, 0));
    }
}
