//! Diagrams of categories built from coherent diagrams: `X̃` and its path
//! space, right homotopies, `ω`, the action `⊙`, the isomorphism
//! `X̃⊙∗ ≅ X`, cocontinuity of `⊙` and the extension `−⊙̃M`.
//!
//! Objects of `X̃_c` are kept as values ([`Obj`]) so maps between these
//! diagrams are compared by table equality. Witness slots range over a
//! finite pool per object ([`Pools`]): the witness pool at a cap plus the
//! witnesses the constructions themselves produce.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::coherent::{
    compose_diag, compose_diag_unchecked, equal_diag, is_iso_diag, product_diag, CoherentDiagram, CoherentError, DiagEqWitness, DiagMor,
};
use crate::fincat::{
    grothendieck, product, product_functor, Arrow, Cat, CatDiagram, CatDiagramMap, CatError, Comma, Dir, FinCat,
    FinSet, Functor, Grothendieck, Zigzag,
};
use crate::kan::{comma_colimit_map, kan_comparison, left_kan, LeftKan};
use crate::setoid::{eta, free_extend_unchecked, Gen, GenLabel, MorRep, Setoid, Step, Wit, Word, DEFAULT_CAP};
use crate::truncation::{
    embed, equiv_check, iso_in_theory, reflect, validate_sex, EquivWitness, OverIndex, Reflected, Theory,
    TruncError,
};
use crate::corpus::Corpus;
use crate::verdict::{Record, Verdict};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error(transparent)]
    Coherent(#[from] CoherentError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error("{map}: {detail}")]
    NotStrict { map: String, detail: String },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("witness pools of {0} do not close up")]
    NotClosed(String),
    #[error("{0}")]
    Unsupported(String),
}

fn not_strict(map: &str, detail: impl Into<String>) -> HomotopyError {
    HomotopyError::NotStrict { map: map.into(), detail: detail.into() }
}

/// Point data of `X̃` (points of `X`) or of `℘X̃` (witnesses of `X`).
pub trait Point: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn as_wit(&self) -> Option<&Wit>;
}

impl Point for usize {
    fn as_wit(&self) -> Option<&Wit> {
        None
    }
}

impl Point for Wit {
    fn as_wit(&self) -> Option<&Wit> {
        Some(self)
    }
}

/// An object of `X̃_c` or `℘X̃_c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj<P> {
    /// `(a, α: a → c, x)`.
    Pt { a: usize, al: usize, x: P },
    /// `(a, α: a → a', x, a', α': a' → c, x', ξ)`; the path space carries
    /// two witnesses.
    Tup { a: usize, al: usize, x: P, a2: usize, al2: usize, x2: P, xi: Vec<Wit> },
}

impl<P: Point> Obj<P> {
    pub fn is_tuple(&self) -> bool {
        matches!(self, Obj::Tup { .. })
    }

    /// The action of `γ` (postcomposition with the final arrow).
    pub fn act(&self, v: &FinCat, g: usize) -> Self {
        match self {
            Obj::Pt { a, al, x } => Obj::Pt { a: *a, al: v.comp(g, *al), x: x.clone() },
            Obj::Tup { a, al, x, a2, al2, x2, xi } => Obj::Tup {
                a: *a,
                al: *al,
                x: x.clone(),
                a2: *a2,
                al2: v.comp(g, *al2),
                x2: x2.clone(),
                xi: xi.clone(),
            },
        }
    }

    /// Target of the collapse `L`.
    pub fn left(&self, v: &FinCat) -> Option<Self> {
        match self {
            Obj::Tup { a, al, x, al2, .. } => Some(Obj::Pt { a: *a, al: v.comp(*al2, *al), x: x.clone() }),
            Obj::Pt { .. } => None,
        }
    }

    /// Target of the collapse `R`.
    pub fn right(&self) -> Option<Self> {
        match self {
            Obj::Tup { a2, al2, x2, .. } => Some(Obj::Pt { a: *a2, al: *al2, x: x2.clone() }),
            Obj::Pt { .. } => None,
        }
    }

    pub fn label(&self, v: &FinCat) -> String {
        match self {
            Obj::Pt { a, al, x } => format!("({},{},{})", v.object_label(*a), v.arrow(*al).label, x),
            Obj::Tup { a, al, x, a2, al2, x2, xi } => {
                let ws: Vec<String> = xi.iter().map(|w| w.to_string()).collect();
                format!(
                    "({},{},{},{},{},{},{})",
                    v.object_label(*a),
                    v.arrow(*al).label,
                    x,
                    v.object_label(*a2),
                    v.arrow(*al2).label,
                    x2,
                    ws.join(",")
                )
            }
        }
    }
}

/// Per object of the shape: witnesses allowed as points of `℘X̃` and as
/// the witness slots of tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pools {
    pub points: Vec<BTreeSet<Wit>>,
    pub wits: Vec<BTreeSet<Wit>>,
}

impl Pools {
    pub fn new(x: &CoherentDiagram, cap: usize) -> Self {
        let base: Vec<BTreeSet<Wit>> = x.objs.iter().map(|o| o.witness_pool(cap).into_iter().collect()).collect();
        Pools { points: base.clone(), wits: base }
    }

    /// Reflexivity witnesses and one canonical witness per related pair.
    pub fn canonical(x: &CoherentDiagram) -> Self {
        let base: Vec<BTreeSet<Wit>> = x
            .objs
            .iter()
            .map(|o| {
                let n = o.size0();
                (0..n).map(|p| o.r(p)).chain((0..n).flat_map(|p| (0..n).filter_map(move |q| o.related(p, q)))).collect()
            })
            .collect();
        Pools { points: base.clone(), wits: base }
    }

    pub fn empty(n: usize) -> Self {
        Pools { points: vec![BTreeSet::new(); n], wits: vec![BTreeSet::new(); n] }
    }

    pub fn restrict(&self, u: &Functor) -> Pools {
        Pools {
            points: u.obj.iter().map(|&b| self.points[b].clone()).collect(),
            wits: u.obj.iter().map(|&b| self.wits[b].clone()).collect(),
        }
    }

    /// Union; whether anything was added.
    pub fn absorb(&mut self, other: &Pools) -> bool {
        let mut changed = false;
        for (a, b) in self.points.iter_mut().zip(&other.points) {
            for w in b {
                changed |= a.insert(w.clone());
            }
        }
        for (a, b) in self.wits.iter_mut().zip(&other.wits) {
            for w in b {
                changed |= a.insert(w.clone());
            }
        }
        changed
    }

    pub fn add_wit(&mut self, a: usize, w: Wit) {
        self.wits[a].insert(w);
    }

    pub fn add_point(&mut self, a: usize, w: Wit) {
        self.points[a].insert(w);
    }

    /// Everything `o` uses, for a diagram over the value shape of `o`.
    pub fn absorb_obj<P: Point>(&mut self, o: &Obj<P>) {
        match o {
            Obj::Pt { a, x, .. } => {
                if let Some(w) = x.as_wit() {
                    self.add_point(*a, w.clone());
                }
            }
            Obj::Tup { a, x, a2, x2, xi, .. } => {
                if let Some(w) = x.as_wit() {
                    self.add_point(*a, w.clone());
                }
                if let Some(w) = x2.as_wit() {
                    self.add_point(*a2, w.clone());
                }
                for w in xi {
                    self.add_wit(*a2, w.clone());
                }
            }
        }
    }
}

const CLOSURE_ROUNDS: usize = 8;

/// Rebuilds until the witnesses a construction needs are in its pools.
fn close<T>(
    what: &str,
    mut pools: Vec<Pools>,
    mut build: impl FnMut(&[Pools]) -> Result<(T, Vec<Pools>), HomotopyError>,
) -> Result<(T, Vec<Pools>), HomotopyError> {
    for _ in 0..CLOSURE_ROUNDS {
        let (t, need) = build(&pools)?;
        let mut changed = false;
        for (p, n) in pools.iter_mut().zip(&need) {
            changed |= p.absorb(n);
        }
        if !changed {
            return Ok((t, pools));
        }
    }
    Err(HomotopyError::NotClosed(what.into()))
}

// ---------------------------------------------------------------------------
// Strict diagrams of categories with value-keyed objects

/// A strict diagram `A → Cat` whose objects are [`Obj`] values. `base`
/// sends arrows of `A` to the arrows recorded in the objects (the identity,
/// or `u` for a restriction `u*X̃`).
#[derive(Clone, Debug)]
pub struct Strict<P> {
    pub name: String,
    pub base: Functor,
    pub objects: Vec<Vec<Obj<P>>>,
    index: Vec<HashMap<Obj<P>, usize>>,
    /// Local `(L, R)` arrows out of each tuple.
    legs: Vec<Vec<Option<(usize, usize)>>>,
    pub diagram: CatDiagram,
}

impl<P: Point> Strict<P> {
    fn assemble(name: String, base: Functor, objects: Vec<Vec<Obj<P>>>) -> Result<Self, HomotopyError> {
        let shape = base.dom.clone();
        let v = base.cod.clone();
        let mut index = Vec::new();
        let mut legs = Vec::new();
        let mut fibers: Vec<Cat> = Vec::new();
        for (c, objs) in objects.iter().enumerate() {
            let idx: HashMap<Obj<P>, usize> = objs.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
            let mut arrows = Vec::new();
            let mut lg = vec![None; objs.len()];
            for (i, o) in objs.iter().enumerate() {
                if let (Some(l), Some(r)) = (o.left(&v), o.right()) {
                    let find = |t: &Obj<P>| {
                        idx.get(t).copied().ok_or_else(|| not_strict(&name, format!("{} is missing", t.label(&v))))
                    };
                    let (li, ri) = (find(&l)?, find(&r)?);
                    lg[i] = Some((arrows.len(), arrows.len() + 1));
                    arrows.push(Arrow { src: i, dst: li, label: format!("L{}", i) });
                    arrows.push(Arrow { src: i, dst: ri, label: format!("R{}", i) });
                }
            }
            let k = arrows.len();
            let ids: Vec<usize> = (0..objs.len()).map(|o| k + o).collect();
            arrows.extend((0..objs.len()).map(|o| Arrow { src: o, dst: o, label: format!("id{}", o) }));
            let labels: Vec<String> = objs.iter().map(|o| o.label(&v)).collect();
            let set = FinSet::labelled(labels).unwrap_or_else(|_| FinSet::new(objs.len()));
            // only identities compose with the collapses
            let fiber = FinCat::from_fn(format!("{}({})", name, shape.object_label(c)), set, arrows, ids, |g, f| {
                if g >= k {
                    f
                } else {
                    g
                }
            });
            fibers.push(Arc::new(fiber));
            index.push(idx);
            legs.push(lg);
        }
        let mut actions = Vec::new();
        for (gi, ar) in shape.arrows().iter().enumerate() {
            let g = base.arr[gi];
            let (c, c2) = (ar.src, ar.dst);
            let obj: Vec<usize> = objects[c]
                .iter()
                .map(|o| {
                    let img = o.act(&v, g);
                    index[c2].get(&img).copied().ok_or_else(|| not_strict(&name, format!("{} is missing", img.label(&v))))
                })
                .collect::<Result<_, _>>()?;
            let (f1, f2) = (&fibers[c], &fibers[c2]);
            let mut arr = vec![0; f1.n_arrows()];
            for i in 0..objects[c].len() {
                arr[f1.id(i)] = f2.id(obj[i]);
                if let Some((l, r)) = legs[c][i] {
                    let (l2, r2) = legs[c2][obj[i]].expect("tuples act on tuples");
                    arr[l] = l2;
                    arr[r] = r2;
                }
            }
            actions.push(Functor::new_unchecked(f1.clone(), f2.clone(), obj, arr));
        }
        let diagram = CatDiagram::new(shape, fibers, actions)?;
        Ok(Strict { name, base, objects, index, legs, diagram })
    }

    pub fn shape(&self) -> &Cat {
        &self.base.dom
    }

    pub fn find(&self, c: usize, o: &Obj<P>) -> Option<usize> {
        self.index[c].get(o).copied()
    }

    pub fn legs(&self, c: usize, i: usize) -> Option<(usize, usize)> {
        self.legs[c][i]
    }

    pub fn size(&self) -> usize {
        self.objects.iter().map(|o| o.len()).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.objects.iter().map(|o| o.len()).collect()
    }

    /// `u*` of this diagram.
    pub fn restrict(&self, u: &Functor) -> Result<Strict<P>, HomotopyError> {
        let objects = u.obj.iter().map(|&b| self.objects[b].clone()).collect();
        Strict::assemble(format!("{}*{}", u.dom.name(), self.name), u.then(&self.base), objects)
    }

    fn offsets(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let (mut o, mut a) = (0, 0);
        for f in &self.diagram.fibers {
            out.push((o, a));
            o += f.n_objects();
            a += f.n_arrows();
        }
        out
    }
}

/// Objects of `X̃` over the shape of `x`, tuples drawing `ξ` from the pools.
fn enumerate_tilde(x: &CoherentDiagram, pools: &Pools) -> Vec<Vec<Obj<usize>>> {
    let s = &x.shape;
    let by_src: Vec<HashMap<usize, Vec<Wit>>> = pools
        .wits
        .iter()
        .enumerate()
        .map(|(a, ws)| {
            let mut m: HashMap<usize, Vec<Wit>> = HashMap::new();
            for w in ws {
                m.entry(x.objs[a].s(w)).or_default().push(w.clone());
            }
            m
        })
        .collect();
    (0..s.n_objects())
        .map(|c| {
            let mut out = Vec::new();
            for &al in s.incoming(c) {
                let a = s.src(al);
                out.extend((0..x.objs[a].size0()).map(|p| Obj::Pt { a, al, x: p }));
            }
            for &al2 in s.incoming(c) {
                let a2 = s.src(al2);
                for &al in s.incoming(a2) {
                    let a = s.src(al);
                    for p in 0..x.objs[a].size0() {
                        for w in by_src[a2].get(&x.act(al, p)).into_iter().flatten() {
                            let x2 = x.objs[a2].t(w);
                            out.push(Obj::Tup { a, al, x: p, a2, al2, x2, xi: vec![w.clone()] });
                        }
                    }
                }
            }
            out.sort();
            out
        })
        .collect()
}

/// Objects of `℘X̃`.
fn enumerate_path(x: &CoherentDiagram, pools: &Pools) -> Vec<Vec<Obj<Wit>>> {
    let s = &x.shape;
    let by_st: Vec<HashMap<(usize, usize), Vec<Wit>>> = pools
        .wits
        .iter()
        .enumerate()
        .map(|(a, ws)| {
            let mut m: HashMap<(usize, usize), Vec<Wit>> = HashMap::new();
            for w in ws {
                m.entry((x.objs[a].s(w), x.objs[a].t(w))).or_default().push(w.clone());
            }
            m
        })
        .collect();
    let none = Vec::new();
    (0..s.n_objects())
        .map(|c| {
            let mut out = Vec::new();
            for &al in s.incoming(c) {
                let a = s.src(al);
                out.extend(pools.points[a].iter().map(|z| Obj::Pt { a, al, x: z.clone() }));
            }
            for &al2 in s.incoming(c) {
                let a2 = s.src(al2);
                for &al in s.incoming(a2) {
                    let a = s.src(al);
                    let xa = &x.objs[a];
                    for z in &pools.points[a] {
                        let (sz, tz) = (x.act(al, xa.s(z)), x.act(al, xa.t(z)));
                        for z2 in &pools.points[a2] {
                            let (sz2, tz2) = (x.objs[a2].s(z2), x.objs[a2].t(z2));
                            let xs = by_st[a2].get(&(sz, sz2)).unwrap_or(&none);
                            let ys = by_st[a2].get(&(tz, tz2)).unwrap_or(&none);
                            for w in xs {
                                for w2 in ys {
                                    out.push(Obj::Tup {
                                        a,
                                        al,
                                        x: z.clone(),
                                        a2,
                                        al2,
                                        x2: z2.clone(),
                                        xi: vec![w.clone(), w2.clone()],
                                    });
                                }
                            }
                        }
                    }
                }
            }
            out.sort();
            out
        })
        .collect()
}

/// `X̃` with witness slots drawn from `pools`.
pub fn tilde_with(x: &CoherentDiagram, pools: &Pools) -> Result<Strict<usize>, HomotopyError> {
    Strict::assemble(format!("{}~", x.name), Functor::identity(&x.shape), enumerate_tilde(x, pools))
}

/// `X̃` at the default cap.
pub fn tilde(x: &CoherentDiagram) -> Result<Strict<usize>, HomotopyError> {
    tilde_with(x, &Pools::new(x, DEFAULT_CAP))
}

/// `℘X̃` with points and witness slots drawn from `pools`.
pub fn path_with(x: &CoherentDiagram, pools: &Pools) -> Result<Strict<Wit>, HomotopyError> {
    Strict::assemble(format!("℘{}~", x.name), Functor::identity(&x.shape), enumerate_path(x, pools))
}

// ---------------------------------------------------------------------------
// Strict maps

/// The natural family of functors given on objects by `f`; collapses must
/// go to collapses or identities, and naturality must hold on the nose.
pub fn strict_map<P: Point, Q: Point>(
    name: &str,
    src: &Strict<P>,
    tgt: &Strict<Q>,
    f: impl Fn(usize, &Obj<P>) -> Obj<Q>,
) -> Result<CatDiagramMap, HomotopyError> {
    if **src.shape() != **tgt.shape() {
        return Err(not_strict(name, "shapes differ"));
    }
    let (vs, vt) = (&src.base.cod, &tgt.base.cod);
    let mut comps = Vec::new();
    for c in 0..src.shape().n_objects() {
        let (f1, f2) = (&src.diagram.fibers[c], &tgt.diagram.fibers[c]);
        let obj: Vec<usize> = src.objects[c]
            .iter()
            .map(|o| {
                let img = f(c, o);
                tgt.find(c, &img).ok_or_else(|| {
                    not_strict(name, format!("image {} of {} is not an object", img.label(vt), o.label(vs)))
                })
            })
            .collect::<Result<_, _>>()?;
        let mut arr = vec![0; f1.n_arrows()];
        for (i, o) in src.objects[c].iter().enumerate() {
            arr[f1.id(i)] = f2.id(obj[i]);
            if let Some((l, r)) = src.legs[c][i] {
                let (lo, ro) = (obj[f1.dst(l)], obj[f1.dst(r)]);
                match tgt.legs[c][obj[i]] {
                    Some((l2, r2)) if f2.dst(l2) == lo && f2.dst(r2) == ro => {
                        arr[l] = l2;
                        arr[r] = r2;
                    }
                    None if lo == obj[i] && ro == obj[i] => {
                        arr[l] = f2.id(obj[i]);
                        arr[r] = f2.id(obj[i]);
                    }
                    _ => return Err(not_strict(name, format!("the collapses of {} are not preserved", o.label(vs)))),
                }
            }
        }
        comps.push(Functor::new_unchecked(f1.clone(), f2.clone(), obj, arr));
    }
    let m = CatDiagramMap { dom: src.diagram.clone(), cod: tgt.diagram.clone(), comps };
    m.validate().map_err(|e| not_strict(name, e.to_string()))?;
    Ok(m)
}

pub fn then_map(f: &CatDiagramMap, g: &CatDiagramMap) -> CatDiagramMap {
    CatDiagramMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        comps: f.comps.iter().zip(&g.comps).map(|(a, b)| a.then(b)).collect(),
    }
}

pub fn identity_map(d: &CatDiagram) -> CatDiagramMap {
    CatDiagramMap { dom: d.clone(), cod: d.clone(), comps: d.fibers.iter().map(Functor::identity).collect() }
}

/// Table equality.
pub fn same_map(f: &CatDiagramMap, g: &CatDiagramMap) -> bool {
    f.comps.len() == g.comps.len() && f.comps.iter().zip(&g.comps).all(|(a, b)| a.same_as(b))
}

/// `∫f` for components `f_c: E_c → F_{uc}` over `u`.
pub fn groth_map(comps: &[Functor], u: &Functor, ge: &Grothendieck, gf: &Grothendieck) -> Result<Functor, HomotopyError> {
    let s = &u.dom;
    let obj: Vec<usize> = ge.objects.iter().map(|&(c, e)| gf.object(u.obj[c], comps[c].obj[e])).collect();
    let arr = ge
        .arrows
        .iter()
        .enumerate()
        .map(|(k, &(g, phi))| {
            let src = ge.cat.src(k);
            let c2 = s.dst(g);
            gf.arrow(obj[src], u.arr[g], comps[c2].arr[phi]).ok_or_else(|| not_strict("∫", "arrow image missing"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Functor::new(ge.cat.clone(), gf.cat.clone(), obj, arr)?)
}

// ---------------------------------------------------------------------------
// Object formulas

/// `f̃` on objects.
pub fn tilde_obj(f: &DiagMor, o: &Obj<usize>) -> Obj<usize> {
    match o {
        Obj::Pt { a, al, x } => Obj::Pt { a: *a, al: *al, x: f.comps[*a].f0[*x] },
        Obj::Tup { a, al, x, a2, al2, x2, xi } => Obj::Tup {
            a: *a,
            al: *al,
            x: f.comps[*a].f0[*x],
            a2: *a2,
            al2: *al2,
            x2: f.comps[*a2].f0[*x2],
            xi: vec![f.cod.objs[*a2].m(&f.nat[*al][*x], &f.comps[*a2].apply(&xi[0]))],
        },
    }
}

/// `σ` (sources) or `τ` (targets) on objects of `℘X̃`.
pub fn endpoint_obj(x: &CoherentDiagram, o: &Obj<Wit>, source: bool) -> Obj<usize> {
    let e = |a: usize, z: &Wit| if source { x.objs[a].s(z) } else { x.objs[a].t(z) };
    match o {
        Obj::Pt { a, al, x: z } => Obj::Pt { a: *a, al: *al, x: e(*a, z) },
        Obj::Tup { a, al, x: z, a2, al2, x2: z2, xi } => Obj::Tup {
            a: *a,
            al: *al,
            x: e(*a, z),
            a2: *a2,
            al2: *al2,
            x2: e(*a2, z2),
            xi: vec![xi[if source { 0 } else { 1 }].clone()],
        },
    }
}

/// `ρ` on objects.
pub fn rho_obj(x: &CoherentDiagram, o: &Obj<usize>) -> Obj<Wit> {
    match o {
        Obj::Pt { a, al, x: p } => Obj::Pt { a: *a, al: *al, x: x.objs[*a].r(*p) },
        Obj::Tup { a, al, x: p, a2, al2, x2, xi } => Obj::Tup {
            a: *a,
            al: *al,
            x: x.objs[*a].r(*p),
            a2: *a2,
            al2: *al2,
            x2: x.objs[*a2].r(*x2),
            xi: vec![xi[0].clone(), xi[0].clone()],
        },
    }
}

/// `θ` for `h: f ∼ g` on objects.
pub fn theta_obj(f: &DiagMor, g: &DiagMor, h: &DiagEqWitness, o: &Obj<usize>) -> Obj<Wit> {
    match o {
        Obj::Pt { a, al, x } => Obj::Pt { a: *a, al: *al, x: h.h[*a][*x].clone() },
        Obj::Tup { a, al, x, a2, al2, x2, .. } => {
            let (Obj::Tup { xi: fx, .. }, Obj::Tup { xi: gx, .. }) = (tilde_obj(f, o), tilde_obj(g, o)) else {
                unreachable!()
            };
            Obj::Tup {
                a: *a,
                al: *al,
                x: h.h[*a][*x].clone(),
                a2: *a2,
                al2: *al2,
                x2: h.h[*a2][*x2].clone(),
                xi: vec![fx[0].clone(), gx[0].clone()],
            }
        }
    }
}

/// `m̃: g̃f̃ ∼ (gf)~` on objects.
pub fn mtilde_obj(f: &DiagMor, g: &DiagMor, gf: &DiagMor, o: &Obj<usize>) -> Obj<Wit> {
    let z = &g.cod;
    let gfx = |a: usize, p: usize| g.comps[a].f0[f.comps[a].f0[p]];
    match o {
        Obj::Pt { a, al, x } => Obj::Pt { a: *a, al: *al, x: z.objs[*a].r(gfx(*a, *x)) },
        Obj::Tup { a, al, x, a2, al2, x2, xi } => {
            let za = &z.objs[*a2];
            let inner = f.cod.objs[*a2].m(&f.nat[*al][*x], &f.comps[*a2].apply(&xi[0]));
            let w1 = za.m(&g.nat[*al][f.comps[*a].f0[*x]], &g.comps[*a2].apply(&inner));
            let w2 = za.m(&gf.nat[*al][*x], &g.comps[*a2].apply(&f.comps[*a2].apply(&xi[0])));
            Obj::Tup {
                a: *a,
                al: *al,
                x: z.objs[*a].r(gfx(*a, *x)),
                a2: *a2,
                al2: *al2,
                x2: za.r(gfx(*a2, *x2)),
                xi: vec![w1, w2],
            }
        }
    }
}

/// `ĩ: 1̃ ∼ 1` on objects.
pub fn itilde_obj(x: &CoherentDiagram, id: &DiagMor, o: &Obj<usize>) -> Obj<Wit> {
    match o {
        Obj::Pt { a, al, x: p } => Obj::Pt { a: *a, al: *al, x: x.objs[*a].r(*p) },
        Obj::Tup { a, al, x: p, a2, al2, x2, xi } => Obj::Tup {
            a: *a,
            al: *al,
            x: x.objs[*a].r(*p),
            a2: *a2,
            al2: *al2,
            x2: x.objs[*a2].r(*x2),
            xi: vec![x.objs[*a2].m(&id.nat[*al][*p], &xi[0]), xi[0].clone()],
        },
    }
}

/// `ω_{X,u}` on objects.
pub fn omega_obj(u: &Functor, o: &Obj<usize>) -> Obj<usize> {
    match o {
        Obj::Pt { a, al, x } => Obj::Pt { a: u.obj[*a], al: u.arr[*al], x: *x },
        Obj::Tup { a, al, x, a2, al2, x2, xi } => Obj::Tup {
            a: u.obj[*a],
            al: u.arr[*al],
            x: *x,
            a2: u.obj[*a2],
            al2: u.arr[*al2],
            x2: *x2,
            xi: xi.clone(),
        },
    }
}

// ---------------------------------------------------------------------------
// Zigzags in Σ_c of a strict diagram

/// One step through a collapse of the tuple `t`.
#[derive(Clone, Debug)]
struct Leg<P> {
    t: Obj<P>,
    left: bool,
    dir: Dir,
}

fn fwd<P>(t: Obj<P>, left: bool) -> Leg<P> {
    Leg { t, left, dir: Dir::Forward }
}

fn bwd<P>(t: Obj<P>, left: bool) -> Leg<P> {
    Leg { t, left, dir: Dir::Backward }
}

struct Sum<'a, P> {
    st: &'a Strict<P>,
    offs: Vec<(usize, usize)>,
}

impl<'a, P: Point> Sum<'a, P> {
    fn new(st: &'a Strict<P>) -> Self {
        Sum { st, offs: st.offsets() }
    }

    fn local(&self, c: usize, o: &Obj<P>) -> Result<usize, HomotopyError> {
        self.st.find(c, o).ok_or_else(|| not_strict(&self.st.name, format!("{} is missing", o.label(&self.st.base.cod))))
    }

    fn obj(&self, c: usize, o: &Obj<P>) -> Result<usize, HomotopyError> {
        Ok(self.offs[c].0 + self.local(c, o)?)
    }

    fn zigzag(&self, c: usize, start: &Obj<P>, legs: &[Leg<P>]) -> Result<Zigzag, HomotopyError> {
        let fiber = &self.st.diagram.fibers[c];
        let mut at = self.local(c, start)?;
        let begin = at;
        let mut steps = Vec::new();
        for leg in legs {
            let t = self.local(c, &leg.t)?;
            let (l, r) = self.st.legs[c][t].ok_or_else(|| not_strict(&self.st.name, "collapse of a point"))?;
            let a = if leg.left { l } else { r };
            at = match leg.dir {
                Dir::Forward => fiber.dst(a),
                Dir::Backward => t,
            };
            steps.push((self.offs[c].1 + a, leg.dir));
        }
        Ok(Zigzag { start: self.offs[c].0 + begin, end: self.offs[c].0 + at, steps })
    }
}

/// `Σ_c` of a family as an object over the index `ob A`.
pub fn over_objects(m: &CatDiagramMap) -> Result<OverIndex, HomotopyError> {
    let (f, proj) = m.total_over_objects();
    Ok(OverIndex::new(f, proj)?)
}

/// The section `s` and the zigzags for arrows when `s` comes from a strict
/// map `B → A` preserving collapses.
fn section_from<P: Point, Q: Point>(
    b: &Strict<P>,
    a: &Strict<Q>,
    s: impl Fn(usize, &Obj<P>) -> Obj<Q>,
) -> Result<(Vec<usize>, Vec<Zigzag>), HomotopyError> {
    let sa = Sum::new(a);
    let mut sec = Vec::new();
    let mut arrows = Vec::new();
    for (c, objs) in b.objects.iter().enumerate() {
        let imgs: Vec<Obj<Q>> = objs.iter().map(|o| s(c, o)).collect();
        for img in &imgs {
            sec.push(sa.obj(c, img)?);
        }
        let fiber = &b.diagram.fibers[c];
        for k in 0..fiber.n_arrows() {
            let src = fiber.src(k);
            if fiber.is_identity(k) {
                arrows.push(Zigzag::empty(sa.obj(c, &imgs[src])?));
                continue;
            }
            let (l, _) = b.legs[c][src].expect("collapses leave tuples");
            let img = &imgs[src];
            if img.is_tuple() {
                arrows.push(sa.zigzag(c, img, &[fwd(img.clone(), k == l)])?);
            } else {
                arrows.push(Zigzag::empty(sa.obj(c, img)?));
            }
        }
    }
    Ok((sec, arrows))
}

fn empty_zigzags<P: Point>(st: &Strict<P>) -> Vec<Zigzag> {
    (0..st.size()).map(Zigzag::empty).collect()
}

// ---------------------------------------------------------------------------
// The path space

pub struct PathSpace {
    pub x: CoherentDiagram,
    pub pools: Pools,
    pub tilde: Strict<usize>,
    pub path: Strict<Wit>,
    pub sigma: CatDiagramMap,
    pub tau: CatDiagramMap,
    pub rho: CatDiagramMap,
}

/// Points and witnesses used by the zigzags `b → ρσb` and `b → ρτb`.
fn path_extras(x: &CoherentDiagram, o: &Obj<Wit>, need: &mut Pools) {
    if let Obj::Pt { a, x: z, .. } = o {
        let xa = &x.objs[*a];
        let (s, t) = (xa.s(z), xa.t(z));
        let (vs, vt) = (xa.v(&x.unit[*a][s]), xa.v(&x.unit[*a][t]));
        need.add_point(*a, xa.r(s));
        need.add_point(*a, xa.r(t));
        need.add_wit(*a, xa.m(&vs, z));
        need.add_wit(*a, vs);
        need.add_wit(*a, vt);
    }
}

pub fn path_space(x: &CoherentDiagram, cap: usize) -> Result<PathSpace, HomotopyError> {
    path_space_with(x, Pools::new(x, cap))
}

pub fn path_space_with(x: &CoherentDiagram, pools: Pools) -> Result<PathSpace, HomotopyError> {
    let n = x.shape.n_objects();
    let ((tilde, path), pools) = close(&format!("℘{}~", x.name), vec![pools], |ps| {
        let tilde = tilde_with(x, &ps[0])?;
        let path = path_with(x, &ps[0])?;
        let mut need = Pools::empty(n);
        for o in tilde.objects.iter().flatten() {
            need.absorb_obj(&rho_obj(x, o));
        }
        for o in path.objects.iter().flatten() {
            path_extras(x, o, &mut need);
        }
        Ok(((tilde, path), vec![need]))
    })?;
    let sigma = strict_map("σ", &path, &tilde, |_, o| endpoint_obj(x, o, true))?;
    let tau = strict_map("τ", &path, &tilde, |_, o| endpoint_obj(x, o, false))?;
    let rho = strict_map("ρ", &tilde, &path, |_, o| rho_obj(x, o))?;
    Ok(PathSpace { x: x.clone(), pools: pools.into_iter().next().unwrap(), tilde, path, sigma, tau, rho })
}

impl PathSpace {
    /// `σρ = τρ = 1` as tables.
    pub fn check_strict(&self) -> Verdict<()> {
        let id = identity_map(&self.tilde.diagram);
        let sr = same_map(&then_map(&self.rho, &self.sigma), &id);
        let tr = same_map(&then_map(&self.rho, &self.tau), &id);
        let note = format!("|X~| = {}, |℘X~| = {}", self.tilde.size(), self.path.size());
        match (sr, tr) {
            (true, true) => Verdict::pass((), note),
            (false, _) => Verdict::fail(format!("σρ ≠ 1 ({})", note)),
            _ => Verdict::fail(format!("τρ ≠ 1 ({})", note)),
        }
    }

    fn pt_zigzag(&self, b: &Obj<Wit>, source: bool) -> Result<Vec<Leg<Wit>>, HomotopyError> {
        let x = &self.x;
        let s = &x.shape;
        let Obj::Pt { a, al, x: z } = b else { unreachable!() };
        let xa = &x.objs[*a];
        let (sz, tz) = (xa.s(z), xa.t(z));
        let vs = xa.v(&x.unit[*a][sz]);
        if source {
            // R(T) = b, L(T) = (a, α, r sζ)
            let t = Obj::Tup {
                a: *a,
                al: s.id(*a),
                x: xa.r(sz),
                a2: *a,
                al2: *al,
                x2: z.clone(),
                xi: vec![vs.clone(), xa.m(&vs, z)],
            };
            Ok(vec![bwd(t.clone(), false), fwd(t, true)])
        } else {
            // L(T) = b, R(T) = (a, α, r tζ)
            let t = Obj::Tup {
                a: *a,
                al: s.id(*a),
                x: z.clone(),
                a2: *a,
                al2: *al,
                x2: xa.r(tz),
                xi: vec![xa.m(&vs, z), xa.v(&x.unit[*a][tz])],
            };
            Ok(vec![bwd(t.clone(), true), fwd(t, false)])
        }
    }

    /// Zigzag from `b` to `ρσb` (or `ρτb`) in `℘X̃_c`.
    fn back_zigzag(&self, c: usize, b: &Obj<Wit>, source: bool) -> Result<Zigzag, HomotopyError> {
        let sum = Sum::new(&self.path);
        let v = &self.x.shape;
        let legs = match b {
            Obj::Pt { .. } => self.pt_zigzag(b, source)?,
            Obj::Tup { .. } => {
                let l = b.left(v).unwrap();
                let target = rho_obj(&self.x, &endpoint_obj(&self.x, b, source));
                let mut legs = vec![fwd(b.clone(), true)];
                legs.extend(self.pt_zigzag(&l, source)?);
                legs.push(bwd(target, true));
                legs
            }
        };
        sum.zigzag(c, b, &legs)
    }

    fn back_zigzags(&self, source: bool) -> Result<Vec<Zigzag>, HomotopyError> {
        let mut out = Vec::new();
        for (c, objs) in self.path.objects.iter().enumerate() {
            for b in objs {
                out.push(self.back_zigzag(c, b, source)?);
            }
        }
        Ok(out)
    }

    /// `Σ_c ρ_c` with the section `σ` and explicit zigzags.
    pub fn rho_equivalence(&self) -> Result<(OverIndex, EquivWitness), HomotopyError> {
        let p = over_objects(&self.rho)?;
        let (s, arrows) = section_from(&self.path, &self.tilde, |_, o| endpoint_obj(&self.x, o, true))?;
        let w = EquivWitness::Sex { s, arrows, back_b: self.back_zigzags(true)?, back_a: empty_zigzags(&self.tilde) };
        Ok((p, w))
    }

    /// `Σ_c σ_c` (or `τ`) with the section `ρ`.
    pub fn endpoint_equivalence(&self, source: bool) -> Result<(OverIndex, EquivWitness), HomotopyError> {
        let p = over_objects(if source { &self.sigma } else { &self.tau })?;
        let (s, arrows) = section_from(&self.tilde, &self.path, |_, o| rho_obj(&self.x, o))?;
        let w = EquivWitness::Sex { s, arrows, back_b: empty_zigzags(&self.tilde), back_a: self.back_zigzags(source)? };
        Ok((p, w))
    }

    /// The three sex-equivalences, each validated.
    pub fn check_equivalences(&self) -> Result<Verdict<()>, HomotopyError> {
        let checks = [
            ("Σρ", self.rho_equivalence()?),
            ("Σσ", self.endpoint_equivalence(true)?),
            ("Στ", self.endpoint_equivalence(false)?),
        ];
        for (name, (p, w)) in &checks {
            if let Err(e) = validate_sex(p, w) {
                return Ok(Verdict::fail(format!("{}: {}", name, e)));
            }
        }
        Ok(Verdict::pass((), "Σρ, Σσ, Στ are sex-equivalences over ob A"))
    }
}

// ---------------------------------------------------------------------------
// Right homotopies

/// `θ: X̃ → ℘Ỹ` with `σθ` and `τθ` compared to the intended endpoints.
pub struct RightHomotopy {
    pub theta: CatDiagramMap,
    pub left: CatDiagramMap,
    pub right: CatDiagramMap,
    pub sigma_ok: bool,
    pub tau_ok: bool,
    pub sizes: (usize, usize),
}

impl RightHomotopy {
    pub fn verdict(&self) -> Verdict<()> {
        let note = format!("|X~| = {}, |℘Y~| = {}", self.sizes.0, self.sizes.1);
        match (self.sigma_ok, self.tau_ok) {
            (true, true) => Verdict::pass((), note),
            (false, _) => Verdict::fail(format!("σθ differs from the left endpoint ({})", note)),
            _ => Verdict::fail(format!("τθ differs from the right endpoint ({})", note)),
        }
    }
}

struct Target {
    tilde: Strict<usize>,
    path: Strict<Wit>,
    sigma: CatDiagramMap,
    tau: CatDiagramMap,
}

fn target(y: &CoherentDiagram, pools: &Pools) -> Result<Target, HomotopyError> {
    let tilde = tilde_with(y, pools)?;
    let path = path_with(y, pools)?;
    let sigma = strict_map("σ", &path, &tilde, |_, o| endpoint_obj(y, o, true))?;
    let tau = strict_map("τ", &path, &tilde, |_, o| endpoint_obj(y, o, false))?;
    Ok(Target { tilde, path, sigma, tau })
}

fn homotopy(
    src: &Strict<usize>,
    tgt: &Target,
    theta: impl Fn(&Obj<usize>) -> Obj<Wit>,
    left: impl Fn(&Obj<usize>) -> Obj<usize>,
    right: impl Fn(&Obj<usize>) -> Obj<usize>,
) -> Result<RightHomotopy, HomotopyError> {
    let theta = strict_map("θ", src, &tgt.path, |_, o| theta(o))?;
    let left = strict_map("left endpoint", src, &tgt.tilde, |_, o| left(o))?;
    let right = strict_map("right endpoint", src, &tgt.tilde, |_, o| right(o))?;
    Ok(RightHomotopy {
        sigma_ok: same_map(&then_map(&theta, &tgt.sigma), &left),
        tau_ok: same_map(&then_map(&theta, &tgt.tau), &right),
        theta,
        left,
        right,
        sizes: (src.size(), tgt.path.size()),
    })
}

/// `θ: f̃ ∼ g̃` from a witness `h` that `f` and `g` are equal.
pub fn homotopy_from_witness(
    f: &DiagMor,
    g: &DiagMor,
    h: &DiagEqWitness,
    cap: usize,
) -> Result<RightHomotopy, HomotopyError> {
    h.validate(f, g).map_err(|e| HomotopyError::InvalidWitness(e.to_string()))?;
    let (x, y) = (&f.dom, &f.cod);
    let src = tilde_with(x, &Pools::new(x, cap))?;
    let mut pools = Pools::new(y, cap);
    for o in src.objects.iter().flatten() {
        pools.absorb_obj(&theta_obj(f, g, h, o));
    }
    let tgt = target(y, &pools)?;
    homotopy(&src, &tgt, |o| theta_obj(f, g, h, o), |o| tilde_obj(f, o), |o| tilde_obj(g, o))
}

/// `m̃: g̃f̃ ∼ (gf)~`.
pub fn homotopy_comp(f: &DiagMor, g: &DiagMor, cap: usize) -> Result<RightHomotopy, HomotopyError> {
    let gf = compose_diag(f, g)?;
    let (x, y, z) = (&f.dom, &f.cod, &g.cod);
    let sx = tilde_with(x, &Pools::new(x, cap))?;
    let mut py = Pools::new(y, cap);
    for o in sx.objects.iter().flatten() {
        py.absorb_obj(&tilde_obj(f, o));
    }
    let sy = tilde_with(y, &py)?;
    let ft = strict_map("f~", &sx, &sy, |_, o| tilde_obj(f, o))?;
    let mut pz = Pools::new(z, cap);
    for o in sy.objects.iter().flatten() {
        pz.absorb_obj(&tilde_obj(g, o));
    }
    for o in sx.objects.iter().flatten() {
        pz.absorb_obj(&mtilde_obj(f, g, &gf, o));
        pz.absorb_obj(&tilde_obj(&gf, o));
    }
    let tgt = target(z, &pz)?;
    let gt = strict_map("g~", &sy, &tgt.tilde, |_, o| tilde_obj(g, o))?;
    let mut h = homotopy(&sx, &tgt, |o| mtilde_obj(f, g, &gf, o), |o| tilde_obj(g, &tilde_obj(f, o)), |o| tilde_obj(&gf, o))?;
    // the left endpoint is the composite of the two strict maps
    h.sigma_ok &= same_map(&h.left, &then_map(&ft, &gt));
    Ok(h)
}

/// `ĩ: 1̃ ∼ 1`.
pub fn identity_homotopy(x: &CoherentDiagram, cap: usize) -> Result<RightHomotopy, HomotopyError> {
    let id = DiagMor::identity(x);
    let mut pools = Pools::new(x, cap);
    let base = tilde_with(x, &pools)?;
    for o in base.objects.iter().flatten() {
        pools.absorb_obj(&itilde_obj(x, &id, o));
        pools.absorb_obj(&tilde_obj(&id, o));
    }
    let tgt = target(x, &pools)?;
    let src = tilde_with(x, &pools)?;
    let mut h = homotopy(&src, &tgt, |o| itilde_obj(x, &id, o), |o| tilde_obj(&id, o), |o| o.clone())?;
    h.tau_ok &= same_map(&h.right, &identity_map(&src.diagram));
    Ok(h)
}

// ---------------------------------------------------------------------------
// ω

pub struct Omega {
    pub u: Functor,
    /// `(u*X)~`.
    pub src: Strict<usize>,
    /// `u*(X̃)`.
    pub tgt: Strict<usize>,
    pub tilde: Strict<usize>,
    pub map: CatDiagramMap,
    pub x: CoherentDiagram,
}

/// `w` of the section `s` at a tuple of `X̃_{uc}`.
fn omega_section_wit(x: &CoherentDiagram, b: usize, o: &Obj<usize>) -> Wit {
    let Obj::Tup { al, x: p, al2, xi, .. } = o else { unreachable!() };
    let xb = &x.objs[b];
    let s = &x.shape;
    let q = x.act(s.comp(*al2, *al), *p);
    xb.m_chain(&[xb.v(&x.unit[b][q]), xb.v(x.comp_at(*al, *al2, *p)), x.act1(*al2, &xi[0])])
}

/// `ω_{X,u}: (u*X)~ → u*X̃`, with pools closed under the section used in
/// the equivalence witness.
pub fn omega(x: &CoherentDiagram, u: &Functor, cap: usize) -> Result<Omega, HomotopyError> {
    if *u.cod != *x.shape {
        return Err(CoherentError::Shape(format!("{} is not over {}", x.name, u.cod.name())).into());
    }
    let ((), pools) = close(&format!("ω at {}", x.name), vec![Pools::new(x, cap)], |ps| {
        let t = tilde_with(x, &ps[0])?;
        let mut need = Pools::empty(x.shape.n_objects());
        for &b in &u.obj {
            for o in &t.objects[b] {
                if o.is_tuple() {
                    need.add_wit(b, omega_section_wit(x, b, o));
                }
            }
        }
        Ok(((), vec![need]))
    })?;
    omega_with(x, u, &pools[0])
}

/// `ω_{X,u}` with `X̃` built from `pools` and `(u*X)~` from their restriction.
pub fn omega_with(x: &CoherentDiagram, u: &Functor, pools: &Pools) -> Result<Omega, HomotopyError> {
    let ux = x.restrict_unchecked(u);
    let src = tilde_with(&ux, &pools.restrict(u))?;
    let tilde = tilde_with(x, pools)?;
    let tgt = tilde.restrict(u)?;
    let map = strict_map("ω", &src, &tgt, |_, o| omega_obj(u, o))?;
    Ok(Omega { u: u.clone(), src, tgt, tilde, map, x: x.clone() })
}

impl Omega {
    /// `Σ_c ω_c` with the section `(b, β, x) ↦ (c, 1, X_β x)`.
    pub fn equivalence(&self) -> Result<(OverIndex, EquivWitness), HomotopyError> {
        let (x, u) = (&self.x, &self.u);
        let (a, b) = (u.dom.clone(), x.shape.clone());
        let ux = x.restrict_unchecked(u);
        let p = over_objects(&self.map)?;
        let section = |c: usize, o: &Obj<usize>| -> Obj<usize> {
            let idc = a.id(c);
            match o {
                Obj::Pt { al, x: p, .. } => Obj::Pt { a: c, al: idc, x: x.act(*al, *p) },
                Obj::Tup { al, x: p, al2, x2, .. } => Obj::Tup {
                    a: c,
                    al: idc,
                    x: x.act(b.comp(*al2, *al), *p),
                    a2: c,
                    al2: idc,
                    x2: x.act(*al2, *x2),
                    xi: vec![omega_section_wit(x, u.obj[c], o)],
                },
            }
        };
        let (s, arrows) = section_from(&self.tgt, &self.src, section)?;
        // b → usb in X̃_{uc}
        let st = Sum::new(&self.tgt);
        let pt_legs_b = |c: usize, o: &Obj<usize>| -> Vec<Leg<usize>> {
            let Obj::Pt { a: b0, al, x: p } = o else { unreachable!() };
            let uc = u.obj[c];
            let q = x.act(*al, *p);
            let t = Obj::Tup { a: *b0, al: *al, x: *p, a2: uc, al2: b.id(uc), x2: q, xi: vec![x.objs[uc].r(q)] };
            vec![bwd(t.clone(), true), fwd(t, false)]
        };
        let mut back_b = Vec::new();
        for (c, objs) in self.tgt.objects.iter().enumerate() {
            for o in objs {
                let legs = match o {
                    Obj::Pt { .. } => pt_legs_b(c, o),
                    Obj::Tup { .. } => {
                        let usb = omega_obj(u, &section(c, o));
                        let mut legs = vec![fwd(o.clone(), true)];
                        legs.extend(pt_legs_b(c, &o.left(&b).unwrap()));
                        legs.push(bwd(usb, true));
                        legs
                    }
                };
                back_b.push(st.zigzag(c, o, &legs)?);
            }
        }
        // a → sua in (u*X)~_c
        let ss = Sum::new(&self.src);
        let pt_legs_a = |c: usize, o: &Obj<usize>| -> Vec<Leg<usize>> {
            let Obj::Pt { a: a0, al, x: p } = o else { unreachable!() };
            let q = ux.act(*al, *p);
            let t = Obj::Tup { a: *a0, al: *al, x: *p, a2: c, al2: a.id(c), x2: q, xi: vec![ux.objs[c].r(q)] };
            vec![bwd(t.clone(), true), fwd(t, false)]
        };
        let mut back_a = Vec::new();
        for (c, objs) in self.src.objects.iter().enumerate() {
            for o in objs {
                let legs = match o {
                    Obj::Pt { .. } => pt_legs_a(c, o),
                    Obj::Tup { .. } => {
                        let sua = section(c, &omega_obj(u, o));
                        let mut legs = vec![fwd(o.clone(), true)];
                        legs.extend(pt_legs_a(c, &o.left(&a).unwrap()));
                        legs.push(bwd(sua, true));
                        legs
                    }
                };
                back_a.push(ss.zigzag(c, o, &legs)?);
            }
        }
        Ok((p, EquivWitness::Sex { s, arrows, back_b, back_a }))
    }

    pub fn check_equivalence(&self) -> Result<Verdict<()>, HomotopyError> {
        let (p, w) = self.equivalence()?;
        Ok(match validate_sex(&p, &w) {
            Ok(()) => Verdict::pass((), format!("Σω over ob {} with {} objects", self.u.dom.name(), self.tgt.size())),
            Err(e) => Verdict::fail(e),
        })
    }

    /// `ω_{X,1} = 1`.
    pub fn is_identity(&self) -> bool {
        same_map(&self.map, &identity_map(&self.src.diagram))
    }
}

/// `ω_{X,vu} = u*ω_{X,v} ∘ ω_{v*X,u}`, with every map built and validated.
pub fn omega_triangle(x: &CoherentDiagram, u: &Functor, v: &Functor, cap: usize) -> Result<Verdict<()>, HomotopyError> {
    let pools = Pools::new(x, cap);
    let vu = u.then(v);
    let whole = omega_with(x, &vu, &pools)?;
    let outer = omega_with(x, v, &pools)?;
    let inner = omega_with(&x.restrict_unchecked(v), u, &pools.restrict(v))?;
    let outer_u = outer.src.restrict(u)?;
    let outer_map = strict_map("u*ω", &outer_u, &whole.tgt, |_, o| omega_obj(v, o))?;
    let inner_map = strict_map("ω", &whole.src, &outer_u, |_, o| omega_obj(u, o))?;
    if !inner.src.objects.iter().zip(&whole.src.objects).all(|(a, b)| a == b) {
        return Ok(Verdict::fail("(u*v*X)~ and ((vu)*X)~ differ"));
    }
    Ok(if same_map(&then_map(&inner_map, &outer_map), &whole.map) {
        Verdict::pass((), "ω_{vu} = u*ω_v ∘ ω_u")
    } else {
        Verdict::fail("the composite differs from ω_{vu}")
    })
}

/// `u*f̃ ∘ ω_X = ω_Y ∘ (u*f)~`.
pub fn omega_square(f: &DiagMor, u: &Functor, cap: usize) -> Result<Verdict<()>, HomotopyError> {
    let (x, y) = (&f.dom, &f.cod);
    let px = Pools::new(x, cap);
    let ox = omega_with(x, u, &px)?;
    let mut py = Pools::new(y, cap);
    for o in ox.tilde.objects.iter().flatten() {
        py.absorb_obj(&tilde_obj(f, o));
    }
    let oy = omega_with(y, u, &py)?;
    let uf = f.restrict(u);
    let top = strict_map("(u*f)~", &ox.src, &oy.src, |_, o| tilde_obj(&uf, o))?;
    let bottom = strict_map("u*f~", &ox.tgt, &oy.tgt, |_, o| tilde_obj(f, o))?;
    Ok(if same_map(&then_map(&ox.map, &bottom), &then_map(&top, &oy.map)) {
        Verdict::pass((), "ω is strictly natural")
    } else {
        Verdict::fail("the ω square does not commute")
    })
}

// ---------------------------------------------------------------------------
// The action ⊙

/// `E⊙M = (p_E × 1)_! π₂*M` over `A × B`.
pub struct Odot {
    pub groth: Grothendieck,
    /// `p_E × 1: ∫E × B → A × B`.
    pub index: Functor,
    /// `π₂: ∫E × B → B`.
    pub second: Functor,
    pub kan: LeftKan,
}

impl Odot {
    pub fn value(&self) -> &CoherentDiagram {
        &self.kan.value
    }
}

pub fn odot(e: &CatDiagram, m: &CoherentDiagram) -> Result<Odot, HomotopyError> {
    odot_over(grothendieck(e)?, m)
}

fn odot_over(groth: Grothendieck, m: &CoherentDiagram) -> Result<Odot, HomotopyError> {
    let b = m.shape.clone();
    let (_, _, second) = product(&groth.cat, &b);
    let index = product_functor(&groth.proj, &Functor::identity(&b));
    let kan = left_kan(&index, &m.restrict_unchecked(&second))?;
    Ok(Odot { groth, index, second, kan })
}

fn terminal_over(c: &Cat) -> CoherentDiagram {
    CoherentDiagram::constant(c, &Setoid::terminal())
}

/// `E⊙∗` directly over `A`: `(p_E)_!` of the terminal diagram.
fn star_over(groth: &Grothendieck) -> Result<LeftKan, HomotopyError> {
    Ok(left_kan(&groth.proj, &terminal_over(&groth.cat))?)
}

/// `A → A × ONE`, which is the identity on indices.
fn along_one(a: &Cat, prod: &Cat) -> Functor {
    Functor::new_unchecked(a.clone(), prod.clone(), (0..a.n_objects()).collect(), (0..a.n_arrows()).collect())
}

/// Whether `u⊙M` is invertible, decided through `Σ_a u_a` over `ob A`.
pub fn odot_inverts(u: &CatDiagramMap, m: &CoherentDiagram) -> Result<Verdict<()>, HomotopyError> {
    let p = over_objects(u)?;
    let v = equiv_check(Theory::Sex, &p);
    if !v.holds {
        return Ok(Verdict::fail(format!("Σu is not a sex-equivalence: {}", v.note)));
    }
    let (ge, gf) = (grothendieck(&u.dom)?, grothendieck(&u.cod)?);
    let a = &u.dom.shape;
    let gu = groth_map(&u.comps, &Functor::identity(a), &ge, &gf)?;
    let b = Functor::identity(&m.shape);
    let (_, _, second) = product(&gf.cat, &m.shape);
    let cmp = kan_comparison(&product_functor(&gu, &b), &product_functor(&gf.proj, &b), &m.restrict_unchecked(&second))?;
    let iso = is_iso_diag(&cmp.map);
    Ok(if iso.holds {
        Verdict::pass((), format!("Σu is a sex-equivalence and u⊙{} is invertible", m.name))
    } else {
        Verdict::fail(format!("Σu is a sex-equivalence but u⊙{} is not invertible: {}", m.name, iso.note))
    })
}

// ---------------------------------------------------------------------------
// X̃⊙∗ ≅ X

/// `X_{γα}(x)` for a triple, `X_{γα'}(x')` for a tuple.
fn tilde_point(x: &CoherentDiagram, o: &Obj<usize>, gamma: usize) -> usize {
    let s = &x.shape;
    match o {
        Obj::Pt { al, x: p, .. } => x.act(s.comp(gamma, *al), *p),
        Obj::Tup { al2, x2, .. } => x.act(s.comp(gamma, *al2), *x2),
    }
}

fn comma_arrows(c: &Comma) -> HashMap<(usize, usize), usize> {
    c.arrows.iter().enumerate().map(|(k, &(psi, _))| ((c.cat.src(k), psi), k)).collect()
}

/// Words in the colimits of `(p_E)_!` of the terminal diagram.
struct StarWords<'a> {
    tilde: &'a Strict<usize>,
    groth: &'a Grothendieck,
    kan: &'a LeftKan,
    arrows: Vec<HashMap<(usize, usize), usize>>,
}

impl<'a> StarWords<'a> {
    fn new(tilde: &'a Strict<usize>, groth: &'a Grothendieck, kan: &'a LeftKan) -> Self {
        StarWords { tilde, groth, kan, arrows: kan.commas.iter().map(comma_arrows).collect() }
    }

    fn gobj(&self, c: usize, o: &Obj<usize>) -> Result<usize, HomotopyError> {
        let i = self.tilde.find(c, o).ok_or_else(|| {
            not_strict(&self.tilde.name, format!("{} is missing", o.label(&self.tilde.base.cod)))
        })?;
        Ok(self.groth.object(c, i))
    }

    /// The comma object `(o, γ)` over `at`.
    fn cobj(&self, at: usize, o: usize, gamma: usize) -> Result<usize, HomotopyError> {
        self.kan.commas[at].find_object(o, 0, gamma).ok_or_else(|| not_strict("X~⊙∗", "comma object missing"))
    }

    fn point(&self, at: usize, k: usize) -> usize {
        self.kan.colims[at].point(k, 0)
    }

    fn step(&self, at: usize, k: usize, psi: usize, forward: bool) -> Result<(Step, usize), HomotopyError> {
        let a = *self.arrows[at].get(&(k, psi)).ok_or_else(|| not_strict("X~⊙∗", "comma arrow missing"))?;
        let gen = self.kan.colims[at].gens.gen(a, 0, Setoid::terminal().r(0));
        let next = self.kan.commas[at].cat.dst(a);
        Ok((Step { gen, forward }, next))
    }

    /// A collapse of the tuple `t` of `X̃_c`, seen in the colimit over `at`
    /// through `γ: c → at`; returns the comma objects of `t` and of the
    /// collapse target.
    fn leg(&self, at: usize, c: usize, t: &Obj<usize>, left: bool, gamma: usize) -> Result<(usize, usize, usize), HomotopyError> {
        let v = &self.tilde.base.cod;
        let go = self.gobj(c, t)?;
        let (l, r) = self.tilde.legs(c, self.tilde.find(c, t).unwrap()).expect("tuples have collapses");
        let psi = self.groth.arrow(go, v.id(c), if left { l } else { r }).expect("collapse in ∫");
        let k = self.cobj(at, go, gamma)?;
        let a = *self.arrows[at].get(&(k, psi)).ok_or_else(|| not_strict("X~⊙∗", "comma arrow missing"))?;
        Ok((k, a, self.kan.commas[at].cat.dst(a)))
    }

    fn gen(&self, at: usize, a: usize) -> Gen {
        self.kan.colims[at].gens.gen(a, 0, Setoid::terminal().r(0))
    }

    /// `[bwd L_T, fwd R_T]` from the left collapse of `t` to its right one.
    fn across(&self, at: usize, c: usize, t: &Obj<usize>, gamma: usize) -> Result<Vec<Step>, HomotopyError> {
        let (_, l, _) = self.leg(at, c, t, true, gamma)?;
        let (_, r, _) = self.leg(at, c, t, false, gamma)?;
        Ok(vec![Step { gen: self.gen(at, l), forward: false }, Step { gen: self.gen(at, r), forward: true }])
    }
}

/// The isomorphism `X̃⊙∗ ≅ X` with both round-trip witnesses.
pub struct SelfOdot {
    pub g: DiagMor,
    pub h: DiagMor,
    /// `g h ∼ 1_X`.
    pub gh: DiagEqWitness,
    /// `h g ∼ 1`.
    pub hg: DiagEqWitness,
}

impl SelfOdot {
    pub fn validate(&self) -> Result<(), HomotopyError> {
        let gh = compose_diag_unchecked(&self.h, &self.g);
        self.gh
            .validate(&gh, &DiagMor::identity(&self.g.cod))
            .map_err(|e| HomotopyError::InvalidWitness(format!("g h ∼ 1: {}", e)))?;
        let hg = compose_diag_unchecked(&self.g, &self.h);
        self.hg
            .validate(&hg, &DiagMor::identity(&self.g.dom))
            .map_err(|e| HomotopyError::InvalidWitness(format!("h g ∼ 1: {}", e)))
    }
}

/// Witnesses `h_{c,1}` is defined on: generators of a free `X_c`, all of a
/// finite one.
fn h1_domain(xc: &Setoid, cap: usize) -> Result<Vec<Wit>, HomotopyError> {
    if let Some(g) = xc.generators() {
        let all = g.all().ok_or_else(|| HomotopyError::Unsupported(format!("{} has infinitely many generators", xc.name())))?;
        Ok(all.into_iter().map(eta).collect())
    } else if xc.x1_finite() {
        Ok(xc.witness_pool(cap))
    } else {
        Err(HomotopyError::Unsupported(format!("{} has an infinite X1 that is not free", xc.name())))
    }
}

/// Pools containing every tuple used by `g`, `h` and the round trips.
pub fn self_odot_pools(x: &CoherentDiagram, cap: usize) -> Result<Pools, HomotopyError> {
    let mut p = Pools::new(x, cap);
    for (c, xc) in x.objs.iter().enumerate() {
        for q in 0..xc.size0() {
            p.add_wit(c, xc.r(q));
        }
        for w in h1_domain(xc, cap)? {
            p.add_wit(c, xc.m(&xc.v(&x.unit[c][xc.s(&w)]), &w));
        }
    }
    Ok(p)
}

/// `g`, `h` and the round trips for `X̃⊙∗` computed as `kan`, a left Kan
/// extension along `p_{X̃}` of the terminal diagram.
pub fn self_odot_from(
    x: &CoherentDiagram,
    tilde: &Strict<usize>,
    groth: &Grothendieck,
    kan: &LeftKan,
    cap: usize,
) -> Result<SelfOdot, HomotopyError> {
    let s = &x.shape;
    let sw = StarWords::new(tilde, groth, kan);
    let term = Setoid::terminal();
    let obj_at = |o: usize| {
        let (c0, ei) = groth.objects[o];
        &tilde.objects[c0][ei]
    };
    // g
    let mut g_comps = Vec::new();
    for c in 0..s.n_objects() {
        let (comma, colim) = (&kan.commas[c], &kan.colims[c]);
        let xc = &x.objs[c];
        let g0: Vec<usize> = comma.objects.iter().map(|&(o, _, gam)| tilde_point(x, obj_at(o), gam)).collect();
        let comps = g0
            .iter()
            .map(|&p| MorRep::by_search(term.clone(), xc.clone(), vec![p]).map_err(CoherentError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let nat = comma
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &(psi, _))| {
                let (src, dst) = (comma.cat.src(k), comma.cat.dst(k));
                let (o, _, gam) = comma.objects[src];
                let (delta, phi) = groth.arrows[psi];
                let c1 = s.dst(delta);
                let fiber = &tilde.diagram.fibers[c1];
                let w = match obj_at(o) {
                    Obj::Tup { al, x: p, al2, xi, .. } if !fiber.is_identity(phi) => {
                        let (l, _) = tilde.legs(c1, fiber.src(phi)).expect("tuple");
                        if phi == l {
                            let beta = s.comp(gam, *al2);
                            xc.m(&xc.v(&x.act1(beta, &xi[0])), x.comp_at(*al, beta, *p))
                        } else {
                            xc.r(g0[dst])
                        }
                    }
                    _ => xc.r(g0[dst]),
                };
                vec![w]
            })
            .collect();
        let cocone = DiagMor::new(colim.diagram.clone(), CoherentDiagram::constant(&comma.cat, xc), comps, nat)?;
        g_comps.push(colim.factor(xc, &cocone));
    }
    let g_nat = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(delta, ar)| {
            let (comma, colim) = (&kan.commas[ar.src], &kan.colims[ar.src]);
            (0..colim.setoid.size0())
                .map(|q| {
                    let (k, _) = colim.locate(q);
                    let (o, _, gam) = comma.objects[k];
                    match obj_at(o) {
                        Obj::Pt { al, x: p, .. } => x.comp_at(s.comp(gam, *al), delta, *p).clone(),
                        Obj::Tup { al2, x2, .. } => x.comp_at(s.comp(gam, *al2), delta, *x2).clone(),
                    }
                })
                .collect()
        })
        .collect();
    let g = DiagMor::new(kan.value.clone(), x.clone(), g_comps, g_nat)?;

    // h
    let home = |c: usize, p: usize| -> Result<usize, HomotopyError> {
        let go = sw.gobj(c, &Obj::Pt { a: c, al: s.id(c), x: p })?;
        sw.cobj(c, go, s.id(c))
    };
    let mut h_comps = Vec::new();
    for c in 0..s.n_objects() {
        let xc = &x.objs[c];
        let h0: Vec<usize> =
            (0..xc.size0()).map(|p| Ok(sw.point(c, home(c, p)?))).collect::<Result<_, HomotopyError>>()?;
        let mut table = HashMap::new();
        for w in h1_domain(xc, cap)? {
            let (a, b) = (xc.s(&w), xc.t(&w));
            let t = Obj::Tup {
                a: c,
                al: s.id(c),
                x: a,
                a2: c,
                al2: s.id(c),
                x2: b,
                xi: vec![xc.m(&xc.v(&x.unit[c][a]), &w)],
            };
            let steps = sw.across(c, c, &t, s.id(c))?;
            table.insert(w, Wit::Word(Word { start: h0[a], steps }));
        }
        let lc = kan.value.objs[c].clone();
        let rep = if xc.generators().is_some() {
            free_extend_unchecked(xc, &lc, h0, move |g: &Gen| table[&eta(g.clone())].clone())
        } else {
            let name = xc.name().to_string();
            MorRep::new_unchecked(
                xc.clone(),
                lc,
                h0,
                Arc::new(move |w: &Wit| {
                    table.get(w).cloned().unwrap_or_else(|| panic!("{} is not a witness of {}", w, name))
                }),
            )
        };
        h_comps.push(rep);
    }
    let mut h_nat = Vec::new();
    for (gam, ar) in s.arrows().iter().enumerate() {
        let (c, c2) = (ar.src, ar.dst);
        let mut col = Vec::new();
        for p in 0..x.objs[c].size0() {
            let go = sw.gobj(c, &Obj::Pt { a: c, al: s.id(c), x: p })?;
            let k = sw.cobj(c2, go, gam)?;
            let lift = groth.lift(&tilde.diagram, go, gam);
            let (st, _) = sw.step(c2, k, lift, true)?;
            let q = x.act(gam, p);
            let t0 = Obj::Tup { a: c, al: gam, x: p, a2: c2, al2: s.id(c2), x2: q, xi: vec![x.objs[c2].r(q)] };
            let mut steps = vec![st];
            steps.extend(sw.across(c2, c2, &t0, s.id(c2))?);
            col.push(Wit::Word(Word { start: sw.point(c2, k), steps }));
        }
        h_nat.push(col);
    }
    let h = DiagMor::new(x.clone(), kan.value.clone(), h_comps, h_nat)?;

    // round trips
    let gh = DiagEqWitness {
        h: (0..s.n_objects()).map(|c| (0..x.objs[c].size0()).map(|p| x.objs[c].v(&x.unit[c][p])).collect()).collect(),
    };
    let mut hg = Vec::new();
    for c in 0..s.n_objects() {
        let (comma, colim) = (&kan.commas[c], &kan.colims[c]);
        let mut col = Vec::new();
        for q in 0..colim.setoid.size0() {
            let (k, _) = colim.locate(q);
            let (o, _, gam) = comma.objects[k];
            let lift = groth.lift(&tilde.diagram, o, gam);
            let (st, _) = sw.step(c, k, lift, true)?;
            let mut steps = vec![st];
            let e2 = obj_at(o).act(s, gam);
            let pt = match &e2 {
                Obj::Tup { .. } => {
                    let (_, r, _) = sw.leg(c, c, &e2, false, s.id(c))?;
                    steps.push(Step { gen: sw.gen(c, r), forward: true });
                    e2.right().unwrap()
                }
                Obj::Pt { .. } => e2.clone(),
            };
            let Obj::Pt { a, al: beta, x: y } = pt else { unreachable!() };
            let z = x.act(beta, y);
            let t = Obj::Tup { a, al: beta, x: y, a2: c, al2: s.id(c), x2: z, xi: vec![x.objs[c].r(z)] };
            steps.extend(sw.across(c, c, &t, s.id(c))?);
            col.push(Wit::Word(Word { start: q, steps }.reversed()));
        }
        hg.push(col);
    }
    let out = SelfOdot { g, h, gh, hg: DiagEqWitness { h: hg } };
    out.validate()?;
    Ok(out)
}

/// `X̃⊙∗ ≅ X` at a cap.
pub fn self_odot_iso(x: &CoherentDiagram, cap: usize) -> Result<SelfOdot, HomotopyError> {
    let tilde = tilde_with(x, &self_odot_pools(x, cap)?)?;
    let groth = grothendieck(&tilde.diagram)?;
    let kan = star_over(&groth)?;
    self_odot_from(x, &tilde, &groth, &kan, cap)
}

/// `f̃⊙∗` between the isomorphisms for `X` and `Y`: `h_Y f = (f̃⊙∗) h_X`
/// on points and `g_Y (f̃⊙∗) ∼ f g_X`.
pub fn self_odot_naturality(f: &DiagMor, cap: usize) -> Result<Verdict<()>, HomotopyError> {
    let (x, y) = (&f.dom, &f.cod);
    let tx = tilde_with(x, &self_odot_pools(x, cap)?)?;
    let mut py = self_odot_pools(y, cap)?;
    for o in tx.objects.iter().flatten() {
        py.absorb_obj(&tilde_obj(f, o));
    }
    let ty = tilde_with(y, &py)?;
    let ft = strict_map("f~", &tx, &ty, |_, o| tilde_obj(f, o))?;
    let (gx, gy) = (grothendieck(&tx.diagram)?, grothendieck(&ty.diagram)?);
    let s = &x.shape;
    let gf = groth_map(&ft.comps, &Functor::identity(s), &gx, &gy)?;
    let cmp = kan_comparison(&gf, &gy.proj, &terminal_over(&gy.cat))?;
    let sx = self_odot_from(x, &tx, &gx, &cmp.src, cap)?;
    let sy = self_odot_from(y, &ty, &gy, &cmp.dst, cap)?;
    for c in 0..s.n_objects() {
        let (fc, m) = (&f.comps[c].f0, &cmp.map.comps[c].f0);
        for p in 0..x.objs[c].size0() {
            if m[sx.h.comps[c].f0[p]] != sy.h.comps[c].f0[fc[p]] {
                return Ok(Verdict::fail(format!("h square fails at {} in {}", p, s.object_label(c))));
            }
        }
        for q in 0..cmp.src.value.objs[c].size0() {
            let (a, b) = (sy.g.comps[c].f0[m[q]], fc[sx.g.comps[c].f0[q]]);
            if y.objs[c].related(a, b).is_none() {
                return Ok(Verdict::fail(format!("g square fails at point {} over {}", q, s.object_label(c))));
            }
        }
    }
    Ok(Verdict::pass((), format!("{}: both squares commute", f.dom.name)))
}

// ---------------------------------------------------------------------------
// Cocontinuity

/// The reduction for `u: A → I` with `I` discrete: `∫ωη̃` is a
/// sex-equivalence over `I` (checked with explicit witnesses), and the
/// comparison `(u×1)_!(X⊙̃M) → (u_!X)⊙̃M` is invertible.
pub fn cocontinuity_check(
    u: &Functor,
    x: &CoherentDiagram,
    m: &CoherentDiagram,
    cap: usize,
) -> Result<Verdict<()>, HomotopyError> {
    if !u.cod.is_discrete() {
        return Err(HomotopyError::Unsupported(format!("{} is not discrete", u.cod.name())));
    }
    if *u.dom != *x.shape {
        return Err(CoherentError::Shape(format!("{} is not over {}", x.name, u.dom.name())).into());
    }
    let (a, i) = (&u.dom, &u.cod);
    let lx = left_kan(u, x)?;
    let l = &lx.value;
    let eta_x = &lx.unit;
    let image = |o: &Obj<usize>| omega_obj(u, &tilde_obj(eta_x, o));
    let ((tx, tl), _) = close(&format!("∫ωη~ for {}", x.name), vec![Pools::new(x, cap), Pools::canonical(l)], |ps| {
        let tx = tilde_with(x, &ps[0])?;
        let tl = tilde_with(l, &ps[1])?;
        let mut nx = Pools::empty(a.n_objects());
        let mut nl = Pools::empty(i.n_objects());
        for o in tx.objects.iter().flatten() {
            nl.absorb_obj(&image(o));
        }
        for (c, objs) in tl.objects.iter().enumerate() {
            let comma = &lx.commas[c];
            for o in objs {
                if let Obj::Tup { xi, .. } = o {
                    if let Wit::Word(w) = &xi[0] {
                        for st in &w.steps {
                            if let GenLabel::Cocone { arrow, wit, .. } = &st.gen.label {
                                let a2 = comma.objects[comma.cat.dst(*arrow)].0;
                                nx.add_wit(a2, (**wit).clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(((tx, tl), vec![nx, nl]))
    })?;
    let (gx, gl) = (grothendieck(&tx.diagram)?, grothendieck(&tl.diagram)?);
    let tlu = tl.restrict(u)?;
    let om = strict_map("ωη~", &tx, &tlu, |_, o| image(o))?;
    let w = groth_map(&om.comps, u, &gx, &gl)?;
    let p = OverIndex::new(w.clone(), gl.proj.clone())?;

    let gobj_x = |c: usize, o: &Obj<usize>| -> Result<usize, HomotopyError> {
        let k = tx.find(c, o).ok_or_else(|| not_strict("X~", format!("{} is missing", o.label(a))))?;
        Ok(gx.object(c, k))
    };
    let pt1 = |c: usize, q: usize| Obj::Pt { a: c, al: a.id(c), x: q };
    // s
    let mut s = Vec::new();
    for &(c, ei) in &gl.objects {
        let q = match &tl.objects[c][ei] {
            Obj::Pt { x: q, .. } | Obj::Tup { x: q, .. } => *q,
        };
        let (kk, x0) = lx.colims[c].locate(q);
        let a0 = lx.commas[c].objects[kk].0;
        s.push(gobj_x(a0, &pt1(a0, x0))?);
    }
    // Z(α, x, ξ) from (a, (a, 1, x)) to (a', (a', 1, tξ))
    let z = |al: usize, p: usize, xi: &Wit| -> Result<Zigzag, HomotopyError> {
        let (c, c2) = (a.src(al), a.dst(al));
        let start = gobj_x(c, &pt1(c, p))?;
        let lift = gx.lift(&tx.diagram, start, al);
        let y = x.objs[c2].t(xi);
        let t2 = Obj::Tup { a: c, al, x: p, a2: c2, al2: a.id(c2), x2: y, xi: vec![xi.clone()] };
        let ti = tx.find(c2, &t2).ok_or_else(|| not_strict("X~", format!("{} is missing", t2.label(a))))?;
        let (lo, ro) = tx.legs(c2, ti).unwrap();
        let go = gx.object(c2, ti);
        let (gl_, gr_) = (gx.arrow(go, a.id(c2), lo).unwrap(), gx.arrow(go, a.id(c2), ro).unwrap());
        Ok(Zigzag {
            start,
            end: gobj_x(c2, &pt1(c2, y))?,
            steps: vec![(lift, Dir::Forward), (gl_, Dir::Backward), (gr_, Dir::Forward)],
        })
    };
    let mut arrows = Vec::new();
    for (k, &(_, phi)) in gl.arrows.iter().enumerate() {
        let src = gl.cat.src(k);
        let (c, ei) = gl.objects[src];
        let fiber = &tl.diagram.fibers[c];
        let right = tl.legs(c, ei).map(|(_, r)| r == phi).unwrap_or(false) && !fiber.is_identity(phi);
        if !right {
            arrows.push(Zigzag::empty(s[src]));
            continue;
        }
        let Obj::Tup { xi, .. } = &tl.objects[c][ei] else { unreachable!() };
        let Wit::Word(word) = &xi[0] else {
            return Err(not_strict("L~", "tuple witness is not a word"));
        };
        let mut acc = Zigzag::empty(s[src]);
        for st in &word.steps {
            let GenLabel::Cocone { arrow, point, wit } = &st.gen.label else { unreachable!() };
            let al = lx.commas[c].arrows[*arrow].0;
            let piece = z(al, *point, wit)?;
            acc = acc.concat(&if st.forward { piece } else { piece.reversed() });
        }
        arrows.push(acc);
    }
    let mut back_b = Vec::new();
    for (k, &(c, ei)) in gl.objects.iter().enumerate() {
        back_b.push(match tl.legs(c, ei) {
            None => Zigzag::empty(k),
            Some((lo, _)) => {
                let ar = gl.arrow(k, i.id(c), lo).unwrap();
                Zigzag { start: k, end: gl.cat.dst(ar), steps: vec![(ar, Dir::Forward)] }
            }
        });
    }
    let mut back_a = Vec::new();
    for (k, &(c, ei)) in gx.objects.iter().enumerate() {
        let o = &tx.objects[c][ei];
        back_a.push(match o {
            Obj::Pt { a: a0, al, x: p } => {
                let home = gobj_x(*a0, &pt1(*a0, *p))?;
                Zigzag { start: k, end: home, steps: vec![(gx.lift(&tx.diagram, home, *al), Dir::Backward)] }
            }
            Obj::Tup { a: a0, al, x: p, al2, .. } => {
                let (lo, _) = tx.legs(c, ei).unwrap();
                let first = gx.arrow(k, a.id(c), lo).unwrap();
                let home = gobj_x(*a0, &pt1(*a0, *p))?;
                let lift = gx.lift(&tx.diagram, home, a.comp(*al2, *al));
                Zigzag { start: k, end: home, steps: vec![(first, Dir::Forward), (lift, Dir::Backward)] }
            }
        });
    }
    let witness = EquivWitness::Sex { s, arrows, back_b, back_a };
    if let Err(e) = validate_sex(&p, &witness) {
        return Ok(Verdict::fail(format!("∫ωη~ witness: {}", e)));
    }

    let idb = Functor::identity(&m.shape);
    let (_, _, second) = product(&gl.cat, &m.shape);
    let cmp = kan_comparison(&product_functor(&w, &idb), &product_functor(&gl.proj, &idb), &m.restrict_unchecked(&second))?;
    let iso = is_iso_diag(&cmp.map);
    let sizes = |d: &CoherentDiagram| d.quotient().1.iter().map(|q| q.size).collect::<Vec<_>>();
    let (lhs, rhs) = (sizes(&cmp.src.value), sizes(&cmp.dst.value));
    // the same left side computed literally as (u×1)_!(X̃⊙M)
    let xm = odot(&tx.diagram, m)?;
    let literal = left_kan(&product_functor(u, &idb), xm.value())?;
    if sizes(&literal.value) != lhs {
        return Ok(Verdict::fail(format!("(u×1)_!(X⊙M) has classes {:?}, the comparison source {:?}", sizes(&literal.value), lhs)));
    }
    Ok(if iso.holds {
        Verdict::pass((), format!("∫ωη~ is a sex-equivalence; classes {:?} ≅ {:?}", lhs, rhs))
    } else {
        Verdict::fail(format!("comparison is not invertible ({:?} vs {:?}): {}", lhs, rhs, iso.note))
    })
}

// ---------------------------------------------------------------------------
// −⊙̃M

/// `X̃⊙M` for `M` over `ONE`, read over `A`, with the projection of each
/// point to `(g_0 point of X, point of M)`.
pub struct TildeOdot {
    pub x: CoherentDiagram,
    pub tilde: Strict<usize>,
    pub odot: Odot,
    pub value: CoherentDiagram,
}

impl TildeOdot {
    pub fn new(x: &CoherentDiagram, m: &CoherentDiagram, pools: &Pools) -> Result<Self, HomotopyError> {
        if m.shape.n_objects() != 1 || m.shape.n_arrows() != 1 {
            return Err(HomotopyError::Unsupported(format!("{} is not over the point", m.name)));
        }
        let tilde = tilde_with(x, pools)?;
        let odot = odot(&tilde.diagram, m)?;
        let value = odot.kan.value.restrict_unchecked(&along_one(&x.shape, &odot.kan.value.shape));
        Ok(TildeOdot { x: x.clone(), tilde, odot, value })
    }

    pub fn project(&self, a: usize, q: usize) -> (usize, usize) {
        project_point(&self.x, &self.tilde, &self.odot.groth, &self.odot.kan, a, q)
    }
}

/// For `X̃⊙M` with `M` over `ONE`: the point behind `q` over `a`.
fn project_point(
    x: &CoherentDiagram,
    tilde: &Strict<usize>,
    groth: &Grothendieck,
    kan: &LeftKan,
    a: usize,
    q: usize,
) -> (usize, usize) {
    let (k, y) = kan.colims[a].locate(q);
    let (o, _, gam) = kan.commas[a].objects[k];
    let (c0, ei) = groth.objects[o];
    (tilde_point(x, &tilde.objects[c0][ei], gam), y)
}

/// Point maps turned into the maps [`iso_in_theory`] compares.
fn theory_maps(theory: Theory, dom: &CoherentDiagram, cod: &CoherentDiagram, f0: &[Vec<usize>]) -> Vec<Vec<usize>> {
    match theory {
        Theory::Set => {
            let (qd, qc) = (dom.quotient().1, cod.quotient().1);
            f0.iter().enumerate().map(|(a, f)| (0..qd[a].size).map(|c| qc[a].class[f[qd[a].rep[c]]]).collect()).collect()
        }
        _ => f0.to_vec(),
    }
}

pub struct FreeCocompletion {
    pub value: Reflected,
    /// `∗⊙̃M ≅ M`.
    pub unit_law: Verdict<()>,
    /// `X⊙̃M ≅ LX × M`.
    pub distributive: Verdict<()>,
}

/// `X⊙̃M = L(X̃⊙M)` with the unit law and distributivity checked.
pub fn free_cocompletion_map(
    theory: Theory,
    m: &CoherentDiagram,
    x: &CoherentDiagram,
    cap: usize,
) -> Result<FreeCocompletion, HomotopyError> {
    let xm = TildeOdot::new(x, m, &Pools::new(x, cap))?;
    let value = reflect(theory, &xm.value)?;

    let star = terminal_over(&m.shape).named("TERM");
    let sm = TildeOdot::new(&star, m, &Pools::new(&star, cap))?;
    let to_m: Vec<Vec<usize>> = vec![(0..sm.value.objs[0].size0()).map(|q| sm.project(0, q).1).collect()];
    let unit_ok = iso_in_theory(&reflect(theory, &sm.value)?, &reflect(theory, m)?, &theory_maps(theory, &sm.value, m, &to_m));
    let unit_law = if unit_ok {
        Verdict::pass((), format!("∗⊙~{} ≅ {} in {}", m.name, m.name, theory))
    } else {
        Verdict::fail(format!("∗⊙~{} differs from {} in {}", m.name, m.name, theory))
    };

    let (prod, _, _) = product_diag(x, &CoherentDiagram::constant(&x.shape, &m.objs[0]))?;
    let ny = m.objs[0].size0();
    let pairs: Vec<Vec<usize>> = (0..x.shape.n_objects())
        .map(|a| {
            (0..xm.value.objs[a].size0())
                .map(|q| {
                    let (p, y) = xm.project(a, q);
                    p * ny + y
                })
                .collect()
        })
        .collect();
    let dist_ok = iso_in_theory(&value, &reflect(theory, &prod)?, &theory_maps(theory, &xm.value, &prod, &pairs));
    let distributive = if dist_ok {
        Verdict::pass((), format!("{}⊙~{} ≅ L{} × {} in {}", x.name, m.name, x.name, m.name, theory))
    } else {
        Verdict::fail(format!("{}⊙~{} differs from L{} × {} in {}", x.name, m.name, x.name, m.name, theory))
    };
    Ok(FreeCocompletion { value, unit_law, distributive })
}

/// `L(∗)` as a diagram over the point.
pub fn reflected_point(theory: Theory) -> Result<CoherentDiagram, HomotopyError> {
    let star = terminal_over(&crate::fincat::one()).named("TERM");
    Ok(embed(&reflect(theory, &star)?)?.named(format!("L{}(∗)", theory)))
}

/// `X⊙̃L(∗) ≅ L(X)` along `g_0`.
pub fn universality_object(theory: Theory, x: &CoherentDiagram, cap: usize) -> Result<Verdict<()>, HomotopyError> {
    let ms = reflected_point(theory)?;
    let xm = TildeOdot::new(x, &ms, &Pools::new(x, cap))?;
    let g0: Vec<Vec<usize>> = (0..x.shape.n_objects())
        .map(|a| (0..xm.value.objs[a].size0()).map(|q| xm.project(a, q).0).collect())
        .collect();
    let ok = iso_in_theory(&reflect(theory, &xm.value)?, &reflect(theory, x)?, &theory_maps(theory, &xm.value, x, &g0));
    Ok(if ok {
        Verdict::pass((), format!("{}⊙~L(∗) ≅ L{} in {}", x.name, x.name, theory))
    } else {
        Verdict::fail(format!("{}⊙~L(∗) and L{} differ in {}", x.name, x.name, theory))
    })
}

/// The square for `f: X → Y` between `X ↦ X⊙̃L(∗)` and `X ↦ L(X)`:
/// `g_0(f̃⊙1 q)` and `f(g_0 q)` are related.
pub fn universality_square(theory: Theory, f: &DiagMor, cap: usize) -> Result<Verdict<()>, HomotopyError> {
    let ms = reflected_point(theory)?;
    let (x, y) = (&f.dom, &f.cod);
    let tx = tilde_with(x, &Pools::new(x, cap))?;
    let mut py = Pools::new(y, cap);
    for o in tx.objects.iter().flatten() {
        py.absorb_obj(&tilde_obj(f, o));
    }
    let ty = tilde_with(y, &py)?;
    let ft = strict_map("f~", &tx, &ty, |_, o| tilde_obj(f, o))?;
    let (gx, gy) = (grothendieck(&tx.diagram)?, grothendieck(&ty.diagram)?);
    let s = &x.shape;
    let gf = groth_map(&ft.comps, &Functor::identity(s), &gx, &gy)?;
    let one = Functor::identity(&ms.shape);
    let (_, _, second) = product(&gy.cat, &ms.shape);
    let cmp = kan_comparison(&product_functor(&gf, &one), &product_functor(&gy.proj, &one), &ms.restrict_unchecked(&second))?;
    for a in 0..s.n_objects() {
        for q in 0..cmp.src.value.objs[a].size0() {
            let (px, _) = project_point(x, &tx, &gx, &cmp.src, a, q);
            let (py, _) = project_point(y, &ty, &gy, &cmp.dst, a, cmp.map.comps[a].f0[q]);
            if y.objs[a].related(py, f.comps[a].f0[px]).is_none() {
                return Ok(Verdict::fail(format!("square fails at point {} over {}", q, s.object_label(a))));
            }
        }
    }
    Ok(Verdict::pass((), format!("natural along {} → {} in {}", x.name, y.name, theory)))
}

// ---------------------------------------------------------------------------
// Homotopies after ⊙

/// `ℓ⊙∗` and `r⊙∗` agree up to relatedness, for maps `ℓ, r` of diagrams of
/// categories into `T`, pointwise over the shape.
fn star_maps_agree(
    left: &CatDiagramMap,
    right: &CatDiagramMap,
    what: &str,
) -> Result<Verdict<()>, HomotopyError> {
    let (gs, gt) = (grothendieck(&left.dom)?, grothendieck(&left.cod)?);
    let id = Functor::identity(&left.dom.shape);
    let lm = groth_map(&left.comps, &id, &gs, &gt)?;
    let rm = groth_map(&right.comps, &id, &gs, &gt)?;
    let term = terminal_over(&gt.cat);
    let cl = kan_comparison(&lm, &gt.proj, &term)?;
    let cr = kan_comparison(&rm, &gt.proj, &term)?;
    let mut count = 0;
    for (a, tgt) in cl.dst.value.objs.iter().enumerate() {
        for (p, q) in cl.map.comps[a].f0.iter().zip(&cr.map.comps[a].f0) {
            if tgt.related(*p, *q).is_none() {
                return Ok(Verdict::fail(format!("{}: images {} and {} are unrelated", what, p, q)));
            }
            count += 1;
        }
    }
    Ok(Verdict::pass((), format!("{}: {} points agree", what, count)))
}

/// `σ⊙1_∗ = τ⊙1_∗` after reflection: pointwise relatedness, which is
/// equality of classes in `Set` and of related pairs in `Reg`; the `Pos`
/// and `Prop` reflections identify any two parallel maps.
pub fn rhtpy_quot(ps: &PathSpace) -> Result<Verdict<()>, HomotopyError> {
    star_maps_agree(&ps.sigma, &ps.tau, &format!("σ⊙∗ vs τ⊙∗ for {}", ps.x.name))
}

/// For equal representatives `f ∼ g`: the right homotopy built from the
/// witness, and `f̃⊙∗` against `g̃⊙∗`.
pub fn well_defined(f: &DiagMor, g: &DiagMor, cap: usize) -> Result<Verdict<()>, HomotopyError> {
    let Some(h) = equal_diag(f, g)? else {
        return Err(HomotopyError::InvalidWitness(format!("{} and {} are not equal", f.dom.name, g.dom.name)));
    };
    let hom = homotopy_from_witness(f, g, &h, cap)?;
    let hv = hom.verdict();
    if !hv.holds {
        return Ok(hv);
    }
    let (x, y) = (&f.dom, &f.cod);
    let tx = tilde_with(x, &Pools::new(x, cap))?;
    let mut py = Pools::new(y, cap);
    for o in tx.objects.iter().flatten() {
        py.absorb_obj(&tilde_obj(f, o));
        py.absorb_obj(&tilde_obj(g, o));
    }
    let ty = tilde_with(y, &py)?;
    let ft = strict_map("f~", &tx, &ty, |_, o| tilde_obj(f, o))?;
    let gt = strict_map("g~", &tx, &ty, |_, o| tilde_obj(g, o))?;
    star_maps_agree(&ft, &gt, "f~⊙∗ vs g~⊙∗")
}

/// `u*X ⊙̃ v*M → (u×v)*(X⊙̃M)` induced by `∫ω × v`, checked invertible.
pub fn pseudonaturality(
    x: &CoherentDiagram,
    u: &Functor,
    m: &CoherentDiagram,
    v: &Functor,
    cap: usize,
) -> Result<Verdict<()>, HomotopyError> {
    let om = omega_with(x, u, &Pools::new(x, cap))?;
    let (gs, gt) = (grothendieck(&om.src.diagram)?, grothendieck(&om.tilde.diagram)?);
    let gw = groth_map(&om.map.comps, u, &gs, &gt)?;
    let od1 = odot_over(gs, &m.restrict_unchecked(v))?;
    let od2 = odot_over(gt, m)?;
    let w = product_functor(&gw, v);
    let base = product_functor(u, v);
    let ac = &od1.kan.value.shape;
    let comps = (0..ac.n_objects())
        .map(|o| {
            let b = base.obj[o];
            comma_colimit_map(
                (&od1.kan.commas[o], &od1.kan.colims[o]),
                (&od2.kan.commas[b], &od2.kan.colims[b]),
                &w,
                &base,
            )
        })
        .collect::<Result<Vec<MorRep>, _>>()?;
    let cod = od2.kan.value.restrict_unchecked(&base);
    let nat = ac
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            (0..od1.kan.value.objs[ar.src].size0())
                .map(|q| cod.objs[ar.dst].r(comps[ar.dst].f0[od1.kan.value.act(be, q)]))
                .collect()
        })
        .collect();
    let map = DiagMor::new(od1.kan.value.clone(), cod, comps, nat)?;
    let iso = is_iso_diag(&map);
    Ok(if iso.holds {
        Verdict::pass((), format!("{}*{}⊙{}*{} ≅ ({}×{})*({}⊙{})", u.dom.name(), x.name, v.dom.name(), m.name, u.dom.name(), v.dom.name(), x.name, m.name))
    } else {
        Verdict::fail(iso.note)
    })
}

// ---------------------------------------------------------------------------
// Corpus runs

fn push(out: &mut Vec<Record>, check: &str, inst: impl Into<String>, v: Result<Verdict<()>, HomotopyError>) {
    let v = v.unwrap_or_else(|e| Verdict::fail(e.to_string()));
    out.push(Record::new(check, inst, &v));
}

/// Shapes whose objects carry at most `limit` points in total; larger
/// diagrams make the path-space enumeration expensive.
fn small(x: &CoherentDiagram, limit: usize) -> bool {
    x.objs.iter().map(Setoid::size0).sum::<usize>() <= limit
}

/// The strict-equality suite: path spaces, right homotopies from witnesses,
/// composites and identities, `ω` and its coherence, and `X̃⊙∗ ≅ X`.
pub fn homotopy_records(c: &Corpus, cap: usize) -> Vec<Record> {
    let mut out = Vec::new();
    for (n, x) in &c.diagrams {
        if small(x, 6) {
            match path_space(x, cap) {
                Ok(ps) => {
                    push(&mut out, "path-strict", n.as_str(), Ok(ps.check_strict()));
                    push(&mut out, "path-equiv", n.as_str(), ps.check_equivalences());
                }
                Err(e) => push(&mut out, "path-strict", n.as_str(), Err(e)),
            }
        }
        push(&mut out, "rhtpy-id", n.as_str(), identity_homotopy(x, cap).map(|h| h.verdict()));
        push(
            &mut out,
            "self-odot",
            n.as_str(),
            self_odot_iso(x, cap).and_then(|s| {
                s.validate()?;
                Ok(Verdict::pass((), format!("{} points", s.g.dom.objs.iter().map(Setoid::size0).sum::<usize>())))
            }),
        );
    }
    for (nf, f) in &c.morphisms {
        for (ng, g) in &c.morphisms {
            if f.dom.name == g.dom.name && f.cod.name == g.cod.name {
                if let Ok(Some(h)) = equal_diag(f, g) {
                    push(&mut out, "rhtpy", format!("{}~{}", nf, ng), homotopy_from_witness(f, g, &h, cap).map(|h| h.verdict()));
                }
            }
            if f.cod.name == g.dom.name {
                push(&mut out, "rhtpy-comp", format!("{};{}", nf, ng), homotopy_comp(f, g, cap).map(|h| h.verdict()));
            }
        }
        push(&mut out, "self-odot-nat", nf.as_str(), self_odot_naturality(f, cap));
    }
    for (nu, u) in &c.functors {
        for (nx, x) in c.diagrams_over(&u.cod) {
            let inst = format!("{}:{}", nu, nx);
            push(&mut out, "omega", inst.clone(), omega(x, u, cap).and_then(|o| o.check_equivalence()));
            for (nv, v) in &c.functors {
                if *v.cod == *u.dom {
                    push(&mut out, "omega-triangle", format!("{};{}:{}", nv, nu, nx), omega_triangle(x, v, u, cap));
                }
            }
        }
        for (nf, f) in &c.morphisms {
            if *f.dom.shape == *u.cod {
                push(&mut out, "omega-square", format!("{}:{}", nu, nf), omega_square(f, u, cap));
            }
        }
    }
    out.sort();
    out
}

/// `X⊙̃L(∗) ≅ L(X)` for every corpus diagram and its naturality square for
/// every corpus morphism.
pub fn universality_records(c: &Corpus, theories: &[Theory], cap: usize) -> Vec<Record> {
    let mut out = Vec::new();
    for &t in theories {
        for (n, x) in &c.diagrams {
            push(&mut out, &format!("universality-{}", t), n.as_str(), universality_object(t, x, cap));
        }
        for (n, f) in &c.morphisms {
            push(&mut out, &format!("naturality-{}", t), n.as_str(), universality_square(t, f, cap));
        }
    }
    out.sort();
    out
}

fn has_free(x: &CoherentDiagram) -> bool {
    x.objs.iter().any(|o| o.kind() == "free")
}

/// Instances `(u, X, M)` for the cocontinuity check: `u` a discrete-target
/// corpus functor, `X` over its domain and `M` a coefficient over the point.
/// Diagrams with free objects are paired with the small relational
/// coefficients only.
pub fn cocontinuity_instances(c: &Corpus) -> Vec<(String, &Functor, &CoherentDiagram, &CoherentDiagram)> {
    let coefficients: Vec<(&str, &CoherentDiagram)> = c
        .diagrams
        .iter()
        .filter(|(_, m)| m.shape.n_objects() == 1 && small(m, 3) && !has_free(m))
        .map(|(n, m)| (n.as_str(), m))
        .collect();
    let mut out = Vec::new();
    for (nu, u) in c.discrete_target_functors() {
        for (nx, x) in c.diagrams_over(&u.dom) {
            let free = has_free(x);
            if free && (x.shape.n_objects() != 1 || !small(x, 3)) || !free && !small(x, 4) {
                continue;
            }
            for &(nm, m) in &coefficients {
                let plain = m.objs[0].relation().is_some() && m.arrs[0].f0.iter().enumerate().all(|(p, &q)| p == q);
                if free && !(plain && small(m, 2)) {
                    continue;
                }
                out.push((format!("{}:{}:{}", nu, nx, nm), u, x, m));
            }
        }
    }
    out
}

/// `⊙` commutes with `u_!` on every instance of [`cocontinuity_instances`].
pub fn cocontinuity_records(c: &Corpus, cap: usize) -> Vec<Record> {
    let mut out = Vec::new();
    for (inst, u, x, m) in cocontinuity_instances(c) {
        push(&mut out, "cocontinuity", inst, cocontinuity_check(u, x, m, cap));
    }
    out.sort();
    out
}

/// The cocontinuity verdict and its class counts agree at two caps. Only
/// instances whose witness pools depend on the cap (a free object in `X`)
/// are rerun; the others build identical pools at every cap.
pub fn cap_sensitivity_records(c: &Corpus, lo: usize, hi: usize) -> Vec<Record> {
    let mut out = Vec::new();
    for (inst, u, x, m) in cocontinuity_instances(c) {
        if !has_free(x) {
            continue;
        }
        let run = |cap| cocontinuity_check(u, x, m, cap).map(|v| (v.holds, v.note)).unwrap_or_else(|e| (false, e.to_string()));
        let (a, b) = (run(lo), run(hi));
        let same = a == b;
        out.push(Record::from_bool(
            format!("cap-{}-{}", lo, hi),
            inst,
            same,
            if same { format!("{} at both caps", a.1) } else { format!("cap {}: {}; cap {}: {}", lo, a.1, hi, b.1) },
        ));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::fincat::{arrow_cat, discrete, one, pair};

    fn corpus() -> Corpus {
        Corpus::default_corpus()
    }

    fn classes(d: &CoherentDiagram) -> Vec<usize> {
        d.quotient().1.iter().map(|q| q.size).collect()
    }

    #[test]
    fn tilde_of_point_is_parallel_pair() {
        let t = tilde(corpus().diagram("TERM_ONE").unwrap()).unwrap();
        let f = &t.diagram.fibers[0];
        assert_eq!((f.n_objects(), f.n_arrows()), (2, 4));
        let (l, r) = t.legs(0, 1).or(t.legs(0, 0)).unwrap();
        assert_ne!(l, r);
        assert_eq!((f.src(l), f.dst(l)), (f.src(r), f.dst(r)));
    }

    #[test]
    fn tilde_counts_match_enumeration() {
        let c = corpus();
        let x = c.diagram("REL3_ONE").unwrap();
        let xs = &x.objs[0];
        let related = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&(a, b)| xs.related(a, b).is_some()).count();
        assert_eq!(tilde(x).unwrap().size(), 3 + related);

        let t = tilde(c.diagram("TERM_ARROW").unwrap()).unwrap();
        let ar = arrow_cat();
        let non_id = (0..ar.n_arrows()).find(|&i| !ar.is_identity(i)).unwrap();
        assert!(t.find(1, &Obj::Pt { a: 0, al: non_id, x: 0 }).is_some());
        assert!(t.find(1, &Obj::Pt { a: 1, al: ar.id(1), x: 0 }).is_some());
    }

    #[test]
    fn path_space_laws_on_small_diagrams() {
        let c = corpus();
        for name in ["TERM_ONE", "REL3_ONE", "REL3_TWIST", "TAB2_ONE", "COLLAPSE_ARROW", "REL3_PAIR", "TERM_SQUARE"] {
            let ps = path_space(c.diagram(name).unwrap(), DEFAULT_CAP).unwrap();
            assert!(ps.check_strict().holds, "{}", name);
            let v = ps.check_equivalences().unwrap();
            assert!(v.holds, "{}: {}", name, v.note);
        }
    }

    #[test]
    fn broken_zigzag_is_rejected() {
        let ps = path_space(corpus().diagram("REL3_ONE").unwrap(), DEFAULT_CAP).unwrap();
        let (p, w) = ps.rho_equivalence().unwrap();
        let EquivWitness::Sex { s, arrows, mut back_b, back_a } = w else { unreachable!() };
        let k = back_b.iter().position(|z| !z.is_empty()).unwrap();
        back_b[k].steps.pop();
        assert!(validate_sex(&p, &EquivWitness::Sex { s, arrows, back_b, back_a }).is_err());
    }

    #[test]
    fn homotopies_from_witnesses() {
        let c = corpus();
        let (f, g) = (c.morphism("TERM_REL3_a").unwrap(), c.morphism("TERM_REL3_b").unwrap());
        let h = equal_diag(f, g).unwrap().unwrap();
        let th = homotopy_from_witness(f, g, &h, DEFAULT_CAP).unwrap();
        assert!(th.verdict().holds, "{}", th.verdict().note);
        assert!(!same_map(&th.left, &th.right));

        let f = c.morphism("TERM_REL3").unwrap();
        let h = equal_diag(f, f).unwrap().unwrap();
        let th = homotopy_from_witness(f, f, &h, DEFAULT_CAP).unwrap();
        assert!(th.verdict().holds);
        assert!(same_map(&th.left, &th.right));

        // a witness between unequal maps is refused
        let g = c.morphism("TERM_REL3_a").unwrap();
        assert!(matches!(homotopy_from_witness(f, g, &h, DEFAULT_CAP), Err(HomotopyError::InvalidWitness(_))));
    }

    #[test]
    fn composites_and_identities() {
        let c = corpus();
        let id = c.morphism("id_REL3_ONE").unwrap();
        assert!(homotopy_comp(id, id, DEFAULT_CAP).unwrap().verdict().holds);
        let bang = c.morphism("bang_CHAIN3_ARROW").unwrap();
        let idt = DiagMor::identity(c.diagram("TERM_ARROW").unwrap());
        let h = homotopy_comp(bang, &idt, DEFAULT_CAP).unwrap();
        assert!(h.verdict().holds, "{}", h.verdict().note);
        for name in ["REL3_TWIST", "TERM_ARROW", "TAB2_ONE"] {
            let h = identity_homotopy(c.diagram(name).unwrap(), DEFAULT_CAP).unwrap();
            assert!(h.verdict().holds, "{}", name);
        }
    }

    #[test]
    fn omega_laws() {
        let c = corpus();
        let x = c.diagram("TERM_ARROW").unwrap();
        let o = omega(x, &Functor::identity(&x.shape), DEFAULT_CAP).unwrap();
        assert!(o.is_identity());
        let at0 = c.functor("at0_ARROW").unwrap();
        let o = omega(x, at0, DEFAULT_CAP).unwrap();
        let v = o.check_equivalence().unwrap();
        assert!(v.holds, "{}", v.note);
        let o = omega(c.diagram("COLLAPSE_ARROW").unwrap(), c.functor("at1_ARROW").unwrap(), DEFAULT_CAP).unwrap();
        assert!(o.check_equivalence().unwrap().holds);
        let t = omega_triangle(c.diagram("TERM_ONE").unwrap(), at0, c.functor("ARROW_ONE").unwrap(), DEFAULT_CAP).unwrap();
        assert!(t.holds, "{}", t.note);
        let sq = omega_square(c.morphism("COLLAPSE_TERM").unwrap(), at0, DEFAULT_CAP).unwrap();
        assert!(sq.holds, "{}", sq.note);
    }

    #[test]
    fn odot_examples() {
        let c = corpus();
        let term = c.diagram("TERM_ONE").unwrap();
        let p = one();
        let e = CatDiagram::constant(&p, &one());
        assert_eq!(classes(odot(&e, term).unwrap().value()), vec![1]);
        let e = CatDiagram::constant(&p, &pair());
        assert_eq!(classes(odot(&e, term).unwrap().value()), vec![1]);
        let e = CatDiagram::constant(&p, &discrete(2));
        assert_eq!(classes(odot(&e, c.diagram("REL3_ONE").unwrap()).unwrap().value()), vec![4]);
    }

    #[test]
    fn odot_inverts_examples() {
        let c = corpus();
        let ar = arrow_cat();
        let e = CatDiagram::constant(&ar, &pair());
        let term = c.diagram("TERM_ONE").unwrap();
        assert!(odot_inverts(&identity_map(&e), term).unwrap().holds);
        let f = CatDiagram::constant(&ar, &one());
        let bang = Functor::to_terminal(&pair());
        let bang = Functor::new_unchecked(pair(), f.fibers[0].clone(), bang.obj, bang.arr);
        let u = CatDiagramMap { dom: e, cod: f.clone(), comps: vec![bang.clone(), bang] };
        u.validate().unwrap();
        assert!(odot_inverts(&u, term).unwrap().holds);
        let d = CatDiagram::constant(&ar, &discrete(2));
        let b2 = Functor::to_terminal(&discrete(2));
        let b2 = Functor::new_unchecked(discrete(2), f.fibers[0].clone(), b2.obj, b2.arr);
        let u = CatDiagramMap { dom: d, cod: f, comps: vec![b2.clone(), b2] };
        assert!(!odot_inverts(&u, term).unwrap().holds);
    }

    #[test]
    fn self_odot_examples() {
        let c = corpus();
        for (name, sizes) in [("TERM_ONE", vec![1]), ("REL3_ONE", vec![2]), ("TERM_ARROW", vec![1, 1]), ("REL3_TWIST", vec![2])] {
            let x = c.diagram(name).unwrap();
            let iso = self_odot_iso(x, DEFAULT_CAP).unwrap();
            assert_eq!(classes(&iso.g.dom), sizes, "{}", name);
            assert_eq!(classes(x), sizes, "{}", name);
            assert!(is_iso_diag(&iso.g).holds);
        }
        for name in ["TWIST_REL3", "TERM_REL3", "COLLAPSE_TERM", "REL3_FULL2"] {
            let v = self_odot_naturality(c.morphism(name).unwrap(), DEFAULT_CAP).unwrap();
            assert!(v.holds, "{}: {}", name, v.note);
        }
    }

    #[test]
    fn self_odot_witness_tampering_fails() {
        let x = corpus().diagram("REL3_ONE").unwrap().clone();
        let mut iso = self_odot_iso(&x, DEFAULT_CAP).unwrap();
        iso.gh.h[0][0] = x.objs[0].r(2);
        assert!(iso.validate().is_err());
    }

    #[test]
    fn cocontinuity_examples() {
        let c = corpus();
        let (term, rel3) = (c.diagram("TERM_ONE").unwrap(), c.diagram("REL3_ONE").unwrap());
        let v = cocontinuity_check(&Functor::identity(&one()), term, rel3, DEFAULT_CAP).unwrap();
        assert!(v.holds, "{}", v.note);
        let v = cocontinuity_check(c.functor("PAIR_ONE").unwrap(), c.diagram("TERM_PAIR").unwrap(), term, DEFAULT_CAP).unwrap();
        assert!(v.holds, "{}", v.note);
        assert!(v.note.contains("[1]"));
        let v = cocontinuity_check(c.functor("DISC2_ONE").unwrap(), c.diagram("TERM_DISC2").unwrap(), rel3, DEFAULT_CAP).unwrap();
        assert!(v.holds, "{}", v.note);
        assert!(v.note.contains("[4]"));
    }

    #[test]
    fn free_cocompletion_examples() {
        let c = corpus();
        let two = CoherentDiagram::constant(&one(), &Setoid::discrete("TWO", 2)).named("TWO");
        let fc = free_cocompletion_map(Theory::Set, &two, c.diagram("CHAIN3_ONE").unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(fc.value.summary(), vec![2]);
        assert!(fc.unit_law.holds && fc.distributive.holds);
        let t = reflected_point(Theory::Prop).unwrap();
        let fc = free_cocompletion_map(Theory::Prop, &t, c.diagram("REL3_ONE").unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(fc.value.summary(), vec![1]);
        for th in Theory::REFLECTIVE {
            let fc = free_cocompletion_map(th, c.diagram("REL3_ONE").unwrap(), c.diagram("TERM_ONE").unwrap(), DEFAULT_CAP).unwrap();
            assert!(fc.unit_law.holds, "{}", fc.unit_law.note);
        }
    }

    #[test]
    fn universality_examples() {
        let c = corpus();
        for th in Theory::REFLECTIVE {
            for name in ["REL3_ONE", "TERM_ARROW", "COLLAPSE_ARROW", "EMPTY_ONE"] {
                let v = universality_object(th, c.diagram(name).unwrap(), DEFAULT_CAP).unwrap();
                assert!(v.holds, "{}", v.note);
            }
            let v = universality_square(th, c.morphism("COLLAPSE_TERM").unwrap(), DEFAULT_CAP).unwrap();
            assert!(v.holds, "{}", v.note);
        }
    }

    #[test]
    fn homotopic_maps_agree_after_odot() {
        let c = corpus();
        let ps = path_space(c.diagram("REL3_ONE").unwrap(), DEFAULT_CAP).unwrap();
        assert!(rhtpy_quot(&ps).unwrap().holds);
        let v = well_defined(c.morphism("TERM_REL3_a").unwrap(), c.morphism("TERM_REL3_b").unwrap(), DEFAULT_CAP).unwrap();
        assert!(v.holds, "{}", v.note);
        // points of different classes give different images
        let v = star_maps_agree_for(c.morphism("TERM_REL3_a").unwrap(), c.morphism("TERM_REL3").unwrap());
        assert!(!v.holds);
    }

    fn star_maps_agree_for(f: &DiagMor, g: &DiagMor) -> Verdict<()> {
        let tx = tilde(&f.dom).unwrap();
        let mut py = Pools::new(&f.cod, DEFAULT_CAP);
        for o in tx.objects.iter().flatten() {
            py.absorb_obj(&tilde_obj(f, o));
            py.absorb_obj(&tilde_obj(g, o));
        }
        let ty = tilde_with(&f.cod, &py).unwrap();
        let ft = strict_map("f~", &tx, &ty, |_, o| tilde_obj(f, o)).unwrap();
        let gt = strict_map("g~", &tx, &ty, |_, o| tilde_obj(g, o)).unwrap();
        star_maps_agree(&ft, &gt, "test").unwrap()
    }

    #[test]
    fn pseudonaturality_examples() {
        let c = corpus();
        let rel3 = c.diagram("REL3_ONE").unwrap();
        let id1 = Functor::identity(&one());
        let v = pseudonaturality(c.diagram("TERM_ARROW").unwrap(), c.functor("at0_ARROW").unwrap(), rel3, &id1, DEFAULT_CAP).unwrap();
        assert!(v.holds, "{}", v.note);
        let v = pseudonaturality(c.diagram("TERM_ONE").unwrap(), &id1, c.diagram("COLLAPSE_ARROW").unwrap(), c.functor("at0_ARROW").unwrap(), DEFAULT_CAP).unwrap();
        assert!(v.holds, "{}", v.note);
    }
}
