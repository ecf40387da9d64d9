//! Coherent diagrams of setoids and their witness-carrying morphisms.
//!
//! A [`CoherentDiagram`] over a finite category `A` assigns a setoid to each
//! object and a morphism representative to each arrow, functorial only up to
//! the stored reflexivity and composition witnesses.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{Cat, CatError, Functor, NatTrans};
use crate::setoid::{
    compose_unchecked, equal_pointwise, is_iso, EqWitness, MorRep, Quotient, Setoid, SetoidError, Wit,
};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoherentError {
    #[error(transparent)]
    Setoid(#[from] SetoidError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error("{diagram}: {equation} fails at {at}")]
    Equation { diagram: String, equation: String, at: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("diagrams do not match: {0}")]
    Mismatch(String),
    #[error("set-valued diagram is not functorial at arrow {0}")]
    NotFunctorial(usize),
}

/// A strict functor `A → FinSet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetDiagram {
    pub shape: Cat,
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl SetDiagram {
    pub fn new(shape: Cat, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self, CoherentError> {
        let d = SetDiagram { shape, sizes, maps };
        d.validate()?;
        Ok(d)
    }

    pub fn constant(shape: &Cat, n: usize) -> Self {
        SetDiagram {
            shape: shape.clone(),
            sizes: vec![n; shape.n_objects()],
            maps: vec![(0..n).collect(); shape.n_arrows()],
        }
    }

    pub fn validate(&self) -> Result<(), CoherentError> {
        let s = &self.shape;
        if self.sizes.len() != s.n_objects() || self.maps.len() != s.n_arrows() {
            return Err(CoherentError::Shape("set diagram has the wrong arity".into()));
        }
        for (i, a) in s.arrows().iter().enumerate() {
            let m = &self.maps[i];
            if m.len() != self.sizes[a.src] || m.iter().any(|&y| y >= self.sizes[a.dst]) {
                return Err(CoherentError::NotFunctorial(i));
            }
        }
        for o in 0..s.n_objects() {
            if self.maps[s.id(o)].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(CoherentError::NotFunctorial(s.id(o)));
            }
        }
        for (f, g) in s.composable_pairs() {
            let gf = s.comp(g, f);
            if (0..self.sizes[s.src(f)]).any(|x| self.maps[g][self.maps[f][x]] != self.maps[gf][x]) {
                return Err(CoherentError::NotFunctorial(gf));
            }
        }
        Ok(())
    }

    pub fn restrict(&self, u: &Functor) -> SetDiagram {
        SetDiagram {
            shape: u.dom.clone(),
            sizes: u.obj.iter().map(|&b| self.sizes[b]).collect(),
            maps: u.arr.iter().map(|&b| self.maps[b].clone()).collect(),
        }
    }
}

/// A natural family of functions between set diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetMap {
    pub comps: Vec<Vec<usize>>,
}

impl SetMap {
    pub fn is_natural(&self, dom: &SetDiagram, cod: &SetDiagram) -> bool {
        dom.shape.arrows().iter().enumerate().all(|(i, a)| {
            (0..dom.sizes[a.src]).all(|x| cod.maps[i][self.comps[a.src][x]] == self.comps[a.dst][dom.maps[i][x]])
        })
    }

    pub fn is_bijective(&self, dom: &SetDiagram, cod: &SetDiagram) -> bool {
        self.comps.iter().enumerate().all(|(a, f)| {
            let mut hit = vec![false; cod.sizes[a]];
            f.iter().all(|&y| !std::mem::replace(&mut hit[y], true)) && dom.sizes[a] == cod.sizes[a]
        })
    }
}

/// An object of `Eex(A)`.
#[derive(Clone, Debug)]
pub struct CoherentDiagram {
    pub name: String,
    pub shape: Cat,
    pub objs: Vec<Setoid>,
    pub arrs: Vec<MorRep>,
    /// `X_r` at each object: a witness from `x` to `X_{1a}(x)`.
    pub unit: Vec<Vec<Wit>>,
    /// `X_{α,α'}` for `α: a → a'`, `α': a' → a''`: a witness from
    /// `X_{α'}(X_α x)` to `X_{α'α}(x)`.
    pub comp: HashMap<(usize, usize), Vec<Wit>>,
}

impl CoherentDiagram {
    pub fn new(
        name: impl Into<String>,
        shape: Cat,
        objs: Vec<Setoid>,
        arrs: Vec<MorRep>,
        unit: Vec<Vec<Wit>>,
        comp: HashMap<(usize, usize), Vec<Wit>>,
    ) -> Result<Self, CoherentError> {
        let d = CoherentDiagram { name: name.into(), shape, objs, arrs, unit, comp };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), CoherentError> {
        let s = &self.shape;
        let eq = |equation: &str, at: String| {
            Err(CoherentError::Equation { diagram: self.name.clone(), equation: equation.into(), at })
        };
        if self.objs.len() != s.n_objects() || self.arrs.len() != s.n_arrows() || self.unit.len() != s.n_objects() {
            return Err(CoherentError::Shape(format!("{} has the wrong arity", self.name)));
        }
        for (i, a) in s.arrows().iter().enumerate() {
            let f = &self.arrs[i];
            if !f.dom.same(&self.objs[a.src]) || !f.cod.same(&self.objs[a.dst]) {
                return eq("X_α: X_a → X_a'", format!("arrow {}", a.label));
            }
            f.validate()?;
        }
        for o in 0..s.n_objects() {
            let x = &self.objs[o];
            let idr = &self.arrs[s.id(o)];
            if self.unit[o].len() != x.size0() {
                return eq("X_r total", format!("object {}", s.object_label(o)));
            }
            for (p, w) in self.unit[o].iter().enumerate() {
                if !x.is_witness(w) || x.s(w) != p {
                    return eq("s X_r = 1", format!("object {}, point {}", s.object_label(o), p));
                }
                if x.t(w) != idr.f0[p] {
                    return eq("t X_r = X_1", format!("object {}, point {}", s.object_label(o), p));
                }
            }
        }
        for (f, g) in s.composable_pairs() {
            let gf = s.comp(g, f);
            let at = |p: usize| format!("({}, {}) at point {}", s.arrow(f).label, s.arrow(g).label, p);
            let Some(tab) = self.comp.get(&(f, g)) else {
                return eq("X_{α,α'} total", at(0));
            };
            let (a, c) = (s.src(f), s.dst(g));
            if tab.len() != self.objs[a].size0() {
                return eq("X_{α,α'} total", at(0));
            }
            for (p, w) in tab.iter().enumerate() {
                if !self.objs[c].is_witness(w) || self.objs[c].s(w) != self.arrs[g].f0[self.arrs[f].f0[p]] {
                    return eq("s X_{α,α'} = X_α' X_α", at(p));
                }
                if self.objs[c].t(w) != self.arrs[gf].f0[p] {
                    return eq("t X_{α,α'} = X_α'α", at(p));
                }
            }
        }
        Ok(())
    }

    /// A diagram from point tables alone; every witness is found by search.
    pub fn by_search(
        name: impl Into<String>,
        shape: &Cat,
        objs: Vec<Setoid>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, CoherentError> {
        let name = name.into();
        let s = shape;
        if objs.len() != s.n_objects() || maps.len() != s.n_arrows() {
            return Err(CoherentError::Shape(format!("{} has the wrong arity", name)));
        }
        let fail = |equation: &str, at: String| CoherentError::Equation { diagram: name.clone(), equation: equation.into(), at };
        let mut arrs = Vec::with_capacity(maps.len());
        for (i, a) in s.arrows().iter().enumerate() {
            let (x, y) = (&objs[a.src], &objs[a.dst]);
            let f0 = &maps[i];
            if f0.len() != x.size0() || f0.iter().any(|&p| p >= y.size0()) {
                return Err(fail("X_α: X_a → X_a'", format!("arrow {}", a.label)));
            }
            let q = x.quotient();
            for p in 0..x.size0() {
                if y.related(f0[q.rep[q.class[p]]], f0[p]).is_none() {
                    return Err(fail("X_α respects ∼", format!("arrow {}, point {}", a.label, p)));
                }
            }
            arrs.push(MorRep::by_search(x.clone(), y.clone(), f0.clone())?);
        }
        let mut unit = Vec::with_capacity(objs.len());
        for (o, x) in objs.iter().enumerate() {
            let idr = &maps[s.id(o)];
            let mut col = Vec::with_capacity(x.size0());
            for p in 0..x.size0() {
                col.push(x.related(p, idr[p]).ok_or_else(|| fail("x ∼ X_1 x", format!("object {}, point {}", s.object_label(o), p)))?);
            }
            unit.push(col);
        }
        let mut comp = HashMap::new();
        for (f, g) in s.composable_pairs() {
            let gf = s.comp(g, f);
            let c = &objs[s.dst(g)];
            let mut col = Vec::with_capacity(objs[s.src(f)].size0());
            for p in 0..objs[s.src(f)].size0() {
                col.push(c.related(maps[g][maps[f][p]], maps[gf][p]).ok_or_else(|| {
                    fail("X_α' X_α ∼ X_α'α", format!("({}, {}) at point {}", s.arrow(f).label, s.arrow(g).label, p))
                })?);
            }
            comp.insert((f, g), col);
        }
        Self::new(name, shape.clone(), objs, arrs, unit, comp)
    }

    /// The constant diagram at `x`: identity representatives and
    /// reflexivity witnesses throughout.
    pub fn constant(shape: &Cat, x: &Setoid) -> Self {
        let id = MorRep::identity(x);
        let refl: Vec<Wit> = (0..x.size0()).map(|p| x.r(p)).collect();
        let comp = shape.composable_pairs().into_iter().map(|k| (k, refl.clone())).collect();
        CoherentDiagram {
            name: format!("const {}", x.name()),
            shape: shape.clone(),
            objs: vec![x.clone(); shape.n_objects()],
            arrs: vec![id; shape.n_arrows()],
            unit: vec![refl; shape.n_objects()],
            comp,
        }
    }

    /// A single setoid as a diagram over the terminal category.
    pub fn point(x: &Setoid) -> Self {
        Self::constant(&crate::fincat::one(), x).named(x.name())
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn act(&self, arrow: usize, x: usize) -> usize {
        self.arrs[arrow].f0[x]
    }

    pub fn act1(&self, arrow: usize, w: &Wit) -> Wit {
        self.arrs[arrow].apply(w)
    }

    pub fn comp_at(&self, f: usize, g: usize, x: usize) -> &Wit {
        &self.comp[&(f, g)][x]
    }

    /// Strict precomposition with `u`.
    pub fn restrict(&self, u: &Functor) -> Result<Self, CoherentError> {
        if *u.cod != *self.shape {
            return Err(CoherentError::Shape(format!("restricting {} along a functor into {}", self.name, u.cod.name())));
        }
        Ok(self.restrict_unchecked(u))
    }

    pub fn restrict_unchecked(&self, u: &Functor) -> Self {
        let a = &u.dom;
        let comp = a
            .composable_pairs()
            .into_iter()
            .map(|(f, g)| ((f, g), self.comp[&(u.arr[f], u.arr[g])].clone()))
            .collect();
        CoherentDiagram {
            name: format!("{}*{}", a.name(), self.name),
            shape: a.clone(),
            objs: u.obj.iter().map(|&b| self.objs[b].clone()).collect(),
            arrs: u.arr.iter().map(|&b| self.arrs[b].clone()).collect(),
            unit: u.obj.iter().map(|&b| self.unit[b].clone()).collect(),
            comp,
        }
    }

    /// Pointwise quotients, with the induced functions.
    pub fn quotient(&self) -> (SetDiagram, Vec<Quotient>) {
        let qs: Vec<Quotient> = self.objs.iter().map(|x| x.quotient()).collect();
        let maps = self
            .shape
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| qs[a.src].rep.iter().map(|&x| qs[a.dst].class[self.act(i, x)]).collect())
            .collect();
        let d = SetDiagram { shape: self.shape.clone(), sizes: qs.iter().map(|q| q.size).collect(), maps };
        (d, qs)
    }

    /// Same setoids, same point tables and same witness data; witness maps
    /// are compared on a pool.
    pub fn same_data(&self, other: &CoherentDiagram) -> bool {
        *self.shape == *other.shape
            && self.objs.iter().zip(&other.objs).all(|(a, b)| a.same(b))
            && self.arrs.iter().zip(&other.arrs).all(|(f, g)| same_rep(f, g))
            && self.unit == other.unit
            && self.comp == other.comp
    }

    /// Over the terminal category: the single setoid with its unit data
    /// removed.
    pub fn strip_units(&self) -> Result<Setoid, CoherentError> {
        if self.shape.n_objects() != 1 || self.shape.n_arrows() != 1 {
            return Err(CoherentError::Shape(format!("{} is not over the terminal category", self.name)));
        }
        Ok(self.objs[0].clone())
    }
}

/// Equal point tables and equal witness maps on the validation pool.
pub fn same_rep(f: &MorRep, g: &MorRep) -> bool {
    f.dom.same(&g.dom)
        && f.cod.same(&g.cod)
        && f.f0 == g.f0
        && f.dom.witness_pool(2).iter().all(|w| f.apply(w) == g.apply(w))
}

/// The discrete coherent diagram of a set-valued functor.
pub fn embed_setdiagram(f: &SetDiagram) -> Result<CoherentDiagram, CoherentError> {
    f.validate()?;
    let s = &f.shape;
    let objs: Vec<Setoid> =
        (0..s.n_objects()).map(|o| Setoid::discrete(format!("F({})", s.object_label(o)), f.sizes[o])).collect();
    let arrs = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let m = f.maps[i].clone();
            let m1 = m.clone();
            MorRep::new_unchecked(
                objs[a.src].clone(),
                objs[a.dst].clone(),
                m,
                Arc::new(move |w: &Wit| match w {
                    Wit::Rel(x, y) => Wit::Rel(m1[*x], m1[*y]),
                    other => panic!("not a discrete witness: {}", other),
                }),
            )
        })
        .collect();
    let unit = (0..s.n_objects()).map(|o| (0..f.sizes[o]).map(|x| Wit::Rel(x, x)).collect()).collect();
    let comp = s
        .composable_pairs()
        .into_iter()
        .map(|(a, b)| {
            let gf = s.comp(b, a);
            ((a, b), (0..f.sizes[s.src(a)]).map(|x| Wit::Rel(f.maps[gf][x], f.maps[gf][x])).collect())
        })
        .collect();
    CoherentDiagram::new(format!("embed {}", s.name()), s.clone(), objs, arrs, unit, comp)
}

/// A morphism representative in `Eex(A)`.
#[derive(Clone, Debug)]
pub struct DiagMor {
    pub dom: CoherentDiagram,
    pub cod: CoherentDiagram,
    pub comps: Vec<MorRep>,
    /// `f_α` for `α: a → a'`: a witness from `Y_α(f_a x)` to `f_a'(X_α x)`.
    pub nat: Vec<Vec<Wit>>,
}

impl DiagMor {
    pub fn new(
        dom: CoherentDiagram,
        cod: CoherentDiagram,
        comps: Vec<MorRep>,
        nat: Vec<Vec<Wit>>,
    ) -> Result<Self, CoherentError> {
        let f = DiagMor { dom, cod, comps, nat };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), CoherentError> {
        let s = &self.dom.shape;
        if **s != *self.cod.shape {
            return Err(CoherentError::Shape("morphism between diagrams of different shapes".into()));
        }
        if self.comps.len() != s.n_objects() || self.nat.len() != s.n_arrows() {
            return Err(CoherentError::Shape("morphism has the wrong arity".into()));
        }
        let name = format!("{} → {}", self.dom.name, self.cod.name);
        let eq = |equation: &str, at: String| Err(CoherentError::Equation { diagram: name.clone(), equation: equation.into(), at });
        for (o, f) in self.comps.iter().enumerate() {
            if !f.dom.same(&self.dom.objs[o]) || !f.cod.same(&self.cod.objs[o]) {
                return eq("f_a: X_a → Y_a", format!("object {}", s.object_label(o)));
            }
            f.validate()?;
        }
        for (i, a) in s.arrows().iter().enumerate() {
            let y = &self.cod.objs[a.dst];
            if self.nat[i].len() != self.dom.objs[a.src].size0() {
                return eq("f_α total", format!("arrow {}", a.label));
            }
            for (x, w) in self.nat[i].iter().enumerate() {
                if !y.is_witness(w) || y.s(w) != self.cod.act(i, self.comps[a.src].f0[x]) {
                    return eq("s f_α = Y_α f_a", format!("arrow {}, point {}", a.label, x));
                }
                if y.t(w) != self.comps[a.dst].f0[self.dom.act(i, x)] {
                    return eq("t f_α = f_a' X_α", format!("arrow {}, point {}", a.label, x));
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &CoherentDiagram) -> Self {
        let s = &x.shape;
        let nat = s
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| (0..x.objs[a.src].size0()).map(|p| x.objs[a.dst].r(x.act(i, p))).collect())
            .collect();
        DiagMor { dom: x.clone(), cod: x.clone(), comps: x.objs.iter().map(MorRep::identity).collect(), nat }
    }

    /// Components given; naturality witnesses found by search.
    pub fn by_search(dom: &CoherentDiagram, cod: &CoherentDiagram, comps: Vec<MorRep>) -> Result<Self, CoherentError> {
        let s = &dom.shape;
        let mut nat = Vec::with_capacity(s.n_arrows());
        for (i, a) in s.arrows().iter().enumerate() {
            let mut col = Vec::with_capacity(dom.objs[a.src].size0());
            for x in 0..dom.objs[a.src].size0() {
                let (p, q) = (cod.act(i, comps[a.src].f0[x]), comps[a.dst].f0[dom.act(i, x)]);
                col.push(cod.objs[a.dst].related(p, q).ok_or_else(|| CoherentError::Equation {
                    diagram: format!("{} → {}", dom.name, cod.name),
                    equation: "Y_α f_a ∼ f_a' X_α".into(),
                    at: format!("arrow {}, point {}", a.label, x),
                })?);
            }
            nat.push(col);
        }
        DiagMor::new(dom.clone(), cod.clone(), comps, nat)
    }

    /// `f` at every object of a constant diagram.
    pub fn constant(shape: &Cat, f: &MorRep) -> Self {
        let dom = CoherentDiagram::constant(shape, &f.dom);
        let cod = CoherentDiagram::constant(shape, &f.cod);
        let col: Vec<Wit> = f.f0.iter().map(|&y| f.cod.r(y)).collect();
        DiagMor { dom, cod, comps: vec![f.clone(); shape.n_objects()], nat: vec![col; shape.n_arrows()] }
    }

    /// Strict precomposition with `u`.
    pub fn restrict(&self, u: &Functor) -> DiagMor {
        DiagMor {
            dom: self.dom.restrict_unchecked(u),
            cod: self.cod.restrict_unchecked(u),
            comps: u.obj.iter().map(|&b| self.comps[b].clone()).collect(),
            nat: u.arr.iter().map(|&b| self.nat[b].clone()).collect(),
        }
    }

    /// The induced natural family on pointwise quotients.
    pub fn on_quotients(&self) -> SetMap {
        let comps = self.comps.iter().map(|f| f.on_quotients().2).collect();
        SetMap { comps }
    }

    /// The same representative viewed between diagrams with identical data.
    pub fn retyped(&self, dom: &CoherentDiagram, cod: &CoherentDiagram) -> DiagMor {
        DiagMor { dom: dom.clone(), cod: cod.clone(), comps: self.comps.clone(), nat: self.nat.clone() }
    }
}

/// A witness that two parallel representatives are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagEqWitness {
    pub h: Vec<Vec<Wit>>,
}

impl DiagEqWitness {
    pub fn validate(&self, f: &DiagMor, g: &DiagMor) -> Result<(), CoherentError> {
        for (o, h) in self.h.iter().enumerate() {
            EqWitness { h: h.clone() }.validate(&f.comps[o], &g.comps[o])?;
        }
        Ok(())
    }
}

/// `g ∘ f`, with naturality witnesses `m(g_α(f_a x), g_{a',1}(f_α x))`.
pub fn compose_diag(f: &DiagMor, g: &DiagMor) -> Result<DiagMor, CoherentError> {
    if !f.cod.same_data(&g.dom) {
        return Err(CoherentError::Mismatch(format!("{} vs {}", f.cod.name, g.dom.name)));
    }
    Ok(compose_diag_unchecked(f, g))
}

pub fn compose_diag_unchecked(f: &DiagMor, g: &DiagMor) -> DiagMor {
    let s = &f.dom.shape;
    let comps = f.comps.iter().zip(&g.comps).map(|(a, b)| compose_unchecked(a, b)).collect();
    let nat = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let z = &g.cod.objs[a.dst];
            (0..f.dom.objs[a.src].size0())
                .map(|x| z.m(&g.nat[i][f.comps[a.src].f0[x]], &g.comps[a.dst].apply(&f.nat[i][x])))
                .collect()
        })
        .collect();
    DiagMor { dom: f.dom.clone(), cod: g.cod.clone(), comps, nat }
}

/// Pointwise witnesses `f_a x ∼ g_a x`.
pub fn equal_diag(f: &DiagMor, g: &DiagMor) -> Result<Option<DiagEqWitness>, CoherentError> {
    if f.comps.len() != g.comps.len() {
        return Err(CoherentError::Mismatch("representatives are not parallel".into()));
    }
    for (a, b) in f.comps.iter().zip(&g.comps) {
        if !a.dom.same(&b.dom) || !a.cod.same(&b.cod) {
            return Err(CoherentError::Mismatch("representatives are not parallel".into()));
        }
    }
    let h: Option<Vec<Vec<Wit>>> = f
        .comps
        .iter()
        .zip(&g.comps)
        .map(|(a, b)| equal_pointwise(&a.cod, &a.f0, &b.f0).map(|e| e.h))
        .collect();
    Ok(h.map(|h| DiagEqWitness { h }))
}

/// An inverse with both round-trip witnesses.
#[derive(Clone, Debug)]
pub struct DiagIso {
    pub inverse: DiagMor,
    pub left: DiagEqWitness,
    pub right: DiagEqWitness,
}

/// Invertibility, decided componentwise. The inverse's naturality witnesses
/// are `m(m(v h_a'(X_α g_a y), g_a'(v f_α(g_a y))), g_a'(Y_α(k_a y)))` where
/// `h: g f ∼ 1` and `k: f g ∼ 1`.
pub fn is_iso_diag(f: &DiagMor) -> Verdict<DiagIso> {
    let s = &f.dom.shape;
    let mut data = Vec::with_capacity(f.comps.len());
    for (o, c) in f.comps.iter().enumerate() {
        let v = is_iso(c);
        if !v.holds {
            return Verdict::fail(format!("component at {}: {}", s.object_label(o), v.note));
        }
        data.push(v.witness.unwrap());
    }
    let g: Vec<MorRep> = data.iter().map(|d| d.inverse.clone()).collect();
    let nat = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let x = &f.dom.objs[a.dst];
            let (ga, ga2) = (&g[a.src], &g[a.dst]);
            (0..f.cod.objs[a.src].size0())
                .map(|y| {
                    let gy = ga.f0[y];
                    let back = x.v(&data[a.dst].left.h[f.dom.act(i, gy)]);
                    let mid = ga2.apply(&f.cod.objs[a.dst].v(&f.nat[i][gy]));
                    let fwd = ga2.apply(&f.cod.act1(i, &data[a.src].right.h[y]));
                    x.m(&x.m(&back, &mid), &fwd)
                })
                .collect()
        })
        .collect();
    let inverse = DiagMor { dom: f.cod.clone(), cod: f.dom.clone(), comps: g, nat };
    let left = DiagEqWitness { h: data.iter().map(|d| d.left.h.clone()).collect() };
    let right = DiagEqWitness { h: data.iter().map(|d| d.right.h.clone()).collect() };
    Verdict::pass(DiagIso { inverse, left, right }, "componentwise invertible")
}

/// `X_μ: u*X → v*X` for `μ: u ⇒ v`, with naturality witness
/// `m(X_{μa,vα}(x), v(X_{uα,μa'}(x)))`.
pub fn whisker(mu: &NatTrans, x: &CoherentDiagram) -> Result<DiagMor, CoherentError> {
    let (u, v) = (&mu.dom, &mu.cod);
    if *u.cod != *x.shape || *v.cod != *x.shape {
        return Err(CoherentError::Shape("whiskering along a transformation into another shape".into()));
    }
    let a = &u.dom;
    let b = &x.shape;
    let comps = (0..a.n_objects()).map(|o| x.arrs[mu.comps[o]].clone()).collect();
    let nat = a
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, ar)| {
            let z = &x.objs[v.obj[ar.dst]];
            let (ma, ma2) = (mu.comps[ar.src], mu.comps[ar.dst]);
            debug_assert_eq!(b.comp(v.arr[i], ma), b.comp(ma2, u.arr[i]));
            (0..x.objs[u.obj[ar.src]].size0())
                .map(|p| z.m(x.comp_at(ma, v.arr[i], p), &z.v(x.comp_at(u.arr[i], ma2, p))))
                .collect()
        })
        .collect();
    Ok(DiagMor { dom: x.restrict_unchecked(u), cod: x.restrict_unchecked(v), comps, nat })
}

/// Binary product of setoids with projections.
pub fn product_setoid(x: &Setoid, y: &Setoid) -> (Setoid, MorRep, MorRep) {
    let p = Setoid::product(x, y);
    let j = p.as_joint().unwrap();
    let proj = |k: usize, cod: &Setoid| {
        MorRep::new_unchecked(
            p.clone(),
            cod.clone(),
            j.coords.iter().map(|c| c[k]).collect(),
            Arc::new(move |w: &Wit| match w {
                Wit::Joint { parts, .. } => parts[k].clone(),
                other => panic!("not a product witness: {}", other),
            }),
        )
    };
    let (p1, p2) = (proj(0, x), proj(1, y));
    (p, p1, p2)
}

/// `f × g` on product setoids.
pub fn product_map(f: &MorRep, g: &MorRep, dom: &Setoid, cod: &Setoid) -> MorRep {
    let ny = g.dom.size0();
    let nc = g.cod.size0();
    let f0 = (0..dom.size0()).map(|p| f.f0[p / ny] * nc + g.f0[p % ny]).collect();
    let (f, g) = (f.clone(), g.clone());
    MorRep::new_unchecked(
        dom.clone(),
        cod.clone(),
        f0,
        Arc::new(move |w: &Wit| match w {
            Wit::Joint { src, dst, parts } => Wit::Joint {
                src: f.f0[src / ny] * nc + g.f0[src % ny],
                dst: f.f0[dst / ny] * nc + g.f0[dst % ny],
                parts: vec![f.apply(&parts[0]), g.apply(&parts[1])],
            },
            other => panic!("not a product witness: {}", other),
        }),
    )
}

fn pair_wit(p: &Setoid, a: &Wit, b: &Wit, x: &Setoid, y: &Setoid) -> Wit {
    let ny = y.size0();
    Wit::Joint {
        src: x.s(a) * ny + y.s(b),
        dst: x.t(a) * ny + y.t(b),
        parts: {
            debug_assert!(p.size0() == x.size0() * ny);
            vec![a.clone(), b.clone()]
        },
    }
}

/// The pointwise product with its two projections.
pub fn product_diag(x: &CoherentDiagram, y: &CoherentDiagram) -> Result<(CoherentDiagram, DiagMor, DiagMor), CoherentError> {
    if *x.shape != *y.shape {
        return Err(CoherentError::Shape("product of diagrams over different shapes".into()));
    }
    let s = &x.shape;
    let prods: Vec<(Setoid, MorRep, MorRep)> =
        x.objs.iter().zip(&y.objs).map(|(a, b)| product_setoid(a, b)).collect();
    let objs: Vec<Setoid> = prods.iter().map(|p| p.0.clone()).collect();
    let arrs = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| product_map(&x.arrs[i], &y.arrs[i], &objs[a.src], &objs[a.dst]))
        .collect();
    let ny = |o: usize| y.objs[o].size0();
    let unit = (0..s.n_objects())
        .map(|o| {
            (0..objs[o].size0())
                .map(|p| pair_wit(&objs[o], &x.unit[o][p / ny(o)], &y.unit[o][p % ny(o)], &x.objs[o], &y.objs[o]))
                .collect()
        })
        .collect();
    let comp = s
        .composable_pairs()
        .into_iter()
        .map(|(f, g)| {
            let (a, c) = (s.src(f), s.dst(g));
            let tab = (0..objs[a].size0())
                .map(|p| {
                    pair_wit(&objs[c], x.comp_at(f, g, p / ny(a)), y.comp_at(f, g, p % ny(a)), &x.objs[c], &y.objs[c])
                })
                .collect();
            ((f, g), tab)
        })
        .collect();
    let prod = CoherentDiagram { name: format!("{}×{}", x.name, y.name), shape: s.clone(), objs, arrs, unit, comp };
    let proj = |k: usize, target: &CoherentDiagram| {
        let comps: Vec<MorRep> = prods.iter().map(|p| if k == 0 { p.1.clone() } else { p.2.clone() }).collect();
        let nat = s
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                (0..prod.objs[a.src].size0())
                    .map(|p| target.objs[a.dst].r(target.act(i, comps[a.src].f0[p])))
                    .collect()
            })
            .collect();
        DiagMor { dom: prod.clone(), cod: target.clone(), comps, nat }
    };
    let (p1, p2) = (proj(0, x), proj(1, y));
    Ok((prod, p1, p2))
}

/// A pullback in `Eex`: the setoid, its projections, and a factorizer.
pub struct Pullback {
    pub setoid: Setoid,
    pub p1: MorRep,
    pub p2: MorRep,
    f: MorRep,
    g: MorRep,
}

impl Pullback {
    /// The comparison `W → P` for a cone `(p, q)` with `f p ∼ g q`.
    pub fn factor(&self, p: &MorRep, q: &MorRep) -> Result<MorRep, CoherentError> {
        let z = &self.f.cod;
        let mut f0 = Vec::with_capacity(p.dom.size0());
        for w in 0..p.dom.size0() {
            let (a, b) = (p.f0[w], q.f0[w]);
            let zeta = z
                .related(self.f.f0[a], self.g.f0[b])
                .ok_or_else(|| CoherentError::Mismatch(format!("cone legs disagree at {}", w)))?;
            let pt = self
                .setoid
                .joint_point(&[a, b], &[zeta])
                .ok_or_else(|| CoherentError::Mismatch(format!("no pullback point over {}", w)))?;
            f0.push(pt);
        }
        let (p, q, f0c) = (p.clone(), q.clone(), f0.clone());
        let dom = p.dom.clone();
        Ok(MorRep::new_unchecked(
            dom.clone(),
            self.setoid.clone(),
            f0,
            Arc::new(move |w: &Wit| Wit::Joint {
                src: f0c[dom.s(w)],
                dst: f0c[dom.t(w)],
                parts: vec![p.apply(w), q.apply(w)],
            }),
        ))
    }
}

/// `P0 = (X0 × Y0) ×_{Z0×Z0} Z1`, `P1` the componentwise witnesses. When
/// `Z1` is infinite each related pair contributes its canonical witness.
pub fn pullback_eex(f: &MorRep, g: &MorRep) -> Result<Pullback, CoherentError> {
    if !f.cod.same(&g.cod) {
        return Err(CoherentError::Mismatch(format!("{} vs {}", f.cod.name(), g.cod.name())));
    }
    let z = &f.cod;
    let canonical = !z.x1_finite();
    let mut coords = Vec::new();
    let mut extra = Vec::new();
    for a in 0..f.dom.size0() {
        for b in 0..g.dom.size0() {
            let choices = if canonical {
                z.related(f.f0[a], g.f0[b]).into_iter().collect()
            } else {
                z.witnesses_between(f.f0[a], g.f0[b], 0)
            };
            for zeta in choices {
                coords.push(vec![a, b]);
                extra.push(vec![zeta]);
            }
        }
    }
    let setoid = Setoid::joint(
        format!("{}×_{}{}", f.dom.name(), z.name(), g.dom.name()),
        vec![f.dom.clone(), g.dom.clone()],
        coords,
        extra,
    );
    let j = setoid.as_joint().unwrap();
    let leg = |k: usize, cod: &Setoid| {
        MorRep::new_unchecked(
            setoid.clone(),
            cod.clone(),
            j.coords.iter().map(|c| c[k]).collect(),
            Arc::new(move |w: &Wit| match w {
                Wit::Joint { parts, .. } => parts[k].clone(),
                other => panic!("not a pullback witness: {}", other),
            }),
        )
    };
    let (p1, p2) = (leg(0, &f.dom), leg(1, &g.dom));
    Ok(Pullback { setoid, p1, p2, f: f.clone(), g: g.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{arrow_cat, discrete, one, pair};
    use crate::setoid::{free_setoid, relational_from_blocks, Setoid};

    fn rel3() -> Setoid {
        relational_from_blocks("REL3", 3, &[vec![0, 1], vec![2]]).unwrap()
    }

    fn chain3() -> Setoid {
        free_setoid("CHAIN3", 3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn collapse(x: &Setoid) -> MorRep {
        MorRep::by_search(x.clone(), Setoid::terminal(), vec![0; x.size0()]).unwrap()
    }

    fn pointwise(dom: &CoherentDiagram, cod: &CoherentDiagram, comps: Vec<MorRep>) -> DiagMor {
        DiagMor::by_search(dom, cod, comps).unwrap()
    }

    #[test]
    fn embed_examples() {
        let t = embed_setdiagram(&SetDiagram::constant(&one(), 1)).unwrap();
        assert_eq!(t.objs[0].size0(), 1);
        let d = embed_setdiagram(&SetDiagram::constant(&arrow_cat(), 2)).unwrap();
        assert_eq!(d.arrs[1].f0, vec![0, 1]);
        let swap = SetDiagram::new(pair(), vec![2, 2], vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        embed_setdiagram(&swap).unwrap().validate().unwrap();
        let bad = SetDiagram { shape: arrow_cat(), sizes: vec![2, 2], maps: vec![vec![0, 0], vec![1, 0], vec![0, 1]] };
        assert!(matches!(embed_setdiagram(&bad), Err(CoherentError::NotFunctorial(1))));
    }

    #[test]
    fn restrict_examples() {
        let x = CoherentDiagram::constant(&arrow_cat(), &rel3());
        let same = x.restrict(&Functor::identity(&arrow_cat())).unwrap();
        assert!(same.same_data(&x));
        let at0 = x.restrict(&Functor::point(&arrow_cat(), 0)).unwrap();
        at0.validate().unwrap();
        let y = CoherentDiagram::point(&rel3());
        let p = y.restrict(&Functor::to_terminal(&pair())).unwrap();
        p.validate().unwrap();
        assert!(p.arrs.iter().all(|f| f.f0 == vec![0, 1, 2]));
    }

    #[test]
    fn whisker_identity_is_identity() {
        let x = CoherentDiagram::constant(&arrow_cat(), &chain3());
        let u = Functor::identity(&arrow_cat());
        let w = whisker(&NatTrans::identity(&u), &x).unwrap();
        w.validate().unwrap();
        assert!(equal_diag(&w, &DiagMor::identity(&x)).unwrap().is_some());
    }

    #[test]
    fn whisker_single_arrow() {
        let x = CoherentDiagram::constant(&arrow_cat(), &rel3());
        let a = arrow_cat();
        let arr = (0..a.n_arrows()).find(|&i| !a.is_identity(i)).unwrap();
        let mu = NatTrans::new(Functor::point(&a, 0), Functor::point(&a, 1), vec![arr]).unwrap();
        let w = whisker(&mu, &x).unwrap();
        w.validate().unwrap();
        assert_eq!(w.comps[0].f0, x.arrs[arr].f0);
    }

    #[test]
    fn compose_and_equality() {
        let a = arrow_cat();
        let x = CoherentDiagram::constant(&a, &chain3());
        let t = CoherentDiagram::constant(&a, &Setoid::terminal());
        let c = pointwise(&x, &t, vec![collapse(&chain3()), collapse(&chain3())]);
        let id = DiagMor::identity(&x);
        let ci = compose_diag(&id, &c).unwrap();
        ci.validate().unwrap();
        assert!(equal_diag(&ci, &c).unwrap().is_some());
        let tt = compose_diag(&c, &DiagMor::identity(&t)).unwrap();
        tt.validate().unwrap();
        let l = compose_diag(&compose_diag(&id, &id).unwrap(), &c).unwrap();
        let r = compose_diag(&id, &compose_diag(&id, &c).unwrap()).unwrap();
        assert!(equal_diag(&l, &r).unwrap().is_some());
    }

    #[test]
    fn equal_diag_ignores_witness_maps() {
        let r = rel3();
        let a = MorRep::identity(&r);
        let b = MorRep::by_search(r.clone(), r.clone(), vec![0, 1, 2]).unwrap();
        let x = CoherentDiagram::point(&r);
        let f = pointwise(&x, &x, vec![a]);
        let g = pointwise(&x, &x, vec![b]);
        assert!(equal_diag(&f, &g).unwrap().is_some());
        let p = CoherentDiagram::point(&Setoid::terminal());
        let to0 = pointwise(&p, &x, vec![MorRep::by_search(Setoid::terminal(), r.clone(), vec![0]).unwrap()]);
        let to2 = pointwise(&p, &x, vec![MorRep::by_search(Setoid::terminal(), r.clone(), vec![2]).unwrap()]);
        assert!(equal_diag(&to0, &to2).unwrap().is_none());
    }

    #[test]
    fn iso_examples() {
        let a = arrow_cat();
        let x = CoherentDiagram::constant(&a, &chain3());
        assert!(is_iso_diag(&DiagMor::identity(&x)).holds);
        let t = CoherentDiagram::constant(&a, &Setoid::terminal());
        let c = pointwise(&x, &t, vec![collapse(&chain3()), collapse(&chain3())]);
        let v = is_iso_diag(&c);
        assert!(v.holds);
        let d = v.witness.unwrap();
        d.inverse.validate().unwrap();
        d.left.validate(&compose_diag_unchecked(&c, &d.inverse), &DiagMor::identity(&x)).unwrap();
        d.right.validate(&compose_diag_unchecked(&d.inverse, &c), &DiagMor::identity(&t)).unwrap();
        let r = CoherentDiagram::constant(&a, &rel3());
        let cr = pointwise(&r, &t, vec![collapse(&rel3()), collapse(&rel3())]);
        assert!(!is_iso_diag(&cr).holds);
    }

    #[test]
    fn pullback_examples() {
        let r = rel3();
        let id = MorRep::identity(&r);
        let pb = pullback_eex(&id, &id).unwrap();
        let diag = pb.factor(&id, &id).unwrap();
        assert!(is_iso(&diag).holds);
        let pt = |p| MorRep::by_search(Setoid::terminal(), r.clone(), vec![p]).unwrap();
        assert_eq!(pullback_eex(&pt(0), &pt(1)).unwrap().setoid.size0(), 1);
        assert_eq!(pullback_eex(&pt(0), &pt(2)).unwrap().setoid.size0(), 0);
    }

    #[test]
    fn product_examples() {
        let d = discrete(1);
        let x = CoherentDiagram::constant(&d, &rel3());
        let t = CoherentDiagram::constant(&d, &Setoid::terminal());
        let (p, p1, _) = product_diag(&x, &t).unwrap();
        p.validate().unwrap();
        p1.validate().unwrap();
        assert!(is_iso_diag(&p1).holds);
        let (q, _, _) = product_diag(&x, &x).unwrap();
        assert_eq!(q.quotient().0.sizes, vec![4]);
        let a = arrow_cat();
        let e = embed_setdiagram(&SetDiagram::constant(&a, 2)).unwrap();
        let (pe, _, _) = product_diag(&e, &e).unwrap();
        pe.validate().unwrap();
        let direct = embed_setdiagram(&SetDiagram::constant(&a, 4)).unwrap();
        assert_eq!(pe.quotient().0, direct.quotient().0);
    }
}
