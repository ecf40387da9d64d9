//! Finite categories given by explicit composition tables, functors and
//! natural transformations between them, and the constructions the rest of
//! the crate is built on: comma categories, Grothendieck constructions,
//! connected components and zigzag search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

pub type Cat = Arc<FinCat>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("duplicate object label `{0}`")]
    DuplicateLabel(String),
    #[error("arrow `{arrow}` has an endpoint outside the object set")]
    BadEndpoint { arrow: String },
    #[error("identity of object {object} is not an endomorphism of it")]
    BadIdentity { object: usize },
    #[error("composite {g} ∘ {f} is missing from the composition table")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} ∘ {f} is defined but the arrows are not composable")]
    SpuriousComposite { g: String, f: String },
    #[error("composite {g} ∘ {f} has the wrong endpoints")]
    CompositeEndpoints { g: String, f: String },
    #[error("identity law fails for arrow `{0}`")]
    Unit(String),
    #[error("associativity fails for ({h}, {g}, {f})")]
    Associativity { h: String, g: String, f: String },
    #[error("functor {0}")]
    Functor(String),
    #[error("natural transformation {0}")]
    NatTrans(String),
    #[error("codomain mismatch: {0}")]
    Mismatch(String),
    #[error("diagram of categories is not strictly functorial at arrow {0}")]
    NotFunctorial(usize),
}

/// A finite set `{0, .., size-1}` with optional distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self, CatError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(CatError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinSet { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(ls) => ls.iter().position(|l| l == label),
            None => label.parse().ok().filter(|&i| i < self.size),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

/// A finite category. Arrows are indexed `0..n_arrows`; the composition
/// table maps `(g, f)` to `g ∘ f` exactly on composable pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    name: String,
    objects: FinSet,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}: {} objects, {} arrows)",
            self.name,
            self.n_objects(),
            self.n_arrows()
        )
    }
}

impl FinCat {
    /// Builds a category from full tables and checks every axiom.
    pub fn from_tables(
        name: impl Into<String>,
        objects: FinSet,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self, CatError> {
        let cat = Self::assemble(name.into(), objects, arrows, identities, compose);
        cat.validate()?;
        Ok(cat)
    }

    /// Builds a category from its non-identity arrows and the composites of
    /// every composable pair of non-identity arrows; identities are added.
    /// A missing composite is an error.
    pub fn generated(
        name: impl Into<String>,
        objects: FinSet,
        nonidentity: Vec<Arrow>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self, CatError> {
        let n = objects.size();
        let k = nonidentity.len();
        let mut arrows = nonidentity;
        for a in &arrows {
            if a.src >= n || a.dst >= n {
                return Err(CatError::BadEndpoint { arrow: a.label.clone() });
            }
        }
        let mut identities = Vec::with_capacity(n);
        for o in 0..n {
            identities.push(arrows.len());
            arrows.push(Arrow { src: o, dst: o, label: format!("id_{}", objects.label(o)) });
        }
        let mut compose = HashMap::new();
        for &(g, f, h) in composites {
            if g >= k || f >= k || h >= k {
                return Err(CatError::MissingComposite {
                    g: g.to_string(),
                    f: f.to_string(),
                });
            }
            compose.insert((g, f), h);
        }
        for (i, a) in arrows.iter().enumerate() {
            compose.insert((identities[a.dst], i), i);
            compose.insert((i, identities[a.src]), i);
        }
        Self::from_tables(name, objects, arrows, identities, compose)
    }

    /// Builds a category whose composition is computed by `comp(g, f)` on
    /// composable pairs. The result is not re-validated; callers construct
    /// categories whose laws hold by construction.
    pub fn from_fn(
        name: impl Into<String>,
        objects: FinSet,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        comp: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); objects.size()];
        for (i, a) in arrows.iter().enumerate() {
            outgoing[a.src].push(i);
        }
        let mut compose = HashMap::new();
        for (f, a) in arrows.iter().enumerate() {
            for &g in &outgoing[a.dst] {
                compose.insert((g, f), comp(g, f));
            }
        }
        Self::assemble(name.into(), objects, arrows, identities, compose)
    }

    fn assemble(
        name: String,
        objects: FinSet,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); objects.size()];
        let mut incoming = vec![Vec::new(); objects.size()];
        for (i, a) in arrows.iter().enumerate() {
            if a.src < objects.size() && a.dst < objects.size() {
                outgoing[a.src].push(i);
                incoming[a.dst].push(i);
            }
        }
        FinCat { name, objects, arrows, identities, compose, outgoing, incoming }
    }

    /// Exhaustive check of the category axioms.
    pub fn validate(&self) -> Result<(), CatError> {
        let n = self.n_objects();
        for a in &self.arrows {
            if a.src >= n || a.dst >= n {
                return Err(CatError::BadEndpoint { arrow: a.label.clone() });
            }
        }
        if self.identities.len() != n {
            return Err(CatError::BadIdentity { object: self.identities.len().min(n) });
        }
        for (o, &i) in self.identities.iter().enumerate() {
            if i >= self.arrows.len() || self.arrows[i].src != o || self.arrows[i].dst != o {
                return Err(CatError::BadIdentity { object: o });
            }
        }
        for (&(g, f), &h) in &self.compose {
            let (lg, lf) = (self.label_of(g), self.label_of(f));
            if g >= self.arrows.len() || f >= self.arrows.len() || self.arrows[f].dst != self.arrows[g].src {
                return Err(CatError::SpuriousComposite { g: lg, f: lf });
            }
            if h >= self.arrows.len()
                || self.arrows[h].src != self.arrows[f].src
                || self.arrows[h].dst != self.arrows[g].dst
            {
                return Err(CatError::CompositeEndpoints { g: lg, f: lf });
            }
        }
        for f in 0..self.arrows.len() {
            for &g in &self.outgoing[self.arrows[f].dst] {
                if !self.compose.contains_key(&(g, f)) {
                    return Err(CatError::MissingComposite { g: self.label_of(g), f: self.label_of(f) });
                }
            }
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if self.compose[&(self.identities[a.dst], i)] != i || self.compose[&(i, self.identities[a.src])] != i {
                return Err(CatError::Unit(a.label.clone()));
            }
        }
        for f in 0..self.arrows.len() {
            for &g in &self.outgoing[self.arrows[f].dst] {
                let gf = self.compose[&(g, f)];
                for &h in &self.outgoing[self.arrows[g].dst] {
                    let hg = self.compose[&(h, g)];
                    if self.compose[&(h, gf)] != self.compose[&(hg, f)] {
                        return Err(CatError::Associativity {
                            h: self.label_of(h),
                            g: self.label_of(g),
                            f: self.label_of(f),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn label_of(&self, i: usize) -> String {
        self.arrows.get(i).map(|a| a.label.clone()).unwrap_or_else(|| i.to_string())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn n_objects(&self) -> usize {
        self.objects.size()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn src(&self, i: usize) -> usize {
        self.arrows[i].src
    }

    pub fn dst(&self, i: usize) -> usize {
        self.arrows[i].dst
    }

    pub fn id(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, i: usize) -> bool {
        self.identities[self.arrows[i].src] == i
    }

    /// `g ∘ f`, defined when `dst f = src g`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f` for a pair the caller knows to be composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        match self.compose.get(&(g, f)) {
            Some(&h) => h,
            None => panic!("arrows {} and {} are not composable in {}", g, f, self.name),
        }
    }

    pub fn outgoing(&self, o: usize) -> &[usize] {
        &self.outgoing[o]
    }

    pub fn incoming(&self, o: usize) -> &[usize] {
        &self.incoming[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.outgoing[a].iter().copied().filter(|&i| self.arrows[i].dst == b).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.arrows.len() == self.n_objects()
    }

    pub fn object_label(&self, o: usize) -> String {
        self.objects.label(o)
    }

    /// Composable pairs `(f, g)` with `f` first.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for f in 0..self.arrows.len() {
            for &g in &self.outgoing[self.arrows[f].dst] {
                out.push((f, g));
            }
        }
        out
    }

    pub fn opposite(&self) -> FinCat {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { src: a.dst, dst: a.src, label: format!("{}^op", a.label) })
            .collect();
        FinCat::from_fn(
            format!("{}^op", self.name),
            self.objects.clone(),
            arrows,
            self.identities.clone(),
            |g, f| self.comp(f, g),
        )
    }
}

// ---------------------------------------------------------------------------
// Standard shapes

fn labels(ls: &[&str]) -> FinSet {
    FinSet::labelled(ls.iter().map(|s| s.to_string()).collect()).expect("distinct labels")
}

fn arr(src: usize, dst: usize, label: &str) -> Arrow {
    Arrow { src, dst, label: label.to_string() }
}

/// The terminal category.
pub fn one() -> Cat {
    Arc::new(FinCat::generated("ONE", labels(&["*"]), vec![], &[]).unwrap())
}

/// The interval `0 → 1`.
pub fn arrow_cat() -> Cat {
    Arc::new(FinCat::generated("ARROW", labels(&["0", "1"]), vec![arr(0, 1, "a")], &[]).unwrap())
}

/// Two parallel arrows `· ⇉ ·`.
pub fn pair() -> Cat {
    Arc::new(
        FinCat::generated("PAIR", labels(&["0", "1"]), vec![arr(0, 1, "f"), arr(0, 1, "g")], &[])
            .unwrap(),
    )
}

/// `1 ← 0 → 2`.
pub fn span() -> Cat {
    Arc::new(
        FinCat::generated("SPAN", labels(&["0", "1", "2"]), vec![arr(0, 1, "l"), arr(0, 2, "r")], &[])
            .unwrap(),
    )
}

/// `1 → 0 ← 2`.
pub fn cospan() -> Cat {
    Arc::new(
        FinCat::generated("COSPAN", labels(&["0", "1", "2"]), vec![arr(1, 0, "l"), arr(2, 0, "r")], &[])
            .unwrap(),
    )
}

/// A commuting square `00 → 01 → 11`, `00 → 10 → 11` with its diagonal.
pub fn square() -> Cat {
    Arc::new(
        FinCat::generated(
            "SQUARE",
            labels(&["00", "01", "10", "11"]),
            vec![
                arr(0, 1, "h0"),
                arr(0, 2, "v0"),
                arr(1, 3, "v1"),
                arr(2, 3, "h1"),
                arr(0, 3, "d"),
            ],
            &[(2, 0, 4), (3, 1, 4)],
        )
        .unwrap(),
    )
}

pub fn discrete(n: usize) -> Cat {
    let ls: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    Arc::new(FinCat::generated(format!("DISC{}", n), FinSet::labelled(ls).unwrap(), vec![], &[]).unwrap())
}

/// Disjoint union with its two inclusions.
pub fn coproduct(a: &Cat, b: &Cat) -> (Cat, Functor, Functor) {
    let na = a.n_objects();
    let ka = a.n_arrows();
    let ls: Vec<String> = (0..na)
        .map(|o| format!("L{}", a.object_label(o)))
        .chain((0..b.n_objects()).map(|o| format!("R{}", b.object_label(o))))
        .collect();
    let mut arrows: Vec<Arrow> = a.arrows.clone();
    arrows.extend(b.arrows.iter().map(|x| Arrow { src: x.src + na, dst: x.dst + na, label: x.label.clone() }));
    for x in arrows.iter_mut().take(ka) {
        x.label = format!("L{}", x.label);
    }
    for x in arrows.iter_mut().skip(ka) {
        x.label = format!("R{}", x.label);
    }
    let ids: Vec<usize> = a.identities.iter().copied().chain(b.identities.iter().map(|&i| i + ka)).collect();
    let cat = Arc::new(FinCat::from_fn(
        format!("{}+{}", a.name, b.name),
        FinSet::labelled(ls).unwrap(),
        arrows,
        ids,
        |g, f| if f < ka { a.comp(g, f) } else { b.comp(g - ka, f - ka) + ka },
    ));
    let ia = Functor::new_unchecked(a.clone(), cat.clone(), (0..na).collect(), (0..ka).collect());
    let ib = Functor::new_unchecked(
        b.clone(),
        cat.clone(),
        (0..b.n_objects()).map(|o| o + na).collect(),
        (0..b.n_arrows()).map(|i| i + ka).collect(),
    );
    (cat, ia, ib)
}

/// Product category with its projections. Object `(x, y)` has index
/// `x * |B| + y`, arrow `(f, g)` has index `f * arrows(B) + g`.
pub fn product(a: &Cat, b: &Cat) -> (Cat, Functor, Functor) {
    let nb = b.n_objects();
    let kb = b.n_arrows();
    let mut ls = Vec::new();
    for x in 0..a.n_objects() {
        for y in 0..nb {
            ls.push(format!("({},{})", a.object_label(x), b.object_label(y)));
        }
    }
    let mut arrows = Vec::new();
    for f in &a.arrows {
        for g in &b.arrows {
            arrows.push(Arrow {
                src: f.src * nb + g.src,
                dst: f.dst * nb + g.dst,
                label: format!("({},{})", f.label, g.label),
            });
        }
    }
    let ids = (0..a.n_objects())
        .flat_map(|x| (0..nb).map(move |y| (x, y)))
        .map(|(x, y)| a.id(x) * kb + b.id(y))
        .collect();
    let cat = Arc::new(FinCat::from_fn(
        format!("{}x{}", a.name, b.name),
        FinSet::labelled(ls).unwrap(),
        arrows,
        ids,
        |g, f| a.comp(g / kb, f / kb) * kb + b.comp(g % kb, f % kb),
    ));
    let p1 = Functor::new_unchecked(
        cat.clone(),
        a.clone(),
        (0..cat.n_objects()).map(|o| o / nb).collect(),
        (0..cat.n_arrows()).map(|i| i / kb).collect(),
    );
    let p2 = Functor::new_unchecked(
        cat.clone(),
        b.clone(),
        (0..cat.n_objects()).map(|o| o % nb).collect(),
        (0..cat.n_arrows()).map(|i| i % kb).collect(),
    );
    (cat, p1, p2)
}

/// `f × g` between the products built by [`product`].
pub fn product_functor(f: &Functor, g: &Functor) -> Functor {
    let (dom, _, _) = product(&f.dom, &g.dom);
    let (cod, _, _) = product(&f.cod, &g.cod);
    let (nb, kb) = (g.dom.n_objects(), g.dom.n_arrows());
    let (nd, kd) = (g.cod.n_objects(), g.cod.n_arrows());
    let obj = (0..dom.n_objects()).map(|o| f.obj[o / nb] * nd + g.obj[o % nb]).collect();
    let arr = (0..dom.n_arrows()).map(|i| f.arr[i / kb] * kd + g.arr[i % kb]).collect();
    Functor::new_unchecked(dom, cod, obj, arr)
}

/// The discrete category on the objects of `a`, with its inclusion.
pub fn ob_discrete(a: &Cat) -> (Cat, Functor) {
    let d = Arc::new(
        FinCat::generated(format!("ob({})", a.name), a.objects.clone(), vec![], &[]).unwrap(),
    );
    let incl = Functor::new_unchecked(
        d.clone(),
        a.clone(),
        (0..a.n_objects()).collect(),
        (0..a.n_objects()).map(|o| a.id(o)).collect(),
    );
    (d, incl)
}

/// The full subcategory on `objs` (in the given order) with its inclusion.
pub fn full_subcategory(c: &Cat, objs: &[usize], name: impl Into<String>) -> (Cat, Functor) {
    let pos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut arrows = Vec::new();
    let mut amap = Vec::new();
    let mut apos = HashMap::new();
    for &o in objs {
        for &i in c.outgoing(o) {
            if let Some(&d) = pos.get(&c.dst(i)) {
                apos.insert(i, arrows.len());
                amap.push(i);
                arrows.push(Arrow { src: pos[&o], dst: d, label: c.arrow(i).label.clone() });
            }
        }
    }
    let ids = objs.iter().map(|&o| apos[&c.id(o)]).collect();
    let ls = objs.iter().map(|&o| c.object_label(o)).collect();
    let sub = Arc::new(FinCat::from_fn(name, FinSet::labelled(ls).unwrap(), arrows, ids, |g, f| {
        apos[&c.comp(amap[g], amap[f])]
    }));
    let incl = Functor::new_unchecked(sub.clone(), c.clone(), objs.to_vec(), amap);
    (sub, incl)
}

// ---------------------------------------------------------------------------
// Functors and natural transformations

#[derive(Clone, PartialEq, Eq)]
pub struct Functor {
    pub dom: Cat,
    pub cod: Cat,
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functor({} → {}, obj {:?})", self.dom.name(), self.cod.name(), self.obj)
    }
}

impl Functor {
    pub fn new(dom: Cat, cod: Cat, obj: Vec<usize>, arr: Vec<usize>) -> Result<Self, CatError> {
        let f = Self::new_unchecked(dom, cod, obj, arr);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(dom: Cat, cod: Cat, obj: Vec<usize>, arr: Vec<usize>) -> Self {
        Functor { dom, cod, obj, arr }
    }

    /// Exhaustive check of sources, targets, identities and composites.
    pub fn validate(&self) -> Result<(), CatError> {
        let err = |m: String| Err(CatError::Functor(m));
        if self.obj.len() != self.dom.n_objects() || self.arr.len() != self.dom.n_arrows() {
            return err("table sizes do not match the domain".into());
        }
        if self.obj.iter().any(|&o| o >= self.cod.n_objects()) || self.arr.iter().any(|&a| a >= self.cod.n_arrows()) {
            return err("image outside the codomain".into());
        }
        for (i, a) in self.dom.arrows().iter().enumerate() {
            let img = self.cod.arrow(self.arr[i]);
            if img.src != self.obj[a.src] || img.dst != self.obj[a.dst] {
                return err(format!("does not preserve the endpoints of `{}`", a.label));
            }
        }
        for o in 0..self.dom.n_objects() {
            if self.arr[self.dom.id(o)] != self.cod.id(self.obj[o]) {
                return err(format!("does not preserve the identity of object {}", o));
            }
        }
        for (f, g) in self.dom.composable_pairs() {
            if self.arr[self.dom.comp(g, f)] != self.cod.comp(self.arr[g], self.arr[f]) {
                return err(format!(
                    "does not preserve the composite of `{}` then `{}`",
                    self.dom.arrow(f).label,
                    self.dom.arrow(g).label
                ));
            }
        }
        Ok(())
    }

    pub fn identity(c: &Cat) -> Self {
        Functor::new_unchecked(c.clone(), c.clone(), (0..c.n_objects()).collect(), (0..c.n_arrows()).collect())
    }

    /// The functor sending everything to `o` and its identity.
    pub fn constant(dom: &Cat, cod: &Cat, o: usize) -> Self {
        Functor::new_unchecked(dom.clone(), cod.clone(), vec![o; dom.n_objects()], vec![cod.id(o); dom.n_arrows()])
    }

    pub fn to_terminal(dom: &Cat) -> Self {
        Self::constant(dom, &one(), 0)
    }

    /// The object `c` as a functor out of the terminal category.
    pub fn point(cod: &Cat, c: usize) -> Self {
        Self::constant(&one(), cod, c)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Functor) -> Functor {
        assert!(Arc::ptr_eq(&self.cod, &then.dom) || *self.cod == *then.dom, "functors are not composable");
        Functor::new_unchecked(
            self.dom.clone(),
            then.cod.clone(),
            self.obj.iter().map(|&o| then.obj[o]).collect(),
            self.arr.iter().map(|&a| then.arr[a]).collect(),
        )
    }

    /// Equality of the underlying tables (domains and codomains compared by value).
    pub fn same_as(&self, other: &Functor) -> bool {
        self.obj == other.obj && self.arr == other.arr && *self.dom == *other.dom && *self.cod == *other.cod
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub dom: Functor,
    pub cod: Functor,
    pub comps: Vec<usize>,
}

impl NatTrans {
    pub fn new(dom: Functor, cod: Functor, comps: Vec<usize>) -> Result<Self, CatError> {
        let t = NatTrans { dom, cod, comps };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), CatError> {
        let (u, v) = (&self.dom, &self.cod);
        if *u.dom != *v.dom || *u.cod != *v.cod {
            return Err(CatError::NatTrans("functors are not parallel".into()));
        }
        let c = &u.cod;
        if self.comps.len() != u.dom.n_objects() {
            return Err(CatError::NatTrans("wrong number of components".into()));
        }
        for (a, &m) in self.comps.iter().enumerate() {
            if m >= c.n_arrows() || c.src(m) != u.obj[a] || c.dst(m) != v.obj[a] {
                return Err(CatError::NatTrans(format!("component at {} has wrong endpoints", a)));
            }
        }
        for (i, x) in u.dom.arrows().iter().enumerate() {
            let lhs = c.comp(v.arr[i], self.comps[x.src]);
            let rhs = c.comp(self.comps[x.dst], u.arr[i]);
            if lhs != rhs {
                return Err(CatError::NatTrans(format!("naturality fails at `{}`", x.label)));
            }
        }
        Ok(())
    }

    pub fn identity(u: &Functor) -> Self {
        let comps = u.obj.iter().map(|&o| u.cod.id(o)).collect();
        NatTrans { dom: u.clone(), cod: u.clone(), comps }
    }

    /// Vertical composite `next · self`.
    pub fn then(&self, next: &NatTrans) -> NatTrans {
        let c = &self.dom.cod;
        let comps = self.comps.iter().zip(&next.comps).map(|(&m, &n)| c.comp(n, m)).collect();
        NatTrans { dom: self.dom.clone(), cod: next.cod.clone(), comps }
    }

    /// Whiskering `self ∘ w` by a functor on the left of the domain.
    pub fn precompose(&self, w: &Functor) -> NatTrans {
        NatTrans {
            dom: w.then(&self.dom),
            cod: w.then(&self.cod),
            comps: w.obj.iter().map(|&o| self.comps[o]).collect(),
        }
    }

    /// Whiskering `w ∘ self`.
    pub fn postcompose(&self, w: &Functor) -> NatTrans {
        NatTrans {
            dom: self.dom.then(w),
            cod: self.cod.then(w),
            comps: self.comps.iter().map(|&m| w.arr[m]).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Comma categories

/// `(u/v)` with its projections and the canonical cell `u p ⇒ v q`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Cat,
    pub p: Functor,
    pub q: Functor,
    pub cell: NatTrans,
    /// Objects as triples `(a, b, γ: ua → vb)`.
    pub objects: Vec<(usize, usize, usize)>,
    /// Arrows as pairs `(α, β)`.
    pub arrows: Vec<(usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
}

impl Comma {
    pub fn find_object(&self, a: usize, b: usize, gamma: usize) -> Option<usize> {
        self.index.get(&(a, b, gamma)).copied()
    }
}

pub fn comma(u: &Functor, v: &Functor) -> Result<Comma, CatError> {
    if *u.cod != *v.cod {
        return Err(CatError::Mismatch(format!(
            "comma of functors into {} and {}",
            u.cod.name(),
            v.cod.name()
        )));
    }
    let (a, b, c) = (&u.dom, &v.dom, &u.cod);
    let mut objects = Vec::new();
    for x in 0..a.n_objects() {
        for y in 0..b.n_objects() {
            for g in c.hom(u.obj[x], v.obj[y]) {
                objects.push((x, y, g));
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut arrows = Vec::new();
    let mut arrs = Vec::new();
    let mut apos = HashMap::new();
    for (i, &(x, y, g)) in objects.iter().enumerate() {
        for &al in a.outgoing(x) {
            for &be in b.outgoing(y) {
                let (x2, y2) = (a.dst(al), b.dst(be));
                let lhs = c.comp(v.arr[be], g);
                for g2 in c.hom(u.obj[x2], v.obj[y2]) {
                    if c.comp(g2, u.arr[al]) == lhs {
                        let j = index[&(x2, y2, g2)];
                        apos.insert((i, al, be), arrows.len());
                        arrs.push((al, be));
                        arrows.push(Arrow {
                            src: i,
                            dst: j,
                            label: format!("({},{})", a.arrow(al).label, b.arrow(be).label),
                        });
                    }
                }
            }
        }
    }
    let ids: Vec<usize> = objects.iter().enumerate().map(|(i, &(x, y, _))| apos[&(i, a.id(x), b.id(y))]).collect();
    let ls: Vec<String> = objects
        .iter()
        .map(|&(x, y, g)| format!("({},{},{})", a.object_label(x), b.object_label(y), c.arrow(g).label))
        .collect();
    let arrows_src: Vec<usize> = arrows.iter().map(|x| x.src).collect();
    let cat = Arc::new(FinCat::from_fn(
        format!("({}/{})", a.name(), b.name()),
        FinSet::new(ls.len()).with_labels_unchecked(ls),
        arrows,
        ids,
        |g, f| {
            let (a1, b1) = arrs[f];
            let (a2, b2) = arrs[g];
            apos[&(arrows_src[f], a.comp(a2, a1), b.comp(b2, b1))]
        },
    ));
    let p = Functor::new_unchecked(
        cat.clone(),
        a.clone(),
        objects.iter().map(|o| o.0).collect(),
        arrs.iter().map(|x| x.0).collect(),
    );
    let q = Functor::new_unchecked(
        cat.clone(),
        b.clone(),
        objects.iter().map(|o| o.1).collect(),
        arrs.iter().map(|x| x.1).collect(),
    );
    let cell = NatTrans { dom: p.then(u), cod: q.then(v), comps: objects.iter().map(|o| o.2).collect() };
    Ok(Comma { cat, p, q, cell, objects, arrows: arrs, index })
}

impl FinSet {
    fn with_labels_unchecked(mut self, labels: Vec<String>) -> Self {
        self.size = labels.len();
        self.labels = Some(labels);
        self
    }
}

// ---------------------------------------------------------------------------
// Diagrams of categories and the Grothendieck construction

/// A strict functor `A → Cat` with finite values.
#[derive(Clone, Debug)]
pub struct CatDiagram {
    pub shape: Cat,
    pub fibers: Vec<Cat>,
    pub actions: Vec<Functor>,
}

impl CatDiagram {
    pub fn new(shape: Cat, fibers: Vec<Cat>, actions: Vec<Functor>) -> Result<Self, CatError> {
        let d = CatDiagram { shape, fibers, actions };
        d.validate()?;
        Ok(d)
    }

    /// The constant diagram at `c`, every arrow acting as the identity.
    pub fn constant(shape: &Cat, c: &Cat) -> Self {
        CatDiagram {
            shape: shape.clone(),
            fibers: vec![c.clone(); shape.n_objects()],
            actions: vec![Functor::identity(c); shape.n_arrows()],
        }
    }

    pub fn validate(&self) -> Result<(), CatError> {
        let s = &self.shape;
        if self.fibers.len() != s.n_objects() || self.actions.len() != s.n_arrows() {
            return Err(CatError::Mismatch("diagram of categories has wrong arity".into()));
        }
        for (i, x) in s.arrows().iter().enumerate() {
            let f = &self.actions[i];
            if *f.dom != *self.fibers[x.src] || *f.cod != *self.fibers[x.dst] {
                return Err(CatError::NotFunctorial(i));
            }
            f.validate()?;
        }
        for o in 0..s.n_objects() {
            if !self.actions[s.id(o)].same_as(&Functor::identity(&self.fibers[o])) {
                return Err(CatError::NotFunctorial(s.id(o)));
            }
        }
        for (f, g) in s.composable_pairs() {
            let lhs = self.actions[f].then(&self.actions[g]);
            if !lhs.same_as(&self.actions[s.comp(g, f)]) {
                return Err(CatError::NotFunctorial(s.comp(g, f)));
            }
        }
        Ok(())
    }
}

/// A natural family of functors between two diagrams of categories over the
/// same shape.
#[derive(Clone, Debug)]
pub struct CatDiagramMap {
    pub dom: CatDiagram,
    pub cod: CatDiagram,
    pub comps: Vec<Functor>,
}

impl CatDiagramMap {
    pub fn validate(&self) -> Result<(), CatError> {
        for (i, x) in self.dom.shape.arrows().iter().enumerate() {
            let lhs = self.comps[x.src].then(&self.cod.actions[i]);
            let rhs = self.dom.actions[i].then(&self.comps[x.dst]);
            if !lhs.same_as(&rhs) {
                return Err(CatError::NatTrans(format!("naturality of the family fails at `{}`", x.label)));
            }
        }
        for c in &self.comps {
            c.validate()?;
        }
        Ok(())
    }

    /// `Σ_a u_a` over `ob A` (the disjoint union of the components).
    pub fn total_over_objects(&self) -> (Functor, Functor) {
        let (src, src_proj, offs_s) = disjoint_union(&self.dom.fibers);
        let (tgt, tgt_proj, offs_t) = disjoint_union(&self.cod.fibers);
        let mut obj = vec![0; src.n_objects()];
        let mut arr = vec![0; src.n_arrows()];
        for (c, f) in self.comps.iter().enumerate() {
            for (o, &img) in f.obj.iter().enumerate() {
                obj[offs_s[c].0 + o] = offs_t[c].0 + img;
            }
            for (i, &img) in f.arr.iter().enumerate() {
                arr[offs_s[c].1 + i] = offs_t[c].1 + img;
            }
        }
        let _ = src_proj;
        (Functor::new_unchecked(src, tgt, obj, arr), tgt_proj)
    }
}

/// Disjoint union of a family, with its projection to the discrete index
/// category and the (object, arrow) offsets of each summand.
pub fn disjoint_union(cats: &[Cat]) -> (Cat, Functor, Vec<(usize, usize)>) {
    let mut ls = Vec::new();
    let mut arrows = Vec::new();
    let mut ids = Vec::new();
    let mut offs = Vec::new();
    let mut owner = Vec::new();
    let mut owner_arr = Vec::new();
    for (k, c) in cats.iter().enumerate() {
        let (no, na) = (ls.len(), arrows.len());
        offs.push((no, na));
        for o in 0..c.n_objects() {
            ls.push(format!("{}:{}", k, c.object_label(o)));
            owner.push(k);
        }
        for x in c.arrows() {
            arrows.push(Arrow { src: x.src + no, dst: x.dst + no, label: format!("{}:{}", k, x.label) });
            owner_arr.push(k);
        }
        ids.extend((0..c.n_objects()).map(|o| c.id(o) + na));
    }
    let cat = Arc::new(FinCat::from_fn("Σ", FinSet::new(ls.len()).with_labels_unchecked(ls), arrows, ids, |g, f| {
        let k = owner_arr[f];
        cats[k].comp(g - offs[k].1, f - offs[k].1) + offs[k].1
    }));
    let base = discrete(cats.len());
    let proj = Functor::new_unchecked(
        cat.clone(),
        base.clone(),
        owner,
        owner_arr.iter().map(|&k| base.id(k)).collect(),
    );
    (cat, proj, offs)
}

/// `∫E` with its split opfibration `p_E: ∫E → A`.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub cat: Cat,
    pub proj: Functor,
    /// Objects as `(c, e)` with `e` an object of `E(c)`.
    pub objects: Vec<(usize, usize)>,
    /// Arrows as `(γ, φ)` with `φ: E(γ)(e) → e'` in `E(c')`.
    pub arrows: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    arrow_index: HashMap<(usize, usize, usize), usize>,
}

impl Grothendieck {
    pub fn object(&self, c: usize, e: usize) -> usize {
        self.index[&(c, e)]
    }

    /// The arrow `(γ, φ)` out of object `src`.
    pub fn arrow(&self, src: usize, gamma: usize, phi: usize) -> Option<usize> {
        self.arrow_index.get(&(src, gamma, phi)).copied()
    }

    /// The opcartesian lift of `γ` at `src`, i.e. `(γ, id)`.
    pub fn lift(&self, e: &CatDiagram, src: usize, gamma: usize) -> usize {
        let (_, o) = self.objects[src];
        let img = e.actions[gamma].obj[o];
        self.arrow_index[&(src, gamma, e.fibers[e.shape.dst(gamma)].id(img))]
    }
}

pub fn grothendieck(e: &CatDiagram) -> Result<Grothendieck, CatError> {
    e.validate()?;
    Ok(grothendieck_unchecked(e))
}

pub fn grothendieck_unchecked(e: &CatDiagram) -> Grothendieck {
    let s = &e.shape;
    let mut objects = Vec::new();
    let mut index = HashMap::new();
    let mut ls = Vec::new();
    for c in 0..s.n_objects() {
        for o in 0..e.fibers[c].n_objects() {
            index.insert((c, o), objects.len());
            objects.push((c, o));
            ls.push(format!("({},{})", s.object_label(c), e.fibers[c].object_label(o)));
        }
    }
    let mut arrows = Vec::new();
    let mut arrs = Vec::new();
    let mut arrow_index = HashMap::new();
    for (i, &(c, o)) in objects.iter().enumerate() {
        for &g in s.outgoing(c) {
            let c2 = s.dst(g);
            let img = e.actions[g].obj[o];
            let fib = &e.fibers[c2];
            for &phi in fib.outgoing(img) {
                arrow_index.insert((i, g, phi), arrows.len());
                arrs.push((g, phi));
                arrows.push(Arrow {
                    src: i,
                    dst: index[&(c2, fib.dst(phi))],
                    label: format!("({},{})", s.arrow(g).label, fib.arrow(phi).label),
                });
            }
        }
    }
    let ids = objects
        .iter()
        .enumerate()
        .map(|(i, &(c, o))| arrow_index[&(i, s.id(c), e.fibers[c].id(o))])
        .collect();
    let srcs: Vec<usize> = arrows.iter().map(|a| a.src).collect();
    let cat = Arc::new(FinCat::from_fn(
        format!("∫({})", s.name()),
        FinSet::new(ls.len()).with_labels_unchecked(ls),
        arrows,
        ids,
        |g, f| {
            let (g1, p1) = arrs[f];
            let (g2, p2) = arrs[g];
            let c3 = s.dst(g2);
            let phi = e.fibers[c3].comp(p2, e.actions[g2].arr[p1]);
            arrow_index[&(srcs[f], s.comp(g2, g1), phi)]
        },
    ));
    let proj = Functor::new_unchecked(
        cat.clone(),
        s.clone(),
        objects.iter().map(|o| o.0).collect(),
        arrs.iter().map(|a| a.0).collect(),
    );
    Grothendieck { cat, proj, objects, arrows: arrs, index, arrow_index }
}

// ---------------------------------------------------------------------------
// Connected components, zigzags, fibers

/// Connected components: their number and the component of each object.
/// Components are numbered in order of their least object.
pub fn pi0(c: &FinCat) -> (usize, Vec<usize>) {
    let n = c.n_objects();
    let mut uf = UnionFind::<usize>::new(n);
    for a in c.arrows() {
        uf.union(a.src, a.dst);
    }
    let mut label = HashMap::new();
    let mut comp = Vec::with_capacity(n);
    for o in 0..n {
        let root = uf.find(o);
        let next = label.len();
        comp.push(*label.entry(root).or_insert(next));
    }
    (label.len(), comp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Forward,
    Backward,
}

/// A path of arrows each traversed forwards or backwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Zigzag {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<(usize, Dir)>,
}

impl Zigzag {
    pub fn empty(at: usize) -> Self {
        Zigzag { start: at, end: at, steps: vec![] }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Consecutive entries are endpoint-compatible and the endpoints match.
    pub fn validate(&self, c: &FinCat) -> bool {
        let mut at = self.start;
        for &(a, d) in &self.steps {
            if a >= c.n_arrows() {
                return false;
            }
            let (from, to) = match d {
                Dir::Forward => (c.src(a), c.dst(a)),
                Dir::Backward => (c.dst(a), c.src(a)),
            };
            if from != at {
                return false;
            }
            at = to;
        }
        at == self.end
    }

    pub fn reversed(&self) -> Zigzag {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|&(a, d)| (a, if d == Dir::Forward { Dir::Backward } else { Dir::Forward }))
            .collect();
        Zigzag { start: self.end, end: self.start, steps }
    }

    pub fn concat(&self, other: &Zigzag) -> Zigzag {
        assert_eq!(self.end, other.start, "zigzags are not composable");
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Zigzag { start: self.start, end: other.end, steps }
    }

    /// Image under a functor (identities are dropped).
    pub fn map(&self, f: &Functor) -> Zigzag {
        Zigzag {
            start: f.obj[self.start],
            end: f.obj[self.end],
            steps: self
                .steps
                .iter()
                .filter(|(a, _)| !f.cod.is_identity(f.arr[*a]))
                .map(|&(a, d)| (f.arr[a], d))
                .collect(),
        }
    }
}

/// Shortest zigzag from `x` to `y`, ties broken lexicographically by arrow
/// index (forward before backward). Identities are never used.
pub fn zigzag_search(c: &FinCat, x: usize, y: usize) -> Option<Zigzag> {
    if x == y {
        return Some(Zigzag::empty(x));
    }
    let n = c.n_objects();
    let mut adj: Vec<Vec<(usize, Dir, usize)>> = vec![Vec::new(); n];
    for (i, a) in c.arrows().iter().enumerate() {
        if c.is_identity(i) {
            continue;
        }
        adj[a.src].push((i, Dir::Forward, a.dst));
        adj[a.dst].push((i, Dir::Backward, a.src));
    }
    for l in adj.iter_mut() {
        l.sort();
    }
    let mut parent: Vec<Option<(usize, usize, Dir)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(p) = queue.pop_front() {
        for &(a, d, q) in &adj[p] {
            if !seen[q] {
                seen[q] = true;
                parent[q] = Some((p, a, d));
                if q == y {
                    let mut steps = Vec::new();
                    let mut at = y;
                    while let Some((prev, a, d)) = parent[at] {
                        steps.push((a, d));
                        at = prev;
                    }
                    steps.reverse();
                    return Some(Zigzag { start: x, end: y, steps });
                }
                queue.push_back(q);
            }
        }
    }
    None
}

/// A category with a functor to a discrete category on `base` elements.
#[derive(Clone, Debug)]
pub struct CatOverSet {
    pub total: Cat,
    pub base: usize,
    pub proj: Vec<usize>,
}

impl CatOverSet {
    pub fn new(total: Cat, base: usize, proj: Vec<usize>) -> Result<Self, CatError> {
        if proj.len() != total.n_objects() || proj.iter().any(|&i| i >= base) {
            return Err(CatError::Functor("projection to the base is malformed".into()));
        }
        for a in total.arrows() {
            if proj[a.src] != proj[a.dst] {
                return Err(CatError::Functor(format!("arrow `{}` crosses fibers", a.label)));
            }
        }
        Ok(CatOverSet { total, base, proj })
    }

    /// Reads the projection off a functor into a discrete category.
    pub fn from_functor(v: &Functor) -> Result<Self, CatError> {
        if !v.cod.is_discrete() {
            return Err(CatError::Mismatch(format!("{} is not discrete", v.cod.name())));
        }
        Self::new(v.dom.clone(), v.cod.n_objects(), v.obj.clone())
    }

    pub fn terminal(total: &Cat) -> Self {
        CatOverSet { total: total.clone(), base: 1, proj: vec![0; total.n_objects()] }
    }

    pub fn as_functor(&self) -> Functor {
        let base = discrete(self.base);
        Functor::new_unchecked(
            self.total.clone(),
            base.clone(),
            self.proj.clone(),
            self.total.arrows().iter().map(|a| base.id(self.proj[a.src])).collect(),
        )
    }

    pub fn fiber_objects(&self, i: usize) -> Vec<usize> {
        (0..self.total.n_objects()).filter(|&o| self.proj[o] == i).collect()
    }
}

/// The full subcategory over each base element, with inclusions.
pub fn fibers(u: &CatOverSet) -> Vec<(Cat, Functor)> {
    (0..u.base)
        .map(|i| full_subcategory(&u.total, &u.fiber_objects(i), format!("{}|{}", u.total.name(), i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_comma_count(u: &Functor, v: &Functor) -> usize {
        let mut n = 0;
        for a in 0..u.dom.n_objects() {
            for b in 0..v.dom.n_objects() {
                n += u.cod.arrows().iter().filter(|x| x.src == u.obj[a] && x.dst == v.obj[b]).count();
            }
        }
        n
    }

    #[test]
    fn standard_shapes_validate() {
        for c in [one(), arrow_cat(), pair(), span(), cospan(), square(), discrete(3)] {
            c.validate().unwrap();
        }
        let (s, _, _) = product(&arrow_cat(), &pair());
        s.validate().unwrap();
        let (s, i, j) = coproduct(&arrow_cat(), &pair());
        s.validate().unwrap();
        i.validate().unwrap();
        j.validate().unwrap();
    }

    #[test]
    fn missing_composite_rejected() {
        let objs = FinSet::labelled(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let r = FinCat::generated("bad", objs, vec![arr(0, 1, "f"), arr(1, 2, "g")], &[]);
        assert!(matches!(r, Err(CatError::MissingComposite { .. })));
    }

    #[test]
    fn comma_examples() {
        let one = one();
        let id1 = Functor::identity(&one);
        assert_eq!(comma(&id1, &id1).unwrap().cat.n_objects(), 1);

        let ar = arrow_cat();
        let u = Functor::point(&ar, 0);
        let c = comma(&u, &Functor::identity(&ar)).unwrap();
        assert_eq!(c.cat.n_objects(), 2);
        assert_eq!(c.cat.n_arrows() - c.cat.n_objects(), 1);
        c.cat.validate().unwrap();

        let p = pair();
        let c = comma(&Functor::identity(&p), &Functor::point(&p, 1)).unwrap();
        assert_eq!(c.cat.n_objects(), 3);
        assert_eq!(c.cat.n_objects(), brute_comma_count(&Functor::identity(&p), &Functor::point(&p, 1)));
        c.cell.validate().unwrap();
    }

    #[test]
    fn comma_codomain_mismatch() {
        let u = Functor::identity(&pair());
        let v = Functor::identity(&arrow_cat());
        assert!(comma(&u, &v).is_err());
    }

    #[test]
    fn grothendieck_examples() {
        let c = square();
        let g = grothendieck(&CatDiagram::constant(&one(), &c)).unwrap();
        assert_eq!(g.cat.n_objects(), c.n_objects());
        assert_eq!(g.cat.n_arrows(), c.n_arrows());

        let g = grothendieck(&CatDiagram::constant(&arrow_cat(), &discrete(2))).unwrap();
        g.cat.validate().unwrap();
        assert_eq!(g.cat.n_objects(), 4);
        assert_eq!(g.cat.n_arrows() - 4, 2);

        let g = grothendieck(&CatDiagram::constant(&pair(), &one())).unwrap();
        assert_eq!((g.cat.n_objects(), g.cat.n_arrows()), (2, 4));
    }

    #[test]
    fn grothendieck_rejects_nonfunctorial() {
        let d2 = discrete(2);
        let swap = Functor::new(d2.clone(), d2.clone(), vec![1, 0], vec![1, 0]).unwrap();
        // the identity of the shape must act as the identity
        let mut e = CatDiagram::constant(&one(), &d2);
        e.actions[0] = swap;
        assert!(grothendieck(&e).is_err());
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(pi0(&pair()).0, 1);
        assert_eq!(pi0(&discrete(2)).0, 2);
        let (s, _, _) = coproduct(&arrow_cat(), &pair());
        assert_eq!(pi0(&s).0, 2);
    }

    #[test]
    fn zigzag_examples() {
        let p = pair();
        assert_eq!(zigzag_search(&p, 0, 0).unwrap().len(), 0);
        let z = zigzag_search(&p, 0, 1).unwrap();
        assert_eq!(z.steps, vec![(0, Dir::Forward)]);
        let z = zigzag_search(&p, 1, 0).unwrap();
        assert_eq!(z.steps, vec![(0, Dir::Backward)]);
        let (s, _, _) = coproduct(&arrow_cat(), &pair());
        assert!(zigzag_search(&s, 0, 2).is_none());
        let sp = span();
        let z = zigzag_search(&sp, 1, 2).unwrap();
        assert!(z.validate(&sp));
        assert_eq!(z.len(), 2);
    }

    #[test]
    fn fibers_examples() {
        let t = discrete(3);
        let f = fibers(&CatOverSet::new(t.clone(), 2, vec![0, 1, 1]).unwrap());
        assert_eq!(f[0].0.n_objects(), 1);
        assert_eq!(f[1].0.n_objects(), 2);

        let (s, _, _) = coproduct(&arrow_cat(), &pair());
        let f = fibers(&CatOverSet::new(s, 2, vec![0, 0, 1, 1]).unwrap());
        assert_eq!(f[0].0.n_arrows(), arrow_cat().n_arrows());
        assert_eq!(f[1].0.n_arrows(), pair().n_arrows());
        f[1].0.validate().unwrap();

        let f = fibers(&CatOverSet::terminal(&square()));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.n_arrows(), square().n_arrows());
    }
}
