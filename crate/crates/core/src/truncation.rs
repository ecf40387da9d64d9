//! The truncated targets `Set`, `Sreg`, `Spos`, `Prop` and `Contr`: their
//! reflections out of coherent diagrams, and the checkers deciding which
//! functors over a discrete index each of them inverts.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coherent::{embed_setdiagram, CoherentDiagram, CoherentError, DiagMor, SetDiagram};
use crate::fincat::{
    disjoint_union, discrete, fibers, full_subcategory, pi0, zigzag_search, Cat, CatError, CatOverSet, Functor, Zigzag,
};
use crate::kan::{colimit_over, kan_comparison, set_colimit};
use crate::setoid::{is_iso, MorRep, Setoid, DEFAULT_CAP};
use crate::corpus::Corpus;
use crate::verdict::{Record, Verdict};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TruncError {
    #[error(transparent)]
    Coherent(#[from] CoherentError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("index category {0} is not discrete")]
    NotDiscrete(String),
    #[error("{0} has no reflection")]
    NoReflection(Theory),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Sex,
    Reg,
    Set,
    Pos,
    Prop,
    Contr,
}

impl Theory {
    pub const ALL: [Theory; 6] = [Theory::Sex, Theory::Reg, Theory::Set, Theory::Pos, Theory::Prop, Theory::Contr];
    /// The targets reached by a reflection with invertible counit.
    pub const REFLECTIVE: [Theory; 4] = [Theory::Set, Theory::Reg, Theory::Pos, Theory::Prop];

    pub fn tag(self) -> &'static str {
        match self {
            Theory::Sex => "sex",
            Theory::Reg => "reg",
            Theory::Set => "set",
            Theory::Pos => "pos",
            Theory::Prop => "prop",
            Theory::Contr => "contr",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theory {
    type Err = TruncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sex" => Ok(Theory::Sex),
            "reg" | "sreg" => Ok(Theory::Reg),
            "set" => Ok(Theory::Set),
            "pos" | "spos" => Ok(Theory::Pos),
            "prop" => Ok(Theory::Prop),
            "contr" => Ok(Theory::Contr),
            other => Err(TruncError::UnknownTheory(other.to_string())),
        }
    }
}

// ---------------------------------------------------------------------------
// Reflected objects

/// A diagram of equivalence relations: the image of each `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegDiagram {
    pub shape: Cat,
    pub sizes: Vec<usize>,
    /// `related[a][x][y]`.
    pub related: Vec<Vec<Vec<bool>>>,
    pub maps: Vec<Vec<usize>>,
}

impl RegDiagram {
    /// Equivalence classes of each relation, numbered by least element.
    pub fn classes(&self, a: usize) -> (usize, Vec<usize>) {
        let n = self.sizes[a];
        let mut class = vec![usize::MAX; n];
        let mut k = 0;
        for x in 0..n {
            if class[x] == usize::MAX {
                for y in x..n {
                    if self.related[a][x][y] {
                        class[y] = k;
                    }
                }
                k += 1;
            }
        }
        (k, class)
    }

    pub fn is_equivalence(&self) -> bool {
        self.related.iter().all(|r| {
            let n = r.len();
            (0..n).all(|x| r[x][x])
                && (0..n).all(|x| (0..n).all(|y| r[x][y] == r[y][x]))
                && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(r[x][y] && r[y][z]) || r[x][z])))
        })
    }
}

/// A diagram in the preorder reflection: carriers `X0 + X1` (witnesses
/// listed up to the enumeration cap) and functions between them. All
/// parallel maps count as equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosDiagram {
    pub shape: Cat,
    pub carriers: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl PosDiagram {
    pub fn inhabited(&self, a: usize) -> bool {
        self.carriers[a] > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropDiagram {
    pub shape: Cat,
    pub inhabited: Vec<bool>,
}

#[derive(Clone, Debug)]
pub enum Reflected {
    Set(SetDiagram),
    Reg(RegDiagram),
    Pos(PosDiagram),
    Prop(PropDiagram),
}

impl Reflected {
    /// Per-object summary: class counts, carrier sizes or truth values.
    pub fn summary(&self) -> Vec<usize> {
        match self {
            Reflected::Set(d) => d.sizes.clone(),
            Reflected::Reg(d) => (0..d.sizes.len()).map(|a| d.classes(a).0).collect(),
            Reflected::Pos(d) => d.carriers.clone(),
            Reflected::Prop(d) => d.inhabited.iter().map(|&b| b as usize).collect(),
        }
    }
}

fn relation_matrix(x: &Setoid) -> Vec<Vec<bool>> {
    let n = x.size0();
    (0..n).map(|a| (0..n).map(|b| x.related(a, b).is_some()).collect()).collect()
}

/// `L(X)` for one of the reflective theories.
pub fn reflect(theory: Theory, x: &CoherentDiagram) -> Result<Reflected, TruncError> {
    let s = &x.shape;
    match theory {
        Theory::Set => Ok(Reflected::Set(x.quotient().0)),
        Theory::Reg => Ok(Reflected::Reg(RegDiagram {
            shape: s.clone(),
            sizes: x.objs.iter().map(|o| o.size0()).collect(),
            related: x.objs.iter().map(relation_matrix).collect(),
            maps: x.arrs.iter().map(|f| f.f0.clone()).collect(),
        })),
        Theory::Pos => {
            let sources: Vec<Vec<usize>> = x.objs.iter().map(pos_sources).collect();
            let carriers: Vec<usize> = x.objs.iter().zip(&sources).map(|(o, p)| o.size0() + p.len()).collect();
            let maps = s
                .arrows()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let f = &x.arrs[i];
                    let mut m: Vec<usize> = f.f0.clone();
                    m.extend(sources[a.src].iter().map(|&p| f.f0[p]));
                    m
                })
                .collect();
            Ok(Reflected::Pos(PosDiagram { shape: s.clone(), carriers, maps }))
        }
        Theory::Prop => Ok(Reflected::Prop(PropDiagram {
            shape: s.clone(),
            inhabited: x.objs.iter().map(|o| o.size0() > 0).collect(),
        })),
        other => Err(TruncError::NoReflection(other)),
    }
}

/// Sources of the witnesses entering the preorder carrier: the whole pool
/// for finite presentations, one canonical witness per related pair
/// otherwise.
fn pos_sources(x: &Setoid) -> Vec<usize> {
    if x.as_tabular().is_some() || x.relation().is_some() {
        return x.witness_pool(DEFAULT_CAP).iter().map(|w| x.s(w)).collect();
    }
    let q = x.quotient();
    let blocks = q.blocks();
    let mut out = Vec::new();
    for p in 0..x.size0() {
        out.extend(std::iter::repeat_n(p, blocks[q.class[p]].len()));
    }
    out
}

/// `R(Y)` as a coherent diagram.
pub fn embed(y: &Reflected) -> Result<CoherentDiagram, TruncError> {
    match y {
        Reflected::Set(d) => Ok(embed_setdiagram(d)?),
        Reflected::Reg(d) => {
            let objs = (0..d.sizes.len())
                .map(|a| {
                    let pairs: Vec<(usize, usize)> = (0..d.sizes[a])
                        .flat_map(|x| (0..d.sizes[a]).map(move |y| (x, y)))
                        .filter(|&(x, y)| d.related[a][x][y])
                        .collect();
                    crate::setoid::relational_setoid(format!("R{}", a), d.sizes[a], &pairs)
                        .map_err(|e| TruncError::Coherent(e.into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CoherentDiagram::by_search("R(reg)", &d.shape, objs, d.maps.clone())?)
        }
        Reflected::Pos(d) => {
            let objs = d.carriers.iter().enumerate().map(|(a, &n)| Setoid::full(format!("R{}", a), n)).collect();
            Ok(CoherentDiagram::by_search("R(pos)", &d.shape, objs, d.maps.clone())?)
        }
        Reflected::Prop(d) => {
            let objs =
                d.inhabited.iter().enumerate().map(|(a, &b)| Setoid::full(format!("R{}", a), b as usize)).collect();
            let maps = d.shape.arrows().iter().map(|a| vec![0; d.inhabited[a.src] as usize]).collect();
            Ok(CoherentDiagram::by_search("R(prop)", &d.shape, objs, maps)?)
        }
    }
}

/// The unit `X → R(L X)`.
pub fn unit(theory: Theory, x: &CoherentDiagram) -> Result<(Reflected, DiagMor), TruncError> {
    let l = reflect(theory, x)?;
    let r = embed(&l)?;
    let comps = x
        .objs
        .iter()
        .enumerate()
        .map(|(a, o)| {
            let f0: Vec<usize> = match &l {
                Reflected::Set(_) => x.quotient().1[a].class.clone(),
                Reflected::Reg(_) | Reflected::Pos(_) => (0..o.size0()).collect(),
                Reflected::Prop(_) => vec![0; o.size0()],
            };
            MorRep::by_search(o.clone(), r.objs[a].clone(), f0).map_err(|e| TruncError::Coherent(e.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = DiagMor::by_search(x, &r, comps)?;
    Ok((l, m))
}

/// Whether two reflected diagrams are isomorphic in their theory, given a
/// comparison that is the identity on carriers where carriers are shared.
pub fn counit_invertible(y: &Reflected) -> Result<Verdict<()>, TruncError> {
    let r = embed(y)?;
    let v = match y {
        Reflected::Set(d) => {
            let (ly, qs) = r.quotient();
            // the counit sends the class of y to y
            let bij = qs.iter().zip(&d.sizes).all(|(q, &n)| q.size == n && q.class.iter().enumerate().all(|(p, &c)| c == p));
            let same = ly.maps == d.maps;
            if bij && same {
                Verdict::pass((), "quotient of the discrete relation is the set")
            } else {
                Verdict::fail("L R Y differs from Y")
            }
        }
        Reflected::Reg(d) => match reflect(Theory::Reg, &r)? {
            Reflected::Reg(ly) if ly == *d => Verdict::pass((), "image of an equivalence relation is itself"),
            _ => Verdict::fail("L R Y differs from Y"),
        },
        Reflected::Pos(d) => match reflect(Theory::Pos, &r)? {
            Reflected::Pos(ly) => {
                // maps both ways exist iff inhabitation agrees
                let ok = (0..d.carriers.len()).all(|a| ly.inhabited(a) == d.inhabited(a));
                if ok {
                    Verdict::pass((), "L R Y and Y are mutually comparable")
                } else {
                    Verdict::fail("inhabitation differs")
                }
            }
            _ => unreachable!(),
        },
        Reflected::Prop(d) => match reflect(Theory::Prop, &r)? {
            Reflected::Prop(ly) if ly == *d => Verdict::pass((), "support of a subsingleton is itself"),
            _ => Verdict::fail("support differs"),
        },
    };
    Ok(v)
}

/// Isomorphism of reflected diagrams in the theory, along a given family
/// of point maps `f` (for `Set`, class maps; for `Reg`, point maps).
pub fn iso_in_theory(a: &Reflected, b: &Reflected, f: &[Vec<usize>]) -> bool {
    match (a, b) {
        (Reflected::Set(x), Reflected::Set(y)) => {
            x.sizes == y.sizes
                && f.iter().zip(&y.sizes).all(|(m, &n)| {
                    let mut seen = vec![false; n];
                    m.iter().all(|&c| !std::mem::replace(&mut seen[c], true)) && seen.iter().all(|&s| s)
                })
                && x.shape.arrows().iter().enumerate().all(|(i, ar)| {
                    (0..x.sizes[ar.src]).all(|p| f[ar.dst][x.maps[i][p]] == y.maps[i][f[ar.src][p]])
                })
        }
        (Reflected::Reg(x), Reflected::Reg(y)) => (0..x.sizes.len()).all(|o| {
            let (nx, cx) = x.classes(o);
            let (ny, cy) = y.classes(o);
            let m = &f[o];
            let mut img = vec![usize::MAX; nx];
            for p in 0..x.sizes[o] {
                let c = cy[m[p]];
                if img[cx[p]] != usize::MAX && img[cx[p]] != c {
                    return false;
                }
                img[cx[p]] = c;
            }
            let mut seen = vec![false; ny];
            nx == ny && img.iter().all(|&c| c != usize::MAX && !std::mem::replace(&mut seen[c], true))
        }),
        (Reflected::Pos(x), Reflected::Pos(y)) => (0..x.carriers.len()).all(|o| x.inhabited(o) == y.inhabited(o)),
        (Reflected::Prop(x), Reflected::Prop(y)) => x.inhabited == y.inhabited,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Equivalences over a discrete index

/// The data certifying a verdict.
#[derive(Clone, Debug)]
pub enum EquivWitness {
    /// Per fiber, the induced map on connected components.
    Set { components: Vec<Vec<usize>> },
    /// A section with a zigzag in `A` for every arrow of `B`, a zigzag in
    /// `B` from each `b` to `usb`, and one in `A` from each `a` to `sua`.
    Sex { s: Vec<usize>, arrows: Vec<Zigzag>, back_b: Vec<Zigzag>, back_a: Vec<Zigzag> },
    /// A section for which the same zigzags exist.
    Reg { s: Vec<usize> },
    /// A function on objects over the index.
    Pos { s: Vec<usize> },
    /// Per fiber, inhabitation of `A_i` and `B_i`.
    Prop { inhabited: Vec<(bool, bool)> },
    Contr,
}

/// `u: A → B` over `v: B → I`.
#[derive(Clone, Debug)]
pub struct OverIndex {
    pub u: Functor,
    pub v: Functor,
}

impl OverIndex {
    pub fn new(u: Functor, v: Functor) -> Result<Self, TruncError> {
        if *u.cod != *v.dom {
            return Err(TruncError::Cat(CatError::Mismatch("u and v are not composable".into())));
        }
        if !v.cod.is_discrete() {
            return Err(TruncError::NotDiscrete(v.cod.name().to_string()));
        }
        Ok(OverIndex { u, v })
    }

    pub fn index(&self) -> usize {
        self.v.cod.n_objects()
    }

    pub fn over_a(&self, a: usize) -> usize {
        self.v.obj[self.u.obj[a]]
    }

    pub fn over_b(&self, b: usize) -> usize {
        self.v.obj[b]
    }

    pub fn fibers_a(&self) -> Vec<(Cat, Functor)> {
        fibers(&CatOverSet::new(self.u.dom.clone(), self.index(), (0..self.u.dom.n_objects()).map(|a| self.over_a(a)).collect()).expect("fibers of A"))
    }

    pub fn fibers_b(&self) -> Vec<(Cat, Functor)> {
        fibers(&CatOverSet::new(self.v.dom.clone(), self.index(), self.v.obj.clone()).expect("fibers of B"))
    }
}

/// Evaluates the defining criterion of each theory fiberwise.
pub fn equiv_check(theory: Theory, p: &OverIndex) -> Verdict<EquivWitness> {
    match theory {
        Theory::Set => set_check(p),
        Theory::Sex => sex_check(p),
        Theory::Reg => reg_check(p),
        Theory::Pos => pos_check(p),
        Theory::Prop => prop_check(p),
        Theory::Contr => Verdict::pass(EquivWitness::Contr, "every functor"),
    }
}

fn set_check(p: &OverIndex) -> Verdict<EquivWitness> {
    let (fa, fb) = (p.fibers_a(), p.fibers_b());
    let mut components = Vec::new();
    for i in 0..p.index() {
        let ((ca, ia), (cb, ib)) = (&fa[i], &fb[i]);
        let (na, comp_a) = pi0(ca);
        let (nb, comp_b) = pi0(cb);
        let pos_b: HashMap<usize, usize> = ib.obj.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let mut map = vec![usize::MAX; na];
        for (k, &a) in ia.obj.iter().enumerate() {
            let c = comp_b[pos_b[&p.u.obj[a]]];
            map[comp_a[k]] = c;
        }
        let mut hit = vec![false; nb];
        for &c in &map {
            if hit[c] {
                return Verdict::fail(format!("fiber {}: π0 map not injective ({} → {})", i, na, nb));
            }
            hit[c] = true;
        }
        if na != nb {
            return Verdict::fail(format!("fiber {}: π0 sizes {} and {}", i, na, nb));
        }
        components.push(map);
    }
    Verdict::pass(EquivWitness::Set { components }, "π0 bijection on every fiber")
}

/// First section `s` (lexicographically) satisfying the zigzag clauses,
/// with connectivity decided by components.
fn find_section(p: &OverIndex) -> Option<Vec<usize>> {
    let (a, b) = (&p.u.dom, &p.u.cod);
    let (_, ca) = pi0(a);
    let (_, cb) = pi0(b);
    let nb = b.n_objects();
    let cands: Vec<Vec<usize>> = (0..nb)
        .map(|y| (0..a.n_objects()).filter(|&x| p.over_a(x) == p.over_b(y) && cb[p.u.obj[x]] == cb[y]).collect())
        .collect();
    let mut s = vec![0; nb];
    fn go(
        k: usize,
        s: &mut Vec<usize>,
        cands: &[Vec<usize>],
        p: &OverIndex,
        ca: &[usize],
    ) -> bool {
        let b = &p.u.cod;
        if k == cands.len() {
            return (0..p.u.dom.n_objects()).all(|x| ca[x] == ca[s[p.u.obj[x]]]);
        }
        for &x in &cands[k] {
            s[k] = x;
            let ok = b.arrows().iter().all(|ar| {
                !(ar.src <= k && ar.dst <= k && (ar.src == k || ar.dst == k)) || ca[s[ar.src]] == ca[s[ar.dst]]
            });
            if ok && go(k + 1, s, cands, p, ca) {
                return true;
            }
        }
        false
    }
    go(0, &mut s, &cands, p, &ca).then_some(s)
}

fn sex_check(p: &OverIndex) -> Verdict<EquivWitness> {
    let Some(s) = find_section(p) else {
        return Verdict::fail("no section with the required zigzags");
    };
    let (a, b) = (&p.u.dom, &p.u.cod);
    let arrows: Option<Vec<Zigzag>> = b.arrows().iter().map(|ar| zigzag_search(a, s[ar.src], s[ar.dst])).collect();
    let back_b: Option<Vec<Zigzag>> = (0..b.n_objects()).map(|y| zigzag_search(b, y, p.u.obj[s[y]])).collect();
    let back_a: Option<Vec<Zigzag>> = (0..a.n_objects()).map(|x| zigzag_search(a, x, s[p.u.obj[x]])).collect();
    match (arrows, back_b, back_a) {
        (Some(arrows), Some(back_b), Some(back_a)) => {
            let w = EquivWitness::Sex { s, arrows, back_b, back_a };
            match validate_sex(p, &w) {
                Ok(()) => Verdict::pass(w, "section and zigzag tables"),
                Err(e) => Verdict::fail_with(w, e),
            }
        }
        _ => Verdict::fail("zigzag search failed"),
    }
}

/// Checks the section and every zigzag table.
pub fn validate_sex(p: &OverIndex, w: &EquivWitness) -> Result<(), String> {
    let EquivWitness::Sex { s, arrows, back_b, back_a } = w else {
        return Err("not a sex witness".into());
    };
    let (a, b) = (&p.u.dom, &p.u.cod);
    if s.len() != b.n_objects() || (0..b.n_objects()).any(|y| p.over_a(s[y]) != p.over_b(y)) {
        return Err("section is not over the index".into());
    }
    for (k, ar) in b.arrows().iter().enumerate() {
        let z = &arrows[k];
        if z.start != s[ar.src] || z.end != s[ar.dst] || !z.validate(a) {
            return Err(format!("arrow zigzag {} invalid", k));
        }
    }
    for y in 0..b.n_objects() {
        let z = &back_b[y];
        if z.start != y || z.end != p.u.obj[s[y]] || !z.validate(b) {
            return Err(format!("zigzag b → usb invalid at {}", y));
        }
    }
    for x in 0..a.n_objects() {
        let z = &back_a[x];
        if z.start != x || z.end != s[p.u.obj[x]] || !z.validate(a) {
            return Err(format!("zigzag a → sua invalid at {}", x));
        }
    }
    Ok(())
}

fn reg_check(p: &OverIndex) -> Verdict<EquivWitness> {
    match find_section(p) {
        Some(s) => Verdict::pass(EquivWitness::Reg { s }, "section; zigzags exist"),
        None => Verdict::fail("no section with connecting zigzags"),
    }
}

fn pos_check(p: &OverIndex) -> Verdict<EquivWitness> {
    let a = &p.u.dom;
    let mut s = Vec::new();
    for y in 0..p.u.cod.n_objects() {
        match (0..a.n_objects()).find(|&x| p.over_a(x) == p.over_b(y)) {
            Some(x) => s.push(x),
            None => return Verdict::fail(format!("no object of A over {}", p.over_b(y))),
        }
    }
    Verdict::pass(EquivWitness::Pos { s }, "function ob B → ob A over I")
}

fn prop_check(p: &OverIndex) -> Verdict<EquivWitness> {
    let inhabited: Vec<(bool, bool)> = (0..p.index())
        .map(|i| {
            (
                (0..p.u.dom.n_objects()).any(|x| p.over_a(x) == i),
                (0..p.u.cod.n_objects()).any(|y| p.over_b(y) == i),
            )
        })
        .collect();
    if let Some(i) = inhabited.iter().position(|&(ha, hb)| hb && !ha) {
        return Verdict::fail_with(EquivWitness::Prop { inhabited }, format!("B_{} inhabited, A_{} empty", i, i));
    }
    Verdict::pass(EquivWitness::Prop { inhabited }, "supports agree")
}

impl fmt::Display for EquivWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zz = |zs: &[Zigzag]| {
            zs.iter()
                .map(|z| {
                    let steps: Vec<String> = z
                        .steps
                        .iter()
                        .map(|(a, d)| format!("{}{}", if matches!(d, crate::fincat::Dir::Forward) { "+" } else { "-" }, a))
                        .collect();
                    format!("{}:{}:{}", z.start, z.end, steps.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            EquivWitness::Set { components } => write!(f, "components={:?}", components),
            EquivWitness::Sex { s, arrows, back_b, back_a } => write!(
                f,
                "s={:?} arrows=[{}] b_usb=[{}] a_sua=[{}]",
                s,
                zz(arrows),
                zz(back_b),
                zz(back_a)
            ),
            EquivWitness::Reg { s } => write!(f, "s={:?} zigzags=exist", s),
            EquivWitness::Pos { s } => write!(f, "s={:?}", s),
            EquivWitness::Prop { inhabited } => write!(f, "inhabited={:?}", inhabited),
            EquivWitness::Contr => write!(f, "-"),
        }
    }
}

/// The verdict note followed by its witness payload.
pub fn describe(v: &Verdict<EquivWitness>) -> String {
    match &v.witness {
        Some(w) => format!("{}; {}", v.note, w),
        None => v.note.clone(),
    }
}

// ---------------------------------------------------------------------------
// The semantic oracle

/// Tests `(vu)_!(vu)*X → v_!v*X` for invertibility in the theory, for the
/// terminal coefficients and each given family over `I`.
pub fn semantic_equiv_oracle(theory: Theory, p: &OverIndex, coefficients: &[CoherentDiagram]) -> Verdict<()> {
    let ix = p.v.cod.clone();
    let mut coeffs = vec![CoherentDiagram::constant(&ix, &Setoid::terminal())];
    coeffs.extend(coefficients.iter().filter(|c| *c.shape == *ix).cloned());
    for (k, x) in coeffs.iter().enumerate() {
        let r = match theory {
            Theory::Contr => Ok(true),
            Theory::Sex | Theory::Reg => eex_oracle(theory, p, x),
            Theory::Set => Ok(set_oracle(p, x)),
            Theory::Pos => Ok(pos_oracle(p, x)),
            Theory::Prop => Ok(prop_oracle(p, x)),
        };
        match r {
            Ok(true) => {}
            Ok(false) => return Verdict::fail(format!("comparison not invertible for coefficients {} ({})", k, x.name)),
            Err(e) => return Verdict::fail(e.to_string()),
        }
    }
    Verdict::pass((), format!("invertible on {} coefficient families", coeffs.len()))
}

/// The comparison of colimits over the fibers, computed in `Eex`.
fn eex_comparison(p: &OverIndex, x: &CoherentDiagram) -> Result<Vec<MorRep>, TruncError> {
    Ok(kan_comparison(&p.u, &p.v, &x.restrict_unchecked(&p.v))?.map.comps)
}

fn eex_oracle(theory: Theory, p: &OverIndex, x: &CoherentDiagram) -> Result<bool, TruncError> {
    let maps = eex_comparison(p, x)?;
    Ok(match theory {
        Theory::Sex => maps.iter().all(|m| is_iso(m).holds),
        _ => maps.iter().all(|m| {
            // images of (s, t) on both sides, compared through m
            let (rd, rc) = (relation_matrix(&m.dom), relation_matrix(&m.cod));
            let n = m.dom.size0();
            let injective = (0..n).all(|a| (0..n).all(|b| rd[a][b] == rc[m.f0[a]][m.f0[b]]));
            let surjective = (0..m.cod.size0()).all(|y| (0..n).any(|a| rc[m.f0[a]][y]));
            injective && surjective
        }),
    })
}

fn set_oracle(p: &OverIndex, x: &CoherentDiagram) -> bool {
    let (qx, _) = x.quotient();
    let (fa, fb) = (p.fibers_a(), p.fibers_b());
    (0..p.index()).all(|i| {
        let n = qx.sizes[i];
        let ((ca, ia), (cb, ib)) = (&fa[i], &fb[i]);
        let colim_a = set_colimit(&SetDiagram::constant(ca, n));
        let colim_b = set_colimit(&SetDiagram::constant(cb, n));
        let pos_b: HashMap<usize, usize> = ib.obj.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let mut img = vec![usize::MAX; colim_a.size];
        for (k, &a) in ia.obj.iter().enumerate() {
            for e in 0..n {
                let c = colim_a.class[k * n + e];
                let d = colim_b.class[pos_b[&p.u.obj[a]] * n + e];
                if img[c] != usize::MAX && img[c] != d {
                    return false;
                }
                img[c] = d;
            }
        }
        let mut seen = vec![false; colim_b.size];
        img.iter().all(|&d| d != usize::MAX && !std::mem::replace(&mut seen[d], true)) && seen.iter().all(|&s| s)
    })
}

fn pos_oracle(p: &OverIndex, x: &CoherentDiagram) -> bool {
    let Ok(Reflected::Pos(px)) = reflect(Theory::Pos, x) else { return false };
    (0..p.index()).all(|i| {
        let na = (0..p.u.dom.n_objects()).filter(|&a| p.over_a(a) == i).count() * px.carriers[i];
        let nb = (0..p.u.cod.n_objects()).filter(|&b| p.over_b(b) == i).count() * px.carriers[i];
        // a map forward always exists; one back exists iff the target is
        // empty or the source is inhabited
        nb == 0 || na > 0
    })
}

fn prop_oracle(p: &OverIndex, x: &CoherentDiagram) -> bool {
    (0..p.index()).all(|i| {
        let xi = x.objs[i].size0() > 0;
        let a = (0..p.u.dom.n_objects()).any(|o| p.over_a(o) == i) && xi;
        let b = (0..p.u.cod.n_objects()).any(|o| p.over_b(o) == i) && xi;
        a == b
    })
}

// ---------------------------------------------------------------------------
// Stability constructions

/// The pullback of `u` along a function `f: J → I` of index sets.
pub fn pullback_along(p: &OverIndex, f: &[usize]) -> Result<OverIndex, TruncError> {
    let (fa, fb) = (p.fibers_a(), p.fibers_b());
    let cats_a: Vec<Cat> = f.iter().map(|&i| fa[i].0.clone()).collect();
    let cats_b: Vec<Cat> = f.iter().map(|&i| fb[i].0.clone()).collect();
    let (ta, _, offs_a) = disjoint_union(&cats_a);
    let (tb, proj_b, offs_b) = disjoint_union(&cats_b);
    let mut obj = vec![0; ta.n_objects()];
    let mut arr = vec![0; ta.n_arrows()];
    for (j, &i) in f.iter().enumerate() {
        let (ia, ib) = (&fa[i].1, &fb[i].1);
        let pos_b: HashMap<usize, usize> = ib.obj.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let pos_arr_b: HashMap<usize, usize> = ib.arr.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        for k in 0..cats_a[j].n_objects() {
            obj[offs_a[j].0 + k] = offs_b[j].0 + pos_b[&p.u.obj[ia.obj[k]]];
        }
        for k in 0..cats_a[j].n_arrows() {
            arr[offs_a[j].1 + k] = offs_b[j].1 + pos_arr_b[&p.u.arr[ia.arr[k]]];
        }
    }
    let u = Functor::new(ta, tb, obj, arr)?;
    OverIndex::new(u, proj_b)
}

/// The sum of two problems over the sum of their indices.
pub fn sum_problems(p: &OverIndex, q: &OverIndex) -> Result<OverIndex, TruncError> {
    let (a, ja, _) = disjoint_union(&[p.u.dom.clone(), q.u.dom.clone()]);
    let (b, _, _) = disjoint_union(&[p.u.cod.clone(), q.u.cod.clone()]);
    let _ = ja;
    let (na, nb) = (p.u.dom.n_objects(), p.u.cod.n_objects());
    let (ka, kb) = (p.u.dom.n_arrows(), p.u.cod.n_arrows());
    let obj = (0..a.n_objects()).map(|o| if o < na { p.u.obj[o] } else { nb + q.u.obj[o - na] }).collect();
    let arr = (0..a.n_arrows()).map(|k| if k < ka { p.u.arr[k] } else { kb + q.u.arr[k - ka] }).collect();
    let u = Functor::new(a, b.clone(), obj, arr)?;
    let ni = p.index();
    let ix = discrete(ni + q.index());
    let vobj: Vec<usize> = (0..b.n_objects()).map(|o| if o < nb { p.v.obj[o] } else { ni + q.v.obj[o - nb] }).collect();
    let varr = b.arrows().iter().map(|x| ix.id(vobj[x.src])).collect();
    let v = Functor::new(b, ix, vobj, varr)?;
    OverIndex::new(u, v)
}

/// The inclusion of fiber `i` of `B` together with `v` restricted to it.
pub fn fiber_problem(p: &OverIndex, i: usize) -> Result<OverIndex, TruncError> {
    pullback_along(p, &[i])
}

/// The full subcategory of `B` on the image of `u`, for diagnostics.
pub fn image_of(u: &Functor) -> (Cat, Functor) {
    let mut objs: Vec<usize> = u.obj.clone();
    objs.sort();
    objs.dedup();
    full_subcategory(&u.cod, &objs, "im")
}

/// Colimit quotient sizes of a constant terminal diagram over each fiber.
pub fn fiber_components(p: &OverIndex) -> Vec<(usize, usize)> {
    let (fa, fb) = (p.fibers_a(), p.fibers_b());
    (0..p.index())
        .map(|i| {
            let ca = colimit_over(&CoherentDiagram::constant(&fa[i].0, &Setoid::terminal())).setoid.quotient().size;
            let cb = colimit_over(&CoherentDiagram::constant(&fb[i].0, &Setoid::terminal())).setoid.quotient().size;
            (ca, cb)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Corpus runs

/// Every `(u, v)` pair of the corpus: `v` the terminal functor, the
/// identity of a discrete codomain, or a discrete-target corpus functor.
pub fn equiv_instances(c: &Corpus) -> Vec<(String, OverIndex)> {
    let mut out = Vec::new();
    for (un, u) in &c.functors {
        let mut vs: Vec<(String, Functor)> = vec![("ONE".into(), Functor::to_terminal(&u.cod))];
        if u.cod.is_discrete() && u.cod.n_objects() != 1 {
            vs.push(("id".into(), Functor::identity(&u.cod)));
        }
        for (vn, v) in c.discrete_target_functors() {
            if *v.dom == *u.cod && v.cod.n_objects() != 1 && !v.same_as(&Functor::identity(&u.cod)) {
                vs.push((vn.to_string(), v.clone()));
            }
        }
        for (vn, v) in vs {
            if let Ok(p) = OverIndex::new(u.clone(), v) {
                out.push((format!("{}/{}", un, vn), p));
            }
        }
    }
    out
}

fn coefficients(c: &Corpus, p: &OverIndex) -> Vec<CoherentDiagram> {
    c.diagrams_over(&p.v.cod).into_iter().map(|(_, d)| d.clone()).collect()
}

/// One record per instance: the checker verdict with its payload.
pub fn check_equiv_records(c: &Corpus, theory: Theory, instances: &[(String, OverIndex)]) -> Vec<Record> {
    let mut out: Vec<Record> = instances
        .iter()
        .map(|(n, p)| {
            let v = equiv_check(theory, p);
            Record::from_bool(format!("equiv-{}", theory), n.clone(), v.holds, describe(&v))
        })
        .collect();
    let _ = c;
    out.sort();
    out
}

/// Checker and oracle verdicts agree on an instance.
pub fn oracle_agreement(c: &Corpus, theory: Theory, p: &OverIndex) -> (bool, String) {
    let a = equiv_check(theory, p);
    let b = semantic_equiv_oracle(theory, p, &coefficients(c, p));
    (a.holds == b.holds, format!("checker {} / oracle {}", a, b))
}

/// The verdicts of all theories on one instance respect the ordering
/// sex ⇒ reg ⇒ set, pos ⇒ prop ⇒ contr.
pub fn locality_chain(p: &OverIndex) -> (bool, String) {
    let v: HashMap<Theory, bool> = Theory::ALL.iter().map(|&t| (t, equiv_check(t, p).holds)).collect();
    let imp = |a: Theory, b: Theory| !v[&a] || v[&b];
    let ok = imp(Theory::Sex, Theory::Reg)
        && imp(Theory::Reg, Theory::Set)
        && imp(Theory::Reg, Theory::Pos)
        && imp(Theory::Set, Theory::Prop)
        && imp(Theory::Pos, Theory::Prop)
        && v[&Theory::Contr];
    let tags: Vec<String> = Theory::ALL.iter().map(|t| format!("{}={}", t, v[t] as u8)).collect();
    (ok, tags.join(" "))
}

/// All functions `J → I` with `|J| ≤ 2`.
fn index_maps(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    out.extend((0..n).map(|i| vec![i]));
    out.extend((0..n).flat_map(|i| (0..n).map(move |j| vec![i, j])));
    out
}

pub fn pullback_stable(theory: Theory, p: &OverIndex) -> Result<(bool, String), TruncError> {
    if !equiv_check(theory, p).holds {
        return Ok((true, "verdict false; nothing to restrict".into()));
    }
    for f in index_maps(p.index()) {
        if !equiv_check(theory, &pullback_along(p, &f)?).holds {
            return Ok((false, format!("restriction along {:?} fails", f)));
        }
    }
    Ok((true, format!("all {} restrictions hold", index_maps(p.index()).len())))
}

pub fn coproduct_stable(theory: Theory, p: &OverIndex, q: &OverIndex) -> Result<(bool, String), TruncError> {
    let (a, b) = (equiv_check(theory, p).holds, equiv_check(theory, q).holds);
    let s = equiv_check(theory, &sum_problems(p, q)?).holds;
    Ok((s == (a && b), format!("{} + {} → {}", a, b, s)))
}

/// For `u: A → B`, `w: B → C` and `v` over `C`, two of `u`, `w`, `wu`
/// holding forces the third.
pub fn two_of_three(theory: Theory, u: &Functor, w: &Functor, v: &Functor) -> Result<(bool, String), TruncError> {
    let pu = equiv_check(theory, &OverIndex::new(u.clone(), w.then(v))?).holds;
    let pw = equiv_check(theory, &OverIndex::new(w.clone(), v.clone())?).holds;
    let pwu = equiv_check(theory, &OverIndex::new(u.then(w), v.clone())?).holds;
    let n = pu as u8 + pw as u8 + pwu as u8;
    Ok((n != 2, format!("u={} w={} wu={}", pu, pw, pwu)))
}

/// The truncation suite on a corpus: checker payloads, oracle agreement,
/// locality, stability and counits.
pub fn truncation_records(c: &Corpus) -> Vec<Record> {
    let inst = equiv_instances(c);
    let mut out = Vec::new();
    for t in Theory::ALL {
        for (n, p) in &inst {
            let (ok, d) = oracle_agreement(c, t, p);
            out.push(Record::from_bool(format!("oracle-{}", t), n.clone(), ok, d));
            match pullback_stable(t, p) {
                Ok((ok, d)) => out.push(Record::from_bool(format!("pullback-{}", t), n.clone(), ok, d)),
                Err(e) => out.push(Record::from_bool(format!("pullback-{}", t), n.clone(), false, e.to_string())),
            }
        }
        for (i, (n, p)) in inst.iter().enumerate() {
            for (m, q) in inst.iter().skip(i).take(3) {
                match coproduct_stable(t, p, q) {
                    Ok((ok, d)) => out.push(Record::from_bool(format!("coproduct-{}", t), format!("{}+{}", n, m), ok, d)),
                    Err(e) => out.push(Record::from_bool(format!("coproduct-{}", t), format!("{}+{}", n, m), false, e.to_string())),
                }
            }
        }
        for (un, u) in &c.functors {
            for (wn, w) in &c.functors {
                if *u.cod != *w.dom {
                    continue;
                }
                let v = Functor::to_terminal(&w.cod);
                let inst = format!("{};{}", un, wn);
                match two_of_three(t, u, w, &v) {
                    Ok((ok, d)) => out.push(Record::from_bool(format!("2of3-{}", t), inst, ok, d)),
                    Err(e) => out.push(Record::from_bool(format!("2of3-{}", t), inst, false, e.to_string())),
                }
            }
        }
    }
    for (n, p) in &inst {
        let (ok, d) = locality_chain(p);
        out.push(Record::from_bool("locality", n.clone(), ok, d));
    }
    out.extend(counit_records(c));
    out.sort();
    out
}

/// `L R Y ≅ Y` for the reflection of every corpus diagram, and the unit
/// validates.
pub fn counit_records(c: &Corpus) -> Vec<Record> {
    let mut out = Vec::new();
    for t in Theory::REFLECTIVE {
        for (n, x) in &c.diagrams {
            let r = unit(t, x).and_then(|(l, m)| {
                m.validate()?;
                counit_invertible(&l)
            });
            out.push(match r {
                Ok(v) => Record::new(format!("counit-{}", t), n.clone(), &v),
                Err(e) => Record::from_bool(format!("counit-{}", t), n.clone(), false, e.to_string()),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{chain3, rel3};
    use crate::fincat::{arrow_cat, one, pair};

    fn over_one(a: &Cat) -> OverIndex {
        OverIndex::new(Functor::to_terminal(a), Functor::identity(&one())).unwrap()
    }

    #[test]
    fn paper_anchors() {
        let p = over_one(&pair());
        let v = equiv_check(Theory::Sex, &p);
        assert!(v.holds);
        if let Some(EquivWitness::Sex { s, .. }) = &v.witness {
            assert_eq!(s, &vec![0]);
        }
        let d = over_one(&discrete(2));
        assert!(equiv_check(Theory::Pos, &d).holds);
        assert!(equiv_check(Theory::Prop, &d).holds);
        assert!(!equiv_check(Theory::Set, &d).holds);
        assert!(!equiv_check(Theory::Sex, &d).holds);
        assert!(equiv_check(Theory::Contr, &d).holds);
    }

    #[test]
    fn oracle_examples() {
        let p = over_one(&pair());
        assert!(semantic_equiv_oracle(Theory::Set, &p, &[]).holds);
        assert!(semantic_equiv_oracle(Theory::Sex, &p, &[]).holds);
        let d = over_one(&discrete(2));
        assert!(!semantic_equiv_oracle(Theory::Set, &d, &[]).holds);
        assert!(!semantic_equiv_oracle(Theory::Sex, &d, &[]).holds);
        assert!(semantic_equiv_oracle(Theory::Pos, &d, &[]).holds);
        assert!(semantic_equiv_oracle(Theory::Prop, &d, &[]).holds);
    }

    #[test]
    fn reflect_examples() {
        let x = CoherentDiagram::point(&chain3());
        match reflect(Theory::Set, &x).unwrap() {
            Reflected::Set(d) => assert_eq!(d.sizes, vec![1]),
            _ => unreachable!(),
        }
        match reflect(Theory::Reg, &x).unwrap() {
            Reflected::Reg(d) => {
                assert!(d.is_equivalence());
                assert_eq!(d.classes(0).0, 1);
            }
            _ => unreachable!(),
        }
        let r = CoherentDiagram::point(&rel3());
        match reflect(Theory::Pos, &r).unwrap() {
            // REL3 has 5 related pairs
            Reflected::Pos(d) => assert_eq!(d.carriers, vec![3 + 5]),
            _ => unreachable!(),
        }
        match reflect(Theory::Prop, &CoherentDiagram::point(&Setoid::empty())).unwrap() {
            Reflected::Prop(d) => assert_eq!(d.inhabited, vec![false]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn units_validate_and_counits_invert() {
        let x = CoherentDiagram::constant(&arrow_cat(), &chain3());
        for t in Theory::REFLECTIVE {
            let (l, m) = unit(t, &x).unwrap();
            m.validate().unwrap();
            assert!(counit_invertible(&l).unwrap().holds, "{}", t);
        }
    }

    #[test]
    fn stability_constructions() {
        let p = over_one(&pair());
        let q = over_one(&discrete(2));
        let s = sum_problems(&p, &q).unwrap();
        assert_eq!(s.index(), 2);
        assert!(equiv_check(Theory::Pos, &s).holds);
        assert!(!equiv_check(Theory::Set, &s).holds);
        let pb = pullback_along(&p, &[0, 0]).unwrap();
        assert!(equiv_check(Theory::Sex, &pb).holds);
        assert_eq!(fiber_components(&p), vec![(1, 1)]);
    }

    #[test]
    fn corpus_suite_passes() {
        let c = Corpus::default_corpus();
        let recs = truncation_records(&c);
        let bad: Vec<_> = recs.iter().filter(|r| !r.holds).map(|r| r.tsv()).collect();
        assert!(bad.is_empty(), "{:#?}", bad);
        assert!(recs.len() > 100);
    }
}
