//! Limits, colimits and pointwise Kan extensions of coherent diagrams.
//!
//! Colimit witnesses are zigzag words over cocone generators `(α, x, ξ)`;
//! limit points carry a chosen witness `ξ_α` for every arrow. Where a target
//! setoid has infinitely many witnesses only the canonical one (the one
//! `related` finds) is used, which changes `L0` only up to isomorphism.

use std::collections::HashMap;
use std::sync::Arc;

use crate::coherent::{
    compose_diag_unchecked, equal_diag, is_iso_diag, product_diag, same_rep, whisker, CoherentDiagram, CoherentError,
    DiagMor, SetDiagram,
};
use crate::fincat::{comma, coproduct, product, arrow_cat, Cat, Comma, Functor, NatTrans};
use crate::setoid::{
    eta, free_extend_unchecked, is_iso, Gen, GenLabel, GeneratorSet, MorRep, Setoid, Step, Wit, Word,
};
use crate::corpus::Corpus;
use crate::verdict::{Record, Verdict};

// ---------------------------------------------------------------------------
// Limits

pub struct Limit {
    pub diagram: CoherentDiagram,
    pub setoid: Setoid,
    /// `p*L → Y`.
    pub counit: DiagMor,
}

fn choices(y: &Setoid, a: usize, b: usize) -> Vec<Wit> {
    y.witness_choices(a, b)
}

fn normalize(y: &Setoid, w: Wit) -> Wit {
    if y.x1_finite() {
        w
    } else {
        y.related(y.s(&w), y.t(&w)).expect("a witness exists")
    }
}

/// `L0` is the set of families `(y_a, ξ_α)` with `ξ_α: Y_α(y_a) ∼ y_a'`;
/// `L1` the families of component witnesses `y_a ∼ y'_a`.
pub fn limit_over(y: &CoherentDiagram) -> Limit {
    let s = &y.shape;
    let n = s.n_objects();
    let mut coords: Vec<Vec<usize>> = Vec::new();
    let mut extra: Vec<Vec<Wit>> = Vec::new();
    let mut cur = vec![0usize; n];
    fn assign(
        y: &CoherentDiagram,
        k: usize,
        cur: &mut Vec<usize>,
        out_c: &mut Vec<Vec<usize>>,
        out_e: &mut Vec<Vec<Wit>>,
    ) {
        let s = &y.shape;
        if k == s.n_objects() {
            let mut fams: Vec<Vec<Wit>> = vec![vec![]];
            for (i, a) in s.arrows().iter().enumerate() {
                let opts = choices(&y.objs[a.dst], y.act(i, cur[a.src]), cur[a.dst]);
                let mut next = Vec::with_capacity(fams.len() * opts.len());
                for f in &fams {
                    for o in &opts {
                        let mut f2 = f.clone();
                        f2.push(o.clone());
                        next.push(f2);
                    }
                }
                fams = next;
                if fams.is_empty() {
                    return;
                }
            }
            for f in fams {
                out_c.push(cur.clone());
                out_e.push(f);
            }
            return;
        }
        'points: for p in 0..y.objs[k].size0() {
            cur[k] = p;
            for (i, a) in s.arrows().iter().enumerate() {
                if a.src <= k
                    && a.dst <= k
                    && (a.src == k || a.dst == k)
                    && y.objs[a.dst].related(y.act(i, cur[a.src]), cur[a.dst]).is_none()
                {
                    continue 'points;
                }
            }
            assign(y, k + 1, cur, out_c, out_e);
        }
    }
    assign(y, 0, &mut cur, &mut coords, &mut extra);
    let setoid = Setoid::joint(format!("lim {}", y.name), y.objs.clone(), coords, extra);
    let counit = limit_counit(y, &setoid);
    Limit { diagram: y.clone(), setoid, counit }
}

fn joint_proj(l: &Setoid, k: usize, cod: &Setoid) -> MorRep {
    let j = l.as_joint().unwrap();
    MorRep::new_unchecked(
        l.clone(),
        cod.clone(),
        j.coords.iter().map(|c| c[k]).collect(),
        Arc::new(move |w: &Wit| match w {
            Wit::Joint { parts, .. } => parts[k].clone(),
            other => panic!("not a limit witness: {}", other),
        }),
    )
}

fn limit_counit(y: &CoherentDiagram, l: &Setoid) -> DiagMor {
    let s = &y.shape;
    let j = l.as_joint().unwrap();
    let comps = (0..s.n_objects()).map(|a| joint_proj(l, a, &y.objs[a])).collect();
    let nat = (0..s.n_arrows()).map(|i| j.extra.iter().map(|e| e[i].clone()).collect()).collect();
    DiagMor { dom: CoherentDiagram::constant(s, l), cod: y.clone(), comps, nat }
}

impl Limit {
    pub fn point(&self, ys: &[usize], xis: &[Wit]) -> Option<usize> {
        self.setoid.joint_point(ys, xis)
    }

    /// The comparison `W → L` for a cone `p*W → Y`.
    pub fn factor(&self, w: &Setoid, f: &DiagMor) -> Result<MorRep, CoherentError> {
        let y = &self.diagram;
        let s = &y.shape;
        let w = w.clone();
        let mut f0 = Vec::with_capacity(w.size0());
        for x in 0..w.size0() {
            let ys: Vec<usize> = f.comps.iter().map(|c| c.f0[x]).collect();
            let xis: Vec<Wit> =
                s.arrows().iter().enumerate().map(|(i, a)| normalize(&y.objs[a.dst], f.nat[i][x].clone())).collect();
            f0.push(self.point(&ys, &xis).ok_or_else(|| CoherentError::Mismatch(format!("cone point {} has no limit point", x)))?);
        }
        Ok(self.factor_points(w, f0, f.comps.clone()))
    }

    fn factor_points(&self, w: Setoid, f0: Vec<usize>, comps: Vec<MorRep>) -> MorRep {
        let f0c = f0.clone();
        let wc = w.clone();
        MorRep::new_unchecked(
            w,
            self.setoid.clone(),
            f0,
            Arc::new(move |x: &Wit| Wit::Joint {
                src: f0c[wc.s(x)],
                dst: f0c[wc.t(x)],
                parts: comps.iter().map(|c| c.apply(x)).collect(),
            }),
        )
    }

    /// The factorization of a cone from the empty shape's point.
    pub fn terminal_point(&self) -> Option<usize> {
        (self.setoid.size0() > 0).then_some(0)
    }
}

// ---------------------------------------------------------------------------
// Colimits

/// Generators `(α, x, ξ)` with `x ∈ X_a`, `ξ ∈ X_{a',1}` starting at `X_α x`.
pub struct CoconeGens {
    diagram: Arc<CoherentDiagram>,
    offsets: Vec<usize>,
    owner: Vec<(usize, usize)>,
}

impl CoconeGens {
    pub fn new(x: &CoherentDiagram) -> Self {
        let mut offsets = Vec::new();
        let mut owner = Vec::new();
        for (a, o) in x.objs.iter().enumerate() {
            offsets.push(owner.len());
            owner.extend((0..o.size0()).map(|p| (a, p)));
        }
        offsets.push(owner.len());
        CoconeGens { diagram: Arc::new(x.clone()), offsets, owner }
    }

    pub fn gen(&self, arrow: usize, x: usize, wit: Wit) -> Gen {
        let d = &self.diagram;
        let (a, b) = (d.shape.src(arrow), d.shape.dst(arrow));
        Gen {
            src: self.offsets[a] + x,
            dst: self.offsets[b] + d.objs[b].t(&wit),
            label: GenLabel::Cocone { arrow, point: x, wit: Box::new(wit) },
        }
    }
}

impl GeneratorSet for CoconeGens {
    fn n_points(&self) -> usize {
        self.owner.len()
    }

    fn contains(&self, g: &Gen) -> bool {
        let d = &self.diagram;
        match &g.label {
            GenLabel::Cocone { arrow, point, wit } => {
                if *arrow >= d.shape.n_arrows() {
                    return false;
                }
                let (a, b) = (d.shape.src(*arrow), d.shape.dst(*arrow));
                *point < d.objs[a].size0()
                    && d.objs[b].is_witness(wit)
                    && d.objs[b].s(wit) == d.act(*arrow, *point)
                    && g.src == self.offsets[a] + point
                    && g.dst == self.offsets[b] + d.objs[b].t(wit)
            }
            _ => false,
        }
    }

    fn canonical_at(&self, p: usize) -> Vec<Gen> {
        let d = &self.diagram;
        let (a, x) = self.owner[p];
        let mut out = Vec::new();
        for &al in d.shape.outgoing(a) {
            let b = d.shape.dst(al);
            let y0 = d.act(al, x);
            for y in 0..d.objs[b].size0() {
                for w in choices(&d.objs[b], y0, y) {
                    out.push(self.gen(al, x, w));
                }
            }
        }
        for &al in d.shape.incoming(a) {
            let c = d.shape.src(al);
            for z in 0..d.objs[c].size0() {
                for w in choices(&d.objs[a], d.act(al, z), x) {
                    out.push(self.gen(al, z, w));
                }
            }
        }
        out
    }

    fn all(&self) -> Option<Vec<Gen>> {
        let d = &self.diagram;
        if !d.objs.iter().all(|o| o.x1_finite()) {
            return None;
        }
        let mut out = Vec::new();
        for (i, ar) in d.shape.arrows().iter().enumerate() {
            for x in 0..d.objs[ar.src].size0() {
                let y0 = d.act(i, x);
                for y in 0..d.objs[ar.dst].size0() {
                    for w in d.objs[ar.dst].witnesses_between(y0, y, 0) {
                        out.push(self.gen(i, x, w));
                    }
                }
            }
        }
        Some(out)
    }

    fn describe(&self) -> String {
        format!("cocone generators over {}", self.diagram.shape.name())
    }
}

pub struct Colimit {
    pub diagram: CoherentDiagram,
    pub setoid: Setoid,
    pub gens: Arc<CoconeGens>,
    /// `X → p*C`.
    pub unit: DiagMor,
}

/// `C0 = Σ_a X_{a,0}`, `C1` free on cocone generators.
pub fn colimit_over(x: &CoherentDiagram) -> Colimit {
    let gens = Arc::new(CoconeGens::new(x));
    let setoid = Setoid::free_on(format!("colim {}", x.name), gens.clone());
    let s = &x.shape;
    let comps = (0..s.n_objects())
        .map(|a| {
            let g = gens.clone();
            let xa = x.objs[a].clone();
            let unit = x.unit[a].clone();
            let ida = s.id(a);
            let off = gens.offsets[a];
            MorRep::new_unchecked(
                xa.clone(),
                setoid.clone(),
                (0..xa.size0()).map(|p| off + p).collect(),
                Arc::new(move |w: &Wit| {
                    let p = xa.s(w);
                    eta(g.gen(ida, p, xa.m(&xa.v(&unit[p]), w)))
                }),
            )
        })
        .collect();
    let nat = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| (0..x.objs[a.src].size0()).map(|p| eta(gens.gen(i, p, x.objs[a.dst].r(x.act(i, p))))).collect())
        .collect();
    let unit = DiagMor { dom: x.clone(), cod: CoherentDiagram::constant(s, &setoid), comps, nat };
    Colimit { diagram: x.clone(), setoid, gens, unit }
}

impl Colimit {
    pub fn point(&self, a: usize, x: usize) -> usize {
        self.gens.offsets[a] + x
    }

    pub fn locate(&self, p: usize) -> (usize, usize) {
        self.gens.owner[p]
    }

    /// The comparison `C → W` for a cocone `X → p*W`:
    /// `(α, x, ξ) ↦ m(f_α(x), f_{a',1}(ξ))`.
    pub fn factor(&self, w: &Setoid, f: &DiagMor) -> MorRep {
        let w = w.clone();
        let f0: Vec<usize> = self.gens.owner.iter().map(|&(a, x)| f.comps[a].f0[x]).collect();
        let nat = f.nat.clone();
        let comps = f.comps.clone();
        let shape = self.diagram.shape.clone();
        let wc = w.clone();
        free_extend_unchecked(&self.setoid, &w, f0, move |g: &Gen| match &g.label {
            GenLabel::Cocone { arrow, point, wit } => wc.m(&nat[*arrow][*point], &comps[shape.dst(*arrow)].apply(wit)),
            _ => unreachable!("colimit generators are cocone generators"),
        })
    }
}

// ---------------------------------------------------------------------------
// Pointwise Kan extensions

fn comma_arrow_index(c: &Comma, left: bool) -> HashMap<(usize, usize), usize> {
    c.arrows
        .iter()
        .enumerate()
        .map(|(k, &(al, be))| ((c.cat.src(k), if left { al } else { be }), k))
        .collect()
}

/// `u_!X`, computed as colimits over the commas `(u/b)`.
pub struct LeftKan {
    pub u: Functor,
    pub src: CoherentDiagram,
    pub value: CoherentDiagram,
    pub commas: Vec<Comma>,
    pub colims: Vec<Colimit>,
    /// `X → u*u_!X`.
    pub unit: DiagMor,
}

pub fn left_kan(u: &Functor, x: &CoherentDiagram) -> Result<LeftKan, CoherentError> {
    if *u.dom != *x.shape {
        return Err(CoherentError::Shape(format!("{} is not over {}", x.name, u.dom.name())));
    }
    let b = &u.cod;
    let mut commas = Vec::new();
    let mut colims = Vec::new();
    for o in 0..b.n_objects() {
        let c = comma(u, &Functor::point(b, o))?;
        let restricted = x.restrict_unchecked(&c.p).named(format!("{}|({}/{})", x.name, u.dom.name(), b.object_label(o)));
        colims.push(colimit_over(&restricted));
        commas.push(c);
    }
    let arrow_idx: Vec<_> = commas.iter().map(|c| comma_arrow_index(c, true)).collect();
    let push: Vec<Vec<usize>> = b
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            commas[ar.src]
                .objects
                .iter()
                .map(|&(a, _, g)| commas[ar.dst].find_object(a, 0, b.comp(be, g)).expect("comma object"))
                .collect()
        })
        .collect();
    let objs: Vec<Setoid> = colims.iter().map(|c| c.setoid.clone()).collect();
    let arrs = b
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            let (c1, c2) = (&colims[ar.src], &colims[ar.dst]);
            let f0: Vec<usize> = (0..c1.setoid.size0())
                .map(|p| {
                    let (o, x) = c1.locate(p);
                    c2.point(push[be][o], x)
                })
                .collect();
            let pushv = push[be].clone();
            let idx2 = arrow_idx[ar.dst].clone();
            let (cat1, g2) = (commas[ar.src].cat.clone(), c2.gens.clone());
            let arrs1: Vec<(usize, usize)> = commas[ar.src].arrows.clone();
            let map_gen = move |g: &Gen| match &g.label {
                GenLabel::Cocone { arrow, point, wit } => {
                    let k2 = idx2[&(pushv[cat1.src(*arrow)], arrs1[*arrow].0)];
                    g2.gen(k2, *point, (**wit).clone())
                }
                _ => unreachable!(),
            };
            let f0c = f0.clone();
            MorRep::new_unchecked(
                c1.setoid.clone(),
                c2.setoid.clone(),
                f0,
                Arc::new(move |w: &Wit| match w {
                    Wit::Word(word) => Wit::Word(Word {
                        start: f0c[word.start],
                        steps: word.steps.iter().map(|s| Step { gen: map_gen(&s.gen), forward: s.forward }).collect(),
                    }),
                    other => panic!("not a colimit witness: {}", other),
                }),
            )
        })
        .collect();
    let value = strict_diagram(format!("{}_!{}", u.dom.name(), x.name), b, objs, arrs);
    let unit = left_unit(u, x, &value, &commas, &colims, &arrow_idx);
    Ok(LeftKan { u: u.clone(), src: x.clone(), value, commas, colims, unit })
}

/// A diagram whose arrow representatives compose strictly.
fn strict_diagram(name: String, b: &Cat, objs: Vec<Setoid>, arrs: Vec<MorRep>) -> CoherentDiagram {
    let unit = objs.iter().map(|o| (0..o.size0()).map(|p| o.r(p)).collect()).collect();
    let comp = b
        .composable_pairs()
        .into_iter()
        .map(|(f, g)| {
            let c = &objs[b.dst(g)];
            let tab = arrs[f].f0.iter().map(|&y| c.r(arrs[g].f0[y])).collect();
            ((f, g), tab)
        })
        .collect();
    CoherentDiagram { name, shape: b.clone(), objs, arrs, unit, comp }
}

fn left_unit(
    u: &Functor,
    x: &CoherentDiagram,
    value: &CoherentDiagram,
    commas: &[Comma],
    colims: &[Colimit],
    arrow_idx: &[HashMap<(usize, usize), usize>],
) -> DiagMor {
    let a = &u.dom;
    let b = &u.cod;
    let home: Vec<usize> =
        (0..a.n_objects()).map(|o| commas[u.obj[o]].find_object(o, 0, b.id(u.obj[o])).unwrap()).collect();
    let comps = (0..a.n_objects())
        .map(|o| {
            let c = &colims[u.obj[o]].unit.comps[home[o]];
            MorRep::new_unchecked(x.objs[o].clone(), value.objs[u.obj[o]].clone(), c.f0.clone(), c.f1.clone())
        })
        .collect();
    let nat = a
        .arrows()
        .iter()
        .enumerate()
        .map(|(al, ar)| {
            let b2 = u.obj[ar.dst];
            let src_obj = commas[b2].find_object(ar.src, 0, u.arr[al]).unwrap();
            let k = arrow_idx[b2][&(src_obj, al)];
            colims[b2].unit.nat[k].clone()
        })
        .collect();
    DiagMor { dom: x.clone(), cod: value.restrict_unchecked(u), comps, nat }
}

impl LeftKan {
    /// `u_!u*Y → Y`, where `self` is the left Kan extension of `u*Y`.
    pub fn counit(&self, y: &CoherentDiagram) -> Result<DiagMor, CoherentError> {
        let b = &self.u.cod;
        if !self.src.same_data(&y.restrict_unchecked(&self.u)) {
            return Err(CoherentError::Mismatch("counit needs the extension of u*Y".into()));
        }
        let mut comps = Vec::with_capacity(b.n_objects());
        for o in 0..b.n_objects() {
            let c = &self.commas[o];
            let z = &self.colims[o].diagram;
            let w = &y.objs[o];
            let cc: Vec<MorRep> = c.objects.iter().map(|&(_, _, g)| y.arrs[g].clone()).collect();
            let nat = c
                .arrows
                .iter()
                .enumerate()
                .map(|(k, &(al, _))| {
                    let (s1, t1) = (c.cat.src(k), c.cat.dst(k));
                    let g2 = c.objects[t1].2;
                    let _ = s1;
                    (0..z.objs[c.cat.src(k)].size0()).map(|p| w.v(y.comp_at(self.u.arr[al], g2, p))).collect()
                })
                .collect();
            let cocone = DiagMor { dom: z.clone(), cod: CoherentDiagram::constant(&c.cat, w), comps: cc, nat };
            comps.push(self.colims[o].factor(w, &cocone));
        }
        let nat = b
            .arrows()
            .iter()
            .enumerate()
            .map(|(be, ar)| {
                (0..self.value.objs[ar.src].size0())
                    .map(|p| {
                        let (ob, x) = self.colims[ar.src].locate(p);
                        let g = self.commas[ar.src].objects[ob].2;
                        y.comp_at(g, be, x).clone()
                    })
                    .collect()
            })
            .collect();
        Ok(DiagMor { dom: self.value.clone(), cod: y.clone(), comps, nat })
    }
}

/// `u_!f: u_!X → u_!X'` for `f: X → X'`, given both extensions.
pub fn left_kan_map(lx: &LeftKan, ly: &LeftKan, f: &DiagMor) -> DiagMor {
    let b = &lx.u.cod;
    let comps = (0..b.n_objects())
        .map(|o| {
            let fr = f.restrict(&lx.commas[o].p);
            let cocone = compose_diag_unchecked(&fr, &ly.colims[o].unit);
            lx.colims[o].factor(&ly.value.objs[o], &cocone)
        })
        .collect::<Vec<_>>();
    let nat = b
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            (0..lx.value.objs[ar.src].size0())
                .map(|p| ly.value.objs[ar.dst].r(ly.value.act(be, comps[ar.src].f0[p])))
                .collect()
        })
        .collect();
    DiagMor { dom: lx.value.clone(), cod: ly.value.clone(), comps, nat }
}


/// The comparison `(pw)_!(w*X) → p_!X` for `w: C → D` and `p: D → A`,
/// sending the point of a comma object `(c, γ)` to that of `(wc, γ)`.
pub struct KanComparison {
    pub src: LeftKan,
    pub dst: LeftKan,
    pub map: DiagMor,
}

pub fn kan_comparison(w: &Functor, p: &Functor, x: &CoherentDiagram) -> Result<KanComparison, CoherentError> {
    let pw = w.then(p);
    let src = left_kan(&pw, &x.restrict_unchecked(w))?;
    let dst = left_kan(p, x)?;
    let a = &p.cod;
    let base = Functor::identity(a);
    let comps = (0..a.n_objects())
        .map(|o| comma_colimit_map((&src.commas[o], &src.colims[o]), (&dst.commas[o], &dst.colims[o]), w, &base))
        .collect::<Result<Vec<_>, _>>()?;
    let nat = a
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            (0..src.value.objs[ar.src].size0())
                .map(|q| dst.value.objs[ar.dst].r(dst.value.act(be, comps[ar.src].f0[q])))
                .collect()
        })
        .collect();
    let map = DiagMor::new(src.value.clone(), dst.value.clone(), comps, nat)?;
    Ok(KanComparison { src, dst, map })
}

/// The map of colimits over commas `(p'/a) → (p/b)` induced by
/// `(c, γ) ↦ (w c, base γ)`, where `p w = base p'`. The diagram at `(c, γ)`
/// must be the one at its image.
pub fn comma_colimit_map(
    src: (&Comma, &Colimit),
    dst: (&Comma, &Colimit),
    w: &Functor,
    base: &Functor,
) -> Result<MorRep, CoherentError> {
    let ((ca, xa), (cb, xb)) = (src, dst);
    let obj: Vec<usize> = ca
        .objects
        .iter()
        .map(|&(c, _, g)| {
            cb.find_object(w.obj[c], 0, base.arr[g]).ok_or_else(|| CoherentError::Mismatch("comma object".into()))
        })
        .collect::<Result<_, _>>()?;
    let arr_index = comma_arrow_index(cb, true);
    let arr: Vec<usize> = ca
        .arrows
        .iter()
        .enumerate()
        .map(|(k, &(al, _))| {
            arr_index.get(&(obj[ca.cat.src(k)], w.arr[al])).copied().ok_or_else(|| CoherentError::Mismatch("comma arrow".into()))
        })
        .collect::<Result<_, _>>()?;
    let f0: Vec<usize> = (0..xa.setoid.size0())
        .map(|q| {
            let (k, pt) = xa.locate(q);
            xb.point(obj[k], pt)
        })
        .collect();
    let g: Arc<CoconeGens> = xb.gens.clone();
    let f0c = f0.clone();
    Ok(MorRep::new_unchecked(
        xa.setoid.clone(),
        xb.setoid.clone(),
        f0,
        Arc::new(move |wit: &Wit| match wit {
            Wit::Word(word) => Wit::Word(Word {
                start: f0c[word.start],
                steps: word
                    .steps
                    .iter()
                    .map(|st| match &st.gen.label {
                        GenLabel::Cocone { arrow, point, wit } => {
                            Step { gen: g.gen(arr[*arrow], *point, (**wit).clone()), forward: st.forward }
                        }
                        _ => unreachable!("colimit generators"),
                    })
                    .collect(),
            }),
            other => panic!("not a colimit witness: {}", other),
        }),
    ))
}

/// `u_*X`, computed as limits over the commas `(b/u)`.
pub struct RightKan {
    pub u: Functor,
    pub src: CoherentDiagram,
    pub value: CoherentDiagram,
    pub commas: Vec<Comma>,
    pub limits: Vec<Limit>,
    /// `u*u_*X → X`.
    pub counit: DiagMor,
}

pub fn right_kan(u: &Functor, x: &CoherentDiagram) -> Result<RightKan, CoherentError> {
    if *u.dom != *x.shape {
        return Err(CoherentError::Shape(format!("{} is not over {}", x.name, u.dom.name())));
    }
    let b = &u.cod;
    let mut commas = Vec::new();
    let mut limits = Vec::new();
    for o in 0..b.n_objects() {
        let c = comma(&Functor::point(b, o), u)?;
        let restricted = x.restrict_unchecked(&c.q).named(format!("{}|({}/{})", x.name, b.object_label(o), u.dom.name()));
        limits.push(limit_over(&restricted));
        commas.push(c);
    }
    let arrow_idx: Vec<_> = commas.iter().map(|c| comma_arrow_index(c, false)).collect();
    let objs: Vec<Setoid> = limits.iter().map(|l| l.setoid.clone()).collect();
    let arrs = b
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            let (c1, c2) = (&commas[ar.src], &commas[ar.dst]);
            // β*: (b'/u) → (b/u), (a, γ') ↦ (a, γ'β)
            let pull_obj: Vec<usize> =
                c2.objects.iter().map(|&(_, a, g)| c1.find_object(0, a, b.comp(g, be)).expect("comma object")).collect();
            let pull_arr: Vec<usize> = c2
                .arrows
                .iter()
                .enumerate()
                .map(|(k, &(_, al))| arrow_idx[ar.src][&(pull_obj[c2.cat.src(k)], al)])
                .collect();
            let (l1, l2) = (&limits[ar.src].setoid, &limits[ar.dst].setoid);
            let j1 = l1.as_joint().unwrap();
            let f0: Vec<usize> = (0..l1.size0())
                .map(|p| {
                    let ys: Vec<usize> = pull_obj.iter().map(|&o| j1.coords[p][o]).collect();
                    let xs: Vec<Wit> = pull_arr.iter().map(|&k| j1.extra[p][k].clone()).collect();
                    l2.joint_point(&ys, &xs).expect("reindexed limit point")
                })
                .collect();
            let f0c = f0.clone();
            MorRep::new_unchecked(
                l1.clone(),
                l2.clone(),
                f0,
                Arc::new(move |w: &Wit| match w {
                    Wit::Joint { src, dst, parts } => Wit::Joint {
                        src: f0c[*src],
                        dst: f0c[*dst],
                        parts: pull_obj.iter().map(|&o| parts[o].clone()).collect(),
                    },
                    other => panic!("not a limit witness: {}", other),
                }),
            )
        })
        .collect();
    let value = strict_diagram(format!("{}_*{}", u.dom.name(), x.name), b, objs, arrs);
    let a = &u.dom;
    let home: Vec<usize> =
        (0..a.n_objects()).map(|o| commas[u.obj[o]].find_object(0, o, b.id(u.obj[o])).unwrap()).collect();
    let comps = (0..a.n_objects())
        .map(|o| {
            let c = &limits[u.obj[o]].counit.comps[home[o]];
            MorRep::new_unchecked(value.objs[u.obj[o]].clone(), x.objs[o].clone(), c.f0.clone(), c.f1.clone())
        })
        .collect();
    let nat = a
        .arrows()
        .iter()
        .enumerate()
        .map(|(al, ar)| {
            let bo = u.obj[ar.src];
            let k = arrow_idx[bo][&(home[ar.src], al)];
            debug_assert_eq!(commas[bo].cat.dst(k), commas[bo].find_object(0, ar.dst, u.arr[al]).unwrap());
            limits[bo].counit.nat[k].clone()
        })
        .collect();
    let counit = DiagMor { dom: value.restrict_unchecked(u), cod: x.clone(), comps, nat };
    Ok(RightKan { u: u.clone(), src: x.clone(), value, commas, limits, counit })
}

impl RightKan {
    /// `Y → u_*u*Y`, where `self` is the right Kan extension of `u*Y`.
    pub fn unit(&self, y: &CoherentDiagram) -> Result<DiagMor, CoherentError> {
        let b = &self.u.cod;
        if !self.src.same_data(&y.restrict_unchecked(&self.u)) {
            return Err(CoherentError::Mismatch("unit needs the extension of u*Y".into()));
        }
        let mut comps = Vec::with_capacity(b.n_objects());
        for o in 0..b.n_objects() {
            let c = &self.commas[o];
            let cc: Vec<MorRep> = c.objects.iter().map(|&(_, _, g)| y.arrs[g].clone()).collect();
            let nat = c
                .arrows
                .iter()
                .enumerate()
                .map(|(k, &(_, al))| {
                    let g = c.objects[c.cat.src(k)].2;
                    (0..y.objs[o].size0()).map(|p| y.comp_at(g, self.u.arr[al], p).clone()).collect()
                })
                .collect();
            let cone = DiagMor {
                dom: CoherentDiagram::constant(&c.cat, &y.objs[o]),
                cod: self.limits[o].diagram.clone(),
                comps: cc,
                nat,
            };
            comps.push(self.limits[o].factor(&y.objs[o], &cone)?);
        }
        let nat = b
            .arrows()
            .iter()
            .enumerate()
            .map(|(be, ar)| {
                let c2 = &self.commas[ar.dst];
                let l2 = &self.value.objs[ar.dst];
                (0..y.objs[ar.src].size0())
                    .map(|p| {
                        let src = self.value.act(be, comps[ar.src].f0[p]);
                        let dst = comps[ar.dst].f0[y.act(be, p)];
                        let parts = c2.objects.iter().map(|&(_, _, g)| y.objs[b.dst(g)].v(y.comp_at(be, g, p))).collect();
                        let w = Wit::Joint { src, dst, parts };
                        debug_assert!(l2.is_witness(&w));
                        w
                    })
                    .collect()
            })
            .collect();
        Ok(DiagMor { dom: y.clone(), cod: self.value.clone(), comps, nat })
    }
}

/// `u_*f: u_*X → u_*X'` for `f: X → X'`, given both extensions.
pub fn right_kan_map(rx: &RightKan, ry: &RightKan, f: &DiagMor) -> Result<DiagMor, CoherentError> {
    let b = &rx.u.cod;
    let mut comps = Vec::with_capacity(b.n_objects());
    for o in 0..b.n_objects() {
        let fr = f.restrict(&rx.commas[o].q);
        let cone = compose_diag_unchecked(&rx.limits[o].counit, &fr);
        comps.push(ry.limits[o].factor(&rx.value.objs[o], &cone)?);
    }
    let nat = b
        .arrows()
        .iter()
        .enumerate()
        .map(|(be, ar)| {
            (0..rx.value.objs[ar.src].size0())
                .map(|p| ry.value.objs[ar.dst].r(ry.value.act(be, comps[ar.src].f0[p])))
                .collect()
        })
        .collect();
    Ok(DiagMor { dom: rx.value.clone(), cod: ry.value.clone(), comps, nat })
}

// ---------------------------------------------------------------------------
// Mates

/// A square `u p ⇒ v q` with `p: D → A`, `q: D → B`, `u: A → C`, `v: B → C`.
#[derive(Clone, Debug)]
pub struct Square {
    pub p: Functor,
    pub q: Functor,
    pub u: Functor,
    pub v: Functor,
    pub cell: NatTrans,
}

impl Square {
    pub fn new(p: Functor, q: Functor, u: Functor, v: Functor, cell: NatTrans) -> Result<Self, CoherentError> {
        if *p.dom != *q.dom || *p.cod != *u.dom || *q.cod != *v.dom || *u.cod != *v.cod {
            return Err(CoherentError::Shape("square functors do not typecheck".into()));
        }
        if !cell.dom.same_as(&p.then(&u)) || !cell.cod.same_as(&q.then(&v)) {
            return Err(CoherentError::Shape("square cell has the wrong boundary".into()));
        }
        cell.validate()?;
        Ok(Square { p, q, u, v, cell })
    }

    /// The comma square of `(u/v)`.
    pub fn comma(u: &Functor, v: &Functor) -> Result<Self, CoherentError> {
        let c = comma(u, v)?;
        Ok(Square { p: c.p, q: c.q, u: u.clone(), v: v.clone(), cell: c.cell })
    }
}

/// `q_!p*X → v*u_!X`: `ε ∘ q_!(X_cell ∘ p*η)`.
pub fn mate_left(sq: &Square, x: &CoherentDiagram) -> Result<DiagMor, CoherentError> {
    let lu = left_kan(&sq.u, x)?;
    let pre = lu.unit.restrict(&sq.p);
    let wh = whisker(&sq.cell, &lu.value)?;
    let phi = compose_diag_unchecked(&pre, &wh);
    let z = lu.value.restrict_unchecked(&sq.v);
    let l1 = left_kan(&sq.q, &x.restrict_unchecked(&sq.p))?;
    let l2 = left_kan(&sq.q, &z.restrict_unchecked(&sq.q))?;
    let phi = phi.retyped(&l1.src, &l2.src);
    let m = left_kan_map(&l1, &l2, &phi);
    let eps = l2.counit(&z)?;
    Ok(compose_diag_unchecked(&m, &eps))
}

/// `u*v_*Y → p_*q*Y`: `p_*(q*ε ∘ Y_cell) ∘ η`.
pub fn mate_right(sq: &Square, y: &CoherentDiagram) -> Result<DiagMor, CoherentError> {
    let rv = right_kan(&sq.v, y)?;
    let wh = whisker(&sq.cell, &rv.value)?;
    let qe = rv.counit.restrict(&sq.q);
    let phi = compose_diag_unchecked(&wh, &qe);
    let w = rv.value.restrict_unchecked(&sq.u);
    let r1 = right_kan(&sq.p, &w.restrict_unchecked(&sq.p))?;
    let r2 = right_kan(&sq.p, &y.restrict_unchecked(&sq.q))?;
    let eta = r1.unit(&w)?;
    let phi = phi.retyped(&r1.src, &r2.src);
    let m = right_kan_map(&r1, &r2, &phi)?;
    Ok(compose_diag_unchecked(&eta, &m))
}

/// The left mate is invertible.
pub fn check_mate_left(sq: &Square, x: &CoherentDiagram) -> Verdict<()> {
    match mate_left(sq, x) {
        Ok(m) => is_iso_diag(&m).erase(),
        Err(e) => Verdict::fail(e.to_string()),
    }
}

pub fn check_mate_right(sq: &Square, y: &CoherentDiagram) -> Verdict<()> {
    match mate_right(sq, y) {
        Ok(m) => is_iso_diag(&m).erase(),
        Err(e) => Verdict::fail(e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Triangle identities

/// `ε u_! ∘ u_!η ∼ 1` and `u*ε ∘ η u* ∼ 1`.
pub fn left_triangles(u: &Functor, x: &CoherentDiagram, y: &CoherentDiagram) -> Result<Verdict<()>, CoherentError> {
    let lx = left_kan(u, x)?;
    let lux = left_kan(u, &lx.value.restrict_unchecked(u))?;
    let first = compose_diag_unchecked(&left_kan_map(&lx, &lux, &lx.unit.retyped(&lx.src, &lux.src)), &lux.counit(&lx.value)?);
    let ly = left_kan(u, &y.restrict_unchecked(u))?;
    let second = compose_diag_unchecked(&ly.unit, &ly.counit(y)?.restrict(u));
    let ok1 = equal_diag(&first, &DiagMor::identity(&lx.value))?.is_some();
    let ok2 = equal_diag(&second, &DiagMor::identity(&ly.src))?.is_some();
    Ok(triangle_verdict(ok1, ok2))
}

/// `u_*ε ∘ η u_* ∼ 1` and `ε u* ∘ u*η ∼ 1`.
pub fn right_triangles(u: &Functor, x: &CoherentDiagram, y: &CoherentDiagram) -> Result<Verdict<()>, CoherentError> {
    let rx = right_kan(u, x)?;
    let rux = right_kan(u, &rx.value.restrict_unchecked(u))?;
    let eta = rux.unit(&rx.value)?;
    let first = compose_diag_unchecked(&eta, &right_kan_map(&rux, &rx, &rx.counit.retyped(&rux.src, &rx.src))?);
    let ry = right_kan(u, &y.restrict_unchecked(u))?;
    let second = compose_diag_unchecked(&ry.unit(y)?.restrict(u), &ry.counit);
    let ok1 = equal_diag(&first, &DiagMor::identity(&rx.value))?.is_some();
    let ok2 = equal_diag(&second, &DiagMor::identity(&ry.src))?.is_some();
    Ok(triangle_verdict(ok1, ok2))
}

fn triangle_verdict(ok1: bool, ok2: bool) -> Verdict<()> {
    match (ok1, ok2) {
        (true, true) => Verdict::pass((), "both triangles"),
        (false, _) => Verdict::fail("first triangle not witnessed"),
        (_, false) => Verdict::fail("second triangle not witnessed"),
    }
}

// ---------------------------------------------------------------------------
// Fast paths for discrete targets

/// For `u` into a discrete category, compares the comma computation of `u_!`
/// with coproducts over fibers (or fiber colimits when a fiber has arrows).
pub fn fast_left_agrees(u: &Functor, x: &CoherentDiagram) -> Result<Verdict<()>, CoherentError> {
    if !u.cod.is_discrete() {
        return Err(CoherentError::Shape(format!("{} is not discrete", u.cod.name())));
    }
    let lk = left_kan(u, x)?;
    for b in 0..u.cod.n_objects() {
        let fiber: Vec<usize> = (0..u.dom.n_objects()).filter(|&a| u.obj[a] == b).collect();
        let (fc, incl) = crate::fincat::full_subcategory(&u.dom, &fiber, "fiber");
        let cb = &lk.colims[b];
        let cmp = if fc.is_discrete() {
            let sum = Setoid::sum(format!("Σ fiber {}", b), fiber.iter().map(|&a| x.objs[a].clone()).collect());
            let offs = sum.as_sum().unwrap().offsets.clone();
            let units: Vec<MorRep> = cb.unit.comps.clone();
            let sc = sum.clone();
            MorRep::new_unchecked(
                sum.clone(),
                cb.setoid.clone(),
                (0..sum.size0()).collect(),
                Arc::new(move |w: &Wit| match w {
                    Wit::Inj(k, inner) => units[*k].apply(inner),
                    other => panic!("not a sum witness: {} in {}", other, sc.name()),
                }),
            )
            .tap(|_| debug_assert_eq!(offs.len(), fiber.len() + 1))
        } else {
            let fx = x.restrict_unchecked(&incl);
            let fcol = colimit_over(&fx);
            let idx = comma_arrow_index(&lk.commas[b], true);
            let g2 = cb.gens.clone();
            let f0: Vec<usize> = (0..fcol.setoid.size0()).collect();
            let f0c = f0.clone();
            let fcat = fc.clone();
            let incl_arr = incl.arr.clone();
            MorRep::new_unchecked(
                fcol.setoid.clone(),
                cb.setoid.clone(),
                f0,
                Arc::new(move |w: &Wit| match w {
                    Wit::Word(word) => Wit::Word(Word {
                        start: f0c[word.start],
                        steps: word
                            .steps
                            .iter()
                            .map(|s| match &s.gen.label {
                                GenLabel::Cocone { arrow, point, wit } => Step {
                                    gen: g2.gen(idx[&(fcat.src(*arrow), incl_arr[*arrow])], *point, (**wit).clone()),
                                    forward: s.forward,
                                },
                                _ => unreachable!(),
                            })
                            .collect(),
                    }),
                    other => panic!("not a colimit witness: {}", other),
                }),
            )
        };
        if let Err(e) = cmp.validate() {
            return Ok(Verdict::fail(format!("fiber {}: comparison invalid: {}", b, e)));
        }
        let v = is_iso(&cmp);
        if !v.holds {
            return Ok(Verdict::fail(format!("fiber {}: {}", b, v.note)));
        }
    }
    Ok(Verdict::pass((), "comma and fiber computations agree"))
}

/// Dual of [`fast_left_agrees`] with products over fibers.
pub fn fast_right_agrees(u: &Functor, x: &CoherentDiagram) -> Result<Verdict<()>, CoherentError> {
    if !u.cod.is_discrete() {
        return Err(CoherentError::Shape(format!("{} is not discrete", u.cod.name())));
    }
    let rk = right_kan(u, x)?;
    for b in 0..u.cod.n_objects() {
        let fiber: Vec<usize> = (0..u.dom.n_objects()).filter(|&a| u.obj[a] == b).collect();
        let (fc, incl) = crate::fincat::full_subcategory(&u.dom, &fiber, "fiber");
        let lb = &rk.limits[b];
        let c = &rk.commas[b];
        let fast = if fc.is_discrete() {
            Setoid::product_of(format!("Π fiber {}", b), &fiber.iter().map(|&a| x.objs[a].clone()).collect::<Vec<_>>())
        } else {
            limit_over(&x.restrict_unchecked(&incl)).setoid
        };
        let jf = fast.as_joint().unwrap();
        let jl = lb.setoid.as_joint().unwrap();
        // comma objects and fiber objects are in the same order
        let mut f0 = Vec::with_capacity(fast.size0());
        for p in 0..fast.size0() {
            let ys = jf.coords[p].clone();
            let xis: Vec<Wit> = c
                .arrows
                .iter()
                .enumerate()
                .map(|(k, &(_, al))| {
                    let (s, t) = (c.cat.src(k), c.cat.dst(k));
                    let y = &lb.diagram.objs[t];
                    if fc.is_discrete() {
                        let w = y.v(&x.unit[fiber[s]][ys[s]]);
                        normalize(y, w)
                    } else {
                        let ka = incl.arr.iter().position(|&z| z == al).unwrap();
                        normalize(y, jf.extra[p][ka].clone())
                    }
                })
                .collect();
            match lb.point(&ys, &xis) {
                Some(q) => f0.push(q),
                None => return Ok(Verdict::fail(format!("fiber {}: point {} has no comma image", b, p))),
            }
        }
        let f0c = f0.clone();
        let cmp = MorRep::new_unchecked(
            fast.clone(),
            lb.setoid.clone(),
            f0,
            Arc::new(move |w: &Wit| match w {
                Wit::Joint { src, dst, parts } => Wit::Joint { src: f0c[*src], dst: f0c[*dst], parts: parts.clone() },
                other => panic!("not a product witness: {}", other),
            }),
        );
        let _ = jl;
        if let Err(e) = cmp.validate() {
            return Ok(Verdict::fail(format!("fiber {}: comparison invalid: {}", b, e)));
        }
        let v = is_iso(&cmp);
        if !v.holds {
            return Ok(Verdict::fail(format!("fiber {}: {}", b, v.note)));
        }
    }
    Ok(Verdict::pass((), "comma and fiber computations agree"))
}

trait Tap: Sized {
    fn tap(self, f: impl FnOnce(&Self)) -> Self {
        f(&self);
        self
    }
}

impl Tap for MorRep {}

// ---------------------------------------------------------------------------
// Der1 and Der5 constructions

/// The diagram over `A + B` with the given restrictions.
pub fn glue(a: &Cat, b: &Cat, x: &CoherentDiagram, y: &CoherentDiagram) -> Result<(Cat, CoherentDiagram), CoherentError> {
    if *x.shape != **a || *y.shape != **b {
        return Err(CoherentError::Shape("gluing diagrams over other shapes".into()));
    }
    let (ab, _, _) = coproduct(a, b);
    let ka = a.n_arrows();
    let mut comp = x.comp.clone();
    for (&(f, g), tab) in &y.comp {
        comp.insert((f + ka, g + ka), tab.clone());
    }
    let d = CoherentDiagram {
        name: format!("{}+{}", x.name, y.name),
        shape: ab.clone(),
        objs: x.objs.iter().chain(&y.objs).cloned().collect(),
        arrs: x.arrs.iter().chain(&y.arrs).cloned().collect(),
        unit: x.unit.iter().chain(&y.unit).cloned().collect(),
        comp,
    };
    Ok((ab, d))
}

/// A diagram over `A × ARROW` whose underlying morphism is `f`. The arrow
/// `(α, 0 → 1)` acts by `Y_α ∘ f_a`.
pub fn der5_lift(f: &DiagMor) -> (Cat, CoherentDiagram) {
    let a = &f.dom.shape;
    let ar = arrow_cat();
    let (p, _, _) = product(a, &ar);
    let (x, y) = (&f.dom, &f.cod);
    let na2 = ar.n_arrows();
    let step = (0..na2).find(|&g| !ar.is_identity(g)).unwrap();
    let side = |g: usize| if g == ar.id(0) { 0 } else if g == ar.id(1) { 1 } else { 2 };
    let objs: Vec<Setoid> =
        (0..p.n_objects()).map(|o| if o % 2 == 0 { x.objs[o / 2].clone() } else { y.objs[o / 2].clone() }).collect();
    let arrs: Vec<MorRep> = (0..p.n_arrows())
        .map(|i| {
            let (al, g) = (i / na2, i % na2);
            match side(g) {
                0 => x.arrs[al].clone(),
                1 => y.arrs[al].clone(),
                _ => crate::setoid::compose_unchecked(&f.comps[a.src(al)], &y.arrs[al]),
            }
        })
        .collect();
    let unit = (0..p.n_objects()).map(|o| if o % 2 == 0 { x.unit[o / 2].clone() } else { y.unit[o / 2].clone() }).collect();
    let mut comp = HashMap::new();
    for (i, j) in p.composable_pairs() {
        let (al, g) = (i / na2, i % na2);
        let (al2, g2) = (j / na2, j % na2);
        let tab: Vec<Wit> = match (side(g), side(g2)) {
            (0, 0) => x.comp[&(al, al2)].clone(),
            (1, 1) => y.comp[&(al, al2)].clone(),
            (0, 2) => {
                let yc = &y.objs[a.dst(al2)];
                (0..x.objs[a.src(al)].size0())
                    .map(|p0| {
                        let fa = f.comps[a.src(al)].f0[p0];
                        yc.m(&yc.v(&y.act1(al2, &f.nat[al][p0])), y.comp_at(al, al2, fa))
                    })
                    .collect()
            }
            (2, 1) => (0..x.objs[a.src(al)].size0())
                .map(|p0| y.comp_at(al, al2, f.comps[a.src(al)].f0[p0]).clone())
                .collect(),
            _ => unreachable!("no other composable pairs"),
        };
        comp.insert((i, j), tab);
    }
    let _ = step;
    (p.clone(), CoherentDiagram { name: format!("lift({}→{})", x.name, y.name), shape: p, objs, arrs, unit, comp })
}

/// The morphism `Z|0 → Z|1` underlying a diagram over `A × ARROW`.
pub fn underlying_mor(a: &Cat, z: &CoherentDiagram) -> DiagMor {
    let ar = arrow_cat();
    let na2 = ar.n_arrows();
    let step = (0..na2).find(|&g| !ar.is_identity(g)).unwrap();
    let at = |k: usize| {
        let obj: Vec<usize> = (0..a.n_objects()).map(|o| 2 * o + k).collect();
        let arr: Vec<usize> = (0..a.n_arrows()).map(|al| al * na2 + ar.id(k)).collect();
        Functor::new_unchecked(a.clone(), z.shape.clone(), obj, arr)
    };
    let (x, y) = (z.restrict_unchecked(&at(0)), z.restrict_unchecked(&at(1)));
    let comps = (0..a.n_objects()).map(|o| z.arrs[a.id(o) * na2 + step].clone()).collect();
    let nat = (0..a.n_arrows())
        .map(|al| {
            let (s, t) = (a.src(al), a.dst(al));
            let up = a.id(s) * na2 + step;
            let right = al * na2 + ar.id(1);
            let left = al * na2 + ar.id(0);
            let up2 = a.id(t) * na2 + step;
            let yc = &y.objs[t];
            (0..x.objs[s].size0()).map(|p| yc.m(z.comp_at(up, right, p), &yc.v(z.comp_at(left, up2, p)))).collect()
        })
        .collect();
    DiagMor { dom: x, cod: y, comps, nat }
}

// ---------------------------------------------------------------------------
// Distributivity

/// `u_!(X × u*Y') → u_!X × Y'` is invertible.
pub fn distributivity_check(x: &CoherentDiagram, y: &CoherentDiagram, u: &Functor) -> Result<Verdict<()>, CoherentError> {
    if !u.cod.is_discrete() {
        return Err(CoherentError::Shape(format!("{} is not discrete", u.cod.name())));
    }
    let lx = left_kan(u, x)?;
    let (p, _, _) = product_diag(&lx.value, y)?;
    let uy = y.restrict_unchecked(u);
    let (xy, p1, p2) = product_diag(x, &uy)?;
    let up = p.restrict_unchecked(u);
    let (target, _, _) = product_diag(&lx.value.restrict_unchecked(u), &uy)?;
    let phi = pair_mor(&compose_diag_unchecked(&p1, &lx.unit), &p2, &target).retyped(&xy, &up);
    let l1 = left_kan(u, &xy)?;
    let l2 = left_kan(u, &up)?;
    let m = compose_diag_unchecked(&left_kan_map(&l1, &l2, &phi), &l2.counit(&p)?);
    Ok(is_iso_diag(&m).erase())
}

/// `⟨f, g⟩: Z → P × Q` into a product built by [`product_diag`].
pub fn pair_mor(f: &DiagMor, g: &DiagMor, target: &CoherentDiagram) -> DiagMor {
    let s = &f.dom.shape;
    let comps = (0..s.n_objects())
        .map(|o| {
            let (fo, go) = (f.comps[o].clone(), g.comps[o].clone());
            let nq = go.cod.size0();
            let f0: Vec<usize> = (0..fo.dom.size0()).map(|z| fo.f0[z] * nq + go.f0[z]).collect();
            let f0c = f0.clone();
            let dom = fo.dom.clone();
            MorRep::new_unchecked(
                fo.dom.clone(),
                target.objs[o].clone(),
                f0,
                Arc::new(move |w: &Wit| Wit::Joint {
                    src: f0c[dom.s(w)],
                    dst: f0c[dom.t(w)],
                    parts: vec![fo.apply(w), go.apply(w)],
                }),
            )
        })
        .collect::<Vec<_>>();
    let nat = s
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (0..f.dom.objs[a.src].size0())
                .map(|z| {
                    let (wf, wg) = (&f.nat[i][z], &g.nat[i][z]);
                    let nq = g.cod.objs[a.dst].size0();
                    let (pf, pg) = (&f.cod.objs[a.dst], &g.cod.objs[a.dst]);
                    Wit::Joint {
                        src: pf.s(wf) * nq + pg.s(wg),
                        dst: pf.t(wf) * nq + pg.t(wg),
                        parts: vec![wf.clone(), wg.clone()],
                    }
                })
                .collect()
        })
        .collect();
    DiagMor { dom: f.dom.clone(), cod: target.clone(), comps, nat }
}

/// Compatible families of a set diagram, i.e. its limit in `Set`.
pub fn set_limit(d: &SetDiagram) -> Vec<Vec<usize>> {
    let s = &d.shape;
    let mut out = Vec::new();
    let mut cur = vec![0; s.n_objects()];
    fn go(d: &SetDiagram, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let s = &d.shape;
        if k == s.n_objects() {
            out.push(cur.clone());
            return;
        }
        'p: for p in 0..d.sizes[k] {
            cur[k] = p;
            for (i, a) in s.arrows().iter().enumerate() {
                if a.src <= k && a.dst <= k && (a.src == k || a.dst == k) && d.maps[i][cur[a.src]] != cur[a.dst] {
                    continue 'p;
                }
            }
            go(d, k + 1, cur, out);
        }
    }
    go(d, 0, &mut cur, &mut out);
    out
}

/// Connected components of the category of elements, i.e. the colimit of a
/// set diagram in `Set`; returns the class of each `(a, x)` in `Σ` order.
pub fn set_colimit(d: &SetDiagram) -> crate::setoid::Quotient {
    let mut offs = vec![0];
    for &n in &d.sizes {
        offs.push(offs.last().unwrap() + n);
    }
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(*offs.last().unwrap());
    for (i, a) in d.shape.arrows().iter().enumerate() {
        for x in 0..d.sizes[a.src] {
            uf.union(offs[a.src] + x, offs[a.dst] + d.maps[i][x]);
        }
    }
    crate::setoid::Quotient::from_union_find(*offs.last().unwrap(), &mut uf)
}

/// Compares `quotient(lim Y)` with `lim(quotient Y)` through the canonical
/// map; returns `(commutes, detail)`.
pub fn reflection_vs_limit(y: &CoherentDiagram) -> (bool, String) {
    let l = limit_over(y);
    let ql = l.setoid.quotient();
    let (qd, qs) = y.quotient();
    let fams = set_limit(&qd);
    let idx: HashMap<Vec<usize>, usize> = fams.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let j = l.setoid.as_joint().unwrap();
    let mut hit = vec![false; fams.len()];
    let mut injective = true;
    for &rep in &ql.rep {
        let fam: Vec<usize> = j.coords[rep].iter().enumerate().map(|(a, &y)| qs[a].class[y]).collect();
        let k = idx[&fam];
        if hit[k] {
            injective = false;
        }
        hit[k] = true;
    }
    let surjective = hit.iter().all(|&h| h);
    let ok = injective && surjective;
    (ok, format!("|π0 lim| = {}, |lim π0| = {}, injective {}, surjective {}", ql.size, fams.len(), injective, surjective))
}

/// Compares `quotient(colim X)` with `colim(quotient X)`.
pub fn reflection_vs_colimit(x: &CoherentDiagram) -> (bool, String) {
    let c = colimit_over(x);
    let qc = c.setoid.quotient();
    let (qd, qs) = x.quotient();
    let sc = set_colimit(&qd);
    let mut offs = vec![0];
    for &n in &qd.sizes {
        offs.push(offs.last().unwrap() + n);
    }
    // the canonical map sends the class of (a, x) to the class of (a, [x])
    let mut image = vec![usize::MAX; qc.size];
    let mut ok = true;
    for p in 0..c.setoid.size0() {
        let (a, xa) = c.locate(p);
        let tgt = sc.class[offs[a] + qs[a].class[xa]];
        let k = qc.class[p];
        if image[k] == usize::MAX {
            image[k] = tgt;
        } else if image[k] != tgt {
            ok = false;
        }
    }
    let mut seen = vec![false; sc.size];
    for &t in &image {
        if t == usize::MAX || std::mem::replace(&mut seen[t], true) {
            ok = false;
        }
    }
    ok &= seen.iter().all(|&s| s);
    (ok, format!("|π0 colim| = {}, |colim π0| = {}", qc.size, sc.size))
}

// ---------------------------------------------------------------------------
// The axiom suite

/// A morphism over `A + B` from morphisms over `A` and over `B`.
pub fn glue_mor(f: &DiagMor, g: &DiagMor, dom: &CoherentDiagram, cod: &CoherentDiagram) -> DiagMor {
    DiagMor {
        dom: dom.clone(),
        cod: cod.clone(),
        comps: f.comps.iter().chain(&g.comps).cloned().collect(),
        nat: f.nat.iter().chain(&g.nat).cloned().collect(),
    }
}

fn same_mor(f: &DiagMor, g: &DiagMor) -> bool {
    f.comps.len() == g.comps.len()
        && f.comps.iter().zip(&g.comps).all(|(a, b)| same_rep(a, b))
        && f.nat == g.nat
}

fn record<W>(out: &mut Vec<Record>, check: &str, instance: impl Into<String>, v: Verdict<W>) {
    out.push(Record::new(check, instance, &v));
}

fn record_result(out: &mut Vec<Record>, check: &str, instance: impl Into<String>, v: Result<Verdict<()>, CoherentError>) {
    let v = v.unwrap_or_else(|e| Verdict::fail(e.to_string()));
    record(out, check, instance, v);
}

/// Der1 for a pair of diagrams: both restrictions of the glued diagram give
/// back the inputs, and regluing the restrictions gives back the glued one.
pub fn der1_check(x: &CoherentDiagram, y: &CoherentDiagram) -> Verdict<()> {
    let (a, b) = (&x.shape, &y.shape);
    let (ab, z) = match glue(a, b, x, y) {
        Ok(r) => r,
        Err(e) => return Verdict::fail(e.to_string()),
    };
    if let Err(e) = z.validate() {
        return Verdict::fail(e.to_string());
    }
    let (_, i, j) = coproduct(a, b);
    debug_assert!(*ab == *i.cod);
    let (zx, zy) = (z.restrict_unchecked(&i), z.restrict_unchecked(&j));
    if !zx.same_data(x) || !zy.same_data(y) {
        return Verdict::fail("restriction does not recover a summand");
    }
    match glue(a, b, &zx, &zy) {
        Ok((_, z2)) if z2.same_data(&z) => Verdict::pass((), "Eex(A+B) ≃ Eex(A) × Eex(B) on objects"),
        _ => Verdict::fail("regluing the restrictions changes the diagram"),
    }
}

/// Der1 on morphisms.
pub fn der1_mor_check(f: &DiagMor, g: &DiagMor) -> Verdict<()> {
    let (a, b) = (&f.dom.shape, &g.dom.shape);
    let (dom, cod) = match (glue(a, b, &f.dom, &g.dom), glue(a, b, &f.cod, &g.cod)) {
        (Ok((_, d)), Ok((_, c))) => (d, c),
        _ => return Verdict::fail("gluing failed"),
    };
    let h = glue_mor(f, g, &dom, &cod);
    if let Err(e) = h.validate() {
        return Verdict::fail(e.to_string());
    }
    let (_, i, j) = coproduct(a, b);
    if same_mor(&h.restrict(&i), f) && same_mor(&h.restrict(&j), g) {
        Verdict::pass((), "morphisms glue and restrict back")
    } else {
        Verdict::fail("restricted morphism differs")
    }
}

/// Der2: `f` is invertible iff every component is.
pub fn der2_check(f: &DiagMor) -> Verdict<()> {
    let whole = is_iso_diag(f);
    let pointwise = f.comps.iter().all(|c| is_iso(c).holds);
    if whole.holds != pointwise {
        return Verdict::fail(format!("is_iso_diag = {}, componentwise = {}", whole.holds, pointwise));
    }
    if let Some(iso) = &whole.witness {
        if let Err(e) = iso.inverse.validate() {
            return Verdict::fail(format!("inverse invalid: {}", e));
        }
        let there = compose_diag_unchecked(f, &iso.inverse);
        let back = compose_diag_unchecked(&iso.inverse, f);
        let ok = matches!(equal_diag(&there, &DiagMor::identity(&f.dom)), Ok(Some(_)))
            && matches!(equal_diag(&back, &DiagMor::identity(&f.cod)), Ok(Some(_)));
        if !ok {
            return Verdict::fail("inverse round trips are not witnessed");
        }
    }
    Verdict::pass((), if pointwise { "iso, inverse validated" } else { "not iso at some object, nor globally" })
}

/// Der5: the lift of `f` validates and has `f` as its underlying morphism.
pub fn der5_check(f: &DiagMor) -> Verdict<()> {
    let (_, z) = der5_lift(f);
    if let Err(e) = z.validate() {
        return Verdict::fail(format!("lift invalid: {}", e));
    }
    let g = underlying_mor(&f.dom.shape, &z);
    if let Err(e) = g.validate() {
        return Verdict::fail(format!("underlying morphism invalid: {}", e));
    }
    if !g.dom.same_data(&f.dom) || !g.cod.same_data(&f.cod) {
        return Verdict::fail("lift has the wrong endpoints");
    }
    match equal_diag(&g, f) {
        Ok(Some(_)) => Verdict::pass((), "lift recovers the morphism"),
        _ => Verdict::fail("underlying morphism is not equal to the input"),
    }
}

/// The fiber square of a split opfibration at `c`, with the identity cell.
pub fn fiber_square(e: &crate::fincat::CatDiagram, c: usize) -> Result<Square, CoherentError> {
    let g = crate::fincat::grothendieck(e)?;
    let fib = e.fibers[c].clone();
    let incl = Functor::new(
        fib.clone(),
        g.cat.clone(),
        (0..fib.n_objects()).map(|o| g.object(c, o)).collect(),
        (0..fib.n_arrows())
            .map(|k| g.arrow(g.object(c, fib.src(k)), e.shape.id(c), k).expect("fiber arrow"))
            .collect(),
    )?;
    let to1 = Functor::to_terminal(&fib);
    let pt = Functor::point(&e.shape, c);
    let lhs = incl.then(&g.proj);
    let cell = NatTrans::new(lhs.clone(), to1.then(&pt), (0..fib.n_objects()).map(|_| e.shape.id(c)).collect())?;
    Square::new(incl, to1, g.proj.clone(), pt, cell)
}

/// Runs Der1–Der5 over a corpus, plus the stripped/unstripped comparison for
/// diagrams over the point. Entries are validated first.
pub fn verify_derivator_axioms(c: &Corpus) -> Vec<Record> {
    let mut out = Vec::new();
    if let Err(e) = c.validate() {
        out.push(Record::from_bool("validate", "corpus", false, e.to_string()));
        return out;
    }
    out.push(Record::from_bool("validate", "corpus", true, "all entries validate"));

    // Der1
    let diags: Vec<(&String, &CoherentDiagram)> = c.diagrams.iter().collect();
    for (nx, x) in &diags {
        for (ny, y) in &diags {
            if x.shape.n_objects() + y.shape.n_objects() > 6 {
                continue;
            }
            record(&mut out, "Der1", format!("{}+{}", nx, ny), der1_check(x, y));
        }
    }
    let mors: Vec<(&String, &DiagMor)> = c.morphisms.iter().collect();
    for (nf, f) in &mors {
        for (ng, g) in &mors {
            record(&mut out, "Der1-mor", format!("{}+{}", nf, ng), der1_mor_check(f, g));
        }
    }

    // Der2
    for (n, f) in &mors {
        record(&mut out, "Der2", n.as_str(), der2_check(f));
    }
    for (n, x) in &diags {
        record(&mut out, "Der2", format!("id_{}", n), der2_check(&DiagMor::identity(x)));
    }

    // Der3
    for (nu, u) in &c.functors {
        let xs = c.diagrams_over(&u.dom);
        let ys = c.diagrams_over(&u.cod);
        for (nx, x) in &xs {
            for (ny, y) in ys.iter().take(3) {
                let inst = format!("{}:{}:{}", nu, nx, ny);
                record_result(&mut out, "Der3-left", inst.clone(), left_triangles(u, x, y));
                record_result(&mut out, "Der3-right", inst, right_triangles(u, x, y));
            }
        }
    }

    // Der4
    for (nu, u) in &c.functors {
        let xs = c.diagrams_over(&u.dom);
        for b in 0..u.cod.n_objects() {
            let pt = Functor::point(&u.cod, b);
            let left = Square::comma(u, &pt);
            let right = Square::comma(&pt, u);
            for (nx, x) in &xs {
                let inst = format!("{}@{}:{}", nu, u.cod.object_label(b), nx);
                match &left {
                    Ok(sq) => record(&mut out, "Der4-left", inst.clone(), check_mate_left(sq, x)),
                    Err(e) => out.push(Record::from_bool("Der4-left", inst.clone(), false, e.to_string())),
                }
                match &right {
                    Ok(sq) => record(&mut out, "Der4-right", inst, check_mate_right(sq, x)),
                    Err(e) => out.push(Record::from_bool("Der4-right", inst, false, e.to_string())),
                }
            }
        }
    }
    der4_extra(c, &mut out);

    // Der5
    for (n, f) in &mors {
        record(&mut out, "Der5", n.as_str(), der5_check(f));
    }

    // Eex(1): stripped and unstripped forms
    if let Ok(one_) = c.shape("ONE") {
        for (n, x) in c.diagrams_over(one_) {
            record(&mut out, "Eex1-strip", n, strip_agreement(c, x));
        }
    }
    out.sort();
    out
}

fn der4_extra(c: &Corpus, out: &mut Vec<Record>) {
    let Ok(ar) = c.shape("ARROW") else { return };
    let (Ok(pr), Ok(o)) = (c.shape("PAIR"), c.shape("ONE")) else { return };
    let (u0, u1) = (Functor::point(ar, 0), Functor::point(ar, 1));
    let ends = Square::comma(&u0, &u1);
    for (nx, x) in c.diagrams_over(o) {
        if let Ok(sq) = &ends {
            record(out, "Der4-left", format!("(0/1) in ARROW:{}", nx), check_mate_left(sq, x));
            record(out, "Der4-right", format!("(0/1) in ARROW:{}", nx), check_mate_right(sq, x));
        }
    }
    // a split opfibration over ARROW with fibers PAIR and ONE
    let e = crate::fincat::CatDiagram {
        shape: ar.clone(),
        fibers: vec![pr.clone(), o.clone()],
        actions: vec![
            Functor::to_terminal(pr),
            Functor::identity(pr),
            Functor::identity(o),
        ],
    };
    for fib in 0..2 {
        match fiber_square(&e, fib) {
            Ok(sq) => {
                for (nx, s) in [("REL3", crate::corpus::rel3()), ("CHAIN3", crate::corpus::chain3()), ("TERM", Setoid::terminal())] {
                    let x = CoherentDiagram::constant(&sq.u.dom, &s);
                    record(out, "Der4-opfib", format!("fiber {}:{}", fib, nx), check_mate_left(&sq, &x));
                }
            }
            Err(err) => out.push(Record::from_bool("Der4-opfib", format!("fiber {}", fib), false, err.to_string())),
        }
    }
}

/// For a diagram over the point, its underlying setoid with the identity
/// structure gives the same verdicts and is isomorphic to it.
pub fn strip_agreement(c: &Corpus, x: &CoherentDiagram) -> Verdict<()> {
    let s = match x.strip_units() {
        Ok(s) => CoherentDiagram::point(&s),
        Err(e) => return Verdict::fail(e.to_string()),
    };
    let cmp = match DiagMor::by_search(&s, x, vec![MorRep::identity(&s.objs[0])]) {
        Ok(m) => m,
        Err(e) => return Verdict::fail(format!("no comparison: {}", e)),
    };
    if !is_iso_diag(&cmp).holds {
        return Verdict::fail("stripped form is not isomorphic");
    }
    let mut notes = Vec::new();
    for name in ["at0_ARROW", "at1_ARROW", "at0_PAIR"] {
        let Ok(u) = c.functor(name) else { continue };
        let sizes = |d: &CoherentDiagram| -> Option<(Vec<usize>, Vec<usize>)> {
            let l = left_kan(u, d).ok()?;
            let r = right_kan(u, d).ok()?;
            Some((
                l.value.objs.iter().map(|o| o.quotient().size).collect(),
                r.value.objs.iter().map(|o| o.quotient().size).collect(),
            ))
        };
        let (a, b) = (sizes(x), sizes(&s));
        if a != b || a.is_none() {
            return Verdict::fail(format!("{}: Kan extensions differ ({:?} vs {:?})", name, a, b));
        }
        let y = CoherentDiagram::constant(&u.cod, &x.objs[0]);
        let t1 = left_triangles(u, x, &y).map(|v| v.holds).unwrap_or(false);
        let t2 = left_triangles(u, &s, &y).map(|v| v.holds).unwrap_or(false);
        let t3 = right_triangles(u, x, &y).map(|v| v.holds).unwrap_or(false);
        let t4 = right_triangles(u, &s, &y).map(|v| v.holds).unwrap_or(false);
        if t1 != t2 || t3 != t4 {
            return Verdict::fail(format!("{}: triangle verdicts differ", name));
        }
        notes.push(name);
    }
    Verdict::pass((), format!("agree along {}", notes.join(", ")))
}

// ---------------------------------------------------------------------------
// Corpus runs

/// The comma computation of `u_!` and `u_*` against the coproduct and
/// product fast path, for every discrete-target corpus functor and every
/// diagram over its domain.
pub fn kan_records(c: &Corpus) -> Vec<Record> {
    let mut out = Vec::new();
    for (nu, u) in c.discrete_target_functors() {
        for (nx, x) in c.diagrams_over(&u.dom) {
            let inst = format!("{}:{}", nu, nx);
            record_result(&mut out, "kan-left-fast", inst.clone(), fast_left_agrees(u, x));
            record_result(&mut out, "kan-right-fast", inst, fast_right_agrees(u, x));
        }
    }
    out.sort();
    out
}

/// `quotient(colim ∗) = π0(A)` for every corpus shape: sizes and the
/// partitions of objects.
pub fn pi0_records(c: &Corpus) -> Vec<Record> {
    let mut out = Vec::new();
    for (n, a) in &c.shapes {
        let col = colimit_over(&CoherentDiagram::constant(a, &Setoid::terminal()));
        let q = col.setoid.quotient();
        let (k, comp) = crate::fincat::pi0(a);
        // the point over object o is the only point of its summand
        let classes: Vec<usize> = (0..a.n_objects()).map(|o| q.class[col.point(o, 0)]).collect();
        let same = q.size == k && classes == comp;
        out.push(Record::from_bool("colim-pi0", n.as_str(), same, format!("|π0| = {}, classes {:?} vs {:?}", k, classes, comp)));
    }
    out.sort();
    out
}

/// `u_!(X × u*Y) ≅ u_!X × Y` for every discrete-target corpus functor `u`,
/// `X` over its domain and `Y` over its codomain.
pub fn distributivity_records(c: &Corpus) -> Vec<Record> {
    let mut out = Vec::new();
    for (nu, u) in c.discrete_target_functors() {
        for (nx, x) in c.diagrams_over(&u.dom) {
            for (ny, y) in c.diagrams_over(&u.cod) {
                record_result(&mut out, "distributivity", format!("{}:{}:{}", nu, nx, ny), distributivity_check(x, y, u));
            }
        }
    }
    out.sort();
    out
}

/// Set-reflection against `limit_over` and `colimit_over`, per corpus
/// diagram. An `asymmetry` record holds where the reflection fails to
/// commute with the limit but commutes with the colimit.
pub fn asymmetry_records(c: &Corpus) -> Vec<Record> {
    let mut out = Vec::new();
    for (n, x) in &c.diagrams {
        let (lim, dl) = reflection_vs_limit(x);
        let (col, dc) = reflection_vs_colimit(x);
        out.push(Record::from_bool("reflection-limit", n.as_str(), lim, dl.clone()));
        out.push(Record::from_bool("reflection-colimit", n.as_str(), col, dc.clone()));
        out.push(Record::from_bool(
            "asymmetry",
            n.as_str(),
            !lim && col,
            format!("limit commutes {}, colimit commutes {}; {}; {}", lim, col, dl, dc),
        ));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::embed_setdiagram;
    use crate::fincat::{discrete, one, pair, pi0, square, span};
    use crate::setoid::{free_setoid, relational_from_blocks, tab2};

    fn rel3() -> Setoid {
        relational_from_blocks("REL3", 3, &[vec![0, 1], vec![2]]).unwrap()
    }

    fn chain3() -> Setoid {
        free_setoid("CHAIN3", 3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn two(x: &Setoid) -> CoherentDiagram {
        CoherentDiagram::constant(&discrete(2), x)
    }

    #[test]
    fn limit_examples() {
        let y = CoherentDiagram::point(&rel3());
        let l = limit_over(&y);
        assert_eq!(l.setoid.size0(), 3);
        l.counit.validate().unwrap();
        assert!(is_iso(&l.counit.comps[0]).holds);
        let t = CoherentDiagram::constant(&pair(), &Setoid::terminal());
        assert_eq!(limit_over(&t).setoid.size0(), 1);
        let l2 = limit_over(&two(&rel3()));
        assert_eq!(l2.setoid.quotient().size, 4);
        let lc = limit_over(&CoherentDiagram::constant(&span(), &chain3()));
        lc.counit.validate().unwrap();
    }

    #[test]
    fn limit_factorizer() {
        let y = CoherentDiagram::constant(&pair(), &rel3());
        let l = limit_over(&y);
        let cone = DiagMor::by_search(&CoherentDiagram::constant(&pair(), &rel3()), &y, vec![MorRep::identity(&rel3()); 2]).unwrap();
        let f = l.factor(&rel3(), &cone).unwrap();
        f.validate().unwrap();
        let back = compose_diag_unchecked(&DiagMor::constant(&pair(), &f), &l.counit);
        assert!(equal_diag(&back, &cone).unwrap().is_some());
    }

    #[test]
    fn colimit_examples() {
        let c = colimit_over(&CoherentDiagram::point(&rel3()));
        c.unit.validate().unwrap();
        assert!(is_iso(&c.unit.comps[0]).holds);
        let t = colimit_over(&CoherentDiagram::constant(&pair(), &Setoid::terminal()));
        assert_eq!(t.setoid.quotient().size, 1);
        let d = colimit_over(&two(&Setoid::terminal()));
        assert_eq!(d.setoid.quotient().size, 2);
    }

    #[test]
    fn colimit_factorizer() {
        let x = CoherentDiagram::constant(&pair(), &chain3());
        let c = colimit_over(&x);
        let w = Setoid::terminal();
        let cocone = DiagMor::by_search(&x, &CoherentDiagram::constant(&pair(), &w), vec![
            MorRep::by_search(chain3(), w.clone(), vec![0; 3]).unwrap();
            2
        ])
        .unwrap();
        let f = c.factor(&w, &cocone);
        f.validate().unwrap();
        let back = compose_diag_unchecked(&c.unit, &DiagMor::constant(&pair(), &f));
        assert!(equal_diag(&back, &cocone).unwrap().is_some());
    }

    #[test]
    fn colimit_pi0() {
        for a in [one(), pair(), span(), square(), discrete(3)] {
            let c = colimit_over(&CoherentDiagram::constant(&a, &Setoid::terminal()));
            let q = c.setoid.quotient();
            let (n, comp) = pi0(&a);
            assert_eq!(q.size, n);
            assert_eq!(q.class, comp);
        }
    }

    #[test]
    fn kan_examples() {
        let u = Functor::to_terminal(&discrete(2));
        let rk = right_kan(&u, &two(&rel3())).unwrap();
        assert_eq!(rk.value.objs[0].quotient().size, 4);
        rk.counit.validate().unwrap();
        let lk = left_kan(&u, &two(&rel3())).unwrap();
        assert_eq!(lk.value.objs[0].quotient().size, 4);
        lk.unit.validate().unwrap();

        let ar = arrow_cat();
        let at1 = Functor::point(&ar, 1);
        let r = right_kan(&at1, &CoherentDiagram::point(&Setoid::terminal())).unwrap();
        assert_eq!(r.value.objs[0].quotient().size, 1);
        let at0 = Functor::point(&ar, 0);
        let l = left_kan(&at0, &CoherentDiagram::point(&Setoid::terminal())).unwrap();
        assert_eq!(l.value.objs[1].quotient().size, 1);
        l.value.validate().unwrap();
        r.value.validate().unwrap();
    }

    #[test]
    fn kan_identity_is_iso() {
        let x = CoherentDiagram::constant(&arrow_cat(), &chain3());
        let id = Functor::identity(&arrow_cat());
        let lk = left_kan(&id, &x).unwrap();
        lk.unit.validate().unwrap();
        assert!(is_iso_diag(&lk.unit).holds);
        let rk = right_kan(&id, &x).unwrap();
        rk.counit.validate().unwrap();
        assert!(is_iso_diag(&rk.counit).holds);
    }

    #[test]
    fn triangles() {
        let u = Functor::point(&arrow_cat(), 0);
        let x = CoherentDiagram::point(&rel3());
        let y = CoherentDiagram::constant(&arrow_cat(), &chain3());
        assert!(left_triangles(&u, &x, &y).unwrap().holds);
        assert!(right_triangles(&u, &x, &y).unwrap().holds);
        let v = Functor::to_terminal(&pair());
        let z = CoherentDiagram::constant(&pair(), &tab2());
        let w = CoherentDiagram::point(&rel3());
        assert!(left_triangles(&v, &z, &w).unwrap().holds);
        assert!(right_triangles(&v, &z, &w).unwrap().holds);
    }

    #[test]
    fn mates() {
        let ar = arrow_cat();
        let sq = Square::comma(&Functor::point(&ar, 0), &Functor::point(&ar, 1)).unwrap();
        let x = CoherentDiagram::point(&rel3());
        assert!(check_mate_left(&sq, &x).holds);
        assert!(check_mate_right(&sq, &x).holds);
        let u = Functor::to_terminal(&pair());
        let sq = Square::comma(&u, &Functor::identity(&one())).unwrap();
        assert!(check_mate_left(&sq, &CoherentDiagram::constant(&pair(), &chain3())).holds);
        let sq = Square::comma(&Functor::identity(&one()), &u).unwrap();
        assert!(check_mate_right(&sq, &CoherentDiagram::constant(&pair(), &rel3())).holds);
    }

    #[test]
    fn fast_paths() {
        let u = Functor::to_terminal(&discrete(2));
        assert!(fast_left_agrees(&u, &two(&chain3())).unwrap().holds);
        assert!(fast_right_agrees(&u, &two(&rel3())).unwrap().holds);
        let v = Functor::to_terminal(&pair());
        let x = CoherentDiagram::constant(&pair(), &rel3());
        assert!(fast_left_agrees(&v, &x).unwrap().holds);
        assert!(fast_right_agrees(&v, &x).unwrap().holds);
    }

    #[test]
    fn der1_and_der5() {
        let (ab, z) = glue(&arrow_cat(), &pair(), &CoherentDiagram::constant(&arrow_cat(), &rel3()), &CoherentDiagram::constant(&pair(), &chain3())).unwrap();
        z.validate().unwrap();
        let (_, i, j) = coproduct(&arrow_cat(), &pair());
        assert!(*ab == *i.cod);
        assert!(z.restrict_unchecked(&i).same_data(&CoherentDiagram::constant(&arrow_cat(), &rel3())));
        assert!(z.restrict_unchecked(&j).same_data(&CoherentDiagram::constant(&pair(), &chain3())));

        let a = arrow_cat();
        let x = CoherentDiagram::constant(&a, &chain3());
        let t = CoherentDiagram::constant(&a, &Setoid::terminal());
        let c = MorRep::by_search(chain3(), Setoid::terminal(), vec![0; 3]).unwrap();
        let f = DiagMor::by_search(&x, &t, vec![c.clone(), c]).unwrap();
        let (_, lift) = der5_lift(&f);
        lift.validate().unwrap();
        let g = underlying_mor(&a, &lift);
        g.validate().unwrap();
        assert!(g.dom.same_data(&x) && g.cod.same_data(&t));
        assert!(equal_diag(&g, &f).unwrap().is_some());
    }

    #[test]
    fn axiom_suite_on_default_corpus() {
        let c = Corpus::default_corpus();
        let t = std::time::Instant::now();
        let recs = verify_derivator_axioms(&c);
        let bad: Vec<_> = recs.iter().filter(|r| !r.holds).map(|r| r.tsv()).collect();
        assert!(bad.is_empty(), "{:#?}", bad);
        eprintln!("{} records in {:?}", recs.len(), t.elapsed());
    }

    #[test]
    fn corrupted_diagram_fails_validation() {
        let mut c = Corpus::default_corpus();
        let d = c.diagrams.get_mut("REL3_PAIR").unwrap();
        let k = *d.comp.keys().next().unwrap();
        d.comp.get_mut(&k).unwrap()[0] = Wit::Rel(2, 2);
        let recs = verify_derivator_axioms(&c);
        assert_eq!(recs.len(), 1);
        assert!(!recs[0].holds);
    }

    #[test]
    fn distributivity() {
        let u = Functor::to_terminal(&pair());
        let x = CoherentDiagram::constant(&pair(), &Setoid::terminal());
        let y = CoherentDiagram::point(&rel3());
        assert!(distributivity_check(&x, &y, &u).unwrap().holds);
        let d = Functor::to_terminal(&discrete(2));
        assert!(distributivity_check(&two(&chain3()), &y, &d).unwrap().holds);
    }

    #[test]
    fn reflections_on_limits_and_colimits() {
        let y = CoherentDiagram::constant(&pair(), &rel3());
        assert!(reflection_vs_limit(&y).0);
        assert!(reflection_vs_colimit(&y).0);
        let e = embed_setdiagram(&SetDiagram::constant(&span(), 2)).unwrap();
        assert!(reflection_vs_colimit(&e).0);
    }
}
