//! Named collections of shapes, setoids, functors, diagrams and morphisms.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::coherent::{CoherentDiagram, CoherentError, DiagMor};
use crate::fincat::{arrow_cat, discrete, one, pair, span, square, Cat, CatError, Functor};
use crate::setoid::{free_setoid, relational_from_blocks, tab2, MorRep, Setoid};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("{entry}: {source}")]
    Invalid { entry: String, source: CoherentError },
}

impl CorpusError {
    fn invalid(entry: &str, e: impl Into<CoherentError>) -> Self {
        CorpusError::Invalid { entry: entry.to_string(), source: e.into() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub shapes: BTreeMap<String, Cat>,
    pub setoids: BTreeMap<String, Setoid>,
    pub functors: BTreeMap<String, Functor>,
    pub diagrams: BTreeMap<String, CoherentDiagram>,
    pub morphisms: BTreeMap<String, DiagMor>,
    pub notes: Vec<String>,
}

fn insert<T>(map: &mut BTreeMap<String, T>, name: &str, value: T) -> Result<(), CorpusError> {
    if map.contains_key(name) {
        return Err(CorpusError::Duplicate(name.to_string()));
    }
    map.insert(name.to_string(), value);
    Ok(())
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    fn taken(&self, name: &str) -> bool {
        self.shapes.contains_key(name)
            || self.setoids.contains_key(name)
            || self.functors.contains_key(name)
            || self.diagrams.contains_key(name)
            || self.morphisms.contains_key(name)
    }

    fn fresh(&self, name: &str) -> Result<(), CorpusError> {
        if self.taken(name) {
            Err(CorpusError::Duplicate(name.to_string()))
        } else {
            Ok(())
        }
    }

    pub fn add_shape(&mut self, c: Cat) -> Result<(), CorpusError> {
        let name = c.name().to_string();
        self.fresh(&name)?;
        c.validate().map_err(|e| CorpusError::invalid(&name, e))?;
        insert(&mut self.shapes, &name, c)
    }

    pub fn add_setoid(&mut self, x: Setoid) -> Result<(), CorpusError> {
        let name = x.name().to_string();
        self.fresh(&name)?;
        insert(&mut self.setoids, &name, x)
    }

    pub fn add_functor(&mut self, name: &str, u: Functor) -> Result<(), CorpusError> {
        self.fresh(name)?;
        self.shape(u.dom.name())?;
        self.shape(u.cod.name())?;
        u.validate().map_err(|e| CorpusError::invalid(name, e))?;
        insert(&mut self.functors, name, u)
    }

    /// Adds a diagram given by point tables over named setoids.
    pub fn add_diagram(&mut self, name: &str, shape: &str, objs: &[&str], maps: Vec<Vec<usize>>) -> Result<(), CorpusError> {
        self.fresh(name)?;
        let s = self.shape(shape)?.clone();
        let objs = objs.iter().map(|o| self.setoid(o).cloned()).collect::<Result<Vec<_>, _>>()?;
        let d = CoherentDiagram::by_search(name, &s, objs, maps).map_err(|e| CorpusError::invalid(name, e))?;
        insert(&mut self.diagrams, name, d)
    }

    /// Adds an already built diagram; it is validated first.
    pub fn add_built_diagram(&mut self, d: CoherentDiagram) -> Result<(), CorpusError> {
        let name = d.name.clone();
        self.fresh(&name)?;
        d.validate().map_err(|e| CorpusError::invalid(&name, e))?;
        insert(&mut self.diagrams, &name, d)
    }

    /// The constant diagram at a named setoid.
    pub fn add_constant(&mut self, name: &str, shape: &str, setoid: &str) -> Result<(), CorpusError> {
        let s = self.shape(shape)?.clone();
        let objs = vec![setoid; s.n_objects()];
        let maps = s.arrows().iter().map(|_| (0..self.setoid(setoid).map(|x| x.size0()).unwrap_or(0)).collect()).collect();
        self.add_diagram(name, shape, &objs, maps)
    }

    /// Adds a morphism given by component point tables.
    pub fn add_morphism(&mut self, name: &str, dom: &str, cod: &str, comps: Vec<Vec<usize>>) -> Result<(), CorpusError> {
        self.fresh(name)?;
        let (x, y) = (self.diagram(dom)?.clone(), self.diagram(cod)?.clone());
        if !std::sync::Arc::ptr_eq(&x.shape, &y.shape) && *x.shape != *y.shape {
            return Err(CorpusError::invalid(name, CoherentError::Shape(format!("{} and {} have different shapes", dom, cod))));
        }
        if comps.len() != x.objs.len() {
            return Err(CorpusError::invalid(name, CoherentError::Shape("wrong number of components".into())));
        }
        let mut reps = Vec::with_capacity(comps.len());
        for (o, f0) in comps.into_iter().enumerate() {
            let (a, b) = (&x.objs[o], &y.objs[o]);
            if f0.len() != a.size0() || f0.iter().any(|&p| p >= b.size0()) {
                return Err(CorpusError::invalid(name, CoherentError::Mismatch(format!("component {} has a bad table", o))));
            }
            let q = a.quotient();
            if (0..a.size0()).any(|p| b.related(f0[q.rep[q.class[p]]], f0[p]).is_none()) {
                return Err(CorpusError::invalid(name, CoherentError::Mismatch(format!("component {} does not respect ∼", o))));
            }
            reps.push(MorRep::by_search(a.clone(), b.clone(), f0).map_err(|e| CorpusError::invalid(name, e))?);
        }
        let f = DiagMor::by_search(&x, &y, reps).map_err(|e| CorpusError::invalid(name, e))?;
        insert(&mut self.morphisms, name, f)
    }

    pub fn shape(&self, name: &str) -> Result<&Cat, CorpusError> {
        self.shapes.get(name).ok_or_else(|| CorpusError::Unknown { kind: "shape", name: name.to_string() })
    }

    pub fn setoid(&self, name: &str) -> Result<&Setoid, CorpusError> {
        self.setoids.get(name).ok_or_else(|| CorpusError::Unknown { kind: "setoid", name: name.to_string() })
    }

    pub fn functor(&self, name: &str) -> Result<&Functor, CorpusError> {
        self.functors.get(name).ok_or_else(|| CorpusError::Unknown { kind: "functor", name: name.to_string() })
    }

    pub fn diagram(&self, name: &str) -> Result<&CoherentDiagram, CorpusError> {
        self.diagrams.get(name).ok_or_else(|| CorpusError::Unknown { kind: "diagram", name: name.to_string() })
    }

    pub fn morphism(&self, name: &str) -> Result<&DiagMor, CorpusError> {
        self.morphisms.get(name).ok_or_else(|| CorpusError::Unknown { kind: "morphism", name: name.to_string() })
    }

    /// Diagrams over the given shape, by name.
    pub fn diagrams_over(&self, shape: &Cat) -> Vec<(&str, &CoherentDiagram)> {
        self.diagrams.iter().filter(|(_, d)| *d.shape == **shape).map(|(n, d)| (n.as_str(), d)).collect()
    }

    /// Functors whose codomain is discrete.
    pub fn discrete_target_functors(&self) -> Vec<(&str, &Functor)> {
        self.functors.iter().filter(|(_, u)| u.cod.is_discrete()).map(|(n, u)| (n.as_str(), u)).collect()
    }

    /// Re-checks every entry.
    pub fn validate(&self) -> Result<(), CorpusError> {
        for (n, c) in &self.shapes {
            c.validate().map_err(|e| CorpusError::invalid(n, e))?;
        }
        for (n, u) in &self.functors {
            u.validate().map_err(|e| CorpusError::invalid(n, e))?;
        }
        for (n, d) in &self.diagrams {
            d.validate().map_err(|e| CorpusError::invalid(n, e))?;
        }
        for (n, f) in &self.morphisms {
            f.validate().map_err(|e| CorpusError::invalid(n, e))?;
        }
        Ok(())
    }

    /// The bundled corpus.
    pub fn default_corpus() -> Corpus {
        build_default().expect("the default corpus is well formed")
    }
}

pub fn rel3() -> Setoid {
    relational_from_blocks("REL3", 3, &[vec![0, 1], vec![2]]).expect("REL3")
}

pub fn chain3() -> Setoid {
    free_setoid("CHAIN3", 3, &[(0, 1), (1, 2)]).expect("CHAIN3")
}

pub fn full2() -> Setoid {
    Setoid::full("FULL2", 2)
}

fn build_default() -> Result<Corpus, CorpusError> {
    let mut c = Corpus::new();
    for s in [one(), arrow_cat(), pair(), span(), square(), discrete(2), discrete(3)] {
        c.add_shape(s)?;
    }
    for x in [Setoid::terminal(), Setoid::empty(), rel3(), chain3(), full2(), tab2()] {
        c.add_setoid(x)?;
    }

    let sh = |c: &Corpus, n: &str| c.shape(n).cloned();
    for s in ["ONE", "ARROW", "PAIR", "SPAN", "SQUARE", "DISC2", "DISC3"] {
        let a = sh(&c, s)?;
        c.add_functor(&format!("{}_ONE", s), Functor::to_terminal(&a))?;
    }
    let (one_, ar, pr, d2, d3) = (sh(&c, "ONE")?, sh(&c, "ARROW")?, sh(&c, "PAIR")?, sh(&c, "DISC2")?, sh(&c, "DISC3")?);
    let f = |dom: &Cat, cod: &Cat, obj: Vec<usize>, arr: Vec<usize>| Functor::new(dom.clone(), cod.clone(), obj, arr);
    fn fe(n: &str) -> impl Fn(CatError) -> CorpusError + '_ {
        move |e| CorpusError::invalid(n, e)
    }
    c.add_functor("at0_ARROW", f(&one_, &ar, vec![0], vec![1]).map_err(fe("at0_ARROW"))?)?;
    c.add_functor("at1_ARROW", f(&one_, &ar, vec![1], vec![2]).map_err(fe("at1_ARROW"))?)?;
    c.add_functor("at0_PAIR", f(&one_, &pr, vec![0], vec![2]).map_err(fe("at0_PAIR"))?)?;
    c.add_functor("PAIR_ARROW", f(&pr, &ar, vec![0, 1], vec![0, 0, 1, 2]).map_err(fe("PAIR_ARROW"))?)?;
    c.add_functor("DISC2_ARROW", f(&d2, &ar, vec![0, 1], vec![1, 2]).map_err(fe("DISC2_ARROW"))?)?;
    c.add_functor("DISC2_PAIR", f(&d2, &pr, vec![0, 1], vec![2, 3]).map_err(fe("DISC2_PAIR"))?)?;
    c.add_functor("DISC3_DISC2", f(&d3, &d2, vec![0, 0, 1], vec![0, 0, 1]).map_err(fe("DISC3_DISC2"))?)?;
    c.add_functor("ARROW_id", Functor::identity(&ar))?;
    c.add_functor("DISC2_id", Functor::identity(&d2))?;
    c.add_functor("at0_DISC2", f(&one_, &d2, vec![0], vec![0]).map_err(fe("at0_DISC2"))?)?;

    for s in ["ONE", "ARROW", "PAIR", "SPAN", "SQUARE", "DISC2", "DISC3"] {
        c.add_constant(&format!("TERM_{}", s), s, "TERM")?;
    }
    c.add_constant("REL3_ONE", "ONE", "REL3")?;
    c.add_constant("CHAIN3_ONE", "ONE", "CHAIN3")?;
    c.add_constant("TAB2_ONE", "ONE", "TAB2")?;
    c.add_constant("FULL2_ONE", "ONE", "FULL2")?;
    c.add_constant("EMPTY_ONE", "ONE", "EMPTY")?;
    // the identity of the point acts by a nontrivial map
    c.add_diagram("REL3_TWIST", "ONE", &["REL3"], vec![vec![1, 0, 2]])?;
    c.add_constant("CHAIN3_ARROW", "ARROW", "CHAIN3")?;
    c.add_diagram("COLLAPSE_ARROW", "ARROW", &["REL3", "TERM"], vec![vec![0, 0, 0], vec![0, 1, 2], vec![0]])?;
    c.add_diagram("REL3_PAIR", "PAIR", &["REL3", "REL3"], vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2], vec![0, 1, 2]])?;
    c.add_diagram("MIX_DISC2", "DISC2", &["REL3", "CHAIN3"], vec![vec![0, 1, 2], vec![0, 1, 2]])?;
    c.add_diagram(
        "REL3_SPAN",
        "SPAN",
        &["REL3", "TERM", "CHAIN3"],
        vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 1, 2], vec![0], vec![0, 1, 2]],
    )?;
    c.add_constant("TAB2_PAIR", "PAIR", "TAB2")?;

    c.add_morphism("id_REL3_ONE", "REL3_ONE", "REL3_ONE", vec![vec![0, 1, 2]])?;
    c.add_morphism("id_CHAIN3_ARROW", "CHAIN3_ARROW", "CHAIN3_ARROW", vec![vec![0, 1, 2]; 2])?;
    c.add_morphism("bang_CHAIN3_ARROW", "CHAIN3_ARROW", "TERM_ARROW", vec![vec![0; 3]; 2])?;
    c.add_morphism("bang_REL3_PAIR", "REL3_PAIR", "TERM_PAIR", vec![vec![0; 3]; 2])?;
    c.add_morphism("REL3_FULL2", "REL3_ONE", "FULL2_ONE", vec![vec![0, 0, 1]])?;
    c.add_morphism("TWIST_REL3", "REL3_TWIST", "REL3_ONE", vec![vec![0, 1, 2]])?;
    c.add_morphism("COLLAPSE_TERM", "COLLAPSE_ARROW", "TERM_ARROW", vec![vec![0; 3], vec![0]])?;
    c.add_morphism("TERM_REL3", "TERM_ONE", "REL3_ONE", vec![vec![2]])?;
    // two points of one class
    c.add_morphism("TERM_REL3_a", "TERM_ONE", "REL3_ONE", vec![vec![0]])?;
    c.add_morphism("TERM_REL3_b", "TERM_ONE", "REL3_ONE", vec![vec![1]])?;
    c.add_morphism("bang_MIX", "MIX_DISC2", "TERM_DISC2", vec![vec![0; 3]; 2])?;
    c.add_morphism("TAB2_swap", "TAB2_PAIR", "TAB2_PAIR", vec![vec![1, 0]; 2])?;
    c.notes.push("default corpus".into());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_corpus_loads() {
        let c = Corpus::default_corpus();
        c.validate().unwrap();
        assert_eq!(c.shapes.len(), 7);
        assert!(c.diagram("REL3_TWIST").unwrap().unit[0][0] != rel3().r(0));
        assert!(!c.discrete_target_functors().is_empty());
    }

    #[test]
    fn names_are_unique() {
        let mut c = Corpus::default_corpus();
        assert!(matches!(c.add_setoid(rel3()), Err(CorpusError::Duplicate(_))));
        assert!(matches!(c.add_constant("REL3_ONE", "ONE", "REL3"), Err(CorpusError::Duplicate(_))));
    }

    #[test]
    fn bad_tables_rejected() {
        let mut c = Corpus::default_corpus();
        // 0 ∼ 1 in REL3 but 0 and 2 are unrelated
        let r = c.add_diagram("BAD", "ARROW", &["REL3", "REL3"], vec![vec![0, 2, 2], vec![0, 1, 2], vec![0, 1, 2]]);
        assert!(matches!(r, Err(CorpusError::Invalid { .. })));
        let r = c.add_morphism("BADM", "REL3_ONE", "REL3_ONE", vec![vec![0, 2, 2]]);
        assert!(matches!(r, Err(CorpusError::Invalid { .. })));
    }
}
