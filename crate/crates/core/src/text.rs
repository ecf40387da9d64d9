//! A line-oriented text format for corpora.
//!
//! Blocks start with a header line and close with `end`; `#` starts a comment.
//!
//! ```text
//! category PAIR
//! objects 0 1
//! arrow f 0 1
//! arrow g 0 1
//! end
//!
//! setoid REL3 relation 3
//! pair 0 1
//! pair 1 0
//! end
//!
//! functor at0_PAIR ONE PAIR
//! obj * 0
//! end
//!
//! diagram REL3_PAIR PAIR
//! at 0 REL3
//! at 1 REL3
//! map f 0 1 2
//! map g 1 0 2
//! map id_0 0 1 2
//! map id_1 0 1 2
//! end
//!
//! morphism bang_REL3_PAIR REL3_PAIR TERM_PAIR
//! at 0 0 0 0
//! at 1 0 0 0
//! end
//! ```
//!
//! Categories list their non-identity arrows; `compose g f h` records
//! `g ∘ f = h`, and every composable pair of non-identity arrows needs one.
//! Setoids are `relation` (pairs, reflexive pairs implicit), `free` (edges)
//! or `table` (`wit s t v`, `refl x w`, `mult a b c`). Coherence witnesses
//! of diagrams and morphisms are recomputed on load.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::{Corpus, CorpusError};
use crate::fincat::{Arrow, CatError, FinCat, FinSet, Functor};
use crate::setoid::{free_setoid, relational_setoid, Setoid, SetoidError, Tabular};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: category `{name}`: {source}")]
    Category { line: usize, name: String, source: CatError },
    #[error("line {line}: setoid `{name}`: {source}")]
    Setoid { line: usize, name: String, source: SetoidError },
    #[error("line {line}: {source}")]
    Corpus { line: usize, source: CorpusError },
    #[error("cannot write {0}")]
    Unsupported(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> TextError {
    TextError::Syntax { line, msg: msg.into() }
}

struct Line {
    no: usize,
    words: Vec<String>,
}

struct Block {
    header: Line,
    body: Vec<Line>,
}

fn blocks(input: &str) -> Result<Vec<Block>, TextError> {
    let mut out = Vec::new();
    let mut cur: Option<Block> = None;
    for (i, raw) in input.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let words: Vec<String> = text.split_whitespace().map(String::from).collect();
        if words.is_empty() {
            continue;
        }
        let line = Line { no: i + 1, words };
        match cur.take() {
            None => {
                if line.words[0] == "end" {
                    return Err(syntax(line.no, "`end` outside a block"));
                }
                cur = Some(Block { header: line, body: Vec::new() });
            }
            Some(mut b) => {
                if line.words[0] == "end" {
                    if line.words.len() != 1 {
                        return Err(syntax(line.no, "`end` takes no arguments"));
                    }
                    out.push(b);
                } else {
                    b.body.push(line);
                    cur = Some(b);
                }
            }
        }
    }
    if let Some(b) = cur {
        return Err(syntax(b.header.no, format!("block `{}` is not closed", b.header.words.join(" "))));
    }
    if out.is_empty() {
        return Err(TextError::Empty);
    }
    Ok(out)
}

fn num(l: &Line, k: usize) -> Result<usize, TextError> {
    let w = l.words.get(k).ok_or_else(|| syntax(l.no, "missing argument"))?;
    w.parse().map_err(|_| syntax(l.no, format!("`{}` is not a number", w)))
}

fn nums(l: &Line, from: usize) -> Result<Vec<usize>, TextError> {
    (from..l.words.len()).map(|k| num(l, k)).collect()
}

fn arity(l: &Line, n: usize) -> Result<(), TextError> {
    if l.words.len() != n {
        return Err(syntax(l.no, format!("`{}` expects {} arguments", l.words[0], n - 1)));
    }
    Ok(())
}

fn unknown(l: &Line) -> TextError {
    syntax(l.no, format!("unexpected `{}`", l.words[0]))
}

/// Parses a single category block body.
fn category(name: &str, b: &Block) -> Result<FinCat, TextError> {
    let cat_err = |line, source| TextError::Category { line, name: name.to_string(), source };
    let mut labels: Option<Vec<String>> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut triples: Vec<(&Line, [String; 3])> = Vec::new();
    for l in &b.body {
        match l.words[0].as_str() {
            "objects" => {
                if labels.is_some() {
                    return Err(syntax(l.no, "objects given twice"));
                }
                labels = Some(l.words[1..].to_vec());
            }
            "arrow" => {
                arity(l, 4)?;
                let objs = labels.as_ref().ok_or_else(|| syntax(l.no, "arrow before objects"))?;
                let pos = |w: &str| {
                    objs.iter().position(|o| o == w).ok_or_else(|| syntax(l.no, format!("unknown object `{}`", w)))
                };
                arrows.push(Arrow { src: pos(&l.words[2])?, dst: pos(&l.words[3])?, label: l.words[1].clone() });
            }
            "compose" => {
                arity(l, 4)?;
                triples.push((l, [l.words[1].clone(), l.words[2].clone(), l.words[3].clone()]));
            }
            _ => return Err(unknown(l)),
        }
    }
    let labels = labels.ok_or_else(|| syntax(b.header.no, "category without objects"))?;
    let objects = FinSet::labelled(labels).map_err(|e| cat_err(b.header.no, e))?;
    let n = objects.size();
    let k = arrows.len();
    let mut identities = Vec::with_capacity(n);
    for o in 0..n {
        identities.push(arrows.len());
        arrows.push(Arrow { src: o, dst: o, label: format!("id_{}", objects.label(o)) });
    }
    let mut by_label = HashMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if by_label.insert(a.label.clone(), i).is_some() {
            return Err(syntax(b.header.no, format!("duplicate arrow label `{}`", a.label)));
        }
    }
    let mut compose = HashMap::new();
    for (l, [g, f, h]) in &triples {
        let find = |w: &str| by_label.get(w).copied().ok_or_else(|| syntax(l.no, format!("unknown arrow `{}`", w)));
        let (gi, fi, hi) = (find(g)?, find(f)?, find(h)?);
        if gi >= k || fi >= k {
            return Err(syntax(l.no, "composites of identities are implicit"));
        }
        if compose.insert((gi, fi), hi).is_some() {
            return Err(syntax(l.no, format!("composite {} ∘ {} given twice", g, f)));
        }
    }
    for (i, a) in arrows.iter().enumerate() {
        compose.insert((identities[a.dst], i), i);
        compose.insert((i, identities[a.src]), i);
    }
    FinCat::from_tables(name, objects, arrows, identities, compose).map_err(|e| cat_err(b.header.no, e))
}

fn setoid(b: &Block) -> Result<Setoid, TextError> {
    let h = &b.header;
    arity(h, 4)?;
    let name = h.words[1].clone();
    let n = num(h, 3)?;
    let set_err = |source| TextError::Setoid { line: h.no, name: name.clone(), source };
    match h.words[2].as_str() {
        "relation" => {
            let mut pairs: Vec<(usize, usize)> = (0..n).map(|x| (x, x)).collect();
            for l in &b.body {
                if l.words[0] != "pair" {
                    return Err(unknown(l));
                }
                arity(l, 3)?;
                pairs.push((num(l, 1)?, num(l, 2)?));
            }
            relational_setoid(name.clone(), n, &pairs).map_err(set_err)
        }
        "free" => {
            let mut edges = Vec::new();
            for l in &b.body {
                if l.words[0] != "edge" {
                    return Err(unknown(l));
                }
                arity(l, 3)?;
                edges.push((num(l, 1)?, num(l, 2)?));
            }
            free_setoid(name.clone(), n, &edges).map_err(set_err)
        }
        "table" => {
            let mut tab = Tabular { n0: n, s: vec![], t: vec![], r: vec![usize::MAX; n], v: vec![], m: HashMap::new() };
            for l in &b.body {
                match l.words[0].as_str() {
                    "wit" => {
                        arity(l, 4)?;
                        tab.s.push(num(l, 1)?);
                        tab.t.push(num(l, 2)?);
                        tab.v.push(num(l, 3)?);
                    }
                    "refl" => {
                        arity(l, 3)?;
                        let x = num(l, 1)?;
                        if x >= n {
                            return Err(syntax(l.no, format!("point {} out of range", x)));
                        }
                        tab.r[x] = num(l, 2)?;
                    }
                    "mult" => {
                        arity(l, 4)?;
                        if tab.m.insert((num(l, 1)?, num(l, 2)?), num(l, 3)?).is_some() {
                            return Err(syntax(l.no, "product given twice"));
                        }
                    }
                    _ => return Err(unknown(l)),
                }
            }
            if let Some(x) = tab.r.iter().position(|&w| w == usize::MAX) {
                return Err(syntax(h.no, format!("no reflexivity witness at {}", x)));
            }
            Setoid::tabular(name.clone(), tab).map_err(set_err)
        }
        other => Err(syntax(h.no, format!("unknown setoid kind `{}`", other))),
    }
}

fn object_index(c: &FinCat, l: &Line, w: &str) -> Result<usize, TextError> {
    (0..c.n_objects())
        .find(|&o| c.object_label(o) == w)
        .ok_or_else(|| syntax(l.no, format!("`{}` is not an object of {}", w, c.name())))
}

fn arrow_index(c: &FinCat, l: &Line, w: &str) -> Result<usize, TextError> {
    (0..c.n_arrows())
        .find(|&i| c.arrow(i).label == w)
        .ok_or_else(|| syntax(l.no, format!("`{}` is not an arrow of {}", w, c.name())))
}

fn functor(corpus: &Corpus, b: &Block) -> Result<(String, Functor), TextError> {
    let h = &b.header;
    arity(h, 4)?;
    let ce = |source| TextError::Corpus { line: h.no, source };
    let dom = corpus.shape(&h.words[2]).map_err(ce)?.clone();
    let cod = corpus.shape(&h.words[3]).map_err(ce)?.clone();
    let mut obj = vec![None; dom.n_objects()];
    let mut arr = vec![None; dom.n_arrows()];
    for l in &b.body {
        arity(l, 3)?;
        match l.words[0].as_str() {
            "obj" => obj[object_index(&dom, l, &l.words[1])?] = Some(object_index(&cod, l, &l.words[2])?),
            "arr" => arr[arrow_index(&dom, l, &l.words[1])?] = Some(arrow_index(&cod, l, &l.words[2])?),
            _ => return Err(unknown(l)),
        }
    }
    let obj = obj
        .into_iter()
        .enumerate()
        .map(|(o, x)| x.ok_or_else(|| syntax(h.no, format!("no image for object `{}`", dom.object_label(o)))))
        .collect::<Result<Vec<_>, _>>()?;
    let arr = arr
        .into_iter()
        .enumerate()
        .map(|(i, x)| match x {
            Some(y) => Ok(y),
            None if dom.is_identity(i) => Ok(cod.id(obj[dom.src(i)])),
            None => Err(syntax(h.no, format!("no image for arrow `{}`", dom.arrow(i).label))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let name = h.words[1].clone();
    let u = Functor::new(dom, cod, obj, arr).map_err(|source| TextError::Category { line: h.no, name: name.clone(), source })?;
    Ok((name, u))
}

fn diagram(corpus: &mut Corpus, b: &Block) -> Result<(), TextError> {
    let h = &b.header;
    arity(h, 3)?;
    let ce = |source| TextError::Corpus { line: h.no, source };
    let shape = corpus.shape(&h.words[2]).map_err(ce)?.clone();
    let mut objs: Vec<Option<String>> = vec![None; shape.n_objects()];
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; shape.n_arrows()];
    for l in &b.body {
        match l.words[0].as_str() {
            "at" => {
                arity(l, 3)?;
                objs[object_index(&shape, l, &l.words[1])?] = Some(l.words[2].clone());
            }
            "map" => {
                if l.words.len() < 2 {
                    return Err(syntax(l.no, "`map` needs an arrow"));
                }
                maps[arrow_index(&shape, l, &l.words[1])?] = Some(nums(l, 2)?);
            }
            _ => return Err(unknown(l)),
        }
    }
    let objs = objs
        .into_iter()
        .enumerate()
        .map(|(o, x)| x.ok_or_else(|| syntax(h.no, format!("no setoid at `{}`", shape.object_label(o)))))
        .collect::<Result<Vec<_>, _>>()?;
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| syntax(h.no, format!("no map for `{}`", shape.arrow(i).label))))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&str> = objs.iter().map(String::as_str).collect();
    corpus.add_diagram(&h.words[1], shape.name(), &refs, maps).map_err(ce)
}

fn morphism(corpus: &mut Corpus, b: &Block) -> Result<(), TextError> {
    let h = &b.header;
    arity(h, 4)?;
    let ce = |source| TextError::Corpus { line: h.no, source };
    let shape = corpus.diagram(&h.words[2]).map_err(ce)?.shape.clone();
    let mut comps: Vec<Option<Vec<usize>>> = vec![None; shape.n_objects()];
    for l in &b.body {
        if l.words[0] != "at" || l.words.len() < 2 {
            return Err(unknown(l));
        }
        comps[object_index(&shape, l, &l.words[1])?] = Some(nums(l, 2)?);
    }
    let comps = comps
        .into_iter()
        .enumerate()
        .map(|(o, x)| x.ok_or_else(|| syntax(h.no, format!("no component at `{}`", shape.object_label(o)))))
        .collect::<Result<Vec<_>, _>>()?;
    corpus.add_morphism(&h.words[1], &h.words[2], &h.words[3], comps).map_err(ce)
}

/// Parses a corpus. Entries may refer only to entries defined above them.
pub fn parse_corpus(input: &str) -> Result<Corpus, TextError> {
    let mut corpus = Corpus::new();
    for b in blocks(input)? {
        let h = &b.header;
        let ce = |source| TextError::Corpus { line: h.no, source };
        match h.words[0].as_str() {
            "category" => {
                arity(h, 2)?;
                let c = category(&h.words[1], &b)?;
                corpus.add_shape(std::sync::Arc::new(c)).map_err(ce)?;
            }
            "setoid" => {
                let x = setoid(&b)?;
                corpus.add_setoid(x).map_err(ce)?;
            }
            "functor" => {
                let (name, u) = functor(&corpus, &b)?;
                corpus.add_functor(&name, u).map_err(ce)?;
            }
            "diagram" => diagram(&mut corpus, &b)?,
            "morphism" => morphism(&mut corpus, &b)?,
            "note" => {
                corpus.notes.push(h.words[1..].join(" "));
                if let Some(l) = b.body.first() {
                    return Err(unknown(l));
                }
            }
            other => return Err(syntax(h.no, format!("unknown block `{}`", other))),
        }
    }
    Ok(corpus)
}

fn check_word(w: &str, what: &str) -> Result<(), TextError> {
    if w.is_empty() || w.contains(char::is_whitespace) || w.contains('#') || w == "end" {
        return Err(TextError::Unsupported(format!("{} label `{}`", what, w)));
    }
    Ok(())
}

/// Writes one category block.
pub fn dump_category(c: &FinCat) -> Result<String, TextError> {
    check_word(c.name(), "category")?;
    let mut seen = HashSet::new();
    for o in 0..c.n_objects() {
        let l = c.object_label(o);
        check_word(&l, "object")?;
        if !seen.insert(l.clone()) {
            return Err(TextError::Unsupported(format!("repeated object label `{}` in {}", l, c.name())));
        }
    }
    let mut arrows = HashSet::new();
    for (i, a) in c.arrows().iter().enumerate() {
        check_word(&a.label, "arrow")?;
        let expected = c.is_identity(i) && c.id(a.src) == i;
        if expected != (a.label == format!("id_{}", c.object_label(a.src))) || !arrows.insert(a.label.clone()) {
            return Err(TextError::Unsupported(format!("arrow label `{}` in {}", a.label, c.name())));
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "category {}", c.name());
    let labels: Vec<String> = (0..c.n_objects()).map(|o| c.object_label(o)).collect();
    let _ = writeln!(s, "objects {}", labels.join(" "));
    let plain: Vec<usize> = (0..c.n_arrows()).filter(|&i| !c.is_identity(i)).collect();
    for &i in &plain {
        let a = c.arrow(i);
        let _ = writeln!(s, "arrow {} {} {}", a.label, labels[a.src], labels[a.dst]);
    }
    for &f in &plain {
        for &g in &plain {
            if let Some(h) = c.compose(g, f) {
                let _ = writeln!(s, "compose {} {} {}", c.arrow(g).label, c.arrow(f).label, c.arrow(h).label);
            }
        }
    }
    s.push_str("end\n");
    Ok(s)
}

/// Writes one setoid block; only relational, free and tabular setoids have
/// a text form.
pub fn dump_setoid(x: &Setoid) -> Result<String, TextError> {
    check_word(x.name(), "setoid")?;
    let mut s = String::new();
    let n = x.size0();
    if let Some(pairs) = x.relation() {
        let _ = writeln!(s, "setoid {} relation {}", x.name(), n);
        for (a, b) in pairs.into_iter().filter(|(a, b)| a != b) {
            let _ = writeln!(s, "pair {} {}", a, b);
        }
    } else if let Some(e) = x.edges() {
        let _ = writeln!(s, "setoid {} free {}", x.name(), n);
        for (a, b) in e.edges {
            let _ = writeln!(s, "edge {} {}", a, b);
        }
    } else if let Some(t) = x.as_tabular() {
        let _ = writeln!(s, "setoid {} table {}", x.name(), n);
        for w in 0..t.s.len() {
            let _ = writeln!(s, "wit {} {} {}", t.s[w], t.t[w], t.v[w]);
        }
        for (p, w) in t.r.iter().enumerate() {
            let _ = writeln!(s, "refl {} {}", p, w);
        }
        let m: BTreeMap<_, _> = t.m.iter().collect();
        for ((a, b), c) in m {
            let _ = writeln!(s, "mult {} {} {}", a, b, c);
        }
    } else {
        return Err(TextError::Unsupported(format!("{} setoid `{}`", x.kind(), x.name())));
    }
    s.push_str("end\n");
    Ok(s)
}

fn row(xs: &[usize]) -> String {
    xs.iter().map(|x| format!(" {}", x)).collect()
}

/// Writes a whole corpus. Setoids used by diagrams must be in the corpus
/// under their own names.
pub fn dump_corpus(c: &Corpus) -> Result<String, TextError> {
    let mut s = String::new();
    for n in &c.notes {
        let _ = writeln!(s, "note {}\nend", n);
    }
    for shape in c.shapes.values() {
        s.push_str(&dump_category(shape)?);
    }
    for x in c.setoids.values() {
        s.push_str(&dump_setoid(x)?);
    }
    for (name, u) in &c.functors {
        check_word(name, "functor")?;
        let _ = writeln!(s, "functor {} {} {}", name, u.dom.name(), u.cod.name());
        for o in 0..u.dom.n_objects() {
            let _ = writeln!(s, "obj {} {}", u.dom.object_label(o), u.cod.object_label(u.obj[o]));
        }
        for i in (0..u.dom.n_arrows()).filter(|&i| !u.dom.is_identity(i)) {
            let _ = writeln!(s, "arr {} {}", u.dom.arrow(i).label, u.cod.arrow(u.arr[i]).label);
        }
        s.push_str("end\n");
    }
    for (name, d) in &c.diagrams {
        check_word(name, "diagram")?;
        let _ = writeln!(s, "diagram {} {}", name, d.shape.name());
        for (o, x) in d.objs.iter().enumerate() {
            if !c.setoids.get(x.name()).is_some_and(|y| y.same(x)) {
                return Err(TextError::Unsupported(format!("diagram `{}` over unnamed setoid `{}`", name, x.name())));
            }
            let _ = writeln!(s, "at {} {}", d.shape.object_label(o), x.name());
        }
        for (i, f) in d.arrs.iter().enumerate() {
            let _ = writeln!(s, "map {}{}", d.shape.arrow(i).label, row(&f.f0));
        }
        s.push_str("end\n");
    }
    for (name, f) in &c.morphisms {
        check_word(name, "morphism")?;
        let _ = writeln!(s, "morphism {} {} {}", name, f.dom.name, f.cod.name);
        for (o, g) in f.comps.iter().enumerate() {
            let _ = writeln!(s, "at {}{}", f.dom.shape.object_label(o), row(&g.f0));
        }
        s.push_str("end\n");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_corpus_round_trips() {
        let c = Corpus::default_corpus();
        let text = dump_corpus(&c).unwrap();
        let back = parse_corpus(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(dump_corpus(&back).unwrap(), text);
        for (n, s) in &c.shapes {
            assert_eq!(**s, *back.shapes[n], "{}", n);
        }
        for (n, x) in &c.setoids {
            let y = &back.setoids[n];
            assert_eq!(x.relation(), y.relation());
            assert_eq!(x.edges(), y.edges());
            assert_eq!(x.as_tabular(), y.as_tabular());
        }
        for (n, d) in &c.diagrams {
            let e = &back.diagrams[n];
            let f0 = |d: &crate::coherent::CoherentDiagram| d.arrs.iter().map(|f| f.f0.clone()).collect::<Vec<_>>();
            assert_eq!(f0(d), f0(e), "{}", n);
        }
        for (n, f) in &c.functors {
            assert!(f.same_as(&back.functors[n]), "{}", n);
        }
        assert_eq!(c.morphisms.keys().collect::<Vec<_>>(), back.morphisms.keys().collect::<Vec<_>>());
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(parse_corpus(""), Err(TextError::Empty)));
        assert!(matches!(parse_corpus("# nothing\n\n"), Err(TextError::Empty)));
    }

    #[test]
    fn corrupted_composite_names_the_pair() {
        let text = dump_category(&crate::fincat::square()).unwrap();
        assert!(text.contains("compose v1 h0 d"));
        let bad = text.replace("compose v1 h0 d", "compose v1 h0 h0");
        let err = parse_corpus(&bad).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, TextError::Category { .. }), "{}", msg);
        assert!(msg.contains("v1") && msg.contains("h0"), "{}", msg);
        let missing = text.replace("compose v1 h0 d\n", "");
        let msg = parse_corpus(&missing).unwrap_err().to_string();
        assert!(msg.contains("missing") && msg.contains("v1 ∘ h0"), "{}", msg);
    }

    #[test]
    fn associativity_failure_names_the_triple() {
        // 0 -a-> 1 -b-> 2 -c-> 3 with (c b) a ≠ c (b a)
        let text = "category BAD\nobjects 0 1 2 3\narrow a 0 1\narrow b 1 2\narrow c 2 3\n\
                    arrow ba 0 2\narrow cb 1 3\narrow x 0 3\narrow y 0 3\n\
                    compose b a ba\ncompose c b cb\ncompose c ba x\ncompose cb a y\nend\n";
        let msg = parse_corpus(text).unwrap_err().to_string();
        assert!(msg.contains("associativity") && msg.contains("(c, b, a)"), "{}", msg);
    }

    #[test]
    fn malformed_blocks_are_rejected() {
        assert!(parse_corpus("category A\nobjects 0\n").is_err());
        assert!(parse_corpus("end\n").is_err());
        assert!(parse_corpus("setoid X relation 2\npair 0 1\nend\n").is_err());
        assert!(parse_corpus("setoid X relation 2\npair 0 1\npair 1 0\nend\n").is_ok());
        assert!(parse_corpus("setoid X free 2\nedge 0 5\nend\n").is_err());
        assert!(parse_corpus("diagram D NOPE\nend\n").is_err());
        let line = match parse_corpus("category A\nobjects 0\narrow f 0 9\nend\n") {
            Err(TextError::Syntax { line, .. }) => line,
            other => panic!("{:?}", other.map(|_| ())),
        };
        assert_eq!(line, 3);
    }

    #[test]
    fn tabular_setoid_round_trips() {
        let x = crate::setoid::tab2();
        let text = dump_setoid(&x).unwrap();
        let c = parse_corpus(&text).unwrap();
        assert_eq!(c.setoids["TAB2"].as_tabular(), x.as_tabular());
        let broken = text.replace("mult 2 3 0", "mult 2 3 1");
        assert!(parse_corpus(&broken).is_err());
    }
}
