use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use exder::corpus::Corpus;
use exder::fincat::{discrete, Functor};
use exder::kan::{colimit_over, limit_over};
use exder::setoid::{free_setoid, relational_from_blocks, Setoid};
use exder::text::{dump_corpus, parse_corpus};
use exder::truncation::{equiv_instances, locality_chain, oracle_agreement, Theory};

fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut m: HashMap<usize, Vec<usize>> = HashMap::new();
    for (x, &l) in labels.iter().enumerate() {
        m.entry(l).or_default().push(x);
    }
    m.into_values().collect()
}

fn partition() -> impl Strategy<Value = Vec<usize>> {
    (1usize..6).prop_flat_map(|n| proptest::collection::vec(0..n, n))
}

fn same_partition(x: &Setoid, labels: &[usize]) -> bool {
    let q = x.quotient();
    let n = labels.len();
    let distinct: BTreeSet<usize> = labels.iter().copied().collect();
    q.size == distinct.len() && (0..n).all(|a| (0..n).all(|b| (q.class[a] == q.class[b]) == (labels[a] == labels[b])))
}

/// Components of the undirected graph by repeated relabelling.
fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(a, b) in edges {
            let m = label[a].min(label[b]);
            for x in [a, b] {
                if label[x] != m {
                    label[x] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

fn discrete_corpus(k: usize, m: usize, obj: &[usize], labels: &[usize]) -> Corpus {
    let mut c = Corpus::new();
    let (dk, dm) = (discrete(k), discrete(m));
    c.add_shape(dk.clone()).unwrap();
    if m != k {
        c.add_shape(dm.clone()).unwrap();
    }
    let dm = if m == k { dk.clone() } else { dm };
    let arr = (0..k).map(|i| dm.id(obj[dk.src(i)])).collect();
    c.add_functor("U", Functor::new(dk.clone(), dm, obj.to_vec(), arr).unwrap()).unwrap();
    c.add_setoid(relational_from_blocks("S", labels.len(), &blocks_of(labels)).unwrap()).unwrap();
    c.add_constant("K", dk.name(), "S").unwrap();
    c
}

fn discrete_functor() -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (1usize..4, 1usize..4).prop_flat_map(|(k, m)| (Just(k), Just(m), proptest::collection::vec(0..m, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relational_quotient_is_the_partition(labels in partition()) {
        let x = relational_from_blocks("S", labels.len(), &blocks_of(&labels)).unwrap();
        prop_assert!(same_partition(&x, &labels));
    }

    #[test]
    fn free_quotient_is_graph_components(
        (n, edges) in (1usize..6).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..6)))
    ) {
        let x = free_setoid("F", n, &edges).unwrap();
        prop_assert!(same_partition(&x, &components(n, &edges)));
    }

    #[test]
    fn constant_diagrams_over_discrete_shapes(k in 1usize..4, labels in partition()) {
        let c = discrete_corpus(k, k, &vec![0; k], &labels);
        let x = c.diagram("K").unwrap();
        let classes = labels.iter().collect::<BTreeSet<_>>().len();
        prop_assert_eq!(colimit_over(x).setoid.quotient().size, k * classes);
        prop_assert_eq!(limit_over(x).setoid.quotient().size, classes.pow(k as u32));
    }

    #[test]
    fn text_round_trip((k, m, obj) in discrete_functor(), labels in partition()) {
        let c = discrete_corpus(k, m, &obj, &labels);
        let text = dump_corpus(&c).unwrap();
        let back = parse_corpus(&text).unwrap();
        prop_assert_eq!(dump_corpus(&back).unwrap(), text);
        prop_assert!(same_partition(back.setoid("S").unwrap(), &labels));
    }

    #[test]
    fn checks_agree_with_oracle_and_locality((k, m, obj) in discrete_functor()) {
        let c = discrete_corpus(k, m, &obj, &[0]);
        for (n, p) in equiv_instances(&c) {
            let (ok, d) = locality_chain(&p);
            prop_assert!(ok, "{}: {}", n, d);
            for t in Theory::ALL {
                let (ok, d) = oracle_agreement(&c, t, &p);
                prop_assert!(ok, "{} {}: {}", t, n, d);
            }
        }
    }
}
